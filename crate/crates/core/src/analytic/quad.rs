//! Adaptive Gauss-Kronrod quadrature and bracketed bisection.
//!
//! A 7-15 Gauss-Kronrod pair with recursive interval bisection. The error
//! estimate on a panel is |K15 - G7|; a panel is split until its estimate
//! falls under its share of the tolerance. All integrands in this crate are
//! smooth or have integrable endpoint behaviour already transformed away, so
//! the plain pair converges quickly.

/// Kronrod-15 abscissae on [0, 1] side of the symmetric rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod-15 weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_2,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss-7 weights, matching the odd-index entries of `XGK`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);

    let fc = f(mid);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let fsum = f(mid - dx) + f(mid + dx);
        k += WGK[i] * fsum;
        if i % 2 == 1 {
            g += WG[i / 2] * fsum;
        }
    }
    (k * half, (k - g).abs() * half.abs())
}

struct Panel {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // errors are finite and nonnegative; ties broken by left endpoint so
        // the splitting order (hence the f64 summation order) is total
        self.err
            .partial_cmp(&other.err)
            .unwrap()
            .then(self.a.partial_cmp(&other.a).unwrap())
    }
}

/// Hard cap on the panel count; generous for every integrand in this crate
/// (worst case are defining integrals evaluated within ~1e-13 of their
/// singular endpoint, which settle near ~300 panels).
const MAX_PANELS: usize = 4096;

/// Integrate `f` over `[a, b]` with absolute tolerance `tol`.
///
/// Globally adaptive: the panel with the largest error estimate is split
/// first, until the summed estimate meets `tol` (or a relative floor at f64
/// resolution) or the panel cap is reached.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let tol = tol.max(f64::MIN_POSITIVE);
    let (val, err) = gk15(&f, a, b);
    let mut heap = std::collections::BinaryHeap::with_capacity(64);
    heap.push(Panel { a, b, val, err });
    let mut total_val = val;
    let mut total_err = err;
    while total_err > tol.max(1e-14 * total_val.abs()) && heap.len() < MAX_PANELS {
        let worst = heap.pop().expect("nonempty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel at f64 resolution; keep it as-is
            let mut keep = worst;
            total_err -= keep.err;
            keep.err = 0.0;
            heap.push(keep);
            continue;
        }
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        total_val += lv + rv - worst.val;
        total_err += le + re - worst.err;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            val: lv,
            err: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            val: rv,
            err: re,
        });
    }
    // re-sum in a deterministic (left-to-right) order
    let mut panels = heap.into_vec();
    panels.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap());
    panels.iter().map(|p| p.val).sum()
}

/// Bisection for the root of a monotone function on a bracketing interval.
///
/// `f(lo)` and `f(hi)` must straddle zero. Runs until the bracket width is
/// below `1e-15 * max(1, |x|)` or 200 iterations, whichever comes first.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    debug_assert!(flo.signum() != f(hi).signum() || flo == 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= 1e-15 * mid.abs().max(1.0) {
            return mid;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
