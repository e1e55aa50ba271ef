//! Statistical helpers for the verification suite: reference CDFs,
//! Kolmogorov-Smirnov distances, error bars, and tail-slope fits.

use rand::Rng;

/// Error function, Abramowitz-Stegun 7.1.26 rational approximation
/// (absolute error below 1.5e-7, far under every tolerance used here).
pub fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.327_591_1 * x);
    let poly = t
        * (0.254_829_592
            + t * (-0.284_496_736 + t * (1.421_413_741 + t * (-1.453_152_027 + t * 1.061_405_429))));
    sign * (1.0 - poly * (-x * x).exp())
}

pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// CDF of the modulus of a standard 3-d Gaussian vector (the time-1 marginal
/// of the three-dimensional radial process from 0):
/// `F(x) = erf(x/√2) - √(2/π)·x·exp(-x²/2)`.
pub fn bessel3_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    erf(x / std::f64::consts::SQRT_2)
        - (2.0 / std::f64::consts::PI).sqrt() * x * (-0.5 * x * x).exp()
}

pub fn exponential_cdf(x: f64, mean: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -f64::exp_m1(-x / mean)
    }
}

/// One-sample KS statistic against a reference CDF; `sorted` ascending.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Two-sample KS statistic; both inputs ascending. Ties advance both
/// empirical CDFs together.
pub fn ks_two_sample_statistic(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut d = 0.0f64;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Complement of the Kolmogorov distribution CDF (power series split as in
/// the usual numerical treatments).
fn complement_ks_cdf(z: f64) -> f64 {
    if z <= 0.0 {
        return 1.0;
    }
    if z < 1.18 {
        let factor = (2.0 * std::f64::consts::PI).sqrt() / z;
        let t = (-std::f64::consts::PI * std::f64::consts::PI / (8.0 * z * z)).exp();
        1.0 - factor * (t + t.powi(9) + t.powi(25) + t.powi(49))
    } else {
        let t = (-2.0 * z * z).exp();
        2.0 * (t - t.powi(4) + t.powi(9))
    }
}

/// Asymptotic p-value for a KS statistic at effective sample size `n_eff`
/// (for two samples, `n_eff = n₁n₂/(n₁+n₂)`).
pub fn ks_p_value(d: f64, n_eff: f64) -> f64 {
    let sq = n_eff.sqrt();
    complement_ks_cdf((sq + 0.12 + 0.11 / sq) * d)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Standard error of the mean by batch means (default ≥ 30 batches).
pub fn batch_means_se(values: &[f64], n_batches: usize) -> f64 {
    let b = n_batches.max(2).min(values.len());
    let per = values.len() / b;
    if per == 0 {
        return f64::NAN;
    }
    let means: Vec<f64> = (0..b)
        .map(|k| mean(&values[k * per..(k + 1) * per]))
        .collect();
    let m = mean(&means);
    let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (b - 1) as f64;
    (var / b as f64).sqrt()
}

/// Bootstrap standard error of the sample mean.
pub fn bootstrap_se<R: Rng>(values: &[f64], n_resamples: usize, rng: &mut R) -> f64 {
    let n = values.len();
    let mut means = Vec::with_capacity(n_resamples);
    for _ in 0..n_resamples {
        let mut s = 0.0;
        for _ in 0..n {
            s += values[rng.gen_range(0..n)];
        }
        means.push(s / n as f64);
    }
    let m = mean(&means);
    (means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n_resamples - 1) as f64).sqrt()
}

/// Least-squares slope of `log(survival)` against `log(value)` over the top
/// `top_frac` of the sample; the tail index of a power-law tail comes out as
/// the (negative) slope.
pub fn log_log_tail_slope(values: &[f64], top_frac: f64) -> f64 {
    let mut v: Vec<f64> = values.iter().cloned().filter(|x| *x > 0.0).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    let m = ((n as f64 * top_frac).ceil() as usize).clamp(5, n.saturating_sub(1));
    let mut xs = Vec::with_capacity(m);
    let mut ys = Vec::with_capacity(m);
    for j in (n - m)..(n - 1) {
        // survival just right of v[j] is (n - 1 - j)/n
        xs.push(v[j].ln());
        ys.push(((n - 1 - j) as f64 / n as f64).ln());
    }
    let mx = mean(&xs);
    let my = mean(&ys);
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Sample median (by copy-and-sort; fine at verification sample sizes).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::SeedSpec;

    #[test]
    fn erf_reference_points() {
        // the rational approximation carries ~1.5e-7 absolute error
        assert!(erf(0.0).abs() < 5e-7);
        assert!((erf(1.0) - 0.842_700_792_9).abs() < 5e-7);
        assert!((erf(-1.0) + 0.842_700_792_9).abs() < 5e-7);
        assert!((erf(3.0) - 0.999_977_909_5).abs() < 5e-7);
    }

    #[test]
    fn bessel3_cdf_shape() {
        assert_eq!(bessel3_cdf(-1.0), 0.0);
        assert!(bessel3_cdf(0.5) > 0.0);
        assert!((bessel3_cdf(50.0) - 1.0).abs() < 1e-12);
        // density integrates to the cdf: spot-check via numeric derivative
        let x = 1.3f64;
        let h = 1e-5;
        let density = (bessel3_cdf(x + h) - bessel3_cdf(x - h)) / (2.0 * h);
        let expected = (2.0 / std::f64::consts::PI).sqrt() * x * x * (-0.5 * x * x).exp();
        assert!((density - expected).abs() < 1e-5);
    }

    #[test]
    fn ks_detects_uniform_vs_shifted() {
        let n = 2000;
        let unif: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic(&unif, |x| x);
        assert!(d < 0.001);
        let d = ks_statistic(&unif, |x| x.powi(2));
        assert!(d > 0.2);
    }

    #[test]
    fn two_sample_ks_on_identical_samples() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(ks_two_sample_statistic(&a, &a), 0.0);
        let b: Vec<f64> = (0..100).map(|i| i as f64 + 50.0).collect();
        assert!(ks_two_sample_statistic(&a, &b) >= 0.5);
    }

    #[test]
    fn ks_p_value_calibration() {
        // the 5% critical value at large n is ~1.36/√n
        let p = ks_p_value(1.36 / 100.0, 10_000.0);
        assert!((p - 0.05).abs() < 0.01, "p = {p}");
        assert!(ks_p_value(0.5, 10_000.0) < 1e-12);
    }

    #[test]
    fn batch_and_bootstrap_se_agree_on_iid() {
        let mut rng = SeedSpec::new(3, 0).rng();
        let values: Vec<f64> = (0..3000).map(|_| rng.gen::<f64>()).collect();
        let se_b = batch_means_se(&values, 30);
        let se_boot = bootstrap_se(&values, 400, &mut rng);
        let exact = (1.0f64 / 12.0 / 3000.0).sqrt();
        assert!((se_b - exact).abs() / exact < 0.35, "batch {se_b} vs {exact}");
        assert!(
            (se_b - se_boot).abs() / se_boot < 0.2,
            "batch {se_b} vs bootstrap {se_boot}"
        );
    }

    #[test]
    fn tail_slope_recovers_pareto_index() {
        // Pareto(index 1.5) via inverse transform on a deterministic grid
        let n = 20_000;
        let values: Vec<f64> = (0..n)
            .map(|i| {
                let u = (i as f64 + 0.5) / n as f64;
                (1.0 - u).powf(-1.0 / 1.5)
            })
            .collect();
        let slope = log_log_tail_slope(&values, 0.1);
        assert!((slope + 1.5).abs() < 0.05, "slope = {slope}");
    }

    #[test]
    fn median_odd_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
