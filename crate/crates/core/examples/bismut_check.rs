use treelab_core::excursion::pitman_path;
use treelab_core::{BranchingMechanism, SeedSpec};

fn main() {
    // pointed ball mass at a level-random vertex, via the two-sided path
    // decomposition: two independent killed paths from level a, each
    // contributing the occupation of {a + B - 2I <= eps}.
    let eps = 1.0;
    let a = 1.0;
    let dx = 2e-4;
    let n = 4000;
    let seed = SeedSpec::new(0, 7 << 32);
    let mut masses = Vec::with_capacity(n);
    for i in 0..n as u64 {
        let mut total = 0.0;
        for leg in 0..2 {
            // occupation of {R <= eps} only accrues while the running min is
            // still nonnegative, so a finite horizon loses almost nothing
            let p = pitman_path(a, 400.0, dx, seed.substream(2 * i + leg)).unwrap();
            total += dx * p.bessel.iter().filter(|&&r| r <= eps).count() as f64;
        }
        masses.push(total);
    }
    let mean = masses.iter().sum::<f64>() / n as f64;
    println!("E[m(B(sigma,1))] = {mean:.4}   (eps^2 = 1.0)");
    let unit = BranchingMechanism::stable(2.0).unwrap();
    for lam in [0.5, 1.0, 2.0] {
        let l = masses.iter().map(|m| (-lam * m).exp()).sum::<f64>() / n as f64;
        let target = unit.pointed_ball_laplace(lam, eps).unwrap();
        println!("lambda {lam}: E e^-lm = {l:.4}   analytic = {target:.4}");
    }
}
