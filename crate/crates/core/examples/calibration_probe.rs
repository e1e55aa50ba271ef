//! Development probe: measures the statistics behind the delicate
//! verification targets at acceptance sizes, to pin sizes/seeds before the
//! acceptance suite is frozen. Not part of the test suite.

use std::time::Instant;
use treelab_core::verify::*;
use treelab_core::SeedSpec;

fn show(tag: &str, reports: &[ExperimentReport]) {
    for r in reports {
        println!(
            "[{tag}] {:<34} {:>4} stat {:+.6} target {:+.6} tol {:.3e} unc {:.3e}",
            r.name,
            if r.passed() { "PASS" } else { "FAIL" },
            r.statistic,
            r.target,
            r.tolerance,
            r.uncertainty
        );
        for n in &r.notes {
            println!("        note: {n}");
        }
    }
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "all".to_string());
    let seed = |k: u64| SeedSpec::new(0, k << 32);

    if which == "all" || which == "pitman" {
        let t0 = Instant::now();
        let r = verify_pitman(100_000, 1e-3, seed(1)).unwrap();
        show("pitman", &r);
        println!("        runtime {:?}", t0.elapsed());
    }
    if which == "all" || which == "down" {
        let t0 = Instant::now();
        let r = verify_downcrossing_exponential(1.0, 0.25, 10_000, 1e-3, seed(2)).unwrap();
        show("down", &r);
        println!("        runtime {:?}", t0.elapsed());
    }
    if which == "all" || which == "rk" {
        let t0 = Instant::now();
        let r = verify_ray_knight(2.0, 1.0, 1.0, 1.0, 200, 2000, seed(3)).unwrap();
        show("rk", &r);
        println!("        e^(-2/3) = {:.6}, runtime {:?}", (-2.0f64 / 3.0).exp(), t0.elapsed());
    }
    if which == "all" || which == "cross" {
        let t0 = Instant::now();
        let r = verify_crossing_identity(20, 10_000, 1_000_000, seed(4)).unwrap();
        show("cross", &r);
        println!("        runtime {:?}", t0.elapsed());
    }
    if which == "all" || which == "pb" {
        for (alpha, n_scale) in [(1.3, 32u32), (1.5, 100), (1.8, 400), (2.0, 200)] {
            let t0 = Instant::now();
            let p = PointedBallParams {
                eps: 1.0,
                n_trees: 1000,
                n_points: 1000,
                n_scale,
                stride: 4,
                max_attempts: 200_000,
                max_vertices: 20_000_000,
            };
            match verify_pointed_ball_law(alpha, &p, seed(5)) {
                Ok(r) => {
                    show(&format!("pb a={alpha}"), &r);
                    println!("        runtime {:?}", t0.elapsed());
                }
                Err(e) => println!("[pb a={alpha}] ERROR: {e}"),
            }
        }
    }
    if which == "all" || which == "lb" {
        for (n_scale, trees) in [(100u32, 400usize), (400, 150)] {
            let t0 = Instant::now();
            let p = LevelBallParams {
                lambda: 1.0,
                eps: 1.0,
                n_trees: trees,
                n_scale,
                bias_scale: None,
                max_attempts: 200_000,
                max_vertices: 20_000_000,
            };
            match verify_level_ball_law(1.5, &p, seed(6)) {
                Ok(r) => {
                    show(&format!("lb n={n_scale}"), &r);
                    println!("        target 0.512, runtime {:?}", t0.elapsed());
                }
                Err(e) => println!("[lb n={n_scale}] ERROR: {e}"),
            }
        }
    }
    if which == "all" || which == "sm" {
        let t0 = Instant::now();
        let r = verify_small_mass_tail(
            2.0,
            &[0.5, 2.0, 5.0],
            1e6,
            400,
            200,
            200_000,
            20_000_000,
            seed(7),
        )
        .unwrap();
        show("sm", &r);
        println!("        runtime {:?}", t0.elapsed());
    }
    if which == "all" || which == "ct" {
        let t0 = Instant::now();
        let r = verify_ct_occupation(48, 0.02, seed(8)).unwrap();
        show("ct", &r);
        println!("        runtime {:?}", t0.elapsed());
    }
}
