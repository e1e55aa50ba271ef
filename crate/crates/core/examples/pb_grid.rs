use treelab_core::verify::*;
use treelab_core::SeedSpec;

fn main() {
    for (alpha, n_scale, eps) in [
        (1.3f64, 12u32, 1.0f64),
        (1.5, 16, 1.0),
        (1.5, 24, 1.0),
        (1.8, 50, 1.0),
        (1.8, 64, 1.0),
    ] {
        let p = PointedBallParams {
            eps,
            n_trees: 1000,
            n_points: 1000,
            n_scale,
            stride: 2,
            max_attempts: 400_000,
            max_vertices: 20_000_000,
        };
        let t0 = std::time::Instant::now();
        match verify_pointed_ball_law(alpha, &p, SeedSpec::new(0, 5 << 32)) {
            Ok(rs) => {
                print!("a={alpha} n={n_scale} eps={eps}: ");
                for r in &rs {
                    print!(
                        "{}={:.4}{} ",
                        r.name.rsplit('/').next().unwrap(),
                        r.statistic,
                        if r.passed() { "(P)" } else { "(F)" }
                    );
                }
                println!("[{:.0?}]", t0.elapsed());
            }
            Err(e) => println!("a={alpha} n={n_scale}: ERROR {e}"),
        }
    }
}
