use treelab_core::excursion::{canonical_offspring_law, contour_path, gw_tree_conditioned_height_truncated, GwBudget};
use treelab_core::tree::mass_ball_scan;
use treelab_core::{BranchingMechanism, SeedSpec};
use rand::Rng;

fn main() {
    let alpha = 2.0;
    let n: u32 = 200;
    let law = canonical_offspring_law(alpha).unwrap();
    let budget = GwBudget { max_vertices: 20_000_000, max_attempts: 200_000 };
    let seed = SeedSpec::new(0, 21 << 32);
    let factor = alpha.powf(1.0 / (alpha - 1.0));
    let depth_cap = (2.1 * n as f64).ceil() as u32;
    let eps_grid = [0.1f64, 0.4, 1.0];
    let mut sums = [0.0f64; 3];
    let mut count = 0u64;
    let mut rng = SeedSpec::new(0, 22 << 32).rng();
    for i in 0..600 {
        let s = gw_tree_conditioned_height_truncated(&law, n, Some(depth_cap), budget, seed.substream(i)).unwrap();
        let tree = s.tree;
        // uniform depth-n vertices: find first-visit contour times
        let verts: Vec<usize> = (0..tree.len()).filter(|&v| tree.depths()[v] == n).collect();
        if verts.is_empty() { continue; }
        let path = contour_path(&tree, 1.0 / n as f64, 0.5 / (n as f64 * n as f64)).unwrap();
        // first-visit time of preorder vertex v on the contour: reconstruct by
        // replaying the contour construction: first visit index of vertex k
        let depths = tree.depths();
        let mut first_visit = vec![0usize; tree.len()];
        let mut pos = 0usize; // contour index of the current vertex visit
        for v in 1..tree.len() {
            // steps from previous vertex: (d_prev - d_v + 2) pushes, last one is v
            let steps = depths[v - 1] as usize + 2 - depths[v] as usize;
            pos += steps;
            first_visit[v] = pos;
        }
        // pool a fixed fraction of depth-n vertices, so tree weight stays
        // proportional to Z_n as the pointed law requires
        let mut v_i = rng.gen_range(0..50usize.min(verts.len()));
        while v_i < verts.len() {
            let c = first_visit[verts[v_i]];
            for (j, &e) in eps_grid.iter().enumerate() {
                sums[j] += factor * mass_ball_scan(&path, c, e, 2);
            }
            count += 1;
            v_i += 50;
        }
    }
    for (j, &e) in eps_grid.iter().enumerate() {
        let m = sums[j] / count as f64;
        println!("eps {e:.1}: mean m* = {m:.4}  target {:.4}  ratio {:.3}", e * e, m / (e * e));
    }
}
