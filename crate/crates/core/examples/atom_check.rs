use treelab_core::excursion::{canonical_offspring_law, gw_tree_conditioned_height, contour_path, GwBudget};
use treelab_core::tree::level_set_scan;
use treelab_core::{BranchingMechanism, SeedSpec};

fn main() {
    let alpha = 1.5f64;
    let n: u32 = 200;
    let s_frac = 0.1f64;
    let law = canonical_offspring_law(alpha).unwrap();
    let unit = BranchingMechanism::stable(alpha).unwrap();
    let budget = GwBudget { max_vertices: 20_000_000, max_attempts: 200_000 };
    let seed = SeedSpec::new(0, 11 << 32);
    let reach_depth = ((1.0 + s_frac) * n as f64 - 0.5).ceil() as u32;
    let mut direct_total = 0u64;
    let mut scan_total = 0u64;
    let mut zn_total = 0u64;
    let trees = 60;
    for i in 0..trees {
        let s = gw_tree_conditioned_height(&law, n, budget, seed.substream(i)).unwrap();
        let tree = &s.tree;
        // direct count: depth-n vertices whose subtree reaches reach_depth.
        // walk vertices in reverse preorder, propagating max subtree depth.
        let len = tree.len();
        let mut maxd: Vec<u32> = tree.depths().to_vec();
        for v in (1..len).rev() {
            let p = tree.parent()[v] as usize;
            let m = maxd[v];
            if m > maxd[p] {
                maxd[p] = m;
            }
        }
        let direct = (0..len)
            .filter(|&v| tree.depths()[v] == n && maxd[v] >= reach_depth)
            .count() as u64;
        let zn = (0..len).filter(|&v| tree.depths()[v] == n).count() as u64;
        // scan count on the contour
        let path = contour_path(tree, 1.0 / n as f64, 1.0).unwrap();
        let atoms = level_set_scan(&path, &unit, 1.0 - 0.5 / n as f64, s_frac).unwrap();
        direct_total += direct;
        scan_total += atoms.len() as u64;
        zn_total += zn;
    }
    println!("trees {trees}: direct atoms {direct_total}, scan atoms {scan_total}, Z_n total {zn_total}");
    println!("expected atoms/tree ~ {:.1}, direct {:.1}, scan {:.1}",
        (s_frac as f64).powf(-1.0 / (alpha - 1.0)),
        direct_total as f64 / trees as f64,
        scan_total as f64 / trees as f64);
}
