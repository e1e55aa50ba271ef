//! Sparse-table range-minimum index: O(n log n) construction, O(1) queries.
//!
//! Stores argmin indices (u32) per dyadic level, which halves the footprint
//! versus storing values and keeps ties resolved to the leftmost position.

#[derive(Debug, Clone)]
pub struct SparseTable {
    /// level j holds argmins of windows of length 2^j, row-major
    levels: Vec<Vec<u32>>,
}

impl SparseTable {
    pub fn new(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n >= 1 && n <= u32::MAX as usize);
        let log = if n == 1 {
            0
        } else {
            (usize::BITS - 1 - (n - 1).leading_zeros()) as usize + 1
        };
        let mut levels: Vec<Vec<u32>> = Vec::with_capacity(log.max(1));
        levels.push((0..n as u32).collect());
        let mut j = 1;
        while (1usize << j) <= n {
            let w = 1usize << j;
            let prev = &levels[j - 1];
            let mut cur = Vec::with_capacity(n - w + 1);
            for i in 0..=(n - w) {
                let a = prev[i];
                let b = prev[i + w / 2];
                cur.push(if values[a as usize] <= values[b as usize] {
                    a
                } else {
                    b
                });
            }
            levels.push(cur);
            j += 1;
        }
        Self { levels }
    }

    /// Index of the minimum value on the inclusive range `[l, r]`.
    #[inline]
    pub fn argmin(&self, values: &[f64], l: usize, r: usize) -> usize {
        debug_assert!(l <= r && r < values.len());
        if l == r {
            return l;
        }
        let k = (usize::BITS - 1 - (r - l + 1).leading_zeros()) as usize;
        let a = self.levels[k][l];
        let b = self.levels[k][r + 1 - (1 << k)];
        if values[a as usize] <= values[b as usize] {
            a as usize
        } else {
            b as usize
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    #[test]
    fn matches_linear_scan_on_random_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let values: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>()).collect();
        let table = SparseTable::new(&values);
        for _ in 0..1000 {
            let a = rng.gen_range(0..values.len());
            let b = rng.gen_range(0..values.len());
            let (l, r) = (a.min(b), a.max(b));
            let got = values[table.argmin(&values, l, r)];
            let want = values[l..=r].iter().cloned().fold(f64::INFINITY, f64::min);
            assert_eq!(got, want);
        }
    }

    #[test]
    fn tent_queries() {
        let values = [0.0, 1.0, 0.0];
        let t = SparseTable::new(&values);
        assert_eq!(values[t.argmin(&values, 0, 2)], 0.0);
        assert_eq!(values[t.argmin(&values, 1, 1)], 1.0);
    }

    #[test]
    fn single_element() {
        let values = [3.0];
        let t = SparseTable::new(&values);
        assert_eq!(t.argmin(&values, 0, 0), 0);
    }
}
