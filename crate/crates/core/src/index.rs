//! Multi-index arithmetic over integer boxes.

/// Inclusive integer box `lo[j] ..= hi[j]` on every axis, iterated in
/// row-major order (last axis fastest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiRange {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl MultiRange {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len(), "bounds must have equal length");
        MultiRange { lo, hi }
    }

    /// The cube `lo ..= hi` in `dim` dimensions.
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Self {
        MultiRange::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l + 1) as usize)
            .product()
    }

    pub fn contains(&self, idx: &[i64]) -> bool {
        idx.len() == self.dim()
            && idx
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(i, (l, h))| l <= i && i <= h)
    }

    /// Row-major linear position of `idx` inside the box.
    pub fn linear(&self, idx: &[i64]) -> usize {
        let mut pos = 0usize;
        for j in 0..self.dim() {
            let extent = (self.hi[j] - self.lo[j] + 1) as usize;
            pos = pos * extent + (idx[j] - self.lo[j]) as usize;
        }
        pos
    }

    /// Calls `visit` for every index of the box in row-major order.
    pub fn for_each(&self, mut visit: impl FnMut(&[i64])) {
        if self.is_empty() {
            return;
        }
        let m = self.dim();
        let mut idx = self.lo.clone();
        if m == 0 {
            visit(&idx);
            return;
        }
        loop {
            visit(&idx);
            let mut axis = m;
            loop {
                if axis == 0 {
                    return;
                }
                axis -= 1;
                if idx[axis] < self.hi[axis] {
                    idx[axis] += 1;
                    break;
                }
                idx[axis] = self.lo[axis];
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<i64>> {
        let mut all = Vec::with_capacity(self.len());
        self.for_each(|i| all.push(i.to_vec()));
        all.into_iter()
    }
}

/// Number of bits needed to represent `n`: the dyadic block index of a
/// frequency with `|k| = n` (0 for `n = 0`).
#[inline]
pub fn bit_length(n: u64) -> u32 {
    64 - n.leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_order_and_linear_positions_agree() {
        let r = MultiRange::new(vec![-1, 0], vec![1, 2]);
        let all: Vec<_> = r.iter().collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![-1, 0]);
        assert_eq!(all[1], vec![-1, 1]);
        assert_eq!(all[8], vec![1, 2]);
        for (pos, idx) in all.iter().enumerate() {
            assert_eq!(r.linear(idx), pos);
        }
    }

    #[test]
    fn empty_ranges_visit_nothing() {
        let r = MultiRange::new(vec![2], vec![1]);
        assert!(r.is_empty());
        assert_eq!(r.len(), 0);
        assert_eq!(r.iter().count(), 0);
    }

    #[test]
    fn bit_length_matches_dyadic_blocks() {
        assert_eq!(bit_length(0), 0);
        assert_eq!(bit_length(1), 1);
        assert_eq!(bit_length(2), 2);
        assert_eq!(bit_length(3), 2);
        assert_eq!(bit_length(4), 3);
        assert_eq!(bit_length(127), 7);
        assert_eq!(bit_length(128), 8);
    }
}
