//! Exhaustive enumeration of simple spanning trees of `K(P)` and of all
//! labelled spanning trees of `K_n`.
//!
//! Both share one inclusion/exclusion search over edges in lexicographic
//! order. Including an edge first makes the output come out already in
//! canonical order.

use thiserror::Error;

use crate::geometry::{PointSet, MAX_POINTS};
use crate::tree::{all_pairs, edge_count, Sst, UnionFind};

/// Default cap on the number of trees a single enumeration may produce.
pub const DEFAULT_MAX_SSTS: usize = 200_000;

/// Default largest `n` accepted by [`enumerate_trees_kn`].
pub const DEFAULT_MAX_KN: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("enumeration needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("n = {n} is outside the allowed range 3..={max}")]
    SizeOutOfRange { n: usize, max: usize },
    #[error("tree count exceeded the cap of {0}")]
    CapExceeded(usize),
}

/// True iff `edges` form a spanning tree of the point set and no two
/// vertex-disjoint edges cross.
pub fn is_simple_tree(edges: &[(usize, usize)], points: &PointSet) -> bool {
    let n = points.len();
    if n == 0 || edges.len() + 1 != n {
        return false;
    }
    if edges.iter().any(|&(a, b)| a == b || a >= n || b >= n) {
        return false;
    }
    let mut uf = UnionFind::new(n);
    if !edges.iter().all(|&(a, b)| uf.union(a, b)) {
        return false;
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            let disjoint = a != c && a != d && b != c && b != d;
            if disjoint && points.cross_unchecked(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// For each edge bit, the mask of edges that properly cross it.
pub fn crossing_masks(points: &PointSet) -> Vec<u64> {
    let n = points.len();
    let pairs = all_pairs(n);
    let mut masks = vec![0u64; pairs.len()];
    for (e, &(a, b)) in pairs.iter().enumerate() {
        for (f, &(c, d)) in pairs.iter().enumerate().skip(e + 1) {
            if a != c && a != d && b != c && b != d && points.cross_unchecked(a, b, c, d) {
                masks[e] |= 1 << f;
                masks[f] |= 1 << e;
            }
        }
    }
    masks
}

/// All simple spanning trees of `K(P)` in canonical order.
pub fn enumerate_ssts(points: &PointSet, max_ssts: usize) -> Result<Vec<Sst>, EnumError> {
    let n = points.len();
    if n < 3 {
        return Err(EnumError::TooFewPoints(n));
    }
    let crossing = crossing_masks(points);
    SpanningSearch::new(n, crossing, max_ssts).run()
}

/// All `n^(n-2)` labelled spanning trees of `K_n` in canonical order.
pub fn enumerate_trees_kn(n: usize, max_n: usize) -> Result<Vec<Sst>, EnumError> {
    let max = max_n.min(MAX_POINTS);
    if !(3..=max).contains(&n) {
        return Err(EnumError::SizeOutOfRange { n, max });
    }
    SpanningSearch::new(n, vec![0; edge_count(n)], usize::MAX).run()
}

struct SpanningSearch {
    n: usize,
    pairs: Vec<(usize, usize)>,
    crossing: Vec<u64>,
    cap: usize,
    out: Vec<Sst>,
}

impl SpanningSearch {
    fn new(n: usize, crossing: Vec<u64>, cap: usize) -> Self {
        SpanningSearch { n, pairs: all_pairs(n), crossing, cap, out: Vec::new() }
    }

    fn run(mut self) -> Result<Vec<Sst>, EnumError> {
        let comp: Vec<u8> = (0..self.n as u8).collect();
        self.descend(0, 0, 0, &comp)?;
        debug_assert!(self.out.windows(2).all(|w| w[0] < w[1]));
        Ok(self.out)
    }

    /// `comp` holds a component label per vertex for the forest `chosen`;
    /// `blocked` collects edges crossing something already chosen.
    fn descend(&mut self, e: usize, chosen: u64, blocked: u64, comp: &[u8]) -> Result<(), EnumError> {
        let need = self.n - 1 - chosen.count_ones() as usize;
        if need == 0 {
            if self.out.len() >= self.cap {
                return Err(EnumError::CapExceeded(self.cap));
            }
            self.out.push(Sst::from_mask(self.n, chosen).expect("mask within K_n"));
            return Ok(());
        }
        if e == self.pairs.len() || !self.completable(e, blocked, comp) {
            return Ok(());
        }
        let (a, b) = self.pairs[e];
        let bit = 1u64 << e;
        if blocked & bit == 0 && comp[a] != comp[b] {
            let (from, to) = (comp[a], comp[b]);
            let merged: Vec<u8> = comp.iter().map(|&c| if c == from { to } else { c }).collect();
            self.descend(e + 1, chosen | bit, blocked | self.crossing[e], &merged)?;
        }
        self.descend(e + 1, chosen, blocked, comp)
    }

    /// Can the current forest still be joined into one tree using unblocked
    /// edges from `e` on?
    fn completable(&self, e: usize, blocked: u64, comp: &[u8]) -> bool {
        let mut uf = UnionFind::new(self.n);
        let mut groups = self.n;
        for v in 0..self.n {
            if uf.union(v, comp[v] as usize) {
                groups -= 1;
            }
        }
        for f in e..self.pairs.len() {
            if blocked >> f & 1 == 0 {
                let (a, b) = self.pairs[f];
                if uf.union(a, b) {
                    groups -= 1;
                    if groups == 1 {
                        return true;
                    }
                }
            }
        }
        groups == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn pts(v: &[(i64, i64)]) -> PointSet {
        PointSet::new(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn simple_tree_examples() {
        let tri = pts(&[(0, 0), (4, 0), (1, 3)]);
        assert!(is_simple_tree(&[(0, 1), (1, 2)], &tri));
        let sq = pts(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert!(!is_simple_tree(&[(0, 2), (1, 3), (0, 1)], &sq));
        assert!(!is_simple_tree(&[(0, 1), (1, 2)], &sq));
        assert!(is_simple_tree(&[(0, 1), (1, 2), (2, 3)], &sq));
        assert!(!is_simple_tree(&[(0, 1), (0, 1), (2, 3)], &sq));
    }

    #[test]
    fn ssts_of_small_sets() {
        let tri = pts(&[(0, 0), (4, 0), (1, 3)]);
        assert_eq!(enumerate_ssts(&tri, DEFAULT_MAX_SSTS).unwrap().len(), 3);
        let sq = pts(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(enumerate_ssts(&sq, DEFAULT_MAX_SSTS).unwrap().len(), 12);
        let tri_in = pts(&[(0, 0), (6, 0), (2, 5), (3, 2)]);
        assert_eq!(enumerate_ssts(&tri_in, DEFAULT_MAX_SSTS).unwrap().len(), 16);
    }

    #[test]
    fn cayley_counts() {
        assert_eq!(enumerate_trees_kn(3, DEFAULT_MAX_KN).unwrap().len(), 3);
        assert_eq!(enumerate_trees_kn(4, DEFAULT_MAX_KN).unwrap().len(), 16);
        assert_eq!(enumerate_trees_kn(5, DEFAULT_MAX_KN).unwrap().len(), 125);
        assert_eq!(enumerate_trees_kn(6, DEFAULT_MAX_KN).unwrap().len(), 1296);
    }

    #[test]
    fn size_guards() {
        assert_eq!(
            enumerate_trees_kn(7, DEFAULT_MAX_KN),
            Err(EnumError::SizeOutOfRange { n: 7, max: 6 })
        );
        assert_eq!(
            enumerate_trees_kn(2, DEFAULT_MAX_KN),
            Err(EnumError::SizeOutOfRange { n: 2, max: 6 })
        );
        let two = pts(&[(0, 0), (1, 0)]);
        assert_eq!(enumerate_ssts(&two, 10), Err(EnumError::TooFewPoints(2)));
    }

    #[test]
    fn cap_is_enforced() {
        let sq = pts(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(enumerate_ssts(&sq, 11), Err(EnumError::CapExceeded(11)));
        assert_eq!(enumerate_ssts(&sq, 12).unwrap().len(), 12);
    }

    #[test]
    fn output_is_sorted_and_simple() {
        let ps = pts(&[(0, 0), (9, 1), (7, 8), (1, 6), (4, 3)]);
        let trees = enumerate_ssts(&ps, DEFAULT_MAX_SSTS).unwrap();
        assert!(trees.windows(2).all(|w| w[0] < w[1]));
        for t in &trees {
            assert!(is_simple_tree(&t.edges(), &ps));
        }
    }
}
