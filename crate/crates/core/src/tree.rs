//! Spanning trees as edge masks over the complete graph.
//!
//! Edges `(i, j)` with `i < j` are numbered in lexicographic order, so for
//! `n` points edge `(0, 1)` is bit 0 and `(n-2, n-1)` is bit `n(n-1)/2 - 1`.
//! With at most 11 points every edge set fits in a `u64`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::geometry::MAX_POINTS;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("n = {0} is outside the supported range 1..={MAX_POINTS}")]
    UnsupportedSize(usize),
    #[error("edge ({0}, {1}) is not a valid pair of distinct indices below n")]
    InvalidEdge(usize, usize),
    #[error("mask {mask:#x} has bits beyond the {} edges of K_{n}", edge_count(*n))]
    MaskOutOfRange { n: usize, mask: u64 },
    #[error("edge ({0}, {1}) listed twice")]
    RepeatedEdge(usize, usize),
}

/// Number of edges of the complete graph on `n` vertices.
pub const fn edge_count(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

/// Bit index of the edge `{i, j}` for `n` vertices.
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < n && i != j);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Inverse of [`edge_index`].
pub fn edge_pair(n: usize, mut index: usize) -> (usize, usize) {
    let mut i = 0;
    loop {
        let row = n - 1 - i;
        if index < row {
            return (i, i + 1 + index);
        }
        index -= row;
        i += 1;
    }
}

/// All pairs of the complete graph on `n` vertices in bit order.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(edge_count(n));
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// An edge set on `n` labelled vertices; used for spanning trees, both
/// geometric and abstract.
///
/// The ordering is lexicographic on the sorted edge lists: of two distinct
/// sets of equal size, the one owning the lowest differing edge comes first.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sst {
    n: u8,
    mask: u64,
}

impl Sst {
    pub fn from_mask(n: usize, mask: u64) -> Result<Self, TreeError> {
        if n == 0 || n > MAX_POINTS {
            return Err(TreeError::UnsupportedSize(n));
        }
        let m = edge_count(n);
        if m < 64 && mask >> m != 0 {
            return Err(TreeError::MaskOutOfRange { n, mask });
        }
        Ok(Sst { n: n as u8, mask })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        if n == 0 || n > MAX_POINTS {
            return Err(TreeError::UnsupportedSize(n));
        }
        let mut mask = 0u64;
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(TreeError::InvalidEdge(a, b));
            }
            let bit = 1u64 << edge_index(n, a, b);
            if mask & bit != 0 {
                return Err(TreeError::RepeatedEdge(a.min(b), a.max(b)));
            }
            mask |= bit;
        }
        Ok(Sst { n: n as u8, mask })
    }

    /// The spanning star centred at `center`.
    pub fn star(n: usize, center: usize) -> Self {
        let mut mask = 0;
        for v in (0..n).filter(|&v| v != center) {
            mask |= 1u64 << edge_index(n, center, v);
        }
        Sst { n: n as u8, mask }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.mask >> edge_index(self.n(), a, b) & 1 == 1
    }

    /// Edges in canonical (lexicographic) order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        BitIter(self.mask).map(|bit| edge_pair(n, bit)).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n()];
        for (a, b) in self.edges() {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Size of the symmetric difference of the two edge sets.
    pub fn delta(&self, other: &Sst) -> usize {
        (self.mask ^ other.mask).count_ones() as usize
    }

    /// True iff the edges form a spanning tree on all `n` vertices.
    pub fn is_spanning_tree(&self) -> bool {
        let n = self.n();
        if self.len() + 1 != n {
            return false;
        }
        let mut uf = UnionFind::new(n);
        self.edges().into_iter().all(|(a, b)| uf.union(a, b))
    }

    /// Vertices adjacent to `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges()
            .into_iter()
            .filter_map(|(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Longest path length in edges; `None` if not a spanning tree.
    pub fn diameter(&self) -> Option<usize> {
        if !self.is_spanning_tree() {
            return None;
        }
        let n = self.n();
        let adj: Vec<Vec<usize>> = (0..n).map(|v| self.neighbors(v)).collect();
        let far = |src: usize| -> (usize, usize) {
            let mut dist = vec![usize::MAX; n];
            dist[src] = 0;
            let mut stack = vec![src];
            let mut best = (0, src);
            while let Some(u) = stack.pop() {
                if dist[u] > best.0 {
                    best = (dist[u], u);
                }
                for &w in &adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        stack.push(w);
                    }
                }
            }
            best
        };
        let (_, end) = far(0);
        Some(far(end).0)
    }

    /// Center of a spanning star, if this is one.
    pub fn star_center(&self) -> Option<usize> {
        let n = self.n();
        if n < 3 || !self.is_spanning_tree() {
            return None;
        }
        self.degrees().iter().position(|&d| d == n - 1)
    }

    /// `(p, q, p_leaves, q_leaves)` with `p < q` if this tree has diameter 3
    /// with the single internal edge `[p, q]`.
    pub fn brush_parts(&self) -> Option<(usize, usize, Vec<usize>, Vec<usize>)> {
        if self.diameter() != Some(3) {
            return None;
        }
        let deg = self.degrees();
        let internal: Vec<usize> = (0..self.n()).filter(|&v| deg[v] >= 2).collect();
        if internal.len() != 2 {
            return None;
        }
        let (p, q) = (internal[0], internal[1]);
        let p_side = self.neighbors(p).into_iter().filter(|&v| v != q).collect();
        let q_side = self.neighbors(q).into_iter().filter(|&v| v != p).collect();
        Some((p, q, p_side, q_side))
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Sst {
        let n = self.n();
        let mut mask = 0;
        for (a, b) in self.edges() {
            mask |= 1u64 << edge_index(n, perm[a], perm[b]);
        }
        Sst { n: self.n, mask }
    }
}

impl Ord for Sst {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            if self.mask.count_ones() != other.mask.count_ones() {
                return lex_cmp(self, other);
            }
            let diff = self.mask ^ other.mask;
            if diff == 0 {
                Ordering::Equal
            } else if self.mask & diff & diff.wrapping_neg() != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

fn lex_cmp(a: &Sst, b: &Sst) -> Ordering {
    let ea: Vec<u32> = BitIter(a.mask).map(|x| x as u32).collect();
    let eb: Vec<u32> = BitIter(b.mask).map(|x| x as u32).collect();
    ea.cmp(&eb)
}

impl PartialOrd for Sst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Sst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sst{:?}", self.edges())
    }
}

impl fmt::Display for Sst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for Sst {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.edges().serialize(serializer)
    }
}

/// Iterates the set bit positions of a mask, low to high.
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let bit = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(bit)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Merges the classes of `a` and `b`; false if they were already merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_index_roundtrip() {
        for n in 2..=MAX_POINTS {
            let pairs = all_pairs(n);
            assert_eq!(pairs.len(), edge_count(n));
            for (k, &(i, j)) in pairs.iter().enumerate() {
                assert_eq!(edge_index(n, i, j), k);
                assert_eq!(edge_index(n, j, i), k);
                assert_eq!(edge_pair(n, k), (i, j));
            }
        }
    }

    #[test]
    fn ordering_is_lexicographic_on_sorted_edge_lists() {
        let n = 5;
        let pairs = all_pairs(n);
        let mut sets = Vec::new();
        for a in 0..pairs.len() {
            for b in a + 1..pairs.len() {
                for c in b + 1..pairs.len() {
                    sets.push(Sst::from_edges(n, &[pairs[a], pairs[b], pairs[c]]).unwrap());
                }
            }
        }
        for x in &sets {
            for y in &sets {
                assert_eq!(x.cmp(y), x.edges().cmp(&y.edges()), "{x:?} vs {y:?}");
            }
        }
    }

    #[test]
    fn tree_shapes() {
        let star = Sst::star(5, 2);
        assert!(star.is_spanning_tree());
        assert_eq!(star.diameter(), Some(2));
        assert_eq!(star.star_center(), Some(2));
        assert!(star.brush_parts().is_none());

        let brush = Sst::from_edges(5, &[(0, 1), (0, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(brush.diameter(), Some(3));
        assert_eq!(brush.brush_parts(), Some((0, 1, vec![2], vec![3, 4])));

        let path = Sst::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(path.diameter(), Some(4));
        assert!(path.brush_parts().is_none());

        let cyc = Sst::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!cyc.is_spanning_tree());
        assert_eq!(cyc.diameter(), None);
    }

    #[test]
    fn from_edges_validation() {
        assert_eq!(Sst::from_edges(3, &[(0, 0)]), Err(TreeError::InvalidEdge(0, 0)));
        assert_eq!(Sst::from_edges(3, &[(0, 3)]), Err(TreeError::InvalidEdge(0, 3)));
        assert_eq!(Sst::from_edges(3, &[(0, 1), (1, 0)]), Err(TreeError::RepeatedEdge(0, 1)));
        assert_eq!(Sst::from_edges(12, &[]), Err(TreeError::UnsupportedSize(12)));
    }

    #[test]
    fn stars_differ_in_all_but_one_edge() {
        let (a, b) = (Sst::star(5, 0), Sst::star(5, 3));
        assert_eq!(a.delta(&b), 6);
    }
}
