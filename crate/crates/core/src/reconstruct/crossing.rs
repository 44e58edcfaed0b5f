use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{BrushLabels, ReconError};
use crate::geometry::PointSet;

const INVALID: u8 = 2;

/// Which pairs of vertex-disjoint segments cross, over labels `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingRelation {
    n: usize,
    /// `table[((a*n + b)*n + c)*n + d]`: 1 if `[a,b]` crosses `[c,d]`, 0 if
    /// not, `INVALID` unless all four labels are distinct.
    table: Vec<u8>,
}

/// One unordered pair of disjoint segments, `a < b`, `c < d`, `a < c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossingEntry {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub crosses: bool,
}

impl CrossingRelation {
    fn empty(n: usize) -> Self {
        CrossingRelation { n, table: vec![INVALID; n * n * n * n] }
    }

    fn slot(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.n + b) * self.n + c) * self.n + d
    }

    fn set(&mut self, [a, b, c, d]: [usize; 4], crosses: bool) {
        let v = u8::from(crosses);
        for (w, x, y, z) in [(a, b, c, d), (b, a, c, d), (a, b, d, c), (b, a, d, c)] {
            let i = self.slot(w, x, y, z);
            self.table[i] = v;
            let j = self.slot(y, z, w, x);
            self.table[j] = v;
        }
    }

    /// Ground truth from coordinates.
    pub fn from_points(points: &PointSet) -> Self {
        let mut rel = Self::empty(points.len());
        for q in disjoint_pairs(points.len()) {
            rel.set(q, points.cross_unchecked(q[0], q[1], q[2], q[3]));
        }
        rel
    }

    /// `[p,x]` and `[q,y]` cross iff no `pq`-brush has `x` on `p` and `y` on
    /// `q`. Each segment pair is read four ways (either endpoint of each
    /// segment as the centre); disagreement is an error.
    pub fn from_labels(n: usize, labels: &BrushLabels) -> Result<Self, ReconError> {
        // witness[(p*n + x)*n*n + q*n + y]: some pq-brush holds x on p, y on q.
        let mut witness = vec![false; n * n * n * n];
        let at = |p: usize, x: usize, q: usize, y: usize| ((p * n + x) * n + q) * n + y;
        for label in labels.iter() {
            for &x in &label.p_side {
                for &y in &label.q_side {
                    witness[at(label.p, x, label.q, y)] = true;
                    witness[at(label.q, y, label.p, x)] = true;
                }
            }
        }
        let mut rel = Self::empty(n);
        for [a, b, c, d] in disjoint_pairs(n) {
            let readings = [at(a, b, c, d), at(a, b, d, c), at(b, a, c, d), at(b, a, d, c)].map(|i| !witness[i]);
            if readings.iter().any(|&r| r != readings[0]) {
                return Err(ReconError::InconsistentCrossing([a, b, c, d]));
            }
            rel.set([a, b, c, d], readings[0]);
        }
        Ok(rel)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `None` unless the labels are four distinct values below `n`.
    pub fn crosses(&self, a: usize, b: usize, c: usize, d: usize) -> Option<bool> {
        if [a, b, c, d].iter().any(|&x| x >= self.n) {
            return None;
        }
        match self.table[self.slot(a, b, c, d)] {
            INVALID => None,
            v => Some(v == 1),
        }
    }

    /// Canonical entries in lexicographic order.
    pub fn entries(&self) -> Vec<CrossingEntry> {
        disjoint_pairs(self.n)
            .map(|[a, b, c, d]| CrossingEntry { a, b, c, d, crosses: self.table[self.slot(a, b, c, d)] == 1 })
            .collect()
    }

    pub fn crossing_count(&self) -> usize {
        self.entries().iter().filter(|e| e.crosses).count()
    }

    /// The same relation with label `i` renamed to `map[i]`.
    pub fn relabel(&self, map: &[usize]) -> Result<Self, ReconError> {
        let mut seen = vec![false; self.n];
        for &m in map {
            if m >= self.n || std::mem::replace(&mut seen[m], true) {
                return Err(ReconError::InvalidLabel(m, self.n));
            }
        }
        if map.len() != self.n {
            return Err(ReconError::InvalidLabel(map.len(), self.n));
        }
        let mut rel = Self::empty(self.n);
        for e in self.entries() {
            rel.set([map[e.a], map[e.b], map[e.c], map[e.d]], e.crosses);
        }
        Ok(rel)
    }

    /// SHA-256 over the canonical entries, one `a,b,c,d,0|1` line each.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("n={}\n", self.n));
        for e in self.entries() {
            hasher.update(format!("{},{},{},{},{}\n", e.a, e.b, e.c, e.d, u8::from(e.crosses)));
        }
        hex::encode(hasher.finalize())
    }
}

/// `[a,b,c,d]` with `a < b`, `c < d`, `a < c`, all distinct.
fn disjoint_pairs(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |a| {
        (a + 1..n).flat_map(move |b| {
            (a + 1..n).filter(move |&c| c != b).flat_map(move |c| {
                (c + 1..n).filter(move |&d| d != b).map(move |d| [a, b, c, d])
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn square() -> PointSet {
        PointSet::new(vec![Point::new(0, 0), Point::new(10, 1), Point::new(11, 12), Point::new(1, 10)]).unwrap()
    }

    #[test]
    fn disjoint_pair_count() {
        // 3 pairings per 4-subset.
        assert_eq!(disjoint_pairs(4).count(), 3);
        assert_eq!(disjoint_pairs(6).count(), 45);
    }

    #[test]
    fn square_diagonals_cross() {
        let rel = CrossingRelation::from_points(&square());
        assert_eq!(rel.crosses(0, 2, 1, 3), Some(true));
        assert_eq!(rel.crosses(3, 1, 2, 0), Some(true));
        assert_eq!(rel.crosses(0, 1, 2, 3), Some(false));
        assert_eq!(rel.crosses(0, 1, 1, 3), None);
        assert_eq!(rel.crosses(0, 1, 2, 9), None);
        assert_eq!(rel.crossing_count(), 1);
    }

    #[test]
    fn relabel_and_digest() {
        let rel = CrossingRelation::from_points(&square());
        // A rotation keeps the diagonals; a transposition does not.
        assert_eq!(rel.relabel(&[1, 2, 3, 0]).unwrap(), rel);
        let moved = rel.relabel(&[1, 0, 2, 3]).unwrap();
        assert_eq!(moved.crosses(1, 2, 0, 3), Some(true));
        assert_ne!(moved.digest(), rel.digest());
        assert_eq!(moved.relabel(&[1, 0, 2, 3]).unwrap(), rel);
        assert_eq!(rel.digest().len(), 64);
        assert!(rel.relabel(&[0, 0, 1, 2]).is_err());
    }
}
