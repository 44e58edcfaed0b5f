//! Exact integer predicates on planar point sets.
//!
//! Every geometric decision in the crate goes through [`orient`]. Coordinates
//! are bounded by [`COORD_BOUND`] and determinants are evaluated in `i128`, so
//! no predicate ever rounds.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest admissible absolute coordinate value.
pub const COORD_BOUND: i64 = 1 << 20;

/// Largest point set supported by the edge-mask tree representation.
pub const MAX_POINTS: usize = 11;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("coordinate of point {index} exceeds the bound 2^20: ({x}, {y})")]
    CoordinateOutOfRange { index: usize, x: i64, y: i64 },
    #[error("points {0} and {1} coincide")]
    Duplicate(usize, usize),
    #[error("points {0}, {1} and {2} are collinear")]
    Collinear(usize, usize, usize),
    #[error("point set has {0} points, at most {MAX_POINTS} are supported")]
    TooManyPoints(usize),
    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("segment endpoints must be four distinct indices, got {0:?}")]
    RepeatedIndex([usize; 4]),
    #[error("convex hull needs at least 3 points, got {0}")]
    TooFewPoints(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point { x, y }
    }
}

/// Sign of the turn `p -> q -> r`: `+1` counterclockwise, `-1` clockwise,
/// `0` collinear.
pub fn orient(p: Point, q: Point, r: Point) -> i8 {
    let ux = q.x as i128 - p.x as i128;
    let uy = q.y as i128 - p.y as i128;
    let vx = r.x as i128 - p.x as i128;
    let vy = r.y as i128 - p.y as i128;
    match (ux * vy - uy * vx).cmp(&0) {
        Ordering::Greater => 1,
        Ordering::Less => -1,
        Ordering::Equal => 0,
    }
}

/// True iff the points are pairwise distinct and no three are collinear.
pub fn in_general_position(points: &[Point]) -> bool {
    first_degeneracy(points).is_none()
}

fn first_degeneracy(points: &[Point]) -> Option<GeometryError> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return Some(GeometryError::Duplicate(i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient(points[i], points[j], points[k]) == 0 {
                    return Some(GeometryError::Collinear(i, j, k));
                }
            }
        }
    }
    None
}

/// Two vertex-disjoint segments `[a, b]` and `[c, d]` given by point indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SegPair {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl SegPair {
    pub const fn new(a: usize, b: usize, c: usize, d: usize) -> Self {
        SegPair { a, b, c, d }
    }

    pub fn indices(&self) -> [usize; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// A validated point set: bounded coordinates, distinct points, no three
/// collinear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.len() > MAX_POINTS {
            return Err(GeometryError::TooManyPoints(points.len()));
        }
        for (index, p) in points.iter().enumerate() {
            if p.x.abs() > COORD_BOUND || p.y.abs() > COORD_BOUND {
                return Err(GeometryError::CoordinateOutOfRange { index, x: p.x, y: p.y });
            }
        }
        if let Some(err) = first_degeneracy(&points) {
            return Err(err);
        }
        Ok(PointSet { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Point {
        self.points[index]
    }

    fn check_index(&self, index: usize) -> Result<(), GeometryError> {
        if index >= self.points.len() {
            return Err(GeometryError::IndexOutOfRange { index, n: self.points.len() });
        }
        Ok(())
    }

    /// Crossing test for index pairs that are already known to be valid and
    /// disjoint. Hot path of the enumerator.
    pub(crate) fn cross_unchecked(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let (pa, pb, pc, pd) = (self.points[a], self.points[b], self.points[c], self.points[d]);
        orient(pa, pb, pc) * orient(pa, pb, pd) < 0 && orient(pc, pd, pa) * orient(pc, pd, pb) < 0
    }
}

/// True iff the open segments `(a, b)` and `(c, d)` share a point.
///
/// Under general position and vertex-disjointness this is a proper crossing,
/// detected by two strict sign changes.
pub fn segments_cross(points: &PointSet, sp: SegPair) -> Result<bool, GeometryError> {
    let idx = sp.indices();
    for &i in &idx {
        points.check_index(i)?;
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if idx[i] == idx[j] {
                return Err(GeometryError::RepeatedIndex(idx));
            }
        }
    }
    Ok(points.cross_unchecked(sp.a, sp.b, sp.c, sp.d))
}

/// Hull vertices in counterclockwise order, starting from the lowest
/// (then leftmost) point.
pub fn convex_hull(points: &PointSet) -> Result<Vec<usize>, GeometryError> {
    let n = points.len();
    if n < 3 {
        return Err(GeometryError::TooFewPoints(n));
    }
    let pts = points.points();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (pts[i].x, pts[i].y));

    // Andrew's monotone chain; general position means no zero turns.
    let mut lower: Vec<usize> = Vec::with_capacity(n);
    for &i in &order {
        while lower.len() >= 2
            && orient(pts[lower[lower.len() - 2]], pts[lower[lower.len() - 1]], pts[i]) <= 0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::with_capacity(n);
    for &i in order.iter().rev() {
        while upper.len() >= 2
            && orient(pts[upper[upper.len() - 2]], pts[upper[upper.len() - 1]], pts[i]) <= 0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);

    let start = (0..lower.len())
        .min_by_key(|&k| (pts[lower[k]].y, pts[lower[k]].x))
        .unwrap_or(0);
    lower.rotate_left(start);
    Ok(lower)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    fn square() -> PointSet {
        PointSet::new(vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)]).unwrap()
    }

    #[test]
    fn orient_basic_signs() {
        assert_eq!(orient(p(0, 0), p(1, 0), p(0, 1)), 1);
        assert_eq!(orient(p(0, 0), p(1, 1), p(2, 2)), 0);
        assert_eq!(orient(p(0, 0), p(0, 1), p(1, 0)), -1);
    }

    #[test]
    fn orient_is_exact_at_the_coordinate_bound() {
        let b = COORD_BOUND;
        assert_eq!(orient(p(-b, -b), p(b, b), p(b - 1, b)), 1);
        assert_eq!(orient(p(-b, -b), p(b, b), p(0, 0)), 0);
        assert_eq!(orient(p(-b, -b), p(b, b), p(b, b - 1)), -1);
    }

    #[test]
    fn square_crossings() {
        let sq = square();
        assert!(segments_cross(&sq, SegPair::new(0, 2, 1, 3)).unwrap());
        assert!(!segments_cross(&sq, SegPair::new(0, 1, 2, 3)).unwrap());
    }

    #[test]
    fn disjoint_boxes_do_not_cross() {
        let ps = PointSet::new(vec![p(0, 0), p(1, 1), p(5, 0), p(6, 1)]).unwrap();
        assert!(!segments_cross(&ps, SegPair::new(0, 1, 2, 3)).unwrap());
    }

    #[test]
    fn segments_cross_rejects_bad_indices() {
        let sq = square();
        assert_eq!(
            segments_cross(&sq, SegPair::new(0, 1, 1, 3)),
            Err(GeometryError::RepeatedIndex([0, 1, 1, 3]))
        );
        assert!(matches!(
            segments_cross(&sq, SegPair::new(0, 1, 2, 7)),
            Err(GeometryError::IndexOutOfRange { index: 7, n: 4 })
        ));
    }

    #[test]
    fn general_position_examples() {
        assert!(in_general_position(&[p(0, 0), p(1, 0), p(0, 1)]));
        assert!(!in_general_position(&[p(0, 0), p(1, 1), p(2, 2)]));
        assert!(!in_general_position(&[p(0, 0), p(0, 0)]));
    }

    #[test]
    fn point_set_rejects_degenerate_input() {
        assert_eq!(
            PointSet::new(vec![p(0, 0), p(1, 1), p(2, 2)]),
            Err(GeometryError::Collinear(0, 1, 2))
        );
        assert_eq!(PointSet::new(vec![p(3, 4), p(3, 4)]), Err(GeometryError::Duplicate(0, 1)));
        assert!(matches!(
            PointSet::new(vec![p(0, 0), p(COORD_BOUND + 1, 0)]),
            Err(GeometryError::CoordinateOutOfRange { index: 1, .. })
        ));
    }

    #[test]
    fn hull_of_square_with_center() {
        let ps = PointSet::new(vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2), p(1, 1)]);
        // (1,1) lies on both diagonals, so this set is not in general position.
        assert!(ps.is_err());
        let ps = PointSet::new(vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4), p(1, 2)]).unwrap();
        assert_eq!(convex_hull(&ps).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn hull_of_triangle() {
        let ps = PointSet::new(vec![p(0, 0), p(0, 5), p(3, 1)]).unwrap();
        assert_eq!(convex_hull(&ps).unwrap(), vec![0, 2, 1]);
    }

    #[test]
    fn hull_of_convex_pentagon() {
        let pts = vec![p(0, 0), p(4, 0), p(6, 3), p(2, 6), p(-2, 3)];
        let ps = PointSet::new(pts.clone()).unwrap();
        let hull = convex_hull(&ps).unwrap();
        assert_eq!(hull, vec![0, 1, 2, 3, 4]);
        for w in 0..5 {
            let (a, b, c) = (hull[w], hull[(w + 1) % 5], hull[(w + 2) % 5]);
            assert_eq!(orient(pts[a], pts[b], pts[c]), 1);
        }
    }

    #[test]
    fn hull_needs_three_points() {
        let ps = PointSet::new(vec![p(0, 0), p(1, 0)]).unwrap();
        assert_eq!(convex_hull(&ps), Err(GeometryError::TooFewPoints(2)));
    }
}
