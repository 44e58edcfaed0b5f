//! Oracle checks that compare blind results with the labelled trees and
//! coordinates behind a tree graph.

use serde::Serialize;

use super::report::Check;
use crate::analysis::{build_dt_graph, bfs_unchecked, CliqueIndex};
use crate::geometry::{convex_hull, orient, PointSet};
use crate::par;
use crate::reconstruct::{type_all_cliques, all_seeds, BrushSet, CliqueTyping, CrossingRelation, Reconstruction, StarSet, Tag};
use crate::tree::{edge_pair, Sst};
use crate::treegraph::{SstTable, TreeGraph, VertexId, VertexPermutation};

/// The labelled tree behind every vertex of a shuffled tree graph.
pub struct GroundTruth<'a> {
    pub points: &'a PointSet,
    pub table: &'a SstTable,
    pub perm: &'a VertexPermutation,
}

/// Counters gathered by the extended checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationStats {
    pub crossing_pairs: usize,
    pub crossing_mismatches: usize,
    pub cliques: usize,
    pub u_degenerate_edges: usize,
    pub i_degenerate_edges: usize,
    pub seeds: usize,
    pub dt_vertices: usize,
    pub same_center_queries: usize,
    pub same_center_split: usize,
}

impl GroundTruth<'_> {
    pub fn tree(&self, v: VertexId) -> &Sst {
        self.table.tree(self.perm.to_old(v))
    }

    /// Point index of each star label, if every identified star really is a
    /// star and their centres are distinct.
    pub fn star_centers(&self, stars: &StarSet) -> Option<Vec<usize>> {
        let centers: Option<Vec<usize>> = stars.ids().iter().map(|&s| self.tree(s).star_center()).collect();
        let centers = centers?;
        let mut sorted = centers.clone();
        sorted.sort_unstable();
        sorted.dedup();
        (sorted.len() == centers.len()).then_some(centers)
    }

    /// Ground-truth tag of every clique: U when the members' union has `n`
    /// edges, I when their intersection has `n - 2`. A degenerate pair takes
    /// the opposite tag of the other clique through its edge.
    pub fn clique_tags(&self, index: &CliqueIndex) -> Vec<Option<Tag>> {
        let n = self.points.len() as u32;
        let mut tags: Vec<Option<Tag>> = index
            .cliques()
            .iter()
            .map(|c| {
                if c.degenerate {
                    return None;
                }
                let masks = c.members.iter().map(|&v| self.tree(v).mask());
                let union = masks.clone().fold(0u64, |a, m| a | m).count_ones();
                let inter = masks.fold(u64::MAX, |a, m| a & m).count_ones();
                match (union == n, inter == n - 2) {
                    (true, false) => Some(Tag::U),
                    (false, true) => Some(Tag::I),
                    _ => None,
                }
            })
            .collect();
        for &[first, second] in index.edge_slots() {
            if index.clique(second).degenerate {
                tags[second as usize] = tags[first as usize].map(Tag::opposite);
            }
        }
        tags
    }
}

pub fn crossing_check(
    relation: &CrossingRelation,
    centers: &[usize],
    points: &PointSet,
    stats: &mut VerificationStats,
) -> Check {
    let truth = CrossingRelation::from_points(points);
    let mismatches = match relation.relabel(centers) {
        Ok(mapped) => mapped
            .entries()
            .iter()
            .zip(truth.entries())
            .filter(|(a, b)| a.crosses != b.crosses)
            .count(),
        Err(_) => truth.entries().len(),
    };
    stats.crossing_pairs = truth.entries().len();
    stats.crossing_mismatches = mismatches;
    Check::new(
        "crossing_relation_exact",
        mismatches == 0,
        format!("{mismatches} mismatches over {} disjoint segment pairs", stats.crossing_pairs),
    )
}

/// `[x, v]` and `[v, y]` with `x, v, y` consecutive hull vertices, the
/// triangle `xvy` empty, and `[x, y]` in both trees.
fn is_ear(points: &PointSet, hull: &[usize], e1: (usize, usize), e2: (usize, usize), common: &Sst) -> bool {
    let shares = |u: usize| u == e2.0 || u == e2.1;
    let v = match (shares(e1.0), shares(e1.1)) {
        (true, false) => e1.0,
        (false, true) => e1.1,
        _ => return false,
    };
    let other = |(a, b): (usize, usize)| if a == v { b } else { a };
    let (x, y) = (other(e1), other(e2));
    let Some(i) = hull.iter().position(|&h| h == v) else { return false };
    let h = hull.len();
    let (prev, next) = (hull[(i + h - 1) % h], hull[(i + 1) % h]);
    if !((x == prev && y == next) || (x == next && y == prev)) {
        return false;
    }
    let (px, pv, py) = (points.point(x), points.point(v), points.point(y));
    let inside = (0..points.len()).filter(|&w| w != x && w != v && w != y).any(|w| {
        let pw = points.point(w);
        let s = [orient(px, pv, pw), orient(pv, py, pw), orient(py, px, pw)];
        s.iter().all(|&o| o == s[0])
    });
    !inside && common.contains(x, y)
}

/// Clique multiplicity, blind-vs-true typing, the two degeneracy
/// characterisations and the internal-edge I-clique size bound.
pub fn clique_checks(
    index: &CliqueIndex,
    typing: &CliqueTyping,
    truth: &GroundTruth<'_>,
    stats: &mut VerificationStats,
) -> Vec<Check> {
    let tags = truth.clique_tags(index);
    stats.cliques = tags.len();
    let untyped = tags.iter().filter(|t| t.is_none()).count();
    let mistyped = (0..tags.len()).filter(|&c| tags[c] != Some(typing.tag(c as u32))).count();

    let hull = convex_hull(truth.points).unwrap_or_default();
    let (mut bad_multiplicity, mut u_mismatch, mut i_mismatch, mut small_internal) = (0, 0, 0, 0);
    let (mut u_deg, mut i_deg) = (0, 0);
    for (e, &(a, b)) in index.edges().iter().enumerate() {
        let [first, second] = index.edge_slots()[e];
        let non_degenerate = [first, second].iter().filter(|&&c| !index.clique(c).degenerate).count();
        if !(1..=2).contains(&non_degenerate) {
            bad_multiplicity += 1;
        }
        let (ta, tb) = (truth.tree(a), truth.tree(b));
        let e1 = edge_pair(ta.n(), (ta.mask() & !tb.mask()).trailing_zeros() as usize);
        let e2 = edge_pair(ta.n(), (tb.mask() & !ta.mask()).trailing_zeros() as usize);
        let common = Sst::from_mask(ta.n(), ta.mask() & tb.mask()).expect("subset of a valid mask");
        let disjoint = e1.0 != e2.0 && e1.0 != e2.1 && e1.1 != e2.0 && e1.1 != e2.1;
        let cross = disjoint && truth.points.cross_unchecked(e1.0, e1.1, e2.0, e2.1);
        let ear = is_ear(truth.points, &hull, e1, e2, &common);

        let degenerate_tag = index.clique(second).degenerate.then(|| tags[second as usize]).flatten();
        let (is_u_deg, is_i_deg) = (degenerate_tag == Some(Tag::U), degenerate_tag == Some(Tag::I));
        u_deg += usize::from(is_u_deg);
        i_deg += usize::from(is_i_deg);
        u_mismatch += usize::from(is_u_deg != cross);
        i_mismatch += usize::from(is_i_deg != ear);

        let i_clique = [first, second].into_iter().find(|&c| tags[c as usize] == Some(Tag::I));
        let i_size = i_clique.map_or(0, |c| index.clique(c).len());
        for (tree, (p, q)) in [(ta, e1), (tb, e2)] {
            let degrees = tree.degrees();
            if degrees[p] >= 2 && degrees[q] >= 2 && i_size < 4 {
                small_internal += 1;
            }
        }
    }
    stats.u_degenerate_edges = u_deg;
    stats.i_degenerate_edges = i_deg;
    let edges = index.edges().len();
    vec![
        Check::new(
            "edge_clique_multiplicity",
            bad_multiplicity == 0,
            format!("{bad_multiplicity} of {edges} edges outside 1..=2 non-degenerate cliques"),
        ),
        Check::new(
            "clique_typing_ground_truth",
            untyped == 0 && mistyped == 0,
            format!("{mistyped} of {} cliques mistyped, {untyped} neither U nor I", tags.len()),
        ),
        Check::new(
            "u_degenerate_iff_crossing",
            u_mismatch == 0,
            format!("{u_mismatch} mismatches; {u_deg} U-degenerate edges"),
        ),
        Check::new("i_degenerate_iff_ear", i_mismatch == 0, format!("{i_mismatch} mismatches; {i_deg} I-degenerate edges")),
        Check::new(
            "internal_edge_i_clique_size",
            small_internal == 0,
            format!("{small_internal} internal swaps whose I-clique has fewer than 4 members"),
        ),
    ]
}

/// `D_T` connected for every vertex.
pub fn dt_check(graph: &TreeGraph, index: &CliqueIndex, stats: &mut VerificationStats) -> Check {
    let connected = par::map_range(graph.vertex_count(), |t| {
        let t = t as VertexId;
        build_dt_graph(graph, t, &index.reports_at(graph, t)).is_ok_and(|d| d.is_connected())
    });
    let bad = connected.iter().filter(|&&c| !c).count();
    stats.dt_vertices = connected.len();
    Check::new("dt_connected", bad == 0, format!("{bad} of {} vertices with disconnected D_T", connected.len()))
}

/// Identical typing from every available seed.
///
/// A successful two-colouring of a connected constraint graph is one of
/// exactly two colourings, so a seed reproduces the reference iff its own
/// tag agrees with the reference at its clique. A few seeds are also
/// re-run in full.
pub fn seed_independence_check(index: &CliqueIndex, typing: &CliqueTyping, stats: &mut VerificationStats) -> Check {
    let seeds = match all_seeds(index) {
        Ok(s) => s,
        Err(e) => return Check::new("typing_seed_independent", false, e.to_string()),
    };
    stats.seeds = seeds.len();
    let disagree = seeds.iter().filter(|s| typing.tag(s.clique) != s.tag).count();
    let step = seeds.len().div_ceil(4).max(1);
    let rerun_bad = seeds
        .iter()
        .step_by(step)
        .filter(|s| type_all_cliques(index, s).as_ref() != Ok(typing))
        .count();
    Check::new(
        "typing_seed_independent",
        !seeds.is_empty() && disagree == 0 && rerun_bad == 0,
        format!("{} seeds, {disagree} disagree, {rerun_bad} full re-runs differ", seeds.len()),
    )
}

/// Stars, brushes, brush types and leaf partitions against the trees.
pub fn star_brush_checks(rec: &Reconstruction, centers: &[usize], truth: &GroundTruth<'_>) -> Vec<Check> {
    let n = rec.n();
    let vertices = truth.table.len() as VertexId;
    let true_stars: Vec<VertexId> = (0..vertices).filter(|&v| truth.tree(v).star_center().is_some()).collect();
    let stars_ok = true_stars == rec.stars.ids();

    let (mut brush_bad, mut type_bad, mut label_bad, mut true_brushes) = (0, 0, 0, 0);
    let place = |xs: &[usize]| {
        let mut v: Vec<usize> = xs.iter().map(|&x| centers[x]).collect();
        v.sort_unstable();
        v
    };
    for v in 0..vertices {
        let parts = truth.tree(v).brush_parts();
        let is_brush = parts.is_some();
        true_brushes += usize::from(is_brush);
        let (Some((p, q, p_leaves, q_leaves)), Some(b)) = (parts, rec.brushes.get(v)) else {
            brush_bad += usize::from(is_brush != rec.brushes.get(v).is_some());
            continue;
        };
        let (bp, bq) = (centers[b.p], centers[b.q]);
        if (bp.min(bq), bp.max(bq)) != (p, q) {
            brush_bad += 1;
            continue;
        }
        let (on_bp, on_bq) = if bp == p { (p_leaves, q_leaves) } else { (q_leaves, p_leaves) };
        let dist_ok = rec.stars.distance(b.q, v) as usize == on_bp.len() && rec.stars.distance(b.p, v) as usize == on_bq.len();
        type_bad += usize::from(!dist_ok || b.k != on_bp.len() || b.l != on_bq.len());
        let label_ok = rec.labels.get(v).is_some_and(|l| place(&l.p_side) == on_bp && place(&l.q_side) == on_bq);
        label_bad += usize::from(!label_ok);
    }
    let expected = n as u32 - 2;
    let mut far = 0;
    for a in 0..n {
        for b in a + 1..n {
            far += usize::from(rec.stars.distance(a, rec.stars.id(b)) != expected);
        }
    }
    vec![
        Check::new(
            "stars_ground_truth",
            stars_ok,
            format!("{} identified, {} diameter-2 trees", rec.stars.n(), true_stars.len()),
        ),
        Check::new("star_pair_distance", far == 0, format!("{far} star pairs not at distance {expected}")),
        Check::new(
            "brushes_ground_truth",
            brush_bad == 0 && rec.brushes.len() == true_brushes,
            format!("{} identified, {true_brushes} diameter-3 trees, {brush_bad} disagree", rec.brushes.len()),
        ),
        Check::new("brush_type_distances", type_bad == 0, format!("{type_bad} brushes with wrong (k, l) distances")),
        Check::new("brush_labels_ground_truth", label_bad == 0, format!("{label_bad} brushes with wrong leaf partition")),
    ]
}

/// Every brush against every pair of its leaves: the nearest brush of that
/// pair is at distance `n - 3` exactly when the leaves are split, and never
/// closer.
pub fn same_center_check(
    graph: &TreeGraph,
    brushes: &BrushSet,
    centers: &[usize],
    truth: &GroundTruth<'_>,
    stats: &mut VerificationStats,
) -> Check {
    let n = brushes.n();
    let floor = n as u32 - 3;
    let all: Vec<_> = brushes.iter().copied().collect();
    let per_brush = par::map(&all, |b| {
        let dist = bfs_unchecked(graph, b.id);
        let tree = truth.tree(b.id);
        let (_, _, p_leaves, _) = tree.brush_parts().expect("checked brush");
        let others: Vec<usize> = (0..n).filter(|&x| x != b.p && x != b.q).collect();
        let (mut queries, mut split, mut bad) = (0usize, 0usize, 0usize);
        for (i, &x) in others.iter().enumerate() {
            for &y in &others[i + 1..] {
                let nearest = brushes.of_pair(x, y).iter().map(|c| dist[c.id as usize]).min().unwrap_or(u32::MAX);
                let apart = p_leaves.contains(&centers[x]) != p_leaves.contains(&centers[y]);
                queries += 1;
                split += usize::from(apart);
                bad += usize::from(nearest < floor || (nearest == floor) != apart);
            }
        }
        (queries, split, bad)
    });
    let (queries, split, bad) =
        per_brush.into_iter().fold((0, 0, 0), |acc, (q, s, b)| (acc.0 + q, acc.1 + s, acc.2 + b));
    stats.same_center_queries = queries;
    stats.same_center_split = split;
    Check::new(
        "same_center_dichotomy",
        bad == 0,
        format!("{bad} violations over {queries} queries ({split} split pairs)"),
    )
}
