//! Blind recovery of every labelled spanning tree from the bare tree graph
//! of the complete graph `K_n`.
//!
//! Stars form the graph centre. Distances to the stars give every label's
//! valence in every tree, internal edges show up as neighbours lowering two
//! valences at once, and each leaf's neighbour is found through a U-clique.

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{bfs_unchecked, eccentricities, AnalysisError, CliqueIndex, UNREACHABLE};
use crate::par;
use crate::reconstruct::{StarSet, Tag};
use crate::tree::{Sst, TreeError};
use crate::treegraph::{build_tree_graph, TreeGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbstractError {
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("graph with {0} vertices is too small; need the tree graph of K_n with n >= 3")]
    TooSmall(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("centre has {center} vertices at eccentricity {eccentricity}, inconsistent with {vertices} vertices")]
    CenterMismatch { center: usize, eccentricity: u32, vertices: usize },
    #[error("non-central vertex {0} has eccentricity {1}, expected {2}")]
    Eccentricity(VertexId, u32, u32),
    #[error("vertex {0}: valences sum to {1}, expected {2}")]
    ValenceSum(VertexId, usize, usize),
    #[error("vertex {t}: label {label} has valence {valence}, which violates the precondition")]
    Precondition { t: VertexId, label: usize, valence: u8 },
    #[error("label {0} out of range for n = {1}")]
    InvalidLabel(usize, usize),
    #[error("clique of size {0} fits neither a U-clique nor an I-clique")]
    Unclassifiable(usize),
    #[error("clique of size {size}: U-test {u_test}, I-test {i_test}; exactly one must fire")]
    AmbiguousClique { size: usize, u_test: bool, i_test: bool },
    #[error("clique of size {size} is both a U size and an I size for n = {n}, and the leaf tests only cover size n-1")]
    AmbiguousSize { size: usize, n: usize },
    #[error("vertex {t}, leaf {p}: step {step} found no witness")]
    NoWitness { t: VertexId, p: usize, step: u8 },
    #[error("vertex {0}: recovered edges do not form a spanning tree")]
    NotATree(VertexId),
    #[error("star vertex {0} was reconstructed as a non-star")]
    StarMismatch(VertexId),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// The stars of `G(K_n)` are exactly its centre: eccentricity `n - 2`
/// against `n - 1` for every other tree. Also checks `V = n^(n-2)`.
pub fn identify_stars_abstract(graph: &TreeGraph) -> Result<StarSet, AbstractError> {
    let vertices = graph.vertex_count();
    if vertices < 3 {
        return Err(AbstractError::TooSmall(vertices));
    }
    let ecc = eccentricities(graph);
    if ecc.contains(&UNREACHABLE) {
        return Err(AbstractError::Disconnected);
    }
    let radius = *ecc.iter().min().expect("non-empty");
    let ids: Vec<VertexId> = (0..vertices as VertexId).filter(|&v| ecc[v as usize] == radius).collect();
    let n = ids.len();
    let expected_count = (n as u64).checked_pow(n.saturating_sub(2) as u32);
    if n < 3 || radius as usize != n - 2 || expected_count != Some(vertices as u64) {
        return Err(AbstractError::CenterMismatch { center: n, eccentricity: radius, vertices });
    }
    if let Some(v) = (0..vertices).find(|&v| ecc[v] != radius && ecc[v] as usize != n - 1) {
        return Err(AbstractError::Eccentricity(v as VertexId, ecc[v], n as u32 - 1));
    }
    let distances = par::map(&ids, |&s| bfs_unchecked(graph, s));
    Ok(StarSet::new(ids, distances))
}

/// `δ_T(v) = n - 1 - d(T, S(v))`.
pub fn valence(stars: &StarSet, t: VertexId, v: usize) -> u8 {
    (stars.n() - 1).saturating_sub(stars.distance(v, t) as usize) as u8
}

/// Valence of every label in every tree, flattened row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValenceProfile {
    n: usize,
    values: Vec<u8>,
}

impl ValenceProfile {
    /// Builds the table and checks that every row sums to `2(n - 1)`.
    pub fn new(graph: &TreeGraph, stars: &StarSet) -> Result<Self, AbstractError> {
        let n = stars.n();
        let mut values = Vec::with_capacity(graph.vertex_count() * n);
        for t in 0..graph.vertex_count() as VertexId {
            let row = (0..n).map(|v| valence(stars, t, v));
            let start = values.len();
            values.extend(row);
            let sum: usize = values[start..].iter().map(|&d| d as usize).sum();
            if sum != 2 * (n - 1) {
                return Err(AbstractError::ValenceSum(t, sum, 2 * (n - 1)));
            }
        }
        Ok(ValenceProfile { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn of(&self, t: VertexId) -> &[u8] {
        let start = t as usize * self.n;
        &self.values[start..start + self.n]
    }

    pub fn get(&self, t: VertexId, v: usize) -> u8 {
        self.values[t as usize * self.n + v]
    }

    fn is_path(&self, t: VertexId) -> bool {
        let row = self.of(t);
        row.iter().filter(|&&d| d == 1).count() == 2 && row.iter().all(|&d| d == 1 || d == 2)
    }
}

/// Types a maximal clique from its size, falling back on leaf-count
/// profiles when the size is `n - 1`, the one size both kinds can take for
/// `n >= 5`.
///
/// In a U-clique of size `n - 1` exactly two members are paths and exactly
/// one label is a leaf in more than two members. In an I-clique of that
/// size either the path count is not two, or one label is a leaf in all
/// `n - 1` members and exactly two labels are leaves in `n - 2`.
pub fn classify_clique_abstract(members: &[VertexId], valences: &ValenceProfile) -> Result<Tag, AbstractError> {
    let n = valences.n();
    let size = members.len();
    let i_size = (1..n).any(|k| k * (n - k) == size);
    let u_size = (3..=n).contains(&size);
    match (u_size, i_size) {
        (true, false) => return Ok(Tag::U),
        (false, true) => return Ok(Tag::I),
        (false, false) => return Err(AbstractError::Unclassifiable(size)),
        (true, true) if size != n - 1 => {
            return Err(AbstractError::AmbiguousSize { size, n })
        }
        (true, true) => {}
    }
    let paths = members.iter().filter(|&&t| valences.is_path(t)).count();
    let mut leaf_counts = vec![0usize; n];
    for &t in members {
        for (v, &d) in valences.of(t).iter().enumerate() {
            if d == 1 {
                leaf_counts[v] += 1;
            }
        }
    }
    let count_of = |pred: &dyn Fn(usize) -> bool| leaf_counts.iter().filter(|&&c| pred(c)).count();
    let u_test = paths == 2 && count_of(&|c| c > 2) == 1;
    let i_test = paths != 2 || (count_of(&|c| c == n - 1) == 1 && count_of(&|c| c == n - 2) == 2);
    match (u_test, i_test) {
        (true, false) => Ok(Tag::U),
        (false, true) => Ok(Tag::I),
        _ => Err(AbstractError::AmbiguousClique { size, u_test, i_test }),
    }
}

/// Tag of every clique in the index.
pub fn classify_all_cliques(index: &CliqueIndex, valences: &ValenceProfile) -> Result<Vec<Tag>, AbstractError> {
    par::try_map(index.cliques(), |c| classify_clique_abstract(&c.members, valences))
}

/// For labels internal to `T`: is `[p, q]` an edge of `T`? It is iff some
/// neighbour of `T` has both valences one lower.
pub fn has_edge_internal(
    graph: &TreeGraph,
    valences: &ValenceProfile,
    t: VertexId,
    p: usize,
    q: usize,
) -> Result<bool, AbstractError> {
    let n = valences.n();
    for label in [p, q] {
        if label >= n {
            return Err(AbstractError::InvalidLabel(label, n));
        }
        let d = valences.get(t, label);
        if d < 2 {
            return Err(AbstractError::Precondition { t, label, valence: d });
        }
    }
    if p == q {
        return Err(AbstractError::InvalidLabel(q, n));
    }
    let (dp, dq) = (valences.get(t, p), valences.get(t, q));
    Ok(graph.neighbors(t).iter().any(|&w| valences.get(w, p) + 1 == dp && valences.get(w, q) + 1 == dq))
}

/// Which branch of the leaf procedure produced an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LeafBranch {
    /// No leaf lies more than two tree-steps away, so `T` is a star.
    StarCenter,
    /// `partner` is a leaf more than two steps away; `via` is the neighbour
    /// joining the two leaves, `witness` the U-clique member that drops `p`'s
    /// original edge.
    Procedure { partner: usize, via: VertexId, witness: VertexId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LeafNeighbor {
    pub neighbor: usize,
    pub branch: LeafBranch,
}

/// The unique neighbour of leaf `p` in tree `T`.
///
/// 1. Look for a leaf `p'` far from `p`: one for which some neighbour `T'`
///    raises both valences to 2. If none exists `T` is a star and the
///    answer is its centre.
/// 2. Keep that `T'`.
/// 3. Of the two cliques through `T T'`, take the U-clique and find the
///    member `S` with `δ_S(p) = 1`, `δ_S(p') = 2`.
/// 4. The answer is the one label whose valence drops by one from `T` to `S`.
pub fn leaf_neighbor(
    graph: &TreeGraph,
    index: &CliqueIndex,
    valences: &ValenceProfile,
    t: VertexId,
    p: usize,
) -> Result<LeafNeighbor, AbstractError> {
    let n = valences.n();
    if p >= n {
        return Err(AbstractError::InvalidLabel(p, n));
    }
    let row = valences.of(t);
    if row[p] != 1 {
        return Err(AbstractError::Precondition { t, label: p, valence: row[p] });
    }

    let step1 = (0..n).filter(|&x| x != p && row[x] == 1).find_map(|partner| {
        graph
            .neighbors(t)
            .iter()
            .find(|&&w| valences.get(w, p) == 2 && valences.get(w, partner) == 2)
            .map(|&via| (partner, via))
    });
    let Some((partner, via)) = step1 else {
        let center = row.iter().position(|&d| d as usize == n - 1).ok_or(AbstractError::NoWitness { t, p, step: 1 })?;
        return Ok(LeafNeighbor { neighbor: center, branch: LeafBranch::StarCenter });
    };

    let slots = index.cliques_of_edge(t, via).ok_or(AbstractError::NoWitness { t, p, step: 3 })?;
    let mut union = None;
    for id in slots {
        if classify_clique_abstract(&index.clique(id).members, valences)? == Tag::U {
            if union.is_some() {
                return Err(AbstractError::NoWitness { t, p, step: 3 });
            }
            union = Some(id);
        }
    }
    let union = union.ok_or(AbstractError::NoWitness { t, p, step: 3 })?;
    let witness = index
        .clique(union)
        .members
        .iter()
        .copied()
        .find(|&s| valences.get(s, p) == 1 && valences.get(s, partner) == 2)
        .ok_or(AbstractError::NoWitness { t, p, step: 3 })?;

    let srow = valences.of(witness);
    let mut dropped = (0..n).filter(|&x| srow[x] + 1 == row[x]);
    match (dropped.next(), dropped.next()) {
        (Some(neighbor), None) => {
            Ok(LeafNeighbor { neighbor, branch: LeafBranch::Procedure { partner, via, witness } })
        }
        _ => Err(AbstractError::NoWitness { t, p, step: 4 }),
    }
}

/// Counts of which leaf-procedure branch fired, over all queries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BranchAudit {
    pub star_center: usize,
    pub procedure: usize,
}

/// Every tree recovered over star labels `0..n`.
#[derive(Debug, Clone)]
pub struct AbstractReconstruction {
    pub stars: StarSet,
    pub valences: ValenceProfile,
    /// `trees[v]` is the tree of vertex `v`.
    pub trees: Vec<Sst>,
    pub branches: BranchAudit,
}

impl AbstractReconstruction {
    pub fn n(&self) -> usize {
        self.stars.n()
    }

    /// True iff rebuilding adjacency from the recovered trees yields the
    /// input graph exactly.
    pub fn rederives(&self, graph: &TreeGraph) -> bool {
        let Ok((rebuilt, table)) = build_tree_graph(self.trees.clone()) else {
            return false;
        };
        if rebuilt.edge_count() != graph.edge_count() {
            return false;
        }
        let ids: Vec<Option<VertexId>> = self.trees.iter().map(|t| table.id_of(t)).collect();
        graph.edges().into_iter().all(|(a, b)| match (ids[a as usize], ids[b as usize]) {
            (Some(x), Some(y)) => rebuilt.are_adjacent(x, y),
            _ => false,
        })
    }
}

fn reconstruct_tree(
    graph: &TreeGraph,
    index: &CliqueIndex,
    valences: &ValenceProfile,
    t: VertexId,
) -> Result<(Sst, BranchAudit), AbstractError> {
    let n = valences.n();
    let row = valences.of(t);
    let mut edges = Vec::with_capacity(n - 1);
    let mut audit = BranchAudit::default();
    for p in 0..n {
        if row[p] == 1 {
            let found = leaf_neighbor(graph, index, valences, t, p)?;
            match found.branch {
                LeafBranch::StarCenter => audit.star_center += 1,
                LeafBranch::Procedure { .. } => audit.procedure += 1,
            }
            let q = found.neighbor;
            // A leaf-leaf edge only exists for n = 2; keep each edge once.
            if row[q] != 1 || p < q {
                edges.push((p.min(q), p.max(q)));
            }
        } else {
            for q in p + 1..n {
                if row[q] >= 2 && has_edge_internal(graph, valences, t, p, q)? {
                    edges.push((p, q));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let tree = Sst::from_edges(n, &edges).map_err(|_| AbstractError::NotATree(t))?;
    if !tree.is_spanning_tree() {
        return Err(AbstractError::NotATree(t));
    }
    Ok((tree, audit))
}

/// Recovers the labelled tree behind every vertex.
pub fn reconstruct_all_trees(graph: &TreeGraph) -> Result<AbstractReconstruction, AbstractError> {
    let stars = identify_stars_abstract(graph)?;
    let valences = ValenceProfile::new(graph, &stars)?;
    let index = CliqueIndex::build(graph)?;
    let results = par::try_map_range(graph.vertex_count(), |t| {
        reconstruct_tree(graph, &index, &valences, t as VertexId)
    })?;
    let mut branches = BranchAudit::default();
    let mut trees = Vec::with_capacity(results.len());
    for (tree, audit) in results {
        branches.star_center += audit.star_center;
        branches.procedure += audit.procedure;
        trees.push(tree);
    }
    for (label, &s) in stars.ids().iter().enumerate() {
        if trees[s as usize].star_center() != Some(label) {
            return Err(AbstractError::StarMismatch(s));
        }
    }
    Ok(AbstractReconstruction { stars, valences, trees, branches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_trees_kn, DEFAULT_MAX_KN};
    use crate::treegraph::SstTable;

    fn kn(n: usize) -> (TreeGraph, SstTable) {
        build_tree_graph(enumerate_trees_kn(n, DEFAULT_MAX_KN).unwrap()).unwrap()
    }

    #[test]
    fn k4_center_is_the_four_stars() {
        let (g, table) = kn(4);
        let stars = identify_stars_abstract(&g).unwrap();
        assert_eq!(stars.n(), 4);
        for &s in stars.ids() {
            assert!(table.tree(s).star_center().is_some());
        }
    }

    #[test]
    fn valence_matches_degrees_k5() {
        let (g, table) = kn(5);
        let stars = identify_stars_abstract(&g).unwrap();
        let centers: Vec<usize> = stars.ids().iter().map(|&s| table.tree(s).star_center().unwrap()).collect();
        let valences = ValenceProfile::new(&g, &stars).unwrap();
        for t in 0..g.vertex_count() as VertexId {
            let degrees = table.tree(t).degrees();
            for (label, &c) in centers.iter().enumerate() {
                assert_eq!(valences.get(t, label) as usize, degrees[c]);
            }
        }
        let s = stars.id(2);
        assert_eq!(valence(&stars, s, 2), 4);
    }

    #[test]
    fn k5_trees_recovered() {
        let (g, table) = kn(5);
        let rec = reconstruct_all_trees(&g).unwrap();
        let centers: Vec<usize> = rec.stars.ids().iter().map(|&s| table.tree(s).star_center().unwrap()).collect();
        for t in 0..g.vertex_count() as VertexId {
            assert_eq!(rec.trees[t as usize].relabel(&centers), *table.tree(t), "vertex {t}");
        }
        assert!(rec.rederives(&g));
        assert_eq!(rec.branches.star_center, 5 * 4);
    }

    #[test]
    fn k3_every_tree_is_a_star() {
        let (g, _) = kn(3);
        let rec = reconstruct_all_trees(&g).unwrap();
        assert!(rec.trees.iter().all(|t| t.star_center().is_some()));
        assert_eq!(rec.branches.procedure, 0);
    }

    #[test]
    fn k4_size_four_cliques_are_ambiguous() {
        let (g, _) = kn(4);
        let stars = identify_stars_abstract(&g).unwrap();
        let valences = ValenceProfile::new(&g, &stars).unwrap();
        let index = CliqueIndex::build(&g).unwrap();
        let fours: Vec<_> = index.cliques().iter().filter(|c| c.len() == 4).collect();
        assert!(!fours.is_empty());
        for c in fours {
            assert!(matches!(
                classify_clique_abstract(&c.members, &valences),
                Err(AbstractError::AmbiguousSize { size: 4, n: 4 })
            ));
        }
    }

    #[test]
    fn precondition_errors() {
        let (g, _) = kn(5);
        let stars = identify_stars_abstract(&g).unwrap();
        let valences = ValenceProfile::new(&g, &stars).unwrap();
        let index = CliqueIndex::build(&g).unwrap();
        let s0 = stars.id(0);
        assert!(matches!(
            has_edge_internal(&g, &valences, s0, 0, 1),
            Err(AbstractError::Precondition { label: 1, valence: 1, .. })
        ));
        assert!(matches!(leaf_neighbor(&g, &index, &valences, s0, 0), Err(AbstractError::Precondition { .. })));
        let found = leaf_neighbor(&g, &index, &valences, s0, 3).unwrap();
        assert_eq!(found, LeafNeighbor { neighbor: 0, branch: LeafBranch::StarCenter });
    }

    #[test]
    fn non_kn_graphs_are_rejected() {
        let path = TreeGraph::from_adjacency(vec![vec![1], vec![0, 2], vec![1]]).unwrap();
        assert!(matches!(identify_stars_abstract(&path), Err(AbstractError::CenterMismatch { .. })));
        let split = TreeGraph::from_adjacency(vec![vec![1], vec![0], vec![]]).unwrap();
        assert_eq!(identify_stars_abstract(&split).unwrap_err(), AbstractError::Disconnected);
    }
}
