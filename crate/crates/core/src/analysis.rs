//! Structural analysis of an abstract tree graph: distances, the maximal
//! cliques through each edge, and the clique-incidence graph `D_T` of a
//! vertex. Nothing here looks at trees or coordinates.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::par;
use crate::treegraph::{TreeGraph, VertexId};

/// Distance value for vertices not reachable from the BFS source.
pub const UNREACHABLE: u32 = u32::MAX;

pub type CliqueId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("vertex {0} does not exist")]
    InvalidVertex(VertexId),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(VertexId, VertexId),
    #[error("edge {0}-{1}: common neighbours {2:?} are grouped together but not pairwise adjacent")]
    NotAClique(VertexId, VertexId, Vec<VertexId>),
    #[error("edge {0}-{1} lies in {2} maximal cliques; a tree graph allows at most two")]
    TooManyCliques(VertexId, VertexId, usize),
    #[error("edge {0}-{1} has no common neighbour: both of its cliques are degenerate")]
    BothDegenerate(VertexId, VertexId),
    #[error("no clique report covers edge {0}-{1}")]
    MissingReport(VertexId, VertexId),
}

pub fn bfs_distances(graph: &TreeGraph, source: VertexId) -> Result<Vec<u32>, AnalysisError> {
    if !graph.contains(source) {
        return Err(AnalysisError::InvalidVertex(source));
    }
    Ok(bfs_unchecked(graph, source))
}

pub(crate) fn bfs_unchecked(graph: &TreeGraph, source: VertexId) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; graph.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source as usize] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u as usize] + 1;
        for &w in graph.neighbors(u) {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Eccentricity of every vertex; [`UNREACHABLE`] marks a disconnected graph.
pub fn eccentricities(graph: &TreeGraph) -> Vec<u32> {
    par::map_range(graph.vertex_count(), |v| {
        bfs_unchecked(graph, v as VertexId).into_iter().max().unwrap_or(0)
    })
}

pub fn is_connected(graph: &TreeGraph) -> bool {
    graph.vertex_count() == 0 || bfs_unchecked(graph, 0).iter().all(|&d| d != UNREACHABLE)
}

/// Diameter, or `None` if the graph is disconnected or empty.
pub fn diameter(graph: &TreeGraph) -> Option<u32> {
    if graph.vertex_count() == 0 || !is_connected(graph) {
        return None;
    }
    eccentricities(graph).into_iter().max()
}

/// A maximal clique, identified with its sorted member set.
///
/// `degenerate` marks the two-vertex clique `{A, B}` that stands in for the
/// missing second clique of an edge lying in only one non-trivial clique.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaxClique {
    pub members: Vec<VertexId>,
    pub degenerate: bool,
}

impl MaxClique {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn intersection_size(&self, other: &MaxClique) -> usize {
        let (mut i, mut j, mut k) = (0, 0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    k += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        k
    }

    fn pair(a: VertexId, b: VertexId) -> Self {
        MaxClique { members: vec![a.min(b), a.max(b)], degenerate: true }
    }
}

/// The maximal cliques through one edge of the tree graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCliqueReport {
    pub edge: (VertexId, VertexId),
    /// One or two cliques. A lone two-member entry means the edge has no
    /// common neighbour at all.
    pub cliques: Vec<MaxClique>,
    pub has_degenerate_companion: bool,
}

impl EdgeCliqueReport {
    /// Both cliques through the edge are `{A, B}` itself.
    pub fn is_doubly_degenerate(&self) -> bool {
        self.cliques.len() == 1 && self.cliques[0].len() == 2
    }

    /// The two-vertex companion clique, when there is one.
    pub fn companion(&self) -> Option<MaxClique> {
        self.has_degenerate_companion.then(|| MaxClique::pair(self.edge.0, self.edge.1))
    }
}

/// Splits the common neighbours of `a` and `b` into mutually adjacent groups;
/// each group plus `{a, b}` is one maximal clique through the edge.
pub fn edge_cliques(graph: &TreeGraph, a: VertexId, b: VertexId) -> Result<EdgeCliqueReport, AnalysisError> {
    for v in [a, b] {
        if !graph.contains(v) {
            return Err(AnalysisError::InvalidVertex(v));
        }
    }
    if !graph.are_adjacent(a, b) {
        return Err(AnalysisError::NotAdjacent(a, b));
    }
    let (a, b) = (a.min(b), a.max(b));
    let common = graph.common_neighbors(a, b);

    // Components of the graph induced on the common neighbours.
    let mut group = vec![usize::MAX; common.len()];
    let mut groups: Vec<Vec<VertexId>> = Vec::new();
    for start in 0..common.len() {
        if group[start] != usize::MAX {
            continue;
        }
        let g = groups.len();
        group[start] = g;
        let mut members = vec![common[start]];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..common.len() {
                if group[j] == usize::MAX && graph.are_adjacent(common[i], common[j]) {
                    group[j] = g;
                    members.push(common[j]);
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    if groups.len() > 2 {
        return Err(AnalysisError::TooManyCliques(a, b, groups.len()));
    }
    for members in &groups {
        for (i, &x) in members.iter().enumerate() {
            if members[i + 1..].iter().any(|&y| !graph.are_adjacent(x, y)) {
                return Err(AnalysisError::NotAClique(a, b, members.clone()));
            }
        }
    }
    // Maximality needs no separate check: a vertex adjacent to a whole group
    // and to a, b is a common neighbour, hence in the same component.

    let mut cliques: Vec<MaxClique> = groups
        .into_iter()
        .map(|mut members| {
            members.push(a);
            members.push(b);
            members.sort_unstable();
            MaxClique { members, degenerate: false }
        })
        .collect();
    if cliques.is_empty() {
        cliques.push(MaxClique::pair(a, b));
    }
    let has_degenerate_companion = cliques.len() == 1;
    Ok(EdgeCliqueReport { edge: (a, b), cliques, has_degenerate_companion })
}

/// Every clique of the graph, interned by member set, with each edge's two
/// cliques recorded.
///
/// Each edge lies in exactly two cliques here: two non-degenerate ones, or one
/// non-degenerate clique plus the degenerate pair.
#[derive(Debug, Clone)]
pub struct CliqueIndex {
    cliques: Vec<MaxClique>,
    edges: Vec<(VertexId, VertexId)>,
    slots: Vec<[CliqueId; 2]>,
    edge_lookup: HashMap<(VertexId, VertexId), usize>,
    by_vertex: Vec<Vec<CliqueId>>,
}

impl CliqueIndex {
    pub fn build(graph: &TreeGraph) -> Result<Self, AnalysisError> {
        let edges = graph.edges();
        let reports = par::try_map(&edges, |&(a, b)| edge_cliques(graph, a, b))?;

        let mut interned: HashMap<Vec<VertexId>, CliqueId> = HashMap::new();
        let mut cliques: Vec<MaxClique> = Vec::new();
        let mut intern = |c: MaxClique| -> CliqueId {
            *interned.entry(c.members.clone()).or_insert_with(|| {
                cliques.push(c);
                (cliques.len() - 1) as CliqueId
            })
        };
        let mut slots = Vec::with_capacity(edges.len());
        for report in reports {
            if report.is_doubly_degenerate() {
                return Err(AnalysisError::BothDegenerate(report.edge.0, report.edge.1));
            }
            let companion = report.companion();
            let mut it = report.cliques.into_iter();
            let first = intern(it.next().expect("at least one clique"));
            let second = match companion {
                Some(pair) => intern(pair),
                None => intern(it.next().expect("two cliques")),
            };
            slots.push([first, second]);
        }

        let mut by_vertex = vec![Vec::new(); graph.vertex_count()];
        for (id, c) in cliques.iter().enumerate() {
            for &v in &c.members {
                by_vertex[v as usize].push(id as CliqueId);
            }
        }
        let edge_lookup = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Ok(CliqueIndex { cliques, edges, slots, edge_lookup, by_vertex })
    }

    pub fn clique_count(&self) -> usize {
        self.cliques.len()
    }

    pub fn clique(&self, id: CliqueId) -> &MaxClique {
        &self.cliques[id as usize]
    }

    pub fn cliques(&self) -> &[MaxClique] {
        &self.cliques
    }

    /// Graph edges in lexicographic order, aligned with [`Self::edge_slots`].
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// The two cliques through each edge.
    pub fn edge_slots(&self) -> &[[CliqueId; 2]] {
        &self.slots
    }

    pub fn edge_position(&self, a: VertexId, b: VertexId) -> Option<usize> {
        self.edge_lookup.get(&(a.min(b), a.max(b))).copied()
    }

    /// The two cliques through edge `{a, b}`.
    pub fn cliques_of_edge(&self, a: VertexId, b: VertexId) -> Option<[CliqueId; 2]> {
        self.edge_position(a, b).map(|i| self.slots[i])
    }

    /// Whether the edge lies in only one non-degenerate clique.
    pub fn is_single(&self, edge: usize) -> bool {
        self.cliques[self.slots[edge][1] as usize].degenerate
    }

    /// Rebuilds the report of one edge.
    pub fn report(&self, edge: usize) -> EdgeCliqueReport {
        let [first, second] = self.slots[edge];
        let second = &self.cliques[second as usize];
        let mut cliques = vec![self.cliques[first as usize].clone()];
        if !second.degenerate {
            cliques.push(second.clone());
        }
        EdgeCliqueReport { edge: self.edges[edge], has_degenerate_companion: second.degenerate, cliques }
    }

    /// All cliques containing `v`, degenerate pairs included.
    pub fn cliques_at(&self, v: VertexId) -> &[CliqueId] {
        &self.by_vertex[v as usize]
    }

    /// Reports for every edge incident to `v`.
    pub fn reports_at(&self, graph: &TreeGraph, v: VertexId) -> Vec<EdgeCliqueReport> {
        graph
            .neighbors(v)
            .iter()
            .map(|&w| self.report(self.edge_position(v, w).expect("edge indexed")))
            .collect()
    }
}

/// Cliques containing a fixed vertex `T`, adjacent when they share exactly
/// one edge at `T` (two vertices).
#[derive(Debug, Clone)]
pub struct DtGraph {
    pub vertex: VertexId,
    pub nodes: Vec<MaxClique>,
    pub adjacency: Vec<Vec<usize>>,
}

impl DtGraph {
    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

pub fn build_dt_graph(
    graph: &TreeGraph,
    t: VertexId,
    reports: &[EdgeCliqueReport],
) -> Result<DtGraph, AnalysisError> {
    if !graph.contains(t) {
        return Err(AnalysisError::InvalidVertex(t));
    }
    let by_edge: HashMap<(VertexId, VertexId), &EdgeCliqueReport> =
        reports.iter().map(|r| (r.edge, r)).collect();
    let mut nodes: Vec<MaxClique> = Vec::new();
    for &s in graph.neighbors(t) {
        let report =
            by_edge.get(&(t.min(s), t.max(s))).ok_or(AnalysisError::MissingReport(t, s))?;
        for c in report.cliques.iter().cloned().chain(report.companion()) {
            if !nodes.iter().any(|n| n.members == c.members) {
                nodes.push(c);
            }
        }
    }
    nodes.sort_by(|x, y| x.members.cmp(&y.members));
    let adjacency = (0..nodes.len())
        .map(|i| {
            (0..nodes.len())
                .filter(|&j| j != i && nodes[i].intersection_size(&nodes[j]) == 2)
                .collect()
        })
        .collect();
    Ok(DtGraph { vertex: t, nodes, adjacency })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_ssts, DEFAULT_MAX_SSTS};
    use crate::geometry::{Point, PointSet};
    use crate::treegraph::build_tree_graph;

    fn graph_of(v: &[(i64, i64)]) -> TreeGraph {
        let ps = PointSet::new(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap();
        build_tree_graph(enumerate_ssts(&ps, DEFAULT_MAX_SSTS).unwrap()).unwrap().0
    }

    #[test]
    fn bfs_basics() {
        let g = TreeGraph::from_adjacency(vec![vec![1], vec![0, 2], vec![1], vec![]]).unwrap();
        assert_eq!(bfs_distances(&g, 0).unwrap(), vec![0, 1, 2, UNREACHABLE]);
        assert_eq!(bfs_distances(&g, 9), Err(AnalysisError::InvalidVertex(9)));
        assert!(!is_connected(&g));
        assert_eq!(diameter(&g), None);
    }

    #[test]
    fn triangle_has_one_clique_and_a_companion() {
        let g = graph_of(&[(0, 0), (4, 0), (1, 3)]);
        let r = edge_cliques(&g, 0, 1).unwrap();
        assert_eq!(r.cliques.len(), 1);
        assert_eq!(r.cliques[0].members, vec![0, 1, 2]);
        assert!(r.has_degenerate_companion);
        assert_eq!(r.companion().unwrap().members, vec![0, 1]);
    }

    #[test]
    fn non_adjacent_pair_is_rejected() {
        let g = TreeGraph::from_adjacency(vec![vec![1], vec![0], vec![]]).unwrap();
        assert_eq!(edge_cliques(&g, 0, 2), Err(AnalysisError::NotAdjacent(0, 2)));
    }

    #[test]
    fn isolated_edge_is_doubly_degenerate() {
        let g = TreeGraph::from_adjacency(vec![vec![1], vec![0]]).unwrap();
        let r = edge_cliques(&g, 0, 1).unwrap();
        assert!(r.is_doubly_degenerate());
        assert_eq!(CliqueIndex::build(&g).unwrap_err(), AnalysisError::BothDegenerate(0, 1));
    }

    #[test]
    fn three_groups_are_rejected() {
        // Edge 0-1 with three pairwise non-adjacent common neighbours.
        let g = TreeGraph::from_adjacency(vec![
            vec![1, 2, 3, 4],
            vec![0, 2, 3, 4],
            vec![0, 1],
            vec![0, 1],
            vec![0, 1],
        ])
        .unwrap();
        assert_eq!(edge_cliques(&g, 0, 1), Err(AnalysisError::TooManyCliques(0, 1, 3)));
    }

    #[test]
    fn non_clique_group_is_rejected() {
        // Common neighbours 2-3-4 form a path, not a clique.
        let g = TreeGraph::from_adjacency(vec![
            vec![1, 2, 3, 4],
            vec![0, 2, 3, 4],
            vec![0, 1, 3],
            vec![0, 1, 2, 4],
            vec![0, 1, 3],
        ])
        .unwrap();
        assert!(matches!(edge_cliques(&g, 0, 1), Err(AnalysisError::NotAClique(0, 1, _))));
    }

    #[test]
    fn convex_pentagon_dt_graphs_are_connected() {
        let g = graph_of(&[(0, 0), (4, 0), (6, 3), (2, 6), (-2, 3)]);
        let index = CliqueIndex::build(&g).unwrap();
        for t in 0..g.vertex_count() as VertexId {
            let dt = build_dt_graph(&g, t, &index.reports_at(&g, t)).unwrap();
            assert!(dt.is_connected(), "D_T of {t}");
            for (i, a) in dt.nodes.iter().enumerate() {
                for b in &dt.nodes[i + 1..] {
                    let k = a.intersection_size(b);
                    assert!(k == 1 || k == 2);
                }
            }
        }
    }

    #[test]
    fn dt_graph_requires_all_incident_reports() {
        let g = graph_of(&[(0, 0), (4, 0), (1, 3)]);
        let r = edge_cliques(&g, 0, 1).unwrap();
        assert_eq!(build_dt_graph(&g, 0, &[r]).unwrap_err(), AnalysisError::MissingReport(0, 2));
    }
}
