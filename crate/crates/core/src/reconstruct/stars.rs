use super::{CliqueTyping, ReconError, Tag};
use crate::analysis::{bfs_unchecked, CliqueIndex};
use crate::par;
use crate::treegraph::{TreeGraph, VertexId};

/// The star vertices, labelled `0..n` in ascending vertex id, with BFS
/// distances from each.
#[derive(Debug, Clone)]
pub struct StarSet {
    ids: Vec<VertexId>,
    distances: Vec<Vec<u32>>,
}

impl StarSet {
    pub(crate) fn new(ids: Vec<VertexId>, distances: Vec<Vec<u32>>) -> Self {
        StarSet { ids, distances }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, label: usize) -> VertexId {
        self.ids[label]
    }

    pub fn label_of(&self, v: VertexId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    pub fn is_star(&self, v: VertexId) -> bool {
        self.label_of(v).is_some()
    }

    /// Distance from star `label` to vertex `v`.
    pub fn distance(&self, label: usize, v: VertexId) -> u32 {
        self.distances[label][v as usize]
    }

    pub fn distances_from(&self, label: usize) -> &[u32] {
        &self.distances[label]
    }
}

/// A vertex is a star iff every U-clique containing it has exactly three
/// members. A degenerate U-companion (two members) rules a vertex out.
pub fn identify_stars(
    graph: &TreeGraph,
    index: &CliqueIndex,
    typing: &CliqueTyping,
) -> Result<StarSet, ReconError> {
    let ids: Vec<VertexId> = (0..graph.vertex_count() as VertexId)
        .filter(|&t| {
            index
                .cliques_at(t)
                .iter()
                .filter(|&&c| typing.tag(c) == Tag::U)
                .all(|&c| index.clique(c).len() == 3)
        })
        .collect();
    let distances = par::map(&ids, |&s| bfs_unchecked(graph, s));
    check_star_distances(&ids, &distances)?;
    Ok(StarSet { ids, distances })
}

/// Stars of `n` points sit pairwise at distance exactly `n - 2`.
pub(crate) fn check_star_distances(ids: &[VertexId], distances: &[Vec<u32>]) -> Result<(), ReconError> {
    let expected = ids.len().saturating_sub(2) as u32;
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            let d = distances[i][b as usize];
            if d != expected {
                return Err(ReconError::StarDistance(a, b, d, expected));
            }
        }
    }
    Ok(())
}
