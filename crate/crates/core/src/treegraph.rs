//! The tree graph: one vertex per spanning tree, adjacent when the two edge
//! sets differ by a single exchange.
//!
//! A [`TreeGraph`] carries no trees, only opaque ids. The matching
//! [`SstTable`] stays with whoever built the graph.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::tree::{BitIter, Sst};

pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("tree {0} appears more than once")]
    DuplicateTree(String),
    #[error("trees on different vertex counts ({0} and {1})")]
    MixedSizes(usize, usize),
    #[error("vertex {0} lists itself as a neighbour")]
    SelfLoop(VertexId),
    #[error("edge {0}-{1} is not symmetric")]
    Asymmetric(VertexId, VertexId),
    #[error("neighbour {1} of vertex {0} is out of range")]
    NeighborOutOfRange(VertexId, VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeGraph {
    adjacency: Vec<Vec<VertexId>>,
}

impl TreeGraph {
    /// Validates symmetry and irreflexivity; neighbour lists are sorted and
    /// deduplicated.
    pub fn from_adjacency(mut adjacency: Vec<Vec<VertexId>>) -> Result<Self, GraphError> {
        let count = adjacency.len();
        for (v, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            for &w in list.iter() {
                if w as usize >= count {
                    return Err(GraphError::NeighborOutOfRange(v as VertexId, w));
                }
                if w as usize == v {
                    return Err(GraphError::SelfLoop(w));
                }
            }
        }
        let graph = TreeGraph { adjacency };
        for v in 0..count as VertexId {
            for &w in graph.neighbors(v) {
                if !graph.are_adjacent(w, v) {
                    return Err(GraphError::Asymmetric(v, w));
                }
            }
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (v as usize) < self.adjacency.len()
    }

    pub fn are_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.adjacency[a as usize].binary_search(&b).is_ok()
    }

    /// Every edge once, as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (a, list) in self.adjacency.iter().enumerate() {
            let a = a as VertexId;
            out.extend(list.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    /// Sorted common neighbours of `a` and `b`.
    pub fn common_neighbors(&self, a: VertexId, b: VertexId) -> Vec<VertexId> {
        let (x, y) = (self.neighbors(a), self.neighbors(b));
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(x[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }
}

/// Ground truth behind a tree graph built from explicit trees: vertex id
/// `i` is `trees[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SstTable {
    trees: Vec<Sst>,
}

impl SstTable {
    pub fn tree(&self, id: VertexId) -> &Sst {
        &self.trees[id as usize]
    }

    pub fn trees(&self) -> &[Sst] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn id_of(&self, tree: &Sst) -> Option<VertexId> {
        self.trees.binary_search(tree).ok().map(|i| i as VertexId)
    }

    /// The table seen through a vertex relabelling: entry `new` holds the
    /// tree of old vertex `perm.to_old(new)`.
    pub fn permuted(&self, perm: &VertexPermutation) -> Vec<Sst> {
        (0..self.trees.len() as VertexId).map(|new| self.trees[perm.to_old(new) as usize]).collect()
    }
}

/// Builds the tree graph of a set of trees. Ids follow canonical tree order.
///
/// Adjacency comes from bucketing every tree under each of its one-edge
/// deletions: two distinct trees sharing a deletion differ in exactly two
/// edges.
pub fn build_tree_graph(mut trees: Vec<Sst>) -> Result<(TreeGraph, SstTable), GraphError> {
    if let Some(first) = trees.first() {
        if let Some(other) = trees.iter().find(|t| t.n() != first.n()) {
            return Err(GraphError::MixedSizes(first.n(), other.n()));
        }
    }
    trees.sort_unstable();
    if let Some(w) = trees.windows(2).find(|w| w[0] == w[1]) {
        return Err(GraphError::DuplicateTree(w[0].to_string()));
    }

    let mut buckets: HashMap<u64, Vec<VertexId>> = HashMap::with_capacity(trees.len() * 4);
    for (id, tree) in trees.iter().enumerate() {
        for bit in BitIter(tree.mask()) {
            buckets.entry(tree.mask() & !(1u64 << bit)).or_default().push(id as VertexId);
        }
    }
    let mut adjacency = vec![Vec::new(); trees.len()];
    for members in buckets.values() {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                adjacency[a as usize].push(b);
                adjacency[b as usize].push(a);
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok((TreeGraph { adjacency }, SstTable { trees }))
}

/// A relabelling of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPermutation {
    new_of_old: Vec<VertexId>,
    old_of_new: Vec<VertexId>,
}

impl VertexPermutation {
    pub fn from_new_of_old(new_of_old: Vec<VertexId>) -> Self {
        let mut old_of_new = vec![0; new_of_old.len()];
        for (old, &new) in new_of_old.iter().enumerate() {
            old_of_new[new as usize] = old as VertexId;
        }
        VertexPermutation { new_of_old, old_of_new }
    }

    pub fn to_new(&self, old: VertexId) -> VertexId {
        self.new_of_old[old as usize]
    }

    pub fn to_old(&self, new: VertexId) -> VertexId {
        self.old_of_new[new as usize]
    }

    pub fn len(&self) -> usize {
        self.new_of_old.len()
    }

    pub fn is_empty(&self) -> bool {
        self.new_of_old.is_empty()
    }
}

/// Relabels vertices with a seeded pseudorandom permutation.
pub fn shuffle_vertices(graph: &TreeGraph, seed: u64) -> (TreeGraph, VertexPermutation) {
    let count = graph.vertex_count();
    let mut new_of_old: Vec<VertexId> = (0..count as VertexId).collect();
    new_of_old.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let perm = VertexPermutation::from_new_of_old(new_of_old);
    let adjacency = (0..count as VertexId)
        .map(|new| {
            let mut list: Vec<VertexId> =
                graph.neighbors(perm.to_old(new)).iter().map(|&w| perm.to_new(w)).collect();
            list.sort_unstable();
            list
        })
        .collect();
    (TreeGraph { adjacency }, perm)
}
