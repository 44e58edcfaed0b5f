//! Exact automorphism group order of a small graph.
//!
//! Vertices are coloured by degree, eccentricity and their distance
//! multiset to the graph centre, the colouring is refined by neighbour
//! colours until stable, and then every colour- and distance-preserving
//! bijection is counted by backtracking. Preserving all distances implies
//! preserving adjacency, so each complete map is an automorphism.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::analysis::bfs_unchecked;
use crate::treegraph::{TreeGraph, VertexId};

/// Vertex count of `G(K_5)`.
pub const DEFAULT_AUTOMORPHISM_CAP: usize = 125;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("graph has {vertices} vertices, above the automorphism cap of {cap}")]
pub struct CapExceeded {
    pub vertices: usize,
    pub cap: usize,
}

/// `|Aut(G)|`, for graphs with at most `cap` vertices.
pub fn automorphism_count(graph: &TreeGraph, cap: usize) -> Result<u64, CapExceeded> {
    let v = graph.vertex_count();
    if v > cap {
        return Err(CapExceeded { vertices: v, cap });
    }
    if v == 0 {
        return Ok(1);
    }
    let dist: Vec<Vec<u32>> = (0..v as VertexId).map(|s| bfs_unchecked(graph, s)).collect();
    let colors = stable_coloring(graph, &dist);

    let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (u, &c) in colors.iter().enumerate() {
        classes.entry(c).or_default().push(u);
    }
    let mut order: Vec<usize> = (0..v).collect();
    order.sort_by_key(|&u| (classes[&colors[u]].len(), colors[u], u));

    let mut search = Search { dist: &dist, colors: &colors, classes: &classes, order: &order, image: vec![usize::MAX; v], used: vec![false; v] };
    Ok(search.count(0))
}

fn stable_coloring(graph: &TreeGraph, dist: &[Vec<u32>]) -> Vec<u32> {
    let v = dist.len();
    let ecc: Vec<u32> = dist.iter().map(|row| row.iter().copied().max().unwrap_or(0)).collect();
    let radius = ecc.iter().copied().min().unwrap_or(0);
    let center: Vec<usize> = (0..v).filter(|&u| ecc[u] == radius).collect();
    let initial: Vec<(usize, u32, Vec<u32>)> = (0..v)
        .map(|u| {
            let mut profile: Vec<u32> = center.iter().map(|&c| dist[u][c]).collect();
            profile.sort_unstable();
            (graph.degree(u as VertexId), ecc[u], profile)
        })
        .collect();
    let (mut colors, mut class_count) = renumber(&initial);
    loop {
        let keys: Vec<(u32, Vec<u32>)> = (0..v)
            .map(|u| {
                let mut around: Vec<u32> = graph.neighbors(u as VertexId).iter().map(|&w| colors[w as usize]).collect();
                around.sort_unstable();
                (colors[u], around)
            })
            .collect();
        let (next, count) = renumber(&keys);
        colors = next;
        if count == class_count {
            return colors;
        }
        class_count = count;
    }
}

/// Dense colour ids in key order, plus the number of distinct keys.
fn renumber<K: Ord + Clone>(keys: &[K]) -> (Vec<u32>, usize) {
    let mut sorted: Vec<&K> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    let colors = keys.iter().map(|k| sorted.binary_search(&k).expect("present") as u32).collect();
    (colors, sorted.len())
}

struct Search<'a> {
    dist: &'a [Vec<u32>],
    colors: &'a [u32],
    classes: &'a BTreeMap<u32, Vec<usize>>,
    order: &'a [usize],
    image: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn count(&mut self, depth: usize) -> u64 {
        if depth == self.order.len() {
            return 1;
        }
        let u = self.order[depth];
        let mut total = 0;
        for &w in &self.classes[&self.colors[u]] {
            if self.used[w] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&x| self.dist[u][x] == self.dist[w][self.image[x]]);
            if consistent {
                self.image[u] = w;
                self.used[w] = true;
                total += self.count(depth + 1);
                self.used[w] = false;
            }
        }
        total
    }
}
