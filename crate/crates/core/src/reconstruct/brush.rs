use std::collections::HashMap;

use serde::Serialize;

use super::{ReconError, StarSet};
use crate::analysis::bfs_unchecked;
use crate::par;
use crate::tree::{all_pairs, edge_count, edge_index};
use crate::treegraph::{TreeGraph, VertexId};

/// A non-star vertex lying on a shortest path between stars `p < q`.
///
/// The underlying tree joins `p` and `q`, with `k` further leaves on `p`
/// and `l` on `q`; `k = d(T, S(q))` and `l = d(T, S(p))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Brush {
    pub id: VertexId,
    pub p: usize,
    pub q: usize,
    pub k: usize,
    pub l: usize,
}

/// All brushes, grouped by star pair.
#[derive(Debug, Clone)]
pub struct BrushSet {
    n: usize,
    by_pair: Vec<Vec<Brush>>,
    by_vertex: HashMap<VertexId, Brush>,
}

impl BrushSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.by_vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_vertex.is_empty()
    }

    pub fn get(&self, v: VertexId) -> Option<&Brush> {
        self.by_vertex.get(&v)
    }

    /// Brushes of the pair `{x, y}` in ascending vertex id.
    pub fn of_pair(&self, x: usize, y: usize) -> &[Brush] {
        let (p, q) = if x < y { (x, y) } else { (y, x) };
        &self.by_pair[edge_index(self.n, p, q)]
    }

    /// Every brush, pair by pair.
    pub fn iter(&self) -> impl Iterator<Item = &Brush> {
        self.by_pair.iter().flatten()
    }
}

/// Finds every brush: non-star `T` with `d(T,S(p)) + d(T,S(q)) = n - 2`.
pub fn identify_brushes(graph: &TreeGraph, stars: &StarSet) -> Result<BrushSet, ReconError> {
    let n = stars.n();
    let target = n as u32 - 2;
    let pairs = all_pairs(n);
    let found = par::try_map_range(graph.vertex_count(), |t| {
        let t = t as VertexId;
        if stars.is_star(t) {
            return Ok(None);
        }
        let mut hit = None;
        for &(p, q) in &pairs {
            let (dp, dq) = (stars.distance(p, t), stars.distance(q, t));
            if dp.saturating_add(dq) == target {
                if hit.is_some() {
                    return Err(ReconError::AmbiguousBrush(t));
                }
                hit = Some(Brush { id: t, p, q, k: dq as usize, l: dp as usize });
            }
        }
        Ok(hit)
    })?;

    let mut by_pair = vec![Vec::new(); edge_count(n)];
    let mut by_vertex = HashMap::new();
    for brush in found.into_iter().flatten() {
        by_pair[edge_index(n, brush.p, brush.q)].push(brush);
        by_vertex.insert(brush.id, brush);
    }
    if let Some(i) = by_pair.iter().position(Vec::is_empty) {
        let (p, q) = pairs[i];
        return Err(ReconError::NoBrush(p, q));
    }
    Ok(BrushSet { n, by_pair, by_vertex })
}

/// Whether leaves `x` and `y` hang on the same centre of the brush `t`.
///
/// `t` reaches an `xy`-brush in `n - 3` steps when `x` and `y` are split,
/// and needs at least `n - 2` when they share a centre.
pub fn same_center(
    graph: &TreeGraph,
    brushes: &BrushSet,
    t: VertexId,
    x: usize,
    y: usize,
) -> Result<bool, ReconError> {
    let n = brushes.n();
    for label in [x, y] {
        if label >= n {
            return Err(ReconError::InvalidLabel(label, n));
        }
    }
    if x == y {
        return Err(ReconError::InvalidLabel(y, n));
    }
    if !graph.contains(t) {
        return Err(ReconError::NotABrush(t));
    }
    same_center_from(&bfs_unchecked(graph, t), brushes, t, x, y)
}

fn same_center_from(
    dist: &[u32],
    brushes: &BrushSet,
    t: VertexId,
    x: usize,
    y: usize,
) -> Result<bool, ReconError> {
    let floor = brushes.n() as u32 - 3;
    let nearest = brushes
        .of_pair(x, y)
        .iter()
        .map(|b| dist[b.id as usize])
        .min()
        .ok_or(ReconError::NoBrush(x.min(y), x.max(y)))?;
    match nearest {
        d if d > floor => Ok(true),
        d if d == floor => Ok(false),
        d => Err(ReconError::ImpossibleDistance { t, x, y, distance: d, floor }),
    }
}

/// The recovered leaf partition of one brush.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrushLabel {
    pub brush: VertexId,
    pub p: usize,
    pub q: usize,
    pub k: usize,
    pub l: usize,
    /// Leaves on `p`, ascending.
    pub p_side: Vec<usize>,
    /// Leaves on `q`, ascending.
    pub q_side: Vec<usize>,
    /// The leaf the chain first moved across to `q`.
    pub anchor: usize,
    /// The neighbour the label was derived from (`S(p)` when `l = 1`).
    pub predecessor: VertexId,
    pub chain_len: usize,
}

/// Labels of all brushes, ascending by vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrushLabels {
    labels: Vec<BrushLabel>,
}

impl BrushLabels {
    pub fn get(&self, v: VertexId) -> Option<&BrushLabel> {
        self.labels.binary_search_by_key(&v, |b| b.brush).ok().map(|i| &self.labels[i])
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BrushLabel> {
        self.labels.iter()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Neighbour of `brush` one step closer to `S(p)`: `S(p)` itself when
/// `l = 1`, otherwise the lowest-id `pq`-brush with `l - 1`.
fn predecessor(graph: &TreeGraph, stars: &StarSet, brushes: &BrushSet, brush: &Brush) -> Result<VertexId, ReconError> {
    if brush.l == 1 {
        return Ok(stars.id(brush.p));
    }
    graph
        .neighbors(brush.id)
        .iter()
        .copied()
        .find(|&w| {
            brushes.get(w).is_some_and(|b| b.p == brush.p && b.q == brush.q && b.l + 1 == brush.l)
        })
        .ok_or(ReconError::ChainBroken(brush.id))
}

fn step_label(
    graph: &TreeGraph,
    stars: &StarSet,
    brushes: &BrushSet,
    brush: &Brush,
    previous: Option<&BrushLabel>,
    predecessor: VertexId,
) -> Result<BrushLabel, ReconError> {
    let n = stars.n();
    let t = brush.id;
    if (brush.l == 1) != previous.is_none() {
        return Err(ReconError::ChainBroken(t));
    }
    let dist = bfs_unchecked(graph, t);
    let others: Vec<usize> = (0..n).filter(|&x| x != brush.p && x != brush.q).collect();
    let same = |x: usize, y: usize| same_center_from(&dist, brushes, t, x, y);

    let (anchor, chain_len) = match previous {
        None => {
            let mut anchors = Vec::new();
            for &x in &others {
                let mut alone = true;
                for &y in others.iter().filter(|&&y| y != x) {
                    if same(x, y)? {
                        alone = false;
                        break;
                    }
                }
                if alone {
                    anchors.push(x);
                }
            }
            match anchors.as_slice() {
                &[x] => (x, 1),
                _ => return Err(ReconError::AmbiguousAnchor(t, anchors)),
            }
        }
        Some(prev) => (prev.anchor, prev.chain_len + 1),
    };

    let mut q_side = vec![anchor];
    for &y in others.iter().filter(|&&y| y != anchor) {
        if same(anchor, y)? {
            q_side.push(y);
        }
    }
    q_side.sort_unstable();
    let p_side: Vec<usize> = others.iter().copied().filter(|x| q_side.binary_search(x).is_err()).collect();
    let extends_previous =
        previous.is_none_or(|prev| prev.q_side.iter().all(|x| q_side.binary_search(x).is_ok()));
    if q_side.len() != brush.l || p_side.len() != brush.k || !extends_previous {
        return Err(ReconError::InconsistentLabel(t));
    }
    Ok(BrushLabel {
        brush: t,
        p: brush.p,
        q: brush.q,
        k: brush.k,
        l: brush.l,
        p_side,
        q_side,
        anchor,
        predecessor,
        chain_len,
    })
}

/// Labels a single brush by walking its predecessor chain back to `S(p)`.
pub fn label_brush(
    graph: &TreeGraph,
    stars: &StarSet,
    brushes: &BrushSet,
    t: VertexId,
) -> Result<BrushLabel, ReconError> {
    let mut chain = vec![*brushes.get(t).ok_or(ReconError::NotABrush(t))?];
    let mut preds = Vec::new();
    loop {
        let last = chain.last().expect("chain is never empty");
        let pred = predecessor(graph, stars, brushes, last)?;
        preds.push(pred);
        if last.l == 1 {
            break;
        }
        chain.push(*brushes.get(pred).expect("predecessor is a brush"));
    }
    let mut label: Option<BrushLabel> = None;
    for (brush, &pred) in chain.iter().zip(&preds).rev() {
        label = Some(step_label(graph, stars, brushes, brush, label.as_ref(), pred)?);
    }
    Ok(label.expect("chain is never empty"))
}

/// Labels every brush, one `l`-level at a time so each predecessor is
/// labelled before the brushes that depend on it.
pub fn label_all_brushes(graph: &TreeGraph, stars: &StarSet, brushes: &BrushSet) -> Result<BrushLabels, ReconError> {
    let max_l = brushes.iter().map(|b| b.l).max().unwrap_or(0);
    let mut done: HashMap<VertexId, BrushLabel> = HashMap::with_capacity(brushes.len());
    for level in 1..=max_l {
        let batch: Vec<Brush> = brushes.iter().filter(|b| b.l == level).copied().collect();
        let labelled = par::try_map(&batch, |brush| {
            let pred = predecessor(graph, stars, brushes, brush)?;
            step_label(graph, stars, brushes, brush, done.get(&pred), pred)
        })?;
        done.extend(labelled.into_iter().map(|label| (label.brush, label)));
    }
    let mut labels: Vec<BrushLabel> = done.into_values().collect();
    labels.sort_unstable_by_key(|b| b.brush);
    Ok(BrushLabels { labels })
}
