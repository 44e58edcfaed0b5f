use std::collections::VecDeque;

use serde::Serialize;

use super::{ReconError, SMALL_GRAPH_LIMIT};
use crate::analysis::{CliqueId, CliqueIndex, EdgeCliqueReport};
use crate::treegraph::{TreeGraph, VertexId};

/// Union clique (members share their union) or intersection clique (members
/// share their intersection).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Tag {
    U,
    I,
}

impl Tag {
    pub fn opposite(self) -> Tag {
        match self {
            Tag::U => Tag::I,
            Tag::I => Tag::U,
        }
    }
}

/// Tag of the degenerate companion of an edge lying in a single
/// non-degenerate clique.
///
/// A unique clique of size 3 means the companion is an I-clique; size 4 or
/// more means it is a U-clique.
pub fn classify_degenerate(report: &EdgeCliqueReport) -> Result<Tag, ReconError> {
    let (a, b) = report.edge;
    if !report.has_degenerate_companion || report.cliques.len() != 1 {
        return Err(ReconError::NotASeed(a, b));
    }
    match report.cliques[0].len() {
        3 => Ok(Tag::I),
        s if s >= 4 => Ok(Tag::U),
        s => Err(ReconError::DegenerateUnique(a, b, s)),
    }
}

/// A clique of known type from which the typing spreads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Seed {
    pub edge: (VertexId, VertexId),
    pub clique: CliqueId,
    pub tag: Tag,
}

/// The first single-clique edge in edge order, with its degenerate companion
/// typed.
pub fn find_seed(graph: &TreeGraph, index: &CliqueIndex) -> Result<Seed, ReconError> {
    if graph.vertex_count() <= SMALL_GRAPH_LIMIT {
        return Err(ReconError::GraphTooSmall(graph.vertex_count()));
    }
    (0..index.edges().len())
        .find(|&e| index.is_single(e))
        .map(|e| seed_at(index, e))
        .unwrap_or(Err(ReconError::NoSeed))
}

/// Every available seed, one per single-clique edge.
pub fn all_seeds(index: &CliqueIndex) -> Result<Vec<Seed>, ReconError> {
    (0..index.edges().len()).filter(|&e| index.is_single(e)).map(|e| seed_at(index, e)).collect()
}

fn seed_at(index: &CliqueIndex, e: usize) -> Result<Seed, ReconError> {
    let report = index.report(e);
    let tag = classify_degenerate(&report)?;
    Ok(Seed { edge: report.edge, clique: index.edge_slots()[e][1], tag })
}

/// A U/I tag for every clique of a [`CliqueIndex`], indexed by clique id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueTyping {
    tags: Vec<Tag>,
}

impl CliqueTyping {
    pub fn tag(&self, id: CliqueId) -> Tag {
        self.tags[id as usize]
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn count(&self, tag: Tag) -> usize {
        self.tags.iter().filter(|&&t| t == tag).count()
    }
}

/// Two-colours the cliques, the two cliques through every edge taking
/// opposite tags, starting from the seed.
pub fn type_all_cliques(index: &CliqueIndex, seed: &Seed) -> Result<CliqueTyping, ReconError> {
    let count = index.clique_count();
    let mut opposite: Vec<Vec<CliqueId>> = vec![Vec::new(); count];
    for &[a, b] in index.edge_slots() {
        opposite[a as usize].push(b);
        opposite[b as usize].push(a);
    }
    let mut tags: Vec<Option<Tag>> = vec![None; count];
    tags[seed.clique as usize] = Some(seed.tag);
    let mut queue = VecDeque::from([seed.clique]);
    while let Some(c) = queue.pop_front() {
        let want = tags[c as usize].expect("queued cliques are tagged").opposite();
        for &d in &opposite[c as usize] {
            match tags[d as usize] {
                None => {
                    tags[d as usize] = Some(want);
                    queue.push_back(d);
                }
                Some(t) if t != want => return Err(ReconError::ColoringConflict(d)),
                Some(_) => {}
            }
        }
    }
    let missing = tags.iter().filter(|t| t.is_none()).count();
    if missing > 0 {
        return Err(ReconError::Uncolored(missing));
    }
    Ok(CliqueTyping { tags: tags.into_iter().flatten().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::MaxClique;

    fn report(size: usize) -> EdgeCliqueReport {
        EdgeCliqueReport {
            edge: (0, 1),
            cliques: vec![MaxClique { members: (0..size as u32).collect(), degenerate: size == 2 }],
            has_degenerate_companion: true,
        }
    }

    #[test]
    fn degenerate_companion_classification() {
        assert_eq!(classify_degenerate(&report(3)), Ok(Tag::I));
        assert_eq!(classify_degenerate(&report(4)), Ok(Tag::U));
        assert_eq!(classify_degenerate(&report(7)), Ok(Tag::U));
        assert_eq!(classify_degenerate(&report(2)), Err(ReconError::DegenerateUnique(0, 1, 2)));
    }

    #[test]
    fn two_clique_edge_is_not_a_seed() {
        let mut r = report(3);
        r.cliques.push(MaxClique { members: vec![0, 1, 5], degenerate: false });
        r.has_degenerate_companion = false;
        assert_eq!(classify_degenerate(&r), Err(ReconError::NotASeed(0, 1)));
    }
}
