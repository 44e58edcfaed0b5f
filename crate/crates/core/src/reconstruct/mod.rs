//! Blind recovery of the crossing structure from an unlabelled tree graph.
//!
//! Stages: type every maximal clique as union (U) or intersection (I), find
//! the star vertices, find the brushes between each pair of stars, work out
//! which leaves hang on which centre of every brush, and read off which
//! segment pairs can never appear together in a brush.

mod brush;
mod crossing;
mod stars;
mod typing;

pub use brush::{
    identify_brushes, label_all_brushes, label_brush, same_center, Brush, BrushLabel, BrushLabels,
    BrushSet,
};
pub use crossing::CrossingRelation;
pub use stars::{identify_stars, StarSet};
pub use typing::{all_seeds, classify_degenerate, find_seed, type_all_cliques, CliqueTyping, Seed, Tag};

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{AnalysisError, CliqueIndex};
use crate::treegraph::{TreeGraph, VertexId};

/// Smallest point count the blind pipeline handles.
pub const MIN_POINTS: usize = 5;

/// A tree graph of at most 4 points has at most 16 vertices (the spanning
/// trees of `K_4`); 5 or more points give at least 5 stars plus 20 brushes.
pub const SMALL_GRAPH_LIMIT: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconError {
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("tree graph has {0} vertices, so it comes from fewer than 5 points; reconstruction requires n >= 5")]
    GraphTooSmall(usize),
    #[error("reconstruction requires n >= 5, found {0} stars")]
    RequiresFivePoints(usize),
    #[error("no edge lies in a single maximal clique, so no typing seed exists")]
    NoSeed,
    #[error("edge {0}-{1} is not a single-clique edge")]
    NotASeed(VertexId, VertexId),
    #[error("edge {0}-{1}: its only clique has {2} members, expected at least 3")]
    DegenerateUnique(VertexId, VertexId, usize),
    #[error("clique {0} is forced to be both U and I")]
    ColoringConflict(u32),
    #[error("{0} cliques are not reachable from the seed")]
    Uncolored(usize),
    #[error("star vertices {0} and {1} are at distance {2}, expected {3}")]
    StarDistance(VertexId, VertexId, u32, u32),
    #[error("vertex {0} satisfies the brush equation for more than one pair of stars")]
    AmbiguousBrush(VertexId),
    #[error("no brush exists for stars {0} and {1}")]
    NoBrush(usize, usize),
    #[error("vertex {t} is at distance {distance} from the nearest {x}{y}-brush, below n-3 = {floor}")]
    ImpossibleDistance { t: VertexId, x: usize, y: usize, distance: u32, floor: u32 },
    #[error("brush {0} has no neighbouring brush one step closer to its first star")]
    ChainBroken(VertexId),
    #[error("brush {0}: expected one leaf separated from all others, found {1:?}")]
    AmbiguousAnchor(VertexId, Vec<usize>),
    #[error("brush {0}: leaf partition disagrees with its type or its predecessor")]
    InconsistentLabel(VertexId),
    #[error("crossing evidence for segments {0:?} is contradictory")]
    InconsistentCrossing([usize; 4]),
    #[error("label {0} out of range for {1} stars")]
    InvalidLabel(usize, usize),
    #[error("vertex {0} is not a brush")]
    NotABrush(VertexId),
}

/// Everything the blind pipeline derived.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub seed: Seed,
    pub typing: CliqueTyping,
    pub stars: StarSet,
    pub brushes: BrushSet,
    pub labels: BrushLabels,
    pub relation: CrossingRelation,
}

impl Reconstruction {
    pub fn n(&self) -> usize {
        self.stars.n()
    }

    pub fn audit(&self) -> ReconstructionAudit {
        let mut chain_lengths = vec![0usize; self.n()];
        for label in self.labels.iter() {
            chain_lengths[label.chain_len] += 1;
        }
        ReconstructionAudit {
            n: self.n(),
            seed_edge: self.seed.edge,
            seed_tag: self.seed.tag,
            u_cliques: self.typing.count(Tag::U),
            i_cliques: self.typing.count(Tag::I),
            stars: self.stars.ids().to_vec(),
            brush_count: self.brushes.len(),
            chain_length_histogram: chain_lengths,
        }
    }
}

/// Summary numbers kept in run reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReconstructionAudit {
    pub n: usize,
    pub seed_edge: (VertexId, VertexId),
    pub seed_tag: Tag,
    pub u_cliques: usize,
    pub i_cliques: usize,
    pub stars: Vec<VertexId>,
    pub brush_count: usize,
    /// Entry `i` counts brushes whose labelling chain has length `i`.
    pub chain_length_histogram: Vec<usize>,
}

/// Runs the whole blind pipeline on a tree graph.
pub fn crossing_relation(graph: &TreeGraph) -> Result<Reconstruction, ReconError> {
    if graph.vertex_count() <= SMALL_GRAPH_LIMIT {
        return Err(ReconError::GraphTooSmall(graph.vertex_count()));
    }
    let index = CliqueIndex::build(graph)?;
    reconstruct_with_index(graph, &index)
}

/// Same as [`crossing_relation`], reusing a prebuilt clique index.
pub fn reconstruct_with_index(graph: &TreeGraph, index: &CliqueIndex) -> Result<Reconstruction, ReconError> {
    let seed = find_seed(graph, index)?;
    let typing = type_all_cliques(index, &seed)?;
    let stars = identify_stars(graph, index, &typing)?;
    if stars.n() < MIN_POINTS {
        return Err(ReconError::RequiresFivePoints(stars.n()));
    }
    let brushes = identify_brushes(graph, &stars)?;
    let labels = label_all_brushes(graph, &stars, &brushes)?;
    let relation = CrossingRelation::from_labels(stars.n(), &labels)?;
    Ok(Reconstruction { seed, typing, stars, brushes, labels, relation })
}
