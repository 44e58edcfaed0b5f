use std::time::Instant;

use serde::Serialize;

use super::instance::instance_digest;
use super::report::{AbstractSummary, Check, FailureKind, RunReport};
use super::truth::{self, GroundTruth, VerificationStats};
use crate::abstract_kn::{classify_all_cliques, identify_stars_abstract, reconstruct_all_trees, ValenceProfile};
use crate::analysis::{diameter, CliqueIndex};
use crate::automorphism::{automorphism_count, DEFAULT_AUTOMORPHISM_CAP};
use crate::enumerate::{enumerate_ssts, enumerate_trees_kn, EnumError, DEFAULT_MAX_KN, DEFAULT_MAX_SSTS};
use crate::geometry::PointSet;
use crate::reconstruct::{reconstruct_with_index, Tag, MIN_POINTS};
use crate::tree::Sst;
use crate::treegraph::{build_tree_graph, shuffle_vertices, SstTable, TreeGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructOptions {
    pub shuffle_seed: u64,
    pub max_ssts: usize,
    /// Run the clique, `D_T`, seed, star/brush and same-centre suites too.
    pub extended: bool,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions { shuffle_seed: 0, max_ssts: DEFAULT_MAX_SSTS, extended: false }
    }
}

/// A report together with the extended-check counters.
#[derive(Debug, Clone)]
pub struct ReconstructRun {
    pub report: RunReport,
    pub stats: VerificationStats,
}

fn enum_failure(e: &EnumError) -> FailureKind {
    match e {
        EnumError::CapExceeded(_) | EnumError::SizeOutOfRange { .. } => FailureKind::ResourceCap,
        EnumError::TooFewPoints(_) => FailureKind::Input,
    }
}

/// Enumerate, build `G(P)`, shuffle ids, reconstruct blind, and compare
/// with the coordinates through the star correspondence.
pub fn run_reconstruct(points: &PointSet, opts: &ReconstructOptions) -> ReconstructRun {
    let n = points.len();
    let command = if opts.extended { "verify" } else { "reconstruct" };
    let mut report = RunReport::new(command, n, opts.shuffle_seed);
    report.instance_digest = Some(instance_digest(points));
    let mut stats = VerificationStats::default();
    if n < MIN_POINTS {
        report.fail("input", FailureKind::Input, format!("reconstruction requires n >= 5 points, got {n}"));
        return ReconstructRun { report: report.finish(), stats };
    }

    let start = Instant::now();
    let trees = match enumerate_ssts(points, opts.max_ssts) {
        Ok(t) => t,
        Err(e) => {
            report.fail("enumerate", enum_failure(&e), &e);
            return ReconstructRun { report: report.finish(), stats };
        }
    };
    report.sst_count = Some(trees.len());
    report.time("enumerate", start);

    let start = Instant::now();
    let (graph, table) = build_tree_graph(trees).expect("enumerated trees are distinct and equal-sized");
    let (shuffled, perm) = shuffle_vertices(&graph, opts.shuffle_seed);
    report.tree_graph_edges = Some(shuffled.edge_count());
    report.time("tree-graph", start);

    let start = Instant::now();
    report.diameter = diameter(&shuffled);
    let bound = 2 * n as u32 - 4;
    report.checks.push(Check::new("graph_connected", report.diameter.is_some(), ""));
    report.checks.push(Check::new(
        "diameter_bound",
        report.diameter.is_some_and(|d| d <= bound),
        format!("diameter {:?}, bound 2n-4 = {bound}", report.diameter),
    ));
    report.time("diameter", start);

    let start = Instant::now();
    let index = match CliqueIndex::build(&shuffled) {
        Ok(i) => i,
        Err(e) => {
            report.fail("cliques", FailureKind::Pipeline, &e);
            return ReconstructRun { report: report.finish(), stats };
        }
    };
    let rec = match reconstruct_with_index(&shuffled, &index) {
        Ok(r) => r,
        Err(e) => {
            report.fail("reconstruct", FailureKind::Pipeline, &e);
            return ReconstructRun { report: report.finish(), stats };
        }
    };
    report.time("reconstruct", start);
    report.crossing_digest = Some(rec.relation.digest());
    report.reconstruction = Some(rec.audit());

    let start = Instant::now();
    let truth = GroundTruth { points, table: &table, perm: &perm };
    report.checks.push(Check::new("star_count", rec.n() == n, format!("{} stars for {n} points", rec.n())));
    let Some(centers) = truth.star_centers(&rec.stars) else {
        report.checks.push(Check::new("star_correspondence", false, "identified stars are not n distinct stars"));
        return ReconstructRun { report: report.finish(), stats };
    };
    report.checks.push(Check::new("star_correspondence", true, format!("label -> point {centers:?}")));
    report.checks.push(truth::crossing_check(&rec.relation, &centers, points, &mut stats));

    if opts.extended {
        report.checks.extend(truth::clique_checks(&index, &rec.typing, &truth, &mut stats));
        report.checks.push(truth::dt_check(&shuffled, &index, &mut stats));
        report.checks.push(truth::seed_independence_check(&index, &rec.typing, &mut stats));
        report.checks.extend(truth::star_brush_checks(&rec, &centers, &truth));
        report.checks.push(truth::same_center_check(&shuffled, &rec.brushes, &centers, &truth, &mut stats));
    }
    report.time("verify", start);
    ReconstructRun { report: report.finish(), stats }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractOptions {
    pub shuffle_seed: u64,
    pub max_n: usize,
    pub automorphism_cap: usize,
}

impl Default for AbstractOptions {
    fn default() -> Self {
        AbstractOptions { shuffle_seed: 0, max_n: DEFAULT_MAX_KN, automorphism_cap: DEFAULT_AUTOMORPHISM_CAP }
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Calls `visit` on every permutation of `0..n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            perm.swap(if i % 2 == 0 { 0 } else { c[i] }, i);
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Number of label permutations `σ` with `σ(recovered[v]) = truth(v)` for
/// every vertex.
pub fn matching_permutations(recovered: &[Sst], truth: impl Fn(VertexId) -> Sst) -> usize {
    let Some(n) = recovered.first().map(Sst::n) else { return 0 };
    let expected: Vec<Sst> = (0..recovered.len() as VertexId).map(truth).collect();
    let mut count = 0;
    for_each_permutation(n, |perm| {
        if recovered.iter().zip(&expected).all(|(r, e)| r.relabel(perm) == *e) {
            count += 1;
        }
    });
    count
}

/// Build `G(K_n)`, shuffle, recover every tree blind, search for the label
/// permutation, and count automorphisms when within the cap.
pub fn run_abstract(n: usize, opts: &AbstractOptions) -> RunReport {
    let mut report = RunReport::new("abstract-kn", n, opts.shuffle_seed);
    if n < 3 {
        report.fail("input", FailureKind::Input, format!("n = {n}; the abstract suite needs n >= 3"));
        return report.finish();
    }
    let start = Instant::now();
    let trees = match enumerate_trees_kn(n, opts.max_n) {
        Ok(t) => t,
        Err(e) => {
            report.fail("enumerate", enum_failure(&e), &e);
            return report.finish();
        }
    };
    report.sst_count = Some(trees.len());
    let (graph, table) = build_tree_graph(trees).expect("labelled trees are distinct");
    let (shuffled, perm) = shuffle_vertices(&graph, opts.shuffle_seed);
    report.tree_graph_edges = Some(shuffled.edge_count());
    report.time("tree-graph", start);

    let truth = |v: VertexId| *table.tree(perm.to_old(v));
    let mut summary = AbstractSummary {
        vertices: shuffled.vertex_count(),
        branches: None,
        matching_permutations: None,
        automorphism_count: None,
    };

    let start = Instant::now();
    match identify_stars_abstract(&shuffled) {
        Ok(stars) => {
            report.checks.push(Check::new("center_size", stars.n() == n, format!("{} central vertices", stars.n())));
            let centers: Option<Vec<usize>> = stars.ids().iter().map(|&s| truth(s).star_center()).collect();
            let valence_ok = match (&centers, ValenceProfile::new(&shuffled, &stars)) {
                (Some(c), Ok(valences)) => (0..shuffled.vertex_count() as VertexId).all(|t| {
                    let degrees = truth(t).degrees();
                    (0..n).all(|label| valences.get(t, label) as usize == degrees[c[label]])
                }),
                _ => false,
            };
            report.checks.push(Check::new("valence_formula", valence_ok, "delta_T(v) = n-1-d(T,S(v)) for all T, v"));
        }
        Err(e) => {
            report.fail("stars", FailureKind::Pipeline, &e);
        }
    }
    report.time("stars", start);

    if report.failure.is_none() {
        let start = Instant::now();
        match reconstruct_all_trees(&shuffled) {
            Ok(rec) => {
                summary.branches = Some(rec.branches);
                let matches = matching_permutations(&rec.trees, truth);
                summary.matching_permutations = Some(matches);
                report.checks.push(Check::new(
                    "trees_up_to_label_permutation",
                    matches >= 1,
                    format!("{matches} label permutations reproduce all {} trees", rec.trees.len()),
                ));
                report.checks.push(Check::new("rederives_graph", rec.rederives(&shuffled), ""));
                report.checks.push(abstract_typing_check(&shuffled, &rec.valences, &truth, n));
            }
            Err(e) => report.fail("reconstruct-trees", FailureKind::Pipeline, &e),
        }
        report.time("reconstruct-trees", start);
    }

    let start = Instant::now();
    match automorphism_count(&shuffled, opts.automorphism_cap) {
        Ok(count) => {
            summary.automorphism_count = Some(count);
            report.checks.push(Check::new(
                "automorphism_count",
                count == factorial(n),
                format!("|Aut| = {count}, n! = {}", factorial(n)),
            ));
        }
        Err(cap) => report.checks.push(Check::skipped("automorphism_count", format!("cap: {cap}"))),
    }
    report.time("automorphisms", start);
    report.abstract_summary = Some(summary);
    report.finish()
}

fn abstract_typing_check(
    graph: &TreeGraph,
    valences: &ValenceProfile,
    truth: &impl Fn(VertexId) -> Sst,
    n: usize,
) -> Check {
    let index = match CliqueIndex::build(graph) {
        Ok(i) => i,
        Err(e) => return Check::new("clique_typing_ground_truth", false, e.to_string()),
    };
    let blind = match classify_all_cliques(&index, valences) {
        Ok(t) => t,
        Err(e) => return Check::new("clique_typing_ground_truth", false, e.to_string()),
    };
    let wrong = index
        .cliques()
        .iter()
        .zip(&blind)
        .filter(|(c, &tag)| {
            let masks = c.members.iter().map(|&v| truth(v).mask());
            let union = masks.clone().fold(0u64, |a, m| a | m).count_ones() as usize;
            let inter = masks.fold(u64::MAX, |a, m| a & m).count_ones() as usize;
            let expected = if union == n { Tag::U } else { Tag::I };
            debug_assert!(union == n || inter == n - 2);
            tag != expected
        })
        .count();
    Check::new(
        "clique_typing_ground_truth",
        wrong == 0,
        format!("{wrong} of {} cliques mistyped", index.clique_count()),
    )
}

/// Counts and structure of `G(P)` without reconstruction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerateSummary {
    pub instance_digest: String,
    pub n: usize,
    pub sst_count: usize,
    pub tree_graph_edges: usize,
    pub diameter: Option<u32>,
    pub trees: Option<Vec<Sst>>,
}

pub fn run_enumerate(points: &PointSet, max_ssts: usize, list_trees: bool) -> Result<EnumerateSummary, EnumError> {
    let trees = enumerate_ssts(points, max_ssts)?;
    let (graph, table): (TreeGraph, SstTable) = build_tree_graph(trees).expect("enumerated trees are distinct");
    Ok(EnumerateSummary {
        instance_digest: instance_digest(points),
        n: points.len(),
        sst_count: table.len(),
        tree_graph_edges: graph.edge_count(),
        diameter: diameter(&graph),
        trees: list_trees.then(|| table.trees().to_vec()),
    })
}
