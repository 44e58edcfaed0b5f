use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use geotree::enumerate::DEFAULT_MAX_SSTS;
use geotree::geometry::{PointSet, SegPair};
use geotree::harness::{
    emit_svg, generate_instance, parse_instance, run_abstract, run_enumerate, run_reconstruct, write_instance,
    AbstractOptions, GeneratorInfo, Mode, Overlay, ReconstructOptions, RunReport,
};
use geotree::tree::Sst;

const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "geotree", version, about = "Geometric tree graphs and blind recovery of crossing structure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set and write it as an instance file.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the simple spanning trees and summarise the tree graph.
    Enumerate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_SSTS)]
        max_ssts: usize,
        /// Include every tree in the output.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the crossing relation blind and check it against the coordinates.
    Reconstruct(RunArgs),
    /// Like `reconstruct`, plus the clique, connectivity, star/brush and
    /// same-centre suites.
    Verify(RunArgs),
    /// Recover all trees of K_n from its bare tree graph and count automorphisms.
    AbstractKn {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        shuffle_seed: u64,
        /// Largest vertex count for the automorphism search.
        #[arg(long, default_value_t = geotree::automorphism::DEFAULT_AUTOMORPHISM_CAP)]
        aut_cap: usize,
        #[arg(long)]
        no_timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a point set as SVG, optionally with a tree or a segment pair.
    Draw {
        #[command(flatten)]
        input: InputArgs,
        /// Tree edges as `a-b,c-d,...`.
        #[arg(long, conflicts_with = "crossing")]
        tree: Option<String>,
        /// Segment pair as `a,b,c,d`.
        #[arg(long)]
        crossing: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "random")]
    mode: String,
}

/// Either instance files or generator parameters.
#[derive(Args, Clone)]
struct InputArgs {
    /// Instance file; may be repeated where several instances are accepted.
    #[arg(long = "points", conflicts_with = "n")]
    points: Vec<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "random")]
    mode: String,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0)]
    shuffle_seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_SSTS)]
    max_ssts: usize,
    /// Instances processed concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Omit stage timings so repeated runs give identical bytes.
    #[arg(long)]
    no_timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// An input problem; reported on stderr with exit code 2 (or 3 for caps).
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

struct Instance {
    points: PointSet,
    generator: Option<GeneratorInfo>,
}

fn load(input: &InputArgs) -> Result<Vec<Instance>, Failure> {
    if let Some(n) = input.n {
        let mode: Mode = input.mode.parse().map_err(Failure::input)?;
        let points = generate_instance(n, input.seed, mode).map_err(|e| match e {
            geotree::harness::GenerateError::SizeOutOfRange { .. } => Failure { code: EXIT_CAP, message: e.to_string() },
            _ => Failure::input(e),
        })?;
        return Ok(vec![Instance { points, generator: Some(GeneratorInfo { mode: mode.to_string(), seed: input.seed }) }]);
    }
    if input.points.is_empty() {
        return Err(Failure::input("give --points FILE or --n N"));
    }
    input
        .points
        .iter()
        .map(|path| {
            let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let points = parse_instance(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            Ok(Instance { points, generator: None })
        })
        .collect()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish_report(mut report: RunReport, no_timings: bool) -> RunReport {
    if no_timings {
        report.timings = None;
    }
    report
}

fn run_many(args: &RunArgs, extended: bool) -> Result<u8, Failure> {
    let instances = load(&args.input)?;
    let opts = ReconstructOptions { shuffle_seed: args.shuffle_seed, max_ssts: args.max_ssts, extended };
    let run_one = |inst: &Instance| {
        let mut report = run_reconstruct(&inst.points, &opts).report;
        report.generator = inst.generator.clone();
        finish_report(report, args.no_timings)
    };
    let reports: Vec<RunReport> = if instances.len() > 1 && args.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build()
            .map_err(|e| Failure::input(format!("--jobs: {e}")))?;
        pool.install(|| instances.par_iter().map(run_one).collect())
    } else {
        instances.iter().map(run_one).collect()
    };
    let text = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        serde_json::to_string_pretty(&reports).expect("reports serialize")
    };
    emit(&args.out, &(text + "\n"))?;
    Ok(reports.iter().map(|r| r.exit_code() as u8).max().unwrap_or(0))
}

fn parse_tree(spec: &str, n: usize) -> Result<Sst, Failure> {
    let edges = spec
        .split(',')
        .map(|pair| {
            let (a, b) = pair.trim().split_once('-').ok_or_else(|| Failure::input(format!("bad edge {pair:?}")))?;
            let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| Failure::input(format!("bad edge {pair:?}: {e}")));
            Ok((parse(a)?, parse(b)?))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let tree = Sst::from_edges(n, &edges).map_err(Failure::input)?;
    if !tree.is_spanning_tree() {
        return Err(Failure::input(format!("--tree is not a spanning tree on {n} points")));
    }
    Ok(tree)
}

fn parse_crossing(spec: &str, n: usize) -> Result<SegPair, Failure> {
    let ids = spec
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|e| Failure::input(format!("bad index {s:?}: {e}"))))
        .collect::<Result<Vec<_>, Failure>>()?;
    match ids.as_slice() {
        &[a, b, c, d] if ids.iter().all(|&i| i < n) => Ok(SegPair::new(a, b, c, d)),
        _ => Err(Failure::input(format!("--crossing needs four indices below {n}"))),
    }
}

fn single(input: &InputArgs) -> Result<Instance, Failure> {
    let mut all = load(input)?;
    if all.len() != 1 {
        return Err(Failure::input("this command takes exactly one instance"));
    }
    Ok(all.remove(0))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Gen { gen, out } => {
            let input = InputArgs { points: Vec::new(), n: Some(gen.n), seed: gen.seed, mode: gen.mode };
            let inst = single(&input)?;
            let info = inst.generator.expect("generated");
            let header = vec![format!("generated: n={} seed={} mode={}", gen.n, info.seed, info.mode)];
            emit(&out, &write_instance(&inst.points, &header))?;
            Ok(0)
        }
        Command::Enumerate { input, max_ssts, list, out } => {
            let inst = single(&input)?;
            let summary = run_enumerate(&inst.points, max_ssts, list)
                .map_err(|e| Failure { code: EXIT_CAP, message: e.to_string() })?;
            emit(&out, &(serde_json::to_string_pretty(&summary).expect("serializes") + "\n"))?;
            Ok(0)
        }
        Command::Reconstruct(args) => run_many(&args, false),
        Command::Verify(args) => run_many(&args, true),
        Command::AbstractKn { n, shuffle_seed, aut_cap, no_timings, out } => {
            let opts = AbstractOptions { shuffle_seed, automorphism_cap: aut_cap, ..AbstractOptions::default() };
            let report = finish_report(run_abstract(n, &opts), no_timings);
            emit(&out, &(report.to_json() + "\n"))?;
            Ok(report.exit_code() as u8)
        }
        Command::Draw { input, tree, crossing, out } => {
            let inst = single(&input)?;
            let n = inst.points.len();
            let overlay = match (tree, crossing) {
                (Some(t), _) => Overlay::Tree(parse_tree(&t, n)?),
                (None, Some(c)) => Overlay::Crossing(parse_crossing(&c, n)?),
                (None, None) => Overlay::None,
            };
            emit(&out, &emit_svg(&inst.points, &overlay))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
