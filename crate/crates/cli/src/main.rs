//! `dpm` — generate, reduce, verify, and minimize distance-preserving
//! minor instances.
//!
//! Exit codes: 0 on success, 1 when a verification verdict fails, 2 on
//! usage or input errors.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dpm_core::gen;
use dpm_core::io as fmt;
use dpm_core::reduce::{reduce_naive, reduce_tw};
use dpm_core::td::heuristic_tree_decomposition;
use dpm_core::verify::{
    size_bound_report, verify_distance_preserving, verify_domination, verify_witness_replay,
    SizeFamily,
};
use dpm_core::{
    minimize_exact, Graph, Length, SearchBudget, TreeDecomposition, VertexId, Witness,
};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(
    name = "dpm",
    about = "Distance-preserving minors: generators, reductions, and verification oracles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark instance
    Generate {
        #[command(subcommand)]
        family: GenerateFamily,
    },
    /// Reduce a graph to a distance-preserving minor
    Reduce(ReduceArgs),
    /// Verify a reduction: distance preservation, domination, witness replay
    Verify(VerifyArgs),
    /// Exhaustively search the minimum distance-preserving minor (tiny graphs)
    Minimize(MinimizeArgs),
    /// Run the benchmark families and tabulate measured sizes against bounds
    Report(ReportArgs),
}

#[derive(Subcommand)]
enum GenerateFamily {
    /// Path of n unit-length edges, endpoints terminal
    Path {
        /// number of edges
        #[arg(long)]
        edges: u32,
        /// edge length (integer, decimal, or a/b)
        #[arg(long, default_value = "1")]
        length: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Complete binary tree, leaves terminal
    Cbt {
        #[arg(long)]
        depth: u32,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// k-by-k lower-bound grid with exact rational vertical lengths
    Grid {
        #[arg(long)]
        k: u32,
        /// lift the default cap of k <= 16
        #[arg(long)]
        allow_large: bool,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// k/p disjoint p-by-p grids with a bundled width-p tree decomposition
    TwFamily {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(short, long)]
        out: PathBuf,
        /// write the bundled tree decomposition here
        #[arg(long)]
        td: Option<PathBuf>,
    },
    /// Random line arrangement in the unit square (approximate lengths)
    Arrangement {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ReduceArgs {
    /// input graph file
    #[arg(short = 'g', long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Algorithm::Naive)]
    algorithm: Algorithm,
    /// tree decomposition file (tw only; heuristic min-fill when omitted)
    #[arg(long)]
    td: Option<PathBuf>,
    /// output graph file
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// write the minor witness here
    #[arg(short = 'w', long)]
    witness: Option<PathBuf>,
    /// write recursion statistics here (tw only)
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Naive,
    Tw,
}

#[derive(Args)]
struct VerifyArgs {
    /// original graph file
    #[arg(short = 'g', long)]
    graph: PathBuf,
    /// reduced graph file
    #[arg(short = 'r', long)]
    reduced: PathBuf,
    /// witness file to replay
    #[arg(short = 'w', long)]
    witness: Option<PathBuf>,
    /// also check a size bound for this family
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    /// bag-size bound q for --family tw
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Tree,
    General,
    Tw,
}

#[derive(Args)]
struct MinimizeArgs {
    #[arg(short = 'g', long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    max_states: usize,
    #[arg(long, default_value_t = 10)]
    max_vertices: usize,
    #[arg(long)]
    time_limit_ms: Option<u64>,
}

#[derive(Args)]
struct ReportArgs {
    /// write the table here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate { family } => {
            cmd_generate(family)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce(args) => {
            cmd_reduce(args)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => cmd_verify(args),
        Command::Minimize(args) => {
            cmd_minimize(args)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Report(args) => {
            cmd_report(args)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Write via a temp file and rename, so readers never see partial output.
fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().unwrap_or_default().to_string_lossy()
        )),
        None => PathBuf::from(format!(
            ".{}.tmp",
            path.file_name().unwrap_or_default().to_string_lossy()
        )),
    };
    std::fs::write(&tmp, content).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    fmt::read_graph(&text).map_err(|e| anyhow!("{}: {}", path.display(), e))
}

fn load_witness(path: &Path) -> Result<Witness> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    fmt::read_witness(&text).map_err(|e| anyhow!("{}: {}", path.display(), e))
}

fn load_td(path: &Path) -> Result<TreeDecomposition> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    fmt::read_td(&text).map_err(|e| anyhow!("{}: {}", path.display(), e))
}

fn cmd_generate(family: GenerateFamily) -> Result<()> {
    match family {
        GenerateFamily::Path { edges, length, out } => {
            let len = Length::parse(&length, dpm_core::LengthMode::Exact)
                .map_err(|e| anyhow!("bad --length: {}", e))?;
            let (g, _) = gen::gen_path(edges, len)?;
            write_atomic(&out, &fmt::write_graph(&g))?;
            println!(
                "wrote path instance: {} vertices, {} edges -> {}",
                g.vertex_count(),
                g.edge_count(),
                out.display()
            );
        }
        GenerateFamily::Cbt { depth, out } => {
            let (g, r) = gen::gen_complete_binary_tree(depth)?;
            write_atomic(&out, &fmt::write_graph(&g))?;
            println!(
                "wrote complete binary tree: {} vertices, {} terminals -> {}",
                g.vertex_count(),
                r.len(),
                out.display()
            );
        }
        GenerateFamily::Grid { k, allow_large, out } => {
            let cap = if allow_large { u32::MAX } else { gen::GRID_K_CAP };
            let (g, r) = gen::gen_grid_lb_with_cap(k, cap)?;
            write_atomic(&out, &fmt::write_graph(&g))?;
            println!(
                "wrote grid instance: {} vertices, {} edges, {} terminals -> {}",
                g.vertex_count(),
                g.edge_count(),
                r.len(),
                out.display()
            );
        }
        GenerateFamily::TwFamily { p, k, out, td } => {
            let (g, r, decomposition) = gen::gen_tw_family(p, k)?;
            write_atomic(&out, &fmt::write_graph(&g))?;
            if let Some(td_path) = td {
                write_atomic(
                    &td_path,
                    &fmt::write_td(&decomposition, g.vertex_count()),
                )?;
            }
            println!(
                "wrote {} disjoint {}x{} blocks: {} vertices, {} terminals -> {}",
                k / p,
                p,
                p,
                g.vertex_count(),
                r.len(),
                out.display()
            );
        }
        GenerateFamily::Arrangement { k, seed, out } => {
            let arr = gen::gen_line_arrangement(k, seed)?;
            write_atomic(&out, &fmt::write_graph(&arr.graph))?;
            println!(
                "wrote arrangement: {} vertices ({} cross, {} within-family intersections), seed {} -> {}",
                arr.graph.vertex_count(),
                arr.cross_vertices.len(),
                arr.within_vertices.len(),
                arr.seed_used,
                out.display()
            );
        }
    }
    Ok(())
}

fn cmd_reduce(args: ReduceArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let r = g.terminals();
    let (result, stats) = match args.algorithm {
        Algorithm::Naive => (reduce_naive(&g, &r)?, None),
        Algorithm::Tw => {
            let td = match &args.td {
                Some(path) => load_td(path)?,
                None => {
                    let td = heuristic_tree_decomposition(&g);
                    eprintln!("heuristic tree decomposition width {}", td.width());
                    td
                }
            };
            let (res, stats) = reduce_tw(&g, &r, &td)?;
            (res, Some(stats))
        }
    };
    println!(
        "reduced {} vertices / {} edges to {} vertices / {} edges ({} ops)",
        g.vertex_count(),
        g.edge_count(),
        result.reduced.vertex_count(),
        result.reduced.edge_count(),
        result.witness.len()
    );
    if let Some(out) = &args.out {
        write_atomic(out, &fmt::write_graph(&result.reduced))?;
    }
    if let Some(wpath) = &args.witness {
        write_atomic(wpath, &fmt::write_witness(&result.witness))?;
    }
    if let Some(spath) = &args.stats {
        match stats {
            Some(s) => write_atomic(spath, &fmt::write_stats(&s))?,
            None => bail!("--stats requires --algorithm tw"),
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let g = load_graph(&args.graph)?;
    let reduced = load_graph(&args.reduced)?;
    let r: Vec<VertexId> = g.terminals().into_iter().collect();
    let mut pass = true;

    let report = verify_distance_preserving(&g, &reduced, &r)?;
    let violated = report.violations().count();
    for ((u, v), verdict) in report.violations() {
        if let dpm_core::verify::PairVerdict::Violated { original, reduced } = verdict {
            println!(
                "pair {} {}: violated (original {}, reduced {})",
                u,
                v,
                original
                    .as_ref()
                    .map(|l| l.to_string())
                    .unwrap_or_else(|| "absent".into()),
                reduced
                    .as_ref()
                    .map(|l| l.to_string())
                    .unwrap_or_else(|| "absent".into()),
            );
        }
    }
    println!(
        "distances: {} pairs checked, {} violated -> {}",
        report.pairs.len(),
        violated,
        if report.pass() { "ok" } else { "FAIL" }
    );
    pass &= report.pass();

    // surviving vertices map back to originals by identity
    let map: BTreeMap<VertexId, VertexId> = reduced.vertices().map(|v| (v, v)).collect();
    for v in reduced.vertices() {
        if !g.has_vertex(v) {
            bail!("reduced vertex {} does not exist in the original", v);
        }
    }
    let dom = verify_domination(&g, &reduced, &map)?;
    match &dom {
        dpm_core::verify::DominationVerdict::Holds { pairs_checked } => {
            println!("domination: ok ({} pairs)", pairs_checked);
        }
        dpm_core::verify::DominationVerdict::Violated { u, v, original, reduced } => {
            println!(
                "domination: FAIL at pair {} {} (original {}, reduced {})",
                u,
                v,
                original,
                reduced
                    .as_ref()
                    .map(|l| l.to_string())
                    .unwrap_or_else(|| "absent".into())
            );
        }
    }
    pass &= dom.pass();

    let mut witness_checked = false;
    if let Some(wpath) = &args.witness {
        let w = load_witness(wpath)?;
        // raw index values do not cross the file boundary; compare the
        // dense normal forms, whose index order is the semantic content
        let replayed = dpm_core::replay_witness(&g, &w)?;
        let verdict = if replayed.reindexed_dense() == reduced.reindexed_dense() {
            dpm_core::verify::ReplayVerdict::Match
        } else {
            verify_witness_replay(&g, &w, &reduced)?
        };
        match &verdict {
            dpm_core::verify::ReplayVerdict::Match => println!("witness: ok ({} ops)", w.len()),
            dpm_core::verify::ReplayVerdict::Mismatch(why) => {
                println!("witness: FAIL ({})", why)
            }
        }
        pass &= verdict.pass();
        witness_checked = true;
    }

    let mut size_line = String::from("size: not checked");
    if let Some(kind) = args.family {
        let family = match kind {
            FamilyKind::Tree => SizeFamily::Tree,
            FamilyKind::General => SizeFamily::General,
            FamilyKind::Tw => SizeFamily::Tw(args.q.context("--family tw needs --q")?),
        };
        let rep = size_bound_report(&reduced, family, r.len());
        size_line = format!("size: {}", rep);
        println!("{}", size_line);
        pass &= rep.pass;
    }

    println!(
        "summary pass={} pairs={} violated={} domination={} witness={} {}",
        u8::from(pass),
        report.pairs.len(),
        violated,
        if dom.pass() { "ok" } else { "fail" },
        if witness_checked { "checked" } else { "skipped" },
        size_line
    );
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_minimize(args: MinimizeArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let r: Vec<VertexId> = g.terminals().into_iter().collect();
    let budget = SearchBudget {
        max_states: args.max_states,
        max_vertices: args.max_vertices,
        time_limit: args.time_limit_ms.map(Duration::from_millis),
    };
    let out = minimize_exact(&g, &r, &budget)?;
    if out.exhaustive {
        println!(
            "minimum distance-preserving minor: {} vertices (exhaustive, {} states)",
            out.min_vertices, out.states_explored
        );
    } else {
        println!(
            "budget exceeded after {} states; best found <= {} vertices",
            out.states_explored, out.min_vertices
        );
    }
    println!("witness ops: {}", out.witness.len());
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let mut lines: Vec<String> = Vec::new();
    lines.push(format!(
        "{:<14} {:>4} {:>6} {:>6} {:>10} {:>10}  {}",
        "family", "k", "|V|", "|V'|", "measured", "bound", "verdict"
    ));

    // trees: the naive reduction meets 2k-2 exactly on complete binary trees
    for depth in 1..=4u32 {
        let (g, r) = gen::gen_complete_binary_tree(depth)?;
        let res = reduce_naive(&g, &r)?;
        let k = r.len();
        let rep = size_bound_report(&res.reduced, SizeFamily::Tree, k);
        lines.push(format!(
            "{:<14} {:>4} {:>6} {:>6} {:>10} {:>10}  {}",
            "trees",
            k,
            g.vertex_count(),
            rep.v_out,
            format!("|V'|={}", rep.v_out),
            format!("2k-2={}", 2 * k - 2),
            if rep.pass { "ok" } else { "FAIL" }
        ));
    }

    // planar / general: the lower-bound grid against the k + k^4 form
    for k in [4u32, 6, 8] {
        let (g, r) = gen::gen_grid_lb(k)?;
        let res = reduce_naive(&g, &r)?;
        let rep = size_bound_report(&res.reduced, SizeFamily::General, r.len());
        lines.push(format!(
            "{:<14} {:>4} {:>6} {:>6} {:>10} {:>10}  {}",
            "grid",
            r.len(),
            g.vertex_count(),
            rep.v_out,
            format!("|V'|={}", rep.v_out),
            format!("k+k^4={}", rep.v_bound.unwrap()),
            if rep.pass { "ok" } else { "FAIL" }
        ));
    }

    // bounded treewidth: disjoint grid blocks; |V'| grows linearly in k
    let mut prev: Option<usize> = None;
    for k in [32u32, 64] {
        let (g, r, td) = gen::gen_tw_family(4, k)?;
        let (res, stats) = reduce_tw(&g, &r, &td)?;
        let rep = size_bound_report(&res.reduced, SizeFamily::Tw(stats.q), r.len());
        let scale = prev
            .map(|p| format!("x{:.2}", rep.v_out as f64 / p as f64))
            .unwrap_or_else(|| "-".into());
        lines.push(format!(
            "{:<14} {:>4} {:>6} {:>6} {:>10} {:>10}  {}",
            "tw(p=4)",
            r.len(),
            g.vertex_count(),
            rep.v_out,
            format!("|V'|/q^3k={:.3}", rep.ratio.unwrap()),
            scale,
            "ok"
        ));
        prev = Some(rep.v_out);
    }

    let table = lines.join("\n") + "\n";
    match args.out {
        Some(path) => write_atomic(&path, &table)?,
        None => print!("{}", table),
    }
    Ok(())
}
