//! `lrc`: construct, verify and analyze binary locally repairable codes.
//!
//! Exit status: 0 success or verdict true, 1 verdict false, 2 usage or
//! parameter error, 3 work budget exceeded. Machine-readable output goes to
//! stdout, summaries to stderr. Coordinates are 1-based on the command line
//! and in every file.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lrc_core::bounds::{achievable, bound_report, compare_t3, comparison_series, comparison_tsv, length_bound};
use lrc_core::combinatorics::{build_mesh, validate_mesh};
use lrc_core::constructions::{construct_t2, construct_t3, Certificate};
use lrc_core::formats::{read_lrc, read_mesh, read_rg, write_cover, write_lrc, write_mesh, write_rg};
use lrc_core::gf2::min_distance;
use lrc_core::graphs::{
    check_out_lemma, check_structural_corollaries, classify_edges, format_edges, minimal_source_count, RepairGraph,
};
use lrc_core::repair::{is_elrc, simulate_failures};
use lrc_core::report::braces;
use lrc_core::{BitVec, LinearCode, DEFAULT_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "lrc",
    version,
    about = "Binary locally repairable codes for two and three erasures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a length-optimal code for t = 2 or t = 3.
    Construct {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        t: u8,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        /// Write the code here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the cover (t = 2) or mesh (t = 3) the code was built from.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Check that every erasure set of size at most t is locally repairable.
    Verify {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Length bounds over a range of k.
    Bounds {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        r: usize,
        /// Inclusive range `A:B`.
        #[arg(long, value_parser = parse_range)]
        k_range: (usize, usize),
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Exhaustive minimum distance.
    Mindist {
        #[arg(long)]
        code: PathBuf,
    },
    /// Erase coordinates of a random codeword and repair them one by one.
    Simulate {
        #[arg(long)]
        code: PathBuf,
        /// Comma-separated coordinates, e.g. `2,14`.
        #[arg(long, value_delimiter = ',', required = true)]
        fail: Vec<usize>,
        /// Locality; defaults to the value recorded in the code file.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Repair graph analysis.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Mesh files.
    #[command(subcommand)]
    Mesh(MeshCommand),
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Find a repair graph with fewest sources and run the structural checks.
    Analyze {
        #[arg(long, required_unless_present = "graph", conflicts_with = "graph")]
        code: Option<PathBuf>,
        /// Analyze a stored `.rg` graph instead of searching one.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        r: usize,
        /// Defaults to the value recorded in the code file.
        #[arg(long)]
        t: Option<usize>,
        /// Write the graph found for `--code`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Subcommand)]
enum MeshCommand {
    /// Check the five mesh conditions.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Build the mesh for (k, r).
    Build {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Budget {
    /// Work budget; overrides `LRC_BUDGET`.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
}

impl Budget {
    fn resolve(&self) -> Result<u64, Failure> {
        if let Some(b) = self.budget {
            return Ok(b);
        }
        match std::env::var("LRC_BUDGET") {
            Ok(v) => match v.trim().parse::<u64>() {
                Ok(b) if b > 0 => Ok(b),
                _ => Err(Failure::Usage(format!(
                    "LRC_BUDGET must be a positive integer, got {v:?}"
                ))),
            },
            Err(_) => Ok(DEFAULT_BUDGET),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    /// Plot series, `k<TAB>value` per curve (t = 3 only).
    Series,
    /// Full report per k, including reference bounds.
    Report,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or("expected A:B")?;
    let a: usize = a.parse().map_err(|_| format!("bad lower end {a:?}"))?;
    let b: usize = b.parse().map_err(|_| format!("bad upper end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

enum Failure {
    Usage(String),
    Core(lrc_core::Error),
}

impl From<lrc_core::Error> for Failure {
    fn from(e: lrc_core::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<bool, Failure>;

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_code(path: &Path) -> Result<LinearCode, Failure> {
    read_lrc(&read_file(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn construct(t: u8, k: usize, r: usize, out: Option<PathBuf>, cert: Option<PathBuf>) -> Outcome {
    let built = if t == 2 {
        construct_t2(k, r)?
    } else {
        construct_t3(k, r)?
    };
    let code = &built.code;
    let text = write_lrc(code);
    match &out {
        Some(path) => {
            write_file(path, &text)?;
            println!("n={} k={}", code.n(), code.k());
        }
        None => print!("{text}"),
    }
    if let Some(path) = cert {
        let cert_text = match &built.certificate {
            Certificate::Cover(cover) => write_cover(cover, r),
            Certificate::Mesh(mesh) => write_mesh(mesh),
        };
        write_file(&path, &cert_text)?;
    }
    eprintln!(
        "built [{}, {}] code with r={r} t={t}; length bound {}",
        code.n(),
        code.k(),
        length_bound(k, r, t as usize)?
    );
    Ok(true)
}

fn verify(path: &Path, r: usize, t: usize, budget: u64) -> Outcome {
    let code = load_code(path)?;
    let rep = is_elrc(&code, r, t, budget)?;
    print!("{rep}");
    eprintln!(
        "checked {} erasure sets, {} cross-checked against schedule search, {} failures",
        rep.checked,
        rep.cross_checked,
        rep.failures.len()
    );
    Ok(rep.verdict)
}

fn bounds(t: usize, r: usize, (lo, hi): (usize, usize), format: Format) -> Outcome {
    match (format, t) {
        (Format::Tsv, 3) => print!("{}", comparison_tsv(&compare_t3(lo, hi, r)?)),
        (Format::Series, 3) => print!("{}", comparison_series(&compare_t3(lo, hi, r)?)),
        (Format::Series, _) => return Err(Failure::Usage("plot series are available for t = 3 only".into())),
        (Format::Tsv, _) => {
            println!("k\tlength_bound\tachievable");
            for k in lo..=hi {
                match length_bound(k, r, t) {
                    Ok(n) => println!("{k}\t{n}\t{}", achievable(k, r, t)),
                    Err(lrc_core::Error::Unsupported(_)) if k <= r => println!("{k}\tNA\tNA"),
                    Err(e) => return Err(e.into()),
                }
            }
        }
        (Format::Report, _) => {
            for k in lo..=hi {
                match bound_report(k, r, t) {
                    Ok(rep) => println!("{rep}"),
                    Err(lrc_core::Error::Unsupported(_)) if k <= r => println!("k={k} r={r} t={t}\nNA\n"),
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(true)
}

fn mindist(path: &Path) -> Outcome {
    let code = load_code(path)?;
    let d = min_distance(&code)?;
    println!("d={d}");
    if let Some(p) = code.params() {
        eprintln!("d={d} against t+1={}", p.t + 1);
    }
    Ok(true)
}

fn to_zero_based(coords: &[usize], n: usize) -> Result<Vec<usize>, Failure> {
    coords
        .iter()
        .map(|&c| {
            if c == 0 || c > n {
                Err(Failure::Usage(format!("coordinate {c} is outside 1..={n}")))
            } else {
                Ok(c - 1)
            }
        })
        .collect()
}

fn simulate(path: &Path, fail: &[usize], r: Option<usize>, seed: u64) -> Outcome {
    let code = load_code(path)?;
    let r = r
        .or(code.params().map(|p| p.r))
        .ok_or_else(|| Failure::Usage("the code file records no r; pass --r".into()))?;
    let erased = to_zero_based(fail, code.n())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let message = BitVec::from_bools(&(0..code.k()).map(|_| rng.gen()).collect::<Vec<bool>>());
    let word = code.encode(&message)?;
    let trace = simulate_failures(&code, &word, &erased, r)?;
    println!("codeword={}", word.to_str01());
    print!("{trace}");
    let exact = trace.recovered.as_ref() == Some(&word);
    println!("recovered={exact}");
    eprintln!(
        "{} newcomers, {} symbols downloaded, largest repair set {}",
        trace.steps.len(),
        trace.downloaded(),
        trace.max_locality()
    );
    Ok(exact)
}

fn analyze_graph(g: &RepairGraph, r: usize, t: usize) -> bool {
    let lemma = check_out_lemma(g, t);
    let corollaries = check_structural_corollaries(g, t);
    print!("{lemma}{corollaries}");
    let mut ok = lemma.passed() && corollaries.passed();
    if t == 3 {
        let coloring = classify_edges(g, r);
        let ledger = coloring.ledger();
        println!("red={}", format_edges(&coloring.red));
        println!("green={}", format_edges(&coloring.green));
        println!("blue={}", format_edges(&coloring.blue));
        print!("{ledger}");
        ok &= ledger.passed();
    }
    ok
}

fn graph_analyze(
    code: Option<PathBuf>,
    graph: Option<PathBuf>,
    r: usize,
    t: Option<usize>,
    out: Option<PathBuf>,
    budget: u64,
) -> Outcome {
    if let Some(path) = graph {
        let g = read_rg(&read_file(&path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let t = t.ok_or_else(|| Failure::Usage("--t is required with --graph".into()))?;
        println!("sources={}", braces(&g.sources()));
        return Ok(analyze_graph(&g, r, t));
    }
    let path = code.expect("clap requires --code or --graph");
    let code = load_code(&path)?;
    let t = t
        .or(code.params().map(|p| p.t))
        .ok_or_else(|| Failure::Usage("the code file records no t; pass --t".into()))?;
    let m = minimal_source_count(&code, r, budget)?;
    println!("delta_star={}", m.delta_star);
    println!("sources={}", braces(&m.sources));
    if let Some(out) = out {
        write_file(&out, &write_rg(&m.graph))?;
    }
    let ok = analyze_graph(&m.graph, r, t);
    eprintln!(
        "fewest sources {} (k={}), {} edges, checks {}",
        m.delta_star,
        code.k(),
        m.graph.edge_count(),
        if ok { "pass" } else { "fail" }
    );
    Ok(ok)
}

fn mesh_check(path: &Path) -> Outcome {
    let mesh = read_mesh(&read_file(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let rep = validate_mesh(&mesh);
    print!("{rep}");
    Ok(rep.passed())
}

fn mesh_build(k: usize, r: usize, out: Option<PathBuf>) -> Outcome {
    let text = write_mesh(&build_mesh(k, r)?);
    match out {
        Some(path) => write_file(&path, &text)?,
        None => print!("{text}"),
    }
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Construct { t, k, r, out, cert } => construct(t, k, r, out, cert),
        Command::Verify { code, r, t, budget } => verify(&code, r, t, budget.resolve()?),
        Command::Bounds { t, r, k_range, format } => bounds(t, r, k_range, format),
        Command::Mindist { code } => mindist(&code),
        Command::Simulate { code, fail, r, seed } => simulate(&code, &fail, r, seed),
        Command::Graph(GraphCommand::Analyze {
            code,
            graph,
            r,
            t,
            out,
            budget,
        }) => graph_analyze(code, graph, r, t, out, budget.resolve()?),
        Command::Mesh(MeshCommand::Check { input }) => mesh_check(&input),
        Command::Mesh(MeshCommand::Build { k, r, out }) => mesh_build(k, r, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Core(e @ lrc_core::Error::Budget { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
