//! `jrt`: batch front end for generating, verifying and decomposing members
//! of `J(r,t)`.
//!
//! Exit status: 0 on success, 1 when a verification or certificate check
//! fails (a JSON diagnostic goes to stdout), 2 for usage errors and
//! malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use jrt_core::constructions::{full_star, random_jrt, thick_clique, two_star_gadget};
use jrt_core::decomposition::decompose;
use jrt_core::profiles::check_jrt;
use jrt_core::search::{extremal_witnesses, min_max_degree, phase_scan, scan_csv, SearchBudget};
use jrt_core::stars::{core, extract_stars, Star};
use jrt_core::structure::{build_structure_with, AssertLevel, StructureOptions};
use jrt_core::sunflowers::{largest_sunflower, max_sunflower_with_kernel, DEFAULT_NODE_BUDGET};
use jrt_core::{DivisiblePairParams, Error, Hypergraph, JrtParams, VertexSet};

#[derive(Parser)]
#[command(name = "jrt", version, about = "Hypergraphs with restricted intersections: generate, verify, decompose, search")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, env = "JRT_THREADS")]
    threads: Option<usize>,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "verb", rename_all = "kebab-case")]
enum Command {
    /// Generate a thick clique, full star, two-star gadget or random member.
    Generate(GenerateArgs),
    /// Check membership in J(r,t).
    Verify(VerifyArgs),
    /// Find a sunflower with a given kernel, or the largest one.
    Sunflower(SunflowerArgs),
    /// Saturate a divisible pair and decompose F into minimal members.
    DecomposeLemma(DecomposeArgs),
    /// Peel a star down to its heavy core.
    Core(CoreArgs),
    /// Extract heavy star cores one at a time.
    Extract(ExtractArgs),
    /// Build and verify the structure certificate.
    Structure(StructureArgs),
    /// Least maximum degree for given n and m, by exhaustive search.
    Search(SearchArgs),
    /// Tabulate thresholds and searched values around m* as CSV.
    Scan(ScanArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Thick,
    Star,
    Gadget,
    Random,
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: Option<usize>,
    /// Edge size (thick, star).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// Centre size (star).
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Size of each star body (gadget).
    #[arg(long)]
    u: Option<usize>,
    /// Target edge count (random).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Serialize)]
struct RtArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    t: usize,
}

impl RtArgs {
    fn params(&self) -> Result<JrtParams, Failure> {
        Ok(JrtParams::new(self.r, self.t)?)
    }
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    rt: RtArgs,
}

#[derive(Args, Serialize)]
struct SunflowerArgs {
    input: PathBuf,
    /// Kernel as comma-separated vertices; empty for the empty set.
    #[arg(long, conflicts_with = "auto", required_unless_present = "auto")]
    kernel: Option<String>,
    /// Search all candidate kernels for the largest sunflower.
    #[arg(long)]
    auto: bool,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget_nodes: u64,
}

#[derive(Args, Serialize)]
struct DecomposeArgs {
    #[arg(long)]
    q: usize,
    /// Size bound; defaults to the largest member of F and G.
    #[arg(long)]
    k: Option<usize>,
    /// Set system F.
    f: PathBuf,
    /// Set system G.
    g: PathBuf,
}

#[derive(Args, Serialize)]
struct CoreArgs {
    /// Star as JSON with keys centre, body, edges.
    input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    rt: RtArgs,
}

#[derive(Args, Serialize)]
struct ExtractArgs {
    input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    rt: RtArgs,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Level {
    Soft,
    Hard,
}

#[derive(Args, Serialize)]
struct StructureArgs {
    input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    rt: RtArgs,
    #[arg(long, value_enum, default_value = "soft")]
    assert_level: Level,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget_nodes: u64,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    #[command(flatten)]
    #[serde(flatten)]
    rt: RtArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 10_000_000)]
    budget_nodes: u64,
    /// Wall-clock cap; results that hit it are machine dependent.
    #[arg(long)]
    budget_secs: Option<u64>,
    /// Also list every extremal witness.
    #[arg(long)]
    witnesses: bool,
    /// Keep one witness per isomorphism class.
    #[arg(long, requires = "witnesses")]
    canonical: bool,
}

#[derive(Args, Serialize)]
struct ScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    rt: RtArgs,
    /// Values of n, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 5_000_000)]
    budget_nodes: u64,
}

enum Failure {
    /// Bad arguments or malformed input.
    Usage(String),
    /// A check failed; the value is printed as the diagnostic.
    Check(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::UniverseTooLarge(_) | Error::EdgeOutOfRange { .. } | Error::NotUniform { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Check(json!({ "error": e.kind(), "detail": e.to_string() })),
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Usage(format!("{}: {e}", path.display()))
    })
}

fn parse_set(text: &str) -> Result<VertexSet, Failure> {
    let trimmed = text.trim().trim_start_matches(['[', '{']).trim_end_matches([']', '}']);
    let mut set = VertexSet::EMPTY;
    for part in trimmed.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v: usize = part.parse().map_err(|_| Failure::Usage(format!("bad vertex `{part}` in `{text}`")))?;
        if v >= jrt_core::vertex_set::MAX_VERTICES {
            return Err(Failure::Usage(format!("vertex {v} is out of range")));
        }
        set.insert(v);
    }
    Ok(set)
}

fn need(value: Option<usize>, name: &str, kind: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{name} is required for --kind {kind}")))
}

#[derive(Serialize)]
struct Echoed<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    config: &'a Command,
}

fn pretty<T: Serialize>(body: &T, config: &Command) -> String {
    let mut s = serde_json::to_string_pretty(&Echoed { body, config }).expect("serialisable");
    s.push('\n');
    s
}

fn compact<T: Serialize>(body: &T, config: &Command) -> String {
    let mut s = serde_json::to_string(&Echoed { body, config }).expect("serialisable");
    s.push('\n');
    s
}

/// Output text plus whether it reports a failed check.
type Outcome = (String, bool);

fn run(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Generate(a) => {
            let h = match a.kind {
                Kind::Thick => {
                    let (n, k, t) = (need(a.n, "n", "thick")?, need(a.k, "k", "thick")?, need(a.t, "t", "thick")?);
                    thick_clique(n, k, t)?.0
                }
                Kind::Star => {
                    let (n, k, s) = (need(a.n, "n", "star")?, need(a.k, "k", "star")?, need(a.s, "s", "star")?);
                    full_star(n, k, s)?.0
                }
                Kind::Gadget => {
                    let p = JrtParams::new(need(a.r, "r", "gadget")?, need(a.t, "t", "gadget")?)?;
                    two_star_gadget(&p, need(a.u, "u", "gadget")?)?.hypergraph
                }
                Kind::Random => {
                    let p = JrtParams::new(need(a.r, "r", "random")?, need(a.t, "t", "random")?)?;
                    random_jrt(&p, need(a.n, "n", "random")?, need(a.m, "m", "random")?, a.seed)?.hypergraph
                }
            };
            Ok((compact(&h, cmd), false))
        }
        Command::Verify(a) => {
            let p = a.rt.params()?;
            let h: Hypergraph = read_json(&a.input)?;
            let verdict = check_jrt(&p, &h);
            let report = json!({
                "member": verdict.is_ok(),
                "violation": verdict.err(),
                "r": p.r(),
                "t": p.t(),
                "k": p.k(),
                "n": h.n(),
                "edges": h.len(),
            });
            let failed = report["member"] == json!(false);
            Ok((pretty(&report, cmd), failed))
        }
        Command::Sunflower(a) => {
            let h: Hypergraph = read_json(&a.input)?;
            let sf = if a.auto {
                largest_sunflower(h.edges(), a.budget_nodes)
            } else {
                let kernel = parse_set(a.kernel.as_deref().unwrap_or(""))?;
                max_sunflower_with_kernel(h.edges(), kernel, a.budget_nodes)
            };
            let body = json!({ "kernel": sf.kernel, "petals": sf.petals, "size": sf.size(), "maximum": sf.maximum });
            Ok((pretty(&body, cmd), false))
        }
        Command::DecomposeLemma(a) => {
            let f: Hypergraph = read_json(&a.f)?;
            let g: Hypergraph = read_json(&a.g)?;
            let k = a.k.unwrap_or_else(|| f.edges().iter().chain(g.edges()).map(|s| s.len()).max().unwrap_or(0).max(1));
            let params = DivisiblePairParams::new(a.q, k)?;
            let res = decompose(&params, f.edges(), g.edges())?;
            Ok((pretty(&res, cmd), false))
        }
        Command::Core(a) => {
            let p = a.rt.params()?;
            let star: Star = read_json(&a.input)?;
            star.validate().map_err(|e| Failure::Usage(format!("{}: {e}", a.input.display())))?;
            Ok((pretty(&core(&p, &star), cmd), false))
        }
        Command::Extract(a) => {
            let p = a.rt.params()?;
            let h: Hypergraph = read_json(&a.input)?;
            Ok((pretty(&extract_stars(&p, &h)?, cmd), false))
        }
        Command::Structure(a) => {
            let p = a.rt.params()?;
            let h: Hypergraph = read_json(&a.input)?;
            let opts = StructureOptions {
                assert_level: match a.assert_level {
                    Level::Soft => AssertLevel::Soft,
                    Level::Hard => AssertLevel::Hard,
                },
                node_budget: a.budget_nodes,
            };
            Ok((pretty(&build_structure_with(&p, &h, &opts)?, cmd), false))
        }
        Command::Search(a) => {
            let p = a.rt.params()?;
            let budget = SearchBudget {
                nodes: Some(a.budget_nodes),
                secs: a.budget_secs,
            };
            if a.witnesses {
                let list = extremal_witnesses(&p, a.n, a.m, &budget, a.canonical)?;
                Ok((pretty(&list, cmd), false))
            } else {
                Ok((pretty(&min_max_degree(&p, a.n, a.m, &budget)?, cmd), false))
            }
        }
        Command::Scan(a) => {
            let p = a.rt.params()?;
            let budget = SearchBudget {
                nodes: Some(a.budget_nodes),
                secs: None,
            };
            // CSV has no room for the config; it goes to stderr instead
            eprintln!("# config: {}", serde_json::to_string(cmd).expect("serialisable"));
            Ok((scan_csv(&phase_scan(&p, &a.n, &budget)?), false))
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Usage(format!("stdout: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("jrt: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli.command).and_then(|(text, failed)| {
        emit(&text, cli.output.as_deref())?;
        if failed && cli.output.is_some() {
            emit(&text, None)?;
        }
        Ok(failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("jrt: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(diag)) => {
            let body = json!({ "ok": false, "diagnostic": diag });
            println!("{}", serde_json::to_string_pretty(&body).expect("serialisable"));
            ExitCode::from(1)
        }
    }
}
