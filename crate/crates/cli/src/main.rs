mod commands;
mod config;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use config::SessionConfig;

#[derive(Parser, Debug)]
#[command(name = "skeinlab", version, about = "Exact lattice, quantum-torus and kernel-detection computations")]
struct Cli {
    /// JSON session config merged under the command-line flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// worker threads (overrides SKEINLAB_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// add wall-clock timings to the output (breaks byte-identical output)
    #[arg(long, global = true)]
    timings: bool,
    /// compact single-line JSON
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Triangulations Δ_g of the once-punctured surface with one boundary arc
    Surface {
        #[command(subcommand)]
        action: SurfaceCmd,
    },
    /// Balanced lattice, central sublattice and PI-degrees
    Lattice {
        #[command(subcommand)]
        action: LatticeCmd,
    },
    /// Quantum tori on the balanced lattice
    Qtorus {
        #[command(subcommand)]
        action: QtorusCmd,
    },
    /// Admissible states and support of a curve's quantum trace
    Qtrace(QtraceArgs),
    /// Mapping-class orbit of a representation
    Orbit(OrbitArgs),
    /// Poisson structures and symplectic leaves of SL2
    Leaf {
        #[command(subcommand)]
        action: LeafCmd,
    },
    /// SL2 representations: cell, moment map, lifts
    Rep {
        #[command(subcommand)]
        action: RepCmd,
    },
    /// Kernel detection certificate for a mapping class
    Detect(DetectArgs),
    /// Runs every acceptance check and prints a pass/fail table
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GenusArg {
    #[arg(long)]
    genus: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum SurfaceCmd {
    /// Face, edge and boundary counts with validation data
    Info {
        #[command(flatten)]
        genus: GenusArg,
        /// validate a triangulation file instead of building Δ_g
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// The full triangulation as JSON
    Export {
        #[command(flatten)]
        genus: GenusArg,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// PI-degree of the reduced torus and the closed form of K⁰
    Info {
        #[command(flatten)]
        genus: GenusArg,
        #[arg(long = "N")]
        n: Option<u64>,
    },
    /// Refined lattice: definitional K̄⁰ beside the closed formula
    Refined {
        #[command(flatten)]
        genus: GenusArg,
        #[arg(long = "N")]
        n: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum QtorusCmd {
    /// Build and verify the irreducible representation for a central character
    Irrep {
        #[command(flatten)]
        genus: GenusArg,
        #[arg(long = "N")]
        n: Option<u64>,
        /// integer character values on the kernel basis, comma separated
        #[arg(long)]
        character: Option<String>,
    },
    /// Compare T_N(Z_a + Z_-a) with Fr_N(Z_a + Z_-a)
    Frobenius {
        #[command(flatten)]
        genus: GenusArg,
        #[arg(long = "N")]
        n: Option<u64>,
        /// lattice coordinates of a, comma separated
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    /// homology class: "p,q" in genus 1, 2g entries otherwise
    #[arg(long, allow_hyphen_values = true)]
    curve: Option<String>,
    /// raw normal coordinates, one per edge
    #[arg(long)]
    coords: Option<String>,
    /// curve JSON file
    #[arg(long)]
    curve_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct QtraceArgs {
    #[command(flatten)]
    genus: GenusArg,
    #[command(flatten)]
    curve: CurveArgs,
    /// also test injectivity modulo K⁰ for this N
    #[arg(long = "N")]
    n: Option<u64>,
    #[arg(long)]
    cap: Option<usize>,
    /// cross-check against the 2^m enumerator
    #[arg(long)]
    brute: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Example {
    Trivial,
    Reduced,
    Quaternion,
}

#[derive(Args, Debug, Clone)]
pub struct RepSource {
    /// representation JSON file
    #[arg(long)]
    rep: Option<PathBuf>,
    /// built-in genus-one representation
    #[arg(long, value_enum)]
    example: Option<Example>,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[command(flatten)]
    source: RepSource,
    /// JSON array of mapping classes ({"words": ...}); defaults to the torus twists
    #[arg(long)]
    generators: Option<PathBuf>,
    #[arg(long = "N")]
    n: Option<u64>,
    #[arg(long)]
    cap: Option<usize>,
    /// list every orbit point
    #[arg(long)]
    points: bool,
}

#[derive(Subcommand, Debug)]
enum LeafCmd {
    /// STS leaf and conjugacy data of one matrix
    Classify {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        order: Option<u32>,
        /// second matrix: classify the pair as a point of the double
        #[arg(long)]
        second: Option<String>,
    },
    /// Jacobi identity for both generator bracket tables
    Jacobi,
    /// First-order expansion of the quantum R-matrix
    Rmatrix,
}

#[derive(Subcommand, Debug)]
enum RepCmd {
    /// Genus, cell and moment map
    Info {
        #[command(flatten)]
        source: RepSource,
    },
    /// The N lifts of a reduced-cell point
    Lifts {
        #[command(flatten)]
        source: RepSource,
        #[arg(long = "N")]
        n: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CellArg {
    Reduced,
    Big,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RouteArg {
    /// bound route, falling back to the support route
    Auto,
    Bound,
    Support,
}

#[derive(Args, Debug)]
struct DetectArgs {
    #[command(flatten)]
    genus: GenusArg,
    #[arg(long = "N")]
    n: Option<u64>,
    #[command(flatten)]
    curve: CurveArgs,
    /// SL2(Z) matrix "[[a,b],[c,d]]" (genus 1)
    #[arg(long)]
    phi: Option<String>,
    /// mapping class JSON file
    #[arg(long)]
    phi_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "reduced")]
    cell: CellArg,
    /// curve JSON file with φ(α), required in genus ≥ 2
    #[arg(long)]
    beta: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    route: RouteArg,
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// run only these criteria, comma separated
    #[arg(long)]
    only: Option<String>,
    /// exit nonzero when a criterion fails
    #[arg(long)]
    strict: bool,
}

fn dispatch(cli: &Cli, cfg: &SessionConfig) -> Result<(Value, bool), String> {
    use commands as c;
    let ok = |v: Value| Ok((v, true));
    match &cli.command {
        Command::Surface { action } => match action {
            SurfaceCmd::Info { genus, file } => ok(c::surface_info(cfg, genus.genus, file.as_deref())?),
            SurfaceCmd::Export { genus } => ok(c::surface_export(cfg, genus.genus)?),
        },
        Command::Lattice { action } => match action {
            LatticeCmd::Info { genus, n } => ok(c::lattice_info(cfg, genus.genus, *n)?),
            LatticeCmd::Refined { genus, n } => ok(c::lattice_refined(cfg, genus.genus, *n)?),
        },
        Command::Qtorus { action } => match action {
            QtorusCmd::Irrep { genus, n, character } => {
                ok(c::qtorus_irrep(cfg, genus.genus, *n, character.as_deref())?)
            }
            QtorusCmd::Frobenius { genus, n, a } => ok(c::qtorus_frobenius(cfg, genus.genus, *n, a)?),
        },
        Command::Qtrace(a) => ok(c::qtrace(cfg, a.genus.genus, &a.curve, a.n, a.cap, a.brute)?),
        Command::Orbit(a) => ok(c::orbit(cfg, &a.source, a.generators.as_deref(), a.n, a.cap, a.points)?),
        Command::Leaf { action } => match action {
            LeafCmd::Classify { matrix, order, second } => {
                ok(c::leaf_classify(cfg, matrix, *order, second.as_deref())?)
            }
            LeafCmd::Jacobi => ok(c::leaf_jacobi()),
            LeafCmd::Rmatrix => ok(c::leaf_rmatrix()),
        },
        Command::Rep { action } => match action {
            RepCmd::Info { source } => ok(c::rep_info(cfg, source)?),
            RepCmd::Lifts { source, n } => ok(c::rep_lifts(cfg, source, *n)?),
        },
        Command::Detect(a) => ok(c::detect(cfg, &c::DetectInput {
            genus: a.genus.genus,
            n: a.n,
            curve: &a.curve,
            phi: a.phi.as_deref(),
            phi_file: a.phi_file.as_deref(),
            cell: a.cell,
            beta: a.beta.as_deref(),
            route: a.route,
            cap: a.cap,
        })?),
        Command::Selftest(a) => {
            let (v, all) = c::selftest(a.only.as_deref(), cli.timings)?;
            Ok((v, all || !a.strict))
        }
    }
}

fn run(cli: &Cli) -> Result<(Value, bool), String> {
    let cfg = match &cli.config {
        Some(p) => SessionConfig::load(p)?,
        None => SessionConfig::default(),
    };
    if let Some(t) = cfg.threads(cli.threads)? {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| e.to_string())?;
    }
    let start = Instant::now();
    let (mut out, ok) = dispatch(cli, &cfg)?;
    if cli.timings {
        if let Value::Object(m) = &mut out {
            m.insert("timings".into(), serde_json::json!({ "totalMs": start.elapsed().as_secs_f64() * 1e3 }));
        }
    }
    Ok((out, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            let text = if cli.compact { serde_json::to_string(&out) } else { serde_json::to_string_pretty(&out) };
            println!("{}", text.expect("JSON values always serialize"));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
