use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cwf_core::generators::Preset;
use cwf_core::oracles::colour::DEFAULT_STATE_BUDGET;

#[derive(Debug, Parser)]
#[command(
    name = "cwf",
    version,
    about = "Clique-width certificates for (4K1, C4, P6)-free graphs with a C6"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class gate: (4K1, C4, P6)-free and containing a C6.
    Check(CheckArgs),
    /// Build the 26-part partition around the first C6 and verify it.
    Decompose(DecomposeArgs),
    /// Build, and optionally verify, a clique-width expression.
    Term(TermArgs),
    /// Exact minimum clique-width of a tiny graph.
    CwdOracle(CwdArgs),
    /// Chromatic number and an optimal colouring.
    Color(ColorArgs),
    /// Write a generated graph.
    Gen(GenArgs),
    /// Per-check verdict table of the decomposition.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Graph file in edge-list format; repeat for batches.
    #[arg(long = "input", short = 'i', required = true)]
    pub inputs: Vec<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Worker threads for batches of inputs.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Write the report JSON here (a directory when several inputs are given).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TermArgs {
    #[command(flatten)]
    pub common: Common,
    /// Term JSON destination; the report goes to `<out>.report.json`. A
    /// directory when several inputs are given.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Evaluate the term and compare it with the input graph.
    #[arg(long)]
    pub verify: bool,
    /// Fail when the term uses more labels than this.
    #[arg(long, default_value_t = 27)]
    pub max_width: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CwdArgs {
    #[command(flatten)]
    pub common: Common,
    /// Largest label count to try.
    #[arg(long, default_value_t = cwf_core::oracles::cwd::CWD_LABEL_LIMIT)]
    pub max_width: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    SimplicialExact,
    TermDp,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct ColorArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    /// State cap for the expression DP.
    #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
    pub state_budget: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Instance,
    Ring,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenKind::Instance)]
    pub kind: GenKind,
    #[arg(long, default_value = "mixed", value_parser = parse_preset)]
    pub preset: Preset,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Graph destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Vertex count for random graphs.
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Edge probability for random graphs.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Clique size for 3-rings.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Comma-separated non-increasing profile of a 3-ring clique; give three.
    #[arg(long = "profile")]
    pub profiles: Vec<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Flip the edge `U-V` (0-based) after decomposing and re-verify the
    /// original report on the changed graph. Repeatable.
    #[arg(long = "toggle", value_parser = parse_pair)]
    pub toggles: Vec<(usize, usize)>,
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse()
        .map_err(|e: cwf_core::generators::GenError| e.to_string())
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once('-')
        .ok_or_else(|| format!("expected U-V, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(a)?, num(b)?))
}
