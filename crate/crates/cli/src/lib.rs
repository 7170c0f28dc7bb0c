//! Library side of the `cwf` binary. Each `cmd_*` function handles one input
//! and returns an [`Outcome`]; [`run`] fans batches out over a thread pool
//! and prints the results in input order.

pub mod args;
mod commands;

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

pub use args::{Cli, Command, Method};
pub use commands::{
    chromatic_via_term, cmd_check, cmd_color, cmd_cwd_oracle, cmd_decompose, cmd_gen, cmd_probe,
    cmd_term, TermOptions,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Success = 0,
    /// Not in the class, a check failed, or the answer is negative.
    Negative = 1,
    /// Bad arguments or unreadable input.
    Usage = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        source: cwf_core::GraphError,
    },
    #[error("{0}")]
    Usage(String),
}

/// Result of one command on one input.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: ExitStatus,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    pub fn error(input: Option<&Path>, e: &CliError) -> Self {
        Outcome {
            status: ExitStatus::Usage,
            text: format!("error: {e}"),
            json: json!({
                "input": input.map(|p| p.display().to_string()),
                "error": e.to_string(),
            }),
        }
    }
}

/// Places per-input outputs inside `out` when it names a directory for a batch.
fn batch_out(out: Option<&PathBuf>, input: &Path, batch: bool, ext: &str) -> Option<PathBuf> {
    let out = out?;
    if !batch {
        return Some(out.clone());
    }
    let stem = input.file_stem().unwrap_or_default().to_string_lossy();
    Some(out.join(format!("{stem}{ext}")))
}

fn over_inputs<F>(common: &args::Common, f: F) -> Result<Vec<Outcome>, CliError>
where
    F: Fn(&Path) -> Outcome + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(pool.install(|| common.inputs.par_iter().map(|p| f(p)).collect()))
}

fn print_outcomes(
    out: &mut dyn Write,
    outcomes: &[Outcome],
    as_json: bool,
    inputs: &[PathBuf],
) -> io::Result<()> {
    if as_json {
        let v = if outcomes.len() == 1 {
            outcomes[0].json.clone()
        } else {
            Value::Array(outcomes.iter().map(|o| o.json.clone()).collect())
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&v).expect("plain JSON")
        )
    } else {
        for (i, o) in outcomes.iter().enumerate() {
            if outcomes.len() > 1 {
                writeln!(out, "== {} ==", inputs[i].display())?;
            }
            writeln!(out, "{}", o.text.trim_end())?;
        }
        Ok(())
    }
}

/// Runs a parsed command line, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> ExitStatus {
    let batch = |c: &args::Common| c.inputs.len() > 1;
    let result = match &cli.command {
        Command::Check(a) => over_inputs(&a.common, cmd_check).map(|o| (o, &a.common)),
        Command::Decompose(a) => over_inputs(&a.common, |p| {
            let dest = batch_out(a.out.as_ref(), p, batch(&a.common), ".report.json");
            cmd_decompose(p, dest.as_deref())
        })
        .map(|o| (o, &a.common)),
        Command::Term(a) => over_inputs(&a.common, |p| {
            let opts = TermOptions {
                out: batch_out(a.out.as_ref(), p, batch(&a.common), ".term.json"),
                verify: a.verify,
                max_width: a.max_width,
            };
            cmd_term(p, &opts)
        })
        .map(|o| (o, &a.common)),
        Command::CwdOracle(a) => {
            over_inputs(&a.common, |p| cmd_cwd_oracle(p, a.max_width)).map(|o| (o, &a.common))
        }
        Command::Color(a) => over_inputs(&a.common, |p| cmd_color(p, a.method, a.state_budget))
            .map(|o| (o, &a.common)),
        Command::Probe(a) => {
            over_inputs(&a.common, |p| cmd_probe(p, &a.toggles)).map(|o| (o, &a.common))
        }
        Command::Gen(a) => {
            let o = cmd_gen(a);
            let _ = print_outcomes(out, std::slice::from_ref(&o), a.json, &[]);
            return o.status;
        }
    };
    match result {
        Ok((outcomes, common)) => {
            if let Err(e) = print_outcomes(out, &outcomes, common.json, &common.inputs) {
                log::error!("writing output: {e}");
                return ExitStatus::Usage;
            }
            outcomes
                .iter()
                .map(|o| o.status)
                .max()
                .unwrap_or(ExitStatus::Success)
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            ExitStatus::Usage
        }
    }
}
