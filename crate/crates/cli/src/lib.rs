//! Command-line front end for `duffing-core`.

pub mod args;
pub mod commands;
pub mod figures;
pub mod output;

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use duffing_core::{Error, OscillatorConfig};

use args::{Cli, Command};
use output::{emit, provenance, Format, Payload};

/// Process exit status for a finished run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Existence query with an empty window; the result was still written.
    Empty,
}

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_EMPTY: i32 = 4;

pub fn load_config(path: Option<&PathBuf>) -> Result<OscillatorConfig> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(OscillatorConfig::from_json(&text)?)
        }
        None => Ok(OscillatorConfig::default()),
    }
}

pub fn run(cli: Cli) -> Result<Status> {
    let cfg = load_config(cli.config.as_ref())?;
    let out = cli.out.as_deref();
    let (name, outcome) = match &cli.command {
        Command::ClosedForm(a) => ("closed-form", commands::closed_form(&cfg, a)?),
        Command::Slowflow(a) => ("slowflow", commands::slowflow(&cfg, a)?),
        Command::Nfrc(a) => ("nfrc", commands::nfrc(&cfg, a, out)?),
        Command::PrnmCurve(a) => ("prnm-curve", commands::prnm_curve(&cfg, a)?),
        Command::Existence(a) => ("existence", commands::existence(&cfg, a)?),
        Command::Verify(a) => ("verify", commands::verify(a)?),
        Command::Simulate(a) => ("simulate", commands::simulate(&cfg, a)?),
        Command::Figure(a) => {
            let name = figures::figure_name(a.id);
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("figures").join(name));
            let report = figures::render(a.id, &cfg, &dir)?;
            let payload = Payload::Record(figures::report_json(&report));
            emit(&payload, Format::Json, None, &serde_json::Value::Null)?;
            return Ok(Status::Success);
        }
    };
    let default_format = match outcome.payload {
        Payload::Table(_) => Format::Csv,
        Payload::Record(_) => Format::Json,
    };
    let meta = provenance(name, outcome.params.clone(), &cfg);
    emit(&outcome.payload, cli.format.unwrap_or(default_format), out, &meta)?;
    Ok(if outcome.empty { Status::Empty } else { Status::Success })
}

/// Map a failure onto the documented exit codes.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if let Some(e) = err.downcast_ref::<clap::Error>() {
        return if e.use_stderr() { EXIT_INVALID } else { 0 };
    }
    match err.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(
            Error::InvalidParameter(_)
            | Error::InvalidResonance(_)
            | Error::UnsupportedFamily(_)
            | Error::NotHardening
            | Error::ZeroDamping,
        ) => EXIT_INVALID,
        Some(
            Error::NoConvergence { .. }
            | Error::SeedNotFound
            | Error::NonFinite { .. }
            | Error::NotSettled { .. },
        ) => EXIT_SOLVER,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let e = |x: Error| exit_code(&anyhow::Error::new(x));
        assert_eq!(e(Error::InvalidParameter("x".into())), EXIT_INVALID);
        assert_eq!(e(Error::UnsupportedFamily("4:1".into())), EXIT_INVALID);
        assert_eq!(e(Error::SeedNotFound), EXIT_SOLVER);
        assert_eq!(e(Error::NoConvergence { residual: 1.0 }), EXIT_SOLVER);
        assert_eq!(exit_code(&anyhow::anyhow!("io")), 1);
        let wrapped = anyhow::Error::new(Error::SeedNotFound).context("1:3 at f = 0.2");
        assert_eq!(exit_code(&wrapped), EXIT_SOLVER);
    }
}
