use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use duffing_core::ResonanceId;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "duffing", version, about = "Amplitude and phase resonances of a forced Duffing oscillator")]
pub struct Cli {
    /// Oscillator descriptor (JSON: mass, damping, lin_stiffness, nl_stiffness).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (a directory for `figure`); stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form amplitude and phase resonance of one family.
    ClosedForm(ClosedFormArgs),
    /// Steady states of the averaged equations over a frequency grid.
    Slowflow(SlowflowArgs),
    /// Harmonic-balance response curve with folds and phase resonances.
    Nfrc(NfrcArgs),
    /// Phase-resonance curve over a range of forcing levels.
    PrnmCurve(PrnmArgs),
    /// Frequency window where a 1:2 or 5:1 response exists.
    Existence(ExistenceArgs),
    /// Check branch points against direct time integration.
    Verify(VerifyArgs),
    /// Integrate the equation of motion.
    Simulate(SimulateArgs),
    /// Reproduce one of the figure layouts.
    Figure(FigureArgs),
}

#[derive(Debug, Args)]
pub struct ClosedFormArgs {
    #[arg(long)]
    pub resonance: ResonanceId,
    #[arg(long)]
    pub forcing: f64,
}

#[derive(Debug, Args)]
pub struct SlowflowArgs {
    #[arg(long)]
    pub resonance: ResonanceId,
    #[arg(long)]
    pub forcing: f64,
    #[arg(long)]
    pub omega_min: f64,
    #[arg(long)]
    pub omega_max: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeedKind {
    Slowflow,
    Linear,
}

#[derive(Debug, Args)]
pub struct NfrcArgs {
    #[arg(long)]
    pub resonance: ResonanceId,
    #[arg(long)]
    pub forcing: f64,
    #[arg(long)]
    pub omega_min: f64,
    #[arg(long)]
    pub omega_max: f64,
    #[arg(long, default_value_t = duffing_core::harmonic_balance::DEFAULT_HARMONICS)]
    pub harmonics: usize,
    #[arg(long, default_value_t = duffing_core::harmonic_balance::DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = SeedKind::Slowflow)]
    pub seed: SeedKind,
    /// Largest arclength step.
    #[arg(long, default_value_t = 0.05)]
    pub max_step: f64,
    /// Write a gnuplot script (plus its data file when --out is absent).
    #[arg(long)]
    pub emit_plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PrnmArgs {
    #[arg(long)]
    pub resonance: ResonanceId,
    #[arg(long)]
    pub f_min: f64,
    #[arg(long)]
    pub f_max: f64,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Frequency range of the locus scan (loci families only).
    #[arg(long)]
    pub omega_min: Option<f64>,
    #[arg(long)]
    pub omega_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ExistenceArgs {
    #[arg(long)]
    pub resonance: ResonanceId,
    #[arg(long)]
    pub forcing: f64,
    #[arg(long)]
    pub omega_min: Option<f64>,
    #[arg(long)]
    pub omega_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Output of `nfrc` or `slowflow`, with its `.meta.json` sidecar.
    #[arg(long)]
    pub from_csv: PathBuf,
    /// Zero-based half-open row range `a..b` (data rows, header excluded).
    #[arg(long)]
    pub rows: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    pub amplitude_tol: f64,
    #[arg(long, default_value_t = 0.05)]
    pub phase_tol: f64,
    #[arg(long, default_value_t = duffing_core::time_oracle::MIN_STEPS_PER_PERIOD)]
    pub steps_per_period: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub forcing: f64,
    #[arg(long)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.0)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub v0: f64,
    #[arg(long)]
    pub periods: usize,
    #[arg(long, default_value_t = duffing_core::time_oracle::MIN_STEPS_PER_PERIOD)]
    pub steps_per_period: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub id: FigureId,
}

/// Parse `a..b` into a half-open range.
pub fn parse_rows(s: &str) -> Option<(usize, usize)> {
    let (a, b) = s.split_once("..")?;
    let a = if a.is_empty() { 0 } else { a.trim().parse().ok()? };
    let b = if b.is_empty() { usize::MAX } else { b.trim().parse().ok()? };
    (a <= b).then_some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_ranges() {
        assert_eq!(parse_rows("2..5"), Some((2, 5)));
        assert_eq!(parse_rows("..3"), Some((0, 3)));
        assert_eq!(parse_rows("4.."), Some((4, usize::MAX)));
        assert_eq!(parse_rows("5..2"), None);
        assert_eq!(parse_rows("x"), None);
    }

    #[test]
    fn parses_nfrc() {
        let cli = Cli::try_parse_from([
            "duffing", "nfrc", "--resonance", "1:3", "--forcing", "0.6", "--omega-min", "2.5",
            "--omega-max", "8", "--seed", "linear",
        ])
        .unwrap();
        let Command::Nfrc(a) = cli.command else { panic!() };
        assert_eq!(a.resonance, ResonanceId::new(1, 3).unwrap());
        assert_eq!(a.seed, SeedKind::Linear);
        assert_eq!(a.harmonics, 15);
    }

    #[test]
    fn rejects_bad_label() {
        assert!(Cli::try_parse_from(["duffing", "closed-form", "--resonance", "2:4", "--forcing", "1"]).is_err());
    }
}
