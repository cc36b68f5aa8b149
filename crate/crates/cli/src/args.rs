use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stokes_squeeze::oracle::TruncationPolicy;

/// Polarization-squeezing diagnostics for two-mode coherent light under
/// degenerate parametric amplification. Angles are in radians.
#[derive(Debug, Parser)]
#[command(name = "stokes-squeeze", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments and squeezing factor of one beam at one interaction time.
    Analyze(AnalyzeArgs),
    /// Characteristic times and minimum of a phase-locked beam.
    Window(IntensityArgs),
    /// Dataset behind one of the three standard plots.
    Figure(FigureArgs),
    /// Minimize the squeezing factor over phases and time, or over axes.
    Sweep(SweepArgs),
    /// Check the closed forms against the Fock-space oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct IntensityArgs {
    /// |alpha|^2, mean photon number of the amplified x mode.
    #[arg(long, allow_negative_numbers = true)]
    pub ix: f64,
    /// |beta|^2, mean photon number of the y mode.
    #[arg(long, allow_negative_numbers = true)]
    pub iy: f64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BeamArgs {
    #[command(flatten)]
    pub intensities: IntensityArgs,
    #[arg(long, default_value_t = FRAC_PI_4, allow_negative_numbers = true)]
    pub phx: f64,
    #[arg(long, default_value_t = FRAC_PI_4, allow_negative_numbers = true)]
    pub phy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisSelector {
    S1,
    S2,
    S3,
    /// Best axis on a Fibonacci lattice of the Poincare sphere.
    Free,
}

#[derive(Debug, Clone, Copy, Default, Args)]
pub struct PolicyArgs {
    /// Largest Fock dimension the oracle may use.
    #[arg(long)]
    pub max_dim: Option<usize>,
    /// Norm leakage allowed when preparing a coherent state.
    #[arg(long)]
    pub leak_tol: Option<f64>,
    /// Relative moment drift between ladder rungs that counts as converged.
    #[arg(long)]
    pub drift_tol: Option<f64>,
    /// Dimension growth per ladder rung.
    #[arg(long)]
    pub growth_factor: Option<f64>,
}

impl PolicyArgs {
    pub fn policy(&self) -> TruncationPolicy {
        let d = TruncationPolicy::default();
        TruncationPolicy {
            leak_tol: self.leak_tol.unwrap_or(d.leak_tol),
            growth_factor: self.growth_factor.unwrap_or(d.growth_factor),
            max_dim: self.max_dim.unwrap_or(d.max_dim),
            drift_tol: self.drift_tol.unwrap_or(d.drift_tol),
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub beam: BeamArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub kt: f64,
    #[arg(long, value_enum, default_value_t = AxisSelector::S2)]
    pub axis: AxisSelector,
    /// Also evolve the state in truncated Fock space and compare.
    #[arg(long)]
    pub oracle: bool,
    /// Relative engine-versus-oracle tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct KtRange {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub kt_start: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kt_stop: f64,
    #[arg(long, default_value_t = 201)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
    pub which: u8,
    /// Beam of figure 1.
    #[arg(long, default_value_t = 10.0)]
    pub ix: f64,
    #[arg(long, default_value_t = 8.0)]
    pub iy: f64,
    /// Intensity pair `IX,IY` of a figure-2 trace; repeat for several.
    /// Defaults to 10,8 9,9 8,10.
    #[arg(long = "case", value_parser = parse_pair)]
    pub cases: Vec<(f64, f64)>,
    #[command(flatten)]
    pub range: KtRange,
    /// Figure 3 plane is [0, alpha-max] x [0, beta-max].
    #[arg(long, default_value_t = 10.0)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 10.0)]
    pub beta_max: f64,
    #[arg(long, default_value_t = 101)]
    pub resolution: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub beam: BeamArgs,
    /// A fixed axis sweeps phases and time; `free` scans axes along time
    /// at the given phases.
    #[arg(long, value_enum, default_value_t = AxisSelector::S2)]
    pub axis: AxisSelector,
    #[arg(long, default_value_t = 64)]
    pub phi_points: usize,
    #[arg(long, default_value_t = 128)]
    pub kt_points: usize,
    #[arg(long, default_value_t = 1.5)]
    pub kt_max: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    /// Fock dimension of the joint two-mode identity checks.
    #[arg(long, default_value_t = 48)]
    pub two_mode_dim: usize,
    /// Skip the comparison against the published expressions.
    #[arg(long)]
    pub no_ledger: bool,
    /// Grid overrides, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub intensities: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub phases: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub kts: Vec<f64>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected IX,IY, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn pairs_parse() {
        assert_eq!(parse_pair("10, 8").unwrap(), (10.0, 8.0));
        assert!(parse_pair("10").is_err());
        assert!(parse_pair("a,1").is_err());
    }

    #[test]
    fn policy_overrides_only_given_fields() {
        let p = PolicyArgs { max_dim: Some(64), ..PolicyArgs::default() }.policy();
        assert_eq!(p.max_dim, 64);
        assert_eq!(p.drift_tol, TruncationPolicy::default().drift_tol);
    }
}
