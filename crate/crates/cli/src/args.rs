use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Caustics by reflection in circular and elliptic billiards.
#[derive(Debug, Parser)]
#[command(name = "caustics", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the n-th caustic from a source and export points, cusps and a plot.
    Caustic(CausticArgs),
    /// Run a verification suite and print per-claim verdicts as JSON.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Tabulate passages through infinity and cusp counts against n.
    Complexity(ComplexityArgs),
    /// On-axis cusps from the mirror equation and the Mobius maps.
    Axis(AxisArgs),
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// Circle: exactly four ordinary cusps, two on the center line, two on the source circle.
    Circle(VerifyArgs),
    /// Ellipse: the four predicted cusps are detected.
    Ellipse(VerifyArgs),
    /// On-axis cusps: Mobius iteration against detected cusps.
    Axis(VerifyArgs),
    /// Refraction of a parallel beam: off-axis cusps at radius R/mu.
    Refraction(RefractionArgs),
    /// Source outside the table: cusps on the confocal hyperbola through it.
    External(VerifyArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct TableArgs {
    /// Semi-major axis.
    #[arg(long)]
    pub a: Option<f64>,
    /// Semi-minor axis (defaults to a).
    #[arg(long)]
    pub b: Option<f64>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct NumericArgs {
    /// Samples per family.
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
    /// Cusp classification tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CausticArgs {
    #[command(flatten)]
    pub table: TableArgs,
    /// Light source as x,y.
    #[arg(long, value_parser = parse_pair)]
    pub source: Option<(f64, f64)>,
    /// Number of reflections.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Caustic points.
    #[arg(long, default_value = "caustic.csv")]
    pub csv: PathBuf,
    /// Cusp report.
    #[arg(long, default_value = "cusps.json")]
    pub json: PathBuf,
    /// Optional plot.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Plot window as xmin,xmax,ymin,ymax.
    #[arg(long, value_parser = parse_viewport)]
    pub viewport: Option<[f64; 4]>,
    /// Write angles in degrees.
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub table: TableArgs,
    /// Light source as x,y.
    #[arg(long, value_parser = parse_pair)]
    pub source: Option<(f64, f64)>,
    /// Source coordinate on the major axis (axis suite).
    #[arg(long)]
    pub x0: Option<f64>,
    /// Check n = 1..=n_max.
    #[arg(long)]
    pub n_max: Option<u32>,
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Adds random interior sources drawn from this seed (ellipse suite).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RefractionArgs {
    /// Refraction index.
    #[arg(long, default_value_t = 2.0)]
    pub mu: f64,
    /// Lens radius.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    #[command(flatten)]
    pub table: TableArgs,
    #[arg(long, value_parser = parse_pair)]
    pub source: Option<(f64, f64)>,
    /// Values of n, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
    /// Use n = 1..=n_max when --n is absent.
    #[arg(long)]
    pub n_max: Option<u32>,
    #[command(flatten)]
    pub numeric: NumericArgs,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AxisArgs {
    #[command(flatten)]
    pub table: TableArgs,
    /// Source on the major axis.
    #[arg(long, conflicts_with = "y0")]
    pub x0: Option<f64>,
    /// Source on the minor axis.
    #[arg(long)]
    pub y0: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub n_max: u32,
    /// Report the rotation angle in degrees.
    #[arg(long)]
    pub degrees: bool,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn parse_numbers(text: &str, count: usize) -> Result<Vec<f64>, String> {
    let values: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if values.len() != count {
        return Err(format!(
            "expected {count} comma-separated numbers, got {}",
            values.len()
        ));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(values)
}

pub fn parse_pair(text: &str) -> Result<(f64, f64), String> {
    let v = parse_numbers(text, 2)?;
    Ok((v[0], v[1]))
}

pub fn parse_viewport(text: &str) -> Result<[f64; 4], String> {
    let v = parse_numbers(text, 4)?;
    if !(v[0] < v[1] && v[2] < v[3]) {
        return Err("viewport needs xmin < xmax and ymin < ymax".into());
    }
    Ok([v[0], v[1], v[2], v[3]])
}
