use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "evpos", version, about = "Eventual positivity of matrix semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Positivity margin.
    #[arg(long, global = true)]
    pub tol_pos: Option<f64>,
    /// Relative spectral tolerance.
    #[arg(long, global = true)]
    pub tol_spec: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the semigroup generated by a matrix.
    Classify(Input),
    /// Resolvent positivity to the right of a real eigenvalue.
    ResolventScan {
        #[command(flatten)]
        input: Input,
        /// The eigenvalue λ₀.
        #[arg(long, value_parser = parse_lambda, allow_hyphen_values = true)]
        lambda: Lambda,
    },
    /// Resolvent of `A + v φ` by the rank-one formula.
    Rank1Resolvent {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        rank1: Rank1Args,
        #[arg(long, value_parser = parse_lambda, allow_hyphen_values = true)]
        lambda: Lambda,
        /// Use the eigenvector formula with `A v = λ₀ v`.
        #[arg(long, allow_hyphen_values = true)]
        lambda0: Option<f64>,
    },
    /// Semigroup of `A + v φ` for an eigenvector `v`.
    Rank1Semigroup {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        rank1: Rank1Args,
        #[arg(long)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda0: f64,
    },
    /// Perturbation radius around a simple real eigenvalue.
    Radius {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = parse_lambda, allow_hyphen_values = true)]
        lambda: Lambda,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 128)]
        nodes: usize,
    },
    /// Certify eventual strong positivity of the perturbed resolvent.
    Certify {
        #[command(flatten)]
        input: Input,
        /// Matrix JSON of the perturbation `B`.
        #[arg(long)]
        perturbation: PathBuf,
        #[arg(long, value_parser = parse_lambda, allow_hyphen_values = true)]
        lambda: Lambda,
        #[arg(long)]
        radius: f64,
        #[arg(long, value_enum, default_value_t = CertifyKind::Nonneg)]
        kind: CertifyKind,
    },
    /// Dominant eigenvalue and eigenvector of `A + sB` with derivatives.
    ScanEigencurve {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        perturbation: PathBuf,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        s_range: SRange,
        /// Zero-based component held at 1; the largest one by default.
        #[arg(long)]
        gauge: Option<usize>,
    },
    /// Search for a rank-one perturbation that destroys eventual positivity.
    Destroyer {
        #[command(flatten)]
        input: Input,
        /// Offsets `μ − s(A)`.
        #[arg(long, value_delimiter = ',')]
        mu_offsets: Option<Vec<f64>>,
    },
    /// Run a worked example.
    Demo(DemoArgs),
    /// Fraction of random perturbations that keep eventual strong positivity.
    ProbeOpenness {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Perturbation size as a multiple of the estimated radius.
        #[arg(long, default_value_t = 0.5)]
        scale: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the demo ids.
    ListDemos,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::ResolventScan { .. } => "resolvent-scan",
            Command::Rank1Resolvent { .. } => "rank1-resolvent",
            Command::Rank1Semigroup { .. } => "rank1-semigroup",
            Command::Radius { .. } => "radius",
            Command::Certify { .. } => "certify",
            Command::ScanEigencurve { .. } => "scan-eigencurve",
            Command::Destroyer { .. } => "destroyer",
            Command::Demo(_) => "demo",
            Command::ProbeOpenness { .. } => "probe-openness",
            Command::ListDemos => "list-demos",
        }
    }
}

#[derive(Debug, Args)]
pub struct Input {
    /// Matrix JSON: `{"dim": n, "entries": [...]}`.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct Rank1Args {
    /// Functional φ, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub phi: Vec<f64>,
    /// Vector v, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CertifyKind {
    /// Entrywise non-negative `B`.
    Nonneg,
    /// Real diagonal `B` of either sign.
    Multiplication,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoId {
    #[value(name = "counterexample-3d")]
    Counterexample3d,
    PositiveFamily,
    ReflectionInterval,
    CyclicD,
    NonlocalLaplacian,
    HilbertQuantitative,
}

impl DemoId {
    pub fn describe(self) -> &'static str {
        match self {
            DemoId::Counterexample3d => "3x3 eventually positive generator losing eventual positivity under A + sB",
            DemoId::PositiveFamily => "positive matrices C_(a,s) whose sum with A is not eventually positive",
            DemoId::ReflectionInterval => "small rank-one perturbation of a reflection generator on [-1, 1]",
            DemoId::CyclicD => "non-positive perturbation of a positive cyclic generator in dimension d",
            DemoId::NonlocalLaplacian => "Laplacian on [0, 1] with non-local boundary coupling",
            DemoId::HilbertQuantitative => "quantitative perturbation bound for the non-local Laplacian",
        }
    }
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(value_enum)]
    pub id: DemoId,
    /// Perturbation parameter `s`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub s_range: Option<SRange>,
    /// Grid size or dimension.
    #[arg(long)]
    pub grid_n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Weighted norm of the random perturbation.
    #[arg(long)]
    pub norm: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if !x.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(x)
}

/// `re` or `re,im`.
pub fn parse_lambda(s: &str) -> Result<Lambda, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(Lambda { re: parse_f64(re)?, im: 0.0 }),
        [re, im] => Ok(Lambda { re: parse_f64(re)?, im: parse_f64(im)? }),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}

/// `a:b:step`.
pub fn parse_range(s: &str) -> Result<SRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(format!("expected `a:b:step`, got `{s}`"));
    };
    Ok(SRange { start: parse_f64(a)?, end: parse_f64(b)?, step: parse_f64(step)? })
}

impl SRange {
    /// Points `a + k·step` up to `b`, with `b` itself included when it is hit
    /// up to rounding.
    pub fn points(self) -> Vec<f64> {
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_and_range() {
        assert_eq!(parse_lambda("-1.5").unwrap(), Lambda { re: -1.5, im: 0.0 });
        assert_eq!(parse_lambda("2,0.5").unwrap(), Lambda { re: 2.0, im: 0.5 });
        assert!(parse_lambda("1,2,3").is_err());
        assert!(parse_lambda("nan").is_err());
        let r = parse_range("3.5:4.5:0.25").unwrap();
        assert_eq!(r.points(), vec![3.5, 3.75, 4.0, 4.25, 4.5]);
        assert!(parse_range("1:2").is_err());
    }
}
