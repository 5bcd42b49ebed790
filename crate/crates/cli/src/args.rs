use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cosasym::series::{CoefficientModel, ErrorBudget, Point};
use cosasym::AlphaParam;
use cosasym::decomposition::QuadratureSpec;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "cosasym", version, about = "Cosine lattice series and their small-θ asymptotics")]
pub struct Cli {
    /// Worker threads for the parallel evaluators (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate F_d(θ) at one point.
    Eval(EvalArgs),
    /// Evaluate the small-θ equivalent at one point.
    Asym(AsymArgs),
    /// Check an identity or an asymptotic equivalence numerically.
    Verify(VerifyArgs),
    /// Tabulate F (and optionally its equivalent) on a grid or along a ray, as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Dirichlet-kernel partial sum.
    Kernel,
    /// Direct summation over the lattice box.
    Lattice,
    /// Kernel partial sum plus the exact shell-count tail.
    Resummed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AsymForm {
    /// The three-regime formula for F_d.
    Theorem2,
    /// The prefactor A_d in signed-power form (α < 2).
    Closed,
    /// The prefactor A_d by quadrature (α < 2).
    Integral,
    /// H*_α for the one-dimensional series H_α (d = 1).
    Hstar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    /// Dimension reduction of F_d against the series.
    Theorem1,
    /// Closed form of A_d against its integral.
    Theorem3,
    /// F_d / asymptotic → 1 along a ray.
    Ratio,
    /// Perturbed coefficients against the pure series.
    Theorem4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Column {
    #[value(name = "F")]
    F,
    Asym,
    Ratio,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Fixed number of shells.
    #[arg(long)]
    pub shells: Option<u64>,
    /// Tolerance; its meaning depends on the command.
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub quad_nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RayArgs {
    /// Direction of the ray, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub ray: Option<String>,
    /// Largest scale t.
    #[arg(long)]
    pub from: Option<f64>,
    /// Smallest scale t.
    #[arg(long)]
    pub to: Option<f64>,
    /// Number of geometrically spaced scales.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: String,
    #[arg(long, value_enum, default_value_t = Method::Kernel)]
    pub method: Method,
    /// `mult:c,beta` or `noise:astar,aupper,seed`.
    #[arg(long)]
    pub perturb: Option<String>,
}

#[derive(Debug, Args)]
pub struct AsymArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: String,
    #[arg(long, value_enum, default_value_t = AsymForm::Theorem2)]
    pub form: AsymForm,
    #[arg(long)]
    pub quad_nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub target: VerifyTarget,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[command(flatten)]
    pub ray: RayArgs,
    /// `mult:c,beta` or `noise:astar,aupper,seed`.
    #[arg(long)]
    pub perturb: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// `lo:hi:count`, applied to every axis.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "ray")]
    pub grid: Option<String>,
    #[command(flatten)]
    pub ray: RayArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "F")]
    pub columns: Vec<Column>,
    #[arg(long, value_enum, default_value_t = Method::Resummed)]
    pub method: Method,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_list(flag: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("--{flag}: cannot parse {c:?} as a number")))
        })
        .collect()
}

pub fn parse_point(flag: &str, s: &str, dim: usize) -> Result<Point<f64>, CliError> {
    let coords = parse_list(flag, s)?;
    if coords.len() != dim {
        return Err(usage(format!("--{flag} has {} components but --dim is {dim}", coords.len())));
    }
    Ok(Point::new(coords)?)
}

pub fn parse_alpha(a: f64) -> Result<AlphaParam<f64>, CliError> {
    Ok(AlphaParam::new(a)?)
}

pub fn check_dim(dim: usize) -> Result<(), CliError> {
    if dim == 0 {
        return Err(usage("--dim must be at least 1"));
    }
    Ok(())
}

pub fn parse_perturb(s: &str) -> Result<CoefficientModel<f64>, CliError> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| usage("--perturb expects mult:c,beta or noise:astar,aupper,seed"))?;
    let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
    let num = |p: &str| {
        p.parse::<f64>()
            .map_err(|_| usage(format!("--perturb: cannot parse {p:?} as a number")))
    };
    let model = match (kind, parts.as_slice()) {
        ("mult", [c, beta]) => CoefficientModel::Multiplicative {
            c: num(c)?,
            beta: num(beta)?,
        },
        ("noise", [lo, hi, seed]) => CoefficientModel::BoundedNoise {
            a_lo: num(lo)?,
            a_hi: num(hi)?,
            seed: seed
                .parse()
                .map_err(|_| usage(format!("--perturb: cannot parse seed {seed:?}")))?,
        },
        _ => return Err(usage(format!("--perturb: unrecognised model {s:?}"))),
    };
    model.validate()?;
    Ok(model)
}

impl Common {
    /// The budget from `--shells`, else `--tol` when it is a series tolerance,
    /// else a fixed default.
    pub fn budget(&self, tol_is_series: bool, default_shells: u64) -> Result<ErrorBudget<f64>, CliError> {
        match (self.shells, self.tol) {
            (Some(_), Some(_)) if tol_is_series => Err(usage("--shells and --tol are mutually exclusive")),
            (Some(0), _) => Err(usage("--shells must be positive")),
            (Some(n), _) => Ok(ErrorBudget::shells(n)),
            (None, Some(eps)) if tol_is_series => {
                if !(eps > 0.0 && eps.is_finite()) {
                    return Err(usage("--tol must be positive"));
                }
                Ok(ErrorBudget::tolerance(eps))
            }
            _ => Ok(ErrorBudget::shells(default_shells)),
        }
    }

    pub fn quad(&self, default_nodes: usize) -> Result<QuadratureSpec, CliError> {
        Ok(QuadratureSpec::with_nodes(self.quad_nodes.unwrap_or(default_nodes))?)
    }
}

pub struct Ray {
    pub direction: Point<f64>,
    pub scales: Vec<f64>,
}

impl RayArgs {
    pub fn is_set(&self) -> bool {
        self.ray.is_some() || self.from.is_some() || self.to.is_some() || self.points.is_some()
    }

    /// Geometric scales `from → to`, both included.
    pub fn resolve(&self, dim: usize, default_points: usize) -> Result<Ray, CliError> {
        let ray = self.ray.as_deref().ok_or_else(|| usage("--ray is required"))?;
        let direction = parse_point("ray", ray, dim)?;
        let from = self.from.ok_or_else(|| usage("--from is required"))?;
        let to = self.to.ok_or_else(|| usage("--to is required"))?;
        let k = self.points.unwrap_or(default_points);
        if !(from > to && to > 0.0 && from.is_finite()) {
            return Err(usage(format!("need --from > --to > 0, got {from} and {to}")));
        }
        if k < 2 {
            return Err(usage("--points must be at least 2"));
        }
        let step = (to / from).ln() / (k - 1) as f64;
        let scales = (0..k)
            .map(|i| match i {
                0 => from,
                i if i == k - 1 => to,
                i => from * (step * i as f64).exp(),
            })
            .collect();
        Ok(Ray { direction, scales })
    }
}

/// `lo:hi:count` with `count ≥ 2`, or `count = 1` meaning just `lo`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || usage(format!("--grid expects lo:hi:count, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !lo.is_finite() || !hi.is_finite() || (count > 1 && !(hi > lo)) {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    // symmetric grids come out exactly mirrored
    let m = (count - 1) as f64;
    Ok((0..count)
        .map(|i| (lo * (m - i as f64) + hi * i as f64) / m)
        .collect())
}
