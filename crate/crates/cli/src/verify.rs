use cosasym::asymptotics::{a_closed, a_integral, theorem2_asym};
use cosasym::decomposition::theorem1_rhs;
use cosasym::series::{eval_f_general, eval_f_general_resummed, eval_f_kernel_resummed, eval_f_lattice, CoefficientModel, Point};

use crate::args::{check_dim, parse_alpha, parse_perturb, parse_point, usage, VerifyArgs, VerifyTarget};
use crate::eval::{DEFAULT_KERNEL_SHELLS, DEFAULT_LATTICE_SHELLS, DEFAULT_QUAD_NODES};
use crate::{num, CliError, Outcome};

const THEOREM1_QUAD_NODES: usize = 48;
const THEOREM1_TOL: f64 = 1e-4;
const THEOREM3_TOL: f64 = 1e-8;
const RATIO_TOL: f64 = 0.05;
const RATIO_POINTS: usize = 3;

struct Report {
    all_pass: bool,
}

impl Report {
    fn line(&mut self, case: &str, lhs: f64, rhs: f64, delta: f64, pass: bool) {
        self.all_pass &= pass;
        let verdict = if pass { "pass" } else { "fail" };
        println!("case={case} lhs={} rhs={} delta={} {verdict}", num(lhs), num(rhs), num(delta));
    }

    fn outcome(&self) -> Outcome {
        if self.all_pass {
            Outcome::Ok
        } else {
            Outcome::Failed
        }
    }
}

fn join(p: &Point<f64>) -> String {
    p.coords().iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
}

/// Each case as (label, θ): the scales of `--ray` if given, else `--theta`.
fn cases(args: &VerifyArgs) -> Result<Vec<(String, Point<f64>)>, CliError> {
    let d = args.common.dim;
    if args.ray.is_set() {
        if args.theta.is_some() {
            return Err(usage("--theta and --ray are mutually exclusive"));
        }
        let ray = args.ray.resolve(d, RATIO_POINTS)?;
        return Ok(ray
            .scales
            .iter()
            .map(|&t| (format!("t={}", num(t)), ray.direction.scaled(t)))
            .collect());
    }
    let theta = args.theta.as_deref().ok_or_else(|| usage("--theta or --ray is required"))?;
    let p = parse_point("theta", theta, d)?;
    Ok(vec![(format!("theta={}", join(&p)), p)])
}

fn tolerance(args: &VerifyArgs, default: f64) -> Result<f64, CliError> {
    let tol = args.common.tol.unwrap_or(default);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(usage("--tol must be positive"));
    }
    Ok(tol)
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let c = &args.common;
    check_dim(c.dim)?;
    let alpha = parse_alpha(c.alpha)?;
    let a = c.alpha;
    let mut report = Report { all_pass: true };
    let model = args.perturb.as_deref().map(parse_perturb).transpose()?;
    if model.is_some() && args.target != VerifyTarget::Theorem4 {
        return Err(usage("--perturb only applies to theorem4"));
    }

    match args.target {
        VerifyTarget::Theorem1 => {
            let tol = tolerance(args, THEOREM1_TOL)?;
            let quad = c.quad(THEOREM1_QUAD_NODES)?;
            let budget = c.budget(false, DEFAULT_KERNEL_SHELLS)?;
            for (label, theta) in cases(args)? {
                let lhs = theorem1_rhs(&theta, &alpha, &quad)?;
                let f = eval_f_kernel_resummed(&theta, &alpha, &budget)?;
                let delta = (lhs - f.value).abs();
                report.line(&format!("theorem1:{label}:alpha={a}"), lhs, f.value, delta, delta <= tol + f.tail_bound);
            }
        }
        VerifyTarget::Theorem3 => {
            let tol = tolerance(args, THEOREM3_TOL)?;
            let quad = c.quad(DEFAULT_QUAD_NODES)?;
            for (label, theta) in cases(args)? {
                let lhs = a_integral(&theta, &alpha, &quad)?;
                let rhs = a_closed(&theta, &alpha)?;
                let delta = (lhs - rhs).abs();
                report.line(&format!("theorem3:{label}:alpha={a}"), lhs, rhs, delta, delta <= tol * (1.0 + lhs.abs()));
            }
        }
        VerifyTarget::Ratio => {
            let tol = tolerance(args, RATIO_TOL)?;
            let budget = c.budget(false, DEFAULT_KERNEL_SHELLS)?;
            let mut ratio = RatioTrack::new(tol, cases(args)?.len());
            for (label, theta) in cases(args)? {
                let f = eval_f_kernel_resummed(&theta, &alpha, &budget)?.value;
                let asym = theorem2_asym(&theta, &alpha)?.value;
                let delta = (f / asym - 1.0).abs();
                let pass = ratio.accept(delta);
                report.line(&format!("ratio:{label}:alpha={a}"), f, asym, delta, pass);
            }
        }
        VerifyTarget::Theorem4 => {
            let model = model.ok_or_else(|| usage("theorem4 needs --perturb"))?;
            match model {
                CoefficientModel::BoundedNoise { a_lo, a_hi, .. } => {
                    let budget = c.budget(false, DEFAULT_LATTICE_SHELLS)?;
                    for (label, theta) in cases(args)? {
                        let f = eval_f_general(&theta, &alpha, &model, &budget)?.value;
                        let fd = eval_f_lattice(&theta, &alpha, &budget)?.value;
                        // Every term is sandwiched, so the partial sums are too.
                        let violation = (a_lo * fd - f).max(f - a_hi * fd);
                        let slack = 1e-12 * f.abs().max(fd.abs());
                        report.line(&format!("theorem4:noise:{label}:alpha={a}"), f, fd, violation, violation <= slack);
                    }
                }
                _ => {
                    let tol = tolerance(args, RATIO_TOL)?;
                    let budget = c.budget(false, DEFAULT_KERNEL_SHELLS)?;
                    let mut ratio = RatioTrack::new(tol, cases(args)?.len());
                    for (label, theta) in cases(args)? {
                        let f = eval_f_general_resummed(&theta, &alpha, &model, &budget)?.value;
                        let fd = eval_f_kernel_resummed(&theta, &alpha, &budget)?.value;
                        let delta = (f / fd - 1.0).abs();
                        let pass = ratio.accept(delta);
                        report.line(&format!("theorem4:mult:{label}:alpha={a}"), f, fd, delta, pass);
                    }
                }
            }
        }
    }
    Ok(report.outcome())
}

/// Deviations must not increase from case to case and the last one must be
/// within tolerance.
struct RatioTrack {
    tol: f64,
    remaining: usize,
    prev: f64,
}

impl RatioTrack {
    fn new(tol: f64, cases: usize) -> Self {
        Self {
            tol,
            remaining: cases,
            prev: f64::INFINITY,
        }
    }

    fn accept(&mut self, delta: f64) -> bool {
        self.remaining -= 1;
        let mut pass = delta <= self.prev;
        if self.remaining == 0 {
            pass &= delta <= self.tol;
        }
        self.prev = delta;
        pass
    }
}
