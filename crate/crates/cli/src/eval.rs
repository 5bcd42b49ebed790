use cosasym::asymptotics::{a_closed, a_integral, hstar, theorem2_asym};
use cosasym::series::{
    eval_f_general, eval_f_general_resummed, eval_f_kernel, eval_f_kernel_resummed, eval_f_lattice,
    CoefficientModel, ErrorBudget, Point, SeriesValue,
};
use cosasym::AlphaParam;

use crate::args::{check_dim, parse_alpha, parse_perturb, parse_point, usage, AsymArgs, AsymForm, EvalArgs, Method};
use crate::{num, CliError, Outcome};

pub const DEFAULT_KERNEL_SHELLS: u64 = 100_000;
pub const DEFAULT_LATTICE_SHELLS: u64 = 200;
pub const DEFAULT_QUAD_NODES: usize = 32;

pub fn default_shells(method: Method) -> u64 {
    match method {
        Method::Lattice => DEFAULT_LATTICE_SHELLS,
        Method::Kernel | Method::Resummed => DEFAULT_KERNEL_SHELLS,
    }
}

pub fn evaluate(
    method: Method,
    theta: &Point<f64>,
    alpha: &AlphaParam<f64>,
    model: Option<&CoefficientModel<f64>>,
    budget: &ErrorBudget<f64>,
) -> Result<SeriesValue<f64>, CliError> {
    let v = match (method, model) {
        (Method::Kernel, None) => eval_f_kernel(theta, alpha, budget)?,
        (Method::Lattice, None) => eval_f_lattice(theta, alpha, budget)?,
        (Method::Resummed, None) => eval_f_kernel_resummed(theta, alpha, budget)?,
        (Method::Kernel, Some(_)) => return Err(usage("--perturb needs --method lattice or resummed")),
        (Method::Lattice, Some(m)) => eval_f_general(theta, alpha, m, budget)?,
        (Method::Resummed, Some(m)) => eval_f_general_resummed(theta, alpha, m, budget)?,
    };
    Ok(v)
}

pub fn eval(args: &EvalArgs) -> Result<Outcome, CliError> {
    let c = &args.common;
    check_dim(c.dim)?;
    let alpha = parse_alpha(c.alpha)?;
    let theta = parse_point("theta", &args.theta, c.dim)?;
    let model = args.perturb.as_deref().map(parse_perturb).transpose()?;
    let budget = c.budget(true, default_shells(args.method))?;
    let v = evaluate(args.method, &theta, &alpha, model.as_ref(), &budget)?;
    println!("value={} tail_bound={} shells={}", num(v.value), num(v.tail_bound), v.shells_used);
    Ok(Outcome::Ok)
}

pub fn asym(args: &AsymArgs) -> Result<Outcome, CliError> {
    check_dim(args.dim)?;
    let alpha = parse_alpha(args.alpha)?;
    let theta = parse_point("theta", &args.theta, args.dim)?;
    let regime = alpha.regime();
    let value = match args.form {
        AsymForm::Theorem2 => theorem2_asym(&theta, &alpha)?.value,
        AsymForm::Closed => a_closed(&theta, &alpha)?,
        AsymForm::Integral => {
            let quad = cosasym::decomposition::QuadratureSpec::with_nodes(
                args.quad_nodes.unwrap_or(DEFAULT_QUAD_NODES),
            )?;
            a_integral(&theta, &alpha, &quad)?
        }
        AsymForm::Hstar => {
            if args.dim != 1 {
                return Err(usage("--form hstar needs --dim 1"));
            }
            hstar(theta.coords()[0], &alpha)?.value
        }
    };
    println!("value={} regime={regime}", num(value));
    Ok(Outcome::Ok)
}
