use std::io::Write as _;
use std::path::Path;

use cosasym::asymptotics::theorem2_asym;
use cosasym::series::Point;
use rayon::prelude::*;

use crate::args::{check_dim, parse_alpha, parse_grid, usage, Column, SweepArgs};
use crate::eval::evaluate;
use crate::{num, CliError, Outcome};

const DEFAULT_SWEEP_SHELLS: u64 = 10_000;
const MAX_ROWS: usize = 10_000_000;

/// Every combination of `axis` values, the first coordinate varying slowest.
fn grid_points(axis: &[f64], d: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let rows = u32::try_from(d)
        .ok()
        .and_then(|d| axis.len().checked_pow(d))
        .filter(|&r| r <= MAX_ROWS)
        .ok_or_else(|| usage(format!("grid of {}^{d} points is too large", axis.len())))?;
    Ok((0..rows)
        .map(|mut r| {
            let mut p = vec![0.0; d];
            for x in p.iter_mut().rev() {
                *x = axis[r % axis.len()];
                r /= axis.len();
            }
            p
        })
        .collect())
}

fn cell(out: &mut String, v: Option<f64>) {
    out.push(',');
    if let Some(v) = v.filter(|v| v.is_finite()) {
        out.push_str(&num(v));
    }
}

pub fn sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let c = &args.common;
    let d = c.dim;
    check_dim(d)?;
    let alpha = parse_alpha(c.alpha)?;
    let budget = c.budget(true, DEFAULT_SWEEP_SHELLS)?;
    let want_asym = args.columns.contains(&Column::Asym);
    let want_ratio = args.columns.contains(&Column::Ratio);

    let points: Vec<Vec<f64>> = match (&args.grid, args.ray.is_set()) {
        (Some(g), false) => grid_points(&parse_grid(g)?, d)?,
        (None, true) => {
            let ray = args.ray.resolve(d, 2)?;
            ray.scales.iter().map(|&t| ray.direction.scaled(t).coords().to_vec()).collect()
        }
        _ => return Err(usage("sweep needs exactly one of --grid or --ray")),
    };

    let rows = points
        .par_iter()
        .map(|coords| -> Result<String, CliError> {
            let theta = Point::new(coords.clone())?;
            let f = evaluate(args.method, &theta, &alpha, None, &budget)?.value;
            let asym = if want_asym || want_ratio {
                theorem2_asym(&theta, &alpha).ok().map(|a| a.value)
            } else {
                None
            };
            let mut row = coords.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",");
            cell(&mut row, Some(f));
            if want_asym {
                cell(&mut row, asym);
            }
            if want_ratio {
                cell(&mut row, asym.filter(|&a| a != 0.0).map(|a| f / a));
            }
            row.push('\n');
            Ok(row)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut csv = (1..=d).map(|j| format!("theta_{j}")).collect::<Vec<_>>().join(",");
    csv.push_str(",F");
    if want_asym {
        csv.push_str(",asym");
    }
    if want_ratio {
        csv.push_str(",ratio");
    }
    csv.push('\n');
    csv.extend(rows);

    match &args.out {
        Some(path) => write_atomically(path, csv.as_bytes())?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(Outcome::Ok)
}

/// Writes to a temporary file beside `path`, then renames it into place.
fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
