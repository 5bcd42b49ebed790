use super::shell::visit_shell;
use super::{f_tail_bound, ErrorBudget, Point, SeriesValue};
use crate::error::{Error, Result};
use crate::scalar::{one_minus_cos, Real};
use crate::special::AlphaParam;
use crate::summation::{ordered_block_sum, CompensatedSum};

/// Checks that `(2N+1)^d` lattice points fit under the budget's cap.
pub(super) fn check_points<T: Real>(d: usize, n: u64, budget: &ErrorBudget<T>) -> Result<()> {
    let side = (2 * n + 1) as f64;
    let total = side.powi(d as i32);
    if total > budget.max_points as f64 {
        return Err(Error::BudgetInfeasible(format!(
            "lattice sum over {n} shells in dimension {d} visits {total:.3e} points, cap is {}",
            budget.max_points
        )));
    }
    Ok(())
}

/// `Σ_{n=1}^{N} w(n)·Σ_{‖z‖=n} φ(z)·(1 - cos⟨z,θ⟩)`, shells in increasing
/// order, points within a shell in lexicographic order. `φ ≡ 1` when absent.
pub(super) type PointFactor<'a, T> = &'a (dyn Fn(&[i64]) -> T + Sync);

pub(super) fn lattice_sum<T: Real>(
    theta: &[T],
    n: u64,
    shell_weight: impl Fn(u64) -> T + Sync,
    point_factor: Option<PointFactor<T>>,
) -> T {
    ordered_block_sum(1, n, 4, |k| {
        let mut acc = CompensatedSum::new();
        match point_factor {
            None => visit_shell(theta, k as i64, &mut |_: &[i64], phase: T| acc.add(one_minus_cos(phase))),
            Some(phi) => visit_shell(theta, k as i64, &mut |z: &[i64], phase: T| {
                acc.add(phi(z) * one_minus_cos(phase))
            }),
        }
        shell_weight(k) * acc.value()
    })
}

/// `F_d(θ)` by direct summation over the lattice, shell by shell. Cost `O(N^d)`.
pub fn eval_f_lattice<T: Real>(theta: &Point<T>, alpha: &AlphaParam<T>, budget: &ErrorBudget<T>) -> Result<SeriesValue<T>> {
    let d = theta.dim();
    let a = alpha.value();
    let l1 = theta.l1_norm();
    let bound = |n: u64| f_tail_bound(d, a, l1, n);
    let n = budget.resolve("eval_F_lattice", bound)?;
    check_points(d, n, budget)?;
    let s = T::from_count(d as u64) + a;
    let value = lattice_sum(&theta.wrapped(), n, |k| T::from_count(k).powf(-s), None);
    Ok(SeriesValue {
        value,
        tail_bound: bound(n),
        shells_used: n,
    })
}
