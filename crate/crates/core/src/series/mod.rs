//! Truncated evaluation of `H_α` and `F_d`, each value paired with a rigorous
//! bound on what the truncation left out.

mod general;
mod h;
mod kernel;
mod lattice;
mod shell;

pub use general::{eval_f_general, eval_f_general_resummed, CoefficientModel};
pub use h::{eval_h, h_closed, HExpansion};
pub use kernel::{eval_f_kernel, eval_f_kernel_resummed};
pub use lattice::eval_f_lattice;
pub use shell::{iterate_shell, shell_count, ShellIter};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest shell index any one-dimensional sum may use.
pub const MAX_SHELLS: u64 = 100_000_000;
/// Largest number of lattice points a direct lattice sum may visit.
pub const MAX_POINTS: u64 = 1_000_000_000;

/// A point θ ∈ ℝ^d.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Real> Point<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::domain("Point", "dimension must be at least 1"));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::domain("Point", format!("coordinate {} is not finite", i + 1)));
        }
        Ok(Self { coords })
    }

    /// The point `t·(1, …, 1)`-style ray `t·dir`.
    pub fn scaled(&self, t: T) -> Self {
        Self {
            coords: self.coords.iter().map(|&c| c * t).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    /// `‖θ‖ = max_j |θ_j|`.
    pub fn max_norm(&self) -> T {
        self.coords.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }

    /// `|θ|`, the Euclidean norm.
    pub fn euclidean_norm(&self) -> T {
        let scale = self.max_norm();
        if scale == T::zero() {
            return T::zero();
        }
        let ss: T = self.coords.iter().map(|&c| (c / scale) * (c / scale)).sum();
        scale * ss.sqrt()
    }

    pub fn l1_norm(&self) -> T {
        self.coords.iter().map(|c| c.abs()).sum()
    }

    pub(crate) fn wrapped(&self) -> Vec<T> {
        self.coords.iter().map(|&c| crate::scalar::wrap_angle(c)).collect()
    }
}

impl<T: Real> TryFrom<Vec<T>> for Point<T> {
    type Error = Error;
    fn try_from(coords: Vec<T>) -> Result<Self> {
        Point::new(coords)
    }
}

/// How far a series is summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation<T> {
    /// Sum shells `1..=N`.
    FixedShells(u64),
    /// Use the smallest `N` whose certified tail bound is at most ε.
    TailTolerance(T),
}

/// Truncation policy plus the hard caps that guard against runaway sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget<T> {
    pub mode: Truncation<T>,
    pub max_shells: u64,
    pub max_points: u64,
}

impl<T: Real> ErrorBudget<T> {
    pub fn shells(n: u64) -> Self {
        Self {
            mode: Truncation::FixedShells(n),
            max_shells: MAX_SHELLS,
            max_points: MAX_POINTS,
        }
    }

    pub fn tolerance(eps: T) -> Self {
        Self {
            mode: Truncation::TailTolerance(eps),
            max_shells: MAX_SHELLS,
            max_points: MAX_POINTS,
        }
    }

    /// Resolves the shell count. `bound(N)` must be non-increasing in `N`.
    pub(crate) fn resolve(&self, what: &str, bound: impl Fn(u64) -> T) -> Result<u64> {
        match self.mode {
            Truncation::FixedShells(n) => {
                if n == 0 {
                    return Err(Error::domain("ErrorBudget", "shell count must be positive"));
                }
                if n > self.max_shells {
                    return Err(Error::BudgetInfeasible(format!(
                        "{what}: {n} shells requested, cap is {}",
                        self.max_shells
                    )));
                }
                Ok(n)
            }
            Truncation::TailTolerance(eps) => {
                if !(eps > T::zero()) {
                    return Err(Error::domain("ErrorBudget", format!("tolerance must be > 0, got {eps}")));
                }
                if bound(self.max_shells) > eps {
                    return Err(Error::BudgetInfeasible(format!(
                        "{what}: tail bound {:e} at the cap of {} shells exceeds tolerance {:e}",
                        bound(self.max_shells).as_f64(),
                        self.max_shells,
                        eps.as_f64()
                    )));
                }
                // exponential search, then bisection for the smallest feasible N
                let mut hi = 1u64;
                while bound(hi) > eps {
                    hi = (hi * 2).min(self.max_shells);
                }
                if hi == 1 {
                    return Ok(1);
                }
                // bound(lo) > eps >= bound(hi)
                let mut lo = hi / 2;
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if bound(mid) <= eps {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                Ok(hi)
            }
        }
    }
}

/// A truncated sum together with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue<T> {
    pub value: T,
    pub tail_bound: T,
    pub shells_used: u64,
}

/// Bound on `Σ_{‖z‖>N} ‖z‖^{-(d+α)}(1 - cos⟨z,θ⟩)`.
///
/// Crude form `4d·3^{d-1}/(α N^α)` from `1 - cos ≤ 2`; for α > 2 also
/// `d·3^{d-1}|θ|₁² N^{2-α}/(α-2)` from `1 - cos x ≤ x²/2`. The smaller wins.
pub(crate) fn f_tail_bound<T: Real>(d: usize, alpha: T, l1: T, n: u64) -> T {
    let nn = T::from_count(n);
    let dd = T::from_count(d as u64);
    let c = dd * T::lit(3.0).powi(d as i32 - 1);
    let crude = T::lit(4.0) * c / (alpha * nn.powf(alpha));
    let two = T::lit(2.0);
    if alpha > two {
        crude.min(c * l1 * l1 * nn.powf(two - alpha) / (alpha - two))
    } else {
        crude
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms() {
        let p = Point::new(vec![3.0f64, -4.0]).unwrap();
        assert_eq!(p.max_norm(), 4.0);
        assert!((p.euclidean_norm() - 5.0).abs() < 1e-15);
        assert_eq!(p.l1_norm(), 7.0);
        assert!(Point::<f64>::new(vec![]).is_err());
        assert!(Point::new(vec![f64::NAN]).is_err());
        let tiny = Point::new(vec![3e-300f64, 4e-300]).unwrap();
        assert!((tiny.euclidean_norm() / 5e-300 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn resolve_picks_minimal_n() {
        let b = ErrorBudget::tolerance(0.01f64);
        let n = b.resolve("test", |n| 1.0 / n as f64).unwrap();
        assert_eq!(n, 100);
        let n = b.resolve("test", |n| 1.0 / (n as f64).powi(2)).unwrap();
        assert_eq!(n, 10);
        assert_eq!(b.resolve("test", |_| 0.0).unwrap(), 1);
        let tight = ErrorBudget::tolerance(1e-30f64);
        assert!(matches!(tight.resolve("test", |n| 1.0 / n as f64), Err(Error::BudgetInfeasible(_))));
        assert!(ErrorBudget::<f64>::shells(0).resolve("t", |_| 0.0).is_err());
        assert!(ErrorBudget::<f64>::shells(MAX_SHELLS + 1).resolve("t", |_| 0.0).is_err());
    }
}
