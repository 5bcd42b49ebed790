use super::lattice::{check_points, lattice_sum};
use super::{eval_f_kernel_resummed, eval_f_lattice, f_tail_bound, ErrorBudget, Point, SeriesValue};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::AlphaParam;

/// Coefficients `a_z` of the generalized series `Σ a_z (1 - cos⟨z,θ⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientModel<T> {
    /// `a_z = ‖z‖^{-(d+α)}`.
    Pure,
    /// `a_z = ‖z‖^{-(d+α)}(1 + c‖z‖^{-β})`, requires `c > -1`, `β > 0`.
    Multiplicative { c: T, beta: T },
    /// `a_z‖z‖^{d+α}` is a deterministic pseudo-random value in `[a_lo, a_hi]`
    /// keyed by `z` and `seed`.
    BoundedNoise { a_lo: T, a_hi: T, seed: u64 },
}

impl<T: Real> CoefficientModel<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CoefficientModel::Pure => Ok(()),
            CoefficientModel::Multiplicative { c, beta } => {
                if !(c > -T::one()) || !c.is_finite() {
                    return Err(Error::InvalidModel(format!("multiplicative model needs c > -1, got {c}")));
                }
                if !(beta > T::zero()) || !beta.is_finite() {
                    return Err(Error::InvalidModel(format!("multiplicative model needs β > 0, got {beta}")));
                }
                Ok(())
            }
            CoefficientModel::BoundedNoise { a_lo, a_hi, .. } => {
                if !(a_lo > T::zero() && a_lo <= a_hi && a_hi.is_finite()) {
                    return Err(Error::InvalidModel(format!(
                        "noise model needs 0 < a_lo <= a_hi < ∞, got [{a_lo}, {a_hi}]"
                    )));
                }
                Ok(())
            }
        }
    }

    /// `a_z‖z‖^{d+α}` for a lattice point on shell `n`.
    pub fn factor(&self, z: &[i64], n: u64) -> T {
        match *self {
            CoefficientModel::Pure => T::one(),
            CoefficientModel::Multiplicative { c, beta } => T::one() + c * T::from_count(n).powf(-beta),
            CoefficientModel::BoundedNoise { a_lo, a_hi, seed } => a_lo + (a_hi - a_lo) * unit_hash::<T>(z, seed),
        }
    }

    /// `sup a_z‖z‖^{d+α}` over `‖z‖ > n`.
    fn tail_factor(&self, n: u64) -> T {
        match *self {
            CoefficientModel::Pure => T::one(),
            CoefficientModel::Multiplicative { c, beta } => {
                T::one() + c.max(T::zero()) * T::from_count(n + 1).powf(-beta)
            }
            CoefficientModel::BoundedNoise { a_hi, .. } => a_hi,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Deterministic value in `[0, 1)` from a lattice point and a seed.
fn unit_hash<T: Real>(z: &[i64], seed: u64) -> T {
    let mut h = splitmix64(seed);
    for &c in z {
        h = splitmix64(h ^ c as u64);
    }
    T::lit((h >> 11) as f64 / (1u64 << 53) as f64)
}

/// The generalized series by direct lattice summation.
///
/// `Pure` runs exactly the code of [`eval_f_lattice`]. The tail bound is the
/// pure bound scaled by the largest coefficient factor beyond the last shell.
pub fn eval_f_general<T: Real>(
    theta: &Point<T>,
    alpha: &AlphaParam<T>,
    model: &CoefficientModel<T>,
    budget: &ErrorBudget<T>,
) -> Result<SeriesValue<T>> {
    model.validate()?;
    if let CoefficientModel::Pure = model {
        return eval_f_lattice(theta, alpha, budget);
    }
    let d = theta.dim();
    let a = alpha.value();
    let l1 = theta.l1_norm();
    let bound = |n: u64| model.tail_factor(n) * f_tail_bound(d, a, l1, n);
    let n = budget.resolve("eval_F_general", bound)?;
    check_points(d, n, budget)?;
    let s = T::from_count(d as u64) + a;
    let wrapped = theta.wrapped();
    let value = match *model {
        CoefficientModel::Multiplicative { .. } => lattice_sum(
            &wrapped,
            n,
            |k| T::from_count(k).powf(-s) * model.factor(&[], k),
            None,
        ),
        _ => {
            let phi = |z: &[i64]| model.factor(z, 0);
            lattice_sum(&wrapped, n, |k| T::from_count(k).powf(-s), Some(&phi))
        }
    };
    Ok(SeriesValue {
        value,
        tail_bound: bound(n),
        shells_used: n,
    })
}

/// The generalized series through the resummed kernel evaluator.
///
/// The multiplicative model is exactly `F_d(θ; α) + c·F_d(θ; α+β)`. Noise has
/// no such structure and is rejected.
pub fn eval_f_general_resummed<T: Real>(
    theta: &Point<T>,
    alpha: &AlphaParam<T>,
    model: &CoefficientModel<T>,
    budget: &ErrorBudget<T>,
) -> Result<SeriesValue<T>> {
    model.validate()?;
    match *model {
        CoefficientModel::Pure => eval_f_kernel_resummed(theta, alpha, budget),
        CoefficientModel::Multiplicative { c, beta } => {
            let base = eval_f_kernel_resummed(theta, alpha, budget)?;
            let shifted = eval_f_kernel_resummed(theta, &AlphaParam::new(alpha.value() + beta)?, budget)?;
            Ok(SeriesValue {
                value: base.value + c * shifted.value,
                tail_bound: base.tail_bound + c.abs() * shifted.tail_bound,
                shells_used: base.shells_used.max(shifted.shells_used),
            })
        }
        CoefficientModel::BoundedNoise { .. } => Err(Error::InvalidModel(
            "the noise model has no kernel form; use the lattice evaluator".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> Point<f64> {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn pure_and_zero_perturbation_are_bit_identical() {
        let a = AlphaParam::new(0.5).unwrap();
        let p = pt(&[0.5, 0.7]);
        let b = ErrorBudget::shells(200);
        let lattice = eval_f_lattice(&p, &a, &b).unwrap();
        let pure = eval_f_general(&p, &a, &CoefficientModel::Pure, &b).unwrap();
        let zero = eval_f_general(&p, &a, &CoefficientModel::Multiplicative { c: 0.0, beta: 1.0 }, &b).unwrap();
        assert_eq!(lattice.value.to_bits(), pure.value.to_bits());
        assert_eq!(lattice.value.to_bits(), zero.value.to_bits());
        assert_eq!(lattice.tail_bound, zero.tail_bound);
    }

    #[test]
    fn multiplicative_is_sum_of_two_pure_series() {
        let a = AlphaParam::new(0.5).unwrap();
        let p = pt(&[0.3, -0.2]);
        let b = ErrorBudget::shells(150);
        let m = CoefficientModel::Multiplicative { c: 0.75, beta: 0.5 };
        let direct = eval_f_general(&p, &a, &m, &b).unwrap().value;
        let f1 = eval_f_lattice(&p, &a, &b).unwrap().value;
        let f2 = eval_f_lattice(&p, &AlphaParam::new(1.0).unwrap(), &b).unwrap().value;
        assert!((direct - (f1 + 0.75 * f2)).abs() < 1e-13);
    }

    #[test]
    fn resummed_multiplicative_within_bounds_of_lattice() {
        let a = AlphaParam::new(1.5).unwrap();
        let p = pt(&[0.4, 0.9]);
        let m = CoefficientModel::Multiplicative { c: 1.0, beta: 0.5 };
        let lat = eval_f_general(&p, &a, &m, &ErrorBudget::shells(300)).unwrap();
        let res = eval_f_general_resummed(&p, &a, &m, &ErrorBudget::shells(20_000)).unwrap();
        assert!((lat.value - res.value).abs() <= lat.tail_bound + res.tail_bound);
    }

    #[test]
    fn noise_sandwich_at_matched_truncation() {
        let a = AlphaParam::new(0.5).unwrap();
        let m = CoefficientModel::BoundedNoise { a_lo: 0.5, a_hi: 2.0, seed: 7 };
        let b = ErrorBudget::shells(100);
        for t in [[0.5, 0.7], [0.01, 0.02], [3.0, -1.0]] {
            let p = pt(&t);
            let f = eval_f_lattice(&p, &a, &b).unwrap().value;
            let g = eval_f_general(&p, &a, &m, &b).unwrap();
            assert!(0.5 * f <= g.value * (1.0 + 1e-14) && g.value <= 2.0 * f * (1.0 + 1e-14));
            assert_eq!(g.tail_bound, 2.0 * f_tail_bound(2, 0.5, p.l1_norm(), 100));
            // deterministic
            assert_eq!(g.value.to_bits(), eval_f_general(&p, &a, &m, &b).unwrap().value.to_bits());
        }
    }

    #[test]
    fn noise_factor_is_in_range_and_seeded() {
        let m = CoefficientModel::BoundedNoise { a_lo: 0.5, a_hi: 2.0, seed: 1 };
        let other = CoefficientModel::BoundedNoise { a_lo: 0.5, a_hi: 2.0, seed: 2 };
        let mut differs = false;
        for z in crate::series::iterate_shell(2, 5) {
            let v: f64 = m.factor(&z, 5);
            assert!((0.5..=2.0).contains(&v));
            differs |= v != other.factor(&z, 5);
        }
        assert!(differs);
    }

    #[test]
    fn invalid_models() {
        let a = AlphaParam::new(0.5).unwrap();
        let p = pt(&[0.1, 0.1]);
        let b = ErrorBudget::shells(10);
        for m in [
            CoefficientModel::Multiplicative { c: -1.0, beta: 1.0 },
            CoefficientModel::Multiplicative { c: 1.0, beta: 0.0 },
            CoefficientModel::BoundedNoise { a_lo: 0.0, a_hi: 1.0, seed: 0 },
            CoefficientModel::BoundedNoise { a_lo: 2.0, a_hi: 1.0, seed: 0 },
        ] {
            assert!(matches!(eval_f_general(&p, &a, &m, &b), Err(Error::InvalidModel(_))));
        }
        let noise = CoefficientModel::BoundedNoise { a_lo: 0.5, a_hi: 1.0, seed: 0 };
        assert!(eval_f_general_resummed(&p, &a, &noise, &b).is_err());
    }
}
