//! Reduction of `F_d` to zeta values, cotangent defects and box integrals of
//! the one-dimensional series `H_{m+α-1}`:
//!
//! ```text
//! F_d(θ) = 2 Σ_{m odd} Σ_{𝒥_m} ζ(m+α)·(2^{d-m} - Π_tail θ_j cot(θ_j/2))
//!        + 2^{1-d} Σ_{m odd} Σ_{𝒥_m} Π_tail cot(θ_j/2)
//!              · Σ_{𝒰_m} ∫_box H_{m+α-1}(s_1θ_{j_1} + ⋯ + s_mθ_{j_m} + η_{m+1} + ⋯ + η_d) dη
//! ```
//!
//! with the box `|η_j| ≤ |θ_j|` over the tail indices.

use crate::combinatorics::{enumerate_partitions, enumerate_signs, odd_set};
use crate::error::{Error, Result};
use crate::quadrature::{box_integral, BoxRule, GaussLegendre, Kinks, TanhSinh};
use crate::scalar::Real;
use crate::series::{HExpansion, Point};
use crate::special::{zeta, AlphaParam};
use crate::summation::CompensatedSum;

/// Most integration variables a box integral may have.
pub const MAX_BOX_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    /// Plain tensor-product Gauss–Legendre over the whole box.
    GaussLegendre,
    /// Axes cut at the kinks of the integrand, tanh-sinh on each piece.
    SplitTanhSinh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Points per axis, or per piece for the split rule.
    pub nodes_per_axis: usize,
    pub rule: QuadratureRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes_per_axis: 32,
            rule: QuadratureRule::SplitTanhSinh,
        }
    }
}

impl QuadratureSpec {
    pub fn new(nodes_per_axis: usize, rule: QuadratureRule) -> Result<Self> {
        if nodes_per_axis < 2 {
            return Err(Error::domain("QuadratureSpec", "need at least 2 nodes per axis"));
        }
        Ok(Self { nodes_per_axis, rule })
    }

    pub fn with_nodes(nodes_per_axis: usize) -> Result<Self> {
        Self::new(nodes_per_axis, QuadratureRule::SplitTanhSinh)
    }

    pub(crate) fn box_rule<T: Real>(&self) -> BoxRule<T> {
        match self.rule {
            QuadratureRule::GaussLegendre => BoxRule::Tensor(GaussLegendre::new(self.nodes_per_axis)),
            QuadratureRule::SplitTanhSinh => BoxRule::Split(TanhSinh::new(self.nodes_per_axis)),
        }
    }
}

fn check_cot_argument<T: Real>(x: T) -> Result<()> {
    if x.abs() >= T::two_pi() || !x.is_finite() {
        return Err(Error::Singularity(x.as_f64()));
    }
    Ok(())
}

/// `x·cot(x/2)`, equal to 2 at `x = 0`.
fn x_cot_half<T: Real>(x: T) -> T {
    if x == T::zero() {
        return T::lit(2.0);
    }
    let h = x * T::lit(0.5);
    x * h.cos() / h.sin()
}

/// `2^k - Π_{x} x·cot(x/2)` over a list of `k` values, each `|x| < 2π`.
pub fn cot_defect<T: Real>(halfwidths: &[T]) -> Result<T> {
    let mut prod = T::one();
    for &x in halfwidths {
        check_cot_argument(x)?;
        prod *= x_cot_half(x);
    }
    Ok(T::lit(2.0).powi(halfwidths.len() as i32) - prod)
}

fn check_box_dim(k: usize) -> Result<()> {
    if k > MAX_BOX_DIM {
        return Err(Error::DimensionCap {
            what: "box integration variables",
            got: k,
            cap: MAX_BOX_DIM,
        });
    }
    Ok(())
}

/// `∫_{-w_1}^{w_1} ⋯ ∫_{-w_k}^{w_k} H_order(c + η_1 + ⋯ + η_k) dη`; with no
/// halfwidths this is `H_order(c)`.
///
/// `H` is evaluated from its closed-form expansion, so there is no series
/// truncation inside the integral.
pub fn box_integral_h<T: Real>(c: T, halfwidths: &[T], order: T, quad: &QuadratureSpec) -> Result<T> {
    check_box_dim(halfwidths.len())?;
    let h = HExpansion::new(order)?;
    Ok(box_h(&h, c, halfwidths, &quad.box_rule()))
}

fn box_h<T: Real>(h: &HExpansion<T>, c: T, halfwidths: &[T], rule: &BoxRule<T>) -> T {
    if halfwidths.is_empty() {
        return h.eval(c);
    }
    box_integral(&|u: T| h.eval(u), c, halfwidths, rule, Kinks::Periodic)
}

/// The two blocks of the decomposition; `first + second = F_d(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Terms<T> {
    /// zeta and cotangent-defect terms
    pub first: T,
    /// box integrals of `H_{m+α-1}`
    pub second: T,
}

impl<T: Real> Theorem1Terms<T> {
    pub fn total(&self) -> T {
        self.first + self.second
    }
}

/// Right-hand side of the dimension-reduction identity, which equals `F_d(θ)`.
///
/// Requires `d ≥ 2` and every `|θ_j| < 2π`. A tail component `θ_j = 0` is
/// taken in the limit: `cot(θ_j/2)·∫_{-θ_j}^{θ_j} g(η_j) dη_j → 4 g(0)`.
pub fn theorem1_rhs<T: Real>(theta: &Point<T>, alpha: &AlphaParam<T>, quad: &QuadratureSpec) -> Result<T> {
    Ok(theorem1_terms(theta, alpha, quad)?.total())
}

pub fn theorem1_terms<T: Real>(
    theta: &Point<T>,
    alpha: &AlphaParam<T>,
    quad: &QuadratureSpec,
) -> Result<Theorem1Terms<T>> {
    let d = theta.dim();
    if d < 2 {
        return Err(Error::domain("theorem1_rhs", "needs d >= 2"));
    }
    let th = theta.coords();
    for &x in th {
        check_cot_argument(x)?;
    }
    let a = alpha.value();
    let rule = quad.box_rule();
    let half = T::lit(0.5);
    let mut first = CompensatedSum::new();
    let mut second = CompensatedSum::new();
    for m in odd_set(d) {
        let zeta_m = zeta(T::lit(m as f64) + a)?;
        let h = HExpansion::new(T::lit(m as f64 - 1.0) + a)?;
        let signs = enumerate_signs(m);
        for part in enumerate_partitions(d, m)? {
            let tail: Vec<T> = part.tail().iter().map(|&j| th[j - 1]).collect();
            first.add(T::lit(2.0) * zeta_m * cot_defect(&tail)?);

            let mut prefactor = T::one();
            let mut widths = Vec::with_capacity(tail.len());
            for &x in &tail {
                if x == T::zero() {
                    prefactor *= T::lit(4.0);
                } else {
                    let hx = x * half;
                    prefactor = prefactor * hx.cos() / hx.sin();
                    widths.push(x);
                }
            }
            check_box_dim(widths.len())?;
            let mut inner = CompensatedSum::new();
            for sp in &signs {
                let c = part
                    .head()
                    .iter()
                    .zip(sp.signs())
                    .fold(T::zero(), |acc, (&j, &s)| acc + T::lit(s as f64) * th[j - 1]);
                inner.add(box_h(&h, c, &widths, &rule));
            }
            second.add(prefactor * inner.value());
        }
    }
    Ok(Theorem1Terms {
        first: first.value(),
        second: second.value() / T::lit(2.0).powi(d as i32 - 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{eval_f_kernel_resummed, h_closed, ErrorBudget};

    fn pt(c: &[f64]) -> Point<f64> {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn cot_defect_examples() {
        assert_eq!(cot_defect::<f64>(&[]).unwrap(), 0.0);
        assert_eq!(cot_defect(&[0.0f64]).unwrap(), 0.0);
        assert!(cot_defect(&[1e-8f64]).unwrap().abs() < 1e-15);
        let direct = 4.0 - (0.6 / 0.3f64.tan()) * (0.8 / 0.4f64.tan());
        let got = cot_defect(&[0.6f64, 0.8]).unwrap();
        assert!((got - direct).abs() < 1e-15);
        // x cot(x/2) = 2 - x²/6 - …, so the defect is O(|x|²)
        for s in [1e-1, 1e-2, 1e-3] {
            let v = cot_defect(&[0.6 * s, 0.8 * s]).unwrap();
            assert!(v > 0.0 && v <= 0.4 * (0.36 + 0.64) * s * s, "{v}");
        }
        assert!(matches!(cot_defect(&[7.0f64]), Err(Error::Singularity(_))));
    }

    #[test]
    fn box_integral_h_basic_cases() {
        let q = QuadratureSpec::default();
        assert_eq!(box_integral_h(0.0f64, &[], 1.3, &q).unwrap(), 0.0);
        assert_eq!(box_integral_h(0.4f64, &[], 1.3, &q).unwrap(), h_closed(0.4, 1.3).unwrap());
        let plus = box_integral_h(0.5f64, &[0.3], 1.5, &q).unwrap();
        let minus = box_integral_h(-0.5f64, &[0.3], 1.5, &q).unwrap();
        assert!((plus - minus).abs() < 1e-12);
        let at0 = box_integral_h(0.0f64, &[0.7], 0.5, &q).unwrap();
        let half = crate::quadrature::TanhSinh::new(64).integrate(0.0, 0.7, |u: f64| h_closed(u, 0.5).unwrap());
        assert!((at0 - 2.0 * half).abs() < 1e-12);
        assert!(matches!(
            box_integral_h(0.1f64, &[0.1; 7], 1.0, &q),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn box_integral_h_against_halving_refinement() {
        // composite Simpson on [c-w, c+w], halving until two successive
        // estimates agree; H_{1.5} is C¹ so this converges
        let (c, w, order) = (0.5f64, 0.3f64, 1.5f64);
        let f = |u: f64| h_closed(u, order).unwrap();
        let simpson = |n: usize| {
            let h = 2.0 * w / n as f64;
            let mut s = f(c - w) + f(c + w);
            for i in 1..n {
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(c - w + i as f64 * h);
            }
            s * h / 3.0
        };
        let mut n = 8;
        let mut prev = simpson(n);
        loop {
            n *= 2;
            let next = simpson(n);
            if (next - prev).abs() < 1e-12 || n > 1 << 16 {
                prev = next;
                break;
            }
            prev = next;
        }
        let got = box_integral_h(c, &[w], order, &QuadratureSpec::default()).unwrap();
        assert!((got - prev).abs() < 1e-8, "{got} vs {prev}");
    }

    #[test]
    fn identity_d2_and_d3() {
        let cases: [(&[f64], f64, f64); 5] = [
            (&[0.5, 0.7], 0.5, 1e-9),
            (&[0.2, 1.1], 1.5, 1e-9),
            (&[-0.4, 0.9], 2.5, 1e-9),
            (&[0.6, 0.0], 1.0, 1e-9),
            (&[0.3, 0.4, 0.5], 1.0, 1e-8),
        ];
        for (t, a, tol) in cases {
            let p = pt(t);
            let alpha = AlphaParam::new(a).unwrap();
            let rhs = theorem1_rhs(&p, &alpha, &QuadratureSpec::with_nodes(48).unwrap()).unwrap();
            let f = eval_f_kernel_resummed(&p, &alpha, &ErrorBudget::shells(100_000)).unwrap();
            assert!((rhs - f.value).abs() <= tol + f.tail_bound, "θ={t:?} α={a}: {rhs} vs {}", f.value);
        }
    }

    #[test]
    fn full_order_first_block_term_is_zero() {
        // for d = 3 the m = 3 partition has an empty tail
        let parts = enumerate_partitions(3, 3).unwrap();
        assert!(parts[0].tail().is_empty());
        assert_eq!(cot_defect::<f64>(&[]).unwrap(), 0.0);
    }

    #[test]
    fn vanishes_towards_the_origin() {
        let alpha = AlphaParam::new(0.5).unwrap();
        let q = QuadratureSpec::default();
        let values: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&t| theorem1_rhs(&pt(&[t, t]), &alpha, &q).unwrap())
            .collect();
        assert!(values.iter().all(|&v| v > 0.0));
        // roughly t^α: a factor ≈ 10 over two decades
        assert!(values[1] < values[0] / 2.0 && values[2] < values[1] / 2.0, "{values:?}");
    }

    #[test]
    fn tensor_rule_converges_monotonically() {
        let p = pt(&[0.5, 0.7]);
        let alpha = AlphaParam::new(0.5).unwrap();
        let at = |n| theorem1_rhs(&p, &alpha, &QuadratureSpec::new(n, QuadratureRule::GaussLegendre).unwrap()).unwrap();
        let values: Vec<f64> = [8, 16, 32, 64, 128].into_iter().map(at).collect();
        let deltas: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(deltas.windows(2).all(|w| w[1] < w[0]), "{deltas:?}");
    }

    #[test]
    fn rejects_bad_input() {
        let alpha = AlphaParam::new(1.0).unwrap();
        let q = QuadratureSpec::default();
        assert!(theorem1_rhs(&pt(&[0.5]), &alpha, &q).is_err());
        assert!(matches!(theorem1_rhs(&pt(&[0.5, 6.3]), &alpha, &q), Err(Error::Singularity(_))));
        assert!(QuadratureSpec::with_nodes(1).is_err());
    }
}
