//! Closed-form small-θ equivalents: `H*_α`, the prefactor `A_d` in integral
//! and signed-power form, and the three-regime asymptotic of `F_d`.

use crate::combinatorics::{binomial, enumerate_partitions, enumerate_signs};
use crate::decomposition::QuadratureSpec;
use crate::error::{Error, Result};
use crate::quadrature::{box_integral, Kinks};
use crate::scalar::Real;
use crate::series::{ErrorBudget, Point, SeriesValue};
use crate::special::{hardy_constant, power_tail, zeta, AlphaParam, Regime};
use crate::summation::CompensatedSum;

/// Largest dimension accepted by [`a_integral`].
pub const MAX_A_INTEGRAL_DIM: usize = 7;

/// Which closed form produced an [`AsymptoticValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaId {
    HStar,
    ADIntegral,
    ADClosed,
    Theorem2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticValue<T> {
    pub value: T,
    pub regime: Regime,
    pub formula: FormulaId,
}

/// Classifies α.
pub fn regime<T: Real>(alpha: T) -> Result<AlphaParam<T>> {
    AlphaParam::new(alpha)
}

/// `x^{(m,α)} = x^m·|x|^α`, zero at `x = 0`.
pub fn signed_power<T: Real>(x: T, m: u32, alpha: T) -> T {
    if x == T::zero() {
        return T::zero();
    }
    x.powi(m as i32) * x.abs().powf(alpha)
}

/// `H*_α(θ)`: `K(α)|θ|^α/α` below 2, `½θ² log(1/|θ|)` at 2, `½ζ(α-1)θ²` above.
pub fn hstar<T: Real>(theta: T, alpha: &AlphaParam<T>) -> Result<AsymptoticValue<T>> {
    let a = alpha.value();
    let half = T::lit(0.5);
    let y = theta.abs();
    let value = match alpha.regime() {
        Regime::Sub2 => hardy_constant(a)? * y.powf(a) / a,
        Regime::Crit2 => {
            if y >= T::one() {
                return Err(Error::domain("hstar", format!("α = 2 needs |θ| < 1, got {theta}")));
            }
            if y == T::zero() {
                T::zero()
            } else {
                -half * y * y * y.ln()
            }
        }
        Regime::Super2 => half * zeta(a - T::one())? * y * y,
    };
    Ok(AsymptoticValue {
        value,
        regime: alpha.regime(),
        formula: FormulaId::HStar,
    })
}

fn require_nonzero<T: Real>(theta: &Point<T>, function: &'static str) -> Result<()> {
    match theta.coords().iter().position(|&x| x == T::zero()) {
        Some(i) => Err(Error::ZeroComponent { function, index: i + 1 }),
        None => Ok(()),
    }
}

/// `A_d(θ) = Σ_{𝒥_1} (1/Π_tail θ_j) ∫_box |θ_{j_1} + η_2 + ⋯ + η_d|^α dη`,
/// the box being `|η_j| ≤ |θ_j|` over the tail.
pub fn a_integral<T: Real>(theta: &Point<T>, alpha: &AlphaParam<T>, quad: &QuadratureSpec) -> Result<T> {
    let d = theta.dim();
    if d > MAX_A_INTEGRAL_DIM {
        return Err(Error::DimensionCap {
            what: "A_d integral dimension",
            got: d,
            cap: MAX_A_INTEGRAL_DIM,
        });
    }
    require_nonzero(theta, "A_integral")?;
    let a = alpha.value();
    let th = theta.coords();
    let rule = quad.box_rule();
    let g = |u: T| u.abs().powf(a);
    let mut acc = CompensatedSum::new();
    for part in enumerate_partitions(d, 1)? {
        let tail: Vec<T> = part.tail().iter().map(|&j| th[j - 1]).collect();
        let denom = tail.iter().fold(T::one(), |p, &x| p * x);
        let c = th[part.head()[0] - 1];
        let integral = if tail.is_empty() {
            g(c)
        } else {
            box_integral(&g, c, &tail, &rule, Kinks::Origin)
        };
        acc.add(integral / denom);
    }
    Ok(acc.value())
}

/// `A_d(θ)` in signed-power form:
/// `[Π_{k=1}^{d-1}(α+k)]^{-1} Σ_{𝒥_1} (1/Π_tail θ_j) Σ_{s} s_2⋯s_d·(θ_{j_1} + Σ s_kθ_{j_k})^{(d-1,α)}`.
///
/// The alternating sum cancels badly for small `|θ|`, so it is evaluated at
/// `θ/|θ|` and scaled by `|θ|^α`.
pub fn a_closed<T: Real>(theta: &Point<T>, alpha: &AlphaParam<T>) -> Result<T> {
    if alpha.regime() != Regime::Sub2 {
        return Err(Error::domain("A_closed", format!("needs 0 < α < 2, got {}", alpha.value())));
    }
    require_nonzero(theta, "A_closed")?;
    let d = theta.dim();
    let a = alpha.value();
    let norm = theta.euclidean_norm();
    let th: Vec<T> = theta.coords().iter().map(|&x| x / norm).collect();
    let signs = if d > 1 { enumerate_signs(d - 1) } else { Vec::new() };
    let mut acc = CompensatedSum::new();
    for part in enumerate_partitions(d, 1)? {
        let tail: Vec<T> = part.tail().iter().map(|&j| th[j - 1]).collect();
        let denom = tail.iter().fold(T::one(), |p, &x| p * x);
        let c = th[part.head()[0] - 1];
        let mut inner = CompensatedSum::new();
        if tail.is_empty() {
            inner.add(signed_power(c, 0, a));
        }
        for sp in &signs {
            let (x, parity) = tail
                .iter()
                .zip(sp.signs())
                .fold((c, T::one()), |(x, p), (&t, &s)| {
                    let s = T::lit(s as f64);
                    (x + s * t, p * s)
                });
            inner.add(parity * signed_power(x, (d - 1) as u32, a));
        }
        acc.add(inner.value() / denom);
    }
    let rising = (1..d).fold(T::one(), |p, k| p * (a + T::lit(k as f64)));
    Ok(acc.value() / rising * norm.powf(a))
}

/// Integer coefficients `c_k` with
/// `(2n+1)^d(n+1) - (2n-1)^d(n-1) = Σ_{k=0}^{d} c_k n^k`.
fn super2_bracket(d: usize) -> Result<Vec<f64>> {
    let mut c = vec![0.0; d + 1];
    for j in 0..=d {
        let base = binomial(d as u64, j as u64)? as f64 * 2f64.powi(j as i32);
        if (d - j).is_multiple_of(2) {
            c[j] += 2.0 * base;
        } else {
            c[j + 1] += 2.0 * base;
        }
    }
    Ok(c)
}

/// `(1/6)·Σ_{n≥1} [(2n+1)^d(n+1) - (2n-1)^d(n-1)] / n^{d+α-1}` for α > 2.
///
/// The first `N` terms are summed directly and the rest is added as exact
/// Euler–Maclaurin tails of each power of `n`; the returned bound covers the
/// Euler–Maclaurin remainder.
pub fn super2_coefficient<T: Real>(d: usize, alpha: &AlphaParam<T>, budget: &ErrorBudget<T>) -> Result<SeriesValue<T>> {
    if alpha.regime() != Regime::Super2 {
        return Err(Error::domain("super2_coefficient", format!("needs α > 2, got {}", alpha.value())));
    }
    if d == 0 {
        return Err(Error::domain("super2_coefficient", "needs d >= 1"));
    }
    let coef: Vec<T> = super2_bracket(d)?.into_iter().map(T::lit).collect();
    let p0 = T::lit(d as f64 - 1.0) + alpha.value();
    let sixth = T::one() / T::lit(6.0);
    let tails = |n: u64| {
        let mut acc = CompensatedSum::new();
        let mut err = T::zero();
        for (k, &c) in coef.iter().enumerate() {
            if c == T::zero() {
                continue;
            }
            let (t, e) = power_tail(p0 - T::lit(k as f64), n, 6);
            acc.add(c * t);
            err += c * e;
        }
        (acc.value(), err)
    };
    let n = budget.resolve("super2_coefficient", |n| sixth * tails(n).1)?;
    let mut acc = CompensatedSum::new();
    for j in 1..=n {
        let nj = T::from_count(j);
        let poly = coef.iter().rev().fold(T::zero(), |p, &c| p * nj + c);
        acc.add(poly / nj.powf(p0));
    }
    let (tail, err) = tails(n);
    acc.add(tail);
    Ok(SeriesValue {
        value: sixth * acc.value(),
        tail_bound: sixth * err,
        shells_used: n,
    })
}

/// Small-θ equivalent of `F_d(θ)`:
/// `(2/α)K(α)A_d(θ)` below 2, `2^{d-1}(d+2)/3·|θ|² log(1/|θ|)` at 2 and
/// `super2_coefficient·|θ|²` above.
pub fn theorem2_asym<T: Real>(theta: &Point<T>, alpha: &AlphaParam<T>) -> Result<AsymptoticValue<T>> {
    let d = theta.dim();
    let a = alpha.value();
    let r = theta.euclidean_norm();
    let value = match alpha.regime() {
        Regime::Sub2 => T::lit(2.0) / a * hardy_constant(a)? * a_closed(theta, alpha)?,
        Regime::Crit2 => {
            if !(r > T::zero() && r < T::one()) {
                return Err(Error::domain("theorem2_asym", format!("α = 2 needs 0 < |θ| < 1, got {r}")));
            }
            T::lit(2.0).powi(d as i32 - 1) * T::lit(d as f64 + 2.0) / T::lit(3.0) * r * r * -r.ln()
        }
        Regime::Super2 => super2_coefficient(d, alpha, &ErrorBudget::tolerance(T::lit(1e-14)))?.value * r * r,
    };
    Ok(AsymptoticValue {
        value,
        regime: alpha.regime(),
        formula: FormulaId::Theorem2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn pt(c: &[f64]) -> Point<f64> {
        Point::new(c.to_vec()).unwrap()
    }

    fn al(a: f64) -> AlphaParam<f64> {
        AlphaParam::new(a).unwrap()
    }

    #[test]
    fn signed_power_examples() {
        assert_eq!(signed_power(-2.0, 1, 1.0), -4.0);
        assert_eq!(signed_power(0.0, 2, 0.5), 0.0);
        assert_eq!(signed_power(-3.0, 0, 2.0), 9.0);
    }

    #[test]
    fn signed_power_derivative() {
        let h = 1e-5;
        for x in [0.7, -0.7] {
            for m in 1..=3u32 {
                for a in [0.5, 1.5] {
                    let fd = (signed_power(x + h, m, a) - signed_power(x - h, m, a)) / (2.0 * h);
                    let exact = (a + m as f64) * signed_power(x, m - 1, a);
                    assert!((fd / exact - 1.0).abs() < 1e-6, "x={x} m={m} α={a}");
                }
            }
        }
    }

    #[test]
    fn hstar_examples() {
        let v = hstar(0.01, &al(1.0)).unwrap();
        assert!((v.value - PI / 2.0 * 0.01).abs() < 1e-15);
        assert_eq!(v.regime, Regime::Sub2);
        let v = hstar(0.01, &al(3.0)).unwrap();
        assert!((v.value - 0.5 * PI * PI / 6.0 * 1e-4).abs() < 1e-17);
        let v = hstar(-0.1, &al(2.0)).unwrap();
        assert!((v.value - 0.5 * 0.01 * 10f64.ln()).abs() < 1e-16);
        assert!(hstar(1.5, &al(2.0)).is_err());
    }

    #[test]
    fn hstar_tracks_the_series() {
        let h = crate::series::h_closed(1e-4, 0.5).unwrap();
        let r = h / hstar(1e-4, &al(0.5)).unwrap().value;
        assert!((r - 1.0).abs() < 2e-2, "{r}");
    }

    #[test]
    fn a_two_dimensional_unit_point() {
        let p = pt(&[1.0, 1.0]);
        let q = QuadratureSpec::default();
        assert!((a_integral(&p, &al(1.0), &q).unwrap() - 4.0).abs() < 1e-12);
        assert!((a_closed(&p, &al(1.0)).unwrap() - 4.0).abs() < 1e-12);
        for a in [0.5, 1.5] {
            let i = a_integral(&p, &al(a), &q).unwrap();
            let c = a_closed(&p, &al(a)).unwrap();
            assert!((i - c).abs() < 1e-8);
        }
    }

    #[test]
    fn two_dimensional_closed_form_shape() {
        let (t1, t2, a) = (0.3f64, 0.8f64, 0.7f64);
        let sp = |x: f64| x * x.abs().powf(a);
        let expected = ((sp(t1 + t2) - sp(t1 - t2)) / t2 + (sp(t2 + t1) - sp(t2 - t1)) / t1) / (a + 1.0);
        let got = a_closed(&pt(&[t1, t2]), &al(a)).unwrap();
        assert!((got - expected).abs() < 1e-13 * expected);
    }

    #[test]
    fn closed_equals_integral_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q = QuadratureSpec::default();
        for case in 0..30 {
            let d = 2 + case % 3;
            let a = [0.25, 0.5, 1.0, 1.5, 1.9][case % 5];
            let p = pt(&(0..d).map(|_| rng.gen_range(0.1..1.0)).collect::<Vec<_>>());
            let i = a_integral(&p, &al(a), &q).unwrap();
            let c = a_closed(&p, &al(a)).unwrap();
            assert!((i - c).abs() <= 1e-8 * (1.0 + i.abs()), "d={d} α={a}: {i} vs {c}");
            assert!(c > 0.0);
        }
    }

    #[test]
    fn integral_is_even_in_each_component() {
        let q = QuadratureSpec::default();
        let a = al(0.8);
        let base = a_integral(&pt(&[0.3, 0.5, 0.9]), &a, &q).unwrap();
        for flipped in [[-0.3, 0.5, 0.9], [0.3, -0.5, 0.9], [-0.3, -0.5, -0.9]] {
            let v = a_integral(&pt(&flipped), &a, &q).unwrap();
            assert!((v - base).abs() < 1e-8);
        }
    }

    #[test]
    fn zero_components_and_domains() {
        let q = QuadratureSpec::default();
        let p = pt(&[0.5, 0.0]);
        assert!(matches!(a_closed(&p, &al(1.0)), Err(Error::ZeroComponent { index: 2, .. })));
        assert!(matches!(a_integral(&p, &al(1.0), &q), Err(Error::ZeroComponent { .. })));
        assert!(a_closed(&pt(&[0.5, 0.5]), &al(2.0)).is_err());
        assert!(matches!(
            a_integral(&pt(&[0.5; 8]), &al(1.0), &q),
            Err(Error::DimensionCap { .. })
        ));
        assert!(theorem2_asym(&pt(&[0.0, 0.0]), &al(2.0)).is_err());
        assert!(theorem2_asym(&pt(&[0.8, 0.8]), &al(2.0)).is_err());
    }

    #[test]
    fn super2_reduces_to_zeta_in_one_dimension() {
        let b = ErrorBudget::tolerance(1e-14);
        for (a, z) in [(2.5, zeta(1.5).unwrap()), (3.0, PI * PI / 6.0), (4.0, 1.202_056_903_159_594_3)] {
            let v = super2_coefficient(1, &al(a), &b).unwrap();
            assert!((v.value - z).abs() < 1e-10, "α={a}: {} vs {z}", v.value);
        }
        assert_eq!(super2_bracket(1).unwrap(), vec![0.0, 6.0]);
        assert_eq!(super2_bracket(2).unwrap(), vec![2.0, 0.0, 16.0]);
    }

    #[test]
    fn super2_against_long_sum() {
        // 10^6 direct terms; the remainder lies between the integrals from N+1 and N
        let d = 2;
        let a = 3.0;
        let n = 1_000_000u64;
        let mut acc = CompensatedSum::new();
        for k in 1..=n {
            let x = k as f64;
            let b = (2.0 * x + 1.0).powi(2) * (x + 1.0) - (2.0 * x - 1.0).powi(2) * (x - 1.0);
            acc.add(b / x.powf(d as f64 + a - 1.0) / 6.0);
        }
        // term ≈ (16n² + 2)/(6n^4); integral tails of each monomial
        let tail = |m: f64| (16.0 / 6.0) / m + (2.0 / 6.0) / (3.0 * m.powi(3));
        let lower = acc.value() + tail(n as f64 + 1.0);
        let upper = acc.value() + tail(n as f64);
        let v = super2_coefficient(d, &al(a), &ErrorBudget::tolerance(1e-14)).unwrap();
        assert!(v.value >= lower - 1e-12 && v.value <= upper + 1e-12, "{lower} {} {upper}", v.value);
    }

    #[test]
    fn theorem2_regimes_and_scaling() {
        let p = pt(&[0.01, 0.01]);
        let crit = theorem2_asym(&p, &al(2.0)).unwrap();
        let r2 = 2e-4f64;
        assert!((crit.value - 8.0 / 3.0 * r2 * (1.0 / r2.sqrt()).ln()).abs() < 1e-18);
        assert_eq!(crit.regime, Regime::Crit2);

        let s1 = theorem2_asym(&p, &al(3.0)).unwrap().value;
        let s2 = theorem2_asym(&p.scaled(0.5), &al(3.0)).unwrap().value;
        assert!((s2 / s1 - 0.25).abs() < 1e-14);

        let u1 = theorem2_asym(&p, &al(0.5)).unwrap().value;
        let u2 = theorem2_asym(&p.scaled(0.5), &al(0.5)).unwrap().value;
        assert!((u2 / u1 - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn one_dimensional_asymptotic_is_twice_hstar() {
        for a in [0.5, 1.0, 2.0, 3.5] {
            let f = theorem2_asym(&pt(&[0.05]), &al(a)).unwrap().value;
            let h = hstar(0.05, &al(a)).unwrap().value;
            assert!((f - 2.0 * h).abs() < 1e-12 * f, "α={a}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closed_form_is_homogeneous(
            t in proptest::collection::vec(0.05f64..2.0, 2..5),
            a in 0.1f64..1.95,
            s in prop_oneof![Just(1e-6), Just(0.5), Just(2.0), Just(10.0)],
        ) {
            let p = pt(&t);
            let base = a_closed(&p, &al(a)).unwrap();
            let scaled = a_closed(&p.scaled(s), &al(a)).unwrap();
            prop_assert!((scaled / (s.powf(a) * base) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn closed_form_is_permutation_symmetric(
            t in proptest::collection::vec(0.05f64..2.0, 3),
            a in 0.1f64..1.95,
        ) {
            let base = a_closed(&pt(&t), &al(a)).unwrap();
            let perm = a_closed(&pt(&[t[2], t[0], t[1]]), &al(a)).unwrap();
            prop_assert!((perm / base - 1.0).abs() < 1e-12);
        }
    }
}
