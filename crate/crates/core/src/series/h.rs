use super::{ErrorBudget, SeriesValue};
use crate::error::{Error, Result};
use crate::scalar::{one_minus_cos, wrap_angle, Real};
use crate::special::{cos_pi, gamma, ln_gamma, zeta_continued, AlphaParam};
use crate::summation::ordered_block_sum;

/// Truncated `H_α(θ) = Σ n^{-(1+α)}(1 - cos nθ)`.
///
/// The tail bound is `2/(α N^α)`.
pub fn eval_h<T: Real>(theta: T, alpha: &AlphaParam<T>, budget: &ErrorBudget<T>) -> Result<SeriesValue<T>> {
    let a = alpha.value();
    let bound = |n: u64| T::lit(2.0) / (a * T::from_count(n).powf(a));
    let n = budget.resolve("eval_H", bound)?;
    let x = wrap_angle(theta);
    let s = T::one() + a;
    let value = ordered_block_sum(1, n, 4096, |k| {
        let kk = T::from_count(k);
        one_minus_cos(kk * x) / kk.powf(s)
    });
    Ok(SeriesValue {
        value,
        tail_bound: bound(n),
        shells_used: n,
    })
}

const EXPANSION_TERMS: usize = 32;

/// Convergent small-angle expansion of `H_β` about 0, valid on all of `[-π, π]`.
///
/// With `s = 1 + β` and `y = |θ|` reduced to `[0, π]`:
/// `H_β(y) = -G(s) y^β - Σ_{k≥1} (-1)^k ζ(s-2k) y^{2k}/(2k)!`,
/// `G(s) = π/(2Γ(s)cos(πs/2))`. When β = 2m is an even integer the `y^β` and
/// `k = m` terms merge into `-(-1)^m y^{2m}/(2m)!·(H_{2m} - ln y)` with `H_{2m}`
/// the harmonic number. The terms decay like `(y/2π)^{2k}`.
#[derive(Debug, Clone)]
pub struct HExpansion<T> {
    beta: T,
    lead: T,
    log_term: Option<(i32, T, T)>,
    even: Vec<T>,
}

impl<T: Real> HExpansion<T> {
    pub fn new(beta: T) -> Result<Self> {
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(Error::domain("HExpansion", format!("order must be finite and > 0, got {beta}")));
        }
        let one = T::one();
        let two = T::lit(2.0);
        let s = one + beta;
        let half_beta = beta / two;
        let log_m = (half_beta == half_beta.round()).then(|| half_beta.to_i32().unwrap_or(i32::MAX));

        let (lead, log_term) = match log_m {
            Some(m) => {
                let two_m = 2 * m;
                let harmonic: T = (1..=two_m).map(|j| one / T::lit(j as f64)).sum();
                let sign = if m % 2 == 0 { -one } else { one };
                let coef = sign / ln_gamma(T::lit(two_m as f64 + 1.0))?.exp();
                (T::zero(), Some((two_m, coef, harmonic)))
            }
            None => (-T::PI() / (two * gamma(s)? * cos_pi(s / two)), None),
        };

        let mut even = Vec::with_capacity(EXPANSION_TERMS);
        for k in 1..=EXPANSION_TERMS {
            if log_m == Some(k as i32) {
                even.push(T::zero());
                continue;
            }
            let sign = if k % 2 == 0 { -one } else { one };
            even.push(sign * zeta_over_factorial(s, k)?);
        }
        Ok(Self {
            beta,
            lead,
            log_term,
            even,
        })
    }

    pub fn order(&self) -> T {
        self.beta
    }

    /// `H_β(x)` for any real `x`.
    pub fn eval(&self, x: T) -> T {
        let y = wrap_angle(x).abs();
        if y == T::zero() {
            return T::zero();
        }
        let y2 = y * y;
        let mut poly = T::zero();
        for &c in self.even.iter().rev() {
            poly = (poly + c) * y2;
        }
        let mut v = poly;
        if let Some((p, coef, harmonic)) = self.log_term {
            v += coef * y.powi(p) * (harmonic - y.ln());
        } else {
            v += self.lead * y.powf(self.beta);
        }
        v.max(T::zero())
    }
}

/// `ζ(s-2k)/(2k)!`, through the functional equation once `s - 2k ≤ -1` so
/// nothing overflows.
fn zeta_over_factorial<T: Real>(s: T, k: usize) -> Result<T> {
    let two_k = T::lit(2.0 * k as f64);
    let ln_fact = ln_gamma(two_k + T::one())?;
    let arg = s - two_k;
    if arg > -T::one() {
        return Ok(zeta_continued(arg)? / ln_fact.exp());
    }
    let u = T::one() - arg;
    let ln_mag = ln_gamma(u)? - ln_fact - u * T::two_pi().ln();
    Ok(T::lit(2.0) * cos_pi(u / T::lit(2.0)) * zeta_continued(u)? * ln_mag.exp())
}

/// `H_β(x)` from the closed-form expansion; see [`HExpansion`].
pub fn h_closed<T: Real>(x: T, beta: T) -> Result<T> {
    Ok(HExpansion::new(beta)?.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::power_tail;
    use crate::summation::CompensatedSum;
    use std::f64::consts::PI;

    /// Partial sum plus the exact tail of the non-oscillating part; the
    /// remaining oscillating tail is bounded by summation by parts.
    fn h_oracle(y: f64, beta: f64, n: u64) -> (f64, f64) {
        let s = 1.0 + beta;
        let mut acc = CompensatedSum::new();
        for k in 1..=n {
            acc.add(one_minus_cos(k as f64 * y) / (k as f64).powf(s));
        }
        let (tail, em_err) = power_tail(s, n, 6);
        acc.add(tail);
        let osc = 1.0 / ((n as f64 + 1.0).powf(s) * (y / 2.0).sin().abs());
        (acc.value(), osc + em_err)
    }

    #[test]
    fn known_polynomial_cases() {
        let e1 = HExpansion::new(1.0f64).unwrap();
        let e3 = HExpansion::new(3.0f64).unwrap();
        for &y in &[1e-6, 0.01, 0.3, 1.0, 2.0, 3.0, PI] {
            let h1 = PI * y / 2.0 - y * y / 4.0;
            assert!((e1.eval(y) - h1).abs() < 1e-14 * (1.0 + h1), "H_1({y})");
            let h3 = PI * PI * y * y / 12.0 - PI * y.powi(3) / 12.0 + y.powi(4) / 48.0;
            assert!((e3.eval(y) - h3).abs() < 1e-14 * (1.0 + h3), "H_3({y})");
        }
    }

    #[test]
    fn agrees_with_resummed_series() {
        for &beta in &[0.3, 0.5, 0.75, 1.5, 2.0, 2.5, 4.0, 4.5] {
            let e = HExpansion::new(beta).unwrap();
            for &y in &[0.05, 0.4, 1.3, 2.9, PI] {
                let (v, err) = h_oracle(y, beta, 200_000);
                let got = e.eval(y);
                assert!((got - v).abs() <= err + 1e-13 * (1.0 + v), "β={beta} y={y}: {got} vs {v} ± {err}");
                assert!((e.eval(-y) - got).abs() == 0.0);
                assert!((e.eval(y + 2.0 * PI) - got).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn matches_truncated_series_within_bound() {
        let a = AlphaParam::new(1.5f64).unwrap();
        let v = eval_h(0.7, &a, &ErrorBudget::shells(100_000)).unwrap();
        let exact = h_closed(0.7, 1.5).unwrap();
        assert!((v.value - exact).abs() <= v.tail_bound);
        assert!(exact >= v.value);
    }

    #[test]
    fn eval_h_examples() {
        let a = AlphaParam::new(0.8f64).unwrap();
        assert_eq!(eval_h(0.0, &a, &ErrorBudget::shells(1000)).unwrap().value, 0.0);

        let a1 = AlphaParam::new(1.0f64).unwrap();
        let v = eval_h(PI, &a1, &ErrorBudget::shells(100_000)).unwrap();
        assert!((v.value - PI * PI / 4.0).abs() <= v.tail_bound);
        assert_eq!(v.tail_bound, 2.0 / 100_000.0);

        let b = ErrorBudget::tolerance(1e-3);
        let v = eval_h(1.0, &a1, &b).unwrap();
        assert_eq!(v.shells_used, 2000);
    }

    #[test]
    fn eval_h_long_sum_oracle() {
        let a = AlphaParam::new(0.5f64).unwrap();
        let v = eval_h(0.1, &a, &ErrorBudget::shells(100_000)).unwrap();
        let mut acc = CompensatedSum::new();
        for k in 1..=10_000_000u64 {
            acc.add((1.0 - (k as f64 * 0.1).cos()) / (k as f64).powf(1.5));
        }
        assert!((v.value - acc.value()).abs() <= v.tail_bound);
        assert!(acc.value() >= v.value);
    }

    #[test]
    fn rejects_bad_order() {
        assert!(HExpansion::new(0.0f64).is_err());
        assert!(HExpansion::new(-1.0f64).is_err());
    }
}
