//! Scalar special functions: gamma, Riemann zeta and the Hardy constant
//! `K(α) = Γ(1-α)·cos(πα/2)`.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::summation::CompensatedSum;

/// Which of the three asymptotic branches a given α falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `0 < α < 2`
    Sub2,
    /// `α == 2`
    Crit2,
    /// `α > 2`
    Super2,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Sub2 => "sub2",
            Regime::Crit2 => "crit2",
            Regime::Super2 => "super2",
        })
    }
}

/// A validated positive exponent α together with its regime.
///
/// The critical value is detected by exact comparison with 2; there is no
/// tolerance window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaParam<T> {
    value: T,
    regime: Regime,
}

impl<T: Real> AlphaParam<T> {
    pub fn new(value: T) -> Result<Self> {
        if !(value > T::zero()) || !value.is_finite() {
            return Err(Error::domain("alpha", format!("α must be finite and > 0, got {value}")));
        }
        let two = T::lit(2.0);
        let regime = if value < two {
            Regime::Sub2
        } else if value == two {
            Regime::Crit2
        } else {
            Regime::Super2
        };
        Ok(Self { value, regime })
    }

    #[inline]
    pub fn value(&self) -> T {
        self.value
    }

    #[inline]
    pub fn regime(&self) -> Regime {
        self.regime
    }
}

/// `sin(πx)`, exact zero at integers.
pub(crate) fn sin_pi<T: Real>(x: T) -> T {
    let two = T::lit(2.0);
    let r = x - two * (x / two).round();
    if r == r.round() {
        return T::zero();
    }
    (T::PI() * r).sin()
}

/// `cos(πx)`, exact zero at half-integers.
pub(crate) fn cos_pi<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if (x - half) == (x - half).round() {
        return T::zero();
    }
    let two = T::lit(2.0);
    let r = x - two * (x / two).round();
    (T::PI() * r).cos()
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_series<T: Real>(x: T) -> T {
    // x is already shifted by -1
    let mut acc = T::lit(LANCZOS_P[0]);
    for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        acc += T::lit(p) / (x + T::from_count(i as u64));
    }
    acc
}

fn check_pole<T: Real>(function: &'static str, x: T) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::domain(function, format!("non-finite argument {x}")));
    }
    if x <= T::zero() && x == x.round() {
        return Err(Error::Pole {
            function,
            at: x.as_f64(),
        });
    }
    Ok(())
}

/// Γ(x) for real `x` off the non-positive integers.
///
/// Lanczos approximation on `x ≥ 1/2`, reflection below. Relative error is
/// around 1e-15 on the interval `(-1, 2]` used by the asymptotic formulas.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    check_pole("gamma", x)?;
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        return T::PI() / (sin_pi(x) * gamma_unchecked(T::one() - x));
    }
    let x = x - T::one();
    let t = x + T::lit(LANCZOS_G) + half;
    (T::two_pi()).sqrt() * t.powf(x + half) * (-t).exp() * lanczos_series(x)
}

/// `ln |Γ(x)|`, for arguments where Γ itself would overflow.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    check_pole("ln_gamma", x)?;
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        return T::PI().ln() - sin_pi(x).abs().ln() - ln_gamma_unchecked(T::one() - x);
    }
    let x = x - T::one();
    let t = x + T::lit(LANCZOS_G) + half;
    half * T::two_pi().ln() + (x + half) * t.ln() - t + lanczos_series(x).ln()
}

const BERNOULLI_EVEN: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Euler–Maclaurin estimate of `Σ_{n>N} n^{-s}` with `terms` Bernoulli
/// corrections (at most 6). Returns the estimate and a bound on its error.
///
/// For `s > 1` this is the genuine tail. For `s < 1` the same expression is the
/// analytic continuation used by [`zeta_continued`].
pub fn power_tail<T: Real>(s: T, n: u64, terms: usize) -> (T, T) {
    debug_assert!(n >= 1);
    let terms = terms.min(BERNOULLI_EVEN.len() - 1);
    let nn = T::from_count(n);
    let one = T::one();
    let mut acc = CompensatedSum::new();
    acc.add(nn.powf(one - s) / (s - one));
    acc.add(-T::lit(0.5) * nn.powf(-s));
    // rising factorial s(s+1)…(s+2k-2) and (2k)!
    let mut rising = s;
    let mut fact = T::lit(2.0);
    let mut power = nn.powf(-s - one);
    for k in 1..=terms {
        acc.add(T::lit(BERNOULLI_EVEN[k - 1]) / fact * rising * power);
        let kk = T::from_count(k as u64);
        let two_k = T::lit(2.0) * kk;
        rising *= (s + two_k - one) * (s + two_k);
        fact = fact * (two_k + one) * (two_k + T::lit(2.0));
        power /= nn * nn;
    }
    let err = (T::lit(BERNOULLI_EVEN[terms]) / fact * rising * power).abs();
    (acc.value(), err)
}

fn zeta_em<T: Real>(s: T, n_direct: u64, terms: usize) -> T {
    let cutoff = T::epsilon() * T::lit(1e-6);
    let mut acc = CompensatedSum::new();
    let mut last = n_direct;
    for n in 1..=n_direct {
        let t = T::from_count(n).powf(-s);
        acc.add(t);
        if s > T::one() && t < cutoff {
            last = n;
            break;
        }
    }
    acc.add(power_tail(s, last, terms).0);
    acc.value()
}

/// Riemann ζ(s) for `s > 1`.
///
/// Direct compensated sum of the first 10⁴ terms followed by the
/// Euler–Maclaurin tail through the B₂ correction.
pub fn zeta<T: Real>(s: T) -> Result<T> {
    if !(s > T::one()) || !s.is_finite() {
        return Err(Error::domain("zeta", format!("requires s > 1, got {s}")));
    }
    Ok(zeta_em(s, 10_000, 1))
}

/// ζ(s) on the whole real line except the pole at `s = 1`.
///
/// Euler–Maclaurin continuation for `s > -1`, the functional equation below.
/// Used for the coefficients of the small-angle expansion of `H_β`.
pub fn zeta_continued<T: Real>(s: T) -> Result<T> {
    if !s.is_finite() {
        return Err(Error::domain("zeta_continued", format!("non-finite argument {s}")));
    }
    if s == T::one() {
        return Err(Error::Pole {
            function: "zeta",
            at: 1.0,
        });
    }
    if s > -T::one() {
        return Ok(zeta_em(s, 64, 6));
    }
    // trivial zeros
    let half = s * T::lit(0.5);
    if half == half.round() {
        return Ok(T::zero());
    }
    let one = T::one();
    let reflected = zeta_em(one - s, 64, 6);
    let log_mag = s * T::lit(2.0).ln() + (s - one) * T::PI().ln() + ln_gamma_unchecked(one - s);
    Ok(sin_pi(half) * log_mag.exp() * reflected)
}

/// The Hardy constant `K(α) = Γ(1-α)·cos(πα/2)` for `0 < α < 2`.
///
/// Within `|α-1| < 0.1` the equivalent form `π / (2·Γ(α)·sin(πα/2))` is used,
/// which is regular at α = 1 where it equals π/2.
pub fn hardy_constant<T: Real>(alpha: T) -> Result<T> {
    if !(alpha > T::zero() && alpha < T::lit(2.0)) {
        return Err(Error::domain("hardy_constant", format!("requires 0 < α < 2, got {alpha}")));
    }
    let half = T::lit(0.5);
    if (alpha - T::one()).abs() < T::lit(0.1) {
        Ok(T::PI() / (T::lit(2.0) * gamma_unchecked(alpha) * sin_pi(half * alpha)))
    } else {
        Ok(gamma_unchecked(T::one() - alpha) * cos_pi(half * alpha))
    }
}
