//! Gauss–Legendre rules and nested integration over boxes of a function of
//! `c + η_1 + … + η_k`.

use crate::scalar::Real;
use crate::summation::CompensatedSum;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Nodes by Newton iteration on `P_n`, computed in `f64`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `∫_a^b f` with the plain rule.
    pub fn integrate(&self, a: T, b: T, mut f: impl FnMut(T) -> T) -> T {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        let mut acc = CompensatedSum::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(mid + half * x));
        }
        half * acc.value()
    }
}

/// Tanh-sinh rule on `[a, b]`: the trapezoid rule in `t` after
/// `x = (a+b)/2 + (b-a)/2·tanh(π/2·sinh t)`. Converges double-exponentially
/// even with algebraic or logarithmic singularities at the endpoints.
///
/// Node positions are stored as distances from the nearer endpoint so that
/// points close to an endpoint keep full relative precision.
#[derive(Debug, Clone)]
pub struct TanhSinh<T> {
    from_left: Vec<T>,
    from_right: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> TanhSinh<T> {
    /// `n` points, `t` uniform on `[-t_max, t_max]`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "tanh-sinh needs at least two points");
        let t_max = 3.2f64;
        let h = 2.0 * t_max / (n - 1) as f64;
        let half_pi = std::f64::consts::FRAC_PI_2;
        let mut from_left = Vec::with_capacity(n);
        let mut from_right = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for k in 0..n {
            let t = -t_max + h * k as f64;
            let s = half_pi * t.sinh();
            // (1 + tanh s)/2 and (1 - tanh s)/2 without cancellation
            from_left.push(T::lit(1.0 / (1.0 + (-2.0 * s).exp())));
            from_right.push(T::lit(1.0 / (1.0 + (2.0 * s).exp())));
            let cs = s.cosh();
            weights.push(T::lit(0.5 * h * half_pi * t.cosh() / (cs * cs)));
        }
        Self {
            from_left,
            from_right,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn integrate(&self, a: T, b: T, mut f: impl FnMut(T) -> T) -> T {
        let len = b - a;
        let half = T::lit(0.5);
        let mut acc = CompensatedSum::new();
        for ((&l, &r), &w) in self.from_left.iter().zip(&self.from_right).zip(&self.weights) {
            if w == T::zero() {
                continue;
            }
            let x = if l < half { a + len * l } else { b - len * r };
            acc.add(w * f(x));
        }
        len * acc.value()
    }
}

/// How a box integral is discretized.
#[derive(Debug, Clone)]
pub enum BoxRule<T> {
    /// Tensor Gauss–Legendre over the whole box.
    Tensor(GaussLegendre<T>),
    /// Each axis cut at the points where the integrand may be non-smooth,
    /// tanh-sinh on every piece.
    Split(TanhSinh<T>),
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Where the integrand `g(c + Ση)` may fail to be smooth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kinks {
    /// at `u = 0` only
    Origin,
    /// at `u ≡ 0 (mod 2π)`
    Periodic,
}

/// `∫_{-w_1}^{w_1} ⋯ ∫_{-w_k}^{w_k} g(c + η_1 + ⋯ + η_k) dη`.
///
/// Halfwidths may be negative; the integral then changes sign per axis. The
/// split rule cuts each axis where the integrand, after integrating out the
/// remaining axes, can be non-smooth.
pub fn box_integral<T: Real>(
    g: &(impl Fn(T) -> T + ?Sized),
    c: T,
    halfwidths: &[T],
    rule: &BoxRule<T>,
    kinks: Kinks,
) -> T {
    let sign = halfwidths
        .iter()
        .fold(T::one(), |s, &w| if w < T::zero() { -s } else { s });
    let widths: Vec<T> = halfwidths.iter().map(|w| w.abs()).collect();
    if widths.iter().any(|&w| w == T::zero()) {
        return T::zero();
    }
    sign * nested(g, c, &widths, rule, kinks)
}

fn nested<T: Real>(
    g: &(impl Fn(T) -> T + ?Sized),
    c: T,
    widths: &[T],
    rule: &BoxRule<T>,
    kinks: Kinks,
) -> T {
    let Some((&w, rest)) = widths.split_first() else {
        return g(c);
    };
    let inner = |eta: T| nested(g, c + eta, rest, rule, kinks);
    match rule {
        BoxRule::Tensor(gl) => gl.integrate(-w, w, inner),
        BoxRule::Split(ts) => {
            let mut cuts = breakpoints(c, w, rest, kinks);
            cuts.insert(0, -w);
            cuts.push(w);
            let mut acc = CompensatedSum::new();
            for piece in cuts.windows(2) {
                acc.add(ts.integrate(piece[0], piece[1], &inner));
            }
            acc.value()
        }
    }
}

/// Points `η ∈ (-w, w)` with `c + η + Σ ±w_rest ≡ 0`, sorted.
fn breakpoints<T: Real>(c: T, w: T, rest: &[T], kinks: Kinks) -> Vec<T> {
    let tau = T::two_pi();
    let mut out = Vec::new();
    for bits in 0u32..(1u32 << rest.len()) {
        let offset = rest
            .iter()
            .enumerate()
            .fold(T::zero(), |o, (j, &r)| if bits >> j & 1 == 1 { o - r } else { o + r });
        let root = -(c + offset);
        match kinks {
            Kinks::Origin => out.push(root),
            Kinks::Periodic => {
                let lo = ((-w - root) / tau).ceil().to_i64().unwrap_or(0);
                let hi = ((w - root) / tau).floor().to_i64().unwrap_or(0);
                for k in lo..=hi {
                    out.push(root + T::lit(k as f64) * tau);
                }
            }
        }
    }
    let margin = w * T::lit(1e-12);
    out.retain(|&x| x > -w + margin && x < w - margin);
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    out.dedup_by(|a, b| (*a - *b).abs() <= margin);
    out
}
