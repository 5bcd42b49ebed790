use super::{f_tail_bound, ErrorBudget, Point, SeriesValue};
use crate::combinatorics::{binomial, odd_set};
use crate::error::Result;
use crate::scalar::Real;
use crate::special::{power_tail, AlphaParam};
use crate::summation::{ordered_block_sum, CompensatedSum};

/// Per-axis data for the Dirichlet kernels `D_n(x) = sin((n+½)x)/sin(x/2)`.
struct Kernels<T> {
    x: Vec<T>,
    inv_sin: Vec<Option<T>>,
}

impl<T: Real> Kernels<T> {
    fn new(wrapped: &[T]) -> Self {
        let half = T::lit(0.5);
        let inv_sin = wrapped
            .iter()
            .map(|&x| {
                let s = (x * half).sin();
                (s != T::zero()).then(|| T::one() / s)
            })
            .collect();
        Self {
            x: wrapped.to_vec(),
            inv_sin,
        }
    }

    /// `Π_j D_n(θ_j)`; `D_0 = 1`.
    fn product(&self, n: u64) -> T {
        let nh = T::from_count(n) + T::lit(0.5);
        let two_n1 = T::lit(2.0) * T::from_count(n) + T::one();
        self.x
            .iter()
            .zip(&self.inv_sin)
            .map(|(&x, inv)| match inv {
                Some(r) => (nh * x).sin() * *r,
                None => two_n1,
            })
            .fold(T::one(), |p, v| p * v)
    }

    /// `sup_n |Π_{θ_j ≠ 0} D_n(θ_j)| ≤ Π 1/|sin(θ_j/2)|` and the number of zero axes.
    fn envelope(&self) -> (T, usize) {
        let mut b = T::one();
        let mut zeros = 0;
        for inv in &self.inv_sin {
            match inv {
                Some(r) => b *= r.abs(),
                None => zeros += 1,
            }
        }
        (b, zeros)
    }
}

fn shell_count_real<T: Real>(d: usize, n: u64) -> T {
    let two_n = T::lit(2.0) * T::from_count(n);
    (two_n + T::one()).powi(d as i32) - (two_n - T::one()).powi(d as i32)
}

fn kernel_partial_sum<T: Real>(k: &Kernels<T>, s: T, n: u64) -> T {
    let d = k.x.len();
    ordered_block_sum(1, n, 4096, |j| {
        let f = shell_count_real::<T>(d, j) - (k.product(j) - k.product(j - 1));
        f / T::from_count(j).powf(s)
    })
}

/// `F_d(θ)` through the Dirichlet-kernel form
/// `f_{d,n} = (2n+1)^d - (2n-1)^d - [Π D_n(θ_j) - Π D_{n-1}(θ_j)]`, summed over
/// `n = 1..=N`. Cost `O(N·d)`.
pub fn eval_f_kernel<T: Real>(theta: &Point<T>, alpha: &AlphaParam<T>, budget: &ErrorBudget<T>) -> Result<SeriesValue<T>> {
    let d = theta.dim();
    let a = alpha.value();
    let l1 = theta.l1_norm();
    let bound = |n: u64| f_tail_bound(d, a, l1, n);
    let n = budget.resolve("eval_F_kernel", bound)?;
    let k = Kernels::new(&theta.wrapped());
    let value = kernel_partial_sum(&k, T::from_count(d as u64) + a, n).max(T::zero());
    Ok(SeriesValue {
        value,
        tail_bound: bound(n),
        shells_used: n,
    })
}

/// Exact tail `Σ_{n>N} n^{-(d+α)}·((2n+1)^d - (2n-1)^d)` of the shell-count
/// part, with its Euler–Maclaurin error.
fn shell_part_tail<T: Real>(d: usize, a: T, n: u64) -> (T, T) {
    let mut acc = CompensatedSum::new();
    let mut err = T::zero();
    for m in odd_set(d) {
        let c = T::lit(2.0 * binomial(d as u64, m as u64).expect("d is small") as f64)
            * T::lit(2.0).powi((d - m) as i32);
        let (t, e) = power_tail(T::lit(m as f64) + a, n, 6);
        acc.add(c * t);
        err += c * e;
    }
    (acc.value(), err)
}

/// Bound on `|Σ_{n>N} n^{-s}(P_n - P_{n-1})|`, `P_n = Π D_n(θ_j)`, by summation
/// by parts. Axes with `θ_j ≡ 0` contribute `D_n = 2n+1`.
fn oscillating_tail_bound<T: Real>(k: &Kernels<T>, s: T, n: u64) -> T {
    let (b, zeros) = k.envelope();
    let nn = T::from_count(n);
    let n1 = nn + T::one();
    if zeros == 0 {
        return T::lit(2.0) * b * n1.powf(-s);
    }
    let kz = T::from_count(zeros as u64);
    let c = b * (T::lit(2.0) + T::one() / n1).powi(zeros as i32);
    c * nn.powf(kz - s) * (T::one() + s / (s - kz))
}

/// `F_d(θ)` by the kernel partial sum plus the exact tail of its
/// non-oscillating part; the reported bound covers only the oscillating tail
/// `Σ_{n>N} n^{-(d+α)}(P_n - P_{n-1})`.
///
/// The plain truncation error is of order `d·2^d/(α N^α)` whatever θ is,
/// which swamps `F_d(θ)` near the origin when α is small. After resummation
/// the error decays like `N^{-(d+α)}` for θ off the coordinate hyperplanes.
pub fn eval_f_kernel_resummed<T: Real>(
    theta: &Point<T>,
    alpha: &AlphaParam<T>,
    budget: &ErrorBudget<T>,
) -> Result<SeriesValue<T>> {
    let d = theta.dim();
    let a = alpha.value();
    let s = T::from_count(d as u64) + a;
    let k = Kernels::new(&theta.wrapped());
    if k.inv_sin.iter().all(Option::is_none) {
        let n = budget.resolve("eval_F_kernel_resummed", |_| T::zero())?;
        return Ok(SeriesValue {
            value: T::zero(),
            tail_bound: T::zero(),
            shells_used: n,
        });
    }
    let bound = |n: u64| {
        let (shell, em) = shell_part_tail(d, a, n);
        oscillating_tail_bound(&k, s, n).min(shell + em) + em
    };
    let n = budget.resolve("eval_F_kernel_resummed", bound)?;
    let mut acc = CompensatedSum::new();
    acc.add(kernel_partial_sum(&k, s, n));
    acc.add(shell_part_tail(d, a, n).0);
    Ok(SeriesValue {
        value: acc.value().max(T::zero()),
        tail_bound: bound(n),
        shells_used: n,
    })
}
