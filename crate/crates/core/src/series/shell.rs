use crate::error::{Error, Result};
use crate::scalar::Real;

/// `(2n+1)^d - (2n-1)^d`, the number of `z ∈ ℤ^d` with `‖z‖ = n`.
pub fn shell_count(d: usize, n: u64) -> Result<u64> {
    if d == 0 || n == 0 {
        return Err(Error::domain("shell_count", "requires d >= 1 and n >= 1"));
    }
    let overflow = || Error::Overflow(format!("shell_count({d}, {n})"));
    let e = u32::try_from(d).map_err(|_| overflow())?;
    let outer = n
        .checked_mul(2)
        .and_then(|m| (m + 1).checked_pow(e))
        .ok_or_else(overflow)?;
    let inner = (2 * n - 1).checked_pow(e).ok_or_else(overflow)?;
    Ok(outer - inner)
}

/// Lattice points on the max-norm shell `‖z‖ = n`, in lexicographic order.
pub fn iterate_shell(d: usize, n: u64) -> ShellIter {
    ShellIter::new(d, n as i64)
}

/// Iterator behind [`iterate_shell`]: an odometer over `[-n, n]^d` that jumps
/// over the interior cube.
#[derive(Debug, Clone)]
pub struct ShellIter {
    n: i64,
    current: Vec<i64>,
    done: bool,
}

impl ShellIter {
    fn new(d: usize, n: i64) -> Self {
        assert!(d >= 1 && n >= 1, "shells need d >= 1 and n >= 1");
        Self {
            n,
            current: vec![-n; d],
            done: false,
        }
    }

    fn advance(&mut self) {
        let n = self.n;
        let d = self.current.len();
        for i in (0..d).rev() {
            let z = self.current[i];
            if z < n {
                // on the last axis, skip the interior when no earlier axis is on the boundary
                let next = if i == d - 1 && z == -n && !self.current[..i].iter().any(|c| c.abs() == n) {
                    n
                } else {
                    z + 1
                };
                self.current[i] = next;
                for c in &mut self.current[i + 1..] {
                    *c = -n;
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for ShellIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.advance();
        Some(out)
    }
}

/// Calls `f(z, ⟨z,θ⟩)` for every `z` on shell `n`, in the same order as
/// [`ShellIter`], without allocating per point.
pub(crate) fn visit_shell<T: Real, F: FnMut(&[i64], T)>(theta: &[T], n: i64, f: &mut F) {
    let mut z = vec![0i64; theta.len()];
    visit_level(theta, n, 0, T::zero(), false, &mut z, f);
}

fn visit_level<T: Real, F: FnMut(&[i64], T)>(
    theta: &[T],
    n: i64,
    level: usize,
    phase: T,
    on_boundary: bool,
    z: &mut [i64],
    f: &mut F,
) {
    let last = level + 1 == theta.len();
    let mut k = -n;
    while k <= n {
        z[level] = k;
        let p = phase + T::lit(k as f64) * theta[level];
        let boundary = on_boundary || k.abs() == n;
        if last {
            f(z, p);
        } else {
            visit_level(theta, n, level + 1, p, boundary, z, f);
        }
        k = if last && !on_boundary && k == -n { n } else { k + 1 };
    }
}
