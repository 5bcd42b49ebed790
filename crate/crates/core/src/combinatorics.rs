//! Index machinery of the dimension-reduction identity: odd orders, two-block
//! index partitions and ±1 sign patterns.

use crate::error::{Error, Result};

/// One element `{j_1..j_m | j_{m+1}..j_d}`: a split of `1..=d` into a strictly
/// increasing head of length `m ≥ 1` and the strictly increasing remainder.
///
/// Indices are 1-based, as in the formulas they come from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexPartition {
    head: Vec<usize>,
    tail: Vec<usize>,
}

impl IndexPartition {
    /// Builds the partition with the given head; the tail is the complement.
    pub fn from_head(d: usize, head: &[usize]) -> Result<Self> {
        if head.is_empty() || head.len() > d {
            return Err(Error::Range {
                what: "head length",
                value: head.len() as i64,
                lo: 1,
                hi: d as i64,
            });
        }
        if head.windows(2).any(|w| w[0] >= w[1]) || head[0] < 1 || *head.last().unwrap() > d {
            return Err(Error::domain(
                "IndexPartition",
                format!("head {head:?} must be strictly increasing within 1..={d}"),
            ));
        }
        let tail = (1..=d).filter(|j| head.binary_search(j).is_err()).collect();
        Ok(Self {
            head: head.to_vec(),
            tail,
        })
    }

    pub fn head(&self) -> &[usize] {
        &self.head
    }

    pub fn tail(&self) -> &[usize] {
        &self.tail
    }

    /// `m`, the number of head indices.
    pub fn order(&self) -> usize {
        self.head.len()
    }

    pub fn dim(&self) -> usize {
        self.head.len() + self.tail.len()
    }

    /// The full sequence `j_1, …, j_d`.
    pub fn sequence(&self) -> Vec<usize> {
        self.head.iter().chain(self.tail.iter()).copied().collect()
    }
}

impl std::fmt::Display for IndexPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[usize]| v.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}|{}}}", join(&self.head), join(&self.tail))
    }
}

/// A sequence of `m ≥ 1` signs, each ±1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    signs: Vec<i8>,
}

impl SignPattern {
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Product of all signs.
    pub fn parity(&self) -> i8 {
        self.signs.iter().product()
    }
}

/// Odd numbers `1, 3, 5, …` not exceeding `d`.
pub fn odd_set(d: usize) -> Vec<usize> {
    (1..=d).step_by(2).collect()
}

/// All partitions with a head of size `m`, lexicographic by head.
///
/// There are exactly `C(d, m)` of them.
pub fn enumerate_partitions(d: usize, m: usize) -> Result<Vec<IndexPartition>> {
    if d == 0 || m < 1 || m > d {
        return Err(Error::Range {
            what: "m",
            value: m as i64,
            lo: 1,
            hi: d as i64,
        });
    }
    let mut out = Vec::new();
    let mut head: Vec<usize> = (1..=m).collect();
    loop {
        out.push(IndexPartition::from_head(d, &head)?);
        // advance to the next m-combination in lexicographic order
        let mut i = m;
        while i > 0 && head[i - 1] == d - m + i {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        head[i - 1] += 1;
        for k in i..m {
            head[k] = head[k - 1] + 1;
        }
    }
    Ok(out)
}

/// All `2^m` sign patterns. Entry `k` of pattern `i` is `-1` when bit
/// `m-1-k` of `i` is set, so `(+1,…,+1)` comes first.
pub fn enumerate_signs(m: usize) -> Vec<SignPattern> {
    assert!((1..32).contains(&m), "sign patterns need 1 <= m < 32");
    (0u32..(1u32 << m))
        .map(|bits| SignPattern {
            signs: (0..m)
                .map(|k| if bits >> (m - 1 - k) & 1 == 1 { -1 } else { 1 })
                .collect(),
        })
        .collect()
}

/// Binomial coefficient with overflow detection.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or_else(|| Error::Overflow(format!("C({n},{k})")))?
            / (i as u128 + 1);
    }
    Ok(acc)
}
