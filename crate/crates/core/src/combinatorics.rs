//! Partitions, standard Young tableaux counts, and the merged-derivative
//! weights that index every exact moment formula.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// Only the nonzero parts are stored; [`Partition::part`] pads with zeros
/// beyond the length, matching the convention `λ_{l(λ)+1} = … = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition, dropping trailing zeros. Fails if the parts are
    /// not weakly decreasing.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid!("partition parts must be weakly decreasing: {parts:?}"));
        }
        if parts.contains(&0) {
            return Err(invalid!("zero part inside partition: {parts:?}"));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `λ_i` with 0-based index, zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Padded coordinates `λ_i + m − i` for `i = 1..m`.
    pub fn shifted(&self, m: usize) -> Result<Vec<u32>> {
        if m < self.len() {
            return Err(invalid!("padding length {m} shorter than partition length {}", self.len()));
        }
        Ok((0..m).map(|i| self.part(i) + (m - 1 - i) as u32).collect())
    }

    /// Conjugate (transposed) partition.
    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0) as usize;
        let parts = (0..cols).map(|j| self.parts.iter().filter(|&&p| p as usize > j).count() as u32).collect();
        Partition { parts }
    }
}

/// All partitions of `m`, in lexicographically decreasing order.
pub fn enumerate_partitions(m: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=remaining.min(max_part)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of standard Young tableaux of shape `λ` by the hook length formula.
pub fn syt_count(lambda: &Partition) -> Result<BigUint> {
    let conj = lambda.conjugate();
    let mut hooks = BigUint::one();
    for (i, &row) in lambda.parts.iter().enumerate() {
        for j in 0..row as usize {
            let arm = row as usize - j - 1;
            let leg = conj.part(j) as usize - i - 1;
            hooks *= (arm + leg + 1) as u64;
        }
    }
    let (q, r) = factorial(lambda.weight() as u64).div_rem(&hooks);
    if !r.is_zero() {
        return Err(Error::Corruption(format!("hook product does not divide |λ|! for {:?}", lambda.parts)));
    }
    Ok(q)
}

/// `Π_{i=1}^{m} (λ_i + m − i)!`.
pub fn partition_factorial(lambda: &Partition, m: usize) -> Result<BigUint> {
    let shifted = lambda.shifted(m)?;
    Ok(shifted.iter().fold(BigUint::one(), |acc, &n| acc * factorial(n as u64)))
}

/// A strictly decreasing sequence of non-negative integers of length `n`
/// summing to `n(n+1)/2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DescendingComposition {
    q: Vec<u32>,
}

impl DescendingComposition {
    pub fn new(q: Vec<u32>) -> Result<Self> {
        let n = q.len() as u64;
        if n == 0 {
            return Err(invalid!("composition must be non-empty"));
        }
        if q.windows(2).any(|w| w[0] <= w[1]) {
            return Err(invalid!("composition must be strictly decreasing: {q:?}"));
        }
        let total: u64 = q.iter().map(|&x| x as u64).sum();
        if total != n * (n + 1) / 2 {
            return Err(invalid!("composition {q:?} must sum to {}", n * (n + 1) / 2));
        }
        Ok(DescendingComposition { q })
    }

    pub fn values(&self) -> &[u32] {
        &self.q
    }

    /// The partition with `λ_j = q_j − n + j`.
    pub fn to_partition(&self) -> Partition {
        let n = self.q.len();
        let parts = self.q.iter().enumerate().map(|(j, &qj)| qj + j as u32 + 1 - n as u32).collect();
        Partition::new(parts).expect("strictly decreasing composition yields a partition")
    }
}

/// All compositions in `P_n`, obtained from partitions of `n` with at most
/// `n` parts.
pub fn enumerate_compositions(n: usize) -> Vec<DescendingComposition> {
    enumerate_partitions(n as u32)
        .into_iter()
        .filter(|p| p.len() <= n)
        .map(|p| {
            let q = (0..n).map(|j| p.part(j) + (n - 1 - j) as u32).collect();
            DescendingComposition { q }
        })
        .collect()
}

/// Memo table for the ω recursion. Not shared between threads; create one
/// per worker.
#[derive(Default, Debug)]
pub struct OmegaWeights {
    memo: BTreeMap<Vec<u32>, BigUint>,
}

impl OmegaWeights {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn weight(&mut self, q: &DescendingComposition) -> BigUint {
        self.eval(&q.q)
    }

    fn eval(&mut self, q: &[u32]) -> BigUint {
        let n = q.len();
        if n <= 1 || q.iter().enumerate().all(|(i, &x)| x as usize == n - i) {
            return BigUint::one();
        }
        if let Some(v) = self.memo.get(q) {
            return v.clone();
        }
        // Any element of P_n other than (n, …, 1) ends in 0.
        debug_assert_eq!(q[n - 1], 0);
        let mut total = BigUint::zero();
        for j in 0..n - 1 {
            if q[j] - q[j + 1] >= 2 {
                let next: Vec<u32> =
                    (0..n - 1).map(|i| if i == j { q[i] - 2 } else { q[i] - 1 }).collect();
                total += self.eval(&next);
            }
        }
        self.memo.insert(q.to_vec(), total.clone());
        total
    }
}

/// ω-weight of a single composition (fresh memo table).
pub fn omega_weight(q: &DescendingComposition) -> BigUint {
    OmegaWeights::new().weight(q)
}

/// Per-partition weight `f_λ / λ!` with padding length `m`, as an exact rational.
pub fn tableau_weight(lambda: &Partition, m: usize) -> Result<num_rational::BigRational> {
    use num_bigint::BigInt;
    let f = BigInt::from(syt_count(lambda)?);
    let d = BigInt::from(partition_factorial(lambda, m)?);
    Ok(num_rational::BigRational::new(f, d))
}

/// `p(m)` via Euler's pentagonal recurrence (used as an independent count).
pub fn partition_count(m: usize) -> BigUint {
    let mut p = vec![BigUint::zero(); m + 1];
    p[0] = BigUint::one();
    for n in 1..=m {
        let mut plus = BigUint::zero();
        let mut minus = BigUint::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let bucket = if k % 2 == 1 { &mut plus } else { &mut minus };
            *bucket += &p[n - g1];
            if g2 <= n {
                *bucket += &p[n - g2];
            }
        }
        p[n] = plus - minus;
    }
    p.swap_remove(m)
}
