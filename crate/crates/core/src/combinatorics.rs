//! Counting and enumeration primitives: falling factorials, generalized
//! binomials, weighted compositions, set partitions and the multiset
//! partitions they induce.
//!
//! Every enumeration has a fixed canonical order so that results are
//! reproducible: set partitions come out in lexicographic order of their
//! restricted-growth strings and compositions in lexicographic order of
//! `(mu_2, mu_3, ...)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `n!` as an arbitrary precision integer.
pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Binomial coefficient `C(n, k)` for nonnegative integers; zero when `k > n`.
pub fn binomial_int(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Falling factorial `(x)_k = x (x - 1) ... (x - k + 1)`; the empty product is 1.
pub fn falling_factorial(x: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= x - BigRational::from_integer(BigInt::from(i));
    }
    acc
}

/// `(x)_m / m!` for `m >= 0` and `0` for negative `m`.
///
/// The zero convention for a negative lower index is what makes the sum over
/// compositions in the coefficient formula finite.
pub fn gen_binomial(x: &BigRational, m: i64) -> BigRational {
    if m < 0 {
        return BigRational::zero();
    }
    let m = m as u32;
    falling_factorial(x, m) / BigRational::from_integer(factorial(m))
}

/// An ordered multiset of `[1, d]`: a tuple of entries each in `1..=d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedMultiset {
    entries: Vec<usize>,
    d: usize,
}

impl OrderedMultiset {
    pub fn new(entries: Vec<usize>, d: usize) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|&&e| e == 0 || e > d) {
            return Err(Error::InvalidInput(format!(
                "multiset entry {bad} lies outside [1, {d}]"
            )));
        }
        Ok(Self { entries, d })
    }

    /// The sorted multiset with multiplicity `mult[i]` for the value `i + 1`.
    pub fn from_multiplicities(mult: &[u32]) -> Self {
        let entries = mult
            .iter()
            .enumerate()
            .flat_map(|(i, &m)| std::iter::repeat_n(i + 1, m as usize))
            .collect();
        Self {
            entries,
            d: mult.len(),
        }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn ambient(&self) -> usize {
        self.d
    }

    /// The order `|I|`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `#(n, I)`.
    pub fn multiplicity(&self, n: usize) -> usize {
        self.entries.iter().filter(|&&e| e == n).count()
    }

    /// Multiplicities of `1..=d`, the order-free description of the multiset.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.d];
        for &e in &self.entries {
            m[e - 1] += 1;
        }
        m
    }

    /// `I(h^)`: the multiset with the element at (zero-based) index `h` removed.
    pub fn without(&self, h: usize) -> Self {
        let mut entries = self.entries.clone();
        entries.remove(h);
        Self { entries, d: self.d }
    }

    pub fn sorted(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.sort_unstable();
        Self { entries, d: self.d }
    }
}

impl fmt::Display for OrderedMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A partition of `[1, N]` into nonempty blocks, ordered by their minima with
/// each block increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    parts: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    fn from_rgs(rgs: &[usize], k: usize) -> Self {
        let mut parts = vec![Vec::new(); k];
        for (pos, &block) in rgs.iter().enumerate() {
            parts[block].push(pos + 1);
        }
        Self { parts }
    }
}

/// All partitions of `[1, n]` into exactly `k` blocks, in lexicographic order
/// of restricted-growth strings. Empty when `k == 0` or `k > n` (except that
/// `S(0, 0)` has the single empty partition).
pub fn set_partitions(n: usize, k: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    if k > n || (k == 0 && n > 0) {
        return out;
    }
    if n == 0 {
        out.push(SetPartition { parts: Vec::new() });
        return out;
    }
    let mut rgs = vec![0usize; n];
    rgs_fill(&mut rgs, 1, 1, k, &mut out);
    out
}

fn rgs_fill(rgs: &mut [usize], pos: usize, used: usize, k: usize, out: &mut Vec<SetPartition>) {
    let n = rgs.len();
    if pos == n {
        if used == k {
            out.push(SetPartition::from_rgs(rgs, k));
        }
        return;
    }
    // Remaining positions must still be able to open the missing blocks.
    if k - used > n - pos {
        return;
    }
    let top = used.min(k - 1);
    for b in 0..=top {
        rgs[pos] = b;
        let next_used = if b == used { used + 1 } else { used };
        rgs_fill(rgs, pos + 1, next_used, k, out);
    }
}

/// A multiset partition `J = (J_1, ..., J_k)` of an ordered multiset, induced
/// by a set partition of its index positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultisetPartition {
    parts: Vec<OrderedMultiset>,
}

impl MultisetPartition {
    pub fn parts(&self) -> &[OrderedMultiset] {
        &self.parts
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// Order-free key: the sorted list of part multiplicity vectors. Two
    /// partitions are equivalent exactly when their keys agree.
    pub fn class_key(&self) -> Vec<Vec<u32>> {
        let mut key: Vec<Vec<u32>> = self.parts.iter().map(|p| p.multiplicities()).collect();
        key.sort();
        key
    }
}

/// `Parts(I, k)`: the images of `S(|I|, k)` under `s -> (I(s_1), ..., I(s_k))`.
pub fn multiset_partitions(multiset: &OrderedMultiset, k: usize) -> Vec<MultisetPartition> {
    set_partitions(multiset.len(), k)
        .into_iter()
        .map(|s| MultisetPartition {
            parts: s
                .parts
                .iter()
                .map(|block| OrderedMultiset {
                    entries: block.iter().map(|&p| multiset.entries[p - 1]).collect(),
                    d: multiset.d,
                })
                .collect(),
        })
        .collect()
}

/// Number of members of `Parts(I, k)` equivalent to `J`, where `I` is the
/// union of the parts of `J`.
pub fn count_equivalent(partition: &MultisetPartition) -> BigInt {
    let d = partition.parts.first().map_or(0, |p| p.d);
    let part_mults: Vec<Vec<u32>> = partition.parts.iter().map(|p| p.multiplicities()).collect();

    let mut numer = BigInt::one();
    for i in 0..d {
        let total: u32 = part_mults.iter().map(|m| m[i]).sum();
        numer *= factorial(total);
    }
    let mut denom = BigInt::one();
    for m in &part_mults {
        for &c in m {
            denom *= factorial(c);
        }
    }
    // b_v: how often each distinct part occurs
    let mut sorted = part_mults.clone();
    sorted.sort();
    let mut run = 1u32;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    if !sorted.is_empty() {
        denom *= factorial(run);
    }
    numer / denom
}

/// A finite-support sequence `(mu_1, mu_2, ...)` of nonnegative integers,
/// stored without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    mu: Vec<u32>,
}

impl Composition {
    pub fn new(mut mu: Vec<u32>) -> Self {
        while mu.last() == Some(&0) {
            mu.pop();
        }
        Self { mu }
    }

    /// `mu_i` for the one-based index `i`; zero beyond the support.
    pub fn get(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.mu.get(i - 1).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.mu
    }

    pub fn total(&self) -> u32 {
        self.mu.iter().sum()
    }

    /// `W(mu) = sum_{i >= 2} (i - 1) mu_i`.
    pub fn weight(&self) -> u32 {
        self.mu.iter().enumerate().map(|(i, &m)| i as u32 * m).sum()
    }

    /// `sum_{i >= 2} mu_i`.
    pub fn tail_total(&self) -> u32 {
        self.mu.iter().skip(1).sum()
    }

    /// `(mu_2, mu_3, ...)`.
    pub fn tail(&self) -> &[u32] {
        self.mu.get(1..).unwrap_or(&[])
    }
}

/// All `mu` in `C(r)` with `W(mu) <= weight_bound`, ordered lexicographically
/// on `(mu_2, mu_3, ...)`.
pub fn compositions(r: u32, weight_bound: u32) -> Vec<Composition> {
    let len = weight_bound as usize + 1;
    let mut tail = vec![0u32; len.saturating_sub(1)];
    let mut out = Vec::new();
    compositions_fill(r, weight_bound, 0, &mut tail, &mut out);
    out
}

fn compositions_fill(
    remaining_total: u32,
    remaining_weight: u32,
    idx: usize,
    tail: &mut [u32],
    out: &mut Vec<Composition>,
) {
    if idx == tail.len() {
        let mut mu = Vec::with_capacity(tail.len() + 1);
        mu.push(remaining_total);
        mu.extend_from_slice(tail);
        out.push(Composition::new(mu));
        return;
    }
    // tail[idx] is mu_{idx + 2}, of weight idx + 1 each
    let w = idx as u32 + 1;
    let max = remaining_total.min(remaining_weight / w);
    for m in 0..=max {
        tail[idx] = m;
        compositions_fill(
            remaining_total - m,
            remaining_weight - m * w,
            idx + 1,
            tail,
            out,
        );
    }
    tail[idx] = 0;
}
