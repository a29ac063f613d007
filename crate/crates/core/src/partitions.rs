//! Partitions and pseudopartitions in exponent notation.
//!
//! A pseudopartition `λ = (0^{λ(0)}, 1^{λ(1)}, 2^{λ(2)}, ...)` is stored as the
//! map `k -> λ(k)` with only positive multiplicities kept. It indexes the basis
//! vectors `d_{-λ} w = ... d_{-2}^{λ(2)} d_{-1}^{λ(1)} d_0^{λ(0)} w`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid pseudopartition `{0}`")]
pub struct PartitionParseError(pub String);

/// Non-decreasing multiset of non-negative integers. The empty value is `0̄`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Pseudopartition {
    exps: BTreeMap<u32, u32>,
}

impl Pseudopartition {
    /// The empty pseudopartition `0̄`.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_parts(parts: &[u32]) -> Self {
        let mut out = Self::empty();
        for &p in parts {
            out.add_part(p, 1);
        }
        out
    }

    /// Builds from `(part, multiplicity)` pairs; zero multiplicities are skipped.
    pub fn from_exponents(pairs: &[(u32, u32)]) -> Self {
        let mut out = Self::empty();
        for &(k, m) in pairs {
            out.add_part(k, m);
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// `λ(k)`
    pub fn multiplicity(&self, k: u32) -> u32 {
        self.exps.get(&k).copied().unwrap_or(0)
    }

    /// `|λ|`
    pub fn size(&self) -> u64 {
        self.exps.iter().map(|(&k, &m)| k as u64 * m as u64).sum()
    }

    /// `#(λ)`
    pub fn parts(&self) -> u64 {
        self.exps.values().map(|&m| m as u64).sum()
    }

    /// `(|λ|, #(λ))`
    pub fn stats(&self) -> (u64, u64) {
        (self.size(), self.parts())
    }

    /// True when `λ(0) = 0`, i.e. the value is an honest partition (or `0̄`).
    pub fn is_partition(&self) -> bool {
        self.multiplicity(0) == 0
    }

    pub fn min_part(&self) -> Option<u32> {
        self.exps.keys().next().copied()
    }

    pub fn max_part(&self) -> Option<u32> {
        self.exps.keys().next_back().copied()
    }

    pub fn add_part(&mut self, k: u32, times: u32) {
        if times > 0 {
            *self.exps.entry(k).or_insert(0) += times;
        }
    }

    /// Removes one copy of `k`; returns false if `k` was absent.
    pub fn remove_part(&mut self, k: u32) -> bool {
        match self.exps.get_mut(&k) {
            None => false,
            Some(m) => {
                *m -= 1;
                if *m == 0 {
                    self.exps.remove(&k);
                }
                true
            }
        }
    }

    pub fn with_part(&self, k: u32) -> Self {
        let mut out = self.clone();
        out.add_part(k, 1);
        out
    }

    pub fn without_part(&self, k: u32) -> Option<Self> {
        let mut out = self.clone();
        out.remove_part(k).then_some(out)
    }

    /// Multiset union, adding multiplicities.
    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &m) in &other.exps {
            out.add_part(k, m);
        }
        out
    }

    /// `(k, λ(k))` pairs in increasing `k`.
    pub fn exponents(&self) -> impl DoubleEndedIterator<Item = (u32, u32)> + '_ {
        self.exps.iter().map(|(&k, &m)| (k, m))
    }

    /// Parts listed in ascending order, with repetition.
    pub fn parts_ascending(&self) -> Vec<u32> {
        self.exps
            .iter()
            .flat_map(|(&k, &m)| std::iter::repeat_n(k, m as usize))
            .collect()
    }

    fn exponent_vector(&self) -> Vec<u32> {
        let len = self.max_part().map_or(0, |m| m as usize + 1);
        (0..len as u32).map(|k| self.multiplicity(k)).collect()
    }
}

/// Graded lexicographic order: by `|λ|`, then lexicographically on the
/// exponent vector `(λ(0), λ(1), ...)`.
impl Ord for Pseudopartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| {
            let (a, b) = (self.exponent_vector(), other.exponent_vector());
            let n = a.len().max(b.len());
            (0..n)
                .map(|i| a.get(i).unwrap_or(&0).cmp(b.get(i).unwrap_or(&0)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Pseudopartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A pseudopartition with no zero parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Pseudopartition);

impl Partition {
    pub fn as_pseudo(&self) -> &Pseudopartition {
        &self.0
    }
}

impl TryFrom<Pseudopartition> for Partition {
    type Error = Pseudopartition;

    fn try_from(p: Pseudopartition) -> Result<Self, Self::Error> {
        if p.is_partition() {
            Ok(Partition(p))
        } else {
            Err(p)
        }
    }
}

/// Partitions of `n` into positive parts, each as an ascending part list.
fn partitions_of(n: u32) -> Vec<Vec<u32>> {
    fn go(remaining: u32, min: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in min..=remaining {
            current.push(part);
            go(remaining - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out
}

/// All pseudopartitions with `|λ| = size` and `λ(0) <= max_zero_count`,
/// sorted in graded lexicographic order.
pub fn enumerate(size: u32, max_zero_count: u32) -> Vec<Pseudopartition> {
    let mut out = Vec::new();
    for parts in partitions_of(size) {
        let base = Pseudopartition::from_parts(&parts);
        for zeros in 0..=max_zero_count {
            let mut p = base.clone();
            p.add_part(0, zeros);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// All pseudopartitions with `|λ| <= max_size` and `λ(0) <= max_zero_count`.
pub fn enumerate_up_to(max_size: u32, max_zero_count: u32) -> Vec<Pseudopartition> {
    (0..=max_size)
        .flat_map(|n| enumerate(n, max_zero_count))
        .collect()
}

impl fmt::Display for Pseudopartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (k, m)) in self.exponents().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if m == 1 {
                write!(f, "{k}")?;
            } else {
                write!(f, "{k}^{m}")?;
            }
        }
        f.write_str(")")
    }
}

/// Accepts `0^2 1 3`, `(0^2,1,3)` and `()`.
impl FromStr for Pseudopartition {
    type Err = PartitionParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PartitionParseError(s.to_string());
        let body = s.trim();
        let body = match body.strip_prefix('(') {
            Some(inner) => inner.strip_suffix(')').ok_or_else(err)?,
            None => body,
        };
        let mut out = Pseudopartition::empty();
        for tok in body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let (k, m) = match tok.split_once('^') {
                Some((k, m)) => (k, m),
                None => (tok, "1"),
            };
            let k: u32 = k.trim().parse().map_err(|_| err())?;
            let m: u32 = m.trim().parse().map_err(|_| err())?;
            out.add_part(k, m);
        }
        Ok(out)
    }
}
