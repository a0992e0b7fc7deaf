//! Integer partitions as nodes of Young's lattice.
//!
//! A [`Partition`] stores its parts weakly decreasing with no trailing zeros,
//! so structural equality is partition equality. Covers are produced in row
//! order of the cell that changes: for up-covers this is decreasing
//! lexicographic order of parts.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// The empty partition ∅.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds a partition, rejecting zero parts and increasing sequences.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Parse(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!(
                "partition {parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// |λ|, the number of boxes.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Row `r` length, zero past the last row.
    pub fn row(&self, r: usize) -> usize {
        self.parts.get(r).copied().unwrap_or(0)
    }

    /// Rows where a box can be added, top to bottom.
    pub fn addable_rows(&self) -> Vec<usize> {
        (0..=self.parts.len())
            .filter(|&r| r == 0 || self.parts[r - 1] > self.row(r))
            .collect()
    }

    /// Rows whose last box can be removed, top to bottom.
    pub fn removable_rows(&self) -> Vec<usize> {
        (0..self.parts.len())
            .filter(|&r| self.parts[r] > self.row(r + 1))
            .collect()
    }

    /// Adds a box at the end of row `r`. The caller guarantees `r` is addable.
    pub fn with_box_added(&self, r: usize) -> Partition {
        let mut parts = self.parts.clone();
        if r == parts.len() {
            parts.push(1);
        } else {
            parts[r] += 1;
        }
        debug_assert!(r == 0 || parts[r - 1] >= parts[r]);
        Partition { parts }
    }

    /// Removes the last box of row `r`. The caller guarantees `r` is removable.
    pub fn with_box_removed(&self, r: usize) -> Partition {
        let mut parts = self.parts.clone();
        parts[r] -= 1;
        if parts[r] == 0 {
            parts.pop();
        }
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition { parts }
    }

    /// Number of distinct part values.
    pub fn distinct_parts(&self) -> usize {
        let mut d = self.parts.clone();
        d.dedup();
        d.len()
    }

    /// Boxes shared with `other`: Σ min(λ_i, μ_i).
    pub fn intersection_size(&self, other: &Partition) -> usize {
        self.parts
            .iter()
            .zip(other.parts.iter())
            .map(|(a, b)| *a.min(b))
            .sum()
    }

    /// Length of a shortest walk between the two partitions in the Hasse diagram.
    pub fn lattice_distance(&self, other: &Partition) -> usize {
        self.size() + other.size() - 2 * self.intersection_size(other)
    }

    /// Hook length of cell (r, c), both 0-based. The cell must lie in the diagram.
    pub fn hook_length(&self, r: usize, c: usize) -> usize {
        let arm = self.parts[r] - c - 1;
        let leg = self.parts[r + 1..].iter().take_while(|&&p| p > c).count();
        arm + leg + 1
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma-separated parts; "" and "-" both denote ∅.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad part {t:?} in partition {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("-");
        }
        let text: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&text.join(","))
    }
}

/// All μ with λ ⊂· μ.
pub fn covers_up(lambda: &Partition) -> Vec<Partition> {
    lambda
        .addable_rows()
        .into_iter()
        .map(|r| lambda.with_box_added(r))
        .collect()
}

/// All μ with μ ⊂· λ.
pub fn covers_down(lambda: &Partition) -> Vec<Partition> {
    lambda
        .removable_rows()
        .into_iter()
        .map(|r| lambda.with_box_removed(r))
        .collect()
}

/// The conjugate λ' (transposed diagram).
pub fn conjugate(lambda: &Partition) -> Partition {
    let width = lambda.row(0);
    let parts = (0..width)
        .map(|c| lambda.parts.iter().take_while(|&&p| p > c).count())
        .collect();
    Partition { parts }
}

/// m! as a big integer.
pub fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// f^λ by the hook-length formula.
pub fn num_syt(lambda: &Partition) -> Result<BigUint> {
    let mut hooks = BigUint::one();
    for (r, &len) in lambda.parts.iter().enumerate() {
        for c in 0..len {
            hooks *= BigUint::from(lambda.hook_length(r, c));
        }
    }
    let (q, rem) = factorial(lambda.size()).div_rem(&hooks);
    if !rem.is_zero() {
        return Err(Error::Internal(format!(
            "hook product does not divide |λ|! for {lambda}"
        )));
    }
    Ok(q)
}

/// Rows of entries; entries 1..|λ| increase along rows and down columns.
pub type StandardFilling = Vec<Vec<usize>>;

/// Every standard Young tableau of shape λ, by placing 1, 2, … into corners.
pub fn enumerate_syt(lambda: &Partition, limits: &Limits) -> Result<Vec<StandardFilling>> {
    let m = lambda.size();
    if m > limits.max_syt_size {
        return Err(Error::BoundExceeded {
            what: "standard tableau enumeration size",
            requested: m as u128,
            limit: limits.max_syt_size as u128,
        });
    }
    let mut out = Vec::new();
    let mut filling: StandardFilling = vec![Vec::new(); lambda.len()];
    fill_syt(lambda, &mut filling, 1, &mut out);
    Ok(out)
}

fn fill_syt(
    shape: &Partition,
    filling: &mut StandardFilling,
    next: usize,
    out: &mut Vec<StandardFilling>,
) {
    if next > shape.size() {
        out.push(filling.clone());
        return;
    }
    for r in 0..shape.len() {
        let len = filling[r].len();
        let fits_row = len < shape.parts[r];
        let fits_col = r == 0 || filling[r - 1].len() > len;
        if fits_row && fits_col {
            filling[r].push(next);
            fill_syt(shape, filling, next + 1, out);
            filling[r].pop();
        }
    }
}

/// All partitions of `m`, in decreasing lexicographic order.
pub fn partitions_of(m: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    partitions_rec(m, m, &mut current, &mut out);
    out
}

fn partitions_rec(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for p in (1..=remaining.min(max_part)).rev() {
        current.push(p);
        partitions_rec(remaining - p, p, current, out);
        current.pop();
    }
}

/// All partitions of size at most `m`, grouped by size.
pub fn partitions_up_to(m: usize) -> Vec<Partition> {
    (0..=m).flat_map(partitions_of).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn covers_up_examples() {
        assert_eq!(covers_up(&Partition::empty()), vec![p("1")]);
        assert_eq!(covers_up(&p("1")), vec![p("2"), p("1,1")]);
        assert_eq!(covers_up(&p("2,1")), vec![p("3,1"), p("2,2"), p("2,1,1")]);
    }

    #[test]
    fn covers_down_examples() {
        assert!(covers_down(&Partition::empty()).is_empty());
        assert_eq!(covers_down(&p("2,1")), vec![p("1,1"), p("2")]);
        assert_eq!(covers_down(&p("3,3")), vec![p("3,2")]);
    }

    #[test]
    fn cover_counts_follow_distinct_parts() {
        for lambda in partitions_up_to(8) {
            assert_eq!(covers_up(&lambda).len(), lambda.distinct_parts() + 1);
            assert_eq!(covers_down(&lambda).len(), lambda.distinct_parts());
        }
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&Partition::empty()), Partition::empty());
        assert_eq!(conjugate(&p("2,1")), p("2,1"));
        assert_eq!(conjugate(&p("3,1")), p("2,1,1"));
    }

    #[test]
    fn num_syt_examples() {
        assert_eq!(num_syt(&Partition::empty()).unwrap(), BigUint::from(1u32));
        assert_eq!(num_syt(&p("2,1")).unwrap(), BigUint::from(2u32));
        assert_eq!(num_syt(&p("3,2")).unwrap(), BigUint::from(5u32));
    }

    #[test]
    fn enumerate_syt_examples() {
        let limits = Limits::default();
        assert_eq!(enumerate_syt(&Partition::empty(), &limits).unwrap(), vec![Vec::<Vec<usize>>::new()]);
        assert_eq!(enumerate_syt(&p("1,1"), &limits).unwrap(), vec![vec![vec![1], vec![2]]]);
        let two_one = enumerate_syt(&p("2,1"), &limits).unwrap();
        assert_eq!(two_one, vec![vec![vec![1, 2], vec![3]], vec![vec![1, 3], vec![2]]]);
    }

    #[test]
    fn enumerate_syt_bound() {
        let limits = Limits::default();
        let big = p("13");
        assert!(matches!(
            enumerate_syt(&big, &limits),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!("1,2".parse::<Partition>().is_err());
        assert!("2,0".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert_eq!("-".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!(p("3,1,1").to_string(), "3,1,1");
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|m| partitions_of(m).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn json_is_array_of_parts() {
        assert_eq!(serde_json::to_string(&p("3,1")).unwrap(), "[3,1]");
        let back: Partition = serde_json::from_str("[2,2]").unwrap();
        assert_eq!(back, p("2,2"));
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
    }
}
