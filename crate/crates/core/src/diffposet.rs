//! Up and down operators on formal sums of partitions, and the normal-ordering
//! coefficients of (U + D)^l and of its weight-tracking refinement.
//!
//! The refinement multiplies each step by x^{±1} and dresses it with
//! y^{x d/dx}; its U^i D^j coefficient factors as x^{i-j} q_{ij}(l), so only
//! the Laurent polynomials q_{ij}(l) in y are stored. b_{ij}(l) is q at y = 1
//! and c_{ij}(l) is dq/dy at y = 1.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::limits::Limits;
use crate::partition::{covers_down, covers_up, partitions_up_to, Partition};
use crate::rational::{ratio, ExactRational};
use crate::tableau::odd_double_factorial;

/// Finite integer combination of partitions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalSum {
    terms: BTreeMap<Partition, BigInt>,
}

impl FormalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(p: Partition) -> Self {
        let mut s = Self::zero();
        s.add_term(p, BigInt::one());
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Partition, BigInt)>>(terms: I) -> Self {
        let mut s = Self::zero();
        for (p, c) in terms {
            s.add_term(p, c);
        }
        s
    }

    pub fn add_term(&mut self, p: Partition, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(p.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn coeff(&self, p: &Partition) -> BigInt {
        self.terms.get(p).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigInt)> {
        self.terms.iter()
    }

    pub fn plus(&self, other: &FormalSum) -> FormalSum {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &FormalSum) -> FormalSum {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), -c.clone());
        }
        out
    }

    pub fn scaled(&self, k: &BigInt) -> FormalSum {
        FormalSum::from_terms(self.terms.iter().map(|(p, c)| (p.clone(), c * k)))
    }

    fn retain(&mut self, keep: impl Fn(&Partition) -> bool) {
        self.terms.retain(|p, _| keep(p));
    }
}

fn linear_extension(v: &FormalSum, image: fn(&Partition) -> Vec<Partition>) -> FormalSum {
    let mut out = FormalSum::zero();
    for (p, c) in &v.terms {
        for q in image(p) {
            out.add_term(q, c.clone());
        }
    }
    out
}

/// U: each partition goes to the sum of its up-covers.
pub fn apply_u(v: &FormalSum) -> FormalSum {
    linear_extension(v, covers_up)
}

/// D: each partition goes to the sum of its down-covers.
pub fn apply_d(v: &FormalSum) -> FormalSum {
    linear_extension(v, covers_down)
}

fn apply_u_pow(v: &FormalSum, i: usize) -> FormalSum {
    (0..i).fold(v.clone(), |acc, _| apply_u(&acc))
}

/// True iff (DU − UD)λ = λ.
pub fn commutator_check(lambda: &Partition) -> bool {
    let v = FormalSum::basis(lambda.clone());
    apply_d(&apply_u(&v)).minus(&apply_u(&apply_d(&v))) == v
}

/// [λ] (U + D)^l ∅, pruning partitions that can no longer reach λ.
pub fn power_ud_coefficient(lambda: &Partition, l: usize, limits: &Limits) -> Result<BigInt> {
    if l > limits.max_power_length {
        return Err(Error::BoundExceeded {
            what: "(U+D)^l expansion length",
            requested: l as u128,
            limit: limits.max_power_length as u128,
        });
    }
    let mut state = FormalSum::basis(Partition::empty());
    for step in 1..=l {
        state = apply_u(&state).plus(&apply_d(&state));
        let remaining = l - step;
        state.retain(|p| p.lattice_distance(lambda) <= remaining);
    }
    Ok(state.coeff(lambda))
}

/// True iff D Uⁱ μ = Uⁱ D μ + i U^{i−1} μ for every μ with |μ| ≤ `bound`.
pub fn ud_straighten_check(i: usize, bound: usize) -> bool {
    partitions_up_to(bound).into_iter().all(|mu| {
        let v = FormalSum::basis(mu);
        let lhs = apply_d(&apply_u_pow(&v, i));
        let mut rhs = apply_u_pow(&apply_d(&v), i);
        if i > 0 {
            rhs = rhs.plus(&apply_u_pow(&v, i - 1).scaled(&BigInt::from(i)));
        }
        lhs == rhs
    })
}

/// q_{ij}(l) for 0 ≤ l ≤ l_max; entries outside the support read as zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    levels: Vec<BTreeMap<(usize, usize), LaurentPolynomial>>,
}

impl CoeffTable {
    pub fn max_length(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> LaurentPolynomial {
        self.levels
            .get(l)
            .and_then(|level| level.get(&(i, j)))
            .cloned()
            .unwrap_or_default()
    }

    /// Nonzero entries ((i, j), q) at length l.
    pub fn level(&self, l: usize) -> impl Iterator<Item = (&(usize, usize), &LaurentPolynomial)> {
        self.levels[l].iter()
    }

    fn lookup(&self, i: isize, j: isize, l: usize) -> Option<&LaurentPolynomial> {
        if i < 0 || j < 0 {
            return None;
        }
        self.levels[l].get(&(i as usize, j as usize))
    }
}

/// Builds q_{ij}(l) from q_{00}(0) = 1 and
/// q_{ij}(l+1) = y^{i−j} (q_{i−1,j}(l) + q_{i,j−1}(l) + (i+1) q_{i+1,j}(l)).
pub fn q_table(l_max: usize, limits: &Limits) -> Result<CoeffTable> {
    if l_max > limits.max_q_length {
        return Err(Error::BoundExceeded {
            what: "q-table length",
            requested: l_max as u128,
            limit: limits.max_q_length as u128,
        });
    }
    let mut table = CoeffTable {
        levels: vec![BTreeMap::from([((0, 0), LaurentPolynomial::one())])],
    };
    for l in 0..l_max {
        let mut next = BTreeMap::new();
        let top = l + 1;
        for i in 0..=top {
            for j in 0..=(top - i) {
                if (i + j) % 2 != top % 2 {
                    continue;
                }
                let (si, sj) = (i as isize, j as isize);
                let mut acc = LaurentPolynomial::zero();
                if let Some(q) = table.lookup(si - 1, sj, l) {
                    acc += q;
                }
                if let Some(q) = table.lookup(si, sj - 1, l) {
                    acc += q;
                }
                if let Some(q) = table.lookup(si + 1, sj, l) {
                    acc += &q.scaled(&BigInt::from(i + 1));
                }
                if !acc.is_zero() {
                    next.insert((i, j), acc.shifted((si - sj) as i64));
                }
            }
        }
        table.levels.push(next);
    }
    Ok(table)
}

/// Closed form C(l, i) (l − i − 1)!! when l − i is even and nonnegative, else 0.
pub fn b_value(i: usize, l: usize) -> BigInt {
    if i > l || (l - i) % 2 != 0 {
        return BigInt::zero();
    }
    let choose = binomial(BigInt::from(l), BigInt::from(i));
    choose * BigInt::from(odd_double_factorial((l - i) / 2))
}

/// How to obtain c_{i0}(l).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CVia {
    /// d/dy of the q-table entry at y = 1.
    Derivative,
    /// c_{i0}(l+1) = c_{i−1,0}(l) + (i+1)c_{i+1,0}(l) + i·b_{i−1,0}(l) + i(i+1)·b_{i+1,0}(l),
    /// with b from the closed form.
    Recurrence,
}

/// c_{i0}(l) for 0 ≤ i ≤ l_max + 1 and 0 ≤ l ≤ l_max, by the c recurrence.
pub fn c_recurrence_table(l_max: usize) -> Vec<Vec<BigInt>> {
    let width = l_max + 2;
    let mut rows = vec![vec![BigInt::zero(); width]];
    for l in 0..l_max {
        let prev = &rows[l];
        let at = |i: isize| -> BigInt {
            if i < 0 || i as usize >= width {
                BigInt::zero()
            } else {
                prev[i as usize].clone()
            }
        };
        let b = |i: isize| -> BigInt {
            if i < 0 {
                BigInt::zero()
            } else {
                b_value(i as usize, l)
            }
        };
        let next: Vec<BigInt> = (0..width)
            .map(|i| {
                let si = i as isize;
                let ib = BigInt::from(i);
                at(si - 1) + BigInt::from(i + 1) * at(si + 1) + &ib * b(si - 1) + &ib * BigInt::from(i + 1) * b(si + 1)
            })
            .collect();
        rows.push(next);
    }
    rows
}

pub fn c_value(i: usize, l: usize, via: CVia, limits: &Limits) -> Result<BigInt> {
    if l > limits.max_q_length {
        return Err(Error::BoundExceeded {
            what: "c-value length",
            requested: l as u128,
            limit: limits.max_q_length as u128,
        });
    }
    Ok(match via {
        CVia::Derivative => q_table(l, limits)?.get(i, 0, l).derivative_at_one(),
        CVia::Recurrence => c_recurrence_table(l)[l].get(i).cloned().unwrap_or_default(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyIdentityReport {
    pub k: usize,
    pub n: usize,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub b: BigInt,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub c_derivative: BigInt,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub c_recurrence: BigInt,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub lhs: ExactRational,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub rhs: ExactRational,
    pub pass: bool,
}

/// (1/3)(n + (k+1)/2)(2n + 3k).
pub fn key_identity_rhs(k: usize, n: usize) -> ExactRational {
    ratio(2 * n + k + 1, 2) * ratio(2 * n + 3 * k, 1) / ratio(3, 1)
}

/// Compares c_{k0}(k+2n) / b_{k0}(k+2n) with [`key_identity_rhs`] using a prebuilt table.
pub fn verify_key_identity_with(table: &CoeffTable, c_rec: &[Vec<BigInt>], k: usize, n: usize) -> Result<KeyIdentityReport> {
    let l = k + 2 * n;
    if l > table.max_length() || l >= c_rec.len() {
        return Err(Error::BoundExceeded {
            what: "key identity length k+2n",
            requested: l as u128,
            limit: table.max_length().min(c_rec.len().saturating_sub(1)) as u128,
        });
    }
    let b = b_value(k, l);
    let c_derivative = table.get(k, 0, l).derivative_at_one();
    let c_recurrence = c_rec[l].get(k).cloned().unwrap_or_default();
    let lhs = ExactRational::new(c_derivative.clone(), b.clone());
    let rhs = key_identity_rhs(k, n);
    let pass = lhs == rhs && c_derivative == c_recurrence && table.get(k, 0, l).eval_at_one() == b;
    Ok(KeyIdentityReport {
        k,
        n,
        b,
        c_derivative,
        c_recurrence,
        lhs,
        rhs,
        pass,
    })
}

pub fn verify_key_identity(k: usize, n: usize, limits: &Limits) -> Result<KeyIdentityReport> {
    let l = k + 2 * n;
    let table = q_table(l, limits)?;
    verify_key_identity_with(&table, &c_recurrence_table(l), k, n)
}
