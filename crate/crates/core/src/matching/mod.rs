//! Perfect matchings of [2n], their crossing/nesting/alignment statistics,
//! Dyck projections, and the permutation-matching involutions.

pub mod dyck;
pub mod rs;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::tableau::{odd_double_factorial, OscillatingTableau, Step};

pub use dyck::{area, enumerate_dyck, prefix_stats, DyckPath};
pub use rs::{matching_to_tableau, tableau_to_matching};

/// A partition of {1, …, 2n} into pairs, stored as (opener, closer) sorted by opener.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfectMatching {
    pairs: Vec<(usize, usize)>,
    partner: Vec<usize>,
}

impl PerfectMatching {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let n = pairs.len();
        let mut partner = vec![0usize; 2 * n + 1];
        let mut sorted = Vec::with_capacity(n);
        for (a, b) in pairs {
            let (lo, hi) = (a.min(b), a.max(b));
            if lo == hi || lo == 0 || hi > 2 * n {
                return Err(Error::Parse(format!("pair {a}-{b} is not a pair of distinct elements of [1, {}]", 2 * n)));
            }
            if partner[lo] != 0 || partner[hi] != 0 {
                return Err(Error::Parse(format!("element of pair {lo}-{hi} is matched twice")));
            }
            partner[lo] = hi;
            partner[hi] = lo;
            sorted.push((lo, hi));
        }
        sorted.sort_unstable();
        Ok(PerfectMatching { pairs: sorted, partner })
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The element matched with `i` (1-based).
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i]
    }

    pub fn is_opener(&self, i: usize) -> bool {
        self.partner[i] > i
    }

    /// Pairs as `a-b` joined by `sep`.
    pub fn to_text(&self, sep: &str) -> String {
        if self.pairs.is_empty() {
            return "-".into();
        }
        let text: Vec<String> = self.pairs.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        text.join(sep)
    }

    /// Text form for CSV cells: pairs joined by `;`.
    pub fn to_csv_text(&self) -> String {
        self.to_text(";")
    }
}

impl fmt::Display for PerfectMatching {
    /// Canonical form `1-4,2-3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(","))
    }
}

impl FromStr for PerfectMatching {
    type Err = Error;

    /// Accepts `,` or `;` between pairs; `-` or the empty string is the empty matching.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return PerfectMatching::new(Vec::new());
        }
        let pairs = s
            .split([',', ';'])
            .map(|tok| {
                let (a, b) = tok
                    .split_once('-')
                    .ok_or_else(|| Error::Parse(format!("pair {tok:?} is not of the form a-b")))?;
                let num = |x: &str| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad element {x:?} in pair {tok:?}")))
                };
                Ok((num(a)?, num(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        PerfectMatching::new(pairs)
    }
}

impl Serialize for PerfectMatching {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn matching_bound(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.max_matching_n {
        return Err(Error::BoundExceeded {
            what: "perfect matching half-size n",
            requested: n as u128,
            limit: limits.max_matching_n as u128,
        });
    }
    Ok(())
}

/// All of M_n, in lexicographic order of the pair list.
pub fn enumerate_matchings(n: usize, limits: &Limits) -> Result<Vec<PerfectMatching>> {
    matching_bound(n, limits)?;
    let mut out = Vec::new();
    let mut used = vec![false; 2 * n + 1];
    let mut pairs = Vec::with_capacity(n);
    matchings_rec(n, &mut used, &mut pairs, &mut out);
    debug_assert_eq!(num_bigint::BigUint::from(out.len()), odd_double_factorial(n));
    Ok(out)
}

fn matchings_rec(
    n: usize,
    used: &mut [bool],
    pairs: &mut Vec<(usize, usize)>,
    out: &mut Vec<PerfectMatching>,
) {
    let Some(first) = (1..=2 * n).find(|&i| !used[i]) else {
        out.push(PerfectMatching::new(pairs.clone()).expect("complete pairing"));
        return;
    };
    used[first] = true;
    for second in first + 1..=2 * n {
        if used[second] {
            continue;
        }
        used[second] = true;
        pairs.push((first, second));
        matchings_rec(n, used, pairs, out);
        pairs.pop();
        used[second] = false;
    }
    used[first] = false;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MatchingStats {
    pub crossings: usize,
    pub nestings: usize,
    pub alignments: usize,
}

/// Relative position of two pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairRelation {
    Crossing,
    Nesting,
    Alignment,
}

/// Classifies two arcs given as (opener, closer).
pub fn classify(p: (usize, usize), q: (usize, usize)) -> PairRelation {
    // order so that p closes first
    let ((alpha, beta), (gamma, _delta)) = if p.1 < q.1 { (p, q) } else { (q, p) };
    if alpha < gamma && gamma < beta {
        PairRelation::Crossing
    } else if gamma < alpha {
        PairRelation::Nesting
    } else {
        PairRelation::Alignment
    }
}

pub fn stats(m: &PerfectMatching) -> MatchingStats {
    let mut s = MatchingStats {
        crossings: 0,
        nestings: 0,
        alignments: 0,
    };
    for (idx, &p) in m.pairs.iter().enumerate() {
        for &q in &m.pairs[idx + 1..] {
            match classify(p, q) {
                PairRelation::Crossing => s.crossings += 1,
                PairRelation::Nesting => s.nestings += 1,
                PairRelation::Alignment => s.alignments += 1,
            }
        }
    }
    s
}

/// C(n, 2).
pub fn pairs_of_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Openers become 1, closers 0.
pub fn dyck_of_matching(m: &PerfectMatching) -> DyckPath {
    let word = (1..=2 * m.n()).map(|i| m.is_opener(i)).collect();
    DyckPath::new(word).expect("openers precede their closers")
}

/// Box additions become 1, removals 0. The walk must run from ∅ to ∅.
pub fn dyck_of_tableau(t: &OscillatingTableau) -> Result<DyckPath> {
    if !t.start().is_empty() || !t.shape().is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "Dyck projection needs a walk from ∅ to ∅, got {} to {}",
            t.start(),
            t.shape()
        )));
    }
    let word = t.moves().into_iter().map(|s| matches!(s, Step::Add(_))).collect();
    DyckPath::new(word)
}

/// n + 2(C(n,2) − al(M)).
pub fn weight_via_matching(m: &PerfectMatching) -> usize {
    let n = m.n();
    n + 2 * (pairs_of_pairs(n) - stats(m).alignments)
}

/// Conjugates every visited partition.
pub fn conjugate_tableau(t: &OscillatingTableau) -> OscillatingTableau {
    OscillatingTableau::new(t.steps().iter().map(crate::partition::conjugate).collect())
        .expect("conjugation preserves cover relations")
}

/// Conjugation transported to matchings through RS.
pub fn conjugate_matching(m: &PerfectMatching) -> Result<PerfectMatching> {
    tableau_to_matching(&conjugate_tableau(&matching_to_tableau(m)?))
}

/// A permutation of [n] in one-line notation: `perm[j - 1] = ω(j)`.
pub type Permutation = Vec<usize>;

fn require_permutation_matching(m: &PerfectMatching) -> Result<()> {
    let n = m.n();
    if dyck_of_matching(m) != DyckPath::staircase_top(n) {
        return Err(Error::ShapeMismatch(format!(
            "{m} has Dyck word {}, not 1^{n}0^{n}",
            dyck_of_matching(m)
        )));
    }
    Ok(())
}

/// ω_M with ω_M(j) = i when {i, j + n} ∈ M.
pub fn permutation_bridge(m: &PerfectMatching) -> Result<Permutation> {
    require_permutation_matching(m)?;
    let n = m.n();
    Ok((1..=n).map(|j| m.partner(j + n)).collect())
}

/// The matching {ω(j), j + n}.
pub fn matching_of_permutation(omega: &[usize]) -> Result<PerfectMatching> {
    let n = omega.len();
    PerfectMatching::new(omega.iter().enumerate().map(|(j, &i)| (i, j + 1 + n)).collect())
}

/// The restriction of σ: reverses ω_M.
pub fn sigma_on_permutation_matchings(m: &PerfectMatching) -> Result<PerfectMatching> {
    let mut omega = permutation_bridge(m)?;
    omega.reverse();
    matching_of_permutation(&omega)
}

pub fn inverse_permutation(omega: &[usize]) -> Permutation {
    let mut inv = vec![0; omega.len()];
    for (j, &i) in omega.iter().enumerate() {
        inv[i - 1] = j + 1;
    }
    inv
}

/// Multiset of (cr, ne, al) over M_n, as triple → multiplicity.
pub type JointDistribution = BTreeMap<(usize, usize, usize), usize>;

pub fn joint_distribution(n: usize, limits: &Limits) -> Result<JointDistribution> {
    let mut dist = JointDistribution::new();
    for m in enumerate_matchings(n, limits)? {
        let s = stats(&m);
        *dist.entry((s.crossings, s.nestings, s.alignments)).or_default() += 1;
    }
    Ok(dist)
}

/// The six coordinate permutations of (cr, ne, al), as images of positions 0, 1, 2.
pub const S3: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];

/// The multiset with coordinates permuted: position `perm[c]` of the image holds coordinate c.
pub fn permute_distribution(dist: &JointDistribution, perm: [usize; 3]) -> JointDistribution {
    let mut out = JointDistribution::new();
    for (&(a, b, c), &mult) in dist {
        let src = [a, b, c];
        let mut dst = [0; 3];
        for (coord, &target) in perm.iter().enumerate() {
            dst[target] = src[coord];
        }
        *out.entry((dst[0], dst[1], dst[2])).or_default() += mult;
    }
    out
}

pub fn invariant_under(dist: &JointDistribution, perm: [usize; 3]) -> bool {
    &permute_distribution(dist, perm) == dist
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryRow {
    pub n: usize,
    pub cr_ne_swap: bool,
    pub full_s3: bool,
    /// Coordinate permutations (as images of cr, ne, al) that fail.
    pub failing: Vec<[usize; 3]>,
}

/// Symmetry of the joint distribution for each n in 0..=n_max, and the smallest n
/// where full S3 symmetry fails.
pub fn symmetry_scan(n_max: usize, limits: &Limits) -> Result<(Vec<SymmetryRow>, Option<usize>)> {
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let dist = joint_distribution(n, limits)?;
        let failing: Vec<[usize; 3]> = S3.iter().copied().filter(|&p| !invariant_under(&dist, p)).collect();
        rows.push(SymmetryRow {
            n,
            cr_ne_swap: invariant_under(&dist, [1, 0, 2]),
            full_s3: failing.is_empty(),
            failing,
        });
    }
    let first = rows.iter().find(|r| !r.full_s3).map(|r| r.n);
    Ok((rows, first))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> PerfectMatching {
        s.parse().unwrap()
    }

    fn t(s: &str) -> OscillatingTableau {
        s.parse().unwrap()
    }

    #[test]
    fn enumerate_examples() {
        let limits = Limits::default();
        assert_eq!(enumerate_matchings(1, &limits).unwrap(), vec![m("1-2")]);
        assert_eq!(
            enumerate_matchings(2, &limits).unwrap(),
            vec![m("1-2,3-4"), m("1-3,2-4"), m("1-4,2-3")]
        );
        assert_eq!(enumerate_matchings(3, &limits).unwrap().len(), 15);
        assert!(enumerate_matchings(9, &limits).is_err());
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(m("2-3,1-4").to_string(), "1-4,2-3");
        assert_eq!(m("1-4;2-3").to_csv_text(), "1-4;2-3");
        assert!("1-2,2-3".parse::<PerfectMatching>().is_err());
        assert!("1-5,2-3".parse::<PerfectMatching>().is_err());
        assert!("1-1".parse::<PerfectMatching>().is_err());
        assert!("12".parse::<PerfectMatching>().is_err());
        assert_eq!(m("-").n(), 0);
    }

    #[test]
    fn stats_examples() {
        let s = |x: &str| {
            let st = stats(&m(x));
            (st.crossings, st.nestings, st.alignments)
        };
        assert_eq!(s("1-2,3-4"), (0, 0, 1));
        assert_eq!(s("1-3,2-4"), (1, 0, 0));
        assert_eq!(s("1-4,2-3"), (0, 1, 0));
    }

    #[test]
    fn dyck_projection_examples() {
        assert_eq!(dyck_of_matching(&m("1-2,3-4")).to_string(), "1010");
        assert_eq!(dyck_of_matching(&m("1-4,2-3")).to_string(), "1100");
        assert_eq!(dyck_of_matching(&m("1-3,2-4")).to_string(), "1100");
        assert_eq!(dyck_of_tableau(&t("-/1/-")).unwrap().to_string(), "10");
        assert_eq!(dyck_of_tableau(&t("-/1/2/1/-")).unwrap().to_string(), "1100");
        assert_eq!(dyck_of_tableau(&t("-/1/-/1/-")).unwrap().to_string(), "1010");
        assert!(dyck_of_tableau(&t("-/1")).is_err());
    }

    #[test]
    fn weight_via_matching_examples() {
        assert_eq!(weight_via_matching(&m("1-2")), 1);
        assert_eq!(weight_via_matching(&m("1-2,3-4")), 2);
        assert_eq!(weight_via_matching(&m("1-3,2-4")), 4);
    }

    #[test]
    fn conjugate_tableau_examples() {
        assert_eq!(conjugate_tableau(&t("-/1/-")), t("-/1/-"));
        assert_eq!(conjugate_tableau(&t("-/1/2/1/-")), t("-/1/1,1/1/-"));
        let x = t("-/1/2/2,1/3,1/2,1/1,1/1/-");
        assert_eq!(conjugate_tableau(&conjugate_tableau(&x)), x);
        assert_eq!(conjugate_tableau(&x).weight(), x.weight());
    }

    #[test]
    fn permutation_bridge_examples() {
        assert_eq!(permutation_bridge(&m("1-3,2-4")).unwrap(), vec![1, 2]);
        assert_eq!(permutation_bridge(&m("1-4,2-3")).unwrap(), vec![2, 1]);
        assert!(matches!(
            permutation_bridge(&m("1-2,3-4")),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_on_permutation_matchings(&m("1-3,2-4")).unwrap(), m("1-4,2-3"));
        assert_eq!(sigma_on_permutation_matchings(&m("1-4,2-3")).unwrap(), m("1-3,2-4"));
        assert!(sigma_on_permutation_matchings(&m("1-2,3-4")).is_err());
    }

    #[test]
    fn joint_distribution_n2_is_fully_symmetric() {
        let dist = joint_distribution(2, &Limits::default()).unwrap();
        let want: JointDistribution = [((0, 0, 1), 1), ((1, 0, 0), 1), ((0, 1, 0), 1)].into_iter().collect();
        assert_eq!(dist, want);
        assert!(S3.iter().all(|&p| invariant_under(&dist, p)));
    }

    #[test]
    fn classify_is_symmetric_in_argument_order() {
        let arcs = [(1, 2), (1, 3), (2, 4), (3, 4), (1, 4), (2, 3)];
        for &p in &arcs {
            for &q in &arcs {
                let distinct = p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1;
                if distinct {
                    assert_eq!(classify(p, q), classify(q, p));
                }
            }
        }
    }
}
