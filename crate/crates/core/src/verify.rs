//! Invariant batteries. Each check records an identity with both sides as text.

use std::collections::HashSet;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::diffposet;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::matching::dyck::{area, enumerate_dyck, prefix_stats};
use crate::matching::rs::{matching_to_tableau, tableau_to_matching};
use crate::matching::{self, dyck_of_matching, dyck_of_tableau, pairs_of_pairs, stats};
use crate::partition::{num_syt, partitions_up_to, Partition};
use crate::rational::{ratio, ExactRational};
use crate::tableau::{
    average_size_formula, average_weight_formula, count_and_total_weight, count_formula, enumerate_ot,
    odd_double_factorial, weight_generating_function,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Check {
    fn eq<T: PartialEq + ToString>(identity: String, lhs: T, rhs: T) -> Check {
        Check {
            identity,
            pass: lhs == rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    /// `agreeing` of `total` objects satisfy a pointwise identity.
    fn all(identity: String, agreeing: usize, total: usize) -> Check {
        Check {
            identity,
            lhs: format!("{agreeing} agreeing"),
            rhs: format!("{total} total"),
            pass: agreeing == total,
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Count,
    Weight,
    Diffposet,
    Rs,
    Stats,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "count" => Suite::Count,
            "weight" => Suite::Weight,
            "diffposet" => Suite::Diffposet,
            "rs" => Suite::Rs,
            "stats" => Suite::Stats,
            "all" => Suite::All,
            other => return Err(Error::Parse(format!("unknown suite {other:?}"))),
        })
    }
}

/// Runs `suite` with |λ| ≤ `kmax` and n ≤ `nmax`.
pub fn run_suite(suite: Suite, kmax: usize, nmax: usize, limits: &Limits) -> Result<Vec<Check>> {
    match suite {
        Suite::Count => count_battery(kmax, nmax, limits),
        Suite::Weight => weight_battery(kmax, nmax, limits),
        Suite::Diffposet => diffposet_battery(&DiffposetBounds::scaled(kmax, nmax), limits),
        Suite::Rs => rs_battery(nmax, limits),
        Suite::Stats => stats_battery(&StatsBounds::scaled(nmax), limits),
        Suite::All => {
            let mut out = Vec::new();
            for s in [Suite::Count, Suite::Weight, Suite::Diffposet, Suite::Rs, Suite::Stats] {
                out.extend(run_suite(s, kmax, nmax, limits)?);
            }
            Ok(out)
        }
    }
}

/// #OT(λ, k+2n) against C(2n+k, k)(2n−1)!! f^λ.
pub fn count_battery(kmax: usize, nmax: usize, limits: &Limits) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for lambda in partitions_up_to(kmax) {
        let k = lambda.size();
        for n in 0..=nmax {
            let (count, _) = count_and_total_weight(&Partition::empty(), &lambda, k + 2 * n, limits)?;
            out.push(Check::eq(
                format!("#OT({lambda}, {}) = C({}, {k}) ({}-1)!! f^({lambda})", k + 2 * n, 2 * n + k, 2 * n),
                count,
                count_formula(&lambda, n)?,
            ));
        }
    }
    Ok(out)
}

/// Average weight and average size of OT(λ, k+2n) against their closed forms.
pub fn weight_battery(kmax: usize, nmax: usize, limits: &Limits) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for lambda in partitions_up_to(kmax) {
        let k = lambda.size();
        for n in 0..=nmax {
            let l = k + 2 * n;
            let (count, total) = count_and_total_weight(&Partition::empty(), &lambda, l, limits)?;
            let avg = ExactRational::new(BigInt::from(total), BigInt::from(count));
            let avg_size = &avg / ratio(l + 1, 1);
            out.push(Check::eq(
                format!("avg wt over OT({lambda}, {l}) = (4n^2+3k^2+8kn+2n+3k)/6 at k={k}, n={n}"),
                avg,
                average_weight_formula(k, n),
            ));
            out.push(Check::eq(
                format!("avg size over OT({lambda}, {l}) = n/3 + k/2 at k={k}, n={n}"),
                avg_size,
                average_size_formula(k, n),
            ));
        }
    }
    Ok(out)
}

/// Ranges for [`diffposet_battery`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiffposetBounds {
    /// DU − UD = I on partitions up to this size.
    pub commutator_size: usize,
    /// DUⁱ = UⁱD + iUⁱ⁻¹ for i up to this power.
    pub straighten_power: usize,
    pub straighten_size: usize,
    /// b and both c routes for l up to this length.
    pub table_length: usize,
    pub key_kmax: usize,
    pub key_nmax: usize,
    pub key_length: usize,
    pub gf_shape_size: usize,
    pub gf_length: usize,
}

impl DiffposetBounds {
    pub fn scaled(kmax: usize, nmax: usize) -> Self {
        let l = kmax + 2 * nmax;
        DiffposetBounds {
            commutator_size: l,
            straighten_power: l.min(6),
            straighten_size: l.min(6),
            table_length: l,
            key_kmax: kmax,
            key_nmax: nmax,
            key_length: l,
            gf_shape_size: kmax.min(3),
            gf_length: l,
        }
    }
}

impl Default for DiffposetBounds {
    fn default() -> Self {
        DiffposetBounds {
            commutator_size: 10,
            straighten_power: 6,
            straighten_size: 6,
            table_length: 12,
            key_kmax: 6,
            key_nmax: 5,
            key_length: 14,
            gf_shape_size: 3,
            gf_length: 9,
        }
    }
}

pub fn diffposet_battery(bounds: &DiffposetBounds, limits: &Limits) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let all: Vec<Partition> = partitions_up_to(bounds.commutator_size);
    let ok = all.iter().filter(|p| diffposet::commutator_check(p)).count();
    out.push(Check::all(
        format!("(DU - UD) lambda = lambda for |lambda| <= {}", bounds.commutator_size),
        ok,
        all.len(),
    ));

    for i in 0..=bounds.straighten_power {
        out.push(Check::eq(
            format!("D U^{i} = U^{i} D + {i} U^{} on |mu| <= {}", i.saturating_sub(1), bounds.straighten_size),
            diffposet::ud_straighten_check(i, bounds.straighten_size),
            true,
        ));
    }

    let table_len = bounds.table_length.max(bounds.key_length).max(bounds.gf_length);
    let table = diffposet::q_table(table_len, limits)?;
    let c_rec = diffposet::c_recurrence_table(table_len);
    for l in 0..=bounds.table_length {
        for i in 0..=l {
            out.push(Check::eq(
                format!("q_{{{i}0}}({l}) at y=1 = C({l},{i}) ({l}-{i}-1)!!"),
                table.get(i, 0, l).eval_at_one(),
                diffposet::b_value(i, l),
            ));
            out.push(Check::eq(
                format!("c_{{{i}0}}({l}) by derivative = by recurrence"),
                table.get(i, 0, l).derivative_at_one(),
                c_rec[l][i].clone(),
            ));
        }
    }

    for k in 0..=bounds.key_kmax {
        for n in 0..=bounds.key_nmax {
            if k + 2 * n > bounds.key_length {
                continue;
            }
            let r = diffposet::verify_key_identity_with(&table, &c_rec, k, n)?;
            out.push(Check {
                identity: format!("c_{{{k}0}}({}) / b_{{{k}0}}({}) = (n + (k+1)/2)(2n+3k)/3 at k={k}, n={n}", k + 2 * n, k + 2 * n),
                lhs: r.lhs.to_string(),
                rhs: r.rhs.to_string(),
                pass: r.pass,
            });
        }
    }

    for lambda in partitions_up_to(bounds.gf_shape_size) {
        let k = lambda.size();
        let f = BigInt::from(num_syt(&lambda)?);
        let mut l = k;
        while l <= bounds.gf_length {
            let lhs = table.get(k, 0, l).scaled(&f);
            let rhs = weight_generating_function(&lambda, l, limits)?;
            out.push(Check::eq(format!("q_{{{k}0}}({l}) f^({lambda}) = sum over OT({lambda}, {l}) of y^wt"), lhs, rhs));
            l += 2;
        }
    }

    Ok(out)
}

/// Bijection checks for n ≤ `nmax`.
pub fn rs_battery(nmax: usize, limits: &Limits) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 0..=nmax {
        let matchings = matching::enumerate_matchings(n, limits)?;
        let tableaux = enumerate_ot(&Partition::empty(), &Partition::empty(), 2 * n, limits)?;
        let images = matchings.iter().map(matching_to_tableau).collect::<Result<Vec<_>>>()?;
        let distinct: HashSet<_> = images.iter().collect();
        let expected = odd_double_factorial(n);

        out.push(Check::eq(format!("#M_{n} = (2n-1)!! at n={n}"), BigUint::from(matchings.len()), expected.clone()));
        out.push(Check::eq(
            format!("#RS(M_{n}) = #OT(-, {})", 2 * n),
            distinct.len(),
            tableaux.len(),
        ));
        out.push(Check::eq(format!("#OT(-, {}) = (2n-1)!!", 2 * n), BigUint::from(tableaux.len()), expected));

        let mut back = 0;
        let mut dyck = 0;
        let mut wt = 0;
        for (m, t) in matchings.iter().zip(&images) {
            if &tableau_to_matching(t)? == m {
                back += 1;
            }
            if dyck_of_tableau(t)? == dyck_of_matching(m) {
                dyck += 1;
            }
            if t.weight() == matching::weight_via_matching(m) {
                wt += 1;
            }
        }
        let mut forth = 0;
        for t in &tableaux {
            if &matching_to_tableau(&tableau_to_matching(t)?)? == t {
                forth += 1;
            }
        }
        out.push(Check::all(format!("RS^-1(RS(M)) = M on M_{n}"), back, matchings.len()));
        out.push(Check::all(format!("RS(RS^-1(T)) = T on OT(-, {})", 2 * n), forth, tableaux.len()));
        out.push(Check::all(format!("D_M = D_RS(M) on M_{n}"), dyck, matchings.len()));
        out.push(Check::all(format!("wt(RS(M)) = n + 2(C(n,2) - al(M)) on M_{n}"), wt, matchings.len()));
    }
    Ok(out)
}

/// Ranges for [`stats_battery`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatsBounds {
    pub matching_n: usize,
    pub tableau_n: usize,
    pub dyck_n: usize,
}

impl StatsBounds {
    pub fn scaled(nmax: usize) -> Self {
        StatsBounds {
            matching_n: nmax,
            tableau_n: nmax,
            dyck_n: nmax,
        }
    }
}

impl Default for StatsBounds {
    fn default() -> Self {
        StatsBounds {
            matching_n: 6,
            tableau_n: 5,
            dyck_n: 7,
        }
    }
}

pub fn stats_battery(bounds: &StatsBounds, limits: &Limits) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 0..=bounds.matching_n {
        let matchings = matching::enumerate_matchings(n, limits)?;
        let mut al_ok = 0;
        let mut crne_ok = 0;
        let mut al_total = 0usize;
        for m in &matchings {
            let s = stats(m);
            let d = dyck_of_matching(m);
            let (a, _) = prefix_stats(&d);
            if s.alignments + area(&d) == pairs_of_pairs(n) {
                al_ok += 1;
            }
            if s.crossings + s.nestings == a.iter().sum::<usize>() {
                crne_ok += 1;
            }
            al_total += s.alignments;
        }
        out.push(Check::all(format!("al(M) = C(n,2) - area(D_M) on M_{n}"), al_ok, matchings.len()));
        out.push(Check::all(format!("cr(M) + ne(M) = sum a_i on M_{n}"), crne_ok, matchings.len()));
        out.push(Check::eq(
            format!("mean al over M_{n} = C(n,2)/3"),
            ratio(al_total, matchings.len()),
            ratio(pairs_of_pairs(n), 3),
        ));
    }
    for n in 0..=bounds.tableau_n {
        let tableaux = enumerate_ot(&Partition::empty(), &Partition::empty(), 2 * n, limits)?;
        let mut ok = 0;
        for t in &tableaux {
            if t.weight() == 2 * area(&dyck_of_tableau(t)?) + n {
                ok += 1;
            }
        }
        out.push(Check::all(format!("wt(T) = 2 area(D_T) + n on OT(-, {})", 2 * n), ok, tableaux.len()));
    }
    for n in 0..=bounds.dyck_n {
        let paths = enumerate_dyck(n);
        let mut a_ok = 0;
        let mut b_ok = 0;
        for d in &paths {
            let (a, b) = prefix_stats(d);
            let ar = area(d);
            if a.iter().sum::<usize>() == ar {
                a_ok += 1;
            }
            if b.iter().sum::<i64>() == (2 * ar + n) as i64 {
                b_ok += 1;
            }
        }
        out.push(Check::all(format!("sum a_i = area on Dyck paths of semilength {n}"), a_ok, paths.len()));
        out.push(Check::all(format!("sum b_i = 2 area + n on Dyck paths of semilength {n}"), b_ok, paths.len()));
    }
    Ok(out)
}
