//! Command implementations behind the `osctab` binary.
//!
//! Every command yields an [`Emission`]: either a [`RunReport`] (always JSON)
//! or a table that renders as CSV or JSON.

use std::collections::BTreeMap;
use std::time::Duration;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::{json, Value};

use crate::diffposet;
use crate::error::{Error, Result};
use crate::homomesy::{self, Backend, Budget, SearchOptions, SearchOutcome, SearchResult, WeightedSet};
use crate::limits::Limits;
use crate::matching::dyck::area;
use crate::matching::rs::{matching_to_tableau, tableau_to_matching};
use crate::matching::{self, dyck_of_matching, PerfectMatching};
use crate::partition::{num_syt, Partition};
use crate::rational::RationalJson;
use crate::tableau::{
    average_size_formula, average_weight_enumerated, average_weight_formula, count_and_total_weight,
    count_formula, enumerate_ot, skew_denominator_scan, walk_possible, weight_generating_function,
    OscillatingTableau,
};
use crate::verify::{self, Check, Suite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Infeasible,
    BudgetExhausted,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass | Outcome::Infeasible => 0,
            Outcome::Fail => 1,
            Outcome::BudgetExhausted => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub outcome: Outcome,
    pub details: Value,
    /// Wall time in milliseconds; only set outside deterministic mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl RunReport {
    fn new(command: &str, parameters: &[(&str, String)], outcome: Outcome, details: Value) -> Self {
        RunReport {
            command: command.to_string(),
            parameters: parameters.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            outcome,
            details,
            elapsed_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// JSON form with typed fields, one object per row.
    pub json: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Emission {
    Report(RunReport),
    Table(Table),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Emission {
    pub fn exit_code(&self) -> i32 {
        match self {
            Emission::Report(r) => r.outcome.exit_code(),
            Emission::Table(_) => 0,
        }
    }

    pub fn set_elapsed(&mut self, elapsed: Duration) {
        if let Emission::Report(r) = self {
            r.elapsed_ms = Some(elapsed.as_millis());
        }
    }

    /// Reports always render as JSON; tables follow `format`.
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Emission::Report(r), _) => to_json(r),
            (Emission::Table(t), Format::Json) => to_json(&t.json),
            (Emission::Table(t), Format::Csv) => {
                let mut out = t.header.join(",");
                out.push('\n');
                for row in &t.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                out
            }
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report values serialize");
    s.push('\n');
    s
}

fn rational(r: &crate::ExactRational) -> Value {
    serde_json::to_value(RationalJson::from(r)).expect("strings serialize")
}

fn checks_report(command: &str, parameters: &[(&str, String)], checks: Vec<Check>) -> RunReport {
    let pass = verify::all_pass(&checks);
    let failed = checks.iter().filter(|c| !c.pass).count();
    RunReport::new(
        command,
        parameters,
        Outcome::from_pass(pass),
        json!({ "checks": checks.len(), "failed": failed, "identities": checks }),
    )
}

/// Formula count of OT(λ, |λ| + 2n), and the enumerated count when it fits the bound.
pub fn cmd_count(shape: &Partition, n: usize, limits: &Limits) -> Result<Emission> {
    let params = [("shape", shape.to_string()), ("n", n.to_string())];
    let formula = count_formula(shape, n)?;
    let length = shape.size() + 2 * n;
    let enumerated = if formula > BigUint::from(limits.max_enum) {
        Err(format!("enumeration skipped: formula exceeds the bound {}", limits.max_enum))
    } else {
        match count_and_total_weight(&Partition::empty(), shape, length, limits) {
            Ok((count, _)) => Ok(count),
            Err(e @ Error::BoundExceeded { .. }) => Err(format!("enumeration skipped: {e}")),
            Err(e) => return Err(e),
        }
    };
    let details = match &enumerated {
        Ok(count) => json!({
            "length": length,
            "formula": formula.to_string(),
            "enumerated": count.to_string(),
            "equal": count == &formula,
        }),
        Err(note) => json!({
            "length": length,
            "formula": formula.to_string(),
            "enumerated": null,
            "equal": null,
            "note": note,
        }),
    };
    let pass = enumerated.as_ref().map_or(true, |c| c == &formula);
    Ok(Emission::Report(RunReport::new("count", &params, Outcome::from_pass(pass), details)))
}

fn tableau_json(t: &OscillatingTableau) -> Value {
    json!({ "tableau": t, "steps": t.step_word(), "weight": t.weight() })
}

/// Every oscillating tableau from μ to λ of the given length.
pub fn cmd_enumerate(mu: &Partition, shape: &Partition, length: usize, limits: &Limits) -> Result<Emission> {
    let tableaux = enumerate_ot(mu, shape, length, limits)?;
    Ok(Emission::Table(Table {
        header: vec!["steps", "weight"],
        rows: tableaux
            .iter()
            .map(|t| vec![t.step_word(), t.weight().to_string()])
            .collect(),
        json: tableaux.iter().map(tableau_json).collect(),
    }))
}

/// Exact average weight; compared with the closed forms when μ = ∅.
pub fn cmd_avg_weight(mu: &Partition, shape: &Partition, length: usize, limits: &Limits) -> Result<Emission> {
    let params = [
        ("mu", mu.to_string()),
        ("shape", shape.to_string()),
        ("length", length.to_string()),
    ];
    let (count, _) = count_and_total_weight(mu, shape, length, limits)?;
    let avg = average_weight_enumerated(mu, shape, length, limits)?;
    let avg_size = &avg / crate::rational::ratio(length + 1, 1);
    let mut details = json!({
        "count": count.to_string(),
        "average_weight": rational(&avg),
        "average_size": rational(&avg_size),
    });
    let k = shape.size();
    let mut pass = true;
    if mu.is_empty() && length >= k && (length - k) % 2 == 0 {
        let n = (length - k) / 2;
        let wf = average_weight_formula(k, n);
        let sf = average_size_formula(k, n);
        pass = wf == avg && sf == avg_size;
        details["formula_weight"] = rational(&wf);
        details["formula_size"] = rational(&sf);
        details["equal"] = json!(pass);
    }
    Ok(Emission::Report(RunReport::new("avg-weight", &params, Outcome::from_pass(pass), details)))
}

/// Weight generating function of OT(λ, l) against q_{k0}(l) f^λ.
pub fn cmd_gf(shape: &Partition, length: usize, limits: &Limits) -> Result<Emission> {
    let params = [("shape", shape.to_string()), ("length", length.to_string())];
    let gf = weight_generating_function(shape, length, limits)?;
    let table = diffposet::q_table(length, limits)?;
    let f = BigInt::from(num_syt(shape)?);
    let predicted = table.get(shape.size(), 0, length).scaled(&f);
    let pass = gf == predicted;
    let details = json!({
        "enumerated": gf,
        "enumerated_text": gf.to_string(),
        "from_q_table": predicted,
        "f_lambda": f.to_string(),
        "equal": pass,
    });
    Ok(Emission::Report(RunReport::new("gf", &params, Outcome::from_pass(pass), details)))
}

/// Every nonzero q_{ij}(l) with l ≤ `length`.
pub fn cmd_q_table(length: usize, limits: &Limits) -> Result<Emission> {
    let table = diffposet::q_table(length, limits)?;
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for l in 0..=length {
        for (&(i, j), q) in table.level(l) {
            rows.push(vec![i.to_string(), j.to_string(), l.to_string(), q.to_string()]);
            out.push(json!({ "i": i, "j": j, "l": l, "q": q }));
        }
    }
    Ok(Emission::Table(Table {
        header: vec!["i", "j", "l", "q"],
        rows,
        json: out,
    }))
}

/// b_{i0}(l) and c_{i0}(l) for l ≤ `length`; `with_recurrence` adds the second c route.
pub fn cmd_bc_table(length: usize, with_recurrence: bool, limits: &Limits) -> Result<Emission> {
    let table = diffposet::q_table(length, limits)?;
    let c_rec = diffposet::c_recurrence_table(length);
    let mut header = vec!["i", "l", "b", "c"];
    if with_recurrence {
        header.push("c_recurrence");
    }
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for l in 0..=length {
        for i in 0..=l {
            let b = diffposet::b_value(i, l);
            if b == BigInt::from(0) {
                continue;
            }
            let c = table.get(i, 0, l).derivative_at_one();
            let mut row = vec![i.to_string(), l.to_string(), b.to_string(), c.to_string()];
            let mut obj = json!({ "i": i, "l": l, "b": b.to_string(), "c": c.to_string() });
            if with_recurrence {
                row.push(c_rec[l][i].to_string());
                obj["c_recurrence"] = json!(c_rec[l][i].to_string());
            }
            rows.push(row);
            out.push(obj);
        }
    }
    Ok(Emission::Table(Table { header, rows, json: out }))
}

/// c_{k0}(k+2n) / b_{k0}(k+2n) against its closed form over a (k, n) grid.
pub fn cmd_verify_eq1(kmax: usize, nmax: usize, limits: &Limits) -> Result<Emission> {
    let params = [("kmax", kmax.to_string()), ("nmax", nmax.to_string())];
    let l = kmax + 2 * nmax;
    let table = diffposet::q_table(l, limits)?;
    let c_rec = diffposet::c_recurrence_table(l);
    let mut reports = Vec::new();
    for k in 0..=kmax {
        for n in 0..=nmax {
            reports.push(diffposet::verify_key_identity_with(&table, &c_rec, k, n)?);
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(Emission::Report(RunReport::new(
        "diffposet verify-eq1",
        &params,
        Outcome::from_pass(pass),
        json!({ "cases": reports }),
    )))
}

pub fn cmd_rs_forward(t: &OscillatingTableau) -> Result<Emission> {
    let m = tableau_to_matching(t)?;
    Ok(Emission::Report(RunReport::new(
        "rs forward",
        &[("tableau", t.to_string())],
        Outcome::Pass,
        json!({ "matching": m, "tableau": t }),
    )))
}

pub fn cmd_rs_inverse(m: &PerfectMatching) -> Result<Emission> {
    let t = matching_to_tableau(m)?;
    Ok(Emission::Report(RunReport::new(
        "rs inverse",
        &[("matching", m.to_string())],
        Outcome::Pass,
        json!({ "tableau": t, "tableau_text": t.to_string(), "steps": t.step_word() }),
    )))
}

/// The full bijection battery for n ≤ `nmax`.
pub fn cmd_rs_roundtrip(nmax: usize, limits: &Limits) -> Result<Emission> {
    let checks = verify::rs_battery(nmax, limits)?;
    Ok(Emission::Report(checks_report("rs roundtrip", &[("n", nmax.to_string())], checks)))
}

/// One row per matching of [2n].
pub fn cmd_stats(n: usize, limits: &Limits) -> Result<Emission> {
    let matchings = matching::enumerate_matchings(n, limits)?;
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for m in &matchings {
        let s = matching::stats(m);
        let d = dyck_of_matching(m);
        let wt = matching_to_tableau(m)?.weight();
        let a = area(&d);
        rows.push(vec![
            m.to_csv_text(),
            s.crossings.to_string(),
            s.nestings.to_string(),
            s.alignments.to_string(),
            d.to_string(),
            a.to_string(),
            wt.to_string(),
        ]);
        out.push(json!({
            "matching": m,
            "cr": s.crossings,
            "ne": s.nestings,
            "al": s.alignments,
            "dyck": d.to_string(),
            "area": a,
            "wt": wt,
        }));
    }
    Ok(Emission::Table(Table {
        header: vec!["matching", "cr", "ne", "al", "dyck", "area", "wt"],
        rows,
        json: out,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetSet {
    Matchings,
    Tableaux,
}

#[derive(Debug, Clone)]
pub struct HomomesyRequest {
    pub set: TargetSet,
    pub shape: Partition,
    pub n: usize,
    pub budget: Budget,
    pub backend: Option<Backend>,
    pub parallel: bool,
    pub conjugation_closed: bool,
}

pub fn cmd_homomesy(req: &HomomesyRequest, limits: &Limits) -> Result<Emission> {
    let options = SearchOptions {
        budget: req.budget,
        backend: req.backend,
        parallel: req.parallel,
        involution: None,
    };
    let (set_name, statistic) = match req.set {
        TargetSet::Matchings => ("matchings", "al"),
        TargetSet::Tableaux => ("tableaux", "wt"),
    };
    let mut params = vec![("set", set_name.to_string()), ("n", req.n.to_string())];
    if req.set == TargetSet::Tableaux {
        params.push(("shape", req.shape.to_string()));
    }
    params.push(("budget_nodes", req.budget.max_nodes.to_string()));
    if let Some(t) = req.budget.max_time {
        params.push(("budget_seconds", t.as_secs_f64().to_string()));
    }
    params.push(("conjugation_closed", req.conjugation_closed.to_string()));

    let (result, items, target): (SearchResult, WeightedSet, i64) = match req.set {
        TargetSet::Matchings => homomesy::search_matchings(req.n, req.conjugation_closed, &options, limits)?,
        TargetSet::Tableaux => {
            homomesy::search_tableaux(&req.shape, req.n, req.conjugation_closed, &options, limits)?
        }
    };
    let (outcome, verified) = match &result.outcome {
        SearchOutcome::Certificate { triples } => {
            let ok = homomesy::homomesy_verify(triples, &items)?;
            (Outcome::from_pass(ok), Some(ok))
        }
        SearchOutcome::Infeasible => (Outcome::Infeasible, None),
        SearchOutcome::BudgetExhausted => (Outcome::BudgetExhausted, None),
    };
    let details = json!({
        "statistic": statistic,
        "items": items.len(),
        "triples_needed": items.len() / 3,
        "target": target,
        "search": result,
        "verified": verified,
    });
    Ok(Emission::Report(RunReport::new("homomesy", &params, outcome, details)))
}

/// Denominators of average weights over skew classes. The outcome is pass once the
/// scan has covered every reachable (μ, λ, l); `all_divide_three` carries the finding.
pub fn cmd_skew_scan(max_mu: usize, max_shape: usize, max_length: usize, parallel: bool) -> Result<Emission> {
    let params = [
        ("max_mu_size", max_mu.to_string()),
        ("max_shape_size", max_shape.to_string()),
        ("max_length", max_length.to_string()),
    ];
    let report = skew_denominator_scan(max_mu, max_shape, max_length, parallel);
    let expected_cases = crate::partition::partitions_up_to(max_mu)
        .iter()
        .flat_map(|mu| {
            crate::partition::partitions_up_to(max_shape)
                .into_iter()
                .flat_map(move |la| (0..=max_length).map(move |l| (mu.clone(), la.clone(), l)))
        })
        .filter(|(mu, la, l)| walk_possible(mu, la, *l))
        .count();
    if expected_cases != report.cases.len() {
        return Err(Error::Internal(format!(
            "scan produced {} cases, expected {expected_cases}",
            report.cases.len()
        )));
    }
    Ok(Emission::Report(RunReport::new(
        "skew-scan",
        &params,
        Outcome::Pass,
        serde_json::to_value(&report).expect("scan report serializes"),
    )))
}

pub fn cmd_verify(suite: Suite, kmax: usize, nmax: usize, limits: &Limits) -> Result<Emission> {
    let params = [
        ("suite", serde_json::to_value(suite).expect("suite serializes").as_str().unwrap_or_default().to_string()),
        ("kmax", kmax.to_string()),
        ("nmax", nmax.to_string()),
    ];
    let checks = verify::run_suite(suite, kmax, nmax, limits)?;
    Ok(Emission::Report(checks_report("verify", &params, checks)))
}
