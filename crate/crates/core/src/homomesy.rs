//! Free C3-orbit certificates: partitions of a weighted set into triples that
//! all have the same value sum.
//!
//! A free C3 action under which a statistic is homomesic splits its domain
//! into such triples, so a certificate is a necessary condition for the action
//! and an infeasibility proof rules it out.
//!
//! Two backends are provided. The default is depth-first backtracking on the
//! first unassigned item. Items with the same value (and, under an involution
//! constraint, the same partner value) are interchangeable, so only one
//! representative per class is tried and failed residual class counts are
//! memoised. The exact-cover backend runs Algorithm X on the explicit list of
//! admissible triples; both must agree on feasibility.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::matching::{conjugate_matching, enumerate_matchings, pairs_of_pairs, stats};
use crate::partition::{conjugate, Partition};
use crate::tableau::{count_formula, enumerate_ot, OscillatingTableau};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedItem {
    pub id: String,
    pub value: i64,
}

/// Items with distinct identifiers and an integer statistic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedSet {
    items: Vec<WeightedItem>,
}

impl WeightedSet {
    pub fn new(items: Vec<WeightedItem>) -> Result<Self> {
        let mut seen = HashSet::new();
        for item in &items {
            if !seen.insert(item.id.as_str()) {
                return Err(Error::Coverage(format!("duplicate identifier {}", item.id)));
            }
        }
        Ok(WeightedSet { items })
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        Self::new(
            pairs
                .into_iter()
                .map(|(id, value)| WeightedItem { id: id.into(), value })
                .collect(),
        )
    }

    pub fn items(&self) -> &[WeightedItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.items.iter().map(|i| i.value).sum()
    }
}

/// Disjoint identifier triples covering a [`WeightedSet`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TriplePartition {
    pub triples: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Certificate { triples: TriplePartition },
    Infeasible,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Backtracking,
    ExactCover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 100_000_000,
            max_time: Some(Duration::from_secs(60)),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    pub budget: Budget,
    pub backend: Option<Backend>,
    pub parallel: bool,
    /// Item index → index of its image under an involution; every triple must
    /// then be closed under that involution.
    pub involution: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    #[serde(flatten)]
    pub outcome: SearchOutcome,
    pub nodes: u64,
    #[serde(skip)]
    pub elapsed: Duration,
    pub backend: Backend,
    /// `sequential` runs are deterministic, `parallel` runs are not.
    pub mode: &'static str,
}

/// Sum each orbit must reach for tableaux: ½(4n² + 3k² + 8kn + 2n + 3k).
pub fn orbit_sum_target_tableaux(k: usize, n: usize) -> BigInt {
    let (k, n) = (BigInt::from(k), BigInt::from(n));
    let twice = BigInt::from(4) * &n * &n
        + BigInt::from(3) * &k * &k
        + BigInt::from(8) * &k * &n
        + BigInt::from(2) * &n
        + BigInt::from(3) * &k;
    let (half, rem) = twice.div_rem(&BigInt::from(2));
    debug_assert!(rem.is_zero());
    half
}

/// Sum each orbit must reach for alignments on M_n: three times the mean, C(n, 2).
pub fn orbit_sum_target_matchings(n: usize) -> usize {
    pairs_of_pairs(n)
}

/// True iff 3 divides #OT(λ, |λ| + 2n).
pub fn divisibility_check(lambda: &Partition, n: usize) -> Result<bool> {
    Ok((count_formula(lambda, n)? % 3u32).is_zero())
}

/// True iff the triples partition the item set and all have the same sum.
pub fn homomesy_verify(partition: &TriplePartition, items: &WeightedSet) -> Result<bool> {
    let values: HashMap<&str, i64> = items.items.iter().map(|i| (i.id.as_str(), i.value)).collect();
    let mut used = HashSet::new();
    let mut sums = Vec::with_capacity(partition.triples.len());
    for triple in &partition.triples {
        let mut sum = 0;
        for id in triple {
            let v = values
                .get(id.as_str())
                .ok_or_else(|| Error::Coverage(format!("unknown identifier {id}")))?;
            if !used.insert(id.as_str()) {
                return Err(Error::Coverage(format!("identifier {id} appears twice")));
            }
            sum += v;
        }
        sums.push(sum);
    }
    if used.len() != items.len() {
        return Err(Error::Coverage(format!(
            "{} of {} items are covered",
            used.len(),
            items.len()
        )));
    }
    Ok(sums.windows(2).all(|w| w[0] == w[1]))
}

/// Searches for a partition of `items` into triples each summing to `target`.
pub fn triple_partition_search(items: &WeightedSet, target: i64, options: &SearchOptions) -> Result<SearchResult> {
    let started = Instant::now();
    if items.len() % 3 != 0 {
        return Err(Error::NotDivisibleByThree { items: items.len() });
    }
    if let Some(inv) = &options.involution {
        check_involution(inv, items.len())?;
    }
    let backend = options.backend.unwrap_or(Backend::Backtracking);
    let mode = if options.parallel { "parallel" } else { "sequential" };
    let triples_needed = (items.len() / 3) as i64;
    if items.total() != target * triples_needed {
        return Ok(SearchResult {
            outcome: SearchOutcome::Infeasible,
            nodes: 0,
            elapsed: started.elapsed(),
            backend,
            mode,
        });
    }
    let problem = Problem::new(items, target, options.involution.clone());
    let ctl = Control::new(options.budget, started);
    let found = match (backend, options.parallel) {
        (Backend::Backtracking, false) => problem.backtrack_sequential(&ctl),
        (Backend::Backtracking, true) => problem.backtrack_parallel(&ctl),
        (Backend::ExactCover, _) => problem.exact_cover(&ctl),
    };
    let outcome = match found {
        Found::Solution(triples) => SearchOutcome::Certificate {
            triples: TriplePartition {
                triples: triples
                    .into_iter()
                    .map(|t| t.map(|i| items.items[i].id.clone()))
                    .collect(),
            },
        },
        Found::Exhausted => SearchOutcome::Infeasible,
        Found::OutOfBudget => SearchOutcome::BudgetExhausted,
    };
    Ok(SearchResult {
        outcome,
        nodes: ctl.nodes.load(Ordering::Relaxed),
        elapsed: started.elapsed(),
        backend,
        mode,
    })
}

fn check_involution(inv: &[usize], len: usize) -> Result<()> {
    if inv.len() != len || inv.iter().enumerate().any(|(i, &j)| j >= len || inv[j] != i) {
        return Err(Error::Coverage("the involution is not a self-inverse map on the items".into()));
    }
    Ok(())
}

enum Found {
    Solution(Vec<[usize; 3]>),
    Exhausted,
    OutOfBudget,
}

struct Control {
    budget: Budget,
    started: Instant,
    nodes: AtomicU64,
    stop: AtomicBool,
    cancelled: AtomicBool,
}

impl Control {
    fn new(budget: Budget, started: Instant) -> Self {
        Control {
            budget,
            started,
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            cancelled: AtomicBool::new(false),
        }
    }

    /// Counts a node; false once the budget is spent or the run was cancelled.
    fn tick(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) || self.cancelled.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_time = n % 4096 == 0
            && self
                .budget
                .max_time
                .is_some_and(|limit| self.started.elapsed() > limit);
        if n > self.budget.max_nodes || over_time {
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn out_of_budget(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }
}

struct Problem {
    values: Vec<i64>,
    target: i64,
    involution: Option<Vec<usize>>,
    /// class id per item; items of one class are interchangeable
    class: Vec<usize>,
    class_count: usize,
    /// value → item indices with that value, ascending
    by_value: HashMap<i64, Vec<usize>>,
}

impl Problem {
    fn new(items: &WeightedSet, target: i64, involution: Option<Vec<usize>>) -> Self {
        let values: Vec<i64> = items.items.iter().map(|i| i.value).collect();
        let mut keys: BTreeMap<(bool, i64, i64), usize> = BTreeMap::new();
        let raw: Vec<(bool, i64, i64)> = (0..values.len())
            .map(|i| match &involution {
                None => (true, values[i], 0),
                Some(inv) => (inv[i] == i, values[i], values[inv[i]]),
            })
            .collect();
        for key in &raw {
            let next = keys.len();
            keys.entry(*key).or_insert(next);
        }
        let class = raw.iter().map(|k| keys[k]).collect();
        let mut by_value: HashMap<i64, Vec<usize>> = HashMap::new();
        for (i, &v) in values.iter().enumerate() {
            by_value.entry(v).or_default().push(i);
        }
        Problem {
            values,
            target,
            involution,
            class,
            class_count: keys.len(),
            by_value,
        }
    }

    fn fixed(&self, i: usize) -> bool {
        self.involution.as_ref().is_none_or(|inv| inv[i] == i)
    }

    /// Candidate triples containing `a`, the smallest unassigned item, one per
    /// class choice for the partners, in deterministic order.
    fn candidates(&self, a: usize, assigned: &[bool]) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        let free = |i: usize| !assigned[i] && i != a;
        match &self.involution {
            Some(inv) if inv[a] != a => {
                let b = inv[a];
                if free(b) {
                    let need = self.target - self.values[a] - self.values[b];
                    if let Some(c) = self.first_free_with(need, assigned, &[a, b], |c| self.fixed(c)) {
                        out.push(sorted3(a, b, c));
                    }
                }
            }
            _ => {
                let mut tried_classes = HashSet::new();
                for b in a + 1..self.values.len() {
                    if !free(b) || !tried_classes.insert(self.class[b]) {
                        continue;
                    }
                    let need = self.target - self.values[a] - self.values[b];
                    if self.fixed(b) {
                        if let Some(c) = self.first_free_with(need, assigned, &[a, b], |c| c > b && self.fixed(c)) {
                            out.push(sorted3(a, b, c));
                        }
                    } else {
                        let c = self.involution.as_ref().expect("non-fixed implies involution")[b];
                        if free(c) && self.values[c] == need {
                            out.push(sorted3(a, b, c));
                        }
                    }
                }
            }
        }
        out
    }

    fn first_free_with(
        &self,
        value: i64,
        assigned: &[bool],
        exclude: &[usize],
        accept: impl Fn(usize) -> bool,
    ) -> Option<usize> {
        self.by_value
            .get(&value)?
            .iter()
            .copied()
            .find(|&c| !assigned[c] && !exclude.contains(&c) && accept(c))
    }

    fn residual_key(&self, assigned: &[bool]) -> Vec<u32> {
        let mut counts = vec![0u32; self.class_count];
        for (i, &used) in assigned.iter().enumerate() {
            if !used {
                counts[self.class[i]] += 1;
            }
        }
        counts
    }

    fn backtrack_sequential(&self, ctl: &Control) -> Found {
        let mut assigned = vec![false; self.values.len()];
        let mut chosen = Vec::with_capacity(self.values.len() / 3);
        let mut failed = HashSet::new();
        self.dfs(&mut assigned, &mut chosen, &mut failed, ctl)
    }

    fn backtrack_parallel(&self, ctl: &Control) -> Found {
        let n = self.values.len();
        if n == 0 {
            return Found::Solution(Vec::new());
        }
        let top = self.candidates(0, &vec![false; n]);
        let results: Vec<Found> = top
            .par_iter()
            .map(|&triple| {
                let mut assigned = vec![false; n];
                for i in triple {
                    assigned[i] = true;
                }
                let mut chosen = vec![triple];
                let mut failed = HashSet::new();
                if !ctl.tick() {
                    return Found::OutOfBudget;
                }
                let r = self.dfs(&mut assigned, &mut chosen, &mut failed, ctl);
                if matches!(r, Found::Solution(_)) {
                    ctl.cancelled.store(true, Ordering::Relaxed);
                }
                r
            })
            .collect();
        let mut any_budget = false;
        for r in results {
            match r {
                Found::Solution(s) => return Found::Solution(s),
                Found::OutOfBudget => any_budget = true,
                Found::Exhausted => {}
            }
        }
        if any_budget || ctl.out_of_budget() {
            Found::OutOfBudget
        } else {
            Found::Exhausted
        }
    }

    fn dfs(
        &self,
        assigned: &mut [bool],
        chosen: &mut Vec<[usize; 3]>,
        failed: &mut HashSet<Vec<u32>>,
        ctl: &Control,
    ) -> Found {
        let Some(a) = assigned.iter().position(|&used| !used) else {
            return Found::Solution(chosen.clone());
        };
        if !ctl.tick() {
            return Found::OutOfBudget;
        }
        let key = self.residual_key(assigned);
        if failed.contains(&key) {
            return Found::Exhausted;
        }
        for triple in self.candidates(a, assigned) {
            for i in triple {
                assigned[i] = true;
            }
            chosen.push(triple);
            let r = self.dfs(assigned, chosen, failed, ctl);
            chosen.pop();
            for i in triple {
                assigned[i] = false;
            }
            match r {
                Found::Exhausted => {}
                other => return other,
            }
        }
        failed.insert(key);
        Found::Exhausted
    }

    /// All admissible triples, sorted.
    fn admissible_triples(&self) -> Vec<[usize; 3]> {
        let n = self.values.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let need = self.target - self.values[a] - self.values[b];
                let Some(cands) = self.by_value.get(&need) else { continue };
                for &c in cands {
                    if c > b && self.closed_under_involution([a, b, c]) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    fn closed_under_involution(&self, t: [usize; 3]) -> bool {
        match &self.involution {
            None => true,
            Some(inv) => t.iter().all(|&i| t.contains(&inv[i])),
        }
    }

    fn exact_cover(&self, ctl: &Control) -> Found {
        let rows = self.admissible_triples();
        let n = self.values.len();
        let mut rows_of: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (r, t) in rows.iter().enumerate() {
            for &i in t {
                rows_of[i].push(r);
            }
        }
        let mut x = AlgorithmX {
            rows: &rows,
            rows_of: &rows_of,
            row_active: vec![true; rows.len()],
            col_covered: vec![false; n],
            col_size: rows_of.iter().map(Vec::len).collect(),
            chosen: Vec::new(),
        };
        x.search(ctl)
    }
}

fn sorted3(a: usize, b: usize, c: usize) -> [usize; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

struct AlgorithmX<'a> {
    rows: &'a [[usize; 3]],
    rows_of: &'a [Vec<usize>],
    row_active: Vec<bool>,
    col_covered: Vec<bool>,
    col_size: Vec<usize>,
    chosen: Vec<usize>,
}

impl AlgorithmX<'_> {
    fn search(&mut self, ctl: &Control) -> Found {
        // column with the fewest active rows
        let Some(col) = (0..self.col_covered.len())
            .filter(|&c| !self.col_covered[c])
            .min_by_key(|&c| (self.col_size[c], c))
        else {
            let mut sol: Vec<[usize; 3]> = self.chosen.iter().map(|&r| self.rows[r]).collect();
            sol.sort_unstable();
            return Found::Solution(sol);
        };
        if !ctl.tick() {
            return Found::OutOfBudget;
        }
        let candidates: Vec<usize> = self.rows_of[col].iter().copied().filter(|&r| self.row_active[r]).collect();
        for r in candidates {
            let removed = self.select(r);
            self.chosen.push(r);
            let found = self.search(ctl);
            self.chosen.pop();
            self.deselect(r, &removed);
            match found {
                Found::Exhausted => {}
                other => return other,
            }
        }
        Found::Exhausted
    }

    fn select(&mut self, r: usize) -> Vec<usize> {
        let mut removed = Vec::new();
        for &c in &self.rows[r] {
            self.col_covered[c] = true;
            for &other in &self.rows_of[c] {
                if self.row_active[other] {
                    self.row_active[other] = false;
                    removed.push(other);
                    for &cc in &self.rows[other] {
                        self.col_size[cc] -= 1;
                    }
                }
            }
        }
        removed
    }

    fn deselect(&mut self, r: usize, removed: &[usize]) {
        for &other in removed.iter().rev() {
            self.row_active[other] = true;
            for &cc in &self.rows[other] {
                self.col_size[cc] += 1;
            }
        }
        for &c in &self.rows[r] {
            self.col_covered[c] = false;
        }
    }
}

/// The weighted set (step word, wt) over OT(λ, |λ| + 2n), with the tableaux in enumeration order.
pub fn tableau_items(lambda: &Partition, n: usize, limits: &Limits) -> Result<(WeightedSet, Vec<OscillatingTableau>)> {
    let tableaux = enumerate_ot(&Partition::empty(), lambda, lambda.size() + 2 * n, limits)?;
    let set = WeightedSet::from_pairs(tableaux.iter().map(|t| (t.step_word(), t.weight() as i64)))?;
    Ok((set, tableaux))
}

/// The weighted set (canonical matching, al) over M_n.
pub fn matching_items(n: usize, limits: &Limits) -> Result<WeightedSet> {
    let matchings = enumerate_matchings(n, limits)?;
    WeightedSet::from_pairs(matchings.iter().map(|m| (m.to_string(), stats(m).alignments as i64)))
}

/// Conjugation as an involution on OT(λ, ·); λ must be self-conjugate.
pub fn tableau_conjugation(lambda: &Partition, tableaux: &[OscillatingTableau]) -> Result<Vec<usize>> {
    if &conjugate(lambda) != lambda {
        return Err(Error::ShapeMismatch(format!(
            "conjugation maps shape {lambda} to {}, so it does not act on these tableaux",
            conjugate(lambda)
        )));
    }
    let index: HashMap<&OscillatingTableau, usize> = tableaux.iter().enumerate().map(|(i, t)| (t, i)).collect();
    tableaux
        .iter()
        .map(|t| {
            index
                .get(&crate::matching::conjugate_tableau(t))
                .copied()
                .ok_or_else(|| Error::Internal("conjugate tableau missing from enumeration".into()))
        })
        .collect()
}

/// Conjugation transported through RS as an involution on M_n.
pub fn matching_conjugation(n: usize, limits: &Limits) -> Result<Vec<usize>> {
    let matchings = enumerate_matchings(n, limits)?;
    let index: HashMap<String, usize> = matchings.iter().enumerate().map(|(i, m)| (m.to_string(), i)).collect();
    matchings
        .iter()
        .map(|m| {
            let image = conjugate_matching(m)?.to_string();
            index
                .get(&image)
                .copied()
                .ok_or_else(|| Error::Internal(format!("conjugate {image} missing")))
        })
        .collect()
}

/// Triple search over OT(λ, |λ| + 2n) with the weight statistic.
pub fn search_tableaux(
    lambda: &Partition,
    n: usize,
    conjugation_closed: bool,
    options: &SearchOptions,
    limits: &Limits,
) -> Result<(SearchResult, WeightedSet, i64)> {
    let (items, tableaux) = tableau_items(lambda, n, limits)?;
    if items.len() % 3 != 0 {
        return Err(Error::NotDivisibleByThree { items: items.len() });
    }
    let target = i64::try_from(orbit_sum_target_tableaux(lambda.size(), n))
        .map_err(|_| Error::Internal("orbit target exceeds i64".into()))?;
    let mut options = options.clone();
    if conjugation_closed {
        options.involution = Some(tableau_conjugation(lambda, &tableaux)?);
    }
    let result = triple_partition_search(&items, target, &options)?;
    Ok((result, items, target))
}

/// Triple search over M_n with the alignment statistic.
pub fn search_matchings(
    n: usize,
    conjugation_closed: bool,
    options: &SearchOptions,
    limits: &Limits,
) -> Result<(SearchResult, WeightedSet, i64)> {
    let items = matching_items(n, limits)?;
    if items.len() % 3 != 0 {
        return Err(Error::NotDivisibleByThree { items: items.len() });
    }
    let target = orbit_sum_target_matchings(n) as i64;
    let mut options = options.clone();
    if conjugation_closed {
        options.involution = Some(matching_conjugation(n, limits)?);
    }
    let result = triple_partition_search(&items, target, &options)?;
    Ok((result, items, target))
}
