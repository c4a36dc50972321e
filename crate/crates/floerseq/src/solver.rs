//! Filtration bookkeeping: convergence targets, the pairing identity, a
//! prefix-constrained matching model for iterated differentials, and min/max
//! filtration intervals.
//!
//! The actual differentials of the spectral sequence are not computable from
//! rank data. What is computable is the set of rank outcomes consistent with
//! the structural facts: the page splits into two-row problems per odd
//! degree, every odd class eventually kills an even class one degree up in a
//! column strictly to the left (or vertically, where the column permits), and
//! the unmatched classes at every prefix are the Floer cohomology ranks.
//! That is a bipartite matching problem; ambiguity is reported as an
//! interval, never resolved by guessing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::index::{self, IndexError, Period};
use crate::model::{total_cohomology, Diagnostic, GradedRanks, ManifoldSpec, Severity, VerticalPolicy};
use crate::page::E1Page;

/// Inputs the rank bookkeeping cannot derive on its own, quoted from the
/// relevant geometric statement when a preset attaches one.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExternalConstraint {
    /// The unit of H*(Y) is killed by the top class of the N-pillar
    /// (admissible for N=2 on weight-1 spaces, N=1 on weight-2 spaces with a
    /// point minimum).
    UnitKilledByPillar(i64),
    /// The filtration is full from λ on (e.g. from vanishing of the
    /// obstruction class).
    FiltrationFullAt(Period),
    /// Gate kills of constant-orbit classes by instability: a class of F_α
    /// can only be killed at periods T ≥ λ_α = min{1/|w|}.
    UnstableOnly(bool),
    /// Forbid the column at `column` from killing the constant-orbit class
    /// in degree `degree`.
    BlockTopClass { column: Period, degree: i64 },
}

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("λ = {0} is a critical time; evaluate at λ± instead")]
    CriticalLambda(Period),
    #[error("no feasible matching in degree {degree}: {unmatched} source classes cannot be paired (inconsistent spec data)")]
    Infeasible { degree: i64, unmatched: u64 },
    #[error("unit_killed_by_pillar({n}) attached but its hypothesis fails (needs csr_weight {needed})")]
    BadConstraint { n: i64, needed: u64 },
}

/// The ranks of HF*(λH) at a generic slope: ⊕_α H*(F_α)[−μ_λ(F_α)].
pub fn convergence_target(spec: &ManifoldSpec, lambda: Period) -> Result<GradedRanks, SolverError> {
    if index::is_critical_time(spec, lambda) {
        return Err(SolverError::CriticalLambda(lambda));
    }
    let mut out = GradedRanks::new();
    for c in &spec.components {
        let mu = index::floer_index(c, lambda);
        for (d, r) in c.betti.iter() {
            out.add(d + mu, r);
        }
    }
    Ok(out)
}

/// The rank consequence of the two-row splitting: at every generic λ' ≤ λ,
/// for every odd degree d,
/// `page rank(d) over (0, λ'] = col-0 rank(d+1) + page rank(d+1) over (0, λ'] − HF_λ'(d+1)`
/// — all killed odd classes pair with killed even classes one degree up.
pub fn pairing_consistency(
    page: &E1Page,
    spec: &ManifoldSpec,
    lambda: Period,
) -> Result<Vec<Diagnostic>, SolverError> {
    let hy = total_cohomology(spec);
    if !hy.is_even_supported() {
        return Ok(vec![Diagnostic {
            severity: Severity::Note,
            subject: String::new(),
            message: "H*(Y) has odd classes; pairing check skipped".into(),
        }]);
    }
    let mut out = Vec::new();
    let degree_range = degree_range(page);
    for ct in index::critical_times(spec, lambda) {
        let generic = index::lambda_plus(spec, ct.period);
        let hf = convergence_target(spec, generic)?;
        for d in degree_range.clone().filter(|d| d.rem_euclid(2) == 1) {
            let lhs = page.rank_up_to(ct.period, d);
            let rhs = hy.get(d + 1) + page.rank_up_to(ct.period, d + 1);
            let target = hf.get(d + 1);
            if lhs + target != rhs {
                out.push(Diagnostic {
                    severity: Severity::Error,
                    subject: format!("λ'={}", ct.period),
                    message: format!(
                        "pairing identity fails in degree {d}: {lhs} killed odd classes vs {rhs} even classes minus {target} survivors"
                    ),
                });
            }
        }
    }
    Ok(out)
}

fn degree_range(page: &E1Page) -> std::ops::RangeInclusive<i64> {
    let mut lo = 0i64;
    let mut hi = 0i64;
    for c in &page.columns {
        let t = c.total();
        if let (Some(b), Some(u)) = (t.bottom_degree(), t.top_degree()) {
            lo = lo.min(b - 1);
            hi = hi.max(u + 1);
        }
    }
    lo..=hi
}

// ---------------------------------------------------------------------------
// Matching model
// ---------------------------------------------------------------------------

/// A group of interchangeable classes on one side of the matching problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    /// Period of the column the classes live in (0 for the constant-orbit
    /// column).
    pub period: Period,
    /// Component or family the classes are attributed to.
    pub source_id: String,
    pub count: u64,
}

/// The bipartite matching problem for one odd degree d: sources are the odd
/// classes of degree d in positive-period columns, targets the even classes
/// of degree d+1 in all columns including column 0.
#[derive(Clone, Debug)]
pub struct MatchingInstance {
    pub degree: i64,
    pub sources: Vec<Group>,
    pub targets: Vec<Group>,
    /// allowed[s][t]: whether sources of group s may kill targets of group t.
    pub allowed: Vec<Vec<bool>>,
}

impl MatchingInstance {
    pub fn total_sources(&self) -> u64 {
        self.sources.iter().map(|g| g.count).sum()
    }

    /// Whether flow on (s, t) counts toward the reported quantity at prefix
    /// λ: a constant-orbit target killed by a source of period ≤ λ.
    pub fn counted(&self, s: usize, t: usize, lambda: Period) -> bool {
        !self.targets[t].period.is_positive() && self.sources[s].period <= lambda
    }
}

/// Builds the degree-d instance from the page, applying the edge-level
/// external constraints.
pub fn build_instance(
    spec: &ManifoldSpec,
    page: &E1Page,
    constraints: &[ExternalConstraint],
    d: i64,
) -> Result<MatchingInstance, SolverError> {
    let unstable_only = constraints
        .iter()
        .any(|c| matches!(c, ExternalConstraint::UnstableOnly(true)));
    let unit_pillar = constraints.iter().find_map(|c| match c {
        ExternalConstraint::UnitKilledByPillar(n) => Some(*n),
        _ => None,
    });
    if let Some(n) = unit_pillar {
        let needed = if n == 2 { 1 } else { 2 };
        if spec.csr_weight != Some(needed) {
            return Err(SolverError::BadConstraint { n, needed });
        }
    }

    let mut sources = Vec::new();
    let mut targets = Vec::new();
    // (group, vertical policy of the family it came from) for sources.
    let mut source_vertical = Vec::new();
    for col in &page.columns {
        for e in &col.entries {
            if col.period.is_positive() {
                let r = e.ranks.get(d);
                if r > 0 {
                    let policy = spec
                        .family(&e.source_id)
                        .map(|f| f.vertical_policy)
                        .unwrap_or(VerticalPolicy::Rigid);
                    sources.push(Group {
                        period: col.period,
                        source_id: e.source_id.clone(),
                        count: r,
                    });
                    source_vertical.push(policy);
                }
            }
            let r = e.ranks.get(d + 1);
            if r > 0 {
                targets.push(Group {
                    period: col.period,
                    source_id: e.source_id.clone(),
                    count: r,
                });
            }
        }
    }

    let allowed = sources
        .iter()
        .zip(&source_vertical)
        .map(|(s, &policy)| {
            targets
                .iter()
                .map(|t| {
                    if t.period.is_positive() {
                        t.period < s.period
                            || (t.period == s.period && policy == VerticalPolicy::Flexible)
                    } else {
                        // Constant-orbit target of component t.source_id in
                        // degree d+1.
                        let comp = spec.component(&t.source_id);
                        if unstable_only {
                            let stable = comp
                                .and_then(index::first_critical_time)
                                .map_or(false, |l| s.period < l);
                            if stable {
                                return false;
                            }
                        }
                        if let Some(n) = unit_pillar {
                            if d + 1 == 0 && s.period != Period::integer(n) {
                                return false;
                            }
                        }
                        for c in constraints {
                            if let ExternalConstraint::BlockTopClass { column, degree } = c {
                                if s.period == *column && *degree == d + 1 {
                                    return false;
                                }
                            }
                        }
                        true
                    }
                })
                .collect()
        })
        .collect();

    Ok(MatchingInstance {
        degree: d,
        sources,
        targets,
        allowed,
    })
}

/// Min and max, over feasible complete matchings (every source killed), of
/// the number of constant-orbit targets matched by sources of period ≤ λ.
/// `None` if no feasible matching exists.
pub fn matching_min_max(inst: &MatchingInstance, lambda: Period) -> Option<(u64, u64)> {
    let min = extremal_count(inst, lambda, false)?;
    let max = extremal_count(inst, lambda, true)?;
    Some((min, max))
}

fn extremal_count(inst: &MatchingInstance, lambda: Period, maximize: bool) -> Option<u64> {
    // Node layout: 0 = source, 1 = sink, 2.. = source groups, then targets.
    let ns = inst.sources.len();
    let nt = inst.targets.len();
    let mut mcmf = Mcmf::new(2 + ns + nt);
    for (i, g) in inst.sources.iter().enumerate() {
        mcmf.add_edge(0, 2 + i, g.count as i64, 0);
    }
    for (j, g) in inst.targets.iter().enumerate() {
        mcmf.add_edge(2 + ns + j, 1, g.count as i64, 0);
    }
    for i in 0..ns {
        for j in 0..nt {
            if inst.allowed[i][j] {
                let cost = if inst.counted(i, j, lambda) {
                    if maximize {
                        -1
                    } else {
                        1
                    }
                } else {
                    0
                };
                mcmf.add_edge(2 + i, 2 + ns + j, inst.sources[i].count as i64, cost);
            }
        }
    }
    let (flow, cost) = mcmf.run(0, 1);
    if flow != inst.total_sources() as i64 {
        return None;
    }
    Some(cost.unsigned_abs())
}

/// Exhaustive-enumeration oracle for [`matching_min_max`]; exponential, only
/// for small randomized instances in tests.
pub fn matching_min_max_brute(inst: &MatchingInstance, lambda: Period) -> Option<(u64, u64)> {
    let mut remaining: Vec<u64> = inst.targets.iter().map(|g| g.count).collect();
    let mut best: Option<(u64, u64)> = None;
    let unit_sources: Vec<usize> = inst
        .sources
        .iter()
        .enumerate()
        .flat_map(|(i, g)| std::iter::repeat(i).take(g.count as usize))
        .collect();
    fn rec(
        inst: &MatchingInstance,
        lambda: Period,
        units: &[usize],
        k: usize,
        remaining: &mut Vec<u64>,
        counted: u64,
        best: &mut Option<(u64, u64)>,
    ) {
        if k == units.len() {
            *best = Some(match *best {
                None => (counted, counted),
                Some((lo, hi)) => (lo.min(counted), hi.max(counted)),
            });
            return;
        }
        let s = units[k];
        for t in 0..inst.targets.len() {
            if inst.allowed[s][t] && remaining[t] > 0 {
                remaining[t] -= 1;
                let add = inst.counted(s, t, lambda) as u64;
                rec(inst, lambda, units, k + 1, remaining, counted + add, best);
                remaining[t] += 1;
            }
        }
    }
    rec(inst, lambda, &unit_sources, 0, &mut remaining, 0, &mut best);
    best
}

// Successive-shortest-path min-cost max-flow with SPFA (costs are small and
// graphs tiny; no potentials needed).
struct Mcmf {
    n: usize,
    // edge: (to, cap, cost); paired with its reverse at index ^ 1.
    edges: Vec<(usize, i64, i64)>,
    adj: Vec<Vec<usize>>,
}

impl Mcmf {
    fn new(n: usize) -> Self {
        Mcmf {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, cap: i64, cost: i64) {
        self.adj[u].push(self.edges.len());
        self.edges.push((v, cap, cost));
        self.adj[v].push(self.edges.len());
        self.edges.push((u, 0, -cost));
    }

    fn run(&mut self, s: usize, t: usize) -> (i64, i64) {
        let mut flow = 0;
        let mut cost = 0;
        loop {
            // Bellman–Ford shortest augmenting path by cost.
            let mut dist = vec![i64::MAX; self.n];
            let mut prev_edge = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut changed = true;
            while changed {
                changed = false;
                for u in 0..self.n {
                    if dist[u] == i64::MAX {
                        continue;
                    }
                    for &ei in &self.adj[u] {
                        let (v, cap, c) = self.edges[ei];
                        if cap > 0 && dist[u] + c < dist[v] {
                            dist[v] = dist[u] + c;
                            prev_edge[v] = ei;
                            changed = true;
                        }
                    }
                }
            }
            if dist[t] == i64::MAX {
                return (flow, cost);
            }
            // Bottleneck along the path.
            let mut push = i64::MAX;
            let mut v = t;
            while v != s {
                let ei = prev_edge[v];
                push = push.min(self.edges[ei].1);
                v = self.edges[ei ^ 1].0;
            }
            let mut v = t;
            while v != s {
                let ei = prev_edge[v];
                self.edges[ei].1 -= push;
                self.edges[ei ^ 1].1 += push;
                v = self.edges[ei ^ 1].0;
            }
            flow += push;
            cost += push * dist[t];
        }
    }
}

// ---------------------------------------------------------------------------
// Filtration report
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportMode {
    Exact,
    BoundsOnly,
}

/// The interval of cumulative killed constant-orbit rank in one degree at one
/// critical period.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Cell {
    pub min: u64,
    pub max: u64,
}

impl Cell {
    pub fn determined(&self) -> bool {
        self.min == self.max
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodRow {
    pub period: Period,
    /// Cumulative killed rank per total degree of H*(Y).
    pub by_degree: BTreeMap<i64, Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub spec_name: String,
    pub mode: ReportMode,
    pub rows: Vec<PeriodRow>,
}

impl FiltrationReport {
    pub fn row(&self, period: Period) -> Option<&PeriodRow> {
        self.rows.iter().find(|r| r.period == period)
    }

    /// The cumulative cell at the last critical period ≤ `period`.
    pub fn cell_at(&self, period: Period, degree: i64) -> Cell {
        self.rows
            .iter()
            .rev()
            .find(|r| r.period <= period)
            .and_then(|r| r.by_degree.get(&degree).copied())
            .unwrap_or(Cell { min: 0, max: 0 })
    }
}

/// Solves the filtration bookkeeping over the page's window.
///
/// Exact mode (even H*(Y)): per odd degree d, min/max over feasible complete
/// matchings of the constant-orbit rank in degree d+1 killed by period ≤ λ.
/// Bounds-only mode (odd classes present): conservation bounds — killed rank
/// in degree e at prefix λ lies between max(0, H^e − HF_λ(e)) and
/// min(H^e, page rank in degree e−1 over (0, λ]).
pub fn solve_filtration(
    spec: &ManifoldSpec,
    page: &E1Page,
    constraints: &[ExternalConstraint],
) -> Result<FiltrationReport, SolverError> {
    assert!(
        page.has_zero_column,
        "solve_filtration needs the page assembled with the constant-orbit column"
    );
    let hy = total_cohomology(spec);
    let exact = hy.is_even_supported();

    let mut critical: Vec<Period> = index::critical_times(spec, page.lambda_max)
        .into_iter()
        .filter(|ct| !ct.families.is_empty() || ct.period.is_integer())
        .map(|ct| ct.period)
        .collect();
    // Integer pillars are always critical rows, even with no weight of that
    // reciprocal (they carry the Σ column).
    let mut n = 1;
    while Period::integer(n) <= page.lambda_max {
        if !critical.contains(&Period::integer(n)) {
            critical.push(Period::integer(n));
        }
        n += 1;
    }
    critical.sort();

    let full_at = constraints.iter().find_map(|c| match c {
        ExternalConstraint::FiltrationFullAt(l) => Some(*l),
        _ => None,
    });

    let mut rows: Vec<PeriodRow> = Vec::new();
    if exact {
        // One matching problem per odd source degree.
        let mut instances: BTreeMap<i64, MatchingInstance> = BTreeMap::new();
        for e in hy.support().collect::<Vec<_>>() {
            instances.insert(e - 1, build_instance(spec, page, constraints, e - 1)?);
        }
        // Feasibility check once, with the full window available.
        for (d, inst) in &instances {
            if matching_min_max(inst, page.lambda_max).is_none() {
                return Err(SolverError::Infeasible {
                    degree: *d,
                    unmatched: inst.total_sources(),
                });
            }
        }
        for &lambda in &critical {
            let mut by_degree = BTreeMap::new();
            for (d, inst) in &instances {
                let (min, max) =
                    matching_min_max(inst, lambda).expect("feasibility checked above");
                by_degree.insert(d + 1, Cell { min, max });
            }
            rows.push(PeriodRow {
                period: lambda,
                by_degree,
            });
        }
    } else {
        for &lambda in &critical {
            let generic = index::lambda_plus(spec, lambda);
            let hf = convergence_target(spec, generic)?;
            let mut by_degree = BTreeMap::new();
            for (e, r) in hy.iter() {
                let lower = r.saturating_sub(hf.get(e));
                let upper = r.min(page.rank_up_to(lambda, e - 1));
                by_degree.insert(
                    e,
                    Cell {
                        min: lower.min(upper),
                        max: upper.max(lower),
                    },
                );
            }
            rows.push(PeriodRow {
                period: lambda,
                by_degree,
            });
        }
    }

    if let Some(full) = full_at {
        for row in &mut rows {
            if row.period >= full {
                for (e, r) in hy.iter() {
                    row.by_degree.insert(e, Cell { min: r, max: r });
                }
            }
        }
    }

    Ok(FiltrationReport {
        spec_name: spec.name.clone(),
        mode: if exact {
            ReportMode::Exact
        } else {
            ReportMode::BoundsOnly
        },
        rows,
    })
}

/// The two-column consistency check at one outer period T: there must exist
/// c_d ≥ 0 with `HF(T⁺)_d = HF(T⁻)_d + column(T)_d − c_d − c_{d−1}`.
pub fn step_consistency(
    spec: &ManifoldSpec,
    page: &E1Page,
    t: Period,
) -> Result<Vec<Diagnostic>, SolverError> {
    let above = convergence_target(spec, index::lambda_plus(spec, t))?;
    let below = convergence_target(spec, index::lambda_minus(spec, t))?;
    let column = page.column(t).map(|c| c.total()).unwrap_or_default();

    let all_degrees: Vec<i64> = {
        let lo = [&above, &below, &column]
            .iter()
            .filter_map(|g| g.bottom_degree())
            .min()
            .unwrap_or(0);
        let hi = [&above, &below, &column]
            .iter()
            .filter_map(|g| g.top_degree())
            .max()
            .unwrap_or(0);
        (lo..=hi + 1).collect()
    };
    let mut c_prev: i64 = 0;
    for &d in &all_degrees {
        let c_d =
            below.get(d) as i64 + column.get(d) as i64 - above.get(d) as i64 - c_prev;
        if c_d < 0 {
            return Ok(vec![Diagnostic {
                severity: Severity::Error,
                subject: format!("T={t}"),
                message: format!(
                    "no nonnegative cancellation profile: c_{d} = {c_d} forced negative"
                ),
            }]);
        }
        c_prev = c_d;
    }
    if c_prev != 0 {
        return Ok(vec![Diagnostic {
            severity: Severity::Error,
            subject: format!("T={t}"),
            message: format!("cancellation profile does not close up (residual {c_prev})"),
        }]);
    }
    Ok(Vec::new())
}

/// One jump of the filtration with its attribution, when forced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttributedJump {
    pub period: Period,
    pub degree: i64,
    pub rank: u64,
    /// Component the killed classes belong to, when degree accounting forces
    /// a unique one.
    pub component: Option<String>,
}

/// Reads the exact-mode report as an ideal chain with component attribution:
/// a jump in degree e at period T is attributed when exactly one component
/// both carries constant-orbit classes in that degree and is T-unstable.
pub fn filtration_to_ideal_report(
    report: &FiltrationReport,
    spec: &ManifoldSpec,
) -> Vec<AttributedJump> {
    let mut out = Vec::new();
    let mut prev: BTreeMap<i64, u64> = BTreeMap::new();
    for row in &report.rows {
        for (&e, cell) in &row.by_degree {
            if !cell.determined() {
                continue;
            }
            let before = *prev.get(&e).unwrap_or(&0);
            if cell.min > before {
                let carriers: Vec<&str> = spec
                    .components
                    .iter()
                    .filter(|c| {
                        c.betti.get(e - index::morse_bott_index(c)) > 0
                            && index::first_critical_time(c).map_or(false, |l| row.period >= l)
                    })
                    .map(|c| c.id.as_str())
                    .collect();
                out.push(AttributedJump {
                    period: row.period,
                    degree: e,
                    rank: cell.min - before,
                    component: match carriers.as_slice() {
                        [only] => Some((*only).to_string()),
                        _ => None,
                    },
                });
            }
        }
        for (&e, cell) in &row.by_degree {
            if cell.determined() {
                prev.insert(e, cell.min);
            }
        }
    }
    out
}
