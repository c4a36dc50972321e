//! The S¹-equivariant layer: columns via quotient cohomology, the collapse
//! check, the global rank identity relating H*(Y) ⊗ F to the equivariant
//! columns, the triangular solve for EH*(Σ), and equivariant filtration
//! bounds with the documented u-rule.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::graded::{self, GradedError};
use crate::index::{self, IndexError, Period};
use crate::model::{
    total_cohomology, Diagnostic, GradedRanks, ManifoldSpec, Severity, TorsionFamily,
    TorsionStructure,
};
use crate::page::{Column, ColumnEntry, E1Page};
use crate::solver::{
    matching_min_max, Cell, FiltrationReport, Group, MatchingInstance, PeriodRow, ReportMode,
};

#[derive(Debug, thiserror::Error)]
pub enum EquivariantError {
    #[error("family {0} is in explicit mode without quotient Betti data")]
    MissingQuotientData(String),
    #[error("equivariant slice solve produced a negative rank in degree {0} (inconsistent spec)")]
    NegativeRank(i64),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Solver(#[from] crate::solver::SolverError),
}

/// H*(B/S¹) of one torsion family's slice: the projectivization of the
/// normal bundle in bundle mode, or explicitly supplied quotient data.
pub fn family_quotient_betti(
    spec: &ManifoldSpec,
    fam: &TorsionFamily,
) -> Result<GradedRanks, EquivariantError> {
    match &fam.structure {
        TorsionStructure::Bundle { core_betti, .. } => {
            // Fibrewise, S^{2r−1}/S¹ = CP^{r−1} with r the fibre dimension of
            // Y_{m,β} over its compact core (cf. `family_slice_betti`).
            let rank = index::family_rank(spec, fam)? as i64;
            let min = spec
                .component(&fam.min_member)
                .ok_or(IndexError::UnknownComponent(fam.min_member.clone()))?;
            let core_dim = core_betti.top_degree().unwrap_or(0) / 2;
            let r = min.dimc as i64 + rank - core_dim;
            Ok(graded::leray_hirsch_projectivization(core_betti, r as u64))
        }
        TorsionStructure::Explicit { quotient_betti, .. } => quotient_betti
            .clone()
            .ok_or_else(|| EquivariantError::MissingQuotientData(fam.id.clone())),
    }
}

/// The equivariant column EH*(B_{T,β}) = H*(B/S¹)[−1 − μ(B_{T,β})]: quotient
/// degree q lands in total degree q + 1 + μ(B).
pub fn equivariant_column(
    spec: &ManifoldSpec,
    fam: &TorsionFamily,
    t: Period,
) -> Result<GradedRanks, EquivariantError> {
    let quotient = family_quotient_betti(spec, fam)?;
    let grading = index::slice_grading(spec, fam, t)?;
    Ok(graded::shift_down(&quotient, -1 - grading))
}

/// LHS of the rank identity: rank of ⊕_{i≥0} H*(Y)[2i] in one degree.
fn tower_rank(hy: &GradedRanks, degree: i64) -> u64 {
    let top = hy.top_degree().unwrap_or(0);
    let mut total = 0;
    let mut d = degree;
    while d <= top {
        total += hy.get(d);
        d += 2;
    }
    total
}

/// Torsion part of the identity's RHS: per degree, the rank of
/// ⊕ H*(B_{p,β}/S¹)[−2 − μ(B_{p,β})] over all fractional periods,
/// periodicity-extended downward until every contribution is below `cutoff`.
fn torsion_display_ranks(
    spec: &ManifoldSpec,
    cutoff: i64,
) -> Result<GradedRanks, EquivariantError> {
    let mu = index::maslov_index(spec)?;
    let mut out = GradedRanks::new();
    for fam in &spec.families {
        let quotient = family_quotient_betti(spec, fam)?;
        let Some(q_top) = quotient.top_degree() else {
            continue;
        };
        for k in 1..fam.m {
            if num_integer::gcd(k, fam.m) != 1 {
                continue;
            }
            let base = Period::new(k, fam.m);
            let base_grading = index::slice_grading(spec, fam, base)?;
            let mut n = 0i64;
            loop {
                let grading = base_grading - 2 * n * mu;
                if q_top + 2 + grading < cutoff {
                    break;
                }
                for (q, r) in quotient.iter() {
                    out.add(q + 2 + grading, r);
                }
                n += 1;
            }
        }
    }
    Ok(out)
}

/// Solves the rank identity for the unknown EH*(Σ) by back-substitution from
/// the top degree (the pillar shifts −1 + 2Nμ are strictly decreasing in N,
/// so each degree determines one unknown). Returns EH*(Σ) in degrees ≥
/// `cutoff`.
pub fn solve_equivariant_slice(
    spec: &ManifoldSpec,
    cutoff: i64,
) -> Result<GradedRanks, EquivariantError> {
    let mu = index::maslov_index(spec)?;
    let hy = total_cohomology(spec);
    let torsion = torsion_display_ranks(spec, cutoff)?;
    let e_start = hy
        .top_degree()
        .unwrap_or(0)
        .max(torsion.top_degree().unwrap_or(0));

    let mut eh: BTreeMap<i64, i64> = BTreeMap::new();
    let mut e = e_start;
    while e >= cutoff + 1 - 2 * mu {
        // LHS(e) = torsion(e) + Σ_{N≥1} EH(e − 1 + 2Nμ); the N = 1 term is
        // the unknown, all higher-N terms were solved earlier.
        let mut known: i64 = 0;
        let mut n = 2i64;
        loop {
            let arg = e - 1 + 2 * n * mu;
            if arg > e_start - 1 + 2 * mu {
                break;
            }
            known += eh.get(&arg).copied().unwrap_or(0);
            n += 1;
        }
        let value = tower_rank(&hy, e) as i64 - torsion.get(e) as i64 - known;
        let x = e - 1 + 2 * mu;
        if value < 0 {
            return Err(EquivariantError::NegativeRank(x));
        }
        eh.insert(x, value);
        e -= 1;
    }
    Ok(GradedRanks::from_pairs(
        eh.into_iter()
            .filter(|&(d, v)| d >= cutoff && v > 0)
            .map(|(d, v)| (d, v as u64)),
    ))
}

/// Verifies the rank identity
/// `⊕_{i≥0} H*(Y)[2i] = torsion terms ⊕ ⊕_{N≥1} EH*(Σ)[−1 + 2Nμ]`
/// degree-by-degree down to `cutoff`, with EH*(Σ) from the triangular solve.
pub fn eq27_identity(
    spec: &ManifoldSpec,
    cutoff: i64,
) -> Result<Vec<Diagnostic>, EquivariantError> {
    let mu = index::maslov_index(spec)?;
    let hy = total_cohomology(spec);
    // Solve with enough headroom that every pillar term down to `cutoff` is
    // available.
    let eh = match solve_equivariant_slice(spec, cutoff - 1) {
        Ok(eh) => eh,
        Err(EquivariantError::NegativeRank(d)) => {
            return Ok(vec![Diagnostic {
                severity: Severity::Error,
                subject: String::new(),
                message: format!("rank identity forces a negative EH*(Σ) rank in degree {d}"),
            }])
        }
        Err(e) => return Err(e),
    };
    let torsion = torsion_display_ranks(spec, cutoff)?;
    let e_top = hy
        .top_degree()
        .unwrap_or(0)
        .max(torsion.top_degree().unwrap_or(0));
    let mut out = Vec::new();
    for e in cutoff..=e_top {
        let lhs = tower_rank(&hy, e);
        let mut rhs = torsion.get(e);
        let mut n = 1i64;
        while e - 1 + 2 * n * mu <= eh.top_degree().unwrap_or(i64::MIN) {
            rhs += eh.get(e - 1 + 2 * n * mu);
            n += 1;
        }
        if lhs != rhs {
            out.push(Diagnostic {
                severity: Severity::Error,
                subject: format!("degree {e}"),
                message: format!("rank identity fails: {lhs} ≠ {rhs}"),
            });
        }
    }
    Ok(out)
}

/// The per-column summands of the rank identity in its display convention
/// (degrees q + 2 + μ(B_T)), for comparison with the paper's printed lists.
pub fn eq27_terms(
    spec: &ManifoldSpec,
    lambda_max: Period,
    cutoff: i64,
) -> Result<Vec<(Period, GradedRanks)>, EquivariantError> {
    let mu = index::maslov_index(spec)?;
    let mut out = Vec::new();
    for ct in index::critical_times(spec, lambda_max) {
        if ct.period.is_integer() {
            continue;
        }
        for fid in &ct.families {
            let fam = spec.family(fid).expect("validated spec");
            let quotient = family_quotient_betti(spec, fam)?;
            let grading = index::slice_grading(spec, fam, ct.period)?;
            out.push((
                ct.period,
                GradedRanks::from_pairs(quotient.iter().map(|(q, r)| (q + 2 + grading, r))),
            ));
        }
    }
    let eh = solve_equivariant_slice(spec, cutoff)?;
    let mut n = 1i64;
    while Ratio::from_integer(n) <= lambda_max.value() {
        out.push((
            Period::integer(n),
            GradedRanks::from_pairs(eh.iter().map(|(b, r)| (b + 1 - 2 * n * mu, r))),
        ));
        n += 1;
    }
    out.sort_by_key(|(p, _)| *p);
    Ok(out)
}

/// Assembles the equivariant page: fractional columns per family, pillar
/// columns EH*(Σ)[2Nμ].
pub fn assemble_equivariant(
    spec: &ManifoldSpec,
    lambda_max: Period,
    cutoff: i64,
) -> Result<E1Page, EquivariantError> {
    let mu = index::maslov_index(spec)?;
    let mut columns = Vec::new();
    for ct in index::critical_times(spec, lambda_max) {
        if ct.families.is_empty() || ct.period.is_integer() {
            continue;
        }
        let mut entries = Vec::new();
        for fid in &ct.families {
            let fam = spec.family(fid).expect("validated spec");
            entries.push(ColumnEntry {
                source_id: fid.clone(),
                ranks: equivariant_column(spec, fam, ct.period)?,
            });
        }
        columns.push(Column {
            period: ct.period,
            entries,
        });
    }
    let eh = solve_equivariant_slice(spec, cutoff)?;
    let mut n = 1i64;
    while Ratio::from_integer(n) <= lambda_max.value() {
        columns.push(Column {
            period: Period::integer(n),
            entries: vec![ColumnEntry {
                source_id: "Sigma".into(),
                ranks: graded::shift_down(&eh, 2 * n * mu),
            }],
        });
        n += 1;
    }
    columns.sort_by_key(|c| c.period);
    Ok(E1Page {
        spec_name: spec.name.clone(),
        lambda_max,
        has_zero_column: false,
        columns,
    })
}

/// The collapse criterion: the equivariant page carries no differential as
/// soon as every column lies in odd total degrees.
pub fn check_collapse(page_eq: &E1Page) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for c in &page_eq.columns {
        for e in &c.entries {
            if !e.ranks.is_odd_supported() {
                out.push(Diagnostic {
                    severity: Severity::Error,
                    subject: e.source_id.clone(),
                    message: format!(
                        "equivariant column at T={} has even-degree support {:?}",
                        c.period, e.ranks
                    ),
                });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Equivariant filtration bounds
// ---------------------------------------------------------------------------

/// One constant-orbit target tower class in the equivariant model: the
/// H^b(F_α) generator at u-power `level`, sitting in total degree
/// `u0_degree − 2·level`.
#[derive(Clone, Debug)]
struct TowerClass {
    component: String,
    u0_degree: i64,
    level: i64,
}

/// Equivariant filtration intervals via the same matching model, run against
/// H*(Y) ⊗ F. With `use_u_rule`, in a column whose quotient spans ≥ 2
/// degrees the u-action links classes two degrees apart, so a class whose
/// upper neighbour's targets are known is forced one u-level below them.
pub fn equivariant_filtration_bounds(
    spec: &ManifoldSpec,
    lambda_max: Period,
    cutoff: i64,
    use_u_rule: bool,
) -> Result<FiltrationReport, EquivariantError> {
    let page = assemble_equivariant(spec, lambda_max, cutoff)?;
    let hy = total_cohomology(spec);

    let lowest_source = page
        .columns
        .iter()
        .flat_map(|c| c.entries.iter().filter_map(|e| e.ranks.bottom_degree()))
        .min()
        .unwrap_or(0);

    // Tower targets, deep enough that every source has candidates.
    let mut towers: Vec<TowerClass> = Vec::new();
    for c in &spec.components {
        let mu_c = index::morse_bott_index(c);
        for (b, r) in c.betti.iter() {
            for _ in 0..r {
                let mut level = 0i64;
                while b + mu_c - 2 * level >= lowest_source - 1 {
                    towers.push(TowerClass {
                        component: c.id.clone(),
                        u0_degree: b + mu_c,
                        level,
                    });
                    level += 1;
                }
            }
        }
    }

    // Build one instance per odd source degree.
    let degrees: Vec<i64> = {
        let mut set = std::collections::BTreeSet::new();
        for c in &page.columns {
            for e in &c.entries {
                for (d, _) in e.ranks.iter() {
                    set.insert(d);
                }
            }
        }
        set.into_iter().collect()
    };

    let critical: Vec<Period> = {
        let mut v: Vec<Period> = page.columns.iter().map(|c| c.period).collect();
        v.dedup();
        v
    };

    // Pre-compute quotient span per (period, entry) for the u-rule.
    let wide_quotient = |source_id: &str| -> bool {
        if source_id == "Sigma" {
            return page
                .columns
                .iter()
                .find(|c| c.period == Period::integer(1))
                .map_or(false, |c| c.entries[0].ranks.support().count() >= 2);
        }
        spec.family(source_id)
            .and_then(|f| family_quotient_betti(spec, f).ok())
            .map_or(false, |q| q.support().count() >= 2)
    };

    let mut rows: Vec<PeriodRow> = critical
        .iter()
        .map(|&p| PeriodRow {
            period: p,
            by_degree: BTreeMap::new(),
        })
        .collect();

    for &d in &degrees {
        // Sources: page entries at degree d. Targets: tower classes at d+1,
        // grouped by (component, u0_degree, level).
        let mut sources: Vec<Group> = Vec::new();
        for c in &page.columns {
            for e in &c.entries {
                let r = e.ranks.get(d);
                if r > 0 {
                    sources.push(Group {
                        period: c.period,
                        source_id: e.source_id.clone(),
                        count: r,
                    });
                }
            }
        }
        if sources.is_empty() {
            continue;
        }
        let mut target_groups: BTreeMap<(String, i64, i64), u64> = BTreeMap::new();
        for tc in &towers {
            if tc.u0_degree - 2 * tc.level == d + 1 {
                *target_groups
                    .entry((tc.component.clone(), tc.u0_degree, tc.level))
                    .or_insert(0) += 1;
            }
        }
        let targets: Vec<(String, i64, i64, u64)> = target_groups
            .into_iter()
            .map(|((c, u0, l), n)| (c, u0, l, n))
            .collect();

        // u-rule: admissible (component, u0_degree) pairs for each source,
        // derived from its upper neighbour's options one u-level up.
        let allowed: Vec<Vec<bool>> = sources
            .iter()
            .map(|s| {
                let forced_towers: Option<Vec<(String, i64)>> = if use_u_rule
                    && wide_quotient(&s.source_id)
                {
                    let col = page.columns.iter().find(|c| c.period == s.period).unwrap();
                    let upper_exists = col
                        .entries
                        .iter()
                        .any(|e| e.source_id == s.source_id && e.ranks.get(d + 2) > 0);
                    if upper_exists {
                        // The upper class kills in degree d+3; this class is
                        // u times it, so it kills one u-level below the same
                        // towers.
                        Some(
                            towers
                                .iter()
                                .filter(|tc| tc.u0_degree - 2 * tc.level == d + 3)
                                .map(|tc| (tc.component.clone(), tc.u0_degree))
                                .collect(),
                        )
                    } else {
                        None
                    }
                } else {
                    None
                };
                targets
                    .iter()
                    .map(|(comp, u0, level, _)| match &forced_towers {
                        None => true,
                        Some(fs) => {
                            *level >= 1 && fs.iter().any(|(c, u)| c == comp && u == u0)
                        }
                    })
                    .collect()
            })
            .collect();

        let inst = MatchingInstance {
            degree: d,
            sources,
            targets: targets
                .iter()
                .map(|(comp, u0, level, n)| Group {
                    period: Period::zero(),
                    source_id: format!("{comp}@{u0}u^{level}"),
                    count: *n,
                })
                .collect(),
            allowed,
        };

        // Counted kills at prefix λ are u⁰-level tower classes; build the
        // report per u0_degree by restricting the count to level 0 targets.
        for row in rows.iter_mut() {
            for (ti, (_, u0, level, _)) in targets.iter().enumerate() {
                if *level != 0 {
                    continue;
                }
                let sub = restrict_counting(&inst, ti);
                if let Some((min, max)) = matching_min_max(&sub, row.period) {
                    let cell = row.by_degree.entry(*u0).or_insert(Cell { min: 0, max: 0 });
                    cell.min += min;
                    cell.max += max;
                }
            }
        }
    }

    // Clamp to the actual H*(Y) ranks and fill missing degrees.
    for row in &mut rows {
        for (e, r) in hy.iter() {
            let cell = row.by_degree.entry(e).or_insert(Cell { min: 0, max: 0 });
            cell.min = cell.min.min(r);
            cell.max = cell.max.min(r);
        }
        row.by_degree.retain(|e, _| hy.get(*e) > 0);
    }

    Ok(FiltrationReport {
        spec_name: spec.name.clone(),
        mode: ReportMode::BoundsOnly,
        rows,
    })
}

/// A copy of the instance where only flow into target `ti` (from any period ≤
/// λ, handled by `counted`) is counted: implemented by zeroing the column-0
/// marker on all other targets.
fn restrict_counting(inst: &MatchingInstance, ti: usize) -> MatchingInstance {
    let mut out = inst.clone();
    for (j, t) in out.targets.iter_mut().enumerate() {
        if j != ti {
            // A nonzero period marks the target as not counted.
            t.period = Period::new(1, 1_000_003);
        }
    }
    out
}
