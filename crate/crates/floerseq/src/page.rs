//! E1-page assembly and its structural laws: time-1 periodicity, central
//! symmetry of the fractional sub-block, support bounds, and the
//! pillar/block taxonomy with the window bound beyond which no column can
//! reach the 0-pillar.

use num_rational::Ratio;
use serde::Serialize;

use crate::graded::{self, GradedError};
use crate::index::{self, IndexError, Period};
use crate::model::{
    total_cohomology, Diagnostic, GradedRanks, ManifoldSpec, Severity, SliceMode,
};

/// One summand of a column, attributed to the fixed component or torsion
/// family it comes from. Ranks are indexed by total degree and carry the
/// shifted convention H*(B)[−μ(B)] — the bottom class of an entry sits at
/// degree μ(B).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnEntry {
    pub source_id: String,
    pub ranks: GradedRanks,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Column {
    pub period: Period,
    pub entries: Vec<ColumnEntry>,
}

impl Column {
    /// Sum of all entries, forgetting attribution.
    pub fn total(&self) -> GradedRanks {
        self.entries
            .iter()
            .fold(GradedRanks::new(), |acc, e| acc.sum(&e.ranks))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E1Page {
    pub spec_name: String,
    pub lambda_max: Period,
    pub has_zero_column: bool,
    /// Period-sorted; includes the 0-column first when present.
    pub columns: Vec<Column>,
}

impl E1Page {
    pub fn column(&self, period: Period) -> Option<&Column> {
        self.columns.iter().find(|c| c.period == period)
    }

    /// Total page rank in `degree` over all columns with 0 < period ≤ λ.
    pub fn rank_up_to(&self, lambda: Period, degree: i64) -> u64 {
        self.columns
            .iter()
            .filter(|c| c.period.is_positive() && c.period <= lambda)
            .map(|c| c.total().get(degree))
            .sum()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PageError {
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// H*(Σ) of the spec (derived via Poincaré–Lefschetz duality unless supplied
/// explicitly) — the content of every integer-period column.
pub fn sigma_cohomology(spec: &ManifoldSpec) -> Result<GradedRanks, GradedError> {
    match &spec.slice_mode {
        SliceMode::Explicit(g) => Ok(g.clone()),
        SliceMode::Derived => {
            graded::slice_cohomology(&total_cohomology(spec), spec.dim, spec.intersection_form)
        }
    }
}

/// Assembles the E1-page over the window (0, λ_max], optionally with the
/// constant-orbit 0-column (= H*(Y), attributed per fixed component).
///
/// Fractional columns at an outer period T = k/m hold one entry per m-family,
/// each `H*(B_{T,β})[−μ(B_{T,β})]`; integer columns hold the single entry
/// `H*(Σ)[2Nμ]`.
pub fn assemble_e1(
    spec: &ManifoldSpec,
    lambda_max: Period,
    include_zero_column: bool,
) -> Result<E1Page, PageError> {
    let mut columns = Vec::new();

    if include_zero_column {
        let entries = spec
            .components
            .iter()
            .map(|c| ColumnEntry {
                source_id: c.id.clone(),
                ranks: graded::shift_down(&c.betti, -index::morse_bott_index(c)),
            })
            .collect();
        columns.push(Column {
            period: Period::zero(),
            entries,
        });
    }

    // Fractional (outer) columns.
    for ct in index::critical_times(spec, lambda_max) {
        if ct.families.is_empty() || ct.period.is_integer() {
            continue;
        }
        let mut entries = Vec::new();
        for fid in &ct.families {
            let fam = spec.family(fid).expect("validated spec");
            let betti = graded::family_slice_betti(spec, fam)?;
            let grading = index::slice_grading(spec, fam, ct.period)?;
            entries.push(ColumnEntry {
                source_id: fid.clone(),
                ranks: graded::shift_down(&betti, -grading),
            });
        }
        columns.push(Column {
            period: ct.period,
            entries,
        });
    }

    // Integer pillars.
    let sigma = sigma_cohomology(spec)?;
    let mut n = 1i64;
    while Ratio::from_integer(n) <= lambda_max.value() {
        let grading = index::integer_slice_grading(spec, n)?;
        columns.push(Column {
            period: Period::integer(n),
            entries: vec![ColumnEntry {
                source_id: "Sigma".into(),
                ranks: graded::shift_down(&sigma, -grading),
            }],
        });
        n += 1;
    }

    columns.sort_by_key(|c| c.period);
    Ok(E1Page {
        spec_name: spec.name.clone(),
        lambda_max,
        has_zero_column: include_zero_column,
        columns,
    })
}

/// Fills the page out to `up_to` by the time-1 periodicity law: the column at
/// T + N equals the column at T with all degrees shifted down by 2Nμ.
///
/// The input page must cover (0, 1].
pub fn extend_by_periodicity(
    page: &E1Page,
    spec: &ManifoldSpec,
    up_to: Period,
) -> Result<E1Page, PageError> {
    assert!(
        page.lambda_max >= Period::integer(1),
        "extend_by_periodicity needs a page covering (0, 1]"
    );
    let mu = index::maslov_index(spec)?;
    let mut columns: Vec<Column> = page
        .columns
        .iter()
        .filter(|c| c.period <= up_to)
        .cloned()
        .collect();
    for c in &page.columns {
        if !c.period.is_positive() || c.period > Period::integer(1) {
            continue;
        }
        let mut n = 1i64;
        loop {
            let target = Period::from_ratio(c.period.value() + Ratio::from_integer(n));
            if target > up_to {
                break;
            }
            if columns.iter().all(|existing| existing.period != target) {
                columns.push(Column {
                    period: target,
                    entries: c
                        .entries
                        .iter()
                        .map(|e| ColumnEntry {
                            source_id: e.source_id.clone(),
                            ranks: graded::shift_down(&e.ranks, 2 * n * mu),
                        })
                        .collect(),
                });
            }
            n += 1;
        }
    }
    columns.sort_by_key(|c| c.period);
    Ok(E1Page {
        spec_name: page.spec_name.clone(),
        lambda_max: up_to,
        has_zero_column: page.has_zero_column,
        columns,
    })
}

/// Central symmetry of the fractional sub-block (characteristic 0): for each
/// pair of non-integer periods T and 1 − T in (0, 1), the (degree, rank) data
/// must correspond under the degree reflection d ↦ 2·dim − 1 − 2μ − d.
pub fn verify_central_symmetry(page: &E1Page, spec: &ManifoldSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let Ok(mu) = index::maslov_index(spec) else {
        return out;
    };
    let center2 = 2 * spec.dim as i64 - 1 - 2 * mu;
    for c in &page.columns {
        if c.period.is_integer()
            || !c.period.is_positive()
            || c.period.value() >= Ratio::from_integer(1)
        {
            continue;
        }
        let mirror_period = Period::from_ratio(Ratio::from_integer(1) - c.period.value());
        let mirror_total = page
            .column(mirror_period)
            .map(|m| m.total())
            .unwrap_or_default();
        let reflected = GradedRanks::from_pairs(c.total().iter().map(|(d, r)| (center2 - d, r)));
        if reflected != mirror_total {
            out.push(Diagnostic {
                severity: Severity::Error,
                subject: format!("T={}", c.period),
                message: format!(
                    "central symmetry fails against T={mirror_period}: reflected {reflected:?} vs {mirror_total:?}"
                ),
            });
        }
    }
    out
}

/// Support bounds for every column: N-pillars within [−2Nμ, 2·dim − 1 − 2Nμ],
/// N-blocks within [2·dim − 2(N+1)μ − t, t − 1 − 2Nμ] with t the top degree
/// of H*(Y). Requires the compatibly-weighted hypothesis.
pub fn support_bounds(page: &E1Page, spec: &ManifoldSpec) -> Vec<Diagnostic> {
    if !index::compatibly_weighted(spec) {
        return vec![Diagnostic {
            severity: Severity::Note,
            subject: String::new(),
            message: "support-bound hypothesis not met: spec is not compatibly weighted; check skipped"
                .into(),
        }];
    }
    let Ok(mu) = index::maslov_index(spec) else {
        return Vec::new();
    };
    let t = total_cohomology(spec).top_degree().unwrap_or(0);
    let dim = spec.dim as i64;
    let mut out = Vec::new();
    for c in &page.columns {
        if !c.period.is_positive() {
            continue;
        }
        let total = c.total();
        let (Some(lo), Some(hi)) = (total.bottom_degree(), total.top_degree()) else {
            continue;
        };
        let (lo_bound, hi_bound) = if c.period.is_integer() {
            let n = c.period.numer();
            (-2 * n * mu, 2 * dim - 1 - 2 * n * mu)
        } else {
            let n = c.period.floor();
            (2 * dim - 2 * (n + 1) * mu - t, t - 1 - 2 * n * mu)
        };
        if lo < lo_bound || hi > hi_bound {
            out.push(Diagnostic {
                severity: Severity::Error,
                subject: format!("T={}", c.period),
                message: format!(
                    "support [{lo}, {hi}] exceeds the bound [{lo_bound}, {hi_bound}]"
                ),
            });
        }
    }
    out
}

/// Pillar/block membership of one column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnClass {
    /// Integer period N ≥ 1 (a whole copy of Σ).
    Pillar(i64),
    /// Fractional period with floor N.
    Block(i64),
}

pub fn classify(page: &E1Page) -> Vec<(Period, ColumnClass)> {
    page.columns
        .iter()
        .filter(|c| c.period.is_positive())
        .map(|c| {
            let class = if c.period.is_integer() {
                ColumnClass::Pillar(c.period.numer())
            } else {
                ColumnClass::Block(c.period.floor())
            };
            (c.period, class)
        })
        .collect()
}

/// The window beyond which no column can reach the 0-pillar: the max of the
/// last pillar that can hit it (N ≤ ⌈dim/μ⌉) and the last block that can
/// (blocks with N ≤ ⌊t/2μ⌋, i.e. outer periods below ⌊t/2μ⌋ + 1).
pub fn required_window(spec: &ManifoldSpec) -> Result<Period, PageError> {
    let mu = index::maslov_index(spec)?;
    let t = total_cohomology(spec).top_degree().unwrap_or(0);
    let dim = spec.dim as i64;
    let pillar_bound = Period::integer((dim + mu - 1) / mu);
    let block_bound = Ratio::from_integer(t.div_euclid(2 * mu) + 1);
    let last_outer = index::critical_times(spec, Period::from_ratio(block_bound))
        .into_iter()
        .filter(|ct| !ct.families.is_empty() && ct.period.value() < block_bound)
        .map(|ct| ct.period)
        .max();
    Ok(last_outer.map_or(pillar_bound, |p| p.max(pillar_bound)))
}
