//! Ingestion and emission: the external JSON schema for specs, grid renderers
//! for E1-pages (ascii, latex, json, csv), and the ideal-chain renderer for
//! filtration reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::index::Period;
use crate::model::{
    EulerProfile, FixedComponent, GradedRanks, IntersectionForm, ManifoldSpec, SliceMode,
    TorsionFamily, TorsionStructure, VerticalPolicy, WeightMultiset,
};
use crate::page::E1Page;
use crate::solver::{Cell, ExternalConstraint, FiltrationReport};
use crate::{index, model};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
}

// ---------------------------------------------------------------------------
// External schema
// ---------------------------------------------------------------------------
//
// The document layout differs slightly from the in-memory types: component
// weights are a single nonzero-weight map (the zero multiplicity is always
// dim_C F), families use `min`/`vertical`, and unknown keys are rejected
// everywhere.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    name: String,
    dim: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    csr_weight: Option<u64>,
    intersection_form: IntersectionForm,
    components: Vec<ComponentDoc>,
    #[serde(default)]
    torsion_families: Vec<FamilyDoc>,
    #[serde(default)]
    constraints: Vec<ExternalConstraint>,
    #[serde(default = "derived")]
    slice: SliceMode,
}

fn derived() -> SliceMode {
    SliceMode::Derived
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDoc {
    id: String,
    dimc: u64,
    betti: GradedRanks,
    weights: BTreeMap<i64, u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    m: i64,
    id: String,
    members: BTreeSet<String>,
    min: String,
    structure: StructureDoc,
    vertical: VerticalPolicy,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum StructureDoc {
    Bundle {
        core_betti: GradedRanks,
        euler: EulerProfile,
    },
    Explicit {
        slice_betti: GradedRanks,
        slice_grading: BTreeMap<Period, i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quotient_betti: Option<GradedRanks>,
    },
}

/// Parses a spec document, rejecting unknown keys and explicit zero weights.
pub fn parse_spec(document: &str) -> Result<ManifoldSpec, ParseError> {
    let doc: SpecDoc = serde_json::from_str(document)?;
    let mut components = Vec::new();
    for c in doc.components {
        if c.weights.contains_key(&0) {
            return Err(ParseError::Schema(format!(
                "component `{}`: zero weight must be dimc, not listed in `weights`",
                c.id
            )));
        }
        components.push(FixedComponent {
            weights: WeightMultiset {
                nonzero: c.weights,
                zero_mult: c.dimc,
            },
            id: c.id,
            dimc: c.dimc,
            betti: c.betti,
        });
    }
    let families = doc
        .torsion_families
        .into_iter()
        .map(|f| TorsionFamily {
            m: f.m,
            id: f.id,
            members: f.members,
            min_member: f.min,
            structure: match f.structure {
                StructureDoc::Bundle { core_betti, euler } => {
                    TorsionStructure::Bundle { core_betti, euler }
                }
                StructureDoc::Explicit {
                    slice_betti,
                    slice_grading,
                    quotient_betti,
                } => TorsionStructure::Explicit {
                    slice_betti,
                    slice_gradings: slice_grading,
                    quotient_betti,
                },
            },
            vertical_policy: f.vertical,
        })
        .collect();
    Ok(ManifoldSpec {
        name: doc.name,
        dim: doc.dim,
        csr_weight: doc.csr_weight,
        intersection_form: doc.intersection_form,
        components,
        families,
        constraints: doc.constraints,
        slice_mode: doc.slice,
    })
}

/// The canonical document form of a spec (the inverse of [`parse_spec`]).
pub fn spec_to_json(spec: &ManifoldSpec) -> String {
    let doc = SpecDoc {
        name: spec.name.clone(),
        dim: spec.dim,
        csr_weight: spec.csr_weight,
        intersection_form: spec.intersection_form,
        components: spec
            .components
            .iter()
            .map(|c| ComponentDoc {
                id: c.id.clone(),
                dimc: c.dimc,
                betti: c.betti.clone(),
                weights: c.weights.nonzero.clone(),
            })
            .collect(),
        torsion_families: spec
            .families
            .iter()
            .map(|f| FamilyDoc {
                m: f.m,
                id: f.id.clone(),
                members: f.members.clone(),
                min: f.min_member.clone(),
                structure: match &f.structure {
                    TorsionStructure::Bundle { core_betti, euler } => StructureDoc::Bundle {
                        core_betti: core_betti.clone(),
                        euler: euler.clone(),
                    },
                    TorsionStructure::Explicit {
                        slice_betti,
                        slice_gradings,
                        quotient_betti,
                    } => StructureDoc::Explicit {
                        slice_betti: slice_betti.clone(),
                        slice_grading: slice_gradings.clone(),
                        quotient_betti: quotient_betti.clone(),
                    },
                },
                vertical: f.vertical_policy,
            })
            .collect(),
        constraints: spec.constraints.clone(),
        slice: spec.slice_mode.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("spec serializes");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Page tables
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Ascii,
    Latex,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (ascii|latex|json|csv)")),
        }
    }
}

/// The figure layout: rows indexed by total degree descending, one column per
/// period ascending (the constant-orbit column labelled H*(Y)), blank cells
/// for rank 0, and the symmetry-center annotation as footer.
pub struct RenderedTable {
    pub headers: Vec<String>,
    /// (total degree, rank per column in header order).
    pub rows: Vec<(i64, Vec<u64>)>,
    pub footer: String,
}

pub fn tabulate_page(spec: &ManifoldSpec, page: &E1Page) -> RenderedTable {
    let headers = page
        .columns
        .iter()
        .map(|c| {
            if c.period.is_positive() {
                format!("H*(B_{})[-μ]", c.period)
            } else {
                "H*(Y)".to_string()
            }
        })
        .collect();
    let totals: Vec<GradedRanks> = page.columns.iter().map(|c| c.total()).collect();
    let degrees: BTreeSet<i64> = totals.iter().flat_map(|t| t.support()).collect();
    let rows = degrees
        .into_iter()
        .rev()
        .map(|d| (d, totals.iter().map(|t| t.get(d)).collect()))
        .collect();
    let footer = match index::maslov_index(spec) {
        Ok(mu) => {
            let center2 = 2 * spec.dim as i64 - 1 - 2 * mu;
            format!("symmetry center of the fractional block: degree {center2}/2")
        }
        Err(_) => String::new(),
    };
    RenderedTable {
        headers,
        rows,
        footer,
    }
}

pub fn render_page(spec: &ManifoldSpec, page: &E1Page, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(page).expect("page serializes");
            s.push('\n');
            s
        }
        Format::Ascii => ascii_table(&tabulate_page(spec, page)),
        Format::Latex => latex_table(&tabulate_page(spec, page)),
        Format::Csv => csv_table(&tabulate_page(spec, page)),
    }
}

fn ascii_table(t: &RenderedTable) -> String {
    let mut widths: Vec<usize> = t.headers.iter().map(|h| h.chars().count()).collect();
    for (_, cells) in &t.rows {
        for (j, &r) in cells.iter().enumerate() {
            if r > 0 {
                widths[j] = widths[j].max(r.to_string().len());
            }
        }
    }
    let deg_w = t
        .rows
        .iter()
        .map(|(d, _)| d.to_string().len())
        .max()
        .unwrap_or(1)
        .max(3);
    let mut out = String::new();
    let _ = write!(out, "{:>deg_w$}", "deg");
    for (h, w) in t.headers.iter().zip(&widths) {
        let pad = w - h.chars().count();
        let _ = write!(out, " | {h}{}", " ".repeat(pad));
    }
    out.push('\n');
    let total_w = deg_w + widths.iter().map(|w| w + 3).sum::<usize>();
    out.push_str(&"-".repeat(total_w));
    out.push('\n');
    for (d, cells) in &t.rows {
        let _ = write!(out, "{d:>deg_w$}");
        for (&r, w) in cells.iter().zip(&widths) {
            if r > 0 {
                let _ = write!(out, " | {r:>w$}");
            } else {
                let _ = write!(out, " | {:>w$}", "");
            }
        }
        out.push('\n');
    }
    if !t.footer.is_empty() {
        let _ = writeln!(out, "({})", t.footer);
    }
    out
}

fn latex_table(t: &RenderedTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\begin{{tabular}}{{r|{}}}", "c".repeat(t.headers.len()));
    let headers: Vec<String> = t
        .headers
        .iter()
        .map(|h| {
            let inner = h
                .replace("H*", "H^*")
                .replace("[-μ]", "[-\\mu]");
            format!("${inner}$")
        })
        .collect();
    let _ = writeln!(out, "  & {} \\\\ \\hline", headers.join(" & "));
    for (d, cells) in &t.rows {
        let body: Vec<String> = cells
            .iter()
            .map(|&r| if r > 0 { r.to_string() } else { String::new() })
            .collect();
        let _ = writeln!(out, "${d}$ & {} \\\\", body.join(" & "));
    }
    let _ = writeln!(out, "\\end{{tabular}}");
    if !t.footer.is_empty() {
        let _ = writeln!(out, "% {}", t.footer);
    }
    out
}

fn csv_table(t: &RenderedTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "degree,{}", t.headers.join(","));
    for (d, cells) in &t.rows {
        let body: Vec<String> = cells.iter().map(|r| r.to_string()).collect();
        let _ = writeln!(out, "{d},{}", body.join(","));
    }
    out
}

// ---------------------------------------------------------------------------
// Filtration reports
// ---------------------------------------------------------------------------

fn cell_term(degree: i64, cell: &Cell) -> Option<String> {
    if cell.max == 0 {
        return None;
    }
    Some(if cell.determined() {
        if cell.min == 1 {
            format!("K_{degree}")
        } else {
            format!("K_{degree}^{}", cell.min)
        }
    } else {
        format!("K_{degree}^[{},{}]", cell.min, cell.max)
    })
}

/// The filtration as a nested ideal chain `0 ⊂ F_1/3 = … ⊂ …`, one step per
/// critical period where some cell changed; undetermined cells use interval
/// exponents.
pub fn render_report(report: &FiltrationReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::from("period,degree,min,max\n");
            for row in &report.rows {
                for (d, cell) in &row.by_degree {
                    let _ = writeln!(out, "{},{d},{},{}", row.period, cell.min, cell.max);
                }
            }
            out
        }
        Format::Ascii | Format::Latex => {
            let mut steps: Vec<String> = vec!["0".into()];
            let mut prev: Option<&BTreeMap<i64, Cell>> = None;
            for row in &report.rows {
                if prev == Some(&row.by_degree) {
                    continue;
                }
                let terms: Vec<String> = row
                    .by_degree
                    .iter()
                    .filter_map(|(&d, c)| cell_term(d, c))
                    .collect();
                let body = if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join(" ⊕ ")
                };
                if steps.last().map(|s| s.split_once(" = ").map_or(s.as_str(), |(_, b)| b))
                    != Some(body.as_str())
                {
                    steps.push(format!("F_{} = {body}", row.period));
                }
                prev = Some(&row.by_degree);
            }
            let chain = steps.join(" ⊂ ");
            if format == Format::Latex {
                format!(
                    "${}$\n",
                    chain
                        .replace('⊂', "\\subset ")
                        .replace('⊕', "\\oplus ")
                )
            } else {
                format!("{chain}\n")
            }
        }
    }
}

/// Convenience: validate + page + report for one spec, as the CLI needs them.
pub fn full_pipeline(
    spec: &ManifoldSpec,
    window: Period,
) -> Result<(E1Page, FiltrationReport), String> {
    let diags = model::validate_spec(spec);
    if diags
        .iter()
        .any(|d| d.severity == model::Severity::Error)
    {
        return Err(diags
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("\n"));
    }
    let page = crate::page::assemble_e1(spec, window, true).map_err(|e| e.to_string())?;
    let report =
        crate::solver::solve_filtration(spec, &page, &spec.constraints).map_err(|e| e.to_string())?;
    Ok((page, report))
}
