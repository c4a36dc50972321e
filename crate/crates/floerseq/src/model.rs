//! Input model: the combinatorial description of a symplectic C*-manifold
//! (fixed components, weight multisets, torsion families) plus validation and
//! the total-cohomology assembly.
//!
//! Cohomology is represented only by ranks over an unnamed characteristic-0
//! field: every output of the calculator is rank data, so Novikov
//! coefficients are deliberately collapsed to rank equalities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::index::{self, Period};
use crate::solver::ExternalConstraint;

/// A finitely supported map from integer degree to positive rank — the
/// universal currency for (shifted, summed) cohomology groups.
///
/// Zero entries are never stored; `get` returns 0 off the support.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedRanks {
    entries: BTreeMap<i64, u64>,
}

impl GradedRanks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, u64)>>(pairs: I) -> Self {
        let mut g = Self::new();
        for (d, r) in pairs {
            g.add(d, r);
        }
        g
    }

    pub fn get(&self, degree: i64) -> u64 {
        *self.entries.get(&degree).unwrap_or(&0)
    }

    /// Adds `rank` in `degree` (dropping the entry if the sum is zero).
    pub fn add(&mut self, degree: i64, rank: u64) {
        if rank == 0 {
            return;
        }
        *self.entries.entry(degree).or_insert(0) += rank;
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.entries.iter().map(|(&d, &r)| (d, r))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_rank(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn bottom_degree(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn top_degree(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    pub fn is_even_supported(&self) -> bool {
        self.entries.keys().all(|d| d.rem_euclid(2) == 0)
    }

    pub fn is_odd_supported(&self) -> bool {
        self.entries.keys().all(|d| d.rem_euclid(2) == 1)
    }

    /// Whether ranks are symmetric about `center2 / 2` (degree `d` pairs with
    /// `center2 − d`); `center2` is twice the center to stay integral.
    pub fn is_symmetric_about(&self, center2: i64) -> bool {
        self.iter().all(|(d, r)| self.get(center2 - d) == r)
    }

    pub fn sum(&self, other: &GradedRanks) -> GradedRanks {
        let mut out = self.clone();
        for (d, r) in other.iter() {
            out.add(d, r);
        }
        out
    }
}

impl fmt::Debug for GradedRanks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

impl fmt::Display for GradedRanks {
    /// Renders as a direct sum `K_0 ⊕ K_2^3`, ascending in degree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&d, &r) in &self.entries {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if r == 1 {
                write!(f, "K_{d}")?;
            } else {
                write!(f, "K_{d}^{r}")?;
            }
        }
        Ok(())
    }
}

/// The C*-weight decomposition of the tangent space at a fixed component:
/// multiplicities h_k of the nonzero weights plus h_0 = dim_C F_α.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WeightMultiset {
    pub nonzero: BTreeMap<i64, u64>,
    pub zero_mult: u64,
}

impl WeightMultiset {
    pub fn total(&self) -> u64 {
        self.zero_mult + self.nonzero.values().sum::<u64>()
    }
}

/// One connected component F_α of the fixed locus.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FixedComponent {
    pub id: String,
    /// dim_C F_α.
    pub dimc: u64,
    pub betti: GradedRanks,
    pub weights: WeightMultiset,
}

/// How the cup-with-Euler-class map of a sphere bundle acts, degree by
/// degree. The underlying geometry never determines this from weight data, so
/// it is input: `Full` (maximal rank everywhere, the cotangent/negative-bundle
/// default) or `Zero` (trivial bundle), with an explicit escape hatch.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EulerProfile {
    Zero,
    Full,
    /// Rank of ∪e landing in each degree of the core.
    Explicit(BTreeMap<i64, u64>),
}

/// Column data for one torsion family: either a sphere-bundle description
/// (slices computed via the Gysin sequence) or explicit slice Betti numbers
/// with their gradings.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionStructure {
    Bundle {
        core_betti: GradedRanks,
        euler: EulerProfile,
    },
    Explicit {
        slice_betti: GradedRanks,
        /// μ(B_{k/m,β}) per slice period k/m ∈ (0, 1); periods beyond 1
        /// follow by the 2Nμ periodicity.
        slice_gradings: BTreeMap<Period, i64>,
        /// H*(B/S¹) for the equivariant page; `None` when the quotient is
        /// unknown (the family is then unusable equivariantly).
        #[serde(default)]
        quotient_betti: Option<GradedRanks>,
    },
}

/// Whether same-period (vertical) differentials may leave this family's
/// column.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerticalPolicy {
    Rigid,
    Flexible,
}

/// One outer torsion component Y_{m,β}: a connected component of the
/// Z/m-fixed locus whose slices contribute the fractional columns k/m.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TorsionFamily {
    pub m: i64,
    pub id: String,
    pub members: BTreeSet<String>,
    pub min_member: String,
    pub structure: TorsionStructure,
    pub vertical_policy: VerticalPolicy,
}

/// The intersection form on middle homology, needed to resolve the boundary
/// terms of the slice cohomology H*(Σ).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntersectionForm {
    Nondegenerate,
    Zero,
    KernelRank(u64),
}

/// How to obtain H*(Σ): derived from Poincaré–Lefschetz duality, or supplied
/// directly when the duality hypotheses fail.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SliceMode {
    Derived,
    Explicit(GradedRanks),
}

/// The full combinatorial input for one manifold.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ManifoldSpec {
    pub name: String,
    /// dim_C Y.
    pub dim: u64,
    /// Scaling weight s of the holomorphic symplectic form, when the space is
    /// a weight-s conical symplectic resolution. Enables the ω_C-duality
    /// check and the SH = 0 boundary condition.
    pub csr_weight: Option<u64>,
    pub intersection_form: IntersectionForm,
    pub components: Vec<FixedComponent>,
    pub families: Vec<TorsionFamily>,
    pub constraints: Vec<ExternalConstraint>,
    pub slice_mode: SliceMode,
}

impl ManifoldSpec {
    pub fn component(&self, id: &str) -> Option<&FixedComponent> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn family(&self, id: &str) -> Option<&TorsionFamily> {
        self.families.iter().find(|f| f.id == id)
    }
}

/// Severity of a validation finding. `Note`s flag unusual but legal input
/// (e.g. a weight divisible by m with no declared m-family) and never fail
/// validation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Note,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Component or family id the finding refers to (empty for spec-level).
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    fn error(subject: &str, message: String) -> Self {
        Diagnostic {
            severity: Severity::Error,
            subject: subject.to_string(),
            message,
        }
    }

    fn note(subject: &str, message: String) -> Self {
        Diagnostic {
            severity: Severity::Note,
            subject: subject.to_string(),
            message,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Note => "note",
        };
        if self.subject.is_empty() {
            write!(f, "{tag}: {}", self.message)
        } else {
            write!(f, "{tag}: [{}] {}", self.subject, self.message)
        }
    }
}

/// Checks every structural invariant of the input and reports all violations
/// as diagnostics (never panics on malformed input). A spec is valid iff no
/// `Error`-severity diagnostic is returned.
pub fn validate_spec(spec: &ManifoldSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    if spec.dim == 0 {
        out.push(Diagnostic::error("", "dim_C Y must be positive".into()));
    }

    // Component-level invariants.
    let mut seen = BTreeSet::new();
    for c in &spec.components {
        if !seen.insert(&c.id) {
            out.push(Diagnostic::error(&c.id, "duplicate component id".into()));
        }
        if c.weights.zero_mult != c.dimc {
            out.push(Diagnostic::error(
                &c.id,
                format!(
                    "zero-weight multiplicity {} must equal dim_C F = {}",
                    c.weights.zero_mult, c.dimc
                ),
            ));
        }
        if c.weights.nonzero.contains_key(&0) {
            out.push(Diagnostic::error(
                &c.id,
                "weight 0 listed among nonzero weights".into(),
            ));
        }
        if c.weights.total() != spec.dim {
            out.push(Diagnostic::error(
                &c.id,
                format!("weight count {} ≠ dim {}", c.weights.total(), spec.dim),
            ));
        }
        let top = 2 * c.dimc as i64;
        if c.betti.iter().any(|(d, _)| d < 0 || d > top) {
            out.push(Diagnostic::error(
                &c.id,
                format!("Betti support must lie in [0, {top}]"),
            ));
        } else if !c.betti.is_symmetric_about(top) {
            out.push(Diagnostic::error(
                &c.id,
                "Betti ranks violate Poincaré duality of the closed component".into(),
            ));
        }
        if c.betti.iter().any(|(d, _)| d.abs() > 4 * spec.dim as i64) {
            out.push(Diagnostic::error(
                &c.id,
                "Betti degree out of plausible range (input typo?)".into(),
            ));
        }
        // ω_C-duality h_k = h_{s−k} at every component of a weight-s space.
        if let Some(s) = spec.csr_weight {
            let h = |k: i64| {
                if k == 0 {
                    c.weights.zero_mult
                } else {
                    *c.weights.nonzero.get(&k).unwrap_or(&0)
                }
            };
            let all_keys: BTreeSet<i64> = c
                .weights
                .nonzero
                .keys()
                .flat_map(|&k| [k, s as i64 - k])
                .collect();
            for k in all_keys {
                if h(k) != h(s as i64 - k) {
                    out.push(Diagnostic::error(
                        &c.id,
                        format!(
                            "ω_C-duality fails: h_{k} = {} but h_{} = {}",
                            h(k),
                            s as i64 - k,
                            h(s as i64 - k)
                        ),
                    ));
                }
            }
        }
    }

    // Family-level invariants.
    let mut seen_fam = BTreeSet::new();
    for f in &spec.families {
        if f.m < 2 {
            out.push(Diagnostic::error(
                &f.id,
                format!("torsion order {} must be ≥ 2", f.m),
            ));
        }
        if !seen_fam.insert((f.m, &f.id)) {
            out.push(Diagnostic::error(&f.id, "duplicate (m, id) pair".into()));
        }
        if !f.members.contains(&f.min_member) {
            out.push(Diagnostic::error(
                &f.id,
                format!("minimal member `{}` not among members", f.min_member),
            ));
        }
        for m in &f.members {
            if spec.component(m).is_none() {
                out.push(Diagnostic::error(
                    &f.id,
                    format!("member `{m}` is not a component id"),
                ));
            }
        }
        let Some(min) = spec.component(&f.min_member) else {
            out.push(Diagnostic::error(
                &f.id,
                format!("minimal member `{}` is not a component id", f.min_member),
            ));
            continue;
        };
        // m-minimality: every nonzero weight divisible by m is positive.
        if min
            .weights
            .nonzero
            .keys()
            .any(|&w| w % f.m == 0 && w < 0)
        {
            out.push(Diagnostic::error(
                &f.id,
                format!("`{}` is not {}-minimal (negative weight divisible by {})", f.min_member, f.m, f.m),
            ));
        }
        let rank: u64 = min
            .weights
            .nonzero
            .iter()
            .filter(|(&k, _)| k > 0 && k % f.m == 0)
            .map(|(_, &h)| h)
            .sum();
        if rank == 0 {
            out.push(Diagnostic::error(
                &f.id,
                format!(
                    "rank 0: minimal member has no positive weight divisible by {} (family is not outer)",
                    f.m
                ),
            ));
        }
        match &f.structure {
            TorsionStructure::Explicit { slice_gradings, .. } => {
                for (&p, &g) in slice_gradings {
                    if g.rem_euclid(2) != 0 {
                        out.push(Diagnostic::error(
                            &f.id,
                            format!("slice grading {g} at period {p} must be even"),
                        ));
                    }
                    if !p.is_positive() || p.value() > num_rational::Ratio::from_integer(1) {
                        out.push(Diagnostic::error(
                            &f.id,
                            format!("slice-grading period {p} must lie in (0, 1]"),
                        ));
                    } else if p.denom() != f.m {
                        out.push(Diagnostic::error(
                            &f.id,
                            format!("slice-grading period {p} is not a reduced fraction k/{}", f.m),
                        ));
                    }
                }
            }
            TorsionStructure::Bundle { core_betti, euler } => {
                if let EulerProfile::Explicit(ranks) = euler {
                    let r = rank as i64;
                    for (&d, &rk) in ranks {
                        let bound = core_betti.get(d - 2 * r).min(core_betti.get(d));
                        if rk > bound {
                            out.push(Diagnostic::error(
                                &f.id,
                                format!(
                                    "Euler-map rank {rk} into degree {d} exceeds min(core rank) = {bound}"
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }

    // Maslov consistency (only meaningful once the per-component arithmetic
    // is clean).
    if out.iter().all(|d| d.severity != Severity::Error) {
        if let Err(e) = index::maslov_index(spec) {
            out.push(Diagnostic::error("", e.to_string()));
        }
    }

    // Orphan torsion weights: legal (inner torsion), but worth flagging.
    for c in &spec.components {
        for &w in c.weights.nonzero.keys() {
            for m in 2..=w.abs() {
                if w % m == 0
                    && !spec
                        .families
                        .iter()
                        .any(|f| f.m == m && f.members.contains(&c.id))
                {
                    out.push(Diagnostic::note(
                        &c.id,
                        format!("weight {w} is divisible by {m} but the component belongs to no {m}-torsion family"),
                    ));
                }
            }
        }
    }

    out
}

/// True iff the spec has no `Error`-severity diagnostics.
pub fn is_valid(spec: &ManifoldSpec) -> bool {
    validate_spec(spec)
        .iter()
        .all(|d| d.severity != Severity::Error)
}

/// H*(Y) as a graded vector space: ⊕_α H*(F_α)[−μ_α], i.e. Betti degree b of
/// F_α lands in total degree b + μ_α.
pub fn total_cohomology(spec: &ManifoldSpec) -> GradedRanks {
    let mut out = GradedRanks::new();
    for c in &spec.components {
        let mu = index::morse_bott_index(c);
        for (d, r) in c.betti.iter() {
            out.add(d + mu, r);
        }
    }
    out
}
