//! Generators and static data for the worked-example corpus: ADE surface
//! resolutions via attraction-graph weight propagation, twisted cotangent
//! bundles of projective space, Slodowy slices, Higgs moduli, and the affine
//! Dynkin (imaginary-root) rank checks.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use num_traits::Zero;

use crate::index::Period;
use crate::model::{
    Diagnostic, EulerProfile, FixedComponent, GradedRanks, IntersectionForm, ManifoldSpec,
    Severity, SliceMode, TorsionFamily, TorsionStructure, VerticalPolicy, WeightMultiset,
};
use crate::solver::{ExternalConstraint, FiltrationReport};

#[derive(Debug, thiserror::Error)]
pub enum PresetError {
    #[error("t^h φ^n is not contracting: {0}")]
    NotContracting(String),
    #[error("invalid Dynkin parameter: {0}")]
    BadParameter(String),
}

fn component(id: &str, dimc: u64, betti: &[(i64, u64)], weights: &[(i64, u64)]) -> FixedComponent {
    let mut nonzero = BTreeMap::new();
    for &(w, h) in weights {
        *nonzero.entry(w).or_insert(0) += h;
    }
    FixedComponent {
        id: id.to_string(),
        dimc,
        betti: GradedRanks::from_pairs(betti.iter().copied()),
        weights: WeightMultiset {
            nonzero,
            zero_mult: dimc,
        },
    }
}

fn point(id: &str, weights: &[i64]) -> FixedComponent {
    component(id, 0, &[(0, 1)], &weights.iter().map(|&w| (w, 1)).collect::<Vec<_>>())
}

fn sphere(id: &str, weights: &[i64]) -> FixedComponent {
    component(
        id,
        1,
        &[(0, 1), (2, 1)],
        &weights.iter().map(|&w| (w, 1)).collect::<Vec<_>>(),
    )
}

/// A torsion line (rank-1 family with a point minimum): slice S¹.
fn line_family(m: i64, id: &str, min: &str) -> TorsionFamily {
    bundle_family(m, id, min, &[(0, 1)], EulerProfile::Zero)
}

fn bundle_family(
    m: i64,
    id: &str,
    min: &str,
    core: &[(i64, u64)],
    euler: EulerProfile,
) -> TorsionFamily {
    TorsionFamily {
        m,
        id: id.to_string(),
        members: BTreeSet::from([min.to_string()]),
        min_member: min.to_string(),
        structure: TorsionStructure::Bundle {
            core_betti: GradedRanks::from_pairs(core.iter().copied()),
            euler,
        },
        vertical_policy: VerticalPolicy::Rigid,
    }
}

// ---------------------------------------------------------------------------
// ADE resolutions
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdeKind {
    /// The resolution of C²/(Z/k), k ≥ 2.
    A(i64),
    /// D_n, n ≥ 4.
    D(i64),
    E6,
    E7,
    E8,
}

/// Builds the spec for an ADE surface resolution with its standard circle
/// action: weight-2 for odd-order A type, the weight-1 square-root action
/// otherwise (with a pointwise-fixed central sphere).
pub fn ade_spec(kind: AdeKind) -> Result<ManifoldSpec, PresetError> {
    match kind {
        AdeKind::A(k) if k >= 3 && k % 2 == 1 => Ok(a_odd_spec(k)),
        AdeKind::A(k) if k >= 2 && k % 2 == 0 => Ok(a_even_spec(k)),
        AdeKind::A(k) => Err(PresetError::BadParameter(format!("A({k})"))),
        AdeKind::D(n) if n >= 4 => Ok(de_spec(
            &format!("d{n}"),
            &[1, 1, n - 3],
        )),
        AdeKind::D(n) => Err(PresetError::BadParameter(format!("D({n})"))),
        AdeKind::E6 => Ok(de_spec("e6", &[1, 2, 2])),
        AdeKind::E7 => Ok(de_spec("e7", &[1, 2, 3])),
        AdeKind::E8 => Ok(de_spec("e8", &[1, 2, 4])),
    }
}

/// Odd k: the weight-2 action with k isolated fixed points carrying weights
/// (a_j, 2 − a_j), a_j = k − 2(j−1), and torsion lines of order k at both
/// ends (declared once per divisor of k).
fn a_odd_spec(k: i64) -> ManifoldSpec {
    let mut components = Vec::new();
    for j in 1..=k {
        let a = k - 2 * (j - 1);
        components.push(point(&format!("p{j}"), &[a, 2 - a]));
    }
    let mut families = Vec::new();
    for (end, label) in [(1i64, "lo"), (k, "hi")] {
        for m in divisors_at_least_2(k) {
            families.push(line_family(
                m,
                &format!("line{m}_{label}"),
                &format!("p{end}"),
            ));
        }
    }
    ManifoldSpec {
        name: format!("x_z{k}"),
        dim: 2,
        csr_weight: Some(2),
        intersection_form: IntersectionForm::Nondegenerate,
        components,
        families,
        constraints: vec![
            ExternalConstraint::UnitKilledByPillar(1),
            ExternalConstraint::UnstableOnly(true),
        ],
        slice_mode: SliceMode::Derived,
    }
}

/// Even k: the weight-1 square-root action: a pointwise-fixed middle sphere,
/// k − 2 isolated points (k/2 − j + 1, j − k/2), and order-(k/2) torsion
/// lines at the two end points.
fn a_even_spec(k: i64) -> ManifoldSpec {
    let h = k / 2;
    let mut components = vec![sphere("c", &[1])];
    for j in 1..h {
        components.push(point(&format!("p{j}"), &[h - j + 1, j - h]));
        components.push(point(&format!("q{j}"), &[j - h, h - j + 1]));
    }
    let mut families = Vec::new();
    if h >= 2 {
        for m in divisors_at_least_2(h) {
            families.push(line_family(m, &format!("line{m}_lo"), "p1"));
            families.push(line_family(m, &format!("line{m}_hi"), "q1"));
        }
    }
    ManifoldSpec {
        name: format!("x_z{k}"),
        dim: 2,
        csr_weight: Some(1),
        intersection_form: IntersectionForm::Nondegenerate,
        components,
        families,
        constraints: vec![
            ExternalConstraint::UnitKilledByPillar(2),
            ExternalConstraint::UnstableOnly(true),
        ],
        slice_mode: SliceMode::Derived,
    }
}

/// D/E type with the weight-1 square-root action: the trivalent sphere is
/// fixed pointwise; each leg of length ℓ contributes points with weights
/// (−d, d + 1) at distance d and an order-(ℓ+1) torsion line at its leaf.
fn de_spec(name: &str, legs: &[i64]) -> ManifoldSpec {
    let mut components = vec![sphere("c", &[1])];
    let mut families = Vec::new();
    for (leg, &len) in legs.iter().enumerate() {
        for d in 1..=len {
            components.push(point(&format!("l{leg}p{d}"), &[-d, d + 1]));
        }
        let leaf = format!("l{leg}p{len}");
        for m in divisors_at_least_2(len + 1) {
            families.push(line_family(m, &format!("l{leg}line{m}"), &leaf));
        }
    }
    ManifoldSpec {
        name: name.to_string(),
        dim: 2,
        csr_weight: Some(1),
        intersection_form: IntersectionForm::Nondegenerate,
        components,
        families,
        constraints: vec![
            ExternalConstraint::UnitKilledByPillar(2),
            ExternalConstraint::UnstableOnly(true),
        ],
        slice_mode: SliceMode::Derived,
    }
}

fn divisors_at_least_2(n: i64) -> Vec<i64> {
    (2..=n).filter(|m| n % m == 0).collect()
}

/// The non-standard circle action on the Z/3 resolution (a sphere minimum
/// and one point with weights (2, −1) carrying a Z/2 line).
pub fn x_z3_nonstandard_spec() -> ManifoldSpec {
    ManifoldSpec {
        name: "x_z3_nonstandard".into(),
        dim: 2,
        csr_weight: Some(1),
        intersection_form: IntersectionForm::Nondegenerate,
        components: vec![sphere("s1", &[1]), point("p2", &[2, -1])],
        families: vec![line_family(2, "line2", "p2")],
        constraints: vec![
            ExternalConstraint::UnitKilledByPillar(2),
            ExternalConstraint::UnstableOnly(true),
        ],
        slice_mode: SliceMode::Derived,
    }
}

// ---------------------------------------------------------------------------
// Cotangent bundles of projective spaces
// ---------------------------------------------------------------------------

/// T*CP^m with the cotangent-fiber scaling action: one fixed component CP^m
/// with all m fiber weights equal to 1.
pub fn tcp_spec(m: u64) -> ManifoldSpec {
    let betti: Vec<(i64, u64)> = (0..=m as i64).map(|j| (2 * j, 1)).collect();
    ManifoldSpec {
        name: format!("tcp{m}"),
        dim: 2 * m,
        csr_weight: Some(1),
        intersection_form: IntersectionForm::Nondegenerate,
        components: vec![component("cp", m, &betti, &[(1, m)])],
        families: vec![],
        constraints: vec![
            ExternalConstraint::UnitKilledByPillar(2),
            ExternalConstraint::UnstableOnly(true),
        ],
        slice_mode: SliceMode::Derived,
    }
}

/// The Springer resolution T*B for SL(3) (full flag variety) with the
/// fiber scaling action.
pub fn springer_sl3_spec() -> ManifoldSpec {
    ManifoldSpec {
        name: "springer_sl3".into(),
        dim: 6,
        csr_weight: Some(1),
        intersection_form: IntersectionForm::Nondegenerate,
        components: vec![component(
            "flag",
            3,
            &[(0, 1), (2, 2), (4, 2), (6, 1)],
            &[(1, 3)],
        )],
        families: vec![],
        constraints: vec![
            ExternalConstraint::UnitKilledByPillar(2),
            ExternalConstraint::UnstableOnly(true),
        ],
        slice_mode: SliceMode::Derived,
    }
}

/// Twisted cotangent bundle of CP^{n−1} under t^h φ^n: fixed points are the
/// coordinate lines 𝔉_i with base weights h_j − h_i (j ≠ i) and fiber
/// weights n − (h_j − h_i); torsion families are enumerated systematically
/// from the divisibility pattern at each m-minimal point.
pub fn twisted_projective_spec(n: i64, h: &[i64]) -> Result<ManifoldSpec, PresetError> {
    if h.len() != n as usize || n < 2 {
        return Err(PresetError::BadParameter(format!(
            "need n ≥ 2 and an h-vector of length n, got n={n}, |h|={}",
            h.len()
        )));
    }
    if h.iter().all(|&x| x == h[0]) {
        // Untwisted: the zero section CP^{n−1} with all fiber weights n.
        let m = (n - 1) as u64;
        let betti: Vec<(i64, u64)> = (0..n).map(|j| (2 * j, 1)).collect();
        return Ok(ManifoldSpec {
            name: format!("twisted_tcp{}_h0", n - 1),
            dim: 2 * m,
            csr_weight: Some(n as u64),
            intersection_form: IntersectionForm::Nondegenerate,
            components: vec![component("cp", m, &betti, &[(n, m)])],
            families: vec![],
            constraints: vec![ExternalConstraint::UnstableOnly(true)],
            slice_mode: SliceMode::Derived,
        });
    }

    let mut components = Vec::new();
    for i in 0..n as usize {
        let mut weights = Vec::new();
        for j in 0..n as usize {
            if j == i {
                continue;
            }
            let base = h[j] - h[i];
            let fiber = n - base;
            if base == 0 || fiber == 0 {
                return Err(PresetError::NotContracting(format!(
                    "zero weight at component {i} against {j}"
                )));
            }
            weights.push(base);
            weights.push(fiber);
        }
        components.push(point(&format!("f{i}"), &weights));
    }
    if !components
        .iter()
        .any(|c| c.weights.nonzero.keys().all(|&w| w > 0))
    {
        return Err(PresetError::NotContracting("no minimum component".into()));
    }

    // Z/m-fixed loci, one per residue class of h mod m: the base part is the
    // projective space of the coordinate flags with h_i ≡ c, the fibre part
    // the cotangent directions with weight n − (h_j − h_i) ≡ 0 at the
    // minimum. Classes with no fibre directions are inner (compact) torsion
    // and carry no column.
    let max_w = components
        .iter()
        .flat_map(|c| c.weights.nonzero.keys().map(|w| w.abs()))
        .max()
        .unwrap_or(1);
    let mut families = Vec::new();
    for m in 2..=max_w {
        let mut classes: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &hi) in h.iter().enumerate() {
            classes.entry(hi.rem_euclid(m)).or_default().push(i);
        }
        for members in classes.values() {
            let &mi = members
                .iter()
                .min_by_key(|&&i| h[i])
                .expect("nonempty class");
            let fibre_rank = (0..n as usize)
                .filter(|&j| j != mi && (n - (h[j] - h[mi])).rem_euclid(m) == 0)
                .count();
            if fibre_rank == 0 {
                continue;
            }
            let core: Vec<(i64, u64)> = (0..members.len() as i64).map(|j| (2 * j, 1)).collect();
            families.push(TorsionFamily {
                m,
                id: format!("z{m}_f{mi}"),
                members: members.iter().map(|&i| format!("f{i}")).collect(),
                min_member: format!("f{mi}"),
                structure: TorsionStructure::Bundle {
                    core_betti: GradedRanks::from_pairs(core),
                    euler: EulerProfile::Full,
                },
                vertical_policy: VerticalPolicy::Rigid,
            });
        }
    }

    Ok(ManifoldSpec {
        name: format!("twisted_tcp{}", n - 1),
        dim: 2 * (n as u64 - 1),
        csr_weight: Some(n as u64),
        intersection_form: IntersectionForm::Nondegenerate,
        components,
        families,
        constraints: vec![ExternalConstraint::UnstableOnly(true)],
        slice_mode: SliceMode::Derived,
    })
}

// ---------------------------------------------------------------------------
// Slodowy slices
// ---------------------------------------------------------------------------

/// The Slodowy variety S̃_22: CP¹×CP¹ minimum and one CP¹ carrying a Z/2
/// cotangent-line family whose slice is RP³.
pub fn s22_spec() -> ManifoldSpec {
    ManifoldSpec {
        name: "s22".into(),
        dim: 4,
        csr_weight: Some(1),
        intersection_form: IntersectionForm::Nondegenerate,
        components: vec![
            component("f_min", 2, &[(0, 1), (2, 2), (4, 1)], &[(1, 2)]),
            component("f_mpx", 1, &[(0, 1), (2, 1)], &[(-1, 1), (1, 1), (2, 1)]),
        ],
        families: vec![bundle_family(
            2,
            "k_t",
            "f_mpx",
            &[(0, 1), (2, 1)],
            EulerProfile::Full,
        )],
        constraints: vec![
            ExternalConstraint::UnitKilledByPillar(2),
            ExternalConstraint::UnstableOnly(true),
        ],
        slice_mode: SliceMode::Derived,
    }
}

fn explicit_family(
    m: i64,
    id: &str,
    min: &str,
    slice_betti: &[(i64, u64)],
    gradings: &[(i64, i64, i64)],
    quotient: &[(i64, u64)],
    vertical: VerticalPolicy,
) -> TorsionFamily {
    TorsionFamily {
        m,
        id: id.to_string(),
        members: BTreeSet::from([min.to_string()]),
        min_member: min.to_string(),
        structure: TorsionStructure::Explicit {
            slice_betti: GradedRanks::from_pairs(slice_betti.iter().copied()),
            slice_gradings: gradings
                .iter()
                .map(|&(k, mm, g)| (Period::new(k, mm), g))
                .collect(),
            quotient_betti: Some(GradedRanks::from_pairs(quotient.iter().copied())),
        },
        vertical_policy: vertical,
    }
}

/// The Slodowy variety S̃_32 in explicit-column mode: ten fixed points, two
/// Z/5 circle families, four Z/3 circle families, one Z/3 family with S³
/// slices and two with S²×S¹ slices (flexible vertical policy).
pub fn s32_spec() -> ManifoldSpec {
    let s1 = [(0i64, 1u64), (1, 1)];
    let pt = [(0i64, 1u64)];
    let s2xs1 = [(0i64, 1u64), (1, 1), (2, 1), (3, 1)];
    let s2 = [(0i64, 1u64), (2, 1)];
    let s3 = [(0i64, 1u64), (3, 1)];
    let cp1 = [(0i64, 1u64), (2, 1)];
    let z5 = [(1i64, 5i64, 2i64), (2, 5, 0), (3, 5, -2), (4, 5, -4)];
    let z3_s1 = [(1i64, 3i64, 0i64), (2, 3, -2)];
    let z3_deep = [(1i64, 3i64, 0i64), (2, 3, -4)];

    let mut components = vec![point("a_min", &[1, 1, 1, 1])];
    let mut families = Vec::new();
    for j in 1..=4 {
        components.push(point(&format!("f{j}"), &[3, -1, 1, 1]));
        families.push(explicit_family(
            3,
            &format!("z3_f{j}"),
            &format!("f{j}"),
            &s1,
            &z3_s1,
            &pt,
            VerticalPolicy::Rigid,
        ));
    }
    for tag in ["j", "y"] {
        components.push(point(&format!("fp_{tag}"), &[3, 3, -1, -1]));
        families.push(explicit_family(
            3,
            &format!("z3_fp_{tag}"),
            &format!("fp_{tag}"),
            &s2xs1,
            &z3_deep,
            &s2,
            VerticalPolicy::Flexible,
        ));
    }
    for tag in ["x", "y"] {
        components.push(point(&format!("int_{tag}"), &[3, -1, 5, -3]));
        families.push(explicit_family(
            5,
            &format!("z5_{tag}"),
            &format!("int_{tag}"),
            &s1,
            &z5,
            &pt,
            VerticalPolicy::Rigid,
        ));
    }
    components.push(point("int_c", &[3, -1, 3, -1]));
    families.push(explicit_family(
        3,
        "z3_int_c",
        "int_c",
        &s3,
        &z3_deep,
        &cp1,
        VerticalPolicy::Rigid,
    ));

    ManifoldSpec {
        name: "s32".into(),
        dim: 4,
        csr_weight: Some(2),
        intersection_form: IntersectionForm::Nondegenerate,
        components,
        families,
        constraints: vec![ExternalConstraint::UnitKilledByPillar(1)],
        slice_mode: SliceMode::Derived,
    }
}

// ---------------------------------------------------------------------------
// Higgs moduli
// ---------------------------------------------------------------------------

/// T*T^{2g} with the fiber scaling action (rank-wise model: the zero section
/// as a compact component of half dimension with all g fiber weights 1).
pub fn torus_spec(g: u64) -> ManifoldSpec {
    let betti: Vec<(i64, u64)> = (0..=2 * g as i64)
        .map(|j| (j, binomial(2 * g as i64, j)))
        .collect();
    ManifoldSpec {
        name: format!("t_t{}", 2 * g),
        dim: 2 * g,
        csr_weight: None,
        intersection_form: IntersectionForm::Zero,
        components: vec![component("torus", g, &betti, &[(1, g)])],
        families: vec![],
        constraints: vec![ExternalConstraint::FiltrationFullAt(Period::integer(1))],
        slice_mode: SliceMode::Derived,
    }
}

fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut out: u64 = 1;
    for j in 0..k {
        out = out * (n - j) as u64 / (j + 1) as u64;
    }
    out
}

/// The SL(2) Higgs moduli space for a genus-2 curve: the nilpotent-cone
/// components F₀ (moduli of stable bundles) and F₁ (a genus-17 curve), with
/// a rank-2 Z/2 family over F₁.
pub fn higgs_sl2_g2_spec() -> ManifoldSpec {
    ManifoldSpec {
        name: "higgs_sl2_g2".into(),
        dim: 6,
        csr_weight: None,
        intersection_form: IntersectionForm::KernelRank(0),
        components: vec![
            component(
                "f0",
                3,
                &[(0, 1), (2, 1), (3, 4), (4, 1), (6, 1)],
                &[(1, 3)],
            ),
            component("f1", 1, &[(0, 1), (1, 34), (2, 1)], &[(-1, 2), (1, 1), (2, 2)]),
        ],
        families: vec![bundle_family(
            2,
            "z2_f1",
            "f1",
            &[(0, 1), (1, 34), (2, 1)],
            EulerProfile::Zero,
        )],
        constraints: vec![],
        slice_mode: SliceMode::Derived,
    }
}

// ---------------------------------------------------------------------------
// Parabolic Higgs spaces over affine Dynkin graphs
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffineType {
    A0,
    D4,
    E6,
    E7,
    E8,
}

impl AffineType {
    pub fn name(&self) -> &'static str {
        match self {
            AffineType::A0 => "a0_affine",
            AffineType::D4 => "d4_affine",
            AffineType::E6 => "e6_affine",
            AffineType::E7 => "e7_affine",
            AffineType::E8 => "e8_affine",
        }
    }

    fn legs(&self) -> &'static [i64] {
        match self {
            AffineType::A0 => &[],
            AffineType::D4 => &[1, 1, 1, 1],
            AffineType::E6 => &[2, 2, 2],
            AffineType::E7 => &[3, 3, 1],
            AffineType::E8 => &[5, 2, 1],
        }
    }

    /// The orbifold order: torsion of the deepest leaf (1 for Ã_0).
    pub fn order(&self) -> i64 {
        self.legs().iter().max().map_or(1, |l| l + 1)
    }
}

/// The parabolic Higgs space M_Γ. For Γ trivial this is T*T²; otherwise the
/// fixed data follows the affine Dynkin graph exactly like the finite D/E
/// case, but with no CSR weight (the space is not a resolution and its unit
/// is only known to die at the 2-pillar).
pub fn parabolic_higgs_spec(t: AffineType) -> ManifoldSpec {
    if t == AffineType::A0 {
        let mut spec = torus_spec(1);
        spec.name = t.name().to_string();
        return spec;
    }
    let mut components = vec![sphere("c", &[1])];
    let mut families = Vec::new();
    for (leg, &len) in t.legs().iter().enumerate() {
        for d in 1..=len {
            components.push(point(&format!("l{leg}p{d}"), &[-d, d + 1]));
        }
        let leaf = format!("l{leg}p{len}");
        for m in divisors_at_least_2(len + 1) {
            families.push(line_family(m, &format!("l{leg}line{m}"), &leaf));
        }
    }
    ManifoldSpec {
        name: t.name().to_string(),
        dim: 2,
        csr_weight: None,
        intersection_form: IntersectionForm::KernelRank(1),
        components,
        families,
        constraints: vec![
            ExternalConstraint::UnstableOnly(true),
            ExternalConstraint::BlockTopClass {
                column: Period::integer(1),
                degree: 0,
            },
        ],
        slice_mode: SliceMode::Derived,
    }
}

/// The imaginary-root coefficients of the affine graph: the kernel generator
/// of the Cartan matrix 2I − adjacency, normalized to minimal positive
/// integers. Vertex order: center first, then each leg outward.
pub fn imaginary_roots(t: AffineType) -> Vec<i64> {
    if t == AffineType::A0 {
        return vec![1];
    }
    // Build the adjacency of the star graph.
    let legs = t.legs();
    let n: usize = 1 + legs.iter().sum::<i64>() as usize;
    let mut adj = vec![vec![0i64; n]; n];
    let mut idx = 1usize;
    for &len in legs {
        let mut prev = 0usize;
        for _ in 0..len {
            adj[prev][idx] = 1;
            adj[idx][prev] = 1;
            prev = idx;
            idx += 1;
        }
    }
    // Cartan kernel by exact Gaussian elimination.
    let mut mat: Vec<Vec<Ratio<i64>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    Ratio::from_integer(if i == j { 2 } else { 0 } - adj[i][j])
                })
                .collect()
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        if let Some(r) = (row..n).find(|&r| !mat[r][col].is_zero()) {
            mat.swap(row, r);
            let p = mat[row][col];
            for x in mat[row].iter_mut() {
                *x /= p;
            }
            for r2 in 0..n {
                if r2 != row && !mat[r2][col].is_zero() {
                    let f = mat[r2][col];
                    for c2 in 0..n {
                        let sub = mat[row][c2] * f;
                        mat[r2][c2] -= sub;
                    }
                }
            }
            pivots.push((row, col));
            row += 1;
        }
    }
    assert_eq!(row, n - 1, "affine Cartan matrix must have corank 1");
    let free_col = (0..n)
        .find(|c| pivots.iter().all(|&(_, pc)| pc != *c))
        .expect("one free column");
    let mut kernel = vec![Ratio::from_integer(0); n];
    kernel[free_col] = Ratio::from_integer(1);
    for &(r, c) in &pivots {
        kernel[c] = -mat[r][free_col];
    }
    // Scale to minimal positive integers.
    let lcm = kernel
        .iter()
        .fold(1i64, |l, x| num_integer::lcm(l, *x.denom()));
    let ints: Vec<i64> = kernel
        .iter()
        .map(|x| (x * Ratio::from_integer(lcm)).to_integer())
        .collect();
    let gcd = ints.iter().fold(0i64, |g, &x| num_integer::gcd(g, x.abs()));
    let sign = if ints.iter().sum::<i64>() < 0 { -1 } else { 1 };
    ints.iter().map(|&x| sign * x / gcd).collect()
}

/// Verifies the filtration against the imaginary-root coefficients: the step
/// at period k/ℓ must have H²-rank #{i : n_i ≤ k}.
pub fn imaginary_root_check(t: AffineType, report: &FiltrationReport) -> Vec<Diagnostic> {
    let roots = imaginary_roots(t);
    let ell = t.order();
    let mut out = Vec::new();
    for k in 1..=ell {
        let expected = roots.iter().filter(|&&n| n <= k).count() as u64;
        let cell = report.cell_at(Period::new(k, ell), 2);
        if !cell.determined() || cell.min != expected {
            out.push(Diagnostic {
                severity: Severity::Error,
                subject: format!("{} step {k}/{ell}", t.name()),
                message: format!(
                    "filtration step has H² rank [{}, {}], imaginary roots give {expected}",
                    cell.min, cell.max
                ),
            });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

/// Every preset of the worked-example corpus, in a fixed order.
pub fn all_presets() -> Vec<ManifoldSpec> {
    let mut out = Vec::new();
    for k in 2..=8 {
        out.push(ade_spec(AdeKind::A(k)).unwrap());
    }
    out.push(x_z3_nonstandard_spec());
    out.push(ade_spec(AdeKind::D(5)).unwrap());
    out.push(ade_spec(AdeKind::D(6)).unwrap());
    out.push(ade_spec(AdeKind::E6).unwrap());
    out.push(ade_spec(AdeKind::E7).unwrap());
    out.push(ade_spec(AdeKind::E8).unwrap());
    for m in 1..=4 {
        out.push(tcp_spec(m));
    }
    out.push(springer_sl3_spec());
    for n in 3..=5 {
        let h: Vec<i64> = (0..n).collect();
        out.push(twisted_projective_spec(n, &h).unwrap());
    }
    out.push(s22_spec());
    out.push(s32_spec());
    out.push(torus_spec(1));
    out.push(torus_spec(2));
    out.push(higgs_sl2_g2_spec());
    for t in [
        AffineType::A0,
        AffineType::D4,
        AffineType::E6,
        AffineType::E7,
        AffineType::E8,
    ] {
        out.push(parabolic_higgs_spec(t));
    }
    out
}
