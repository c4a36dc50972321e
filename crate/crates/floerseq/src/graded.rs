//! Graded-rank algebra: shifts, tensor-style combinations, the Gysin
//! computation for odd-sphere bundles, Leray–Hirsch for projectivizations,
//! and the slice cohomology H*(Σ) from Poincaré–Lefschetz duality.

use crate::model::{EulerProfile, GradedRanks, IntersectionForm, ManifoldSpec, TorsionFamily, TorsionStructure};

#[derive(Debug, thiserror::Error)]
pub enum GradedError {
    #[error("explicit Euler profile exceeds min(core rank) bound in degree {degree}: {rank} > {bound}")]
    InconsistentEuler { degree: i64, rank: u64, bound: u64 },
    #[error("slice cohomology needs H*(Y) supported in [0, {n}], found degree {degree}")]
    UnsupportedInput { n: i64, degree: i64 },
}

/// Shift a graded group down by `d` (footnote-4 convention): the result's
/// rank at degree n is `g`'s rank at degree n + d, so `shift_down(g, −μ)`
/// puts g's degree-0 part at degree μ.
pub fn shift_down(g: &GradedRanks, d: i64) -> GradedRanks {
    GradedRanks::from_pairs(g.iter().map(|(n, r)| (n - d, r)))
}

/// Ranks of the total space of an S^{2r−1}-bundle over `core`, from the Gysin
/// sequence
/// `… → H^{k−2r}(core) →(∪e) H^k(core) → H^k(SE) → H^{k−2r+1}(core) → …`:
/// rank H^k(SE) = corank of ∪e into degree k + kernel rank of ∪e out of
/// degree k − 2r + 1.
///
/// `Zero` means ∪e ≡ 0 (trivial bundle: core ⊗ H*(S^{2r−1}) exactly);
/// `Full` means ∪e has the maximal rank min(rank_{k−2r}, rank_k) in every
/// degree.
pub fn gysin_sphere_bundle(
    core: &GradedRanks,
    r: u64,
    euler: &EulerProfile,
) -> Result<GradedRanks, GradedError> {
    let r = r as i64;
    let euler_rank_into = |d: i64| -> Result<u64, GradedError> {
        let bound = core.get(d - 2 * r).min(core.get(d));
        match euler {
            EulerProfile::Zero => Ok(0),
            EulerProfile::Full => Ok(bound),
            EulerProfile::Explicit(ranks) => {
                let rank = *ranks.get(&d).unwrap_or(&0);
                if rank > bound {
                    Err(GradedError::InconsistentEuler {
                        degree: d,
                        rank,
                        bound,
                    })
                } else {
                    Ok(rank)
                }
            }
        }
    };
    let mut out = GradedRanks::new();
    let lo = core.bottom_degree().unwrap_or(0);
    let hi = core.top_degree().unwrap_or(0) + 2 * r;
    for k in lo..=hi {
        let corank_k = core.get(k) - euler_rank_into(k)?;
        let kernel_from = core.get(k - 2 * r + 1) - euler_rank_into(k + 1)?;
        out.add(k, corank_k + kernel_from);
    }
    Ok(out)
}

/// H*(Σ) of the contact hypersurface from H*(Y) via Poincaré–Lefschetz
/// duality: H^k(Σ) = hY(k) for k ≤ n−2, hY(2n−1−k) for k ≥ n+1, and
/// hY(n−1) + ker ψ in the middle degrees n−1 and n, where ψ is the
/// intersection form on H_n(Y).
pub fn slice_cohomology(
    hy: &GradedRanks,
    n: u64,
    form: IntersectionForm,
) -> Result<GradedRanks, GradedError> {
    let n = n as i64;
    if let Some(d) = hy.support().find(|&d| d < 0 || d > n) {
        return Err(GradedError::UnsupportedInput { n, degree: d });
    }
    let ker_psi = match form {
        IntersectionForm::Nondegenerate => 0,
        IntersectionForm::Zero => hy.get(n),
        IntersectionForm::KernelRank(k) => k,
    };
    let mut out = GradedRanks::new();
    for k in 0..=(2 * n - 1) {
        let rank = if k <= n - 2 {
            hy.get(k)
        } else if k >= n + 1 {
            hy.get(2 * n - 1 - k)
        } else {
            hy.get(n - 1) + ker_psi
        };
        out.add(k, rank);
    }
    Ok(out)
}

/// Ranks of a projectivization P(E) → core of a rank-r bundle via
/// Leray–Hirsch: core ⊗ {1, c₁(L), …, c₁(L)^{r−1}}.
pub fn leray_hirsch_projectivization(core: &GradedRanks, r: u64) -> GradedRanks {
    let mut out = GradedRanks::new();
    for j in 0..r as i64 {
        for (d, rank) in core.iter() {
            out.add(d + 2 * j, rank);
        }
    }
    out
}

/// Betti ranks of one slice B_{k/m,β} of a torsion family — the same for
/// every slice period, since all slices of a family are diffeomorphic.
pub fn family_slice_betti(
    spec: &ManifoldSpec,
    fam: &TorsionFamily,
) -> Result<GradedRanks, GradedError> {
    match &fam.structure {
        TorsionStructure::Explicit { slice_betti, .. } => Ok(slice_betti.clone()),
        TorsionStructure::Bundle { core_betti, euler } => {
            // The sphere-bundle rank is the fibre dimension of Y_{m,β} over
            // its compact core: dim Y − dim core, with dim Y = dim(min) +
            // rank and dim core read off Poincaré duality of the core.
            let rank = crate::index::family_rank(spec, fam).expect("validated spec") as i64;
            let min = spec.component(&fam.min_member).expect("validated spec");
            let core_dim = core_betti.top_degree().unwrap_or(0) / 2;
            let r = min.dimc as i64 + rank - core_dim;
            assert!(r >= 1, "family {} has no fibre directions over its core", fam.id);
            gysin_sphere_bundle(core_betti, r as u64, euler)
        }
    }
}
