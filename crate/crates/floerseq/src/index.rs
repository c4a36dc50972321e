//! Exact index calculus: the W-function, Maslov / Morse–Bott / Floer indices,
//! critical times of the circle action, and slice gradings μ(B_{p,β}).
//!
//! Everything in this module is exact integer/rational arithmetic. W has jump
//! discontinuities at the rationals with small denominator — the whole
//! calculus is a sequence of integrality tests, so floating point is banned.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::model::{FixedComponent, ManifoldSpec, TorsionFamily, TorsionStructure};

/// An exact rational period `k/m`, stored in lowest terms.
///
/// Periods of slices are strictly positive; period 0 is reserved for the
/// constant-orbit column of the E1-page.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Period(Ratio<i64>);

impl Period {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "period denominator must be nonzero");
        Period(Ratio::new(numer, denom))
    }

    pub fn integer(n: i64) -> Self {
        Period(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Period(Ratio::zero())
    }

    pub fn value(&self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// Integer part floor(T); the block index N for a fractional period.
    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        Period(r)
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("malformed period `{0}`: expected `N` or `k/m`")]
pub struct PeriodParseError(String);

impl FromStr for Period {
    type Err = PeriodParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PeriodParseError(s.to_string());
        match s.split_once('/') {
            None => s.parse::<i64>().map(Period::integer).map_err(|_| bad()),
            Some((k, m)) => {
                let k: i64 = k.parse().map_err(|_| bad())?;
                let m: i64 = m.parse().map_err(|_| bad())?;
                if m <= 0 {
                    return Err(bad());
                }
                Ok(Period::new(k, m))
            }
        }
    }
}

impl Serialize for Period {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Period {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IndexError {
    #[error("Maslov index disagrees between components: {0:?}")]
    MaslovMismatch(Vec<(String, i64)>),
    #[error("Maslov index {0} is not positive (some component has no positive-weight contribution)")]
    NonPositiveMaslov(i64),
    #[error("slice grading cross-check failed for family {family} at T={period}: closed form {closed_form}, Floer cross-checks {floer_at_t} - rank {rank} and {floer_above_t}")]
    CrossCheckFailure {
        family: String,
        period: Period,
        closed_form: i64,
        floer_at_t: i64,
        rank: i64,
        floer_above_t: i64,
    },
    #[error("period {period} is not a slice period of family {family} (torsion order {m})")]
    BadSlicePeriod {
        family: String,
        period: Period,
        m: i64,
    },
    #[error("explicit family {family} has no slice grading recorded at period {period}")]
    MissingSliceGrading { family: String, period: Period },
    #[error("unknown component id `{0}`")]
    UnknownComponent(String),
}

/// The index of a rotation path: W(x) = 2⌊x⌋+1 for x ∉ Z, W(x) = 2x for x ∈ Z.
pub fn w_eval(x: Ratio<i64>) -> i64 {
    if x.is_integer() {
        2 * x.to_integer()
    } else {
        2 * x.floor().to_integer() + 1
    }
}

/// The Maslov index μ = Σ_{k>0} k·(h_k − h_{−k}), computed at every component
/// and asserted equal; must be strictly positive.
pub fn maslov_index(spec: &ManifoldSpec) -> Result<i64, IndexError> {
    let per_component: Vec<(String, i64)> = spec
        .components
        .iter()
        .map(|c| (c.id.clone(), component_maslov(c)))
        .collect();
    let Some(&(_, mu)) = per_component.first() else {
        return Err(IndexError::NonPositiveMaslov(0));
    };
    if per_component.iter().any(|&(_, v)| v != mu) {
        return Err(IndexError::MaslovMismatch(per_component));
    }
    if mu <= 0 {
        return Err(IndexError::NonPositiveMaslov(mu));
    }
    Ok(mu)
}

fn component_maslov(c: &FixedComponent) -> i64 {
    c.weights
        .nonzero
        .iter()
        .map(|(&k, &h)| k * h as i64)
        .sum()
}

/// The Morse–Bott index μ_α = 2·Σ_{k<0} h_k.
pub fn morse_bott_index(c: &FixedComponent) -> i64 {
    2 * c.weights
        .nonzero
        .iter()
        .filter(|(&k, _)| k < 0)
        .map(|(_, &h)| h as i64)
        .sum::<i64>()
}

/// The Floer index μ_λ(F_α) = Σ over nonzero weights w of (1 − W(λw)).
pub fn floer_index(c: &FixedComponent, lambda: Period) -> i64 {
    c.weights
        .nonzero
        .iter()
        .map(|(&w, &h)| h as i64 * (1 - w_eval(lambda.value() * Ratio::from_integer(w))))
        .sum()
}

/// The first critical time λ_α = min{1/|w|} of a component, if it has any
/// nonzero weight.
pub fn first_critical_time(c: &FixedComponent) -> Option<Period> {
    c.weights
        .nonzero
        .keys()
        .map(|&w| Period::new(1, w.abs()))
        .min()
}

/// lcm of all |weights| in the spec (1 if there are none).
fn weight_lcm(spec: &ManifoldSpec) -> i64 {
    spec.components
        .iter()
        .flat_map(|c| c.weights.nonzero.keys())
        .fold(1i64, |l, &w| l.lcm(&w.abs()))
}

/// A rational strictly above λ but strictly below the next critical time:
/// λ + 1/(2L) with L = lcm of all |weights| and the denominator of λ.
pub fn lambda_plus(spec: &ManifoldSpec, lambda: Period) -> Period {
    let l = weight_lcm(spec).lcm(&lambda.denom());
    Period::from_ratio(lambda.value() + Ratio::new(1, 2 * l))
}

/// The mirror of [`lambda_plus`]: λ − 1/(2L).
pub fn lambda_minus(spec: &ManifoldSpec, lambda: Period) -> Period {
    let l = weight_lcm(spec).lcm(&lambda.denom());
    Period::from_ratio(lambda.value() - Ratio::new(1, 2 * l))
}

/// True iff λ equals k/|w| for some nonzero weight w in the spec, i.e. the
/// Floer data jumps at λ.
pub fn is_critical_time(spec: &ManifoldSpec, lambda: Period) -> bool {
    spec.components.iter().any(|c| {
        c.weights
            .nonzero
            .keys()
            .any(|&w| (lambda.value() * Ratio::from_integer(w.abs())).is_integer())
    })
}

/// One critical time of the action with everything that jumps there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalTime {
    pub period: Period,
    /// Components owning a weight w with T·|w| ∈ Z.
    pub components: BTreeSet<String>,
    /// Torsion families with a slice at this period (outer periods are
    /// exactly the critical times with a nonempty family set).
    pub families: BTreeSet<String>,
}

/// All critical times k/|w| ≤ λ_max, sorted, each annotated with the affected
/// components and the families whose slice appears there.
///
/// A slice of an m-torsion family occurs at k/m with gcd(k, m) = 1.
pub fn critical_times(spec: &ManifoldSpec, lambda_max: Period) -> Vec<CriticalTime> {
    let mut times: BTreeSet<Period> = BTreeSet::new();
    for c in &spec.components {
        for &w in c.weights.nonzero.keys() {
            let a = w.abs();
            let mut k = 1i64;
            while Ratio::new(k, a) <= lambda_max.value() {
                times.insert(Period::new(k, a));
                k += 1;
            }
        }
    }
    times
        .into_iter()
        .map(|t| {
            let components = spec
                .components
                .iter()
                .filter(|c| {
                    c.weights
                        .nonzero
                        .keys()
                        .any(|&w| (t.value() * Ratio::from_integer(w.abs())).is_integer())
                })
                .map(|c| c.id.clone())
                .collect();
            let families = spec
                .families
                .iter()
                .filter(|f| t.denom() == f.m)
                .map(|f| f.id.clone())
                .collect();
            CriticalTime {
                period: t,
                components,
                families,
            }
        })
        .collect()
}

/// The rank Σ_{b≥1} h_{mb} of a torsion family at its minimal member.
pub fn family_rank(spec: &ManifoldSpec, fam: &TorsionFamily) -> Result<u64, IndexError> {
    let min = spec
        .component(&fam.min_member)
        .ok_or_else(|| IndexError::UnknownComponent(fam.min_member.clone()))?;
    Ok(min
        .weights
        .nonzero
        .iter()
        .filter(|(&k, _)| k > 0 && k % fam.m == 0)
        .map(|(_, &h)| h)
        .sum())
}

/// The slice grading μ(B_{p,β}) at an outer period T = k/m.
///
/// Derived mode evaluates the closed form
/// `codim_C Y_{m,β} − Σ_i W(T·w_i)` (sum over all weights of the minimal
/// member; zero weights contribute 0) with `dim_C Y_{m,β} = dim_C(min) +
/// rank`, and asserts both cross-checks: the value equals
/// `μ_T(min) − rank` and equals `μ_{T⁺}(min)`.
///
/// Explicit mode reads the stored per-period grading, extended beyond period
/// 1 by the 2Nμ periodicity.
pub fn slice_grading(
    spec: &ManifoldSpec,
    fam: &TorsionFamily,
    t: Period,
) -> Result<i64, IndexError> {
    if t.denom() != fam.m || !t.is_positive() {
        return Err(IndexError::BadSlicePeriod {
            family: fam.id.clone(),
            period: t,
            m: fam.m,
        });
    }
    match &fam.structure {
        TorsionStructure::Explicit { slice_gradings, .. } => {
            let n = t.floor();
            let base = Period::from_ratio(t.value() - Ratio::from_integer(n));
            let stored =
                slice_gradings
                    .get(&base)
                    .ok_or_else(|| IndexError::MissingSliceGrading {
                        family: fam.id.clone(),
                        period: base,
                    })?;
            let mu = maslov_index(spec)?;
            Ok(stored - 2 * n * mu)
        }
        TorsionStructure::Bundle { .. } => {
            let min = spec
                .component(&fam.min_member)
                .ok_or_else(|| IndexError::UnknownComponent(fam.min_member.clone()))?;
            let rank = family_rank(spec, fam)? as i64;
            let dim_y_m = min.dimc as i64 + rank;
            let codim = spec.dim as i64 - dim_y_m;
            let w_sum: i64 = min
                .weights
                .nonzero
                .iter()
                .map(|(&w, &h)| h as i64 * w_eval(t.value() * Ratio::from_integer(w)))
                .sum::<i64>();
            let closed_form = codim - w_sum;

            let floer_at_t = floer_index(min, t);
            let floer_above_t = floer_index(min, lambda_plus(spec, t));
            if closed_form % 2 != 0
                || closed_form != floer_at_t - rank
                || closed_form != floer_above_t
            {
                return Err(IndexError::CrossCheckFailure {
                    family: fam.id.clone(),
                    period: t,
                    closed_form,
                    floer_at_t,
                    rank,
                    floer_above_t,
                });
            }
            Ok(closed_form)
        }
    }
}

/// The grading −2Nμ of the integer-period column B_N ≅ Σ.
pub fn integer_slice_grading(spec: &ManifoldSpec, n: i64) -> Result<i64, IndexError> {
    Ok(-2 * n * maslov_index(spec)?)
}

/// slice_grading(T) − 2Nμ, asserted equal to the direct evaluation at T + N.
pub fn periodicity_shift(
    spec: &ManifoldSpec,
    fam: &TorsionFamily,
    t: Period,
    n: i64,
) -> Result<i64, IndexError> {
    let shifted = slice_grading(spec, fam, t)? - 2 * n * maslov_index(spec)?;
    let direct = slice_grading(
        spec,
        fam,
        Period::from_ratio(t.value() + Ratio::from_integer(n)),
    )?;
    assert_eq!(
        shifted, direct,
        "periodicity of slice gradings violated for family {} at T={}",
        fam.id, t
    );
    Ok(shifted)
}

/// Whether every component has nonnegative partial sums
/// δ_r = Σ_{j≤r} (h_{k_j} − h_{−k_j}) over descending distinct absolute
/// weights k_1 > k_2 > ….
pub fn compatibly_weighted(spec: &ManifoldSpec) -> bool {
    spec.components.iter().all(|c| {
        let mut abs_weights: Vec<i64> = c
            .weights
            .nonzero
            .keys()
            .map(|&w| w.abs())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        abs_weights.reverse();
        let mut delta = 0i64;
        for k in abs_weights {
            let h = |w: i64| *c.weights.nonzero.get(&w).unwrap_or(&0) as i64;
            delta += h(k) - h(-k);
            if delta < 0 {
                return false;
            }
        }
        true
    })
}
