//! Orbifold data of a fibration or group quotient: the abelianized orbifold
//! fundamental group, the double-fibre swap test, and Riemann–Hurwitz.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::{
    cokernel, solve_integer_certified, FinAbGroup, IntMatrix, IntegerSolution,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbifoldError {
    #[error("multiplicity {0} is below 2")]
    BadMultiplicity(u64),
    #[error("fibre index {index} is out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("fibre indices must differ (got {0} twice)")]
    SameIndex(usize),
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("multiplicity {m} does not divide the group order {order}")]
    NonDividingMultiplicity { m: u64, order: u64 },
    #[error("inconsistent datum: 2g-2 = {0} does not give a genus")]
    NoGenus(String),
}

/// Base genus g together with branch multiplicities (m₁, …, m_r), each ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSignature", into = "RawSignature")]
pub struct OrbifoldSignature {
    genus: u64,
    multiplicities: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSignature {
    genus: u64,
    #[serde(default)]
    multiplicities: Vec<u64>,
}

impl TryFrom<RawSignature> for OrbifoldSignature {
    type Error = OrbifoldError;

    fn try_from(raw: RawSignature) -> Result<Self, Self::Error> {
        OrbifoldSignature::new(raw.genus, raw.multiplicities)
    }
}

impl From<OrbifoldSignature> for RawSignature {
    fn from(s: OrbifoldSignature) -> Self {
        RawSignature { genus: s.genus, multiplicities: s.multiplicities }
    }
}

impl OrbifoldSignature {
    pub fn new(genus: u64, multiplicities: Vec<u64>) -> Result<Self, OrbifoldError> {
        if let Some(&m) = multiplicities.iter().find(|&&m| m < 2) {
            return Err(OrbifoldError::BadMultiplicity(m));
        }
        Ok(OrbifoldSignature { genus, multiplicities })
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    /// Number of multiple fibres (branch points).
    pub fn len(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    /// Converts a 1-based fibre index to a 0-based position.
    fn position(&self, index: usize) -> Result<usize, OrbifoldError> {
        if index == 0 || index > self.len() {
            return Err(OrbifoldError::IndexOutOfRange { index, len: self.len() });
        }
        Ok(index - 1)
    }

    fn pair(&self, i: usize, j: usize) -> Result<(usize, usize), OrbifoldError> {
        let (a, b) = (self.position(i)?, self.position(j)?);
        if a == b {
            return Err(OrbifoldError::SameIndex(i));
        }
        Ok((a, b))
    }

    /// Columns m₁e₁, …, m_re_r, Σeᵢ as an r × (r+1) matrix.
    pub fn relation_matrix(&self) -> IntMatrix {
        let r = self.len();
        let mut m = IntMatrix::zeros(r, r + 1);
        for (k, &mk) in self.multiplicities.iter().enumerate() {
            m[(k, k)] = BigInt::from(mk);
            m[(k, r)] = BigInt::one();
        }
        m
    }
}

impl fmt::Display for OrbifoldSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms: Vec<String> = self.multiplicities.iter().map(u64::to_string).collect();
        write!(f, "({}; {})", self.genus, ms.join(","))
    }
}

/// ℤ^{2g} ⊕ coker({mᵢeᵢ} ∪ {Σeᵢ}).
pub fn abelianized_orbifold_group(sig: &OrbifoldSignature) -> FinAbGroup {
    let genus = usize::try_from(sig.genus).expect("genus fits in memory");
    FinAbGroup::free(2 * genus).direct_sum(&cokernel(&sig.relation_matrix()))
}

/// Result of asking whether fibre classes cᵢ and cⱼ can coincide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FibreIdentification {
    /// mᵢ ≠ mⱼ, so no lattice computation is needed.
    MultiplicitiesDiffer,
    /// Membership of eᵢ − eⱼ in the relation lattice, with its certificate.
    Lattice { solution: IntegerSolution },
}

impl FibreIdentification {
    pub fn identified(&self) -> bool {
        matches!(self, FibreIdentification::Lattice { solution: IntegerSolution::Solvable { .. } })
    }
}

/// Decides whether eᵢ − eⱼ lies in the relation lattice (1-based indices).
pub fn fibre_identification(
    sig: &OrbifoldSignature,
    i: usize,
    j: usize,
) -> Result<FibreIdentification, OrbifoldError> {
    let (a, b) = sig.pair(i, j)?;
    if sig.multiplicities[a] != sig.multiplicities[b] {
        return Ok(FibreIdentification::MultiplicitiesDiffer);
    }
    let mut v = vec![BigInt::zero(); sig.len()];
    v[a] = BigInt::one();
    v[b] = -BigInt::one();
    let solution = solve_integer_certified(&sig.relation_matrix(), &v)
        .expect("relation matrix has one row per fibre");
    Ok(FibreIdentification::Lattice { solution })
}

pub fn fibre_classes_identified(
    sig: &OrbifoldSignature,
    i: usize,
    j: usize,
) -> Result<bool, OrbifoldError> {
    Ok(fibre_identification(sig, i, j)?.identified())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    BaseGenusAtLeastTwo,
    MultiplicitiesDiffer,
    MultiplicityNotTwo,
    ThirdEvenMultiplicity,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExclusionReason::BaseGenusAtLeastTwo => "base genus ≥ 2",
            ExclusionReason::MultiplicitiesDiffer => "multiplicities differ",
            ExclusionReason::MultiplicityNotTwo => "multiplicity is not 2",
            ExclusionReason::ThirdEvenMultiplicity => "third even multiplicity",
        })
    }
}

/// Whether a cohomologically trivial automorphism can exchange fibres i and j.
/// There is no "realized" outcome: only exclusion is ever decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "snake_case")]
pub enum SwapVerdict {
    Excluded(ExclusionReason),
    NotExcluded,
}

impl fmt::Display for SwapVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SwapVerdict::Excluded(r) => write!(f, "Excluded({r})"),
            SwapVerdict::NotExcluded => write!(f, "NotExcluded"),
        }
    }
}

/// Closed-form swap test; reports the first failing condition.
pub fn swap_excluded(
    sig: &OrbifoldSignature,
    base_genus: u64,
    i: usize,
    j: usize,
) -> Result<SwapVerdict, OrbifoldError> {
    let (a, b) = sig.pair(i, j)?;
    let ms = sig.multiplicities();
    let reason = if base_genus >= 2 {
        Some(ExclusionReason::BaseGenusAtLeastTwo)
    } else if ms[a] != ms[b] {
        Some(ExclusionReason::MultiplicitiesDiffer)
    } else if ms[a] != 2 {
        Some(ExclusionReason::MultiplicityNotTwo)
    } else if ms.iter().enumerate().any(|(k, &m)| k != a && k != b && m % 2 == 0) {
        Some(ExclusionReason::ThirdEvenMultiplicity)
    } else {
        None
    };
    Ok(reason.map_or(SwapVerdict::NotExcluded, SwapVerdict::Excluded))
}

/// Σ(1 − 1/mᵢ).
fn branch_sum(sig: &OrbifoldSignature) -> BigRational {
    sig.multiplicities
        .iter()
        .map(|&m| BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(m)))
        .sum()
}

/// 2 − 2g − Σ(1 − 1/mᵢ).
pub fn orbifold_euler(sig: &OrbifoldSignature) -> BigRational {
    let top = BigRational::from_integer(BigInt::from(2) - BigInt::from(2) * BigInt::from(sig.genus));
    top - branch_sum(sig)
}

/// Genus g of a G-cover with quotient signature `quotient`, from
/// 2g − 2 = |G|·(2g′ − 2 + Σ(1 − 1/mᵢ)).
pub fn hurwitz_genus(group_order: u64, quotient: &OrbifoldSignature) -> Result<u64, OrbifoldError> {
    if group_order == 0 {
        return Err(OrbifoldError::ZeroOrder);
    }
    if let Some(&m) = quotient.multiplicities.iter().find(|&&m| group_order % m != 0) {
        return Err(OrbifoldError::NonDividingMultiplicity { m, order: group_order });
    }
    let two_g_minus_two = -orbifold_euler(quotient) * BigInt::from(group_order);
    let shown = crate::serde_util::format_big_rational(&two_g_minus_two);
    if !two_g_minus_two.is_integer() {
        return Err(OrbifoldError::NoGenus(shown));
    }
    let twice_genus: BigInt = two_g_minus_two.to_integer() + 2;
    if twice_genus.is_negative() || !(&twice_genus % 2u32).is_zero() {
        return Err(OrbifoldError::NoGenus(shown));
    }
    (twice_genus / 2u32).to_u64().ok_or(OrbifoldError::NoGenus(shown))
}
