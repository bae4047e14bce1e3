//! Projective bundles P(E) over a curve B: the invariant e, automorphisms
//! over B, the twisting group Δ and the resulting component groups.
//!
//! Line bundles on B are described only by degree plus explicit flags
//! (triviality, 2-torsion), never by points of a Jacobian.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::lattice::FinAbGroup;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuledError {
    #[error("isomorphic summands must have equal degrees and no 2-torsion difference")]
    IsomorphicSummands,
    #[error("a 2-torsion difference needs equal degrees and base genus at least 1")]
    TorsionDifference,
    #[error("a stable bundle has e < 0, got e = {0}")]
    NotStable(i64),
    #[error("supplied delta {0} is not a subgroup of (Z/2)^{1}")]
    BadDelta(FinAbGroup, u64),
    #[error("h0 of a degree-{deg} line bundle on a genus-{genus} curve is not determined by the data")]
    UnknownH0 { deg: i64, genus: u64 },
    #[error("base genus {0} is handled by the other dispatch (genus >= 2 versus genus <= 1)")]
    WrongDispatch(u64),
    #[error("d must be even and positive, got {0}")]
    BadDegree(i64),
}

/// h⁰ of a line bundle, when degree data and flags determine it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum H0 {
    Known(u64),
    Unknown,
}

/// h⁰(B, L) from deg L, g(B), and (for degree 0) whether L is trivial.
pub fn h0_line_bundle(deg: i64, genus: u64, trivial_when_deg0: Option<bool>) -> H0 {
    let g = genus as i64;
    if deg < 0 {
        H0::Known(0)
    } else if deg == 0 && genus == 0 {
        // Pic⁰(P¹) is trivial
        H0::Known(1)
    } else if deg == 0 {
        match trivial_when_deg0 {
            Some(true) => H0::Known(1),
            Some(false) => H0::Known(0),
            None => H0::Unknown,
        }
    } else if deg > 2 * g - 2 {
        H0::Known((deg - g + 1) as u64)
    } else {
        H0::Unknown
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Bundle {
    /// L₁ ⊕ L₂ with deg L₁ ≥ deg L₂.
    Decomposable {
        deg1: i64,
        deg2: i64,
        #[serde(default)]
        l1l2_difference_is_nontrivial_2torsion: bool,
        #[serde(default)]
        summands_isomorphic: bool,
    },
    Indecomposable {
        e: i64,
        /// Degree of a maximal invertible subsheaf.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_sub_degree: Option<i64>,
        /// Whether L^2 ⊗ det(E)^-1 is trivial, for a maximal subsheaf L (only read when e = 0).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        twist_is_trivial: Option<bool>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta: Option<FinAbGroup>,
    },
    StableGiven {
        e: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta: Option<FinAbGroup>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRuled", into = "RawRuled")]
pub struct RuledDesc {
    base_genus: u64,
    bundle: Bundle,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRuled {
    base_genus: u64,
    bundle: Bundle,
}

impl TryFrom<RawRuled> for RuledDesc {
    type Error = RuledError;

    fn try_from(raw: RawRuled) -> Result<Self, Self::Error> {
        RuledDesc::new(raw.base_genus, raw.bundle)
    }
}

impl From<RuledDesc> for RawRuled {
    fn from(d: RuledDesc) -> Self {
        RawRuled { base_genus: d.base_genus, bundle: d.bundle }
    }
}

fn check_delta(delta: &Option<FinAbGroup>, genus: u64) -> Result<(), RuledError> {
    if let Some(d) = delta {
        let two = num_bigint::BigUint::from(2u32);
        let ok = d.invariant_factors().iter().all(|f| *f == two)
            && (d.invariant_factors().len() as u64) <= 2 * genus;
        if !ok {
            return Err(RuledError::BadDelta(d.clone(), 2 * genus));
        }
    }
    Ok(())
}

impl RuledDesc {
    /// Validates the bundle data; decomposable degrees are sorted so deg1 ≥ deg2.
    pub fn new(base_genus: u64, bundle: Bundle) -> Result<Self, RuledError> {
        let bundle = match bundle {
            Bundle::Decomposable { deg1, deg2, l1l2_difference_is_nontrivial_2torsion: tors, summands_isomorphic: iso } => {
                if iso && (deg1 != deg2 || tors) {
                    return Err(RuledError::IsomorphicSummands);
                }
                if tors && (deg1 != deg2 || base_genus == 0) {
                    return Err(RuledError::TorsionDifference);
                }
                Bundle::Decomposable {
                    deg1: deg1.max(deg2),
                    deg2: deg1.min(deg2),
                    l1l2_difference_is_nontrivial_2torsion: tors,
                    summands_isomorphic: iso,
                }
            }
            Bundle::Indecomposable { ref delta, .. } => {
                check_delta(delta, base_genus)?;
                bundle
            }
            Bundle::StableGiven { e, ref delta } => {
                if e >= 0 {
                    return Err(RuledError::NotStable(e));
                }
                check_delta(delta, base_genus)?;
                bundle
            }
        };
        Ok(RuledDesc { base_genus, bundle })
    }

    pub fn decomposable(base_genus: u64, deg1: i64, deg2: i64, two_torsion: bool, isomorphic: bool) -> Result<Self, RuledError> {
        RuledDesc::new(
            base_genus,
            Bundle::Decomposable {
                deg1,
                deg2,
                l1l2_difference_is_nontrivial_2torsion: two_torsion,
                summands_isomorphic: isomorphic,
            },
        )
    }

    pub fn stable(base_genus: u64, e: i64) -> Result<Self, RuledError> {
        RuledDesc::new(base_genus, Bundle::StableGiven { e, delta: None })
    }

    pub fn indecomposable(base_genus: u64, e: i64) -> Result<Self, RuledError> {
        RuledDesc::new(
            base_genus,
            Bundle::Indecomposable { e, max_sub_degree: None, twist_is_trivial: None, delta: None },
        )
    }

    pub fn base_genus(&self) -> u64 {
        self.base_genus
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }
}

pub fn invariant_e(desc: &RuledDesc) -> i64 {
    match desc.bundle {
        Bundle::Decomposable { deg1, deg2, .. } => deg1 - deg2,
        Bundle::Indecomposable { e, .. } | Bundle::StableGiven { e, .. } => e,
    }
}

/// Automorphisms of the bundle over the identity of B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "r", rename_all = "snake_case")]
pub enum FibreAutGroup {
    Cstar,
    H(u64),
    Hprime(u64),
    Gl2,
}

impl FibreAutGroup {
    pub fn dimension(&self) -> u64 {
        match self {
            FibreAutGroup::Cstar => 1,
            FibreAutGroup::H(r) => r + 1,
            FibreAutGroup::Hprime(r) => r + 2,
            FibreAutGroup::Gl2 => 4,
        }
    }

    /// Dimension after dividing by the scalars C*.
    pub fn projective_dimension(&self) -> u64 {
        self.dimension() - 1
    }
}

impl fmt::Display for FibreAutGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FibreAutGroup::Cstar => write!(f, "C*"),
            FibreAutGroup::H(r) => write!(f, "H_{r}"),
            FibreAutGroup::Hprime(r) => write!(f, "H'_{r}"),
            FibreAutGroup::Gl2 => write!(f, "GL(2,C)"),
        }
    }
}

fn known_h0(deg: i64, genus: u64, trivial: Option<bool>) -> Result<u64, RuledError> {
    match h0_line_bundle(deg, genus, trivial) {
        H0::Known(r) => Ok(r),
        H0::Unknown => Err(RuledError::UnknownH0 { deg, genus }),
    }
}

pub fn fibre_aut_group(desc: &RuledDesc) -> Result<FibreAutGroup, RuledError> {
    let g = desc.base_genus;
    match desc.bundle {
        Bundle::StableGiven { .. } => Ok(FibreAutGroup::Cstar),
        Bundle::Indecomposable { e, .. } if e < 0 => Ok(FibreAutGroup::Cstar),
        Bundle::Indecomposable { e, twist_is_trivial, .. } => {
            Ok(FibreAutGroup::H(known_h0(e, g, twist_is_trivial)?))
        }
        Bundle::Decomposable { summands_isomorphic: true, .. } => Ok(FibreAutGroup::Gl2),
        // L₁ ⊗ L₂⁻¹ has degree e and is nontrivial because L₁ ≇ L₂
        Bundle::Decomposable { deg1, deg2, .. } => {
            Ok(FibreAutGroup::Hprime(known_h0(deg1 - deg2, g, Some(false))?))
        }
    }
}

/// Δ = {L ∈ Pic⁰(B) : E ⊗ L ≅ E}; `None` when the data do not determine it.
pub fn delta_group(desc: &RuledDesc) -> Option<FinAbGroup> {
    match &desc.bundle {
        Bundle::Decomposable { l1l2_difference_is_nontrivial_2torsion: true, .. } => {
            Some(FinAbGroup::cyclic(2u32))
        }
        Bundle::Decomposable { .. } => Some(FinAbGroup::trivial()),
        Bundle::Indecomposable { delta, .. } | Bundle::StableGiven { delta, .. } => delta.clone(),
    }
}

/// Target of the lifting obstruction, Hom(π₁(B), ℤ/2) ≅ (ℤ/2)^{2g}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionClass {
    pub target: FinAbGroup,
}

impl ObstructionClass {
    pub fn for_genus(g: u64) -> Self {
        ObstructionClass { target: FinAbGroup::power(2u32, 2 * g as usize) }
    }

    pub fn order(&self) -> u64 {
        self.target.order().and_then(|o| o.to_u64()).expect("finite 2-group")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusAtLeastTwoReport {
    pub base_genus: u64,
    /// `None` when an h⁰ in the range 0 < deg ≤ 2g-2 is needed.
    pub fibre_group: Option<FibreAutGroup>,
    /// dim Aut₀ = dim of the fibre group modulo scalars.
    pub aut0_dimension: Option<u64>,
    pub delta: Option<FinAbGroup>,
    pub gamma_q: Option<FinAbGroup>,
    pub gamma_z: Option<FinAbGroup>,
    pub gamma_sharp: FinAbGroup,
    pub gamma_star: FinAbGroup,
    pub notes: Vec<String>,
}

pub fn component_groups_genus_ge2(desc: &RuledDesc) -> Result<GenusAtLeastTwoReport, RuledError> {
    if desc.base_genus < 2 {
        return Err(RuledError::WrongDispatch(desc.base_genus));
    }
    let fibre_group = match fibre_aut_group(desc) {
        Ok(f) => Some(f),
        Err(RuledError::UnknownH0 { .. }) => None,
        Err(e) => return Err(e),
    };
    let delta = delta_group(desc);
    Ok(GenusAtLeastTwoReport {
        base_genus: desc.base_genus,
        fibre_group,
        aut0_dimension: fibre_group.map(|f| f.projective_dimension()),
        gamma_q: delta.clone(),
        gamma_z: delta.clone(),
        delta,
        gamma_sharp: FinAbGroup::trivial(),
        gamma_star: FinAbGroup::trivial(),
        notes: vec![
            "Aut_Q = Aut_Z = Aut_B(X)".into(),
            match fibre_group {
                Some(f) => format!("Aut_0 = {f} / C*"),
                None => "Aut_0 = Aut_B(E) / C*, not determined by degree data".into(),
            },
            "1 -> Aut_0 -> Aut_B(X) -> Delta -> 1".into(),
        ],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MaruyamaCase {
    #[serde(rename = "1")]
    Hirzebruch,
    #[serde(rename = "2(a)")]
    DecomposablePositive,
    #[serde(rename = "2(c)")]
    TwoMinimalSections,
    #[serde(rename = "2(d)")]
    Product,
    #[serde(rename = "3(a)")]
    IndecomposableZero,
    #[serde(rename = "3(b)")]
    IndecomposableOne,
}

impl fmt::Display for MaruyamaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MaruyamaCase::Hirzebruch => "1",
            MaruyamaCase::DecomposablePositive => "2(a)",
            MaruyamaCase::TwoMinimalSections => "2(c)",
            MaruyamaCase::Product => "2(d)",
            MaruyamaCase::IndecomposableZero => "3(a)",
            MaruyamaCase::IndecomposableOne => "3(b)",
        })
    }
}

/// Structural description of Aut(X) for a bundle over a curve of genus ≤ 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaruyamaReport {
    /// `None` when the data fall outside the listed cases (e.g. P¹ × P¹).
    pub case: Option<MaruyamaCase>,
    pub e: i64,
    pub aut_equals_aut0: Option<bool>,
    pub aut_z_equals_aut0: Option<bool>,
    /// Aut_Z / Aut_B when it is a finite group given by the case.
    pub aut_z_over_aut_b: Option<FinAbGroup>,
    pub delta: Option<FinAbGroup>,
    pub sequences: Vec<String>,
}

pub fn maruyama_report(desc: &RuledDesc) -> Result<MaruyamaReport, RuledError> {
    let g = desc.base_genus;
    if g >= 2 {
        return Err(RuledError::WrongDispatch(g));
    }
    let e = invariant_e(desc);
    let mut r = MaruyamaReport {
        case: None,
        e,
        aut_equals_aut0: None,
        aut_z_equals_aut0: None,
        aut_z_over_aut_b: None,
        delta: None,
        sequences: Vec::new(),
    };
    match (g, &desc.bundle) {
        (0, _) if e > 0 => {
            r.case = Some(MaruyamaCase::Hirzebruch);
            r.aut_equals_aut0 = Some(true);
            r.aut_z_equals_aut0 = Some(true);
            r.sequences.push(format!("1 -> H_{}/C* -> Aut(X) -> PGL(2,C) -> 1", e + 1));
        }
        (0, _) => {}
        (_, Bundle::Decomposable { summands_isomorphic: true, .. }) => {
            r.case = Some(MaruyamaCase::Product);
            r.aut_z_equals_aut0 = Some(true);
            r.sequences.push("Aut(X) = PGL(2,C) x Aut(B)".into());
            r.sequences.push("Aut_Z(X) = Aut_0(X) = PGL(2,C) x Aut_0(B)".into());
        }
        (_, Bundle::Decomposable { .. }) if e > 0 => {
            let rank = known_h0(e, g, Some(false))?;
            let torsion = FinAbGroup::power(e as u64, 2);
            r.case = Some(MaruyamaCase::DecomposablePositive);
            r.aut_z_equals_aut0 = Some(false);
            r.aut_z_over_aut_b = Some(torsion.clone());
            r.sequences.push(format!("Aut_B(X) = Aut_0(X) = H'_{rank}/C*"));
            r.sequences.push(format!("1 -> Aut_B(X) -> Aut_Z(X) -> Aut_0(B)[{e}] = {torsion} -> 1"));
        }
        (_, Bundle::Decomposable { .. }) => {
            r.case = Some(MaruyamaCase::TwoMinimalSections);
            r.sequences.push("Aut_0(X) = X - (C1 u C2)".into());
            r.sequences.push("Aut_B(X) = Aut_0(X) x| Z/2 (exchanging C1 and C2)".into());
        }
        (_, _) if e == 0 => {
            r.case = Some(MaruyamaCase::IndecomposableZero);
            r.aut_z_equals_aut0 = Some(true);
            r.sequences.push("1 -> C* -> Aut(X) -> Aut(B) -> 1".into());
            r.sequences.push("Aut_Z(X) = Aut_0(X) = X - C, a nontrivial extension of Aut_0(B) by C*".into());
        }
        // Normalized rank-2 bundles over an elliptic curve that are
        // indecomposable with odd degree have |e| = 1.
        (_, _) if e.abs() == 1 => {
            let delta = FinAbGroup::power(2u32, 2);
            r.case = Some(MaruyamaCase::IndecomposableOne);
            r.aut_z_equals_aut0 = Some(true);
            r.delta = Some(delta.clone());
            r.sequences.push(format!("1 -> Delta = {delta} -> Aut(X) -> Aut(B) -> 1"));
            r.sequences.push(format!("1 -> Delta = {delta} -> Aut_0(X) -> Aut_0(B) -> 1"));
        }
        _ => {}
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaStarBound {
    pub d: u64,
    pub kernel: FinAbGroup,
    pub obstruction: ObstructionClass,
    /// The image of the kernel in Γ* has index at most this.
    pub max_index: u64,
    /// |Γ*| ≥ (d/2)².
    pub lower_bound: u64,
}

/// Lower bound for Γ* of P(O ⊕ O(D)) over an elliptic curve, deg D = d even.
pub fn elliptic_ruled_gamma_star(d: i64) -> Result<GammaStarBound, RuledError> {
    if d <= 0 || d % 2 != 0 {
        return Err(RuledError::BadDegree(d));
    }
    let d = d as u64;
    let obstruction = ObstructionClass::for_genus(1);
    let m = d / 2;
    Ok(GammaStarBound {
        d,
        kernel: crate::elliptic::phi_d_kernel(d),
        max_index: obstruction.order(),
        obstruction,
        lower_bound: m * m,
    })
}
