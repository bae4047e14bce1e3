//! Automorphisms of complex elliptic curves C/(Z + Zτ), written in the real
//! basis (1, τ), and normalizers of the bielliptic group actions.

mod group_id;
mod normalizer;

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::lattice::FinAbGroup;
use crate::serde_util::{format_rational64, parse_rational64};

pub use group_id::{CayleyTable, FiniteGroupId};
pub use normalizer::{
    bdf_table, normalizer_quotient, normalizer_quotient_detailed, BdfTableEntry, LevelTrial,
    NormalizerOptions, NormalizerReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EllipticError {
    #[error("unknown action type {0} (expected 1 to 7)")]
    UnknownType(u8),
    #[error("type {type_index} requires the {required} curve, got {given}")]
    IncompatibleCurve { type_index: u8, required: TauClass, given: TauClass },
    #[error("type 2 requires a nontrivial 2-torsion point epsilon")]
    MissingEpsilon,
    #[error("epsilon {0} is not a nontrivial 2-torsion point")]
    BadEpsilon(TorsionPoint),
    #[error("epsilon is only meaningful for type 2")]
    UnexpectedEpsilon,
    #[error("linear part {0:?} is not a unit of the {1} curve")]
    NotAUnit(Mat2, TauClass),
    #[error("generators of type {type_index}: {what} is {found}, expected {expected}")]
    WrongGroup { type_index: u8, what: &'static str, found: usize, expected: usize },
    #[error("torsion bound {bound} is not a multiple of the generator denominators ({needed})")]
    TorsionBoundTooSmall { bound: u64, needed: u64 },
    #[error("normalizer translations did not stabilize up to level {0}")]
    NoStabilization(u64),
    #[error("invalid rational coordinate {0:?}")]
    BadCoordinate(String),
}

/// Period class of the curve: τ generic, τ = i, or τ = ω = e^{2πi/3}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauClass {
    Generic,
    Square,
    Hexagonal,
}

impl TauClass {
    pub const ALL: [TauClass; 3] = [TauClass::Generic, TauClass::Square, TauClass::Hexagonal];

    pub fn unit_order(self) -> usize {
        match self {
            TauClass::Generic => 2,
            TauClass::Square => 4,
            TauClass::Hexagonal => 6,
        }
    }
}

impl fmt::Display for TauClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TauClass::Generic => "generic",
            TauClass::Square => "square",
            TauClass::Hexagonal => "hexagonal",
        })
    }
}

impl std::str::FromStr for TauClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "generic" => Ok(TauClass::Generic),
            "square" => Ok(TauClass::Square),
            "hexagonal" => Ok(TauClass::Hexagonal),
            _ => Err(format!("unknown curve {s:?} (expected generic, square or hexagonal)")),
        }
    }
}

/// 2×2 integer matrix, row-major.
pub type Mat2 = [[i64; 2]; 2];

pub const IDENTITY: Mat2 = [[1, 0], [0, 1]];
/// Multiplication by i on the basis (1, i).
pub const MUL_I: Mat2 = [[0, -1], [1, 0]];
/// Multiplication by ω on the basis (1, ω), using ω² = −1 − ω.
pub const MUL_OMEGA: Mat2 = [[0, -1], [1, -1]];
/// Multiplication by −ω, a generator of the order-6 unit group.
pub const MUL_NEG_OMEGA: Mat2 = [[0, 1], [-1, 1]];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn mat_neg(a: &Mat2) -> Mat2 {
    [[-a[0][0], -a[0][1]], [-a[1][0], -a[1][1]]]
}

pub fn mat_det(a: &Mat2) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Inverse of a determinant-1 matrix.
fn mat_inv(a: &Mat2) -> Mat2 {
    debug_assert_eq!(mat_det(a), 1);
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

/// The unit group as matrices, listed as successive powers of a generator.
pub fn unit_group(tau: TauClass) -> Vec<Mat2> {
    let gen = match tau {
        TauClass::Generic => mat_neg(&IDENTITY),
        TauClass::Square => MUL_I,
        TauClass::Hexagonal => MUL_NEG_OMEGA,
    };
    let mut out = vec![IDENTITY];
    for _ in 1..tau.unit_order() {
        out.push(mat_mul(&gen, out.last().expect("nonempty")));
    }
    out
}

/// Point of the real torus R²/Z² with rational coordinates in [0, 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[String; 2]", into = "[String; 2]")]
pub struct TorsionPoint {
    x: Rational64,
    y: Rational64,
}

fn reduce_mod_one(r: Rational64) -> Rational64 {
    r - r.floor()
}

impl TorsionPoint {
    pub fn new(x: Rational64, y: Rational64) -> Self {
        TorsionPoint { x: reduce_mod_one(x), y: reduce_mod_one(y) }
    }

    /// Point (a/b, c/d); panics on zero denominators.
    pub fn from_fractions(a: i64, b: i64, c: i64, d: i64) -> Self {
        TorsionPoint::new(Rational64::new(a, b), Rational64::new(c, d))
    }

    pub fn zero() -> Self {
        TorsionPoint { x: Rational64::zero(), y: Rational64::zero() }
    }

    pub fn x(&self) -> Rational64 {
        self.x
    }

    pub fn y(&self) -> Rational64 {
        self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Order in the group R²/Z², i.e. the lcm of the reduced denominators.
    pub fn order(&self) -> i64 {
        self.x.denom().lcm(self.y.denom())
    }

    pub fn add(&self, other: &TorsionPoint) -> TorsionPoint {
        TorsionPoint::new(self.x + other.x, self.y + other.y)
    }

    pub fn neg(&self) -> TorsionPoint {
        TorsionPoint::new(-self.x, -self.y)
    }

    pub fn scale(&self, k: i64) -> TorsionPoint {
        TorsionPoint::new(self.x * k, self.y * k)
    }

    /// Image under the linear map `m` acting on column vectors.
    pub fn apply(&self, m: &Mat2) -> TorsionPoint {
        TorsionPoint::new(
            self.x * m[0][0] + self.y * m[0][1],
            self.x * m[1][0] + self.y * m[1][1],
        )
    }

    /// The three nonzero points of order 2.
    pub fn two_torsion() -> [TorsionPoint; 3] {
        [
            TorsionPoint::from_fractions(1, 2, 0, 1),
            TorsionPoint::from_fractions(0, 1, 1, 2),
            TorsionPoint::from_fractions(1, 2, 1, 2),
        ]
    }
}

impl TryFrom<[String; 2]> for TorsionPoint {
    type Error = EllipticError;

    fn try_from([a, b]: [String; 2]) -> Result<Self, Self::Error> {
        let x = parse_rational64(&a).ok_or(EllipticError::BadCoordinate(a))?;
        let y = parse_rational64(&b).ok_or(EllipticError::BadCoordinate(b))?;
        Ok(TorsionPoint::new(x, y))
    }
}

impl From<TorsionPoint> for [String; 2] {
    fn from(p: TorsionPoint) -> Self {
        [format_rational64(&p.x), format_rational64(&p.y)]
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational64(&self.x), format_rational64(&self.y))
    }
}

/// Automorphism x ↦ u·x + t of the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllAut {
    pub linear: Mat2,
    pub translation: TorsionPoint,
}

impl EllAut {
    pub fn new(linear: Mat2, translation: TorsionPoint) -> Self {
        EllAut { linear, translation }
    }

    pub fn identity() -> Self {
        EllAut::new(IDENTITY, TorsionPoint::zero())
    }

    pub fn linear(u: Mat2) -> Self {
        EllAut::new(u, TorsionPoint::zero())
    }

    pub fn translation(t: TorsionPoint) -> Self {
        EllAut::new(IDENTITY, t)
    }

    pub fn is_translation(&self) -> bool {
        self.linear == IDENTITY
    }

    /// (u, t) ∘ (u′, t′) = (u·u′, u·t′ + t).
    pub fn compose(&self, other: &EllAut) -> EllAut {
        EllAut::new(
            mat_mul(&self.linear, &other.linear),
            other.translation.apply(&self.linear).add(&self.translation),
        )
    }

    pub fn inverse(&self) -> EllAut {
        let inv = mat_inv(&self.linear);
        EllAut::new(inv, self.translation.apply(&inv).neg())
    }

    pub fn apply(&self, p: &TorsionPoint) -> TorsionPoint {
        p.apply(&self.linear).add(&self.translation)
    }
}

impl fmt::Display for EllAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = &self.linear;
        write!(f, "x -> [[{}, {}], [{}, {}]]x + {}", u[0][0], u[0][1], u[1][0], u[1][1], self.translation)
    }
}

/// (ℤ/n)², the n-torsion of an elliptic curve.
pub fn torsion_subgroup(n: u64) -> FinAbGroup {
    FinAbGroup::power(n, 2)
}

/// Kernel of a ↦ t_a*D − D for a divisor of degree d, which is E[d] ≅ (ℤ/d)².
pub fn phi_d_kernel(d: u64) -> FinAbGroup {
    torsion_subgroup(d)
}

/// One of the seven bielliptic action types on the curve F, with generators of G.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDatum", into = "RawDatum")]
pub struct BdfDatum {
    type_index: u8,
    tau: TauClass,
    epsilon: Option<TorsionPoint>,
    generators: Vec<EllAut>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDatum {
    #[serde(rename = "type")]
    type_index: u8,
    curve: TauClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<TorsionPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<EllAut>>,
}

impl TryFrom<RawDatum> for BdfDatum {
    type Error = EllipticError;

    fn try_from(raw: RawDatum) -> Result<Self, Self::Error> {
        match raw.generators {
            None => BdfDatum::standard(raw.type_index, raw.curve, raw.epsilon),
            Some(gens) => BdfDatum::with_generators(raw.type_index, raw.curve, raw.epsilon, gens),
        }
    }
}

impl From<BdfDatum> for RawDatum {
    fn from(d: BdfDatum) -> Self {
        RawDatum {
            type_index: d.type_index,
            curve: d.tau,
            epsilon: d.epsilon,
            generators: Some(d.generators),
        }
    }
}

/// Per type: required curve, |G|, |G ∩ translations|, |linear image of G|.
fn type_profile(type_index: u8) -> Result<(Option<TauClass>, usize, usize, usize), EllipticError> {
    Ok(match type_index {
        1 => (None, 2, 1, 2),
        2 => (None, 4, 2, 2),
        3 => (Some(TauClass::Square), 4, 1, 4),
        4 => (Some(TauClass::Square), 8, 2, 4),
        5 => (Some(TauClass::Hexagonal), 3, 1, 3),
        6 => (Some(TauClass::Hexagonal), 9, 3, 3),
        7 => (Some(TauClass::Hexagonal), 6, 1, 6),
        other => return Err(EllipticError::UnknownType(other)),
    })
}

/// Closure of `gens` under composition (the group is finite for valid data).
pub fn generate_group(gens: &[EllAut]) -> Vec<EllAut> {
    let mut elems = vec![EllAut::identity()];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let p = elems[i].compose(g);
            if !elems.contains(&p) {
                elems.push(p);
            }
        }
        i += 1;
        assert!(elems.len() <= 10_000, "generated group is unexpectedly large");
    }
    elems
}

impl BdfDatum {
    /// The listed generators of the given type (ε only for type 2).
    pub fn standard(
        type_index: u8,
        tau: TauClass,
        epsilon: Option<TorsionPoint>,
    ) -> Result<Self, EllipticError> {
        let minus = mat_neg(&IDENTITY);
        let gens = match type_index {
            1 => vec![EllAut::linear(minus)],
            2 => {
                let eps = epsilon.ok_or(EllipticError::MissingEpsilon)?;
                vec![EllAut::linear(minus), EllAut::translation(eps)]
            }
            3 => vec![EllAut::linear(MUL_I)],
            4 => vec![EllAut::linear(MUL_I), EllAut::translation(TorsionPoint::from_fractions(1, 2, 1, 2))],
            5 => vec![EllAut::linear(MUL_OMEGA)],
            6 => vec![
                EllAut::linear(MUL_OMEGA),
                EllAut::translation(TorsionPoint::from_fractions(1, 3, 2, 3)),
            ],
            7 => vec![EllAut::linear(MUL_NEG_OMEGA)],
            other => return Err(EllipticError::UnknownType(other)),
        };
        BdfDatum::with_generators(type_index, tau, epsilon, gens)
    }

    /// Checks curve compatibility and the shape of the generated group.
    pub fn with_generators(
        type_index: u8,
        tau: TauClass,
        epsilon: Option<TorsionPoint>,
        generators: Vec<EllAut>,
    ) -> Result<Self, EllipticError> {
        let (required, order, translations, linear) = type_profile(type_index)?;
        if let Some(req) = required {
            if req != tau {
                return Err(EllipticError::IncompatibleCurve { type_index, required: req, given: tau });
            }
        }
        match (type_index, epsilon) {
            (2, None) => return Err(EllipticError::MissingEpsilon),
            (2, Some(e)) if e.is_zero() || e.order() != 2 => return Err(EllipticError::BadEpsilon(e)),
            (2, Some(e)) if !generators.contains(&EllAut::translation(e)) => {
                return Err(EllipticError::BadEpsilon(e))
            }
            (t, Some(_)) if t != 2 => return Err(EllipticError::UnexpectedEpsilon),
            _ => {}
        }
        let units = unit_group(tau);
        if let Some(g) = generators.iter().find(|g| !units.contains(&g.linear)) {
            return Err(EllipticError::NotAUnit(g.linear, tau));
        }
        let elems = generate_group(&generators);
        let check = |what, found: usize, expected| {
            if found == expected {
                Ok(())
            } else {
                Err(EllipticError::WrongGroup { type_index, what, found, expected })
            }
        };
        check("group order", elems.len(), order)?;
        check("translation subgroup order", elems.iter().filter(|g| g.is_translation()).count(), translations)?;
        let mut lin: Vec<Mat2> = elems.iter().map(|g| g.linear).collect();
        lin.sort();
        lin.dedup();
        check("linear image order", lin.len(), linear)?;
        Ok(BdfDatum { type_index, tau, epsilon, generators })
    }

    pub fn type_index(&self) -> u8 {
        self.type_index
    }

    pub fn tau(&self) -> TauClass {
        self.tau
    }

    pub fn epsilon(&self) -> Option<TorsionPoint> {
        self.epsilon
    }

    pub fn generators(&self) -> &[EllAut] {
        &self.generators
    }

    /// Curves on which the type exists.
    pub fn admissible_curves(type_index: u8) -> Result<Vec<TauClass>, EllipticError> {
        Ok(match type_profile(type_index)?.0 {
            Some(t) => vec![t],
            None => TauClass::ALL.to_vec(),
        })
    }
}

impl fmt::Display for BdfDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {} on the {} curve", self.type_index, self.tau)?;
        if let Some(e) = self.epsilon {
            write!(f, " with epsilon {e}")?;
        }
        Ok(())
    }
}
