//! Picard lattices of blow-ups of the plane, and the weight calculus of a
//! one-parameter torus acting through a chain of equivariant blow-ups.

use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlowupError {
    #[error("classes live on different blow-ups ({0} and {1} exceptional curves)")]
    RankMismatch(usize, usize),
}

/// Divisor class h·H + Σ eᵢ·Eᵢ on the blow-up of the plane at k points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardClass {
    pub h: i64,
    pub e: Vec<i64>,
}

impl PicardClass {
    pub fn new(h: i64, e: Vec<i64>) -> Self {
        PicardClass { h, e }
    }

    pub fn line(k: usize) -> Self {
        PicardClass::new(1, vec![0; k])
    }

    /// Eᵢ, with `i` 1-based.
    pub fn exceptional(k: usize, i: usize) -> Self {
        let mut e = vec![0; k];
        e[i - 1] = 1;
        PicardClass::new(0, e)
    }

    pub fn k(&self) -> usize {
        self.e.len()
    }

    pub fn self_intersection(&self) -> i64 {
        intersect(self, self).expect("same rank")
    }
}

impl fmt::Display for PicardClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let es: Vec<String> = self.e.iter().map(i64::to_string).collect();
        write!(f, "({}; {})", self.h, es.join(", "))
    }
}

/// H² = 1, Eᵢ² = −1, all other products zero.
pub fn intersect(a: &PicardClass, b: &PicardClass) -> Result<i64, BlowupError> {
    if a.k() != b.k() {
        return Err(BlowupError::RankMismatch(a.k(), b.k()));
    }
    Ok(a.h * b.h - a.e.iter().zip(&b.e).map(|(x, y)| x * y).sum::<i64>())
}

/// K = −3H + ΣEᵢ.
pub fn canonical_class(k: usize) -> PicardClass {
    PicardClass::new(-3, vec![1; k])
}

/// c² = −1 and c·K = −1. Purely numerical: effectivity is not checked.
pub fn is_minus_one_class(c: &PicardClass) -> bool {
    c.self_intersection() == -1 && intersect(c, &canonical_class(c.k())).expect("same rank") == -1
}

/// Characters of σ_a on local coordinates: (u, v) ↦ (a^{w_u}·u, a^{w_v}·v).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedChart {
    pub weight_u: i64,
    pub weight_v: i64,
}

impl WeightedChart {
    pub fn new(weight_u: i64, weight_v: i64) -> Self {
        WeightedChart { weight_u, weight_v }
    }
}

impl fmt::Display for WeightedChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.weight_u, self.weight_v)
    }
}

/// The two standard charts on the blow-up of the origin:
/// (u/v, v) with weights (w_u − w_v, w_v), and (u, v/u) with (w_u, w_v − w_u).
pub fn blow_up_fixed_point(chart: WeightedChart) -> (WeightedChart, WeightedChart) {
    let WeightedChart { weight_u: u, weight_v: v } = chart;
    (WeightedChart::new(u - v, v), WeightedChart::new(u, v - u))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Origin,
    /// u = 0, v generic.
    GeneralOnAxisU,
    /// v = 0, u generic.
    GeneralOnAxisV,
    GeneralOffAxes,
}

/// Subgroup of the torus fixing a point: all of it, or μ_n (μ₁ trivial).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum Stabilizer {
    FullTorus,
    Mu(u64),
}

impl Stabilizer {
    fn from_weight(w: u64) -> Stabilizer {
        if w == 0 {
            Stabilizer::FullTorus
        } else {
            Stabilizer::Mu(w)
        }
    }

    pub fn is_trivial(&self) -> bool {
        *self == Stabilizer::Mu(1)
    }
}

impl fmt::Display for Stabilizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stabilizer::FullTorus => write!(f, "FullTorus"),
            Stabilizer::Mu(n) => write!(f, "Mu({n})"),
        }
    }
}

pub fn stabilizer_at(chart: WeightedChart, kind: PointKind) -> Stabilizer {
    let wu = chart.weight_u.unsigned_abs();
    let wv = chart.weight_v.unsigned_abs();
    match kind {
        PointKind::Origin => Stabilizer::FullTorus,
        PointKind::GeneralOnAxisV => Stabilizer::from_weight(wu),
        PointKind::GeneralOnAxisU => Stabilizer::from_weight(wv),
        PointKind::GeneralOffAxes => Stabilizer::from_weight(wu.gcd(&wv)),
    }
}

/// Where the last point of the chain is blown up on the newest exceptional curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainPoint {
    General,
    /// The intersection with the strict transform of the fixed line.
    FixedL4,
    /// The intersection with the previous exceptional curve.
    FixedPreve,
}

impl std::str::FromStr for ChainPoint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "general" => Ok(ChainPoint::General),
            "fixed-l4" => Ok(ChainPoint::FixedL4),
            "fixed-preve" => Ok(ChainPoint::FixedPreve),
            _ => Err(format!("unknown point {s:?} (expected general, fixed-l4 or fixed-preve)")),
        }
    }
}

impl fmt::Display for ChainPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainPoint::General => "general",
            ChainPoint::FixedL4 => "fixed-l4",
            ChainPoint::FixedPreve => "fixed-preve",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub n: u64,
    pub point: ChainPoint,
    /// Chain chart after each of the n+1 blow-ups, starting from (0, 1).
    pub weights: Vec<WeightedChart>,
    pub final_weights: WeightedChart,
    /// Stabilizer of the last point in the one-dimensional torus; this is
    /// the rational-cohomology automorphism group of the final blow-up.
    pub aut_q: Stabilizer,
}

/// Chain weights after `k` blow-ups from (0, 1), following the chart that
/// contains the strict transform of the fixed line.
pub fn chain_weights(k: u64) -> Vec<WeightedChart> {
    let mut chart = WeightedChart::new(0, 1);
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        chart = blow_up_fixed_point(chart).0;
        out.push(chart);
    }
    out
}

/// Runs n+1 chain blow-ups and blows up one more point on the last
/// exceptional curve (v = 0 in the chain chart).
pub fn rational_chain_report(n: u64, point: ChainPoint) -> ChainReport {
    let weights = chain_weights(n + 1);
    let final_weights = *weights.last().expect("at least one step");
    let aut_q = match point {
        ChainPoint::General => stabilizer_at(final_weights, PointKind::GeneralOnAxisV),
        ChainPoint::FixedL4 => stabilizer_at(final_weights, PointKind::Origin),
        ChainPoint::FixedPreve => {
            let other = blow_up_fixed_point(previous_chart(&weights)).1;
            stabilizer_at(other, PointKind::Origin)
        }
    };
    ChainReport { n, point, weights, final_weights, aut_q }
}

fn previous_chart(weights: &[WeightedChart]) -> WeightedChart {
    match weights.len() {
        0 | 1 => WeightedChart::new(0, 1),
        k => weights[k - 2],
    }
}

/// Positions in the descending chain of stabilizer subgroups of PGL(3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum Taxonomy {
    Pgl3,
    Aff2,
    /// Affine maps with two prescribed eigenlines.
    AffEigen,
    /// C* × C*, three non-collinear points.
    Torus2,
    /// C² ⋊ C*, collinear points.
    Dilations,
    /// diag(1, 1, a).
    Torus1,
    Mu(u64),
    Trivial,
    /// Possibly disconnected stabilizer; no constructor decides this.
    Disconnected,
}

/// diag(1, 1, a), a ∈ C*.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusElement<T> {
    pub a: T,
}

impl<T: Mul<Output = T> + One + Zero + Copy> TorusElement<T> {
    pub fn new(a: T) -> Self {
        TorusElement { a }
    }

    pub fn identity() -> Self {
        TorusElement { a: T::one() }
    }

    pub fn compose(&self, other: &TorusElement<T>) -> TorusElement<T> {
        TorusElement { a: self.a * other.a }
    }

    pub fn matrix(&self) -> [[T; 3]; 3] {
        let (o, z) = (T::one(), T::zero());
        [[o, z, z], [z, o, z], [z, z, self.a]]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct G4Stabilizer {
    pub tag: Taxonomy,
    pub family: String,
}

/// Stabilizer of the four seed points: the torus diag(1, 1, a).
pub fn g4_stabilizer() -> G4Stabilizer {
    G4Stabilizer { tag: Taxonomy::Torus1, family: "diag(1,1,a), a in C*".into() }
}
