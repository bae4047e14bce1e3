//! Rule engine: surface descriptor in, ladder of component groups out.
//!
//! Every slot of the ladder starts `Unknown`. Rules fire in a fixed order and
//! may only fill an unknown slot or refine a compatible bound; anything else
//! is reported as a contradiction naming both rules.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::blowup::{rational_chain_report, ChainPoint, ChainReport, Stabilizer};
use crate::elliptic::{normalizer_quotient_detailed, BdfDatum, FiniteGroupId, NormalizerOptions, NormalizerReport};
use crate::lattice::FinAbGroup;
use crate::orbifold::{hurwitz_genus, swap_excluded, OrbifoldSignature, SwapVerdict};
use crate::ruled::{
    component_groups_genus_ge2, elliptic_ruled_gamma_star, maruyama_report, GammaStarBound, GenusAtLeastTwoReport,
    MaruyamaCase, MaruyamaReport, RuledDesc,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("precondition failed: {hypothesis} [{anchor}]")]
    Precondition { hypothesis: String, anchor: String },
    #[error("contradiction in {slot}: {first} gives {first_value}, {second} gives {second_value}")]
    Contradiction { slot: Slot, first: String, first_value: String, second: String, second_value: String },
}

fn precondition(rule: Rule, hypothesis: impl fmt::Display) -> ClassifyError {
    ClassifyError::Precondition { hypothesis: hypothesis.to_string(), anchor: rule.anchor().to_string() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    /// Bookkeeping along the normal series itself.
    Ladder,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
            Rule::R6 => "R6",
            Rule::R7 => "R7",
            Rule::R8 => "R8",
            Rule::R9 => "R9",
            Rule::R10 => "R10",
            Rule::R11 => "R11",
            Rule::Ladder => "ladder",
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            Rule::R1 => "K3 surface: only the identity acts trivially on rational cohomology",
            Rule::R2 => "Enriques surface: |Aut_Q| <= 4 and |Aut_Z| <= 2, both sharp",
            Rule::R3 => "abelian surface: Aut_Q = Aut_0, the translations",
            Rule::R4 => "hyperelliptic surface (F x E)/G: Aut_Z = Aut_0 = E and Aut_Q/Aut_Z = N_G/G",
            Rule::R5 => "Kodaira dimension 0: Aut_sharp = Aut_0 and [Aut_Q : Aut_0] <= 12",
            Rule::R6 => "general type with chi(O_X) >= 189: |Aut_Q| <= 4",
            Rule::R7 => "rational surface: Aut_* = Aut_Z = Aut_Q",
            Rule::R8 => "unmixed quotient (C x E)/G with G free on E: Aut_Z = Aut_0 = E",
            Rule::R9 => "harmonic rigidity: chi_top != 0 and a nonpositively curved target force Aut_sharp trivial",
            Rule::R10 => "projective bundle over a curve: automorphisms over the base",
            Rule::R11 => "Kodaira dimension 1 examples built from an isotrivial elliptic fibration",
            Rule::Ladder => "normal series Aut_0 <= Aut_* <= Aut_sharp <= Aut_Z <= Aut_Q",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleCitation {
    pub rule: String,
    pub anchor: String,
}

/// What is known about one component group of the ladder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LadderValue {
    Unknown,
    Abelian {
        group: FinAbGroup,
    },
    Group {
        group: FiniteGroupId,
    },
    /// Bounds on the order.
    Bound {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        at_least: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        at_most: Option<u64>,
    },
}

impl LadderValue {
    pub fn trivial() -> Self {
        LadderValue::Abelian { group: FinAbGroup::trivial() }
    }

    pub fn abelian(group: FinAbGroup) -> Self {
        LadderValue::Abelian { group }
    }

    pub fn at_most(n: u64) -> Self {
        LadderValue::Bound { at_least: None, at_most: Some(n) }.normalized()
    }

    pub fn at_least(n: u64) -> Self {
        LadderValue::Bound { at_least: Some(n), at_most: None }.normalized()
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, LadderValue::Unknown)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, LadderValue::Abelian { .. } | LadderValue::Group { .. })
    }

    pub fn exact_order(&self) -> Option<u64> {
        match self {
            LadderValue::Abelian { group } => group.order().and_then(|o| o.to_u64()),
            LadderValue::Group { group } => Some(group.order),
            _ => None,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.exact_order() == Some(1)
    }

    /// Order interval `[lo, hi]`, `hi = None` meaning unbounded.
    pub fn order_range(&self) -> (u64, Option<u64>) {
        match self {
            LadderValue::Unknown => (1, None),
            LadderValue::Bound { at_least, at_most } => (at_least.unwrap_or(1), *at_most),
            exact => match exact.exact_order() {
                Some(n) => (n, Some(n)),
                None => (1, None),
            },
        }
    }

    fn normalized(self) -> Self {
        match self {
            LadderValue::Bound { at_least, at_most } => {
                let at_least = at_least.filter(|&l| l > 1);
                match (at_least, at_most) {
                    (None, None) => LadderValue::Unknown,
                    (_, Some(1)) => LadderValue::trivial(),
                    (l, h) => LadderValue::Bound { at_least: l, at_most: h },
                }
            }
            v => v,
        }
    }

    fn same_group(&self, other: &LadderValue) -> bool {
        fn id(v: &LadderValue) -> Option<FiniteGroupId> {
            match v {
                LadderValue::Abelian { group } => FiniteGroupId::from_abelian(group),
                LadderValue::Group { group } => Some(group.clone()),
                _ => None,
            }
        }
        if let (LadderValue::Abelian { group: a }, LadderValue::Abelian { group: b }) = (self, other) {
            return a == b;
        }
        match (id(self), id(other)) {
            (Some(a), Some(b)) => {
                a.order == b.order && a.abelian_invariants == b.abelian_invariants && a.order_multiset == b.order_multiset
            }
            _ => false,
        }
    }

    /// Combination of two facts about the same group, or `None` if they clash.
    pub fn merge(&self, other: &LadderValue) -> Option<LadderValue> {
        use LadderValue::*;
        match (self, other) {
            (Unknown, v) | (v, Unknown) => Some(v.clone()),
            (a, b) if a.is_exact() && b.is_exact() => a.same_group(b).then(|| a.clone()),
            (e, b @ Bound { .. }) | (b @ Bound { .. }, e) if e.is_exact() => {
                let n = e.exact_order()?;
                let (lo, hi) = b.order_range();
                (lo <= n && hi.map_or(true, |h| n <= h)).then(|| e.clone())
            }
            (a, b) => {
                let (lo1, hi1) = a.order_range();
                let (lo2, hi2) = b.order_range();
                let lo = lo1.max(lo2);
                let hi = match (hi1, hi2) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                if hi.map_or(false, |h| lo > h) {
                    return None;
                }
                Some(Bound { at_least: Some(lo), at_most: hi }.normalized())
            }
        }
    }
}

impl fmt::Display for LadderValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadderValue::Unknown => write!(f, "unknown"),
            LadderValue::Abelian { group } => write!(f, "{group}"),
            LadderValue::Group { group } => write!(f, "{group}"),
            LadderValue::Bound { at_least, at_most } => match (at_least, at_most) {
                (Some(l), Some(h)) => write!(f, "order in [{l}, {h}]"),
                (Some(l), None) => write!(f, "order >= {l}"),
                (None, Some(h)) => write!(f, "order <= {h}"),
                (None, None) => write!(f, "unknown"),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    GammaStar,
    SharpOverStar,
    ZOverSharp,
    QOverZ,
    GammaSharp,
    GammaZ,
    GammaQ,
}

impl Slot {
    pub const ALL: [Slot; 7] = [
        Slot::GammaStar,
        Slot::SharpOverStar,
        Slot::ZOverSharp,
        Slot::QOverZ,
        Slot::GammaSharp,
        Slot::GammaZ,
        Slot::GammaQ,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Slot::GammaStar => "Gamma_*",
            Slot::SharpOverStar => "Gamma_sharp/Gamma_*",
            Slot::ZOverSharp => "Gamma_Z/Gamma_sharp",
            Slot::QOverZ => "Gamma_Q/Gamma_Z",
            Slot::GammaSharp => "Gamma_sharp",
            Slot::GammaZ => "Gamma_Z",
            Slot::GammaQ => "Gamma_Q",
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderEntry {
    pub value: LadderValue,
    #[serde(default)]
    pub rules: Vec<String>,
}

impl Default for LadderEntry {
    fn default() -> Self {
        LadderEntry { value: LadderValue::Unknown, rules: Vec::new() }
    }
}

/// The ladder quotients followed by the absolute component groups.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ladder {
    pub gamma_star: LadderEntry,
    pub sharp_over_star: LadderEntry,
    pub z_over_sharp: LadderEntry,
    pub q_over_z: LadderEntry,
    pub gamma_sharp: LadderEntry,
    pub gamma_z: LadderEntry,
    pub gamma_q: LadderEntry,
}

impl Ladder {
    pub fn get(&self, slot: Slot) -> &LadderEntry {
        match slot {
            Slot::GammaStar => &self.gamma_star,
            Slot::SharpOverStar => &self.sharp_over_star,
            Slot::ZOverSharp => &self.z_over_sharp,
            Slot::QOverZ => &self.q_over_z,
            Slot::GammaSharp => &self.gamma_sharp,
            Slot::GammaZ => &self.gamma_z,
            Slot::GammaQ => &self.gamma_q,
        }
    }

    fn get_mut(&mut self, slot: Slot) -> &mut LadderEntry {
        match slot {
            Slot::GammaStar => &mut self.gamma_star,
            Slot::SharpOverStar => &mut self.sharp_over_star,
            Slot::ZOverSharp => &mut self.z_over_sharp,
            Slot::QOverZ => &mut self.q_over_z,
            Slot::GammaSharp => &mut self.gamma_sharp,
            Slot::GammaZ => &mut self.gamma_z,
            Slot::GammaQ => &mut self.gamma_q,
        }
    }

    pub fn value(&self, slot: Slot) -> &LadderValue {
        &self.get(slot).value
    }
}

/// Steps of the series as (quotient, lower, upper): upper / lower = quotient.
/// Γ_* sits over the trivial group and needs no step.
const STEPS: [(Slot, Slot, Slot); 3] = [
    (Slot::SharpOverStar, Slot::GammaStar, Slot::GammaSharp),
    (Slot::ZOverSharp, Slot::GammaSharp, Slot::GammaZ),
    (Slot::QOverZ, Slot::GammaZ, Slot::GammaQ),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupCenter {
    /// A point on a fibre over a point of C/G with stabilizer all of G.
    FullStabilizer,
    /// A point on a fibre over a non-branch point.
    General,
    /// A point on a fibre over the k-th branch point (1-based).
    Branch(usize),
}

impl Default for BlowupCenter {
    fn default() -> Self {
        BlowupCenter::FullStabilizer
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SipUnmixed {
    /// Signature of C₁ → C₁/G.
    pub sig: OrbifoldSignature,
    pub curve_genus: u64,
    pub group_order: u64,
    /// Order of the translation by which a generator acts on E.
    pub translation_order: u64,
    pub free_on_c1: bool,
    pub free_on_e: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceDescriptor {
    /// Blow-up of P² along the chain of length n + 1 (see `blowup`).
    RationalBlowup {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        point: Option<ChainPoint>,
    },
    RuledOverCurve(RuledDesc),
    K3 {},
    Enriques {},
    Abelian {},
    Hyperelliptic(BdfDatum),
    SipUnmixed(SipUnmixed),
    Kod1MinimalExample {
        n: u64,
    },
    Kod1BlowupExample {
        n: u64,
        sig: OrbifoldSignature,
        #[serde(default)]
        center: BlowupCenter,
    },
    GeneralType {
        chi: u64,
    },
    NonMinimal {
        core: Box<SurfaceDescriptor>,
        chi_top: i64,
        has_nonpos_curved_target: bool,
    },
}

impl SurfaceDescriptor {
    pub fn kind_name(&self) -> &'static str {
        match self {
            SurfaceDescriptor::RationalBlowup { .. } => "rational_blowup",
            SurfaceDescriptor::RuledOverCurve(_) => "ruled_over_curve",
            SurfaceDescriptor::K3 {} => "k3",
            SurfaceDescriptor::Enriques {} => "enriques",
            SurfaceDescriptor::Abelian {} => "abelian",
            SurfaceDescriptor::Hyperelliptic(_) => "hyperelliptic",
            SurfaceDescriptor::SipUnmixed(_) => "sip_unmixed",
            SurfaceDescriptor::Kod1MinimalExample { .. } => "kod1_minimal_example",
            SurfaceDescriptor::Kod1BlowupExample { .. } => "kod1_blowup_example",
            SurfaceDescriptor::GeneralType { .. } => "general_type",
            SurfaceDescriptor::NonMinimal { .. } => "non_minimal",
        }
    }

    pub fn is_kodaira_zero(&self) -> bool {
        matches!(
            self,
            SurfaceDescriptor::K3 {}
                | SurfaceDescriptor::Enriques {}
                | SurfaceDescriptor::Abelian {}
                | SurfaceDescriptor::Hyperelliptic(_)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Kod1MinimalReport {
    pub n: u64,
    pub base_genus: u64,
    pub quotient_signature: OrbifoldSignature,
    pub chi_top: i64,
    pub p_g: u64,
    pub q: u64,
    pub b2: u64,
    /// Verdict for exchanging the first two double fibres.
    pub swap_first_pair: SwapVerdict,
    pub all_swaps_excluded: bool,
    /// Lower bound for [Aut_Q : Aut_Z].
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Kod1BlowupReport {
    pub n: u64,
    pub sig: OrbifoldSignature,
    pub curve_genus: u64,
    pub center: BlowupCenter,
    pub stabilizer_order: u64,
    pub aut_z: FinAbGroup,
    pub aut_star: FinAbGroup,
    pub chi_top: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "detail", rename_all = "snake_case")]
pub enum ReportDetail {
    Normalizer(NormalizerReport),
    Chain(ChainReport),
    RuledGenusAtLeastTwo(GenusAtLeastTwoReport),
    Maruyama(MaruyamaReport),
    GammaStar(GammaStarBound),
    Kod1Minimal(Kod1MinimalReport),
    Kod1Blowup(Kod1BlowupReport),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationReport {
    pub surface: String,
    pub ladder: Ladder,
    pub rules_applied: Vec<RuleCitation>,
    #[serde(default)]
    pub flags: Vec<String>,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default)]
    pub details: Vec<ReportDetail>,
}

impl ClassificationReport {
    /// Upper bound for [Aut_Q : Aut_0] = |Γ_Q|, when one is known.
    pub fn index_bound(&self) -> Option<u64> {
        self.ladder.value(Slot::GammaQ).order_range().1
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub torsion_bound: Option<u64>,
}

pub const MAX_KAPPA_ZERO_INDEX: u64 = 12;
pub const MAXIMUM_ATTAINED: &str = "maximum attained";

struct Builder {
    ladder: Ladder,
    rules: Vec<Rule>,
    notes: Vec<String>,
    details: Vec<ReportDetail>,
}

impl Builder {
    fn new() -> Self {
        Builder { ladder: Ladder::default(), rules: Vec::new(), notes: Vec::new(), details: Vec::new() }
    }

    fn cite(&mut self, rule: Rule) {
        if !self.rules.contains(&rule) {
            self.rules.push(rule);
        }
    }

    /// Merges `value` into `slot`; true if the slot changed.
    fn set(&mut self, rule: Rule, slot: Slot, value: LadderValue) -> Result<bool, ClassifyError> {
        self.cite(rule);
        let entry = self.ladder.get_mut(slot);
        let merged = entry.value.merge(&value).ok_or_else(|| ClassifyError::Contradiction {
            slot,
            first: entry.rules.join("+"),
            first_value: entry.value.to_string(),
            second: rule.name().to_string(),
            second_value: value.to_string(),
        })?;
        let changed = merged != entry.value;
        if changed || !value.is_unknown() {
            entry.value = merged;
            if !entry.rules.iter().any(|r| r == rule.name()) {
                entry.rules.push(rule.name().to_string());
            }
        }
        Ok(changed)
    }

    fn set_silent(&mut self, slot: Slot, value: LadderValue) -> Result<bool, ClassifyError> {
        let entry = self.ladder.get(slot);
        match entry.value.merge(&value) {
            Some(m) if m == entry.value => Ok(false),
            _ => self.set(Rule::Ladder, slot, value),
        }
    }

    fn unify(&mut self, a: Slot, b: Slot) -> Result<bool, ClassifyError> {
        let va = self.ladder.value(a).clone();
        let vb = self.ladder.value(b).clone();
        Ok(self.set_silent(a, vb)? | self.set_silent(b, va)?)
    }

    /// Propagates equalities and order bounds along the series until stable.
    fn derive(&mut self) -> Result<(), ClassifyError> {
        for _ in 0..32 {
            let mut changed = false;
            if self.ladder.value(Slot::GammaQ).is_trivial() {
                for s in Slot::ALL {
                    changed |= self.set_silent(s, LadderValue::trivial())?;
                }
            }
            for (q, lo, hi) in STEPS {
                let trivial = |s: Slot, l: &Ladder| l.value(s).is_trivial();
                if trivial(q, &self.ladder) {
                    changed |= self.unify(lo, hi)?;
                }
                if trivial(lo, &self.ladder) {
                    changed |= self.unify(q, hi)?;
                }
                if trivial(hi, &self.ladder) {
                    changed |= self.set_silent(q, LadderValue::trivial())?;
                    changed |= self.set_silent(lo, LadderValue::trivial())?;
                }
                let (q_lo, q_hi) = self.ladder.value(q).order_range();
                let (l_lo, l_hi) = self.ladder.value(lo).order_range();
                let (_, h_hi) = self.ladder.value(hi).order_range();
                if let Some(h) = h_hi {
                    changed |= self.set_silent(q, LadderValue::at_most(h))?;
                    changed |= self.set_silent(lo, LadderValue::at_most(h))?;
                }
                changed |= self.set_silent(hi, LadderValue::at_least(q_lo.saturating_mul(l_lo)))?;
                if let (Some(a), Some(b)) = (q_hi, l_hi) {
                    changed |= self.set_silent(hi, LadderValue::at_most(a.saturating_mul(b)))?;
                }
                let exact = |s: Slot, l: &Ladder| l.value(s).exact_order();
                if let (Some(h), Some(l)) = (exact(hi, &self.ladder), exact(lo, &self.ladder)) {
                    if h % l != 0 {
                        return Err(self.order_clash(q, lo, hi));
                    }
                    let k = h / l;
                    changed |= self.set_silent(q, LadderValue::Bound { at_least: Some(k), at_most: Some(k) }.normalized())?;
                }
                if let (Some(h), Some(k)) = (exact(hi, &self.ladder), exact(q, &self.ladder)) {
                    if h % k != 0 {
                        return Err(self.order_clash(q, lo, hi));
                    }
                    let l = h / k;
                    changed |= self.set_silent(lo, LadderValue::Bound { at_least: Some(l), at_most: Some(l) }.normalized())?;
                }
            }
            if !changed {
                return Ok(());
            }
        }
        Ok(())
    }

    fn order_clash(&self, q: Slot, lo: Slot, hi: Slot) -> ClassifyError {
        let rules = |s: Slot| self.ladder.get(s).rules.join("+");
        ClassifyError::Contradiction {
            slot: hi,
            first: rules(hi),
            first_value: self.ladder.value(hi).to_string(),
            second: format!("{}/{}", rules(q), rules(lo)),
            second_value: format!("{} over {}", self.ladder.value(q), self.ladder.value(lo)),
        }
    }

    fn finish(mut self, desc: &SurfaceDescriptor) -> Result<ClassificationReport, ClassifyError> {
        let before = self.ladder.clone();
        self.derive()?;
        if before != self.ladder {
            self.cite(Rule::Ladder);
        }
        let mut flags = Vec::new();
        if desc.is_kodaira_zero() && self.ladder.value(Slot::GammaQ).exact_order() == Some(MAX_KAPPA_ZERO_INDEX) {
            flags.push(MAXIMUM_ATTAINED.to_string());
        }
        Ok(ClassificationReport {
            surface: desc.kind_name().to_string(),
            ladder: self.ladder,
            rules_applied: self
                .rules
                .iter()
                .map(|r| RuleCitation { rule: r.name().to_string(), anchor: r.anchor().to_string() })
                .collect(),
            flags,
            notes: self.notes,
            details: self.details,
        })
    }
}

pub fn classify(desc: &SurfaceDescriptor) -> Result<ClassificationReport, ClassifyError> {
    classify_with(desc, ClassifyOptions::default())
}

pub fn classify_with(desc: &SurfaceDescriptor, opts: ClassifyOptions) -> Result<ClassificationReport, ClassifyError> {
    let mut b = Builder::new();
    match desc {
        SurfaceDescriptor::K3 {} => {
            b.set(Rule::R1, Slot::GammaQ, LadderValue::trivial())?;
        }
        SurfaceDescriptor::Enriques {} => {
            b.set(Rule::R2, Slot::GammaQ, LadderValue::at_most(4))?;
            b.set(Rule::R2, Slot::GammaZ, LadderValue::at_most(2))?;
            b.notes.push("Aut_0 is trivial; |Aut_Z| = 2 occurs".into());
        }
        SurfaceDescriptor::Abelian {} => {
            b.set(Rule::R3, Slot::GammaQ, LadderValue::trivial())?;
        }
        SurfaceDescriptor::Hyperelliptic(datum) => {
            let report = normalizer_quotient_detailed(datum, NormalizerOptions { torsion_bound: opts.torsion_bound })
                .map_err(|e| precondition(Rule::R4, e))?;
            b.set(Rule::R4, Slot::GammaZ, LadderValue::trivial())?;
            b.set(Rule::R4, Slot::QOverZ, LadderValue::Group { group: report.quotient.clone() })?;
            b.details.push(ReportDetail::Normalizer(report));
        }
        SurfaceDescriptor::GeneralType { chi } => {
            if *chi == 0 {
                return Err(precondition(Rule::R6, "chi(O_X) of a surface of general type is positive"));
            }
            if *chi >= 189 {
                b.set(Rule::R6, Slot::GammaQ, LadderValue::at_most(4))?;
            } else {
                b.cite(Rule::R6);
                b.notes.push(format!("no bound on Aut_Q recorded for chi(O_X) = {chi} < 189"));
            }
        }
        SurfaceDescriptor::RationalBlowup { n, point } => {
            b.set(Rule::R7, Slot::ZOverSharp, LadderValue::trivial())?;
            b.set(Rule::R7, Slot::QOverZ, LadderValue::trivial())?;
            b.set(Rule::R7, Slot::SharpOverStar, LadderValue::trivial())?;
            match (n, point) {
                (Some(n), point) => {
                    let report = rational_chain_report(*n, point.unwrap_or(ChainPoint::General));
                    match report.aut_q {
                        Stabilizer::Mu(m) => {
                            b.set(Rule::R7, Slot::GammaQ, LadderValue::abelian(FinAbGroup::cyclic(m)))?;
                            b.notes.push(format!("Aut_Q = Aut_* = Z/{m} and Aut_0 is trivial"));
                        }
                        Stabilizer::FullTorus => {
                            b.notes.push("Aut_Q contains a one-dimensional torus".into());
                        }
                    }
                    b.details.push(ReportDetail::Chain(report));
                }
                (None, Some(_)) => {
                    return Err(precondition(Rule::R7, "a chain point needs the chain length n"));
                }
                (None, None) => {}
            }
        }
        SurfaceDescriptor::RuledOverCurve(ruled) => classify_ruled(&mut b, ruled)?,
        SurfaceDescriptor::SipUnmixed(sip) => classify_sip(&mut b, sip)?,
        SurfaceDescriptor::Kod1MinimalExample { n } => {
            let r = kod1_minimal_example(*n)?;
            b.set(Rule::R11, Slot::QOverZ, LadderValue::at_least(r.bound))?;
            b.details.push(ReportDetail::Kod1Minimal(r));
        }
        SurfaceDescriptor::Kod1BlowupExample { n, sig, center } => {
            let r = kod1_blowup_example_at(*n, sig, *center)?;
            b.set(Rule::R11, Slot::GammaZ, LadderValue::abelian(r.aut_z.clone()))?;
            b.set(Rule::R11, Slot::GammaStar, LadderValue::trivial())?;
            b.set(Rule::R9, Slot::GammaSharp, LadderValue::trivial())?;
            b.notes.push(format!("chi_top = {} after one blow-up; the target is flat", r.chi_top));
            b.details.push(ReportDetail::Kod1Blowup(r));
        }
        SurfaceDescriptor::NonMinimal { core, chi_top, has_nonpos_curved_target } => {
            b.notes.push(format!("minimal model kind: {}", core.kind_name()));
            if *chi_top != 0 && *has_nonpos_curved_target {
                b.set(Rule::R9, Slot::GammaSharp, LadderValue::trivial())?;
                b.notes.push("Aut_sharp is the trivial group".into());
            } else {
                b.notes.push("rigidity does not apply: needs chi_top != 0 and a nonpositively curved target".into());
            }
        }
    }
    if desc.is_kodaira_zero() {
        b.set(Rule::R5, Slot::GammaSharp, LadderValue::trivial())?;
        b.set(Rule::R5, Slot::GammaQ, LadderValue::at_most(MAX_KAPPA_ZERO_INDEX))?;
    }
    b.finish(desc)
}

fn classify_ruled(b: &mut Builder, ruled: &RuledDesc) -> Result<(), ClassifyError> {
    let fail = |e| precondition(Rule::R10, e);
    if ruled.base_genus() >= 2 {
        let r = component_groups_genus_ge2(ruled).map_err(fail)?;
        b.set(Rule::R10, Slot::QOverZ, LadderValue::trivial())?;
        b.set(Rule::R10, Slot::GammaSharp, LadderValue::trivial())?;
        match &r.delta {
            Some(d) => {
                b.set(Rule::R10, Slot::GammaZ, LadderValue::abelian(d.clone()))?;
            }
            None => b.notes.push("Delta is not determined by the data; it embeds in Pic^0(B)[2]".into()),
        }
        b.details.push(ReportDetail::RuledGenusAtLeastTwo(r));
        return Ok(());
    }
    let r = maruyama_report(ruled).map_err(fail)?;
    match r.case {
        Some(MaruyamaCase::Hirzebruch) => {
            b.set(Rule::R10, Slot::GammaQ, LadderValue::trivial())?;
        }
        Some(MaruyamaCase::DecomposablePositive) => {
            let quotient = r.aut_z_over_aut_b.clone().expect("case carries Aut_Z/Aut_B");
            b.set(Rule::R10, Slot::GammaZ, LadderValue::abelian(quotient))?;
            if r.e % 2 == 0 {
                let bound = elliptic_ruled_gamma_star(r.e).map_err(fail)?;
                b.set(Rule::R10, Slot::GammaStar, LadderValue::at_least(bound.lower_bound))?;
                b.details.push(ReportDetail::GammaStar(bound));
            }
        }
        Some(MaruyamaCase::Product | MaruyamaCase::IndecomposableZero | MaruyamaCase::IndecomposableOne) => {
            b.set(Rule::R10, Slot::GammaZ, LadderValue::trivial())?;
        }
        Some(MaruyamaCase::TwoMinimalSections) => {
            b.cite(Rule::R10);
            b.notes.push("Aut_B = Aut_0 x| Z/2; whether the involution acts trivially on H*(X, Z) is not decided".into());
        }
        None => {
            b.cite(Rule::R10);
            b.notes.push(format!("e = {} over a curve of genus {} is outside the listed cases", r.e, ruled.base_genus()));
        }
    }
    b.details.push(ReportDetail::Maruyama(r));
    Ok(())
}

/// Signature of shape (2, 2, odd, ...): some pair of branch points can be
/// exchanged compatibly with the orbifold group.
fn has_exchangeable_pair(sig: &OrbifoldSignature) -> bool {
    let r = sig.len();
    // the base-genus argument only short-circuits; the shape test needs it below 2
    (1..=r).any(|i| {
        (i + 1..=r).any(|j| matches!(swap_excluded(sig, 0, i, j), Ok(SwapVerdict::NotExcluded)))
    })
}

fn classify_sip(b: &mut Builder, sip: &SipUnmixed) -> Result<(), ClassifyError> {
    let fail = |h: String| precondition(Rule::R8, h);
    if sip.group_order == 0 || sip.translation_order == 0 || sip.group_order % sip.translation_order != 0 {
        return Err(fail(format!(
            "translation order {} must divide the group order {}",
            sip.translation_order, sip.group_order
        )));
    }
    if sip.free_on_c1 != sip.sig.is_empty() {
        return Err(fail("G acts freely on C1 exactly when the signature has no branch points".into()));
    }
    let g = hurwitz_genus(sip.group_order, &sip.sig).map_err(|e| fail(e.to_string()))?;
    if g != sip.curve_genus {
        return Err(fail(format!("g(C1) = {} but Riemann-Hurwitz gives {g}", sip.curve_genus)));
    }
    if !sip.free_on_c1 && !sip.free_on_e {
        return Err(fail("the diagonal action must be free on C1 x E".into()));
    }
    let shape_ok = sip.curve_genus < 2 || !has_exchangeable_pair(&sip.sig);
    if sip.free_on_e && shape_ok {
        b.set(Rule::R8, Slot::GammaZ, LadderValue::trivial())?;
        b.notes.push("Aut_Z consists of translations (id, y + a); Aut_Z = Aut_0 = E".into());
    } else {
        b.cite(Rule::R8);
        if sip.free_on_e {
            b.notes.push(format!("stabilizer orders {} have shape (2, 2, odd, ...)", sip.sig));
            b.notes.push("elements of Aut_Q act on E by translations".into());
        }
        if sip.free_on_c1 && sip.curve_genus >= 2 {
            b.notes.push("elements of Aut_Q have representatives (id, h2) with h2 in the centralizer Z_G".into());
        }
    }
    Ok(())
}

const KOD1_MIN: Rule = Rule::R11;

/// The minimal κ = 1 surface (B × F)/(Z/2) with B: y² = xⁿ − 1.
pub fn kod1_minimal_example(n: u64) -> Result<Kod1MinimalReport, ClassifyError> {
    if n < 6 || n % 2 != 0 {
        return Err(precondition(KOD1_MIN, format!("n = 2g(B) + 2 must be an even integer >= 6, got {n}")));
    }
    let sig = OrbifoldSignature::new(0, vec![2; n as usize]).map_err(|e| precondition(KOD1_MIN, e))?;
    let base_genus = hurwitz_genus(2, &sig).map_err(|e| precondition(KOD1_MIN, e))?;
    let swap_first_pair = swap_excluded(&sig, 0, 1, 2).map_err(|e| precondition(KOD1_MIN, e))?;
    // all multiplicities are equal, so every pair gives the same verdict
    let all_swaps_excluded = (1..=sig.len())
        .flat_map(|i| (i + 1..=sig.len()).map(move |j| (i, j)))
        .all(|(i, j)| matches!(swap_excluded(&sig, 0, i, j), Ok(SwapVerdict::Excluded(_))));
    Ok(Kod1MinimalReport {
        n,
        base_genus,
        quotient_signature: sig,
        chi_top: 0,
        p_g: 0,
        q: 1,
        b2: 2,
        swap_first_pair,
        all_swaps_excluded,
        bound: n,
    })
}

/// Blow-up of (C × E)/(Z/n) at a point over a point with full stabilizer.
pub fn kod1_blowup_example(n: u64, sig: &OrbifoldSignature) -> Result<Kod1BlowupReport, ClassifyError> {
    kod1_blowup_example_at(n, sig, BlowupCenter::FullStabilizer)
}

pub fn kod1_blowup_example_at(
    n: u64,
    sig: &OrbifoldSignature,
    center: BlowupCenter,
) -> Result<Kod1BlowupReport, ClassifyError> {
    let fail = |h: String| precondition(Rule::R11, h);
    if n == 0 {
        return Err(fail("the group order n must be positive".into()));
    }
    if !sig.multiplicities().contains(&n) {
        return Err(fail(format!("C^sigma is nonempty: some stabilizer order in {sig} must equal n = {n}")));
    }
    if sig.genus() < 1 {
        return Err(fail("g(C/G) >= 1".into()));
    }
    let curve_genus = hurwitz_genus(n, sig).map_err(|e| fail(e.to_string()))?;
    if curve_genus < 2 {
        return Err(fail(format!("g(C) >= 2, got {curve_genus}")));
    }
    let stabilizer_order = match center {
        BlowupCenter::FullStabilizer => n,
        BlowupCenter::General => 1,
        BlowupCenter::Branch(k) => match k.checked_sub(1).and_then(|i| sig.multiplicities().get(i)) {
            Some(&m) => m,
            None => return Err(fail(format!("branch point {k} out of range 1..={}", sig.len()))),
        },
    };
    Ok(Kod1BlowupReport {
        n,
        sig: sig.clone(),
        curve_genus,
        center,
        stabilizer_order,
        aut_z: FinAbGroup::from_cyclic_orders([stabilizer_order]),
        aut_star: FinAbGroup::trivial(),
        chi_top: 1,
    })
}
