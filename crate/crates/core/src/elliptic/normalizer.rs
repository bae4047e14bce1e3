use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{
    unit_group, BdfDatum, CayleyTable, EllAut, EllipticError, FiniteGroupId, Mat2,
    TauClass, TorsionPoint,
};

/// First torsion level searched when no bound is given.
const BASE_LEVEL: u64 = 48;
/// Number of doublings allowed before giving up.
const MAX_DOUBLINGS: u32 = 6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalizerOptions {
    /// Search only translations in E[N] for this N instead of escalating.
    pub torsion_bound: Option<u64>,
}

/// Normalizer size found when translations are restricted to E[level].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelTrial {
    pub level: u64,
    pub translations: u64,
    pub normalizer_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizerReport {
    pub quotient: FiniteGroupId,
    pub group_order: u64,
    pub normalizer_order: u64,
    /// |N_G ∩ translations|
    pub normalizer_translations: u64,
    pub level: u64,
    pub trials: Vec<LevelTrial>,
    /// One representative per coset of G, in canonical order.
    pub coset_representatives: Vec<EllAut>,
}

/// Element (uᵏ, t) with t stored as integer coordinates modulo the level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Elem {
    unit: usize,
    t: [i64; 2],
}

struct Level<'a> {
    n: i64,
    units: &'a [Mat2],
}

impl Level<'_> {
    fn compose(&self, a: &Elem, b: &Elem) -> Elem {
        let u = &self.units[a.unit];
        let t = [
            (u[0][0] * b.t[0] + u[0][1] * b.t[1] + a.t[0]).mod_floor(&self.n),
            (u[1][0] * b.t[0] + u[1][1] * b.t[1] + a.t[1]).mod_floor(&self.n),
        ];
        Elem { unit: (a.unit + b.unit) % self.units.len(), t }
    }

    fn inverse(&self, a: &Elem) -> Elem {
        let k = self.units.len();
        let unit = (k - a.unit) % k;
        let u = &self.units[unit];
        let t = [
            (-(u[0][0] * a.t[0] + u[0][1] * a.t[1])).mod_floor(&self.n),
            (-(u[1][0] * a.t[0] + u[1][1] * a.t[1])).mod_floor(&self.n),
        ];
        Elem { unit, t }
    }

    fn encode(&self, g: &EllAut) -> Elem {
        let unit = self.units.iter().position(|u| *u == g.linear).expect("validated unit");
        let coord = |r: Rational64| {
            let scaled = r * self.n;
            debug_assert!(scaled.is_integer());
            scaled.to_integer().mod_floor(&self.n)
        };
        Elem { unit, t: [coord(g.translation.x()), coord(g.translation.y())] }
    }

    fn decode(&self, e: &Elem) -> EllAut {
        EllAut::new(
            self.units[e.unit],
            TorsionPoint::new(Rational64::new(e.t[0], self.n), Rational64::new(e.t[1], self.n)),
        )
    }
}

fn closure(level: &Level, gens: &[Elem]) -> Vec<Elem> {
    let mut elems = vec![Elem { unit: 0, t: [0, 0] }];
    let mut seen: HashSet<Elem> = elems.iter().copied().collect();
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let p = level.compose(&elems[i], g);
            if seen.insert(p) {
                elems.push(p);
            }
        }
        i += 1;
    }
    elems
}

/// All γ = (u, t), t ∈ E[n], with γgγ⁻¹ ∈ G for every generator g.
fn normalizer_at(level: &Level, gens: &[Elem], group: &HashSet<Elem>) -> Vec<Elem> {
    let mut out = Vec::new();
    for unit in 0..level.units.len() {
        for x in 0..level.n {
            for y in 0..level.n {
                let gamma = Elem { unit, t: [x, y] };
                let inv = level.inverse(&gamma);
                let normalizes = gens
                    .iter()
                    .all(|g| group.contains(&level.compose(&level.compose(&gamma, g), &inv)));
                if normalizes {
                    out.push(gamma);
                }
            }
        }
    }
    out
}

/// Least common multiple of the translation orders of the generators.
fn needed_level(datum: &BdfDatum) -> u64 {
    datum.generators().iter().map(|g| g.translation.order() as u64).fold(1, |a, b| a.lcm(&b))
}

struct Search {
    level: u64,
    normalizer: Vec<Elem>,
    group: Vec<Elem>,
    trial: LevelTrial,
}

fn search(datum: &BdfDatum, units: &[Mat2], n: u64) -> Search {
    let level = Level { n: n as i64, units };
    let gens: Vec<Elem> = datum.generators().iter().map(|g| level.encode(g)).collect();
    let group = closure(&level, &gens);
    let group_set: HashSet<Elem> = group.iter().copied().collect();
    let normalizer = normalizer_at(&level, &gens, &group_set);
    let translations = normalizer.iter().filter(|e| e.unit == 0).count() as u64;
    let trial = LevelTrial { level: n, translations, normalizer_order: normalizer.len() as u64 };
    Search { level: n, normalizer, group, trial }
}

/// N_G/G by exhaustive search over unit-times-torsion candidates.
///
/// Without a bound the torsion level starts at 48 (raised to a multiple of
/// the generator denominators) and doubles until the normalizer translation
/// count agrees across two further doublings.
pub fn normalizer_quotient_detailed(
    datum: &BdfDatum,
    options: NormalizerOptions,
) -> Result<NormalizerReport, EllipticError> {
    let units = unit_group(datum.tau());
    let needed = needed_level(datum);
    let mut trials = Vec::new();
    let found = match options.torsion_bound {
        Some(bound) => {
            if bound == 0 || bound % needed != 0 {
                return Err(EllipticError::TorsionBoundTooSmall { bound, needed });
            }
            let s = search(datum, &units, bound);
            trials.push(s.trial);
            s
        }
        None => {
            let mut n = BASE_LEVEL.lcm(&needed);
            let cap = n << MAX_DOUBLINGS;
            let mut history: Vec<Search> = Vec::new();
            loop {
                if n > cap {
                    return Err(EllipticError::NoStabilization(cap));
                }
                let s = search(datum, &units, n);
                trials.push(s.trial);
                history.push(s);
                let k = history.len();
                if k >= 3
                    && history[k - 3..].iter().all(|h| h.trial.translations == history[k - 1].trial.translations)
                {
                    // report the smallest stable level
                    break history.swap_remove(k - 3);
                }
                n *= 2;
            }
        }
    };

    let level = Level { n: found.level as i64, units: &units };
    let canonical = |e: &Elem| {
        found.group.iter().map(|g| level.compose(e, g)).min().expect("group is nonempty")
    };
    let mut reps: Vec<Elem> = found.normalizer.iter().map(&canonical).collect();
    reps.sort();
    reps.dedup();
    let index: BTreeMap<Elem, usize> = reps.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let table: Vec<Vec<usize>> = reps
        .iter()
        .map(|a| reps.iter().map(|b| index[&canonical(&level.compose(a, b))]).collect())
        .collect();
    let cayley = CayleyTable::new(table).expect("cosets of a normal subgroup form a group");
    Ok(NormalizerReport {
        quotient: FiniteGroupId::identify(&cayley),
        group_order: found.group.len() as u64,
        normalizer_order: found.normalizer.len() as u64,
        normalizer_translations: found.trial.translations,
        level: found.level,
        trials,
        coset_representatives: reps.iter().map(|e| level.decode(e)).collect(),
    })
}

pub fn normalizer_quotient(datum: &BdfDatum) -> Result<FiniteGroupId, EllipticError> {
    Ok(normalizer_quotient_detailed(datum, NormalizerOptions::default())?.quotient)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BdfTableEntry {
    #[serde(rename = "type")]
    pub type_index: u8,
    pub curve: TauClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<TorsionPoint>,
    pub quotient: FiniteGroupId,
}

/// N_G/G for every valid (type, curve) pair; type 2 once per choice of ε.
pub fn bdf_table() -> Vec<BdfTableEntry> {
    let mut out = Vec::new();
    for type_index in 1..=7u8 {
        for curve in BdfDatum::admissible_curves(type_index).expect("known type") {
            let epsilons: Vec<Option<TorsionPoint>> = if type_index == 2 {
                TorsionPoint::two_torsion().into_iter().map(Some).collect()
            } else {
                vec![None]
            };
            for epsilon in epsilons {
                let datum = BdfDatum::standard(type_index, curve, epsilon).expect("standard datum");
                let quotient = normalizer_quotient(&datum).expect("standard data stabilize");
                out.push(BdfTableEntry { type_index, curve, epsilon, quotient });
            }
        }
    }
    out
}

/// Checks that conjugation by every element of `normalizer` preserves `group`.
#[cfg(test)]
fn is_normalized(group: &[EllAut], normalizer: &[EllAut]) -> bool {
    normalizer.iter().all(|n| {
        let inv = n.inverse();
        group.iter().all(|g| group.contains(&n.compose(g).compose(&inv)))
    })
}

#[cfg(test)]
mod tests {
    use super::super::generate_group;
    use super::*;

    fn quotient(t: u8, tau: TauClass, eps: Option<TorsionPoint>) -> NormalizerReport {
        let d = BdfDatum::standard(t, tau, eps).unwrap();
        normalizer_quotient_detailed(&d, NormalizerOptions::default()).unwrap()
    }

    fn name(r: &NormalizerReport) -> &str {
        r.quotient.name.as_deref().unwrap_or("?")
    }

    #[test]
    fn type_one() {
        let g = quotient(1, TauClass::Generic, None);
        assert_eq!(name(&g), "C2xC2");
        assert_eq!(g.normalizer_translations, 4);
        assert_eq!(name(&quotient(1, TauClass::Square, None)), "D4");
        let h = quotient(1, TauClass::Hexagonal, None);
        assert_eq!(name(&h), "A4");
        assert_eq!(h.quotient.order, 12);
    }

    #[test]
    fn rigid_types() {
        assert_eq!(name(&quotient(3, TauClass::Square, None)), "C2");
        assert_eq!(name(&quotient(4, TauClass::Square, None)), "C2");
        assert_eq!(name(&quotient(5, TauClass::Hexagonal, None)), "S3");
        assert_eq!(name(&quotient(6, TauClass::Hexagonal, None)), "S3");
        assert_eq!(name(&quotient(7, TauClass::Hexagonal, None)), "trivial");
    }

    #[test]
    fn type_two_translations() {
        // t with 2t = ε normalize G as well as the 2-torsion does
        let eps = TorsionPoint::two_torsion()[0];
        let r = quotient(2, TauClass::Generic, Some(eps));
        assert_eq!(r.normalizer_translations, 8);
        assert_eq!(name(&r), "C2xC2");
        let r = quotient(2, TauClass::Square, Some(TorsionPoint::from_fractions(1, 2, 1, 2)));
        assert_eq!(r.quotient.order, 8);
    }

    #[test]
    fn representatives_normalize() {
        for (t, tau) in [(1, TauClass::Hexagonal), (5, TauClass::Hexagonal), (4, TauClass::Square)] {
            let d = BdfDatum::standard(t, tau, None).unwrap();
            let r = normalizer_quotient_detailed(&d, NormalizerOptions::default()).unwrap();
            let g = generate_group(d.generators());
            assert!(is_normalized(&g, &r.coset_representatives));
            assert_eq!(r.normalizer_order, r.quotient.order * r.group_order);
        }
    }

    #[test]
    fn explicit_bound() {
        let d = BdfDatum::standard(6, TauClass::Hexagonal, None).unwrap();
        let r = normalizer_quotient_detailed(&d, NormalizerOptions { torsion_bound: Some(3) }).unwrap();
        assert_eq!(r.quotient.name.as_deref(), Some("S3"));
        assert_eq!(r.trials.len(), 1);
        assert_eq!(
            normalizer_quotient_detailed(&d, NormalizerOptions { torsion_bound: Some(4) }),
            Err(EllipticError::TorsionBoundTooSmall { bound: 4, needed: 3 })
        );
    }

    #[test]
    fn escalation_is_stable() {
        let r = quotient(1, TauClass::Square, None);
        assert_eq!(r.level, 48);
        assert_eq!(r.trials.len(), 3);
        assert!(r.trials.iter().all(|t| t.translations == r.normalizer_translations));
    }
}
