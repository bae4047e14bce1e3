use proptest::prelude::*;
use surfaut_core::blowup::ChainPoint;
use surfaut_core::classifier::{
    classify, kod1_minimal_example, BlowupCenter, ClassificationReport, ClassifyError, LadderValue, Slot,
    SurfaceDescriptor, MAXIMUM_ATTAINED,
};
use surfaut_core::elliptic::{bdf_table, BdfDatum, TauClass};
use surfaut_core::lattice::FinAbGroup;
use surfaut_core::orbifold::OrbifoldSignature;
use surfaut_core::ruled::RuledDesc;

fn kappa_zero() -> Vec<SurfaceDescriptor> {
    let mut out = vec![SurfaceDescriptor::K3 {}, SurfaceDescriptor::Enriques {}, SurfaceDescriptor::Abelian {}];
    for e in bdf_table() {
        out.push(SurfaceDescriptor::Hyperelliptic(BdfDatum::standard(e.type_index, e.curve, e.epsilon).unwrap()));
    }
    out
}

fn corpus() -> Vec<SurfaceDescriptor> {
    let mut out = kappa_zero();
    for n in [0, 1, 3, 7] {
        for p in [ChainPoint::General, ChainPoint::FixedL4] {
            out.push(SurfaceDescriptor::RationalBlowup { n: Some(n), point: Some(p) });
        }
    }
    out.push(SurfaceDescriptor::RuledOverCurve(RuledDesc::decomposable(1, 4, 0, false, false).unwrap()));
    out.push(SurfaceDescriptor::RuledOverCurve(RuledDesc::decomposable(1, 0, 0, false, true).unwrap()));
    out.push(SurfaceDescriptor::RuledOverCurve(RuledDesc::decomposable(0, 2, 0, false, false).unwrap()));
    out.push(SurfaceDescriptor::RuledOverCurve(RuledDesc::decomposable(3, 1, 1, true, false).unwrap()));
    out.push(SurfaceDescriptor::RuledOverCurve(RuledDesc::indecomposable(1, 1).unwrap()));
    out.push(SurfaceDescriptor::GeneralType { chi: 200 });
    out.push(SurfaceDescriptor::GeneralType { chi: 5 });
    out.push(SurfaceDescriptor::Kod1MinimalExample { n: 8 });
    out.push(SurfaceDescriptor::Kod1BlowupExample {
        n: 3,
        sig: OrbifoldSignature::new(1, vec![3, 3]).unwrap(),
        center: BlowupCenter::FullStabilizer,
    });
    out.push(SurfaceDescriptor::NonMinimal {
        core: Box::new(SurfaceDescriptor::GeneralType { chi: 5 }),
        chi_top: 12,
        has_nonpos_curved_target: true,
    });
    out
}

fn reports() -> Vec<(SurfaceDescriptor, ClassificationReport)> {
    corpus().into_iter().map(|d| {
        let r = classify(&d).unwrap_or_else(|e| panic!("{d:?}: {e}"));
        (d, r)
    }).collect()
}

#[test]
fn kappa_zero_index_at_most_twelve() {
    for d in kappa_zero() {
        let r = classify(&d).unwrap();
        let bound = r.index_bound().expect("bounded");
        assert!(bound <= 12, "{d:?}: {bound}");
        let hexagonal_one = matches!(&d, SurfaceDescriptor::Hyperelliptic(b) if b.type_index() == 1 && b.tau() == TauClass::Hexagonal);
        assert_eq!(r.ladder.value(Slot::GammaQ).exact_order() == Some(12), hexagonal_one, "{d:?}");
        assert_eq!(r.flags.iter().any(|f| f == MAXIMUM_ATTAINED), hexagonal_one);
    }
}

#[test]
fn ladder_orders_are_consistent() {
    let steps = [
        (Slot::SharpOverStar, Slot::GammaStar, Slot::GammaSharp),
        (Slot::ZOverSharp, Slot::GammaSharp, Slot::GammaZ),
        (Slot::QOverZ, Slot::GammaZ, Slot::GammaQ),
    ];
    for (d, r) in reports() {
        for (q, lo, hi) in steps {
            let (q_lo, q_hi) = r.ladder.value(q).order_range();
            let (l_lo, l_hi) = r.ladder.value(lo).order_range();
            let (h_lo, h_hi) = r.ladder.value(hi).order_range();
            assert!(h_lo >= q_lo * l_lo, "{d:?} at {hi}");
            if let (Some(a), Some(b)) = (q_hi, l_hi) {
                assert!(h_hi.is_some_and(|h| h <= a * b), "{d:?} at {hi}");
            }
            let exact = |s| r.ladder.value(s).exact_order();
            if let (Some(a), Some(b), Some(c)) = (exact(q), exact(lo), exact(hi)) {
                assert_eq!(a * b, c, "{d:?} at {hi}");
            }
        }
    }
}

#[test]
fn every_fact_is_cited() {
    for (d, r) in reports() {
        assert!(!r.rules_applied.is_empty(), "{d:?}");
        assert!(r.rules_applied.iter().all(|c| !c.anchor.is_empty()));
        for s in Slot::ALL {
            let entry = r.ladder.get(s);
            if !entry.value.is_unknown() {
                assert!(!entry.rules.is_empty(), "{d:?}: {s} has no rule");
            }
        }
    }
}

#[test]
fn reports_round_trip() {
    for (d, r) in reports() {
        let dj = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<SurfaceDescriptor>(&dj).unwrap(), d);
        let rj = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<ClassificationReport>(&rj).unwrap(), r);
    }
}

#[test]
fn kod1_minimal_family() {
    for n in (6..=60u64).step_by(2) {
        let r = kod1_minimal_example(n).unwrap();
        // 2 − 2g(B) = 2·(2 − n/2)
        assert_eq!(2 - 2 * r.base_genus as i64, 4 - n as i64);
        assert_eq!((r.chi_top, r.p_g, r.q, r.b2), (0, 0, 1, 2));
        assert!(r.bound >= n);
        assert!(r.all_swaps_excluded);
        let c = classify(&SurfaceDescriptor::Kod1MinimalExample { n }).unwrap();
        assert!(c.ladder.value(Slot::QOverZ).order_range().0 >= n);
    }
    for n in [0, 4, 7, 61] {
        assert!(matches!(kod1_minimal_example(n), Err(ClassifyError::Precondition { .. })));
    }
}

#[test]
fn general_type_preconditions() {
    assert!(matches!(classify(&SurfaceDescriptor::GeneralType { chi: 0 }), Err(ClassifyError::Precondition { .. })));
    let r = classify(&SurfaceDescriptor::GeneralType { chi: 189 }).unwrap();
    assert_eq!(r.index_bound(), Some(4));
}

fn value() -> impl Strategy<Value = LadderValue> {
    prop_oneof![
        Just(LadderValue::Unknown),
        (1u64..=12).prop_map(|n| LadderValue::abelian(FinAbGroup::cyclic(n as u32))),
        (1u64..=12).prop_map(LadderValue::at_most),
        (1u64..=12).prop_map(LadderValue::at_least),
        (1u64..=6, 0u64..=6).prop_map(|(a, b)| LadderValue::Bound { at_least: Some(a + 1), at_most: Some(a + 1 + b) }),
    ]
}

proptest! {
    #[test]
    fn merge_is_the_intersection(a in value(), b in value()) {
        let (lo1, hi1) = a.order_range();
        let (lo2, hi2) = b.order_range();
        let lo = lo1.max(lo2);
        let hi = match (hi1, hi2) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        match a.merge(&b) {
            Some(m) => {
                let (mlo, mhi) = m.order_range();
                // never looser than either input
                prop_assert!(mlo >= lo);
                let tighter = match (mhi, hi) {
                    (Some(x), Some(y)) => x <= y,
                    (_, None) => true,
                    (None, Some(_)) => false,
                };
                prop_assert!(tighter);
                // and never tighter than the inputs justify, unless a group is pinned down
                if !a.is_exact() && !b.is_exact() {
                    prop_assert_eq!((mlo, mhi), (lo, hi));
                }
                prop_assert_eq!(b.merge(&a).map(|x| x.order_range()), Some((mlo, mhi)));
            }
            None => {
                let disjoint = hi.is_some_and(|h| lo > h);
                let both_exact = a.is_exact() && b.is_exact();
                prop_assert!(disjoint || both_exact);
                if both_exact && !disjoint {
                    prop_assert_ne!(a.exact_order(), b.exact_order());
                }
            }
        }
    }
}
