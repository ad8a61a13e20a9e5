use proptest::prelude::*;

use paramodular::divisor::{
    check_rearrangement, eliminate_k, script_e, star_form, DivisorClass, DivisorLabel,
};
use paramodular::exact_arith::{rat, AffineForm, IRange, Rational};
use paramodular::geometry::{
    restrict, sigma_pair, DiscardReason, Domain, GeometrySet, RestrictMode, Restriction,
    SurfaceClass,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..12).prop_map(|(a, b)| rat(a, b))
}

fn affine() -> impl Strategy<Value = AffineForm> {
    (rational(), rational(), rational()).prop_map(|(a, b, c)| AffineForm::new(a, b, c))
}

fn class_over(labels: Vec<DivisorLabel>) -> impl Strategy<Value = DivisorClass> {
    prop::collection::vec((prop::sample::select(labels), affine()), 0..6)
        .prop_map(DivisorClass::from_terms)
}

fn any_class() -> impl Strategy<Value = DivisorClass> {
    class_over(DivisorLabel::ALL.to_vec())
}

fn surface_scale(c: &SurfaceClass, k: &Rational) -> SurfaceClass {
    c.scale_affine(&AffineForm::constant(k.clone())).unwrap()
}

proptest! {
    #[test]
    fn eliminate_k_is_linear_and_idempotent(
        p in prop::sample::select(vec![5u64, 7, 11, 13]),
        x in any_class(),
        y in any_class(),
        a in rational(),
        b in rational(),
    ) {
        let once = eliminate_k(&x, p).unwrap();
        prop_assert_eq!(eliminate_k(&once, p).unwrap(), once.clone());
        prop_assert!(once.coeff(DivisorLabel::K).is_zero());
        let combo = &x.scale(&a) + &y.scale(&b);
        let expected = &once.scale(&a) + &eliminate_k(&y, p).unwrap().scale(&b);
        prop_assert_eq!(eliminate_k(&combo, p).unwrap(), expected);
    }

    #[test]
    fn exact_restriction_is_linear(
        surface in prop::sample::select(vec!["E1'", "E1''", "H1", "H2", "E2"]),
        seed in any::<u64>(),
        a in rational(),
        b in rational(),
    ) {
        let geometry = GeometrySet::shipped();
        let table = geometry.get(surface).unwrap();
        let exact: Vec<DivisorLabel> = table
            .restrictions
            .iter()
            .filter(|(_, r)| matches!(r, Restriction::Class(_)))
            .map(|(l, _)| *l)
            .collect();
        let pick = |s: u64| exact[(s as usize) % exact.len()];
        let x = DivisorClass::term(pick(seed), AffineForm::n());
        let y = DivisorClass::term(pick(seed / 7), AffineForm::i());
        let rx = restrict(&x, table, RestrictMode::Exact).unwrap().class;
        let ry = restrict(&y, table, RestrictMode::Exact).unwrap().class;
        let combo = &x.scale(&a) + &y.scale(&b);
        let r = restrict(&combo, table, RestrictMode::Exact).unwrap().class;
        prop_assert_eq!(r, surface_scale(&rx, &a).add(&surface_scale(&ry, &b)));
    }
}

#[test]
fn script_e_eliminates_to_star_form() {
    for p in [5, 7, 11, 13, 17] {
        assert_eq!(eliminate_k(&script_e(p).unwrap(), p).unwrap(), star_form(p));
        assert!(check_rearrangement(p).unwrap());
    }
}

#[test]
fn step_one_displays_from_shipped_table() {
    let geometry = GeometrySet::shipped();
    let table = geometry.get("E1'").unwrap();
    let n = AffineForm::n();
    let i = AffineForm::i();
    for p in [5u64, 7, 11, 13] {
        let class = &star_form(p).scale_affine(&n).unwrap()
            - &DivisorClass::term(DivisorLabel::E1Prime, i.clone());
        let domain = Domain {
            divisibility: 24 * p as i64,
            i_range: IRange::up_to_multiple_of_n(rat(1, 2)),
        };
        let r = restrict(&class, table, RestrictMode::UpperBound(&domain)).unwrap();
        let slope = rat(1, p as i64) - rat(3, 4);
        let expected = SurfaceClass::from_terms([
            ("SIGMA", i.scale(&rat(3, 1))),
            ("FIB", n.scale(&slope) + i.scale(&rat(4, 1))),
        ]);
        assert_eq!(r.class, expected);
        assert_eq!(
            sigma_pair(&r.class, table).unwrap(),
            n.scale(&slope) + i.clone()
        );
    }
}

#[test]
fn every_discard_is_logged_with_provenance() {
    let geometry = GeometrySet::shipped();
    let domain = Domain {
        divisibility: 120,
        i_range: IRange::up_to_multiple_of_n(rat(1, 2)),
    };
    let n = AffineForm::n();
    for surface in ["E1'", "E1''", "H1", "H2", "E2"] {
        let table = geometry.get(surface).unwrap();
        let class = DivisorClass::from_terms(
            table
                .restrictions
                .keys()
                .filter(|l| **l != DivisorLabel::Lambda)
                .map(|l| (*l, -n.clone())),
        );
        let r = restrict(&class, table, RestrictMode::UpperBound(&domain)).unwrap();
        for (label, entry) in &table.restrictions {
            if matches!(entry, Restriction::Class(_)) || *label == DivisorLabel::Lambda {
                continue;
            }
            let logged = r
                .discarded
                .iter()
                .find(|d| d.term == label.name())
                .unwrap_or_else(|| panic!("{surface}: {label} not logged"));
            assert_eq!(Some(logged.provenance), table.provenance_of(*label));
            assert_ne!(logged.reason, DiscardReason::EffectiveCurve);
        }
    }
}
