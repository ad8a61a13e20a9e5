use num_complex::Complex64;
use proptest::prelude::*;

use paramodular::exact_arith::{int, rat, ComplexRational};
use paramodular::symplectic::siegel::{ExactPoint, NumericPoint};
use paramodular::symplectic::{
    act, conjugator, in_paramodular, in_prime_pattern, is_in_h2, is_symplectic, sp4_order_mod,
    ParamodularGenerator, SymplecticMatrix,
};

fn generator() -> impl Strategy<Value = ParamodularGenerator> {
    prop_oneof![
        (-3i64..=3, -2i64..=2, -2i64..=2).prop_map(|(b11, b12, b22)| ParamodularGenerator::Upper {
            b11,
            b12,
            b22
        }),
        (-3i64..=3, -2i64..=2, -2i64..=2).prop_map(|(c11, c12, c22)| ParamodularGenerator::Lower {
            c11,
            c12,
            c22
        }),
        (-2i64..=2, -1i64..=1).prop_map(|(b, c)| ParamodularGenerator::Torus { b, c }),
        Just(ParamodularGenerator::Reflection),
        Just(ParamodularGenerator::MinusIdentity),
    ]
}

fn word(t: u64, gens: &[ParamodularGenerator]) -> SymplecticMatrix {
    gens.iter()
        .fold(SymplecticMatrix::identity(), |acc, g| &acc * &g.build(t))
}

/// Generators of Γ'_{p²}: integral symplectic with the odd checkerboard slots in pZ.
fn prime_pattern_generator(p: i64) -> impl Strategy<Value = SymplecticMatrix> {
    prop_oneof![
        (-3i64..=3, -2i64..=2, -3i64..=3).prop_map(move |(a, b, c)| {
            SymplecticMatrix::translation([[int(a), int(p * b)], [int(p * b), int(c)]]).unwrap()
        }),
        (-3i64..=3, -2i64..=2, -3i64..=3).prop_map(move |(a, b, c)| {
            SymplecticMatrix::lower_translation([[int(a), int(p * b)], [int(p * b), int(c)]])
                .unwrap()
        }),
        (-2i64..=2).prop_map(move |b| {
            SymplecticMatrix::torus([[int(1), int(p * b)], [int(0), int(1)]]).unwrap()
        }),
        (-2i64..=2).prop_map(move |c| {
            SymplecticMatrix::torus([[int(1), int(0)], [int(p * c), int(1)]]).unwrap()
        }),
        Just(SymplecticMatrix::minus_identity()),
    ]
}

fn siegel_point() -> impl Strategy<Value = NumericPoint> {
    (
        -2.0f64..2.0,
        -2.0f64..2.0,
        -2.0f64..2.0,
        0.2f64..3.0,
        0.2f64..3.0,
        -0.9f64..0.9,
    )
        .prop_map(|(x1, x2, x3, y1, y3, rho)| {
            // Im Z = [[y1, ρ√(y1 y3)], [ρ√(y1 y3), y3]] is positive definite for |ρ| < 1.
            let y2 = rho * (y1 * y3).sqrt();
            NumericPoint::new(
                Complex64::new(x1, y1),
                Complex64::new(x2, y2),
                Complex64::new(x3, y3),
            )
        })
}

proptest! {
    #[test]
    fn products_and_inverses_are_symplectic(
        t in prop::sample::select(vec![1u64, 4, 9, 25]),
        gens in prop::collection::vec(generator(), 1..6),
    ) {
        let g = word(t, &gens);
        prop_assert!(is_symplectic(g.as_matrix()));
        prop_assert!(is_symplectic(g.inverse().as_matrix()));
        prop_assert_eq!(&g * &g.inverse(), SymplecticMatrix::identity());
    }

    #[test]
    fn paramodular_pattern_is_closed(
        t in prop::sample::select(vec![4u64, 9, 25]),
        a in prop::collection::vec(generator(), 1..5),
        b in prop::collection::vec(generator(), 1..5),
    ) {
        let x = word(t, &a);
        let y = word(t, &b);
        prop_assert!(in_paramodular(&x, t));
        prop_assert!(in_paramodular(&(&x * &y), t));
        prop_assert!(in_paramodular(&x.inverse(), t));
    }

    #[test]
    fn conjugation_maps_patterns(
        p in prop::sample::select(vec![2u64, 3, 5]),
        gens in prop::collection::vec(generator(), 1..5),
    ) {
        let r = conjugator(p).unwrap();
        let m = word(p * p, &gens);
        prop_assert!(in_prime_pattern(&r.conjugate(&m), p));
    }

    #[test]
    fn inverse_conjugation_lands_in_paramodular(
        (p, m) in prop::sample::select(vec![2i64, 3, 5])
            .prop_flat_map(|p| (Just(p), prop::collection::vec(prime_pattern_generator(p), 1..4)))
    ) {
        let m = m.iter().fold(SymplecticMatrix::identity(), |acc, g| &acc * g);
        prop_assert!(in_prime_pattern(&m, p as u64));
        let r = conjugator(p as u64).unwrap();
        prop_assert!(in_paramodular(&r.inverse().conjugate(&m), (p * p) as u64));
    }

    #[test]
    fn action_preserves_h2_and_is_a_cocycle(
        z in siegel_point(),
        a in prop::collection::vec(generator(), 1..3),
        b in prop::collection::vec(generator(), 1..3),
    ) {
        let g1 = word(1, &a);
        let g2 = word(1, &b);
        let direct = act(&(&g1 * &g2), &z);
        let staged = act(&g2, &z).and_then(|w| act(&g1, &w));
        match (direct, staged) {
            (Ok(x), Ok(y)) => {
                prop_assert!(is_in_h2(&x));
                let scale = 1.0 + x.tau1.norm().max(x.tau2.norm()).max(x.tau3.norm());
                prop_assert!(x.max_distance(&y) <= 1e-9 * scale);
            }
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "one side singular: {:?} vs {:?}", x, y),
        }
    }
}

#[test]
fn exact_cocycle_on_gaussian_rationals() {
    let c = |re: (i64, i64), im: (i64, i64)| ComplexRational::new(rat(re.0, re.1), rat(im.0, im.1));
    let points = [
        ExactPoint::new(c((0, 1), (1, 1)), c((0, 1), (0, 1)), c((0, 1), (1, 1))),
        ExactPoint::new(c((1, 3), (2, 1)), c((-1, 2), (1, 2)), c((5, 1), (1, 1))),
        ExactPoint::new(c((-2, 7), (3, 4)), c((1, 5), (-1, 8)), c((0, 1), (5, 2))),
    ];
    let gens = [
        ParamodularGenerator::Upper {
            b11: 1,
            b12: 1,
            b22: -1,
        },
        ParamodularGenerator::Lower {
            c11: 2,
            c12: -1,
            c22: 3,
        },
        ParamodularGenerator::Torus { b: 1, c: 1 },
        ParamodularGenerator::Reflection,
    ];
    for t in [1u64, 4, 9] {
        let mats: Vec<SymplecticMatrix> = gens.iter().map(|g| g.build(t)).collect();
        let j = SymplecticMatrix::j();
        for z in &points {
            for a in &mats {
                for b in mats.iter().chain(std::iter::once(&j)) {
                    let direct = act(&(a * b), z).unwrap();
                    let staged = act(a, &act(b, z).unwrap()).unwrap();
                    assert_eq!(direct, staged);
                    assert!(is_in_h2(&direct));
                }
            }
        }
    }
}

#[test]
fn order_of_sp4_over_f2() {
    assert_eq!(sp4_order_mod(2).unwrap(), 720);
    assert_eq!(
        u128::from(paramodular::symplectic::finite::sp4_f2_exhaustive()),
        720
    );
}
