use proptest::prelude::*;

use paramodular::exact_arith::rat;
use paramodular::fourier_jacobi::{
    check_cusp_power_vanishing, CoeffPoly, FjSeries, VanishingOrder,
};

const N: usize = 6;

/// Sparse series whose stored coefficients are `a·θ[name, m] + b`.
fn series(name: &'static str) -> impl Strategy<Value = FjSeries> {
    prop::collection::vec((0usize..N, -3i64..=3, -2i64..=2), 0..4).prop_map(move |terms| {
        FjSeries::from_coeffs(
            N,
            terms.into_iter().map(|(m, a, b)| {
                let c =
                    &CoeffPoly::symbol(name, m).scale(&rat(a, 1)) + &CoeffPoly::constant(rat(b, 1));
                (m, c)
            }),
        )
    })
}

fn order_value(o: VanishingOrder) -> usize {
    match o {
        VanishingOrder::Exact(m) | VanishingOrder::AtLeast(m) => m,
    }
}

proptest! {
    #[test]
    fn order_is_superadditive(f in series("a"), g in series("b")) {
        let fg = f.product(&g);
        let (of, og) = (f.vanishing_order(), g.vanishing_order());
        let sum = order_value(of) + order_value(og);
        prop_assert!(fg.vanishing_order().is_at_least(sum.min(N)));
        if let (VanishingOrder::Exact(a), VanishingOrder::Exact(b)) = (of, og) {
            if a + b < N {
                prop_assert_eq!(fg.vanishing_order(), VanishingOrder::Exact(a + b));
            }
        }
    }

    #[test]
    fn product_is_bilinear(f in series("a"), g in series("b"), h in series("c")) {
        prop_assert_eq!((&f + &g).product(&h), &f.product(&h) + &g.product(&h));
    }

    #[test]
    fn product_is_associative_and_commutative(f in series("a"), g in series("b"), h in series("c")) {
        prop_assert_eq!(f.product(&g).product(&h), f.product(&g.product(&h)));
        prop_assert_eq!(f.product(&g), g.product(&f));
    }
}

#[test]
fn cusp_power_vanishing_for_small_weights() {
    for n in 1..=5 {
        let r = check_cusp_power_vanishing(n, n + 3).unwrap();
        assert!(r.vanishes_below_n, "n = {n}");
        assert!(r.attained_at_n, "n = {n}");
        assert!(r.convolution_agrees, "n = {n}");
        assert_eq!(r.order, VanishingOrder::Exact(n));
    }
}
