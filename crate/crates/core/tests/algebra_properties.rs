use hseries_core::mpoly::{MPoly, Monomial, Symbol};
use hseries_core::rational::{self, is_canonical, Rational};
use hseries_core::sequences::stirling2;
use hseries_core::TSeries;
use num_traits::Zero;
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| rational::frac(n, d))
}

fn poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0u32..3, 0u32..2), rat()), 0..4).prop_map(|terms| {
        MPoly::from_terms(terms.into_iter().map(|((ex, ey), c)| {
            let m: Monomial = [ex, ey, 0, 0];
            (m, c)
        }))
    })
}

fn series_with(order: usize, constant: Option<MPoly>) -> impl Strategy<Value = TSeries> {
    prop::collection::vec(poly(), order + 1).prop_map(move |mut cs| {
        if let Some(c) = &constant {
            cs[0] = c.clone();
        }
        TSeries::new(cs, order)
    })
}

fn scalar_series(order: usize, constant: Option<Rational>) -> impl Strategy<Value = TSeries> {
    prop::collection::vec(rat(), order + 1).prop_map(move |mut cs| {
        if let Some(c) = &constant {
            cs[0] = c.clone();
        }
        TSeries::from_rationals(&cs, order)
    })
}

fn all_canonical(s: &TSeries) -> bool {
    s.coeffs().iter().all(|c| c.terms().all(|(_, q)| is_canonical(q)))
}

const N: usize = 6;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_laws(a in series_with(N, None), b in series_with(N, None), c in series_with(N, None)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.mul(&a).unwrap());
        prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = ab.add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert!(all_canonical(&lhs));
    }

    #[test]
    fn inverse_of_unit_constant(a in series_with(N, Some(MPoly::one()))) {
        let inv = a.inverse().unwrap();
        prop_assert_eq!(a.mul(&inv).unwrap(), TSeries::one(N));
        prop_assert!(all_canonical(&inv));
    }

    #[test]
    fn exp_is_a_homomorphism(a in scalar_series(N, Some(rational::int(0))), b in scalar_series(N, Some(rational::int(0)))) {
        let lhs = a.add(&b).unwrap().exp().unwrap();
        let rhs = a.exp().unwrap().mul(&b.exp().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn log_and_exp_invert(a in series_with(N, Some(MPoly::zero())), s in series_with(N, Some(MPoly::one()))) {
        prop_assert_eq!(a.exp().unwrap().log().unwrap(), a);
        prop_assert_eq!(s.log().unwrap().exp().unwrap(), s);
    }

    #[test]
    fn composition_is_associative(
        f in scalar_series(N, None),
        g in scalar_series(N, Some(rational::int(0))),
        h in scalar_series(N, Some(rational::int(0))),
    ) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn euler_operator_matches_stirling_expansion(f in series_with(8, None), n in 0u32..=5) {
        let row: Vec<Rational> = (0..=n as u64).map(|k| rational::big(stirling2(n as u64, k))).collect();
        let direct = f.euler_operator(n);
        let expanded = f.euler_operator_expanded(&row).unwrap();
        let upto = 8 - n as usize;
        prop_assert_eq!(&direct.coeffs()[..=upto], &expanded.coeffs()[..=upto]);
        prop_assert!(expanded.reliable_len() > upto);
    }

    #[test]
    fn rationals_stay_canonical(a in rat(), b in rat(), c in rat()) {
        for q in [&a + &b, &a * &b, &a - &c, (&a * &c) + &b] {
            prop_assert!(is_canonical(&q));
        }
        if !b.is_zero() {
            prop_assert!(is_canonical(&(&a / &b)));
        }
    }

    #[test]
    fn text_and_json_round_trip(s in series_with(N, None)) {
        let text = s.coeffs()[1].to_string();
        prop_assert_eq!(text.parse::<MPoly>().unwrap(), s.coeffs()[1].clone());
        let json = serde_json::to_string(&s.to_json()).unwrap();
        let back = TSeries::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }
}

#[test]
fn operands_of_unequal_order_are_rejected() {
    let a = TSeries::one(4);
    let b = TSeries::one(5);
    assert!(a.add(&b).is_err());
    assert!(a.mul(&b).is_err());
}

#[test]
fn symbols_outside_the_fixed_set_are_rejected() {
    assert!("w^2".parse::<MPoly>().is_err());
    assert!("q".parse::<Symbol>().is_err());
}
