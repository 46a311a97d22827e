//! Randomized algebraic laws driven by proptest.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero as _;
use proptest::prelude::*;

use involut::scalar::{
    adjoin_sqrt, rat, rat_from_string, rat_to_string, squarefree_part, TowerContext, TowerScalar,
};

fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-100i64..=100, 1i64..=40).prop_map(|(p, q)| rat(p, q))
}

fn arb_tower_pair() -> impl Strategy<Value = (TowerScalar, TowerScalar)> {
    // elements of ℚ(√2, √3): a + b√2 + c√3 + d√6
    let coeff = || proptest::collection::vec(arb_rational(), 4);
    (coeff(), coeff()).prop_map(|(a, b)| {
        let ctx0 = Arc::new(TowerContext::rational());
        let (ctx1, _) = adjoin_sqrt(&ctx0, &rat(2, 1)).unwrap();
        let (ctx, r3) = adjoin_sqrt(&ctx1, &rat(3, 1)).unwrap();
        let r2 = {
            let (_, r2) = adjoin_sqrt(&ctx0, &rat(2, 1)).unwrap();
            r2.lift_to(&ctx).unwrap()
        };
        let r6 = r2.try_mul(&r3).unwrap();
        let basis = [
            TowerScalar::from_rational(rat(1, 1)).lift_to(&ctx).unwrap(),
            r2,
            r3,
            r6,
        ];
        let build = |cs: Vec<BigRational>| {
            let mut acc = TowerScalar::from_rational(rat(0, 1)).lift_to(&ctx).unwrap();
            for (c, e) in cs.into_iter().zip(&basis) {
                let term = TowerScalar::from_rational(c).lift_to(&ctx).unwrap();
                acc = acc.try_add(&term.try_mul(e).unwrap()).unwrap();
            }
            acc
        };
        (build(a), build(b))
    })
}

proptest! {
    #[test]
    fn rational_string_round_trip(r in arb_rational()) {
        prop_assert_eq!(rat_from_string(&rat_to_string(&r)).unwrap(), r);
    }

    #[test]
    fn squarefree_part_reconstructs(n in 1i64..=1_000_000) {
        let (s, f) = squarefree_part(&BigInt::from(n));
        prop_assert_eq!(&s * &f * &f, BigInt::from(n));
        // s has no square divisor > 1
        let mut d = BigInt::from(2);
        while &d * &d <= s {
            prop_assert!(!(&s % (&d * &d)).is_zero());
            d += 1;
        }
    }

    #[test]
    fn tower_field_laws((x, y) in arb_tower_pair()) {
        let xy = x.try_mul(&y).unwrap();
        prop_assert_eq!(&xy, &y.try_mul(&x).unwrap());
        prop_assert_eq!(
            x.try_add(&y).unwrap().try_mul(&x).unwrap(),
            x.try_mul(&x).unwrap().try_add(&xy).unwrap()
        );
        if !x.is_zero() {
            let inv = x.try_inv().unwrap();
            let one = TowerScalar::from_rational(rat(1, 1)).lift_to(x.context()).unwrap();
            prop_assert_eq!(x.try_mul(&inv).unwrap(), one);
        }
    }

    #[test]
    fn adjoined_root_squares_back(p in 1i64..=400, q in 1i64..=40) {
        let ctx = Arc::new(TowerContext::rational());
        let r = rat(p, q);
        let (ctx2, root) = adjoin_sqrt(&ctx, &r).unwrap();
        let sq = root.try_mul(&root).unwrap();
        prop_assert_eq!(sq, TowerScalar::from_rational(r).lift_to(&ctx2).unwrap());
    }
}

