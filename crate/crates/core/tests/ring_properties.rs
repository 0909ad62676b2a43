use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use regquot::koszul::{
    check_condition_ii, check_regular_sequence, decompose_conormal, tor, HomogeneousIdeal, KoszulComplex,
};
use regquot::scalar::int;
use regquot::{normal_form, BaseRing, Generator, GradedRing, RingElement, RingHandle, Scalar, Window};

fn zxy() -> &'static Arc<GradedRing> {
    static R: OnceLock<Arc<GradedRing>> = OnceLock::new();
    R.get_or_init(|| {
        GradedRing::new(BaseRing::Integers, vec![Generator::new("x", 2), Generator::new("y", 2)], Window::new(12, 0))
            .unwrap()
    })
}

fn f2xy() -> &'static Arc<GradedRing> {
    static R: OnceLock<Arc<GradedRing>> = OnceLock::new();
    R.get_or_init(|| {
        GradedRing::new(
            BaseRing::PrimeField(2),
            vec![Generator::new("x", 2), Generator::new("y", 2)],
            Window::new(10, 0),
        )
        .unwrap()
    })
}

/// A homogeneous element of the given degree with coefficients `cs`, cycled
/// over the monomial basis.
fn build(r: &Arc<GradedRing>, degree: i64, cs: &[i64]) -> RingElement {
    let mut acc = r.zero();
    for (m, c) in r.degree_basis(degree).unwrap().into_iter().zip(cs.iter().cycle()) {
        acc = acc.add(&r.monomial(m, int(*c)).unwrap()).unwrap();
    }
    acc
}

fn homogeneous(r: &'static Arc<GradedRing>, max_half_degree: i64) -> impl Strategy<Value = RingElement> {
    (0..=max_half_degree, prop::collection::vec(-3i64..=3, 1..6)).prop_map(move |(h, cs)| build(r, 2 * h, &cs))
}

fn nonzero_positive(r: &'static Arc<GradedRing>, max_half_degree: i64) -> impl Strategy<Value = RingElement> {
    (1..=max_half_degree, prop::collection::vec(0i64..=1, 1..5))
        .prop_map(move |(h, cs)| build(r, 2 * h, &cs))
        .prop_filter("nonzero", |e| !e.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in homogeneous(zxy(), 2), b in homogeneous(zxy(), 2), c in homogeneous(zxy(), 2)) {
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        let sum = b.add(&c).unwrap();
        prop_assert_eq!(a.mul(&sum).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn normal_form_is_idempotent_linear_and_kills_generators(
        g in nonzero_positive(zxy(), 2),
        h in 0i64..=3,
        cs in prop::collection::vec(-5i64..=5, 1..6),
        ds in prop::collection::vec(-5i64..=5, 1..6),
    ) {
        let r = zxy();
        let ideal = [g.clone()];
        let (a, b) = (build(r, 2 * h, &cs), build(r, 2 * h, &ds));
        let na = normal_form(&a, &ideal, 12).unwrap();
        prop_assert_eq!(normal_form(&na, &ideal, 12).unwrap(), na.clone());
        let nb = normal_form(&b, &ideal, 12).unwrap();
        prop_assert_eq!(normal_form(&a.add(&b).unwrap(), &ideal, 12).unwrap(), na.add(&nb).unwrap());
        prop_assert!(normal_form(&g, &ideal, 12).unwrap().is_zero());
    }

    #[test]
    fn odd_degrees_are_empty(d in 0i64..12) {
        prop_assert!(zxy().degree_basis(2 * d + 1).unwrap_or_default().is_empty());
    }

    #[test]
    fn localized_units_and_membership(num in -200i64..=200, den in 1i64..=60, k in 1u32..=3) {
        // Oracle over Q: c lies in p^k Z_(p) iff v_p(num) - v_p(den) >= k.
        let p = 3i64;
        prop_assume!(den % p != 0 && num != 0);
        let base = BaseRing::IntegersLocalized(3);
        let c: Scalar = Scalar::new(BigInt::from(num), BigInt::from(den));
        let c = base.normalize(&c).unwrap();
        let vp = {
            let (mut n, mut v) = (num.abs(), 0u32);
            while n % p == 0 { n /= p; v += 1; }
            v
        };
        prop_assert_eq!(base.is_unit(&c), vp == 0);
        prop_assert_eq!(base.valuation(&c), Some(vp));
        let r = GradedRing::new(base, vec![], Window::new(0, 0)).unwrap();
        let e = r.constant(&c).unwrap();
        let nf = normal_form(&e, &[r.int(p.pow(k))], 0).unwrap();
        prop_assert_eq!(nf.is_zero(), vp >= k);
        prop_assert!(normal_form(&e.sub(&nf).unwrap(), &[r.int(p.pow(k))], 0).unwrap().is_zero());
        let inverse = base.inverse(&c);
        prop_assert_eq!(inverse.is_some(), vp == 0);
        if let Some(i) = inverse {
            prop_assert!((base.mul(&c, &i) - Scalar::from_integer(1.into())).is_zero());
            prop_assert!(!i.denom().is_negative());
        }
    }

    #[test]
    fn koszul_differentials_square_to_zero(f in nonzero_positive(f2xy(), 2), g in nonzero_positive(f2xy(), 2)) {
        let r = f2xy();
        let j = HomogeneousIdeal::new(r, vec![f, g]).unwrap();
        let kc = KoszulComplex::new(&j, None).unwrap();
        for d in (0..=10).step_by(2) {
            for i in 1..=2 {
                prop_assert!(kc.square_zero(i, d).unwrap());
            }
        }
    }

    #[test]
    fn tor_vanishes_beyond_length(f in nonzero_positive(f2xy(), 2), g in nonzero_positive(f2xy(), 2)) {
        let r = f2xy();
        let j = HomogeneousIdeal::principal(&f).unwrap();
        let k = HomogeneousIdeal::principal(&g).unwrap();
        prop_assert!(tor(r, &j, &k, 2, 10).unwrap().is_zero());
    }

    #[test]
    fn condition_ii_matches_regularity(f in nonzero_positive(f2xy(), 2), g in nonzero_positive(f2xy(), 2)) {
        let r = f2xy();
        let regular = check_regular_sequence(r, &[f.clone(), g.clone()], 10).unwrap().is_regular();
        let ideals = [HomogeneousIdeal::principal(&f).unwrap(), HomogeneousIdeal::principal(&g).unwrap()];
        let cii = check_condition_ii(&ideals, 10).unwrap();
        prop_assert_eq!(cii.iter().all(|c| c.holds), regular);
    }

    #[test]
    fn conormal_decomposition_is_invertible(a in 1u32..=3, b in 1u32..=3) {
        let r = f2xy();
        let x = r.gen("x").unwrap().pow(a).unwrap();
        let y = r.gen("y").unwrap().pow(b).unwrap();
        let dec = decompose_conormal(&[HomogeneousIdeal::principal(&x).unwrap(), HomogeneousIdeal::principal(&y).unwrap()], 10).unwrap();
        prop_assert!(dec.mutually_inverse());
    }
}
