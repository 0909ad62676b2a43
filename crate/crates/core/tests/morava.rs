use regquot::clifford::CliffordHandle;
use regquot::morava::{build_scenario, MoravaScenario};
use regquot::{Error, RingHandle};

#[test]
fn odd_primes_give_exterior_algebras() {
    let s = MoravaScenario::with_default_window(5, 2).unwrap();
    let h = s.kn_homology().unwrap();
    assert_eq!(h.text, "Λ(a0, a1)");
    assert_eq!(h.generators, vec![("a0".to_string(), 1), ("a1".to_string(), 9)]);
    let s = MoravaScenario::with_default_window(3, 1).unwrap();
    let g = &s.ring().generators()[0];
    assert_eq!((g.name.as_str(), g.degree, s.ring().generators().len()), ("v1", 4, 1));
    assert_eq!(s.spec().sequence()[0].to_string(), "3");
    assert!(s.spec().is_commutative());
}

#[test]
fn two_primary_k1() {
    let s = MoravaScenario::with_default_window(2, 1).unwrap();
    let imgs: Vec<String> = s.obstruction_images().unwrap().iter().map(|e| e.to_string()).collect();
    assert_eq!(imgs, vec!["v1"]);
    let coh = s.kn_cohomology().unwrap();
    assert_eq!(coh.text, "Λ(Q0)");
    assert_eq!(coh.generators, vec![("Q0".to_string(), -1)]);
    let h = s.homology().unwrap();
    let a0 = h.algebra().generator(0).unwrap();
    assert_eq!(a0.mul(&a0).unwrap(), h.algebra().scalar(&s.ring().gen("v1").unwrap()).unwrap());
}

#[test]
fn window_must_reach_the_top_square() {
    assert!(matches!(build_scenario(2, 3, 15, 1), Err(Error::WindowTooSmall(_))));
    assert!(matches!(build_scenario(2, 3, 16, 0), Err(Error::WindowTooSmall(_))));
    assert!(build_scenario(2, 3, 16, 1).is_ok());
}
