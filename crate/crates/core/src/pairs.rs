//! Admissible pairs `(F, k, π)`, their morphisms, opposite rings, and
//! naturality checks.

use std::sync::Arc;

use crate::clifford::{induced_algebra_map, AlgebraMap, HomologyAlgebra};
use crate::conormal::{
    base_change_form, characteristic_form_diagonal, BilinearFormData, ProductToken, QuotientRingSpec, RingMap,
};
use crate::error::{Error, Result};
use crate::ring::{same_ring, RingElement, RingHandle};

#[derive(Debug, Clone)]
pub struct AdmissiblePair {
    f: Arc<QuotientRingSpec>,
    k: Arc<QuotientRingSpec>,
    pi: RingMap,
    multiplicative: bool,
}

/// Validates `π: F_* -> k_*` (it must kill `I`). A pair declared
/// multiplicative is refuted when `k ⊗ b_F` and `π*(b_k)` differ.
pub fn make_pair(f: &Arc<QuotientRingSpec>, k: &Arc<QuotientRingSpec>, multiplicative: bool) -> Result<AdmissiblePair> {
    if !same_ring(f.ring(), k.ring()) {
        return Err(Error::MixedRings);
    }
    let pi = match RingMap::new(f.quotient(), k.quotient()) {
        Ok(pi) => pi,
        Err(Error::NotWellDefined(m)) => return Err(Error::NotUnital(m)),
        Err(e) => return Err(e),
    };
    let pair = AdmissiblePair { f: f.clone(), k: k.clone(), pi, multiplicative };
    if multiplicative {
        let pushed = pair.pushed_form()?;
        let pulled = pair.pulled_back_form()?;
        if pushed != pulled {
            return Err(Error::NotMultiplicative(format!("k ⊗ b_F = {pushed} but π*(b_k) = {pulled}")));
        }
    }
    Ok(pair)
}

impl AdmissiblePair {
    /// `(F, F, id)`.
    pub fn identity(f: &Arc<QuotientRingSpec>) -> Result<Self> {
        make_pair(f, f, true)
    }

    pub fn f(&self) -> &Arc<QuotientRingSpec> {
        &self.f
    }

    pub fn k(&self) -> &Arc<QuotientRingSpec> {
        &self.k
    }

    pub fn pi(&self) -> &RingMap {
        &self.pi
    }

    pub fn is_multiplicative(&self) -> bool {
        self.multiplicative
    }

    /// `k_* ⊗ b_F`.
    pub fn pushed_form(&self) -> Result<BilinearFormData> {
        base_change_form(&characteristic_form_diagonal(&self.f)?, &self.pi)
    }

    /// `b_k` pulled back along the conormal map `I/I² -> K/K²`.
    pub fn pulled_back_form(&self) -> Result<BilinearFormData> {
        let bk = characteristic_form_diagonal(&self.k)?;
        let kq = self.k.quotient();
        let c: Vec<Vec<RingElement>> =
            self.f.sequence().iter().map(|x| self.k.conormal_coordinates(x)).collect::<Result<_>>()?;
        let n = self.f.rank();
        let m = self.k.rank();
        let mut entries = vec![vec![kq.zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = kq.zero();
                for l in 0..m {
                    for t in 0..m {
                        let term = kq.mul(&kq.mul(&c[i][l], bk.entry(l, t))?, &c[j][t])?;
                        acc = kq.add(&acc, &term)?;
                    }
                }
                entries[i][j] = acc;
            }
        }
        BilinearFormData::new(kq, self.f.basis_degrees(), entries)
    }

    pub fn homology(&self) -> Result<HomologyAlgebra> {
        HomologyAlgebra::new(&self.f, &self.pi)
    }
}

/// `F^op`: the same ring and sequence carrying the opposite products.
pub fn opposite(f: &QuotientRingSpec, opposite_obstructions: &[RingElement]) -> Result<Arc<QuotientRingSpec>> {
    if opposite_obstructions.len() != f.rank() {
        return Err(Error::DegreeMismatch(format!(
            "expected {} opposite obstructions, got {}",
            f.rank(),
            opposite_obstructions.len()
        )));
    }
    let tokens = f
        .sequence()
        .iter()
        .zip(opposite_obstructions)
        .map(|(x, c)| ProductToken::new(x, c.clone()))
        .collect::<Result<Vec<_>>>()?;
    f.with_products(tokens)
}

/// Homology of the pair `(F^op, F)`, whose form vanishes: an exterior algebra.
pub fn mixed_pair_homology(f: &Arc<QuotientRingSpec>) -> Result<HomologyAlgebra> {
    let id = RingMap::identity(f.quotient());
    HomologyAlgebra::with_form(f, &id, BilinearFormData::zero(f.quotient(), f.basis_degrees()))
}

/// A map of pairs `(F, k, π) -> (G, l, π')` given by the canonical
/// projections `f: F_* -> G_*` and `g: k_* -> l_*`.
#[derive(Debug, Clone)]
pub struct PairMorphism {
    source: AdmissiblePair,
    target: AdmissiblePair,
    f: RingMap,
    g: RingMap,
}

impl PairMorphism {
    pub fn new(source: &AdmissiblePair, target: &AdmissiblePair) -> Result<Self> {
        let f = RingMap::new(source.f.quotient(), target.f.quotient())?;
        let g = RingMap::new(source.k.quotient(), target.k.quotient())?;
        let ring = source.f.ring();
        let mut probes = vec![ring.one()];
        probes.extend((0..ring.ngens()).map(|i| ring.gen_at(i)));
        for x in &probes {
            if target.pi.apply(&f.apply(x)?)? != g.apply(&source.pi.apply(x)?)? {
                return Err(Error::NotWellDefined("π'∘f and g∘π differ".into()));
            }
        }
        Ok(PairMorphism { source: source.clone(), target: target.clone(), f, g })
    }

    pub fn identity(pair: &AdmissiblePair) -> Result<Self> {
        Self::new(pair, pair)
    }

    pub fn source(&self) -> &AdmissiblePair {
        &self.source
    }

    pub fn target(&self) -> &AdmissiblePair {
        &self.target
    }

    pub fn f(&self) -> &RingMap {
        &self.f
    }

    pub fn g(&self) -> &RingMap {
        &self.g
    }

    pub fn induced_map(&self) -> Result<AlgebraMap> {
        induced_algebra_map(&self.source.homology()?, &self.target.homology()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalityReport {
    /// `φ_G ∘ (conormal map) = (induced map) ∘ φ_F` on sampled elements of `I`.
    pub phi_square: bool,
    /// Base change along `g ∘ π` equals base change along `π`, then `g`.
    pub form_functorial: bool,
    pub multiplicative: bool,
    /// Images of the generators `a_i`, rendered.
    pub images: Vec<String>,
    pub failures: Vec<String>,
}

impl NaturalityReport {
    pub fn passes(&self) -> bool {
        self.phi_square && self.form_functorial && self.multiplicative
    }
}

/// Elements of `I` used to probe the `φ` square: the `x_i`, their products
/// with ring generators, and pairwise sums.
fn probes(spec: &QuotientRingSpec) -> Vec<RingElement> {
    let ring = spec.ring();
    let xs = spec.sequence();
    let mut out: Vec<RingElement> = xs.to_vec();
    for x in xs {
        for i in 0..ring.ngens() {
            if let Ok(p) = x.mul(&ring.gen_at(i)) {
                out.push(p);
            }
        }
    }
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if let Ok(s) = xs[i].add(&xs[j]) {
                out.push(s);
            }
        }
    }
    out
}

pub fn naturality_suite(m: &PairMorphism) -> Result<NaturalityReport> {
    let hf = m.source.homology()?;
    let hg = m.target.homology()?;
    let mut failures = Vec::new();
    let map = match induced_algebra_map(&hf, &hg) {
        Ok(map) => map,
        Err(e) => {
            return Ok(NaturalityReport {
                phi_square: false,
                form_functorial: false,
                multiplicative: false,
                images: Vec::new(),
                failures: vec![format!("induced map: {e}")],
            })
        }
    };
    let mut phi_square = true;
    for x in probes(m.source.f()) {
        let lhs = hg.phi(&x)?;
        let rhs = map.apply(&hf.phi(&x)?)?;
        if lhs != rhs {
            phi_square = false;
            failures.push(format!("φ square fails on {x}: {lhs} ≠ {rhs}"));
        }
    }
    let bf = characteristic_form_diagonal(m.source.f())?;
    let two_step = base_change_form(&base_change_form(&bf, m.source.pi())?, &m.g)?;
    let one_step = base_change_form(&bf, &m.source.pi().then(&m.g)?)?;
    let form_functorial = two_step == one_step;
    if !form_functorial {
        failures.push(format!("base change is not functorial: {two_step} ≠ {one_step}"));
    }
    let multiplicative = map.is_multiplicative_on_basis()?;
    if !multiplicative {
        failures.push("induced map is not multiplicative on the basis".into());
    }
    let images = map.images().iter().map(|e| e.to_string()).collect();
    Ok(NaturalityReport { phi_square, form_functorial, multiplicative, images, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::CliffordHandle;
    use crate::ring::{Generator, GradedRing, Window};
    use crate::scalar::BaseRing;

    fn integers() -> Arc<GradedRing> {
        GradedRing::new(BaseRing::Integers, vec![], Window::new(0, 0)).unwrap()
    }

    fn mod_power(r: &Arc<GradedRing>, n: i64, label: &str) -> Arc<QuotientRingSpec> {
        QuotientRingSpec::with_labels(r, vec![r.int(n)], vec![ProductToken::commutative(r)], vec![label.into()])
            .unwrap()
    }

    #[test]
    fn pair_validation() {
        let r = integers();
        let f = mod_power(&r, 81, "a");
        let k = mod_power(&r, 3, "c");
        assert!(make_pair(&f, &k, true).is_ok());
        assert!(AdmissiblePair::identity(&f).unwrap().is_multiplicative());
        let f3 = mod_power(&r, 27, "b");
        assert!(matches!(make_pair(&f3, &f, false), Err(Error::NotUnital(_))));
    }

    #[test]
    fn projection_of_prime_powers_is_natural() {
        let r = integers();
        let f = mod_power(&r, 81, "a");
        let g = mod_power(&r, 27, "b");
        for (kk, nonzero) in [(3, false), (9, true)] {
            let k = mod_power(&r, kk, "c");
            let m = PairMorphism::new(&make_pair(&f, &k, false).unwrap(), &make_pair(&g, &k, false).unwrap()).unwrap();
            let rep = naturality_suite(&m).unwrap();
            assert!(rep.passes(), "{rep:?}");
            assert_eq!(rep.images, vec![if nonzero { "3·b" } else { "0" }]);
        }
    }

    #[test]
    fn k1_opposite_and_mixed_pair() {
        let r =
            GradedRing::new(BaseRing::IntegersLocalized(2), vec![Generator::unit("v1", 2)], Window::new(8, 2)).unwrap();
        let two = r.int(2);
        let v1 = r.gen("v1").unwrap();
        let f =
            QuotientRingSpec::new(&r, vec![two.clone()], vec![ProductToken::new(&two, v1.clone()).unwrap()]).unwrap();
        let fop = opposite(&f, &[v1]).unwrap();
        assert_eq!(characteristic_form_diagonal(&fop).unwrap(), characteristic_form_diagonal(&f).unwrap());
        let h = mixed_pair_homology(&f).unwrap();
        assert_eq!(h.presentation().text, "Λ(a0)");
        let a = h.algebra();
        assert!(a.generator(0).unwrap().augmentation().unwrap().is_zero());
        assert!(a.one().augmentation().unwrap().is_one());
    }

    #[test]
    fn quotient_by_one_element_maps_into_f() {
        let r = GradedRing::new(
            BaseRing::PrimeField(2),
            vec![Generator::new("x", 2), Generator::new("y", 2)],
            Window::new(8, 0),
        )
        .unwrap();
        let x = r.gen("x").unwrap();
        let y = r.gen("y").unwrap();
        let rx =
            QuotientRingSpec::with_labels(&r, vec![x.clone()], vec![ProductToken::commutative(&r)], vec!["ax".into()])
                .unwrap();
        let f = QuotientRingSpec::commutative(&r, vec![x, y]).unwrap();
        let m = PairMorphism::new(&make_pair(&rx, &f, true).unwrap(), &AdmissiblePair::identity(&f).unwrap()).unwrap();
        let rep = naturality_suite(&m).unwrap();
        assert!(rep.passes(), "{rep:?}");
        assert_eq!(rep.images, vec!["a0"]);
    }
}
