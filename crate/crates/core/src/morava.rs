//! Morava K-theory scenarios: `K(n)_* = E(n)_*/I_n` with
//! `E(n)_* = Z_(p)[v_1, ..., v_{n-1}, v_n^{±1}]` (uncompleted) and
//! `I_n = (p, v_1, ..., v_{n-1})`.

use std::sync::Arc;

use crate::clifford::{AlgebraPresentation, HomologyAlgebra};
use crate::conormal::{
    characteristic_form_diagonal, opposite_form, BilinearFormData, OppositeForms, ProductToken, QuotientRingSpec,
};
use crate::derivation::cohomology_presentation;
use crate::error::{Error, Result};
use crate::quotient::QuotientRing;
use crate::ring::{Generator, GradedRing, RingElement, RingHandle, Window};
use crate::scalar::BaseRing;

/// `|v_i| = 2(p^i - 1)`.
pub fn v_degree(p: u64, i: usize) -> i64 {
    2 * ((p as i64).pow(i as u32) - 1)
}

/// Smallest window degree that holds `2(p^n - 1) + 2`.
pub fn minimal_degree(p: u64, n: usize) -> i64 {
    v_degree(p, n) + 2
}

pub fn default_window(p: u64, n: usize) -> Window {
    Window::new(minimal_degree(p, n), 1)
}

#[derive(Debug, Clone)]
pub struct MoravaScenario {
    pub p: u64,
    pub n: usize,
    spec: Arc<QuotientRingSpec>,
    opposite_obstructions: Vec<RingElement>,
}

/// At odd `p` every product is commutative. At `p = 2` the `k`-th token
/// carries the obstruction `v_{k+1}`, whose image in `K(n)_*` is `0` for
/// `k < n - 1` and `v_n` for `k = n - 1`; the opposite products carry the
/// same obstructions.
pub fn build_scenario(p: u64, n: usize, degree: i64, laurent: i64) -> Result<MoravaScenario> {
    BaseRing::PrimeField(p).validate()?;
    if n == 0 {
        return Err(Error::InvalidRing("n must be at least 1".into()));
    }
    if degree < minimal_degree(p, n) || laurent < 1 {
        return Err(Error::WindowTooSmall(format!(
            "need D ≥ {} and L ≥ 1, got D = {degree}, L = {laurent}",
            minimal_degree(p, n)
        )));
    }
    let mut gens: Vec<Generator> = (1..n).map(|i| Generator::new(&format!("v{i}"), v_degree(p, i))).collect();
    gens.push(Generator::unit(&format!("v{n}"), v_degree(p, n)));
    let ring = GradedRing::new(BaseRing::IntegersLocalized(p), gens, Window::new(degree, laurent))?;
    let mut sequence = vec![ring.int(p as i64)];
    sequence.extend((1..n).map(|i| ring.gen_at(i - 1)));
    let obstructions: Vec<RingElement> = (0..n).map(|k| if p == 2 { ring.gen_at(k) } else { ring.zero() }).collect();
    let tokens =
        sequence.iter().zip(&obstructions).map(|(x, c)| ProductToken::new(x, c.clone())).collect::<Result<Vec<_>>>()?;
    let spec = QuotientRingSpec::new(&ring, sequence, tokens)?;
    Ok(MoravaScenario { p, n, spec, opposite_obstructions: obstructions })
}

impl MoravaScenario {
    pub fn with_default_window(p: u64, n: usize) -> Result<Self> {
        let w = default_window(p, n);
        build_scenario(p, n, w.degree, w.laurent)
    }

    pub fn spec(&self) -> &Arc<QuotientRingSpec> {
        &self.spec
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        self.spec.ring()
    }

    /// `K(n)_*`.
    pub fn kn(&self) -> &Arc<QuotientRing> {
        self.spec.quotient()
    }

    pub fn opposite_obstructions(&self) -> &[RingElement] {
        &self.opposite_obstructions
    }

    /// Token obstructions reduced into `K(n)_*`.
    pub fn obstruction_images(&self) -> Result<Vec<RingElement>> {
        self.spec.products().iter().map(|t| self.kn().reduce(&t.obstruction)).collect()
    }

    pub fn homology(&self) -> Result<HomologyAlgebra> {
        HomologyAlgebra::of_ring(&self.spec)
    }

    pub fn kn_homology(&self) -> Result<AlgebraPresentation> {
        Ok(self.homology()?.presentation())
    }

    pub fn kn_cohomology(&self) -> Result<AlgebraPresentation> {
        cohomology_presentation(&self.spec)
    }

    pub fn kn_form(&self) -> Result<BilinearFormData> {
        characteristic_form_diagonal(&self.spec)
    }

    pub fn opposite_forms(&self) -> Result<OppositeForms> {
        opposite_form(&self.spec, &self.opposite_obstructions)
    }
}
