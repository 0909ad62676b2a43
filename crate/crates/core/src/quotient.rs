//! Quotients `R_*/I` realized through degreewise normal forms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Lattice, ModuleSummary};
use crate::ring::{same_ring, GradedRing, RingElement, RingHandle, Terms};

/// The lattice of `I` inside the degree-`d` piece of the free module on
/// monomials, including the ring's own zero relations.
pub fn ideal_lattice(ring: &GradedRing, gens: &[RingElement], d: i64) -> Option<Lattice> {
    let piece = ring.piece(d)?;
    let zero = ring.zero_lattice(d)?;
    let terms: Vec<Terms> = gens.iter().map(|g| g.terms().clone()).collect();
    let mut rows: Vec<_> = zero.rows().to_vec();
    rows.extend(ring.multiples(&terms, piece));
    Some(Lattice::span(&ring.domain(), piece.len(), &rows))
}

pub(crate) fn check_generators(gens: &[RingElement]) -> Result<()> {
    for g in gens {
        match g.degree()? {
            Some(d) if d % 2 != 0 => return Err(Error::OddDegree(d)),
            _ => {}
        }
    }
    Ok(())
}

/// Canonical coset representative of `e` modulo the ideal generated by
/// `ideal`, for homogeneous `e` of degree at most `d_max`.
pub fn normal_form(e: &RingElement, ideal: &[RingElement], d_max: i64) -> Result<RingElement> {
    let ring = e.ring();
    if d_max > ring.window().degree {
        return Err(Error::WindowOverflow(format!("d_max = {d_max} exceeds D = {}", ring.window().degree)));
    }
    for g in ideal {
        if !same_ring(ring, g.ring()) {
            return Err(Error::MixedRings);
        }
    }
    check_generators(ideal)?;
    let Some(d) = e.degree()? else { return Ok(e.clone()) };
    if d > d_max {
        return Err(Error::WindowOverflow(format!("element degree {d} exceeds {d_max}")));
    }
    let piece = ring.piece(d).expect("nonzero element has a piece");
    let lat = ideal_lattice(ring, ideal, d).expect("piece exists");
    let v = lat.reduce(&piece.vector(e.terms()).expect("element inside its piece"));
    ring.from_terms(piece.terms(&v))
}

/// A coefficient ring `R_*/I`, with the ideal's degreewise lattices computed
/// once at construction.
pub struct QuotientRing {
    ambient: Arc<GradedRing>,
    ideal: Vec<RingElement>,
    lattices: BTreeMap<i64, Lattice>,
}

impl fmt::Debug for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuotientRing({self})")
    }
}

impl fmt::Display for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .ambient
            .generators()
            .iter()
            .map(|g| if g.invertible { format!("{}^±1", g.name) } else { g.name.clone() })
            .collect();
        write!(f, "{}", self.ambient.base())?;
        if !gens.is_empty() {
            write!(f, "[{}]", gens.join(", "))?;
        }
        if !self.ideal.is_empty() {
            let ideal: Vec<String> = self.ideal.iter().map(|g| g.to_string()).collect();
            write!(f, "/({})", ideal.join(", "))?;
        }
        Ok(())
    }
}

impl QuotientRing {
    pub fn new(ambient: &Arc<GradedRing>, ideal: Vec<RingElement>) -> Result<Arc<QuotientRing>> {
        for g in &ideal {
            if !same_ring(ambient, g.ring()) {
                return Err(Error::MixedRings);
            }
        }
        check_generators(&ideal)?;
        let ideal: Vec<RingElement> = ideal.into_iter().filter(|g| !g.is_zero()).collect();
        let lattices =
            ambient.degrees().map(|d| (d, ideal_lattice(ambient, &ideal, d).expect("degree has a piece"))).collect();
        Ok(Arc::new(QuotientRing { ambient: ambient.clone(), ideal, lattices }))
    }

    /// `R_*` itself, viewed as a quotient by the zero ideal.
    pub fn full(ambient: &Arc<GradedRing>) -> Arc<QuotientRing> {
        Self::new(ambient, Vec::new()).expect("zero ideal is valid")
    }

    pub fn ambient(&self) -> &Arc<GradedRing> {
        &self.ambient
    }

    pub fn ideal(&self) -> &[RingElement] {
        &self.ideal
    }

    pub fn lattice(&self, d: i64) -> Option<&Lattice> {
        self.lattices.get(&d)
    }

    /// Normal form of an arbitrary (possibly inhomogeneous) element.
    pub fn reduce(&self, e: &RingElement) -> Result<RingElement> {
        if !same_ring(&self.ambient, e.ring()) {
            return Err(Error::MixedRings);
        }
        let mut terms = Terms::new();
        for (d, c) in e.components() {
            let piece = self.ambient.piece(d).expect("component inside window");
            let v = self.lattices[&d].reduce(&piece.vector(c.terms()).expect("inside piece"));
            terms.extend(piece.terms(&v));
        }
        self.ambient.from_terms(terms)
    }

    pub fn contains(&self, e: &RingElement) -> Result<bool> {
        Ok(self.reduce(e)?.is_zero())
    }

    pub fn zero(&self) -> RingElement {
        self.ambient.zero()
    }

    pub fn one(&self) -> RingElement {
        self.reduce(&self.ambient.one()).expect("unit is in the window")
    }

    pub fn constant(&self, c: &crate::scalar::Scalar) -> Result<RingElement> {
        self.reduce(&self.ambient.constant(c)?)
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.reduce(&a.add(b)?)
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.reduce(&a.sub(b)?)
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.reduce(&a.mul(b)?)
    }

    pub fn neg(&self, a: &RingElement) -> Result<RingElement> {
        self.reduce(&a.neg())
    }

    pub fn parse(&self, text: &str) -> Result<RingElement> {
        self.reduce(&self.ambient.parse(text)?)
    }

    /// Whether the quotient vanishes in degree 0, i.e. `1` lies in the ideal.
    pub fn is_trivial(&self) -> bool {
        self.one().is_zero()
    }

    /// Structure of the degree-`d` piece as a base-ring module.
    pub fn piece_summary(&self, d: i64) -> ModuleSummary {
        match (self.ambient.piece(d), self.lattice(d)) {
            (Some(p), Some(l)) => {
                let full = Lattice::span(&self.ambient.domain(), p.len(), &identity(p.len()));
                full.quotient_by(l)
            }
            _ => ModuleSummary::default(),
        }
    }

    /// Same ambient ring and the same ideal in every degree of the window.
    pub fn same_as(&self, other: &QuotientRing) -> bool {
        same_ring(&self.ambient, &other.ambient) && self.lattices == other.lattices
    }

    /// Whether every generator of `other`'s ideal dies here, i.e. the
    /// canonical projection `R/other -> R/self` is defined.
    pub fn kills(&self, ideal: &[RingElement]) -> Result<bool> {
        for g in ideal {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub(crate) fn identity(n: usize) -> Vec<Vec<crate::scalar::Scalar>> {
    use num_traits::{One, Zero};
    (0..n)
        .map(|i| {
            (0..n).map(|j| if i == j { crate::scalar::Scalar::one() } else { crate::scalar::Scalar::zero() }).collect()
        })
        .collect()
}
