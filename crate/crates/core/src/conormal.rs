//! Quotients by regular sequences, their conormal modules `I/I²[1]`, and
//! the characteristic bilinear forms built from product obstructions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::koszul::{check_regular_sequence, RegularityReport};
use crate::linalg::{solve, Vector};
use crate::quotient::{check_generators, QuotientRing};
use crate::ring::{same_ring, GradedRing, Monomial, RingElement, RingHandle, Terms};

/// A product on `R/x` recorded by its commutativity obstruction, an element
/// of `R_*` of degree `2|x| + 2` read modulo `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductToken {
    pub obstruction: RingElement,
    pub commutative: bool,
}

impl ProductToken {
    /// Token whose flag is derived from the obstruction.
    pub fn new(x: &RingElement, obstruction: RingElement) -> Result<Self> {
        let commutative = !nonzero_mod(&obstruction, x)?;
        let t = ProductToken { obstruction, commutative };
        t.validate(x, 0)?;
        Ok(t)
    }

    pub fn commutative(ring: &Arc<GradedRing>) -> Self {
        ProductToken { obstruction: ring.zero(), commutative: true }
    }

    /// `index` is only used for error reporting.
    pub fn validate(&self, x: &RingElement, index: usize) -> Result<()> {
        if !same_ring(x.ring(), self.obstruction.ring()) {
            return Err(Error::MixedRings);
        }
        let xd = x.degree()?.unwrap_or(0);
        if let Some(d) = self.obstruction.degree()? {
            if d != 2 * xd + 2 {
                return Err(Error::DegreeMismatch(format!(
                    "obstruction {} has degree {d}, expected {}",
                    self.obstruction,
                    2 * xd + 2
                )));
            }
        }
        if self.commutative == nonzero_mod(&self.obstruction, x)? {
            return Err(Error::InconsistentToken { index });
        }
        Ok(())
    }
}

fn nonzero_mod(c: &RingElement, x: &RingElement) -> Result<bool> {
    if c.is_zero() {
        return Ok(false);
    }
    let q = QuotientRing::new(c.ring(), vec![x.clone()])?;
    Ok(!q.contains(c)?)
}

/// `F_* = R_*/(x_1, ..., x_n)` together with one product token per `x_i`.
#[derive(Debug)]
pub struct QuotientRingSpec {
    ring: Arc<GradedRing>,
    sequence: Vec<RingElement>,
    labels: Vec<String>,
    products: Vec<ProductToken>,
    quotient: Arc<QuotientRing>,
    regularity: Option<RegularityReport>,
}

impl QuotientRingSpec {
    /// Builds the quotient and checks regularity up to the ring window.
    /// A non-regular sequence is accepted and recorded; operations that need
    /// regularity refuse it later.
    pub fn new(ring: &Arc<GradedRing>, sequence: Vec<RingElement>, products: Vec<ProductToken>) -> Result<Arc<Self>> {
        let labels = (0..sequence.len()).map(|i| format!("a{i}")).collect();
        Self::with_labels(ring, sequence, products, labels)
    }

    /// All products commutative.
    pub fn commutative(ring: &Arc<GradedRing>, sequence: Vec<RingElement>) -> Result<Arc<Self>> {
        let products = sequence.iter().map(|_| ProductToken::commutative(ring)).collect();
        Self::new(ring, sequence, products)
    }

    pub fn with_labels(
        ring: &Arc<GradedRing>,
        sequence: Vec<RingElement>,
        products: Vec<ProductToken>,
        labels: Vec<String>,
    ) -> Result<Arc<Self>> {
        for x in &sequence {
            if !same_ring(ring, x.ring()) {
                return Err(Error::MixedRings);
            }
            if x.is_zero() {
                return Err(Error::InvalidRing("sequence elements must be nonzero".into()));
            }
        }
        check_generators(&sequence)?;
        if products.len() != sequence.len() || labels.len() != sequence.len() {
            return Err(Error::InvalidRing("need one product token and one label per sequence element".into()));
        }
        for (i, (x, t)) in sequence.iter().zip(&products).enumerate() {
            t.validate(x, i)?;
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) || ring.generator_index(l).is_some() {
                return Err(Error::InvalidRing(format!("label `{l}` is repeated or clashes with a ring generator")));
            }
        }
        let quotient = QuotientRing::new(ring, sequence.clone())?;
        if quotient.is_trivial() {
            return Err(Error::TrivialQuotient);
        }
        let regularity = if sequence.is_empty() {
            None
        } else {
            Some(check_regular_sequence(ring, &sequence, ring.window().degree)?)
        };
        Ok(Arc::new(QuotientRingSpec { ring: ring.clone(), sequence, labels, products, quotient, regularity }))
    }

    /// Same ring and sequence with different product tokens.
    pub fn with_products(&self, products: Vec<ProductToken>) -> Result<Arc<Self>> {
        Self::with_labels(&self.ring, self.sequence.clone(), products, self.labels.clone())
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn sequence(&self) -> &[RingElement] {
        &self.sequence
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn products(&self) -> &[ProductToken] {
        &self.products
    }

    pub fn quotient(&self) -> &Arc<QuotientRing> {
        &self.quotient
    }

    pub fn rank(&self) -> usize {
        self.sequence.len()
    }

    pub fn regularity(&self) -> Option<&RegularityReport> {
        self.regularity.as_ref()
    }

    pub fn is_regular(&self) -> bool {
        self.regularity.as_ref().is_none_or(RegularityReport::is_regular)
    }

    pub fn sequence_degrees(&self) -> Vec<i64> {
        self.sequence.iter().map(|x| x.degree().ok().flatten().unwrap_or(0)).collect()
    }

    /// Degrees `|x_i| + 1` of the conormal basis.
    pub fn basis_degrees(&self) -> Vec<i64> {
        self.sequence_degrees().iter().map(|d| d + 1).collect()
    }

    pub fn is_commutative(&self) -> bool {
        self.products.iter().all(|t| t.commutative)
    }

    /// Coefficients `r_i` in `F_*` with `x ≡ sum_i r_i x_i mod I²`. They are
    /// unique when the sequence is regular.
    pub fn conormal_coordinates(&self, x: &RingElement) -> Result<Vec<RingElement>> {
        if !same_ring(&self.ring, x.ring()) {
            return Err(Error::MixedRings);
        }
        if !self.quotient.contains(x)? {
            return Err(Error::NotInIdeal);
        }
        let degs = self.sequence_degrees();
        let mut coeffs: Vec<Terms> = vec![Terms::new(); self.rank()];
        let dom = self.ring.domain();
        for (d, comp) in x.components() {
            let piece = self.ring.piece(d).expect("component inside the window");
            let mut gens: Vec<Vector> = Vec::new();
            let mut tags: Vec<Option<(usize, Monomial)>> = Vec::new();
            for (i, xi) in self.sequence.iter().enumerate() {
                let Some(src) = self.ring.piece(d - degs[i]) else { continue };
                for m in src.monomials() {
                    let prod: Terms = xi.terms().iter().map(|(xm, c)| (xm.mul(m), c.clone())).collect();
                    if let Some(v) = piece.vector(&prod) {
                        gens.push(v);
                        tags.push(Some((i, m.clone())));
                    }
                }
            }
            for r in self.ring.zero_lattice(d).expect("piece").rows() {
                gens.push(r.clone());
                tags.push(None);
            }
            let v = piece.vector(comp.terms()).expect("inside piece");
            let sol = solve(&dom, piece.len(), &gens, &v).ok_or_else(|| {
                Error::WindowOverflow(format!("cannot express the degree-{d} component inside the window"))
            })?;
            for (c, tag) in sol.into_iter().zip(tags) {
                if let (Some((i, m)), false) = (tag, num_traits::Zero::is_zero(&c)) {
                    let e = coeffs[i].entry(m).or_insert_with(num_traits::Zero::zero);
                    *e = &*e + c;
                }
            }
        }
        coeffs.into_iter().map(|t| self.quotient.reduce(&self.ring.from_terms(t)?)).collect()
    }
}

impl fmt::Display for QuotientRingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.quotient)
    }
}

/// `I/I²[1]`, free over `F_*` on the classes of the sequence.
#[derive(Debug, Clone)]
pub struct ConormalModule {
    spec: Arc<QuotientRingSpec>,
}

impl ConormalModule {
    pub fn new(spec: &Arc<QuotientRingSpec>) -> Result<Self> {
        if !spec.is_regular() {
            return Err(Error::NotRegular);
        }
        Ok(ConormalModule { spec: spec.clone() })
    }

    /// The module on the same basis without the regularity guarantee; only
    /// the lift to the Clifford algebra is meaningful then.
    pub fn unchecked(spec: &Arc<QuotientRingSpec>) -> Self {
        ConormalModule { spec: spec.clone() }
    }

    pub fn spec(&self) -> &Arc<QuotientRingSpec> {
        &self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.spec.basis_degrees()
    }

    pub fn labels(&self) -> &[String] {
        self.spec.labels()
    }

    pub fn coefficients(&self) -> &Arc<QuotientRing> {
        self.spec.quotient()
    }

    pub fn coordinates(&self, x: &RingElement) -> Result<Vec<RingElement>> {
        self.spec.conormal_coordinates(x)
    }

    fn square(&self) -> Vec<RingElement> {
        let s = self.spec.sequence();
        let mut out = Vec::new();
        for i in 0..s.len() {
            for j in i..s.len() {
                if let Ok(p) = s[i].mul(&s[j]) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Canonical representative of `x` modulo `I²`.
    pub fn residue(&self, x: &RingElement) -> Result<RingElement> {
        if !self.spec.quotient().contains(x)? {
            return Err(Error::NotInIdeal);
        }
        QuotientRing::new(self.spec.ring(), self.square())?.reduce(x)
    }

    pub fn in_square(&self, x: &RingElement) -> Result<bool> {
        Ok(self.residue(x)?.is_zero())
    }
}

/// A bilinear form on the conormal basis with entries in a coefficient ring.
#[derive(Debug, Clone)]
pub struct BilinearFormData {
    coefficients: Arc<QuotientRing>,
    degrees: Vec<i64>,
    entries: Vec<Vec<RingElement>>,
}

impl PartialEq for BilinearFormData {
    fn eq(&self, other: &Self) -> bool {
        self.coefficients.same_as(&other.coefficients) && self.degrees == other.degrees && self.entries == other.entries
    }
}

impl BilinearFormData {
    /// Entries are reduced in the coefficient ring and must have degree
    /// `deg_i + deg_j` (or vanish).
    pub fn new(coefficients: &Arc<QuotientRing>, degrees: Vec<i64>, entries: Vec<Vec<RingElement>>) -> Result<Self> {
        let n = degrees.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::DegreeMismatch(format!("form must be {n}×{n}")));
        }
        let mut reduced = Vec::with_capacity(n);
        for (i, row) in entries.iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (j, e) in row.iter().enumerate() {
                let e = coefficients.reduce(e)?;
                if let Some(d) = e.degree()? {
                    if d != degrees[i] + degrees[j] {
                        return Err(Error::DegreeMismatch(format!(
                            "entry ({i}, {j}) = {e} has degree {d}, expected {}",
                            degrees[i] + degrees[j]
                        )));
                    }
                }
                out.push(e);
            }
            reduced.push(out);
        }
        Ok(BilinearFormData { coefficients: coefficients.clone(), degrees, entries: reduced })
    }

    pub fn zero(coefficients: &Arc<QuotientRing>, degrees: Vec<i64>) -> Self {
        let n = degrees.len();
        let z = coefficients.zero();
        BilinearFormData { coefficients: coefficients.clone(), degrees, entries: vec![vec![z; n]; n] }
    }

    pub fn diagonal(coefficients: &Arc<QuotientRing>, degrees: Vec<i64>, q: Vec<RingElement>) -> Result<Self> {
        let n = degrees.len();
        let z = coefficients.zero();
        let entries = (0..n).map(|i| (0..n).map(|j| if i == j { q[i].clone() } else { z.clone() }).collect()).collect();
        Self::new(coefficients, degrees, entries)
    }

    pub fn coefficients(&self) -> &Arc<QuotientRing> {
        &self.coefficients
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<RingElement>] {
        &self.entries
    }

    /// `q_i = b_ii`.
    pub fn q(&self, i: usize) -> &RingElement {
        &self.entries[i][i]
    }

    /// `s_ij = b_ij + b_ji`.
    pub fn polarized(&self, i: usize, j: usize) -> RingElement {
        self.coefficients.add(&self.entries[i][j], &self.entries[j][i]).expect("entries share a ring")
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(RingElement::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rank()).all(|i| (0..self.rank()).all(|j| i == j || self.entries[i][j].is_zero()))
    }

    /// Simultaneous permutation of rows and columns: entry `(i, j)` of the
    /// result is entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let entries = perm.iter().map(|&i| perm.iter().map(|&j| self.entries[i][j].clone()).collect()).collect();
        BilinearFormData {
            coefficients: self.coefficients.clone(),
            degrees: perm.iter().map(|&i| self.degrees[i]).collect(),
            entries,
        }
    }
}

impl fmt::Display for BilinearFormData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// The canonical ring map `R_*/I -> R_*/K` between quotients of one ring,
/// defined when `K` kills `I`.
#[derive(Debug, Clone)]
pub struct RingMap {
    source: Arc<QuotientRing>,
    target: Arc<QuotientRing>,
}

impl RingMap {
    pub fn new(source: &Arc<QuotientRing>, target: &Arc<QuotientRing>) -> Result<Self> {
        if !same_ring(source.ambient(), target.ambient()) {
            return Err(Error::MixedRings);
        }
        if !target.kills(source.ideal())? {
            return Err(Error::NotWellDefined(format!("{target} does not kill the ideal of {source}")));
        }
        Ok(RingMap { source: source.clone(), target: target.clone() })
    }

    pub fn identity(ring: &Arc<QuotientRing>) -> Self {
        RingMap { source: ring.clone(), target: ring.clone() }
    }

    pub fn source(&self) -> &Arc<QuotientRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<QuotientRing> {
        &self.target
    }

    pub fn apply(&self, e: &RingElement) -> Result<RingElement> {
        self.target.reduce(e)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RingMap) -> Result<RingMap> {
        if !self.target.same_as(&other.source) {
            return Err(Error::NotCompatible("maps are not composable".into()));
        }
        Ok(RingMap { source: self.source.clone(), target: other.target.clone() })
    }

    /// Checks unitality and multiplicativity on the generators of the ring,
    /// which determine the map.
    pub fn verify(&self) -> Result<bool> {
        let r = self.source.ambient();
        if !self.apply(&r.one())?.is_one() && !self.target.is_trivial() {
            return Ok(false);
        }
        for g in self.source.ideal() {
            if !self.apply(g)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The diagonal form with `b_ii = -c(μ_i)` reduced modulo `I`.
pub fn characteristic_form_diagonal(spec: &QuotientRingSpec) -> Result<BilinearFormData> {
    for (i, (x, t)) in spec.sequence().iter().zip(spec.products()).enumerate() {
        t.validate(x, i)?;
    }
    let q: Vec<RingElement> = spec.products().iter().map(|t| t.obstruction.neg()).collect();
    BilinearFormData::diagonal(spec.quotient(), spec.basis_degrees(), q)
}

/// `k_* ⊗ b` along `π: F_* -> k_*`.
pub fn base_change_form(b: &BilinearFormData, pi: &RingMap) -> Result<BilinearFormData> {
    if !b.coefficients().same_as(pi.source()) || !pi.verify()? {
        return Err(Error::NotWellDefined("form coefficients differ from the source of the map".into()));
    }
    let entries = b
        .entries()
        .iter()
        .map(|r| r.iter().map(|e| pi.apply(e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    BilinearFormData::new(pi.target(), b.degrees().to_vec(), entries)
}

#[derive(Debug, Clone)]
pub struct OppositeForms {
    /// Form of the opposite ring, from the supplied opposite obstructions.
    pub ring_form: BilinearFormData,
    /// Form of the pair `(F^op, F)`, which vanishes.
    pub mixed_form: BilinearFormData,
}

pub fn opposite_form(spec: &QuotientRingSpec, opposite_obstructions: &[RingElement]) -> Result<OppositeForms> {
    if opposite_obstructions.len() != spec.rank() {
        return Err(Error::DegreeMismatch(format!(
            "expected {} opposite obstructions, got {}",
            spec.rank(),
            opposite_obstructions.len()
        )));
    }
    let tokens = spec
        .sequence()
        .iter()
        .zip(opposite_obstructions)
        .map(|(x, c)| ProductToken::new(x, c.clone()))
        .collect::<Result<Vec<_>>>()?;
    let opp = spec.with_products(tokens)?;
    Ok(OppositeForms {
        ring_form: characteristic_form_diagonal(&opp)?,
        mixed_form: BilinearFormData::zero(spec.quotient(), spec.basis_degrees()),
    })
}
