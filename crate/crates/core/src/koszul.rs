//! Homogeneous ideals, Koszul complexes, regular sequences and Tor.
//!
//! Everything is computed one internal degree at a time: a homogeneous piece
//! of `R_*/K` is a finitely generated base-ring module, so kernels,
//! intersections and homology reduce to echelon computations.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{combine, echelon, solve, Domain, Lattice, ModuleSummary, Vector};
use crate::quotient::{check_generators, ideal_lattice, identity, QuotientRing};
use crate::ring::{same_ring, GradedRing, Monomial, RingElement, Terms};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct HomogeneousIdeal {
    ring: Arc<GradedRing>,
    generators: Vec<RingElement>,
}

impl HomogeneousIdeal {
    pub fn new(ring: &Arc<GradedRing>, generators: Vec<RingElement>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptyIdeal);
        }
        for g in &generators {
            if !same_ring(ring, g.ring()) {
                return Err(Error::MixedRings);
            }
            if g.is_zero() {
                return Err(Error::InvalidRing("ideal generators must be nonzero".into()));
            }
        }
        check_generators(&generators)?;
        Ok(HomogeneousIdeal { ring: ring.clone(), generators })
    }

    pub fn principal(g: &RingElement) -> Result<Self> {
        Self::new(g.ring(), vec![g.clone()])
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.generators.iter().map(|g| g.degree().ok().flatten().unwrap_or(0)).collect()
    }

    /// Degree-`d` lattice of the ideal (inside the free piece).
    pub fn lattice(&self, d: i64) -> Option<Lattice> {
        ideal_lattice(&self.ring, &self.generators, d)
    }

    pub fn sum(&self, other: &HomogeneousIdeal) -> HomogeneousIdeal {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        HomogeneousIdeal { ring: self.ring.clone(), generators: gens }
    }

    /// Products that leave the window are dropped, so the result is exact
    /// only inside the window and may have no generators at all.
    pub fn product(&self, other: &HomogeneousIdeal) -> Result<HomogeneousIdeal> {
        let mut gens = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                match a.mul(b) {
                    Ok(p) if !p.is_zero() => gens.push(p),
                    Ok(_) | Err(Error::WindowOverflow(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(HomogeneousIdeal { ring: self.ring.clone(), generators: gens })
    }

    pub fn quotient(&self) -> Result<Arc<QuotientRing>> {
        QuotientRing::new(&self.ring, self.generators.clone())
    }
}

fn degrees_up_to(ring: &GradedRing, max_degree: i64) -> Vec<i64> {
    ring.degrees().filter(|&d| d <= max_degree).collect()
}

fn check_max(ring: &GradedRing, max_degree: i64) -> Result<()> {
    if max_degree > ring.window().degree {
        Err(Error::WindowOverflow(format!("D = {max_degree} exceeds the ring window {}", ring.window().degree)))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    ZeroDivisor,
    QuotientVanishes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegularityOutcome {
    RegularUpTo(i64),
    /// 1-based index of the first element that is a zero divisor (or makes
    /// the quotient vanish), and the degree where this was detected.
    Failure {
        index: usize,
        degree: i64,
        reason: FailureReason,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub verified_up_to: i64,
    pub outcome: RegularityOutcome,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        matches!(self.outcome, RegularityOutcome::RegularUpTo(_))
    }

    pub fn first_failure_index(&self) -> Option<usize> {
        match self.outcome {
            RegularityOutcome::Failure { index, .. } => Some(index),
            _ => None,
        }
    }
}

/// Verifies degreewise up to `max_degree` that each `x_k` is a non-zero-divisor
/// on `R_*/(x_1, ..., x_{k-1})` and that `R_*/(x_1, ..., x_k)` is nonzero.
pub fn check_regular_sequence(
    ring: &Arc<GradedRing>,
    seq: &[RingElement],
    max_degree: i64,
) -> Result<RegularityReport> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    check_max(ring, max_degree)?;
    for x in seq {
        if !same_ring(ring, x.ring()) {
            return Err(Error::MixedRings);
        }
    }
    check_generators(seq)?;
    let fail = |index, degree, reason| RegularityReport {
        verified_up_to: max_degree,
        outcome: RegularityOutcome::Failure { index, degree, reason },
    };
    let dom = ring.domain();
    for k in 0..seq.len() {
        let x = &seq[k];
        let prev = &seq[..k];
        let Some(xd) = x.degree()? else {
            return Ok(fail(k + 1, 0, FailureReason::ZeroDivisor));
        };
        for d in degrees_up_to(ring, max_degree - xd) {
            let src = ring.piece(d).expect("listed degree");
            let Some(tgt) = ring.piece(d + xd) else { continue };
            let j_src = ideal_lattice(ring, prev, d).expect("piece");
            let j_tgt = ideal_lattice(ring, prev, d + xd).expect("piece");
            let mut source: Vec<usize> = Vec::new();
            let mut gens: Vec<Vector> = Vec::new();
            for (i, m) in src.monomials().iter().enumerate() {
                let prod: Terms = x.terms().iter().map(|(xm, c)| (xm.mul(m), c.clone())).collect();
                if let Some(v) = tgt.vector(&prod) {
                    source.push(i);
                    gens.push(v);
                }
            }
            if source.is_empty() {
                continue;
            }
            let ns = gens.len();
            gens.extend(j_tgt.rows().iter().cloned());
            let e = echelon(&dom, tgt.len(), &gens, true);
            for kv in &e.kernel {
                let mut alpha = vec![Scalar::zero(); src.len()];
                for (c, &i) in kv[..ns].iter().zip(&source) {
                    alpha[i] = c.clone();
                }
                if !j_src.contains(&alpha) {
                    return Ok(fail(k + 1, d, FailureReason::ZeroDivisor));
                }
            }
        }
        let upto = &seq[..=k];
        if ideal_lattice(ring, upto, 0).is_some_and(|l| {
            let piece = ring.piece(0).expect("degree 0 piece");
            l.contains(&piece.vector(&one_terms(ring)).expect("unit in piece"))
        }) {
            return Ok(fail(k + 1, 0, FailureReason::QuotientVanishes));
        }
    }
    Ok(RegularityReport { verified_up_to: max_degree, outcome: RegularityOutcome::RegularUpTo(max_degree) })
}

fn one_terms(ring: &GradedRing) -> Terms {
    let mut t = Terms::new();
    t.insert(Monomial::one(ring.ngens()), Scalar::from_integer(1.into()));
    t
}

/// Per-degree structure of a graded module, within the window.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedModuleReport {
    pub verified_up_to: i64,
    pub degrees: BTreeMap<i64, ModuleSummary>,
}

impl GradedModuleReport {
    pub fn is_zero(&self) -> bool {
        self.degrees.values().all(ModuleSummary::is_zero)
    }

    pub fn at(&self, d: i64) -> ModuleSummary {
        self.degrees.get(&d).cloned().unwrap_or_default()
    }

    /// Degrees with a nonzero piece.
    pub fn support(&self) -> Vec<i64> {
        self.degrees.iter().filter(|(_, s)| !s.is_zero()).map(|(&d, _)| d).collect()
    }
}

/// The Koszul complex of a sequence `x_1, ..., x_r` with coefficients in
/// `R_*/K`. Basis elements `e_S` sit in internal degree `sum_{j in S} |x_j|`.
pub struct KoszulComplex {
    ring: Arc<GradedRing>,
    sequence: Vec<RingElement>,
    degrees: Vec<i64>,
    coefficients: Arc<QuotientRing>,
}

struct ChainModule {
    blocks: Vec<(u64, i64, usize)>, // subset, piece degree, offset
    dim: usize,
    zero: Lattice,
}

impl KoszulComplex {
    pub fn new(ideal: &HomogeneousIdeal, coefficients: Option<&HomogeneousIdeal>) -> Result<Self> {
        let coeffs = match coefficients {
            Some(k) => {
                if !same_ring(ideal.ring(), k.ring()) {
                    return Err(Error::MixedRings);
                }
                k.quotient()?
            }
            None => QuotientRing::full(ideal.ring()),
        };
        Ok(KoszulComplex {
            ring: ideal.ring().clone(),
            sequence: ideal.generators().to_vec(),
            degrees: ideal.degrees(),
            coefficients: coeffs,
        })
    }

    pub fn length(&self) -> usize {
        self.sequence.len()
    }

    fn subsets(&self, i: usize) -> Vec<u64> {
        let r = self.sequence.len();
        (0u64..1 << r).filter(|s| s.count_ones() as usize == i).collect()
    }

    fn subset_degree(&self, s: u64) -> i64 {
        (0..self.sequence.len()).filter(|j| s >> j & 1 == 1).map(|j| self.degrees[j]).sum()
    }

    fn chain(&self, i: usize, d: i64) -> ChainModule {
        let mut blocks = Vec::new();
        let mut dim = 0;
        let mut zero_rows: Vec<(usize, Vector)> = Vec::new();
        for s in self.subsets(i) {
            let e = d - self.subset_degree(s);
            if let Some(p) = self.ring.piece(e) {
                blocks.push((s, e, dim));
                for r in self.coefficients.lattice(e).expect("piece has lattice").rows() {
                    zero_rows.push((dim, r.clone()));
                }
                dim += p.len();
            }
        }
        let rows: Vec<Vector> = zero_rows
            .into_iter()
            .map(|(off, r)| {
                let mut v = vec![Scalar::zero(); dim];
                v[off..off + r.len()].clone_from_slice(&r);
                v
            })
            .collect();
        let zero = Lattice::span(&self.ring.domain(), dim, &rows);
        ChainModule { blocks, dim, zero }
    }

    /// Matrix of `d_i` in internal degree `d`: one row per basis vector of
    /// `C_i`, written in the coordinates of `C_{i-1}`.
    fn differential(&self, i: usize, d: i64, src: &ChainModule, tgt: &ChainModule) -> Result<Vec<Vector>> {
        let mut rows = Vec::new();
        for &(s, e, _) in &src.blocks {
            let piece = self.ring.piece(e).expect("block piece");
            for m in piece.monomials() {
                let mut row = vec![Scalar::zero(); tgt.dim];
                let mut pos = 0;
                for j in 0..self.sequence.len() {
                    if s >> j & 1 == 0 {
                        continue;
                    }
                    let sign =
                        if pos % 2 == 0 { Scalar::from_integer(1.into()) } else { Scalar::from_integer((-1).into()) };
                    pos += 1;
                    let t = s & !(1 << j);
                    let Some(&(_, te, off)) = tgt.blocks.iter().find(|b| b.0 == t) else {
                        continue;
                    };
                    let tp = self.ring.piece(te).expect("block piece");
                    for (xm, c) in self.sequence[j].terms() {
                        let mm = xm.mul(m);
                        let idx = tp.position(&mm).ok_or_else(|| {
                            Error::WindowOverflow(format!("Koszul differential d_{i} in degree {d} leaves the window"))
                        })?;
                        row[off + idx] = &row[off + idx] + &sign * c;
                    }
                }
                rows.push(row);
            }
        }
        Ok(rows)
    }

    /// Checks `d_{i-1} ∘ d_i = 0` modulo the coefficient ideal in degree `d`.
    pub fn square_zero(&self, i: usize, d: i64) -> Result<bool> {
        if i < 2 {
            return Ok(true);
        }
        let c0 = self.chain(i, d);
        let c1 = self.chain(i - 1, d);
        let c2 = self.chain(i - 2, d);
        let d1 = self.differential(i, d, &c0, &c1)?;
        let d2 = self.differential(i - 1, d, &c1, &c2)?;
        let dom = self.ring.domain();
        Ok(d1.iter().all(|row| c2.zero.contains(&combine(&dom, c2.dim, row, &d2))))
    }

    /// `H_i` in internal degree `d`.
    pub fn homology(&self, i: usize, d: i64) -> Result<ModuleSummary> {
        if i > self.sequence.len() {
            return Ok(ModuleSummary::default());
        }
        let dom = self.ring.domain();
        let ci = self.chain(i, d);
        if ci.dim == 0 {
            return Ok(ModuleSummary::default());
        }
        let kernel = if i == 0 {
            Lattice::span(&dom, ci.dim, &identity(ci.dim))
        } else {
            let cl = self.chain(i - 1, d);
            let di = self.differential(i, d, &ci, &cl)?;
            let mut gens = di;
            gens.extend(cl.zero.rows().iter().cloned());
            let e = echelon(&dom, cl.dim, &gens, true);
            let mut rows: Vec<Vector> = e.kernel.iter().map(|k| k[..ci.dim].to_vec()).collect();
            rows.extend(ci.zero.rows().iter().cloned());
            Lattice::span(&dom, ci.dim, &rows)
        };
        let mut image_rows: Vec<Vector> = ci.zero.rows().to_vec();
        if i < self.sequence.len() {
            let ch = self.chain(i + 1, d);
            image_rows.extend(self.differential(i + 1, d, &ch, &ci)?);
        }
        let image = Lattice::span(&dom, ci.dim, &image_rows);
        Ok(kernel.quotient_by(&image))
    }
}

/// `Tor_i^{R_*}(R_*/J, R_*/K)` computed as Koszul homology, reported in
/// every internal degree up to `max_degree`. `J` must be generated by a
/// sequence that is regular inside the window.
pub fn tor(
    ring: &Arc<GradedRing>,
    j: &HomogeneousIdeal,
    k: &HomogeneousIdeal,
    i: usize,
    max_degree: i64,
) -> Result<GradedModuleReport> {
    if !same_ring(ring, j.ring()) || !same_ring(ring, k.ring()) {
        return Err(Error::MixedRings);
    }
    let reg = check_regular_sequence(ring, j.generators(), max_degree)?;
    if let RegularityOutcome::Failure { index, reason, .. } = reg.outcome {
        return Err(Error::NotVerifiedRegular { index, reason: format!("{reason:?}") });
    }
    let kc = KoszulComplex::new(j, Some(k))?;
    let mut degrees = BTreeMap::new();
    for d in degrees_up_to(ring, max_degree) {
        degrees.insert(d, kc.homology(i, d)?);
    }
    Ok(GradedModuleReport { verified_up_to: max_degree, degrees })
}

/// Degreewise structure of `(J ∩ K) / (J · K)`.
pub fn intersection_over_product(
    j: &HomogeneousIdeal,
    k: &HomogeneousIdeal,
    max_degree: i64,
) -> Result<GradedModuleReport> {
    let ring = j.ring();
    check_max(ring, max_degree)?;
    let jk = j.product(k)?;
    let mut degrees = BTreeMap::new();
    for d in degrees_up_to(ring, max_degree) {
        let inter = j.lattice(d).expect("piece").intersect(&k.lattice(d).expect("piece"));
        let prod = jk.lattice(d).expect("piece");
        degrees.insert(d, inter.quotient_by(&prod));
    }
    Ok(GradedModuleReport { verified_up_to: max_degree, degrees })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tor1Comparison {
    pub tor1: GradedModuleReport,
    pub intersection_over_product: GradedModuleReport,
}

impl Tor1Comparison {
    pub fn agree(&self) -> bool {
        self.tor1 == self.intersection_over_product
    }
}

pub fn compare_tor1(j: &HomogeneousIdeal, k: &HomogeneousIdeal, max_degree: i64) -> Result<Tor1Comparison> {
    Ok(Tor1Comparison {
        tor1: tor(j.ring(), j, k, 1, max_degree)?,
        intersection_over_product: intersection_over_product(j, k, max_degree)?,
    })
}

/// `Tor_1(R/J, R/K) ≅ (J ∩ K)/(J K)` degreewise up to `max_degree`.
pub fn tor1_equals_intersection_over_product(
    j: &HomogeneousIdeal,
    k: &HomogeneousIdeal,
    max_degree: i64,
) -> Result<bool> {
    Ok(compare_tor1(j, k, max_degree)?.agree())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionII {
    /// 1-based index `k >= 2`.
    pub k: usize,
    pub holds: bool,
    pub first_failure_degree: Option<i64>,
}

/// Checks `(I_1 + ... + I_{k-1}) · I_k = (I_1 + ... + I_{k-1}) ∩ I_k`
/// degreewise for every `k > 1`.
pub fn check_condition_ii(ideals: &[HomogeneousIdeal], max_degree: i64) -> Result<Vec<ConditionII>> {
    if ideals.len() < 2 {
        return Err(Error::InvalidRing("condition (ii) needs at least two ideals".into()));
    }
    let ring = ideals[0].ring();
    check_max(ring, max_degree)?;
    if ideals.iter().any(|i| !same_ring(ring, i.ring())) {
        return Err(Error::MixedRings);
    }
    let mut out = Vec::new();
    let mut acc = ideals[0].clone();
    for (idx, ik) in ideals.iter().enumerate().skip(1) {
        let prod = acc.product(ik)?;
        let mut first = None;
        for d in degrees_up_to(ring, max_degree) {
            let inter = acc.lattice(d).expect("piece").intersect(&ik.lattice(d).expect("piece"));
            if inter != prod.lattice(d).expect("piece") {
                first = Some(d);
                break;
            }
        }
        out.push(ConditionII { k: idx + 1, holds: first.is_none(), first_failure_degree: first });
        acc = acc.sum(ik);
    }
    Ok(out)
}

/// Explicit maps between `I/I²` and `⊕_i I_i/(I·I_i)` (the latter is
/// `R/I ⊗ I_i/I_i²`) in one degree. Vectors are in monomial coordinates;
/// target vectors concatenate one block per summand.
#[derive(Debug, Clone)]
pub struct DegreeDecomposition {
    pub degree: i64,
    pub source: ModuleSummary,
    pub summands: Vec<ModuleSummary>,
    /// Images of the generators of `I_d` under the forward map.
    pub forward: Vec<Vector>,
    /// Images of the generators of each `(I_i)_d` under the backward map.
    pub backward: Vec<Vec<Vector>>,
    pub backward_after_forward_is_identity: bool,
    pub forward_after_backward_is_identity: bool,
    pub forward_well_defined: bool,
    pub backward_well_defined: bool,
}

impl DegreeDecomposition {
    pub fn is_isomorphism(&self) -> bool {
        self.backward_after_forward_is_identity
            && self.forward_after_backward_is_identity
            && self.forward_well_defined
            && self.backward_well_defined
    }
}

#[derive(Debug, Clone)]
pub struct ConormalDecomposition {
    pub verified_up_to: i64,
    pub degrees: Vec<DegreeDecomposition>,
}

impl ConormalDecomposition {
    pub fn mutually_inverse(&self) -> bool {
        self.degrees.iter().all(DegreeDecomposition::is_isomorphism)
    }
}

/// The decomposition `I/I² ≅ ⊕_i R_*/I ⊗ I_i/I_i²` for `I = I_1 + ... + I_k`.
pub fn decompose_conormal(ideals: &[HomogeneousIdeal], max_degree: i64) -> Result<ConormalDecomposition> {
    if ideals.is_empty() {
        return Err(Error::EmptyIdeal);
    }
    let ring = ideals[0].ring().clone();
    check_max(&ring, max_degree)?;
    if ideals.len() > 1 {
        for c in check_condition_ii(ideals, max_degree)? {
            if let Some(degree) = c.first_failure_degree {
                return Err(Error::ConditionIIFails { k: c.k, degree });
            }
        }
    }
    let total = ideals[1..].iter().fold(ideals[0].clone(), |a, b| a.sum(b));
    let square = total.product(&total)?;
    let dom = ring.domain();
    let mut degrees = Vec::new();
    for d in degrees_up_to(&ring, max_degree) {
        let n = ring.piece(d).expect("listed degree").len();
        let k = ideals.len();
        let src = total.lattice(d).expect("piece");
        let src_zero = square.lattice(d).expect("piece");
        let blocks: Vec<Lattice> = ideals.iter().map(|i| i.lattice(d).expect("piece")).collect();
        let block_zero: Vec<Lattice> =
            ideals.iter().map(|i| total.product(i).map(|p| p.lattice(d).expect("piece"))).collect::<Result<_>>()?;
        let tgt_zero = direct_sum(&dom, n, &block_zero);

        // Splitting a vector of I_d into a sum of pieces of the I_i.
        let concat: Vec<Vector> = blocks.iter().flat_map(|b| b.rows().iter().cloned()).collect();
        let split = |v: &Vector| -> Vector {
            let coords = solve(&dom, n, &concat, v).expect("vector lies in the sum of the ideals");
            let mut out = vec![Scalar::zero(); n * k];
            let mut row = 0;
            for (b, block) in blocks.iter().enumerate() {
                let part = combine(&dom, n, &coords[row..row + block.rank()], block.rows());
                out[b * n..(b + 1) * n].clone_from_slice(&part);
                row += block.rank();
            }
            out
        };
        let forward: Vec<Vector> = src.rows().iter().map(&split).collect();
        let backward: Vec<Vec<Vector>> = blocks.iter().map(|b| b.rows().to_vec()).collect();
        let sum_blocks = |v: &Vector| -> Vector {
            let mut out = vec![Scalar::zero(); n];
            for b in 0..k {
                out = combine(
                    &dom,
                    n,
                    &[Scalar::from_integer(1.into()), Scalar::from_integer(1.into())],
                    &[out, v[b * n..(b + 1) * n].to_vec()],
                );
            }
            out
        };
        let sub = |a: &Vector, b: &Vector| -> Vector {
            combine(
                &dom,
                a.len(),
                &[Scalar::from_integer(1.into()), Scalar::from_integer((-1).into())],
                &[a.clone(), b.clone()],
            )
        };

        let bf = src.rows().iter().zip(&forward).all(|(v, f)| src_zero.contains(&sub(&sum_blocks(f), v)));
        let fwd_ok = src_zero.rows().iter().all(|w| tgt_zero.contains(&split(w)));
        let bwd_ok = block_zero.iter().all(|z| z.rows().iter().all(|r| src_zero.contains(r)));
        let mut fb = true;
        for (b, block) in blocks.iter().enumerate() {
            for t in block.rows() {
                let mut embedded = vec![Scalar::zero(); n * k];
                embedded[b * n..(b + 1) * n].clone_from_slice(t);
                if !tgt_zero.contains(&sub(&split(t), &embedded)) {
                    fb = false;
                }
            }
        }
        degrees.push(DegreeDecomposition {
            degree: d,
            source: src.quotient_by(&src_zero),
            summands: blocks.iter().zip(&block_zero).map(|(b, z)| b.quotient_by(z)).collect(),
            forward,
            backward,
            backward_after_forward_is_identity: bf,
            forward_after_backward_is_identity: fb,
            forward_well_defined: fwd_ok,
            backward_well_defined: bwd_ok,
        });
    }
    Ok(ConormalDecomposition { verified_up_to: max_degree, degrees })
}

fn direct_sum(dom: &Domain, n: usize, parts: &[Lattice]) -> Lattice {
    let k = parts.len();
    let mut rows = Vec::new();
    for (b, l) in parts.iter().enumerate() {
        for r in l.rows() {
            let mut v = vec![Scalar::zero(); n * k];
            v[b * n..(b + 1) * n].clone_from_slice(r);
            rows.push(v);
        }
    }
    Lattice::span(dom, n * k, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Generator, RingHandle, Window};
    use crate::scalar::BaseRing;
    use num_bigint::BigInt;

    fn f2xy(d: i64) -> Arc<GradedRing> {
        GradedRing::new(
            BaseRing::PrimeField(2),
            vec![Generator::new("x", 2), Generator::new("y", 2)],
            Window::new(d, 0),
        )
        .unwrap()
    }

    fn ideal(r: &Arc<GradedRing>, gens: &[&str]) -> HomogeneousIdeal {
        HomogeneousIdeal::new(r, gens.iter().map(|g| r.parse(g).unwrap()).collect()).unwrap()
    }

    #[test]
    fn regular_and_non_regular_pairs() {
        let r = f2xy(8);
        let ok = check_regular_sequence(&r, &[r.gen("x").unwrap(), r.gen("y").unwrap()], 8).unwrap();
        assert!(ok.is_regular());
        let bad = check_regular_sequence(&r, &[r.gen("x").unwrap(), r.gen("x").unwrap()], 8).unwrap();
        assert_eq!(bad.first_failure_index(), Some(2));
        assert!(matches!(check_regular_sequence(&r, &[], 8), Err(Error::EmptySequence)));
    }

    #[test]
    fn localized_two_is_regular() {
        let r =
            GradedRing::new(BaseRing::IntegersLocalized(2), vec![Generator::unit("v1", 2)], Window::new(8, 2)).unwrap();
        assert!(check_regular_sequence(&r, &[r.int(2)], 8).unwrap().is_regular());
    }

    #[test]
    fn unit_makes_quotient_vanish() {
        let r = GradedRing::new(BaseRing::IntegersLocalized(2), vec![], Window::new(0, 0)).unwrap();
        let rep = check_regular_sequence(&r, &[r.int(3)], 0).unwrap();
        assert_eq!(
            rep.outcome,
            RegularityOutcome::Failure { index: 1, degree: 0, reason: FailureReason::QuotientVanishes }
        );
    }

    #[test]
    fn tor_examples() {
        let r = f2xy(8);
        let x = ideal(&r, &["x"]);
        let y = ideal(&r, &["y"]);
        assert!(tor(&r, &x, &y, 1, 8).unwrap().is_zero());
        let t = tor(&r, &x, &x, 1, 8).unwrap();
        // (x)/(x^2): spanned by x y^k, one dimension in each degree 2, 4, ..., 8
        for d in [2, 4, 6, 8] {
            assert_eq!(t.at(d), ModuleSummary { free_rank: 1, torsion: vec![] });
        }
        assert!(t.at(0).is_zero());
        let t0 = tor(&r, &x, &x, 0, 8).unwrap();
        let q = x.quotient().unwrap();
        for d in [0, 2, 4, 6, 8] {
            assert_eq!(t0.at(d), q.piece_summary(d));
        }
    }

    #[test]
    fn tor_vanishes_above_length() {
        let r = f2xy(8);
        let j = ideal(&r, &["x", "y"]);
        let k = ideal(&r, &["x^2"]);
        assert!(tor(&r, &j, &k, 3, 8).unwrap().is_zero());
    }

    #[test]
    fn integer_tor_one() {
        let r = GradedRing::new(BaseRing::Integers, vec![], Window::new(0, 0)).unwrap();
        let j = ideal(&r, &["27"]);
        let k = ideal(&r, &["81"]);
        let cmp = compare_tor1(&j, &k, 0).unwrap();
        assert!(cmp.agree());
        assert_eq!(cmp.tor1.at(0).torsion, vec![BigInt::from(27)]);
    }

    #[test]
    fn koszul_square_zero() {
        let r = f2xy(8);
        let kc = KoszulComplex::new(&ideal(&r, &["x", "y", "x + y"]), Some(&ideal(&r, &["x y"]))).unwrap();
        for d in (0..=8).step_by(2) {
            for i in 2..=3 {
                assert!(kc.square_zero(i, d).unwrap());
            }
        }
    }

    #[test]
    fn condition_ii_examples() {
        let r = f2xy(8);
        let c = check_condition_ii(&[ideal(&r, &["x"]), ideal(&r, &["y"])], 8).unwrap();
        assert!(c[0].holds);
        let c = check_condition_ii(&[ideal(&r, &["x"]), ideal(&r, &["x"])], 8).unwrap();
        assert!(!c[0].holds);
        assert_eq!(c[0].first_failure_degree, Some(2));
    }

    #[test]
    fn decomposition_of_two_coordinates() {
        let r = f2xy(8);
        let dec = decompose_conormal(&[ideal(&r, &["x"]), ideal(&r, &["y"])], 8).unwrap();
        assert!(dec.mutually_inverse());
        let d2 = dec.degrees.iter().find(|d| d.degree == 2).unwrap();
        assert_eq!(d2.source.free_rank, 2);
        assert_eq!(d2.summands.iter().map(|s| s.free_rank).collect::<Vec<_>>(), vec![1, 1]);
        for d in dec.degrees.iter().filter(|d| d.degree != 2) {
            assert!(d.source.is_zero());
        }
        assert!(matches!(
            decompose_conormal(&[ideal(&r, &["x"]), ideal(&r, &["x"])], 8),
            Err(Error::ConditionIIFails { k: 2, .. })
        ));
    }

    #[test]
    fn single_ideal_decomposition_is_identity() {
        let r = f2xy(8);
        let dec = decompose_conormal(&[ideal(&r, &["x"])], 8).unwrap();
        assert!(dec.mutually_inverse());
        for d in &dec.degrees {
            assert_eq!(d.source, d.summands[0]);
        }
    }
}
