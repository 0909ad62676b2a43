//! Derivations of exterior algebras `Λ(V)`, Bockstein operators, and the
//! cohomology algebra generated by them. Operators are coefficient matrices
//! on the `2^n` normal-form basis.

use std::fmt;
use std::sync::Arc;

use crate::clifford::{
    render_presentation, sign, AlgebraPresentation, Blade, CliffordAlgebra, CliffordElement, CliffordHandle,
};
use crate::conormal::QuotientRingSpec;
use crate::error::{Error, Result};
use crate::linalg::{smith_diagonal, Domain};
use crate::ring::RingElement;
use crate::scalar::Scalar;

fn require_exterior(a: &CliffordAlgebra) -> Result<()> {
    if a.is_exterior() {
        Ok(())
    } else {
        Err(Error::NotExterior("operators are defined on exterior algebras".into()))
    }
}

fn position(basis: &[Blade], b: Blade) -> usize {
    basis.binary_search(&b).expect("blade in basis")
}

/// A homogeneous linear endomorphism of `Λ(V)`, stored by the images of
/// the basis words. `word` records the Bocksteins it was composed from.
#[derive(Clone)]
pub struct LinearOperator {
    algebra: Arc<CliffordAlgebra>,
    degree: i64,
    columns: Vec<CliffordElement>,
    word: Option<Vec<usize>>,
}

impl PartialEq for LinearOperator {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.columns == other.columns
    }
}

impl fmt::Debug for LinearOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis = self.algebra.basis();
        let cols: Vec<String> =
            basis.iter().zip(&self.columns).map(|(b, c)| format!("{} ↦ {c}", self.algebra.render_blade(*b))).collect();
        write!(f, "LinearOperator(deg {}; {})", self.degree, cols.join(", "))
    }
}

impl LinearOperator {
    pub fn identity(algebra: &Arc<CliffordAlgebra>) -> Self {
        let columns = algebra.basis().into_iter().map(|b| algebra.blade(b)).collect();
        LinearOperator { algebra: algebra.clone(), degree: 0, columns, word: Some(Vec::new()) }
    }

    pub fn zero(algebra: &Arc<CliffordAlgebra>, degree: i64) -> Self {
        let columns = vec![algebra.zero(); 1 << algebra.rank()];
        LinearOperator { algebra: algebra.clone(), degree, columns, word: None }
    }

    pub fn algebra(&self) -> &Arc<CliffordAlgebra> {
        &self.algebra
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn word(&self) -> Option<&[usize]> {
        self.word.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(CliffordElement::is_zero)
    }

    pub fn apply(&self, u: &CliffordElement) -> Result<CliffordElement> {
        if !Arc::ptr_eq(u.algebra(), &self.algebra) {
            return Err(Error::MixedOwners);
        }
        let basis = self.algebra.basis();
        let mut acc = self.algebra.zero();
        for (b, c) in u.terms() {
            acc = acc.add(&self.columns[position(&basis, *b)].scale(c)?)?;
        }
        Ok(acc)
    }

    /// Entry `[t][s]` is the coefficient of basis word `t` in the image of `s`.
    pub fn matrix(&self) -> Vec<Vec<RingElement>> {
        let basis = self.algebra.basis();
        basis.iter().map(|t| self.columns.iter().map(|c| c.coefficient(*t)).collect()).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearOperator) -> Result<LinearOperator> {
        if !Arc::ptr_eq(&self.algebra, &other.algebra) {
            return Err(Error::MixedOwners);
        }
        let columns = other.columns.iter().map(|c| self.apply(c)).collect::<Result<_>>()?;
        let word = match (&self.word, &other.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Ok(LinearOperator { algebra: self.algebra.clone(), degree: self.degree + other.degree, columns, word })
    }

    pub fn add(&self, other: &LinearOperator) -> Result<LinearOperator> {
        if !Arc::ptr_eq(&self.algebra, &other.algebra) {
            return Err(Error::MixedOwners);
        }
        let columns = self.columns.iter().zip(&other.columns).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(LinearOperator { algebra: self.algebra.clone(), degree: self.degree, columns, word: None })
    }

    pub fn scale(&self, c: &RingElement) -> Result<LinearOperator> {
        let columns = self.columns.iter().map(|a| a.scale(c)).collect::<Result<_>>()?;
        let degree = self.degree + c.degree()?.unwrap_or(0);
        Ok(LinearOperator { algebra: self.algebra.clone(), degree, columns, word: None })
    }
}

/// Signed Leibniz rule `∂(ab) = ∂(a)b + (-1)^{|∂||a|} a∂(b)` on the given
/// homogeneous pairs, or on all basis pairs when `samples` is `None`.
pub fn leibniz_check(op: &LinearOperator, samples: Option<&[(CliffordElement, CliffordElement)]>) -> Result<bool> {
    let a = op.algebra();
    let pairs: Vec<(CliffordElement, CliffordElement)> = match samples {
        Some(s) => s.to_vec(),
        None => {
            let basis = a.basis();
            basis
                .iter()
                .flat_map(|x| basis.iter().map(move |y| (*x, *y)))
                .map(|(x, y)| (a.blade(x), a.blade(y)))
                .collect()
        }
    };
    for (x, y) in &pairs {
        let dx = x.degree()?.unwrap_or(0);
        let lhs = op.apply(&x.mul(y)?)?;
        let s = sign(op.degree() % 2 != 0 && dx % 2 != 0);
        let rhs = op.apply(x)?.mul(y)?.add(&x.mul(&op.apply(y)?)?.scale(&a.coefficients().constant(&s)?)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A derivation of `Λ(V)` of odd degree, determined by `θ(a_j) = c_j · 1`.
#[derive(Debug, Clone)]
pub struct DerivationOperator {
    algebra: Arc<CliffordAlgebra>,
    degree: i64,
    images: Vec<RingElement>,
}

impl PartialEq for DerivationOperator {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.degree == other.degree && self.images == other.images
    }
}

impl DerivationOperator {
    pub fn new(algebra: &Arc<CliffordAlgebra>, degree: i64, images: Vec<RingElement>) -> Result<Self> {
        require_exterior(algebra)?;
        if degree % 2 == 0 {
            return Err(Error::DegreeMismatch(format!("derivation degree {degree} is even")));
        }
        if images.len() != algebra.rank() {
            return Err(Error::DegreeMismatch(format!("{} images for rank {}", images.len(), algebra.rank())));
        }
        let k = algebra.coefficients();
        let images = images.iter().map(|c| k.reduce(c)).collect::<Result<Vec<_>>>()?;
        for (j, c) in images.iter().enumerate() {
            if let Some(d) = c.degree()? {
                if d != degree + algebra.degrees()[j] {
                    return Err(Error::DegreeMismatch(format!(
                        "θ({}) = {c} has degree {d}, expected {}",
                        algebra.labels()[j],
                        degree + algebra.degrees()[j]
                    )));
                }
            }
        }
        Ok(DerivationOperator { algebra: algebra.clone(), degree, images })
    }

    pub fn algebra(&self) -> &Arc<CliffordAlgebra> {
        &self.algebra
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn images(&self) -> &[RingElement] {
        &self.images
    }

    /// `sum_j c_j Q_j` as a matrix.
    pub fn as_operator(&self) -> Result<LinearOperator> {
        let mut acc = LinearOperator::zero(&self.algebra, self.degree);
        for (j, c) in self.images.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&bockstein_operator(&self.algebra, j)?.scale(c)?)?;
        }
        acc.degree = self.degree;
        if let Some(j) = self.single_bockstein() {
            acc.word = Some(vec![j]);
        }
        Ok(acc)
    }

    fn single_bockstein(&self) -> Option<usize> {
        let nonzero: Vec<usize> = (0..self.images.len()).filter(|&j| !self.images[j].is_zero()).collect();
        match nonzero.as_slice() {
            [j] if self.images[*j].is_one() => Some(*j),
            _ => None,
        }
    }
}

/// `Q_i = ∂/∂a_i`: removes `a_i` from a word with sign `(-1)^{position}`.
fn bockstein_operator(algebra: &Arc<CliffordAlgebra>, i: usize) -> Result<LinearOperator> {
    if i >= algebra.rank() {
        return Err(Error::BadIndex(i));
    }
    let columns = algebra
        .basis()
        .into_iter()
        .map(|b| {
            if !b.contains(i) {
                return Ok(algebra.zero());
            }
            let before = b.indices().iter().filter(|&&j| j < i).count();
            let c = algebra.coefficients().constant(&sign(before % 2 == 1))?;
            algebra.element(vec![(b.without(i), c)])
        })
        .collect::<Result<_>>()?;
    Ok(LinearOperator { algebra: algebra.clone(), degree: -algebra.degrees()[i], columns, word: Some(vec![i]) })
}

pub fn bockstein(algebra: &Arc<CliffordAlgebra>, i: usize) -> Result<DerivationOperator> {
    require_exterior(algebra)?;
    if i >= algebra.rank() {
        return Err(Error::BadIndex(i));
    }
    let k = algebra.coefficients();
    let images = (0..algebra.rank()).map(|j| if i == j { k.one() } else { k.zero() }).collect();
    DerivationOperator::new(algebra, -algebra.degrees()[i], images)
}

/// A graded functional on `V`, given by its values on the basis `x̄_j`.
#[derive(Debug, Clone)]
pub struct VFunctional {
    algebra: Arc<CliffordAlgebra>,
    degree: i64,
    values: Vec<RingElement>,
}

impl PartialEq for VFunctional {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.degree == other.degree && self.values == other.values
    }
}

impl VFunctional {
    pub fn new(algebra: &Arc<CliffordAlgebra>, degree: i64, values: Vec<RingElement>) -> Self {
        VFunctional { algebra: algebra.clone(), degree, values }
    }

    /// The dual basis functional `y_i`.
    pub fn dual_basis(algebra: &Arc<CliffordAlgebra>, i: usize) -> Result<Self> {
        if i >= algebra.rank() {
            return Err(Error::BadIndex(i));
        }
        let k = algebra.coefficients();
        let values = (0..algebra.rank()).map(|j| if i == j { k.one() } else { k.zero() }).collect();
        Ok(VFunctional { algebra: algebra.clone(), degree: -algebra.degrees()[i], values })
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn values(&self) -> &[RingElement] {
        &self.values
    }

    pub fn add(&self, other: &VFunctional) -> Result<VFunctional> {
        let k = self.algebra.coefficients();
        let values = self.values.iter().zip(&other.values).map(|(a, b)| k.add(a, b)).collect::<Result<_>>()?;
        Ok(VFunctional { algebra: self.algebra.clone(), degree: self.degree, values })
    }

    pub fn scale(&self, c: &RingElement) -> Result<VFunctional> {
        let k = self.algebra.coefficients();
        let values = self.values.iter().map(|a| k.mul(c, a)).collect::<Result<_>>()?;
        Ok(VFunctional { algebra: self.algebra.clone(), degree: self.degree + c.degree()?.unwrap_or(0), values })
    }
}

/// `ψ(θ)`: the values `ε(θ(a_j))` read off the operator.
pub fn psi(theta: &DerivationOperator) -> Result<VFunctional> {
    let a = theta.algebra();
    let op = theta.as_operator()?;
    let values = (0..a.rank()).map(|j| op.apply(&a.generator(j)?)?.augmentation()).collect::<Result<_>>()?;
    Ok(VFunctional { algebra: a.clone(), degree: theta.degree(), values })
}

pub fn psi_inverse(alpha: &VFunctional) -> Result<DerivationOperator> {
    DerivationOperator::new(&alpha.algebra, alpha.degree, alpha.values.clone())
}

/// `ops[0] ∘ ops[1] ∘ ...`; the empty composition is the identity.
pub fn compose(algebra: &Arc<CliffordAlgebra>, ops: &[LinearOperator]) -> Result<LinearOperator> {
    let mut acc = LinearOperator::identity(algebra);
    for op in ops {
        acc = acc.compose(op)?;
    }
    Ok(acc)
}

/// `Θ(Q_{i_1} ∧ ... ∧ Q_{i_k}) = Q_{i_1} ∘ ... ∘ Q_{i_k}`.
pub fn theta(algebra: &Arc<CliffordAlgebra>, word: &[usize]) -> Result<LinearOperator> {
    require_exterior(algebra)?;
    let ops = word.iter().map(|&i| bockstein_operator(algebra, i)).collect::<Result<Vec<_>>>()?;
    compose(algebra, &ops)
}

/// A functional on `Λ(V)` given by its values on the `2^n` basis words.
#[derive(Debug, Clone)]
pub struct DualFunctional {
    algebra: Arc<CliffordAlgebra>,
    values: Vec<RingElement>,
}

impl PartialEq for DualFunctional {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.values == other.values
    }
}

impl DualFunctional {
    pub fn values(&self) -> &[RingElement] {
        &self.values
    }

    pub fn value(&self, b: Blade) -> &RingElement {
        &self.values[position(&self.algebra.basis(), b)]
    }

    pub fn evaluate(&self, u: &CliffordElement) -> Result<RingElement> {
        if !Arc::ptr_eq(u.algebra(), &self.algebra) {
            return Err(Error::MixedOwners);
        }
        let k = self.algebra.coefficients();
        let mut acc = k.zero();
        for (b, c) in u.terms() {
            acc = k.add(&acc, &k.mul(c, self.value(*b))?)?;
        }
        Ok(acc)
    }

    /// Support: basis words with a nonzero value.
    pub fn support(&self) -> Vec<Blade> {
        self.algebra.basis().into_iter().zip(&self.values).filter(|(_, v)| !v.is_zero()).map(|(b, _)| b).collect()
    }
}

/// `Ψ(op) = ε ∘ op`.
#[allow(non_snake_case)]
pub fn Psi(op: &LinearOperator) -> Result<DualFunctional> {
    let a = op.algebra();
    require_exterior(a)?;
    let values = a.basis().into_iter().map(|b| op.apply(&a.blade(b))?.augmentation()).collect::<Result<_>>()?;
    Ok(DualFunctional { algebra: a.clone(), values })
}

/// `Δ(α_1 ∧ ... ∧ α_k) = ε ∘ ψ^{-1}(α_1) ∘ ... ∘ ψ^{-1}(α_k)`.
#[allow(non_snake_case)]
pub fn Delta(algebra: &Arc<CliffordAlgebra>, word: &[VFunctional]) -> Result<DualFunctional> {
    require_exterior(algebra)?;
    let ops = word.iter().map(|a| psi_inverse(a)?.as_operator()).collect::<Result<Vec<_>>>()?;
    Psi(&compose(algebra, &ops)?)
}

/// `Λ(ψ)` on a word of Bocksteins: `Q_{i_1} ∧ ... ↦ ψ(Q_{i_1}) ∧ ...`.
pub fn lambda_psi(algebra: &Arc<CliffordAlgebra>, word: &[usize]) -> Result<Vec<VFunctional>> {
    word.iter().map(|&i| psi(&bockstein(algebra, i)?)).collect()
}

/// Tabulates a map `Λ(V) -> k_*` on the basis.
pub fn kronecker_dual(
    algebra: &Arc<CliffordAlgebra>,
    f: &dyn Fn(&CliffordElement) -> Result<RingElement>,
) -> Result<DualFunctional> {
    let values = algebra.basis().into_iter().map(|b| f(&algebra.blade(b))).collect::<Result<_>>()?;
    Ok(DualFunctional { algebra: algebra.clone(), values })
}

/// Outcome of checking that `Θ` is an injective algebra map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaReport {
    pub squares_vanish: bool,
    pub anticommute: bool,
    /// Rank of the pairing `ε(Θ(Q_S)(a_T))`, which is `2^n` exactly when
    /// `Θ` is injective with free image.
    pub image_rank: usize,
    pub pairing_unimodular: bool,
    /// `Ψ ∘ Θ = Δ ∘ Λ(ψ)` on every basis word.
    pub square_commutes: bool,
}

impl ThetaReport {
    pub fn passes(&self, n: usize) -> bool {
        self.squares_vanish
            && self.anticommute
            && self.image_rank == 1 << n
            && self.pairing_unimodular
            && self.square_commutes
    }
}

pub fn verify_theta(algebra: &Arc<CliffordAlgebra>) -> Result<ThetaReport> {
    require_exterior(algebra)?;
    let n = algebra.rank();
    let mut squares_vanish = true;
    let mut anticommute = true;
    for i in 0..n {
        squares_vanish &= theta(algebra, &[i, i])?.is_zero();
        for j in i + 1..n {
            anticommute &= theta(algebra, &[i, j])?.add(&theta(algebra, &[j, i])?)?.is_zero();
        }
    }
    let basis = algebra.basis();
    let mut rows = Vec::new();
    let mut constant = true;
    let mut square_commutes = true;
    for s in &basis {
        let word = s.indices();
        let op = theta(algebra, &word)?;
        let lhs = Psi(&op)?;
        square_commutes &= lhs == Delta(algebra, &lambda_psi(algebra, &word)?)?;
        let row: Vec<Scalar> = lhs
            .values()
            .iter()
            .map(|v| {
                v.as_constant().unwrap_or_else(|| {
                    constant = false;
                    Scalar::from_integer(0.into())
                })
            })
            .collect();
        rows.push(row);
    }
    let dom = Domain::of(&algebra.coefficients().ambient().base());
    let diag = smith_diagonal(&dom, basis.len(), &rows);
    let pairing_unimodular = constant
        && diag.len() == basis.len()
        && diag.iter().all(|d| dom.is_unit(d))
        && !algebra.coefficients().is_trivial();
    Ok(ThetaReport { squares_vanish, anticommute, image_rank: diag.len(), pairing_unimodular, square_commutes })
}

/// Name of the Bockstein dual to a conormal label: `a3 ↦ Q3`, `b ↦ Q_b`.
pub fn bockstein_name(label: &str) -> String {
    match label.strip_prefix('a') {
        Some(rest) if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) => format!("Q{rest}"),
        _ => format!("Q_{label}"),
    }
}

/// `Λ(Q_1, ..., Q_n)` with `|Q_i| = -(|x_i| + 1)`.
pub fn cohomology_presentation(spec: &QuotientRingSpec) -> Result<AlgebraPresentation> {
    if !spec.is_regular() {
        return Err(Error::NotRegular);
    }
    let labels: Vec<String> = spec.labels().iter().map(|l| bockstein_name(l)).collect();
    let degrees: Vec<i64> = spec.basis_degrees().iter().map(|d| -d).collect();
    let k = spec.quotient();
    let mut p = render_presentation(&k.to_string(), &labels, &degrees, &|_| k.zero(), &|_, _| k.zero());
    p.warnings.push(format!("verified up to degree {}", spec.ring().window().degree));
    Ok(p)
}
