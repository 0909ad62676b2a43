//! Clifford algebras `Cl(V, q)` over graded coefficient rings, in the normal
//! form basis of strictly increasing generator words.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::conormal::{
    base_change_form, characteristic_form_diagonal, BilinearFormData, ConormalModule, QuotientRingSpec, RingMap,
};
use crate::error::{Error, Result};
use crate::expr::{self, Evaluate, Expr};
use crate::koszul::{tor, HomogeneousIdeal};
use crate::linalg::ModuleSummary;
use crate::quotient::QuotientRing;
use crate::ring::{same_ring, RingElement, RingHandle};
use crate::scalar::Scalar;

/// A normal-form word `a_{i_1} ... a_{i_k}` with `i_1 < ... < i_k`, stored
/// as a bitmask. Words are ordered by length, then by index list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Blade(pub u32);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn single(i: usize) -> Self {
        Blade(1 << i)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        Blade(indices.iter().fold(0, |acc, &i| acc | 1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn without(self, i: usize) -> Self {
        Blade(self.0 & !(1 << i))
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }

    /// All `2^n` words on `n` generators, in order.
    pub fn all(n: usize) -> Vec<Blade> {
        let mut v: Vec<Blade> = (0u32..1 << n).map(Blade).collect();
        v.sort();
        v
    }

    pub fn is_odd(self) -> bool {
        self.len() % 2 == 1
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::from_integer(1.into())
    } else {
        Scalar::from_integer(1.into())
    }
}

type BladeTerms = BTreeMap<Blade, RingElement>;

/// Memoized products of basis words.
type ProductCache = HashMap<(Blade, Blade), Vec<(Blade, RingElement)>>;

pub struct CliffordAlgebra {
    coefficients: Arc<QuotientRing>,
    labels: Vec<String>,
    form: BilinearFormData,
    q: Vec<RingElement>,
    s: Vec<Vec<RingElement>>,
    cache: Mutex<ProductCache>,
}

impl fmt::Debug for CliffordAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CliffordAlgebra({})", self.presentation().text)
    }
}

impl CliffordAlgebra {
    /// Generators `labels[i]` in degrees `form.degrees()[i]`, which must be odd.
    pub fn new(labels: Vec<String>, form: BilinearFormData) -> Result<Arc<Self>> {
        let n = form.rank();
        if labels.len() != n {
            return Err(Error::DegreeMismatch(format!("{} labels for a rank-{n} form", labels.len())));
        }
        if n > 16 {
            return Err(Error::InvalidRing("rank above 16 is not supported".into()));
        }
        for &d in form.degrees() {
            if d % 2 == 0 {
                return Err(Error::DegreeMismatch(format!("generator degree {d} is even")));
            }
        }
        let ambient = form.coefficients().ambient();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) || ambient.generator_index(l).is_some() {
                return Err(Error::InvalidRing(format!("label `{l}` is repeated or clashes with a ring generator")));
            }
        }
        let q = (0..n).map(|i| form.q(i).clone()).collect();
        let s = (0..n).map(|i| (0..n).map(|j| form.polarized(i, j)).collect()).collect();
        Ok(Arc::new(CliffordAlgebra {
            coefficients: form.coefficients().clone(),
            labels,
            form,
            q,
            s,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn from_module(module: &ConormalModule, form: BilinearFormData) -> Result<Arc<Self>> {
        if form.degrees() != module.degrees() {
            return Err(Error::DegreeMismatch("form and module degrees differ".into()));
        }
        Self::new(module.labels().to_vec(), form)
    }

    /// The exterior algebra on the given generators.
    pub fn exterior(coefficients: &Arc<QuotientRing>, labels: Vec<String>, degrees: Vec<i64>) -> Result<Arc<Self>> {
        Self::new(labels, BilinearFormData::zero(coefficients, degrees))
    }

    pub fn coefficients(&self) -> &Arc<QuotientRing> {
        &self.coefficients
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[i64] {
        self.form.degrees()
    }

    pub fn form(&self) -> &BilinearFormData {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn q(&self, i: usize) -> &RingElement {
        &self.q[i]
    }

    pub fn s(&self, i: usize, j: usize) -> &RingElement {
        &self.s[i][j]
    }

    /// All squares and anticommutators vanish.
    pub fn is_exterior(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| self.q[i].is_zero() && (0..n).all(|j| i == j || self.s[i][j].is_zero()))
    }

    pub fn basis(&self) -> Vec<Blade> {
        Blade::all(self.rank())
    }

    pub fn blade_degree(&self, b: Blade) -> i64 {
        b.indices().iter().map(|&i| self.degrees()[i]).sum()
    }

    pub fn render_blade(&self, b: Blade) -> String {
        if b.is_empty() {
            return "1".into();
        }
        b.indices().iter().map(|&i| self.labels[i].as_str()).collect::<Vec<_>>().join("·")
    }

    /// Product of two normal-form words, as a list of normal-form terms.
    fn blade_product(&self, a: Blade, b: Blade) -> Result<Vec<(Blade, RingElement)>> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&(a, b)) {
            return Ok(hit.clone());
        }
        let mut word = a.indices();
        word.extend(b.indices());
        let mut out = BladeTerms::new();
        self.reduce_word(word, self.coefficients.one(), &mut out)?;
        let v: Vec<(Blade, RingElement)> = out.into_iter().collect();
        self.cache.lock().expect("cache lock").insert((a, b), v.clone());
        Ok(v)
    }

    /// Moves generators left past larger ones with `a_i a_j = -a_j a_i + s_ij`
    /// and contracts `a_i a_i = q_i`, at the first out-of-order position.
    fn reduce_word(&self, word: Vec<usize>, coef: RingElement, out: &mut BladeTerms) -> Result<()> {
        if coef.is_zero() {
            return Ok(());
        }
        let Some(t) = (0..word.len().saturating_sub(1)).find(|&t| word[t] >= word[t + 1]) else {
            let b = Blade::from_indices(&word);
            let acc = match out.remove(&b) {
                Some(c) => self.coefficients.add(&c, &coef)?,
                None => coef,
            };
            if !acc.is_zero() {
                out.insert(b, acc);
            }
            return Ok(());
        };
        let (i, j) = (word[t], word[t + 1]);
        let mut shorter = word.clone();
        shorter.drain(t..t + 2);
        if i == j {
            return self.reduce_word(shorter, self.coefficients.mul(&coef, &self.q[i])?, out);
        }
        let mut swapped = word;
        swapped.swap(t, t + 1);
        self.reduce_word(swapped, self.coefficients.neg(&coef)?, out)?;
        self.reduce_word(shorter, self.coefficients.mul(&coef, &self.s[i][j])?, out)
    }

    /// Orthogonal sum `V ⟂ W`: generators of `self` first, then those of `other`.
    pub fn orthogonal_sum(&self, other: &CliffordAlgebra) -> Result<Arc<CliffordAlgebra>> {
        if !self.coefficients.same_as(&other.coefficients) {
            return Err(Error::MixedCoefficients);
        }
        let (n, m) = (self.rank(), other.rank());
        let z = self.coefficients.zero();
        let mut entries = vec![vec![z; n + m]; n + m];
        for (i, row) in entries.iter_mut().enumerate().take(n) {
            for (j, e) in row.iter_mut().enumerate().take(n) {
                *e = self.form.entry(i, j).clone();
            }
        }
        for (i, row) in entries.iter_mut().skip(n).enumerate() {
            for (j, e) in row.iter_mut().skip(n).enumerate() {
                *e = other.form.entry(i, j).clone();
            }
        }
        let mut degrees = self.degrees().to_vec();
        degrees.extend(other.degrees());
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        CliffordAlgebra::new(labels, BilinearFormData::new(&self.coefficients, degrees, entries)?)
    }

    pub fn presentation(&self) -> AlgebraPresentation {
        render_presentation(
            &self.coefficients.to_string(),
            &self.labels,
            self.degrees(),
            &|i| self.q[i].clone(),
            &|i, j| self.s[i][j].clone(),
        )
    }
}

/// Renders `x - c` style relation tails: `" − c"` or `" + c'"`.
fn minus(c: &RingElement) -> String {
    if c.is_zero() {
        return String::new();
    }
    let neg = c.neg();
    let text = c.to_string();
    if text.starts_with('−') && !c.is_compound() {
        format!(" + {neg}")
    } else if c.is_compound() {
        format!(" − ({text})")
    } else {
        format!(" − {text}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresentationKind {
    Clifford,
    Exterior,
    TensorTruncated,
}

impl PresentationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PresentationKind::Clifford => "clifford",
            PresentationKind::Exterior => "exterior",
            PresentationKind::TensorTruncated => "tensor-truncated",
        }
    }
}

/// A rendered algebra presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub kind: PresentationKind,
    pub coefficient_ring: String,
    pub generators: Vec<(String, i64)>,
    /// Relations `r` meaning `r = 0`, sorted lexicographically.
    pub relations: Vec<String>,
    pub text: String,
    /// Free rank over the coefficient ring.
    pub rank: usize,
    pub isomorphism_asserted: bool,
    pub warnings: Vec<String>,
}

pub(crate) fn render_presentation(
    coefficient_ring: &str,
    labels: &[String],
    degrees: &[i64],
    q: &dyn Fn(usize) -> RingElement,
    s: &dyn Fn(usize, usize) -> RingElement,
) -> AlgebraPresentation {
    let n = labels.len();
    let mut relations = Vec::new();
    let mut off_diagonal = false;
    for i in 0..n {
        relations.push(format!("{}^2{}", labels[i], minus(&q(i))));
        for j in i + 1..n {
            let sij = s(i, j);
            off_diagonal |= !sij.is_zero();
            relations.push(format!("{}·{} + {}·{}{}", labels[i], labels[j], labels[j], labels[i], minus(&sij)));
        }
    }
    relations.sort();
    let squares: Vec<bool> = (0..n).map(|i| !q(i).is_zero()).collect();
    let kind = if off_diagonal {
        PresentationKind::Clifford
    } else if squares.iter().any(|&b| b) {
        PresentationKind::TensorTruncated
    } else {
        PresentationKind::Exterior
    };
    let text = if n == 0 {
        coefficient_ring.to_string()
    } else {
        match kind {
            PresentationKind::Clifford => format!("Cl({}; {})", labels.join(", "), relations.join(", ")),
            _ => {
                let mut parts = Vec::new();
                let ext: Vec<&str> = (0..n).filter(|&i| !squares[i]).map(|i| labels[i].as_str()).collect();
                if !ext.is_empty() {
                    parts.push(format!("Λ({})", ext.join(", ")));
                }
                for i in (0..n).filter(|&i| squares[i]) {
                    parts.push(format!("T({l})/({l}^2{})", minus(&q(i)), l = labels[i]));
                }
                parts.join(" ⊗ ")
            }
        }
    };
    AlgebraPresentation {
        kind,
        coefficient_ring: coefficient_ring.to_string(),
        generators: labels.iter().cloned().zip(degrees.iter().copied()).collect(),
        relations,
        text,
        rank: 1 << n,
        isomorphism_asserted: true,
        warnings: Vec::new(),
    }
}

/// An element `sum_S c_S a_S` with coefficients reduced in the coefficient ring.
#[derive(Clone)]
pub struct CliffordElement {
    algebra: Arc<CliffordAlgebra>,
    terms: BladeTerms,
}

impl PartialEq for CliffordElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.terms == other.terms
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub trait CliffordHandle {
    fn zero(&self) -> CliffordElement;
    fn one(&self) -> CliffordElement;
    fn generator(&self, i: usize) -> Result<CliffordElement>;
    fn blade(&self, b: Blade) -> CliffordElement;
    fn scalar(&self, c: &RingElement) -> Result<CliffordElement>;
    fn element(&self, terms: Vec<(Blade, RingElement)>) -> Result<CliffordElement>;
    fn parse(&self, text: &str) -> Result<CliffordElement>;
}

impl CliffordHandle for Arc<CliffordAlgebra> {
    fn zero(&self) -> CliffordElement {
        CliffordElement { algebra: self.clone(), terms: BladeTerms::new() }
    }

    fn one(&self) -> CliffordElement {
        self.blade(Blade::EMPTY)
    }

    fn generator(&self, i: usize) -> Result<CliffordElement> {
        if i >= self.rank() {
            return Err(Error::BadIndex(i));
        }
        Ok(self.blade(Blade::single(i)))
    }

    fn blade(&self, b: Blade) -> CliffordElement {
        self.element(vec![(b, self.coefficients.ambient().one())]).expect("unit coefficient")
    }

    fn scalar(&self, c: &RingElement) -> Result<CliffordElement> {
        self.element(vec![(Blade::EMPTY, c.clone())])
    }

    fn element(&self, terms: Vec<(Blade, RingElement)>) -> Result<CliffordElement> {
        let mut out = BladeTerms::new();
        for (b, c) in terms {
            if b.0 >> self.rank() != 0 {
                return Err(Error::BadIndex(b.indices().last().copied().unwrap_or(0)));
            }
            if !same_ring(self.coefficients.ambient(), c.ring()) {
                return Err(Error::MixedRings);
            }
            let acc = match out.remove(&b) {
                Some(a) => a.add(&c)?,
                None => c,
            };
            let acc = self.coefficients.reduce(&acc)?;
            if !acc.is_zero() {
                out.insert(b, acc);
            }
        }
        Ok(CliffordElement { algebra: self.clone(), terms: out })
    }

    fn parse(&self, text: &str) -> Result<CliffordElement> {
        let e = expr::parse(text)?;
        expr::eval(&CliffordEval(self), &e)
    }
}

struct CliffordEval<'a>(&'a Arc<CliffordAlgebra>);

fn mentions(e: &Expr, labels: &[String]) -> bool {
    match e {
        Expr::Number(_) => false,
        Expr::Name(n) => labels.contains(n),
        Expr::Neg(a) | Expr::Pow(a, _) => mentions(a, labels),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => mentions(a, labels) || mentions(b, labels),
    }
}

impl Evaluate for CliffordEval<'_> {
    type Value = CliffordElement;

    fn number(&self, q: &Scalar) -> Result<CliffordElement> {
        self.0.scalar(&self.0.coefficients.ambient().constant(q)?)
    }

    fn name(&self, name: &str) -> Result<CliffordElement> {
        match self.0.labels.iter().position(|l| l == name) {
            Some(i) => self.0.generator(i),
            None => self.0.scalar(&self.0.coefficients.ambient().gen(name)?),
        }
    }

    fn add(&self, a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
        a.add(b)
    }

    fn sub(&self, a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
        a.sub(b)
    }

    fn mul(&self, a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
        a.mul(b)
    }

    fn neg(&self, a: &CliffordElement) -> Result<CliffordElement> {
        Ok(a.neg())
    }

    fn pow(&self, base: &Expr, e: i64) -> Result<CliffordElement> {
        if !mentions(base, &self.0.labels) {
            let pow = Expr::Pow(Box::new(base.clone()), e);
            return self.0.scalar(&self.0.coefficients.ambient().eval_expr(&pow)?);
        }
        expr::pow_by_mul(self, self.0.one(), base, e)
    }
}

impl CliffordElement {
    pub fn algebra(&self) -> &Arc<CliffordAlgebra> {
        &self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<Blade, RingElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: Blade) -> RingElement {
        self.terms.get(&b).cloned().unwrap_or_else(|| self.algebra.coefficients.zero())
    }

    /// `Ok(None)` for zero.
    pub fn degree(&self) -> Result<Option<i64>> {
        let mut out = None;
        for (b, c) in &self.terms {
            let d = c.degree()?.unwrap_or(0) + self.algebra.blade_degree(*b);
            match out {
                None => out = Some(d),
                Some(e) if e != d => return Err(Error::NonHomogeneous),
                _ => {}
            }
        }
        Ok(out)
    }

    fn check(&self, other: &CliffordElement) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    pub fn add(&self, other: &CliffordElement) -> Result<CliffordElement> {
        self.check(other)?;
        let terms = self.terms.iter().chain(&other.terms).map(|(b, c)| (*b, c.clone())).collect();
        self.algebra.element(terms)
    }

    pub fn neg(&self) -> CliffordElement {
        let k = &self.algebra.coefficients;
        let terms = self.terms.iter().map(|(b, c)| (*b, k.neg(c).expect("same ring"))).collect();
        CliffordElement { algebra: self.algebra.clone(), terms }
    }

    pub fn sub(&self, other: &CliffordElement) -> Result<CliffordElement> {
        self.add(&other.neg())
    }

    /// Multiplication by a central coefficient.
    pub fn scale(&self, c: &RingElement) -> Result<CliffordElement> {
        let k = &self.algebra.coefficients;
        let terms = self.terms.iter().map(|(b, a)| Ok((*b, k.mul(c, a)?))).collect::<Result<_>>()?;
        self.algebra.element(terms)
    }

    pub fn mul(&self, other: &CliffordElement) -> Result<CliffordElement> {
        self.check(other)?;
        let k = &self.algebra.coefficients;
        let mut terms = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = k.mul(ca, cb)?;
                if c.is_zero() {
                    continue;
                }
                for (blade, w) in self.algebra.blade_product(*a, *b)? {
                    terms.push((blade, k.mul(&c, &w)?));
                }
            }
        }
        self.algebra.element(terms)
    }

    /// The principal automorphism `a_i ↦ -a_i`.
    pub fn antipode(&self) -> CliffordElement {
        let k = &self.algebra.coefficients;
        let terms = self
            .terms
            .iter()
            .map(|(b, c)| (*b, if b.is_odd() { k.neg(c).expect("same ring") } else { c.clone() }))
            .collect();
        CliffordElement { algebra: self.algebra.clone(), terms }
    }

    /// The coefficient of `1`; an algebra map only for exterior algebras.
    pub fn augmentation(&self) -> Result<RingElement> {
        if !self.algebra.is_exterior() {
            return Err(Error::NotExterior("some square or anticommutator is nonzero".into()));
        }
        Ok(self.coefficient(Blade::EMPTY))
    }
}

fn render_coefficient(c: &RingElement) -> String {
    if c.is_compound() {
        format!("({c})")
    } else {
        c.to_string()
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (b, c)) in self.terms.iter().enumerate() {
            let word = self.algebra.render_blade(*b);
            let (negative, c) = match c.as_constant() {
                Some(q) if q < Scalar::from_integer(0.into()) => (true, c.neg()),
                _ => (false, c.clone()),
            };
            let body = if c.is_one() { word } else { format!("{}·{word}", render_coefficient(&c)) };
            match (n, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "−{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " − {body}")?,
            }
        }
        Ok(())
    }
}

/// The homology algebra `Cl(k_* ⊗ I/I²[1], q)` of an admissible pair
/// `(F, k, π)`, with its characteristic homomorphism.
#[derive(Debug, Clone)]
pub struct HomologyAlgebra {
    spec: Arc<QuotientRingSpec>,
    pi: RingMap,
    module: ConormalModule,
    algebra: Arc<CliffordAlgebra>,
}

impl HomologyAlgebra {
    /// Uses `k_* ⊗ b_F` built from the product tokens of `F`.
    pub fn new(spec: &Arc<QuotientRingSpec>, pi: &RingMap) -> Result<Self> {
        let form = base_change_form(&characteristic_form_diagonal(spec)?, pi)?;
        Self::with_form(spec, pi, form)
    }

    /// `form` must live over the target of `pi`.
    pub fn with_form(spec: &Arc<QuotientRingSpec>, pi: &RingMap, form: BilinearFormData) -> Result<Self> {
        if !pi.source().same_as(spec.quotient()) {
            return Err(Error::NotWellDefined("π does not start at F_*".into()));
        }
        if !form.coefficients().same_as(pi.target()) {
            return Err(Error::MixedCoefficients);
        }
        let module = ConormalModule::unchecked(spec);
        let algebra = CliffordAlgebra::from_module(&module, form)?;
        Ok(HomologyAlgebra { spec: spec.clone(), pi: pi.clone(), module, algebra })
    }

    /// The pair `(F, F, id)`.
    pub fn of_ring(spec: &Arc<QuotientRingSpec>) -> Result<Self> {
        Self::new(spec, &RingMap::identity(spec.quotient()))
    }

    pub fn spec(&self) -> &Arc<QuotientRingSpec> {
        &self.spec
    }

    pub fn pi(&self) -> &RingMap {
        &self.pi
    }

    pub fn module(&self) -> &ConormalModule {
        &self.module
    }

    pub fn algebra(&self) -> &Arc<CliffordAlgebra> {
        &self.algebra
    }

    pub fn is_regular(&self) -> bool {
        self.spec.is_regular()
    }

    /// Image of the class of `x ∈ I` in the basis `a_1, ..., a_n`.
    pub fn phi(&self, x: &RingElement) -> Result<CliffordElement> {
        let coords = self.module.coordinates(x)?;
        let terms = coords
            .iter()
            .enumerate()
            .map(|(i, c)| Ok((Blade::single(i), self.pi.apply(c)?)))
            .collect::<Result<Vec<_>>>()?;
        self.algebra.element(terms)
    }

    pub fn presentation(&self) -> AlgebraPresentation {
        let mut p = self.algebra.presentation();
        p.isomorphism_asserted = self.is_regular();
        if !self.is_regular() {
            p.warnings.push("lift only, isomorphism not asserted".into());
        }
        p.warnings.push(format!("verified up to degree {}", self.spec.ring().window().degree));
        p
    }
}

/// An element of the graded tensor product `Cl(V) ⊗ Cl(W)`.
#[derive(Clone)]
pub struct TensorElement {
    left: Arc<CliffordAlgebra>,
    right: Arc<CliffordAlgebra>,
    terms: BTreeMap<(Blade, Blade), RingElement>,
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.left, &other.left) && Arc::ptr_eq(&self.right, &other.right) && self.terms == other.terms
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| {
                format!("{}·{}⊗{}", render_coefficient(c), self.left.render_blade(*a), self.right.render_blade(*b))
            })
            .collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

impl TensorElement {
    fn build(
        left: &Arc<CliffordAlgebra>,
        right: &Arc<CliffordAlgebra>,
        terms: Vec<((Blade, Blade), RingElement)>,
    ) -> Result<Self> {
        let k = left.coefficients();
        let mut out: BTreeMap<(Blade, Blade), RingElement> = BTreeMap::new();
        for (key, c) in terms {
            let acc = match out.remove(&key) {
                Some(a) => k.add(&a, &c)?,
                None => k.reduce(&c)?,
            };
            if !acc.is_zero() {
                out.insert(key, acc);
            }
        }
        Ok(TensorElement { left: left.clone(), right: right.clone(), terms: out })
    }

    /// `u ⊗ v`.
    pub fn pure(u: &CliffordElement, v: &CliffordElement) -> Result<Self> {
        if !u.algebra.coefficients.same_as(&v.algebra.coefficients) {
            return Err(Error::MixedCoefficients);
        }
        let k = u.algebra.coefficients();
        let mut terms = Vec::new();
        for (a, ca) in &u.terms {
            for (b, cb) in &v.terms {
                terms.push(((*a, *b), k.mul(ca, cb)?));
            }
        }
        Self::build(&u.algebra, &v.algebra, terms)
    }

    pub fn terms(&self) -> &BTreeMap<(Blade, Blade), RingElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TensorElement) -> Result<TensorElement> {
        self.check(other)?;
        let terms = self.terms.iter().chain(&other.terms).map(|(k, c)| (*k, c.clone())).collect();
        Self::build(&self.left, &self.right, terms)
    }

    fn check(&self, other: &TensorElement) -> Result<()> {
        if Arc::ptr_eq(&self.left, &other.left) && Arc::ptr_eq(&self.right, &other.right) {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    /// `(u ⊗ v)(u' ⊗ v') = (-1)^{|v||u'|} uu' ⊗ vv'`.
    pub fn mul(&self, other: &TensorElement) -> Result<TensorElement> {
        self.check(other)?;
        let k = self.left.coefficients();
        let mut terms = Vec::new();
        for ((a, b), c) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                let c = k.mul(c, c2)?.scale(&sign(b.is_odd() && a2.is_odd()))?;
                for (x, cx) in self.left.blade_product(*a, *a2)? {
                    for (y, cy) in self.right.blade_product(*b, *b2)? {
                        terms.push(((x, y), k.mul(&c, &k.mul(&cx, &cy)?)?));
                    }
                }
            }
        }
        Self::build(&self.left, &self.right, terms)
    }

    /// `τ(u ⊗ v) = (-1)^{|u||v|} v ⊗ u`.
    pub fn swap(&self) -> Result<TensorElement> {
        let terms = self
            .terms
            .iter()
            .map(|((a, b), c)| Ok(((*b, *a), c.scale(&sign(a.is_odd() && b.is_odd()))?)))
            .collect::<Result<Vec<_>>>()?;
        Self::build(&self.right, &self.left, terms)
    }
}

/// The canonical map `Cl(V ⟂ W) -> Cl(V) ⊗ Cl(W)`, `a_i ↦ a_i ⊗ 1`, `b_j ↦ 1 ⊗ b_j`.
pub fn kunneth_map(
    sum: &Arc<CliffordAlgebra>,
    left: &Arc<CliffordAlgebra>,
    right: &Arc<CliffordAlgebra>,
    u: &CliffordElement,
) -> Result<TensorElement> {
    if !Arc::ptr_eq(u.algebra(), sum) || sum.rank() != left.rank() + right.rank() {
        return Err(Error::MixedAlgebras);
    }
    let n = left.rank();
    let mask = (1u32 << n) - 1;
    let terms = u.terms.iter().map(|(b, c)| ((Blade(b.0 & mask), Blade(b.0 >> n)), c.clone())).collect();
    TensorElement::build(left, right, terms)
}

/// Checks that the Künneth map of the orthogonal sum is bijective on bases
/// and multiplicative on all basis pairs.
pub fn verify_kunneth(left: &Arc<CliffordAlgebra>, right: &Arc<CliffordAlgebra>) -> Result<bool> {
    let sum = left.orthogonal_sum(right)?;
    let basis = sum.basis();
    let images: Vec<TensorElement> =
        basis.iter().map(|b| kunneth_map(&sum, left, right, &sum.blade(*b))).collect::<Result<_>>()?;
    let mut seen = std::collections::BTreeSet::new();
    for img in &images {
        if img.terms.len() != 1 || !img.terms.values().all(RingElement::is_one) {
            return Ok(false);
        }
        seen.insert(*img.terms.keys().next().expect("one term"));
    }
    if seen.len() != basis.len() {
        return Ok(false);
    }
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let prod = sum.blade(*a).mul(&sum.blade(*b))?;
            if kunneth_map(&sum, left, right, &prod)? != images[i].mul(&images[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An algebra map between Clifford algebras, determined by generator images
/// and a coefficient map.
#[derive(Debug, Clone)]
pub struct AlgebraMap {
    source: Arc<CliffordAlgebra>,
    target: Arc<CliffordAlgebra>,
    coefficients: RingMap,
    images: Vec<CliffordElement>,
}

impl AlgebraMap {
    /// Fails with `NotCompatible` when the images violate the source relations.
    pub fn new(
        source: &Arc<CliffordAlgebra>,
        target: &Arc<CliffordAlgebra>,
        coefficients: RingMap,
        images: Vec<CliffordElement>,
    ) -> Result<Self> {
        if images.len() != source.rank() || images.iter().any(|e| !Arc::ptr_eq(e.algebra(), target)) {
            return Err(Error::MixedAlgebras);
        }
        if !coefficients.source().same_as(source.coefficients())
            || !coefficients.target().same_as(target.coefficients())
        {
            return Err(Error::MixedCoefficients);
        }
        let n = source.rank();
        for i in 0..n {
            let sq = images[i].mul(&images[i])?;
            if sq != target.scalar(&coefficients.apply(source.q(i))?)? {
                return Err(Error::NotCompatible(format!("image of {} squares to {sq}", source.labels()[i])));
            }
            for j in i + 1..n {
                let anti = images[i].mul(&images[j])?.add(&images[j].mul(&images[i])?)?;
                if anti != target.scalar(&coefficients.apply(source.s(i, j))?)? {
                    return Err(Error::NotCompatible(format!(
                        "images of {} and {} have anticommutator {anti}",
                        source.labels()[i],
                        source.labels()[j]
                    )));
                }
            }
        }
        Ok(AlgebraMap { source: source.clone(), target: target.clone(), coefficients, images })
    }

    pub fn identity(a: &Arc<CliffordAlgebra>) -> Result<Self> {
        let images = (0..a.rank()).map(|i| a.generator(i)).collect::<Result<_>>()?;
        Self::new(a, a, RingMap::identity(a.coefficients()), images)
    }

    pub fn source(&self) -> &Arc<CliffordAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CliffordAlgebra> {
        &self.target
    }

    pub fn images(&self) -> &[CliffordElement] {
        &self.images
    }

    pub fn apply(&self, u: &CliffordElement) -> Result<CliffordElement> {
        if !Arc::ptr_eq(u.algebra(), &self.source) {
            return Err(Error::MixedAlgebras);
        }
        let mut acc = self.target.zero();
        for (b, c) in u.terms() {
            let mut t = self.target.scalar(&self.coefficients.apply(c)?)?;
            for i in b.indices() {
                t = t.mul(&self.images[i])?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    pub fn is_multiplicative_on_basis(&self) -> Result<bool> {
        let basis = self.source.basis();
        for a in &basis {
            for b in &basis {
                let (ea, eb) = (self.source.blade(*a), self.source.blade(*b));
                if self.apply(&ea.mul(&eb)?)? != self.apply(&ea)?.mul(&self.apply(&eb)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether every word of positive length maps to zero.
    pub fn vanishes_in_positive_degrees(&self) -> Result<bool> {
        for b in self.source.basis().into_iter().filter(|b| !b.is_empty()) {
            if !self.apply(&self.source.blade(b))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The map of homology algebras induced by `I ⊆ J` and the canonical
/// coefficient map `k_* -> l_*`: `a_i ↦ φ_G(x_i)`.
pub fn induced_algebra_map(source: &HomologyAlgebra, target: &HomologyAlgebra) -> Result<AlgebraMap> {
    if !same_ring(source.spec().ring(), target.spec().ring()) {
        return Err(Error::MixedRings);
    }
    if !target.spec().quotient().kills(source.spec().sequence())? {
        return Err(Error::NotWellDefined("the source ideal is not contained in the target ideal".into()));
    }
    let g = RingMap::new(source.pi().target(), target.pi().target())?;
    let images = source.spec().sequence().iter().map(|x| target.phi(x)).collect::<Result<Vec<_>>>()?;
    AlgebraMap::new(source.algebra(), target.algebra(), g, images)
}

/// Per total degree: `⊕_i Tor_i(F, k)` against `Λ(k_* ⊗ I/I²[1])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorComparison {
    pub tor: BTreeMap<i64, ModuleSummary>,
    pub exterior: BTreeMap<i64, ModuleSummary>,
}

impl TorComparison {
    pub fn agree(&self) -> bool {
        self.tor == self.exterior
    }
}

/// Compares `Tor^{R_*}(F_*, R_*/K)` with the exterior algebra on the
/// conormal module over `R_*/K`, in total degrees `i + q` with internal
/// degree `q` up to `max_degree`.
pub fn tor_exterior_comparison(
    spec: &QuotientRingSpec,
    k: &HomogeneousIdeal,
    max_degree: i64,
) -> Result<TorComparison> {
    let ring = spec.ring();
    let j = HomogeneousIdeal::new(ring, spec.sequence().to_vec())?;
    let kq = k.quotient()?;
    let n = spec.rank();
    let degs = spec.sequence_degrees();
    let mut tor_total: BTreeMap<i64, ModuleSummary> = BTreeMap::new();
    let mut ext_total: BTreeMap<i64, ModuleSummary> = BTreeMap::new();
    for i in 0..=n {
        for (q, s) in tor(ring, &j, k, i, max_degree)?.degrees {
            let e = tor_total.entry(q + i as i64).or_default();
            *e = e.direct_sum(&s);
        }
    }
    for b in Blade::all(n) {
        let internal: i64 = b.indices().iter().map(|&i| degs[i]).sum();
        for q in ring.degrees().filter(|&q| q <= max_degree) {
            let e = q - internal;
            let s = kq.piece_summary(e);
            let t = ext_total.entry(q + b.len() as i64).or_default();
            *t = t.direct_sum(&s);
        }
    }
    let norm = |m: BTreeMap<i64, ModuleSummary>| -> BTreeMap<i64, ModuleSummary> {
        m.into_iter().map(|(d, s)| (d, s.normalized())).filter(|(_, s)| !s.is_zero()).collect()
    };
    Ok(TorComparison { tor: norm(tor_total), exterior: norm(ext_total) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conormal::ProductToken;
    use crate::ring::{Generator, GradedRing, Window};
    use crate::scalar::BaseRing;

    fn k1_p2() -> HomologyAlgebra {
        let r =
            GradedRing::new(BaseRing::IntegersLocalized(2), vec![Generator::unit("v1", 2)], Window::new(8, 2)).unwrap();
        let two = r.int(2);
        let tok = ProductToken::new(&two, r.gen("v1").unwrap()).unwrap();
        let spec = QuotientRingSpec::new(&r, vec![two], vec![tok]).unwrap();
        HomologyAlgebra::of_ring(&spec).unwrap()
    }

    #[test]
    fn blade_order() {
        let mut v = vec![Blade(0b11), Blade(0b100), Blade(0), Blade(0b1)];
        v.sort();
        assert_eq!(v, vec![Blade(0), Blade(0b1), Blade(0b100), Blade(0b11)]);
    }

    #[test]
    fn k1_square_and_presentation() {
        let h = k1_p2();
        let a = h.algebra();
        let a0 = a.generator(0).unwrap();
        assert_eq!(a0.mul(&a0).unwrap().to_string(), "v1·1");
        assert_eq!(h.presentation().text, "T(a0)/(a0^2 − v1)");
        let u = a.parse("(1 + a0)(1 - a0)").unwrap();
        assert_eq!(u, a.parse("(1 + v1)").unwrap());
        assert_eq!(u.to_string(), "(1 + v1)·1");
        let r = h.spec().ring().clone();
        assert_eq!(h.phi(&r.parse("2 + 2v1").unwrap()).unwrap().to_string(), "(1 + v1)·a0");
        assert!(matches!(a0.augmentation(), Err(Error::NotExterior(_))));
    }

    #[test]
    fn exterior_basics() {
        let r = GradedRing::new(BaseRing::Integers, vec![Generator::new("v", 2)], Window::new(12, 0)).unwrap();
        let k = QuotientRing::full(&r);
        let a = CliffordAlgebra::exterior(&k, vec!["a0".into(), "a1".into()], vec![1, 3]).unwrap();
        let (a0, a1) = (a.generator(0).unwrap(), a.generator(1).unwrap());
        assert_eq!(a1.mul(&a0).unwrap(), a0.mul(&a1).unwrap().neg());
        assert!(a0.mul(&a0).unwrap().is_zero());
        assert_eq!(a.parse("3 + a0 a1").unwrap().augmentation().unwrap(), r.int(3));
        assert_eq!(a0.antipode(), a0.neg());
        let w = a0.mul(&a1).unwrap();
        assert_eq!(w.antipode(), w);
        assert_eq!(a.presentation().text, "Λ(a0, a1)");
        assert_eq!(w.degree().unwrap(), Some(4));
    }

    #[test]
    fn tensor_signs() {
        let r = GradedRing::new(BaseRing::PrimeField(3), vec![], Window::new(0, 0)).unwrap();
        let k = QuotientRing::full(&r);
        let a = CliffordAlgebra::exterior(&k, vec!["a".into()], vec![1]).unwrap();
        let b = CliffordAlgebra::exterior(&k, vec!["b".into()], vec![1]).unwrap();
        let (ga, gb) = (a.generator(0).unwrap(), b.generator(0).unwrap());
        let a1 = TensorElement::pure(&ga, &b.one()).unwrap();
        let b1 = TensorElement::pure(&a.one(), &gb).unwrap();
        let ab = TensorElement::pure(&ga, &gb).unwrap();
        assert_eq!(a1.mul(&b1).unwrap(), ab);
        assert_eq!(b1.mul(&a1).unwrap(), TensorElement::pure(&ga.neg(), &gb).unwrap());
        assert_eq!(a1.swap().unwrap(), TensorElement::pure(&b.one(), &ga).unwrap());
        assert_eq!(ab.swap().unwrap().swap().unwrap(), ab);
        assert!(verify_kunneth(&a, &b).unwrap());
    }

    #[test]
    fn prime_power_induced_maps() {
        let r = GradedRing::new(BaseRing::Integers, vec![], Window::new(0, 0)).unwrap();
        let f = QuotientRingSpec::commutative(&r, vec![r.int(81)]).unwrap();
        let g =
            QuotientRingSpec::with_labels(&r, vec![r.int(27)], vec![ProductToken::commutative(&r)], vec!["b".into()])
                .unwrap();
        for (k, vanishes) in [(3, true), (9, false)] {
            let kq = QuotientRing::new(&r, vec![r.int(k)]).unwrap();
            let hf = HomologyAlgebra::new(&f, &RingMap::new(f.quotient(), &kq).unwrap()).unwrap();
            let hg = HomologyAlgebra::new(&g, &RingMap::new(g.quotient(), &kq).unwrap()).unwrap();
            let m = induced_algebra_map(&hf, &hg).unwrap();
            assert_eq!(m.vanishes_in_positive_degrees().unwrap(), vanishes);
            if !vanishes {
                assert_eq!(m.images()[0].to_string(), "3·b");
            }
            assert!(m.is_multiplicative_on_basis().unwrap());
        }
    }

    #[test]
    fn tor_matches_exterior_for_p4() {
        let r = GradedRing::new(BaseRing::Integers, vec![], Window::new(0, 0)).unwrap();
        let f = QuotientRingSpec::commutative(&r, vec![r.int(16)]).unwrap();
        for k in [2, 4] {
            let kid = HomogeneousIdeal::new(&r, vec![r.int(k)]).unwrap();
            let cmp = tor_exterior_comparison(&f, &kid, 0).unwrap();
            assert!(cmp.agree(), "{cmp:?}");
        }
    }
}
