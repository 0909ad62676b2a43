//! Graded commutative rings concentrated in even degrees.
//!
//! A [`GradedRing`] is a (Laurent) polynomial ring over a [`BaseRing`] modulo
//! an optional homogeneous relation ideal. All computations take place inside
//! a finite [`Window`]: total degree at most `D`, exponents of invertible
//! generators in `[-L, L]`. A polynomial generator of degree 0 counts as
//! weight 2 towards `D`, so that every homogeneous piece is finitely generated
//! over the base ring.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{self, Evaluate, Expr};
use crate::linalg::{Domain, Lattice, Vector};
use crate::scalar::{BaseRing, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub invertible: bool,
}

impl Generator {
    pub fn new(name: &str, degree: i64) -> Self {
        Generator { name: name.to_string(), degree, invertible: false }
    }

    pub fn unit(name: &str, degree: i64) -> Self {
        Generator { name: name.to_string(), degree, invertible: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    /// Maximal total degree `D`.
    pub degree: i64,
    /// Maximal absolute exponent `L` of an invertible generator.
    pub laurent: i64,
}

impl Window {
    pub fn new(degree: i64, laurent: i64) -> Self {
        Window { degree, laurent }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window { degree: 24, laurent: 2 }
    }
}

/// Exponent vector, one entry per generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

pub type Terms = BTreeMap<Monomial, Scalar>;

/// The monomials of one degree, in elimination order (descending lex), so
/// that normal forms are expressed through the smallest monomials.
#[derive(Debug, Clone)]
pub struct Piece {
    pub degree: i64,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl Piece {
    fn new(degree: i64, mut monomials: Vec<Monomial>) -> Self {
        monomials.sort_by(|a, b| b.cmp(a));
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Piece { degree, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a homogeneous term map, or `None` if a monomial lies
    /// outside this piece.
    pub fn vector(&self, terms: &Terms) -> Option<Vector> {
        let mut v = vec![Scalar::zero(); self.len()];
        for (m, c) in terms {
            v[self.position(m)?] = c.clone();
        }
        Some(v)
    }

    pub fn terms(&self, v: &[Scalar]) -> Terms {
        self.monomials.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m.clone(), c.clone())).collect()
    }
}

#[derive(Debug)]
pub struct GradedRing {
    base: BaseRing,
    generators: Vec<Generator>,
    relations: Vec<Terms>,
    window: Window,
    pieces: BTreeMap<i64, Piece>,
    zero_lattices: BTreeMap<i64, Lattice>,
}

impl PartialEq for GradedRing {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.generators == other.generators
            && self.relations == other.relations
            && self.window == other.window
    }
}

pub fn same_ring(a: &Arc<GradedRing>, b: &Arc<GradedRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

impl GradedRing {
    pub fn new(base: BaseRing, generators: Vec<Generator>, window: Window) -> Result<Arc<GradedRing>> {
        Self::with_relations(base, generators, Vec::new(), window)
    }

    /// Builds a ring whose relations are given as expressions in the
    /// generators.
    pub fn parse_with_relations(
        base: BaseRing,
        generators: Vec<Generator>,
        relations: &[&str],
        window: Window,
    ) -> Result<Arc<GradedRing>> {
        let free = Self::new(base, generators.clone(), window)?;
        let rels = relations.iter().map(|r| free.parse(r).map(|e| e.terms)).collect::<Result<Vec<_>>>()?;
        Self::with_relations(base, generators, rels, window)
    }

    pub fn with_relations(
        base: BaseRing,
        generators: Vec<Generator>,
        relations: Vec<Terms>,
        window: Window,
    ) -> Result<Arc<GradedRing>> {
        base.validate()?;
        if window.degree < 0 || window.laurent < 0 {
            return Err(Error::InvalidRing("window bounds must be nonnegative".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if !valid_name(&g.name) {
                return Err(Error::InvalidRing(format!("invalid generator name `{}`", g.name)));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidRing(format!("duplicate generator `{}`", g.name)));
            }
            if g.degree % 2 != 0 {
                return Err(Error::OddDegree(g.degree));
            }
            if g.degree < 0 {
                return Err(Error::InvalidRing(format!("generator `{}` has negative degree", g.name)));
            }
        }
        let mut ring = GradedRing {
            base,
            generators,
            relations: Vec::new(),
            window,
            pieces: BTreeMap::new(),
            zero_lattices: BTreeMap::new(),
        };
        let mut by_degree: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
        for m in ring.enumerate_window() {
            by_degree.entry(ring.monomial_degree(&m)).or_default().push(m);
        }
        ring.pieces = by_degree.into_iter().map(|(d, ms)| (d, Piece::new(d, ms))).collect();

        let mut normalized = Vec::new();
        for rel in relations {
            let mut t = Terms::new();
            for (m, c) in rel {
                if m.0.len() != ring.generators.len() || !ring.in_window(&m) {
                    return Err(Error::WindowOverflow("relation leaves the window".into()));
                }
                let c = base.normalize(&c)?;
                if !c.is_zero() {
                    t.insert(m, c);
                }
            }
            let degs: Vec<i64> = t.keys().map(|m| ring.monomial_degree(m)).collect();
            if let Some(&d) = degs.first() {
                if degs.iter().any(|&e| e != d) {
                    return Err(Error::NonHomogeneous);
                }
                if d % 2 != 0 {
                    return Err(Error::OddDegree(d));
                }
                normalized.push(t);
            }
        }
        ring.relations = normalized;
        let dom = Domain::of(&base);
        let mut zero_lattices = BTreeMap::new();
        for (&d, piece) in &ring.pieces {
            let mut rows = ring.multiples(&ring.relations, piece);
            if let Some(m) = base.modulus() {
                for i in 0..piece.len() {
                    let mut r = vec![Scalar::zero(); piece.len()];
                    r[i] = Scalar::from_integer(m.clone());
                    rows.push(r);
                }
            }
            zero_lattices.insert(d, Lattice::span(&dom, piece.len(), &rows));
        }
        ring.zero_lattices = zero_lattices;
        Ok(Arc::new(ring))
    }

    pub fn base(&self) -> BaseRing {
        self.base
    }

    pub fn domain(&self) -> Domain {
        Domain::of(&self.base)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Terms] {
        &self.relations
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        m.0.iter().zip(&self.generators).map(|(&e, g)| e as i64 * g.degree).sum()
    }

    pub fn in_window(&self, m: &Monomial) -> bool {
        let mut weight = 0i64;
        for (&e, g) in m.0.iter().zip(&self.generators) {
            let e = e as i64;
            if g.invertible {
                if e.abs() > self.window.laurent {
                    return false;
                }
                weight += e * g.degree;
            } else {
                if e < 0 {
                    return false;
                }
                weight += e * g.degree.max(2);
            }
        }
        weight <= self.window.degree && self.monomial_degree(m) <= self.window.degree
    }

    fn enumerate_window(&self) -> Vec<Monomial> {
        let w = self.window;
        let neg: i64 = self.generators.iter().filter(|g| g.invertible).map(|g| g.degree * w.laurent).sum();
        let ranges: Vec<(i64, i64)> = self
            .generators
            .iter()
            .map(|g| if g.invertible { (-w.laurent, w.laurent) } else { (0, (w.degree + neg) / g.degree.max(2)) })
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![0i32; self.generators.len()];
        self.enumerate_rec(0, &ranges, &mut cur, &mut out);
        out
    }

    fn enumerate_rec(&self, i: usize, ranges: &[(i64, i64)], cur: &mut Vec<i32>, out: &mut Vec<Monomial>) {
        if i == ranges.len() {
            let m = Monomial(cur.clone());
            if self.in_window(&m) {
                out.push(m);
            }
            return;
        }
        for e in ranges[i].0..=ranges[i].1 {
            cur[i] = e as i32;
            self.enumerate_rec(i + 1, ranges, cur, out);
        }
        cur[i] = 0;
    }

    /// Degrees that carry at least one window monomial.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.pieces.keys().copied()
    }

    pub fn piece(&self, d: i64) -> Option<&Piece> {
        self.pieces.get(&d)
    }

    /// The submodule of the free piece that is zero in the ring (relations
    /// and, over `Z/m`, the modulus).
    pub fn zero_lattice(&self, d: i64) -> Option<&Lattice> {
        self.zero_lattices.get(&d)
    }

    /// Monomials of total degree `d` in ascending lexicographic order.
    pub fn degree_basis(&self, d: i64) -> Result<Vec<Monomial>> {
        if d > self.window.degree {
            return Err(Error::WindowOverflow(format!("degree {d} exceeds D = {}", self.window.degree)));
        }
        let mut ms = self.piece(d).map(|p| p.monomials().to_vec()).unwrap_or_default();
        ms.sort();
        Ok(ms)
    }

    /// Rows `m * g` for homogeneous `g` and window monomials `m`, restricted
    /// to products that land inside `piece`.
    pub fn multiples(&self, gens: &[Terms], piece: &Piece) -> Vec<Vector> {
        let mut rows = Vec::new();
        for g in gens {
            let Some(gd) = g.keys().next().map(|m| self.monomial_degree(m)) else { continue };
            let Some(src) = self.piece(piece.degree - gd) else { continue };
            for m in src.monomials() {
                let prod: Terms = g.iter().map(|(gm, c)| (gm.mul(m), c.clone())).collect();
                if let Some(v) = piece.vector(&prod) {
                    rows.push(v);
                }
            }
        }
        rows
    }

    fn check_window(&self, m: &Monomial) -> Result<()> {
        if self.in_window(m) {
            Ok(())
        } else {
            Err(Error::WindowOverflow(format!(
                "monomial {} (degree {}) is outside D = {}, L = {}",
                self.render_monomial(m),
                self.monomial_degree(m),
                self.window.degree,
                self.window.laurent
            )))
        }
    }

    /// Reduces each homogeneous component modulo the ring relations.
    fn reduce_terms(&self, terms: Terms) -> Terms {
        if self.relations.is_empty() {
            return terms;
        }
        let mut by_deg: BTreeMap<i64, Terms> = BTreeMap::new();
        for (m, c) in terms {
            by_deg.entry(self.monomial_degree(&m)).or_default().insert(m, c);
        }
        let mut out = Terms::new();
        for (d, t) in by_deg {
            let piece = self.piece(d).expect("window monomials have a piece");
            let v = piece.vector(&t).expect("terms inside piece");
            let v = self.zero_lattice(d).expect("lattice per piece").reduce(&v);
            out.extend(piece.terms(&v));
        }
        out
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> =
            m.0.iter()
                .zip(&self.generators)
                .filter(|(&e, _)| e != 0)
                .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
                .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }
}

/// Convenience constructors that need the shared handle.
#[allow(clippy::wrong_self_convention)]
pub trait RingHandle {
    fn zero(&self) -> RingElement;
    fn one(&self) -> RingElement;
    fn constant(&self, c: &Scalar) -> Result<RingElement>;
    fn int(&self, n: i64) -> RingElement;
    fn gen(&self, name: &str) -> Result<RingElement>;
    fn gen_at(&self, i: usize) -> RingElement;
    fn monomial(&self, m: Monomial, c: Scalar) -> Result<RingElement>;
    fn from_terms(&self, terms: Terms) -> Result<RingElement>;
    fn parse(&self, text: &str) -> Result<RingElement>;
    fn eval_expr(&self, e: &Expr) -> Result<RingElement>;
}

impl RingHandle for Arc<GradedRing> {
    fn zero(&self) -> RingElement {
        RingElement { ring: self.clone(), terms: Terms::new() }
    }

    fn one(&self) -> RingElement {
        self.int(1)
    }

    fn constant(&self, c: &Scalar) -> Result<RingElement> {
        self.monomial(Monomial::one(self.ngens()), c.clone())
    }

    fn int(&self, n: i64) -> RingElement {
        self.constant(&self.base.from_int(n)).expect("constants are in the window")
    }

    fn gen(&self, name: &str) -> Result<RingElement> {
        let i = self.generator_index(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
        Ok(self.gen_at(i))
    }

    fn gen_at(&self, i: usize) -> RingElement {
        let mut e = vec![0; self.ngens()];
        e[i] = 1;
        self.monomial(Monomial(e), Scalar::one()).expect("generator inside window")
    }

    fn monomial(&self, m: Monomial, c: Scalar) -> Result<RingElement> {
        let mut t = Terms::new();
        t.insert(m, c);
        self.from_terms(t)
    }

    fn from_terms(&self, terms: Terms) -> Result<RingElement> {
        let mut t = Terms::new();
        for (m, c) in terms {
            if m.0.len() != self.ngens() {
                return Err(Error::InvalidRing("exponent vector has the wrong length".into()));
            }
            let c = self.base.normalize(&c)?;
            if c.is_zero() {
                continue;
            }
            self.check_window(&m)?;
            t.insert(m, c);
        }
        Ok(RingElement { ring: self.clone(), terms: self.reduce_terms(t) })
    }

    fn parse(&self, text: &str) -> Result<RingElement> {
        self.eval_expr(&expr::parse(text)?)
    }

    fn eval_expr(&self, e: &Expr) -> Result<RingElement> {
        expr::eval(&RingEval(self), e)
    }
}

struct RingEval<'a>(&'a Arc<GradedRing>);

impl Evaluate for RingEval<'_> {
    type Value = RingElement;

    fn number(&self, q: &Scalar) -> Result<RingElement> {
        self.0.constant(q)
    }

    fn name(&self, name: &str) -> Result<RingElement> {
        self.0.gen(name)
    }

    fn add(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        a.add(b)
    }

    fn sub(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        a.sub(b)
    }

    fn mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        a.mul(b)
    }

    fn neg(&self, a: &RingElement) -> Result<RingElement> {
        Ok(a.neg())
    }

    fn pow(&self, base: &Expr, e: i64) -> Result<RingElement> {
        if let Expr::Name(n) = base {
            if let Some(i) = self.0.generator_index(n) {
                if e < 0 && !self.0.generators[i].invertible {
                    return Err(Error::Parse { column: 0, message: format!("`{n}` is not invertible") });
                }
                let mut m = vec![0; self.0.ngens()];
                m[i] = e as i32;
                return self.0.monomial(Monomial(m), Scalar::one());
            }
        }
        expr::pow_by_mul(self, self.0.one(), base, e)
    }
}

/// A sparse element of a [`GradedRing`].
#[derive(Clone)]
pub struct RingElement {
    ring: Arc<GradedRing>,
    terms: Terms,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for RingElement {}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({self})")
    }
}

impl RingElement {
    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(m, c)| m.is_one() && c.is_one())
    }

    /// `Ok(None)` for zero, `Ok(Some(d))` when homogeneous of degree `d`.
    pub fn degree(&self) -> Result<Option<i64>> {
        let mut it = self.terms.keys().map(|m| self.ring.monomial_degree(m));
        let Some(d) = it.next() else { return Ok(None) };
        if it.all(|e| e == d) {
            Ok(Some(d))
        } else {
            Err(Error::NonHomogeneous)
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree().is_ok()
    }

    pub fn components(&self) -> BTreeMap<i64, RingElement> {
        let mut out: BTreeMap<i64, Terms> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(self.ring.monomial_degree(m)).or_default().insert(m.clone(), c.clone());
        }
        out.into_iter().map(|(d, t)| (d, RingElement { ring: self.ring.clone(), terms: t })).collect()
    }

    fn check_same(&self, other: &RingElement) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::MixedRings)
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.check_same(other)?;
        let base = self.ring.base;
        let mut t = self.terms.clone();
        for (m, c) in &other.terms {
            let s = match t.get(m) {
                Some(a) => base.add(a, c),
                None => c.clone(),
            };
            if s.is_zero() {
                t.remove(m);
            } else {
                t.insert(m.clone(), s);
            }
        }
        Ok(RingElement { ring: self.ring.clone(), terms: self.ring.reduce_terms(t) })
    }

    pub fn neg(&self) -> RingElement {
        let base = self.ring.base;
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), base.neg(c))).collect();
        RingElement { ring: self.ring.clone(), terms }
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Result<RingElement> {
        let c = self.ring.base.normalize(c)?;
        let base = self.ring.base;
        let terms =
            self.terms.iter().map(|(m, a)| (m.clone(), base.mul(a, &c))).filter(|(_, a)| !a.is_zero()).collect();
        Ok(RingElement { ring: self.ring.clone(), terms: self.ring.reduce_terms(terms) })
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check_same(other)?;
        let base = self.ring.base;
        let mut t = Terms::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                self.ring.check_window(&m)?;
                let c = base.mul(ca, cb);
                let s = match t.get(&m) {
                    Some(a) => base.add(a, &c),
                    None => c,
                };
                if s.is_zero() {
                    t.remove(&m);
                } else {
                    t.insert(m, s);
                }
            }
        }
        Ok(RingElement { ring: self.ring.clone(), terms: self.ring.reduce_terms(t) })
    }

    pub fn pow(&self, e: u32) -> Result<RingElement> {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The constant term, if the element is a constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.iter().next().filter(|(m, _)| m.is_one()).map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    /// Whether rendering needs parentheses when used as a factor.
    pub fn is_compound(&self) -> bool {
        self.terms.len() > 1
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let base = self.ring.base;
        // Ascending degree; descending lex order within a degree.
        let mut terms: Vec<(&Monomial, &Scalar)> = self.terms.iter().rev().collect();
        terms.sort_by_key(|(m, _)| self.ring.monomial_degree(m));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let negative = c < &Scalar::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            let sign = match (k, negative) {
                (0, false) => "",
                (0, true) => "−",
                (_, false) => " + ",
                (_, true) => " − ",
            };
            let body = if m.is_one() {
                base.render(&mag)
            } else if mag.is_one() {
                self.ring.render_monomial(m)
            } else {
                format!("{}·{}", base.render(&mag), self.ring.render_monomial(m))
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}
