//! Degreewise linear algebra over principal ideal domains.
//!
//! Every homogeneous piece of a ring is a finitely generated module over its
//! base ring. Submodules are kept in a canonical echelon (Hermite) form so
//! that reduction modulo a submodule yields a unique coset representative.
//! `Z/m` is handled by lifting to `Z` and adding `m` times the unit vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::scalar::{big, int_valuation, mod_inverse, BaseRing, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    Integers,
    /// `F_p`, or the rationals when `p == 0`.
    Field(BigInt),
    /// The discrete valuation ring `Z_(p)`.
    Dvr(BigInt),
}

impl Domain {
    pub fn rationals() -> Self {
        Domain::Field(BigInt::zero())
    }

    pub fn of(base: &BaseRing) -> Self {
        match *base {
            BaseRing::Integers | BaseRing::IntegersMod(_) => Domain::Integers,
            BaseRing::PrimeField(p) => Domain::Field(BigInt::from(p)),
            BaseRing::IntegersLocalized(p) => Domain::Dvr(BigInt::from(p)),
        }
    }

    fn fix(&self, a: Scalar) -> Scalar {
        match self {
            Domain::Field(p) if !p.is_zero() => {
                let inv = mod_inverse(a.denom(), p).expect("denominator invertible mod p");
                big((a.numer() * inv).mod_floor(p))
            }
            _ => a,
        }
    }

    fn norm(&self, a: &Scalar) -> BigInt {
        match self {
            Domain::Integers => a.numer().abs(),
            Domain::Field(_) => BigInt::zero(),
            Domain::Dvr(p) => BigInt::from(int_valuation(a.numer(), p)),
        }
    }

    fn div_exact(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Domain::Field(p) if !p.is_zero() => {
                let inv = mod_inverse(b.numer(), p).expect("nonzero element of F_p");
                self.fix(a * big(inv))
            }
            _ => a / b,
        }
    }

    /// Euclidean division step used while clearing a column.
    fn quo_rem(&self, a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        match self {
            Domain::Integers => {
                let q = a.numer().div_floor(b.numer());
                let r = a.numer() - &q * b.numer();
                (big(q), big(r))
            }
            Domain::Field(_) => (self.div_exact(a, b), Scalar::zero()),
            Domain::Dvr(_) => {
                if self.norm(a) >= self.norm(b) {
                    (a / b, Scalar::zero())
                } else {
                    (Scalar::zero(), a.clone())
                }
            }
        }
    }

    /// The unit `u` such that `a / u` is the canonical associate of `a`.
    fn unit_part(&self, a: &Scalar) -> Scalar {
        match self {
            Domain::Integers => {
                if a.is_negative() {
                    -Scalar::one()
                } else {
                    Scalar::one()
                }
            }
            Domain::Field(_) => a.clone(),
            Domain::Dvr(p) => {
                let v = int_valuation(a.numer(), p);
                a / big(Pow::pow(p, v))
            }
        }
    }

    /// Canonical remainder of `a` modulo a normalized pivot.
    fn residue(&self, a: &Scalar, pivot: &Scalar) -> (Scalar, Scalar) {
        match self {
            Domain::Integers => {
                let q = a.numer().div_floor(pivot.numer());
                let r = a.numer() - &q * pivot.numer();
                (big(q), big(r))
            }
            Domain::Field(_) => (self.div_exact(a, pivot), Scalar::zero()),
            Domain::Dvr(_) => {
                // pivot = p^k, and Z_(p)/p^k = Z/p^k
                let m = pivot.numer();
                let inv = mod_inverse(a.denom(), m).unwrap_or_else(BigInt::one);
                let r = if m.is_one() { BigInt::zero() } else { (a.numer() * inv).mod_floor(m) };
                let r = big(r);
                ((a - &r) / pivot, r)
            }
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match self {
            Domain::Integers => a.numer().abs().is_one(),
            Domain::Field(_) => !a.is_zero(),
            Domain::Dvr(p) => !a.is_zero() && int_valuation(a.numer(), p) == 0,
        }
    }

    fn canonical(&self, a: &Scalar) -> Scalar {
        if a.is_zero() {
            return a.clone();
        }
        self.div_exact(a, &self.unit_part(a))
    }

    fn gcd_lcm(&self, a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        match self {
            Domain::Integers => {
                let (x, y) = (a.numer(), b.numer());
                (big(x.gcd(y)), big(x.lcm(y)))
            }
            _ => {
                if self.norm(a) <= self.norm(b) {
                    (a.clone(), b.clone())
                } else {
                    (b.clone(), a.clone())
                }
            }
        }
    }

    fn axpy(&self, target: &mut [Scalar], q: &Scalar, source: &[Scalar]) {
        if q.is_zero() {
            return;
        }
        for (t, s) in target.iter_mut().zip(source) {
            if !s.is_zero() {
                *t = self.fix(&*t - q * s);
            }
        }
    }

    fn scale(&self, row: &mut [Scalar], u: &Scalar) {
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = self.fix(&*x * u);
            }
        }
    }

    fn recip_unit(&self, u: &Scalar) -> Scalar {
        self.div_exact(&Scalar::one(), u)
    }
}

/// Result of row-reducing a list of generators.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vector>,
    pub pivots: Vec<usize>,
    /// `transform[i]` expresses `rows[i]` in terms of the generators.
    pub transform: Vec<Vector>,
    /// Relations among the generators (a basis of the left kernel).
    pub kernel: Vec<Vector>,
}

pub fn echelon(dom: &Domain, ncols: usize, gens: &[Vector], track: bool) -> Echelon {
    let n = gens.len();
    let mut m: Vec<Vector> = gens.iter().map(|g| g.iter().map(|x| dom.fix(x.clone())).collect()).collect();
    let mut u: Vec<Vector> = if track {
        (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect()
    } else {
        Vec::new()
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == n {
            break;
        }
        loop {
            let best = (r..n).filter(|&i| !m[i][col].is_zero()).min_by_key(|&i| dom.norm(&m[i][col]));
            let Some(best) = best else { break };
            m.swap(r, best);
            if track {
                u.swap(r, best);
            }
            let mut clean = true;
            for k in r + 1..n {
                if m[k][col].is_zero() {
                    continue;
                }
                let (q, rem) = dom.quo_rem(&m[k][col], &m[r][col]);
                let (head, tail) = m.split_at_mut(k);
                dom.axpy(&mut tail[0], &q, &head[r]);
                if track {
                    let (uh, ut) = u.split_at_mut(k);
                    dom.axpy(&mut ut[0], &q, &uh[r]);
                }
                if !rem.is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r < n && !m[r][col].is_zero() {
            let unit = dom.unit_part(&m[r][col]);
            let inv = dom.recip_unit(&unit);
            dom.scale(&mut m[r], &inv);
            if track {
                dom.scale(&mut u[r], &inv);
            }
            for k in 0..r {
                if m[k][col].is_zero() {
                    continue;
                }
                let (q, _) = dom.residue(&m[k][col], &m[r][col]);
                let (head, tail) = m.split_at_mut(r);
                dom.axpy(&mut head[k], &q, &tail[0]);
                if track {
                    let (uh, ut) = u.split_at_mut(r);
                    dom.axpy(&mut uh[k], &q, &ut[0]);
                }
            }
            pivots.push(col);
            r += 1;
        }
    }
    let kernel = if track { u.split_off(r) } else { Vec::new() };
    m.truncate(r);
    Echelon { rows: m, pivots, transform: u, kernel }
}

/// A submodule of `D^n` in canonical echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dom: Domain,
    ncols: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(dom: Domain, ncols: usize) -> Self {
        Lattice { dom, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn span(dom: &Domain, ncols: usize, gens: &[Vector]) -> Self {
        let e = echelon(dom, ncols, gens, false);
        Lattice { dom: dom.clone(), ncols, rows: e.rows, pivots: e.pivots }
    }

    pub fn domain(&self) -> &Domain {
        &self.dom
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical representative of `v` modulo this submodule.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut v: Vector = v.iter().map(|x| self.dom.fix(x.clone())).collect();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            if v[col].is_zero() {
                continue;
            }
            let (q, _) = self.dom.residue(&v[col], &row[col]);
            self.dom.axpy(&mut v, &q, row);
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` with respect to the echelon rows, if `v` lies in
    /// the submodule.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        let mut v: Vector = v.iter().map(|x| self.dom.fix(x.clone())).collect();
        let mut coords = vec![Scalar::zero(); self.rows.len()];
        for (i, (row, &col)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if v[col].is_zero() {
                continue;
            }
            let (q, r) = self.dom.quo_rem(&v[col], &row[col]);
            if !r.is_zero() {
                return None;
            }
            self.dom.axpy(&mut v, &q, row);
            coords[i] = q;
        }
        if v.iter().all(Zero::is_zero) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn is_subset_of(&self, other: &Lattice) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let gens: Vec<Vector> = self.rows.iter().chain(&other.rows).cloned().collect();
        Lattice::span(&self.dom, self.ncols, &gens)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let gens: Vec<Vector> = self.rows.iter().chain(&other.rows).cloned().collect();
        let e = echelon(&self.dom, self.ncols, &gens, true);
        let a = self.rows.len();
        let inter: Vec<Vector> = e.kernel.iter().map(|k| combine(&self.dom, self.ncols, &k[..a], &self.rows)).collect();
        Lattice::span(&self.dom, self.ncols, &inter)
    }

    /// Structure of `self / sub`; `sub` must be contained in `self`.
    pub fn quotient_by(&self, sub: &Lattice) -> ModuleSummary {
        let coords: Vec<Vector> =
            sub.rows.iter().map(|r| self.coordinates(r).expect("quotient_by: submodule not contained")).collect();
        let diag = smith_diagonal(&self.dom, self.rank(), &coords);
        let torsion: Vec<BigInt> = diag.iter().filter(|d| !self.dom.is_unit(d)).map(|d| d.numer().abs()).collect();
        ModuleSummary { free_rank: self.rank() - diag.len(), torsion }
    }
}

/// `sum_i coeffs[i] * rows[i]`.
pub fn combine(dom: &Domain, ncols: usize, coeffs: &[Scalar], rows: &[Vector]) -> Vector {
    let mut out = vec![Scalar::zero(); ncols];
    for (c, r) in coeffs.iter().zip(rows) {
        if !c.is_zero() {
            dom.axpy(&mut out, &-c.clone(), r);
        }
    }
    out
}

/// Coefficients `c` with `sum_i c[i] * gens[i] = v`, if `v` is in the span.
pub fn solve(dom: &Domain, ncols: usize, gens: &[Vector], v: &[Scalar]) -> Option<Vector> {
    let e = echelon(dom, ncols, gens, true);
    let lat = Lattice { dom: dom.clone(), ncols, rows: e.rows, pivots: e.pivots };
    let coords = lat.coordinates(v)?;
    Some(combine(dom, gens.len(), &coords, &e.transform))
}

/// Nonzero diagonal entries of a Smith normal form, as a divisibility chain.
pub fn smith_diagonal(dom: &Domain, ncols: usize, rows: &[Vector]) -> Vec<Scalar> {
    let mut m: Vec<Vector> = echelon(dom, ncols, rows, false).rows;
    let mut width = ncols;
    loop {
        let is_monomial = m.iter().all(|r| r.iter().filter(|x| !x.is_zero()).count() <= 1)
            && (0..width).all(|c| m.iter().filter(|r| !r[c].is_zero()).count() <= 1);
        if is_monomial {
            break;
        }
        let t = transpose(&m, width);
        width = m.len();
        m = echelon(dom, width, &t, false).rows;
    }
    let mut diag: Vec<Scalar> =
        m.iter().filter_map(|r| r.iter().find(|x| !x.is_zero()).map(|x| dom.canonical(x))).collect();
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let (g, l) = dom.gcd_lcm(&diag[i], &diag[j]);
            diag[i] = dom.canonical(&g);
            diag[j] = dom.canonical(&l);
        }
    }
    diag
}

fn transpose(m: &[Vector], ncols: usize) -> Vec<Vector> {
    (0..ncols).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect()
}

/// Isomorphism type of a finitely generated module over the base domain:
/// free rank plus the non-unit invariant factors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModuleSummary {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl ModuleSummary {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Minimal number of generators.
    pub fn generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn direct_sum(&self, other: &ModuleSummary) -> ModuleSummary {
        let mut torsion: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        torsion.sort();
        ModuleSummary { free_rank: self.free_rank + other.free_rank, torsion }
    }

    /// Elementary-divisor form, so that direct sums compare correctly.
    pub fn normalized(&self) -> ModuleSummary {
        let mut parts = Vec::new();
        for t in &self.torsion {
            let mut n = t.clone();
            let mut d = BigInt::from(2);
            while &d * &d <= n {
                let mut pk = BigInt::one();
                while (&n % &d).is_zero() {
                    n /= &d;
                    pk *= &d;
                }
                if !pk.is_one() {
                    parts.push(pk);
                }
                d += 1;
            }
            if !n.is_one() {
                parts.push(n);
            }
        }
        parts.sort();
        ModuleSummary { free_rank: self.free_rank, torsion: parts }
    }

    pub fn render(&self, base: &str) -> String {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push(base.to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("{base}^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

impl fmt::Display for ModuleSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("free"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = Lattice::span(&Domain::Integers, 2, &[v(&[2, 1]), v(&[0, 3])]);
        let b = Lattice::span(&Domain::Integers, 2, &[v(&[2, 4]), v(&[2, 1]), v(&[4, 5])]);
        assert_eq!(a, b);
        assert_eq!(a.reduce(&v(&[3, 7])), a.reduce(&v(&[1, 3])));
        assert!(a.contains(&v(&[4, 2])));
        assert!(!a.contains(&v(&[1, 0])));
    }

    #[test]
    fn kernel_of_generators() {
        let gens = vec![v(&[1, 2]), v(&[2, 4]), v(&[0, 1])];
        let e = echelon(&Domain::Integers, 2, &gens, true);
        assert_eq!(e.kernel.len(), 1);
        let k = &e.kernel[0];
        let s = combine(&Domain::Integers, 2, k, &gens);
        assert!(s.iter().all(Zero::is_zero));
        for (row, t) in e.rows.iter().zip(&e.transform) {
            assert_eq!(&combine(&Domain::Integers, 2, t, &gens), row);
        }
    }

    #[test]
    fn smith_invariants() {
        let sup = Lattice::span(&Domain::Integers, 2, &[v(&[1, 0]), v(&[0, 1])]);
        let sub = Lattice::span(&Domain::Integers, 2, &[v(&[2, 0]), v(&[0, 3])]);
        let s = sup.quotient_by(&sub);
        assert_eq!(s, ModuleSummary { free_rank: 0, torsion: vec![BigInt::from(6)] });
        let sub = Lattice::span(&Domain::Integers, 2, &[v(&[4, 6])]);
        let s = sup.quotient_by(&sub);
        assert_eq!(s, ModuleSummary { free_rank: 1, torsion: vec![BigInt::from(2)] });
    }

    #[test]
    fn dvr_reduction() {
        let dom = Domain::Dvr(BigInt::from(2));
        let l = Lattice::span(&dom, 1, &[v(&[12])]);
        assert_eq!(l.rows()[0][0], int(4));
        let half = Scalar::new(BigInt::from(1), BigInt::from(3));
        // 1/3 = 3 mod 4 in Z_(2)
        assert_eq!(l.reduce(&[half]), v(&[3]));
        let sup = Lattice::span(&dom, 1, &[v(&[1])]);
        assert_eq!(sup.quotient_by(&l).torsion, vec![BigInt::from(4)]);
    }

    #[test]
    fn intersection() {
        let a = Lattice::span(&Domain::Integers, 1, &[v(&[4])]);
        let b = Lattice::span(&Domain::Integers, 1, &[v(&[6])]);
        assert_eq!(a.intersect(&b), Lattice::span(&Domain::Integers, 1, &[v(&[12])]));
        let f = Domain::Field(BigInt::from(2));
        let a = Lattice::span(&f, 3, &[v(&[1, 1, 0]), v(&[0, 0, 1])]);
        let b = Lattice::span(&f, 3, &[v(&[1, 0, 0]), v(&[0, 1, 1])]);
        assert_eq!(a.intersect(&b).rank(), 1);
        assert!(a.intersect(&b).contains(&v(&[1, 1, 1])));
    }
}
