//! Base coefficient rings.
//!
//! Every scalar is stored as a [`BigRational`] in a canonical form fixed by
//! its [`BaseRing`]: integers for `Z`, residues `0..p` for `F_p`, residues
//! `0..m` for `Z/m`, and reduced fractions with denominator prime to `p` for
//! `Z_(p)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Scalar {
    BigRational::from_integer(n)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// `p`-adic valuation of a nonzero integer.
pub(crate) fn int_valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integers,
    PrimeField(u64),
    IntegersMod(u64),
    /// The integers localized at a prime `p`.
    IntegersLocalized(u64),
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "Z"),
            BaseRing::PrimeField(p) => write!(f, "F_{p}"),
            BaseRing::IntegersMod(m) => write!(f, "Z/{m}"),
            BaseRing::IntegersLocalized(p) => write!(f, "Z_({p})"),
        }
    }
}

/// Accepts `Z`, `F_p`, `GF(p)`, `Z/m` and `Z_(p)`.
impl std::str::FromStr for BaseRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::InvalidBaseRing(format!("cannot read `{s}`")));
        let base = if s == "Z" {
            BaseRing::Integers
        } else if let Some(t) = s.strip_prefix("F_") {
            BaseRing::PrimeField(num(t)?)
        } else if let Some(t) = s.strip_prefix("GF(").and_then(|t| t.strip_suffix(')')) {
            BaseRing::PrimeField(num(t)?)
        } else if let Some(t) = s.strip_prefix("Z/") {
            BaseRing::IntegersMod(num(t)?)
        } else if let Some(t) = s.strip_prefix("Z_(").and_then(|t| t.strip_suffix(')')) {
            BaseRing::IntegersLocalized(num(t)?)
        } else {
            return Err(Error::InvalidBaseRing(format!("cannot read `{s}`")));
        };
        base.validate()?;
        Ok(base)
    }
}

impl BaseRing {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BaseRing::Integers => Ok(()),
            BaseRing::PrimeField(p) | BaseRing::IntegersLocalized(p) if !is_prime(p) => {
                Err(Error::InvalidBaseRing(format!("{p} is not prime")))
            }
            BaseRing::IntegersMod(m) if m < 2 => Err(Error::InvalidBaseRing(format!("modulus {m} must be at least 2"))),
            _ => Ok(()),
        }
    }

    pub fn is_domain(&self) -> bool {
        match *self {
            BaseRing::IntegersMod(m) => is_prime(m),
            _ => true,
        }
    }

    /// The modulus that is added to every lattice when the base ring is `Z/m`.
    pub fn modulus(&self) -> Option<BigInt> {
        match *self {
            BaseRing::IntegersMod(m) => Some(BigInt::from(m)),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            BaseRing::Integers | BaseRing::IntegersLocalized(_) => 0,
            BaseRing::PrimeField(p) => p,
            BaseRing::IntegersMod(m) => m,
        }
    }

    /// Brings a rational number into canonical form, or fails if it does not
    /// represent an element of this ring.
    pub fn normalize(&self, x: &Scalar) -> Result<Scalar> {
        let bad = || Error::NotInBase(x.to_string(), self.to_string());
        match *self {
            BaseRing::Integers => {
                if x.is_integer() {
                    Ok(x.clone())
                } else {
                    Err(bad())
                }
            }
            BaseRing::PrimeField(m) | BaseRing::IntegersMod(m) => {
                let m = BigInt::from(m);
                let inv = mod_inverse(x.denom(), &m).ok_or_else(bad)?;
                Ok(big((x.numer() * inv).mod_floor(&m)))
            }
            BaseRing::IntegersLocalized(p) => {
                if (x.denom() % BigInt::from(p)).is_zero() {
                    Err(bad())
                } else {
                    Ok(x.clone())
                }
            }
        }
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.normalize(&int(n)).expect("integers embed in every base ring")
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce_closed(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce_closed(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce_closed(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.reduce_closed(-a)
    }

    fn reduce_closed(&self, x: Scalar) -> Scalar {
        match self {
            BaseRing::PrimeField(_) | BaseRing::IntegersMod(_) => {
                self.normalize(&x).expect("ring operations are closed")
            }
            _ => x,
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match *self {
            BaseRing::Integers => a.is_integer() && a.numer().abs().is_one(),
            BaseRing::PrimeField(_) => !a.is_zero(),
            BaseRing::IntegersMod(m) => a.numer().gcd(&BigInt::from(m)).is_one(),
            BaseRing::IntegersLocalized(p) => !a.is_zero() && !(a.numer() % BigInt::from(p)).is_zero(),
        }
    }

    pub fn inverse(&self, a: &Scalar) -> Option<Scalar> {
        if !self.is_unit(a) {
            return None;
        }
        match *self {
            BaseRing::PrimeField(m) | BaseRing::IntegersMod(m) => mod_inverse(a.numer(), &BigInt::from(m)).map(big),
            _ => Some(a.recip()),
        }
    }

    /// `p`-adic valuation in `Z_(p)`; `None` for zero or other base rings.
    pub fn valuation(&self, a: &Scalar) -> Option<u32> {
        match *self {
            BaseRing::IntegersLocalized(p) if !a.is_zero() => Some(int_valuation(a.numer(), &BigInt::from(p))),
            _ => None,
        }
    }

    /// Small integer view of a scalar, used for rendering and sign tests.
    pub fn as_i64(&self, a: &Scalar) -> Option<i64> {
        if a.is_integer() {
            a.numer().to_i64()
        } else {
            None
        }
    }

    /// Renders a scalar; negative values in `Z/m` and `F_p` are shown as their
    /// canonical nonnegative residues.
    pub fn render(&self, a: &Scalar) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }
}
