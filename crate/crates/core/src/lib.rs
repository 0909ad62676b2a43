//! Homology and cohomology algebras of regular quotient rings, computed
//! symbolically and degreewise inside a finite window.

pub mod clifford;
pub mod conormal;
pub mod derivation;
pub mod error;
pub mod expr;
pub mod koszul;
pub mod linalg;
pub mod morava;
pub mod oracle;
pub mod pairs;
pub mod quotient;
pub mod ring;
pub mod scalar;

pub use error::{Error, Result};
pub use quotient::{normal_form, QuotientRing};
pub use ring::{Generator, GradedRing, Monomial, RingElement, RingHandle, Window};
pub use scalar::{BaseRing, Scalar};
