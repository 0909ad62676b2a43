use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid base ring: {0}")]
    InvalidBaseRing(String),
    #[error("invalid ring presentation: {0}")]
    InvalidRing(String),
    #[error("scalar {0} is not an element of the base ring {1}")]
    NotInBase(String, String),
    #[error("elements belong to different rings")]
    MixedRings,
    #[error("result escapes the computation window: {0}")]
    WindowOverflow(String),
    #[error("element is not homogeneous")]
    NonHomogeneous,
    #[error("odd degree {0}: only even-degree elements are allowed here")]
    OddDegree(i64),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("sequence is empty")]
    EmptySequence,
    #[error("ideal has no generators")]
    EmptyIdeal,
    #[error("sequence is not regular: element {index} fails ({reason})")]
    NotVerifiedRegular { index: usize, reason: String },
    #[error("quotient is not regular")]
    NotRegular,
    #[error("quotient ring vanishes in degree 0")]
    TrivialQuotient,
    #[error("condition (ii) fails at k = {k} in degree {degree}")]
    ConditionIIFails { k: usize, degree: i64 },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("product token {index}: commutative flag disagrees with its obstruction")]
    InconsistentToken { index: usize },
    #[error("ring map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("map is not unital: {0}")]
    NotUnital(String),
    #[error("pair is not multiplicative: {0}")]
    NotMultiplicative(String),
    #[error("element is not in the ideal")]
    NotInIdeal,
    #[error("elements belong to different algebras")]
    MixedAlgebras,
    #[error("operators act on different algebras")]
    MixedOwners,
    #[error("tensor factors have different coefficient rings")]
    MixedCoefficients,
    #[error("algebra is not exterior: {0}")]
    NotExterior(String),
    #[error("generator images violate the Clifford relations: {0}")]
    NotCompatible(String),
    #[error("rewriting did not terminate within the word bound {0}")]
    BoundTooSmall(usize),
    #[error("generator index {0} out of range")]
    BadIndex(usize),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
}
