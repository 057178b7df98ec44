//! Error type shared by the exact kernel.

use alloc::string::String;
use core::fmt;

/// Errors raised by the algebra and analysis layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A negative exponent was requested on a symbol not flagged `laurent`.
    LaurentViolation { var: String },
    /// An operation referenced a symbol absent from the indeterminate list.
    UnknownSymbol { var: String },
    /// Zero was substituted into a symbol occurring with negative exponent.
    ZeroIntoLaurent { var: String },
    /// A monomial (single-term) polynomial was required.
    NotMonomial,
    /// The zero polynomial is not a valid input here.
    ZeroPolynomial,
    /// Resultant of two polynomials both of degree zero in the eliminated symbol.
    ResultantDegreeZero,
    /// Operand dimensions disagree.
    DimensionMismatch { expected: usize, found: usize },
    /// Epsilon-series truncation orders disagree.
    OrderMismatch { left: usize, right: usize },
    /// Bell polynomial index out of range (`m > l`).
    BellIndex { l: usize, m: usize },
    /// The linear part of a parsed system is not the expected Jordan block.
    NotJordanForm { detail: String },
    /// A change-of-basis matrix is singular or not exactly invertible.
    SingularMatrix { detail: String },
    /// The declared frequency is zero.
    ZeroFrequency,
    /// A system coefficient violates the degree bounds of the input form.
    DegreeOutOfRange { detail: String },
    /// Lower-order averaged functions do not vanish under the supplied constraints.
    VanishingFailed { detail: String },
    /// The equation set admits non-isolated (positive-dimensional) solutions.
    NonIsolatedRoots,
    /// A root box could not be certified within the refinement budget.
    CertificationFailed { detail: String },
    /// A required parameter was left unbound.
    UnboundParameters { vars: String },
    /// Degenerate semi-algebraic system: an equation is constant in the unknowns.
    DegenerateSystem { detail: String },
    /// Substitution of rho = R^2 is not applicable (mixed parity in R).
    ParityMismatch { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LaurentViolation { var } => {
                write!(f, "negative exponent on non-laurent symbol `{var}`")
            }
            Error::UnknownSymbol { var } => write!(f, "unknown symbol `{var}`"),
            Error::ZeroIntoLaurent { var } => {
                write!(
                    f,
                    "substituting 0 into `{var}` which occurs with negative exponent"
                )
            }
            Error::NotMonomial => write!(f, "expected a single-term monomial"),
            Error::ZeroPolynomial => write!(f, "zero polynomial not allowed"),
            Error::ResultantDegreeZero => {
                write!(
                    f,
                    "resultant undefined: both polynomials constant in the eliminated symbol"
                )
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::OrderMismatch { left, right } => {
                write!(f, "epsilon-series order mismatch: {left} vs {right}")
            }
            Error::BellIndex { l, m } => write!(f, "partial Bell index out of range: B[{l},{m}]"),
            Error::NotJordanForm { detail } => {
                write!(f, "linear part not in Jordan form: {detail}")
            }
            Error::SingularMatrix { detail } => {
                write!(f, "matrix not exactly invertible: {detail}")
            }
            Error::ZeroFrequency => write!(f, "frequency b must be nonzero"),
            Error::DegreeOutOfRange { detail } => write!(f, "degree out of range: {detail}"),
            Error::VanishingFailed { detail } => {
                write!(f, "lower-order averaged functions do not vanish: {detail}")
            }
            Error::NonIsolatedRoots => write!(
                f,
                "non-isolated roots: solution set is positive-dimensional"
            ),
            Error::CertificationFailed { detail } => {
                write!(f, "certification failed, increase depth: {detail}")
            }
            Error::UnboundParameters { vars } => write!(f, "unbound parameters: {vars}"),
            Error::DegenerateSystem { detail } => write!(f, "degenerate system: {detail}"),
            Error::ParityMismatch { detail } => {
                write!(f, "rho substitution not applicable: {detail}")
            }
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
