//! Exact rational scalars.
//!
//! All coefficients in the crate are `BigRational` values: arbitrary
//! precision, always reduced, denominator positive. Construction helpers
//! below keep call sites short.

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Fraction `n/d`; `d` must be nonzero.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Factorial as a rational.
pub fn factorial(n: usize) -> Rat {
    let mut acc = BigInt::from(1);
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rat::from_integer(acc)
}

/// Binomial coefficient as a rational.
pub fn binomial(n: usize, k: usize) -> Rat {
    if k > n {
        return rat(0);
    }
    let k = k.min(n - k);
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Rat::new(num, den)
}
