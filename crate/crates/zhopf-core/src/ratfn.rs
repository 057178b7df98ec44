//! Rational functions whose denominator is a single monomial.
//!
//! Everything the averaging pipeline produces lives in the Laurent ring, so
//! a `RationalFn` is just a presentation split of a Laurent polynomial into
//! `numerator / monomial`, normalized so the denominator has coefficient one
//! and the numerator carries no common monomial factor in the denominator
//! symbols.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::poly::{MultiPoly, Var};
use crate::rational::rat;

/// Numerator over a positive monomial denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    pub numerator: MultiPoly,
    pub denominator: MultiPoly,
}

impl RationalFn {
    /// Split a Laurent polynomial into numerator and monomial denominator:
    /// every symbol occurring with a negative minimum exponent moves to the
    /// denominator with that power.
    pub fn from_laurent(p: &MultiPoly) -> Result<Self> {
        if p.is_zero() {
            return Ok(RationalFn {
                numerator: MultiPoly::zero(),
                denominator: MultiPoly::one(),
            });
        }
        let mut den_powers: Vec<(Var, i64)> = Vec::new();
        for v in p.vars() {
            let mn = p.min_exponent(v);
            if mn < 0 {
                den_powers.push((v.clone(), -mn));
            }
        }
        let den = MultiPoly::monomial(rat(1), &den_powers)?;
        let numerator = p.mul(&den);
        Ok(RationalFn {
            numerator,
            denominator: den,
        })
    }

    /// Back to a single Laurent polynomial.
    pub fn to_laurent(&self) -> Result<MultiPoly> {
        Ok(self.numerator.mul(&self.denominator.invert_monomial()?))
    }

    /// The numerator with rational content and sign normalized out: the
    /// canonical leading coefficient becomes positive and coefficients are
    /// scaled by the inverse content. This is the polynomial whose zero set
    /// (under the nonvanishing of the stripped symbols) matches the rational
    /// function's.
    pub fn normalized_numerator(&self, strip: &[&str]) -> MultiPoly {
        strip_content(&self.numerator, strip)
    }
}

/// Remove rational content, normalize the canonical leading coefficient to be
/// positive, and divide out any common monomial factor in the named symbols
/// (only symbols constrained nonzero may be stripped soundly).
pub fn strip_content(p: &MultiPoly, strip: &[&str]) -> MultiPoly {
    if p.is_zero() {
        return MultiPoly::zero();
    }
    let mono = p.monomial_content_in(strip);
    let inv: Vec<(Var, i64)> = mono.into_iter().map(|(v, e)| (v, -e)).collect();
    let mut out = p.clone();
    if !inv.is_empty() {
        // Stripping only ever removes powers present in every term, so the
        // monomial multiply cannot create illegal negative exponents except
        // transiently on Laurent symbols.
        let m = MultiPoly::monomial(rat(1), &inv).unwrap_or_else(|_| force_monomial(&inv));
        out = out.mul(&m);
    }
    let content = out.rational_content();
    if !content.is_zero() {
        out = out.scale(&content.recip());
    }
    if out.leading_coeff().is_negative() {
        out = out.neg();
    }
    out
}

/// Build a monomial treating every symbol as Laurent (internal: exponents
/// here always cancel against existing powers).
fn force_monomial(powers: &[(Var, i64)]) -> MultiPoly {
    let laurent: Vec<(Var, i64)> = powers
        .iter()
        .map(|(v, e)| (Var::laurent(v.name()), *e))
        .collect();
    MultiPoly::monomial(rat(1), &laurent).expect("laurent monomial")
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == MultiPoly::one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PI;
    use crate::rational::ratio;

    #[test]
    fn laurent_split() {
        // -pi R (beta^2 - 3) / (4 beta^5) style value.
        let r = Var::laurent("R");
        let beta = Var::laurent("beta");
        let pi = Var::new(PI);
        let p = MultiPoly::monomial(
            ratio(-1, 4),
            &[(pi.clone(), 1), (r.clone(), 1), (beta.clone(), -3)],
        )
        .unwrap()
        .add(
            &MultiPoly::monomial(
                ratio(3, 4),
                &[(pi.clone(), 1), (r.clone(), 1), (beta.clone(), -5)],
            )
            .unwrap(),
        );
        let rf = RationalFn::from_laurent(&p).unwrap();
        assert_eq!(
            rf.denominator,
            MultiPoly::monomial(rat(1), &[(beta.clone(), 5)]).unwrap()
        );
        assert_eq!(rf.to_laurent().unwrap(), p);
        // Numerator: -1/4 pi R beta^2 + 3/4 pi R
        let num = MultiPoly::monomial(
            ratio(-1, 4),
            &[(pi.clone(), 1), (r.clone(), 1), (beta.clone(), 2)],
        )
        .unwrap()
        .add(&MultiPoly::monomial(ratio(3, 4), &[(pi.clone(), 1), (r.clone(), 1)]).unwrap());
        assert_eq!(rf.numerator, num);
        // Stripping pi, R and the content gives beta^2 - 3.
        let stripped = rf.normalized_numerator(&[PI, "R", "beta"]);
        let expect = MultiPoly::monomial(rat(1), &[(beta, 2)])
            .unwrap()
            .add(&MultiPoly::constant(rat(-3)));
        assert_eq!(stripped, expect);
    }
}
