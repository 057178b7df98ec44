//! Resultants of multivariate polynomials with respect to one symbol.
//!
//! The Sylvester matrix has `MultiPoly` entries; its determinant is computed
//! by Bareiss fraction-free elimination, whose intermediate divisions are
//! exact over the polynomial ring. Laurent content in the coefficients is
//! cleared up front and divided back out at the end.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Var};
use crate::rational::rat;

/// Sylvester resultant of `p` and `q` with respect to `sym`.
///
/// Both inputs must be polynomial (nonnegative exponents) in `sym`; it is an
/// error for both to have degree zero in `sym`. If one input is constant in
/// `sym`, the convention `res(c, q) = c^deg(q)` applies.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, sym: &Var) -> Result<MultiPoly> {
    if p.is_zero() || q.is_zero() {
        return Ok(MultiPoly::zero());
    }
    if p.min_exponent(sym) < 0 || q.min_exponent(sym) < 0 {
        return Err(Error::LaurentViolation {
            var: alloc::string::String::from(sym.name()),
        });
    }
    // Clear Laurent denominators in the coefficient ring so Bareiss works
    // over a plain polynomial ring; res(m*p, q) = m^deg(q) * res(p, q).
    let (pc, p_clear) = clear_laurent(p, sym);
    let (qc, q_clear) = clear_laurent(q, sym);

    let a = pc.coefficients_in(sym)?;
    let b = qc.coefficients_in(sym)?;
    let dp = a.len() - 1;
    let dq = b.len() - 1;
    if dp == 0 && dq == 0 {
        return Err(Error::ResultantDegreeZero);
    }
    let raw = if dp == 0 {
        a[0].pow(dq as u32)
    } else if dq == 0 {
        b[0].pow(dp as u32)
    } else {
        let n = dp + dq;
        let mut m = vec![vec![MultiPoly::zero(); n]; n];
        for row in 0..dq {
            for (j, c) in a.iter().enumerate() {
                m[row][row + dp - j] = c.clone();
            }
        }
        for row in 0..dp {
            for (j, c) in b.iter().enumerate() {
                m[dq + row][row + dq - j] = c.clone();
            }
        }
        bareiss_determinant(m)
    };
    // Divide out the cleared monomial content: p_clear^dq * q_clear^dp.
    let mut correction = MultiPoly::one();
    for _ in 0..dq {
        correction = correction.mul(&p_clear);
    }
    for _ in 0..dp {
        correction = correction.mul(&q_clear);
    }
    if correction == MultiPoly::one() {
        return Ok(raw);
    }
    let inv = correction.invert_monomial()?;
    Ok(raw.mul(&inv))
}

/// Multiply by the smallest monomial making every Laurent exponent (in
/// symbols other than `sym`) nonnegative; returns (cleared poly, multiplier).
fn clear_laurent(p: &MultiPoly, sym: &Var) -> (MultiPoly, MultiPoly) {
    let mut powers: Vec<(Var, i64)> = Vec::new();
    for v in p.vars() {
        if v == sym {
            continue;
        }
        let mn = p.min_exponent(v);
        if mn < 0 {
            powers.push((v.clone(), -mn));
        }
    }
    if powers.is_empty() {
        return (p.clone(), MultiPoly::one());
    }
    let m = MultiPoly::monomial(rat(1), &powers).expect("positive exponents");
    (p.mul(&m), m)
}

/// Fraction-free determinant; all divisions are exact in the polynomial ring.
pub fn bareiss_determinant(mut m: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one();
    }
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return MultiPoly::zero();
            };
            m.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
            m[i][k] = MultiPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}
