//! Exact interval arithmetic over the rationals.
//!
//! Endpoints are arbitrary-precision rationals, so interval evaluation is a
//! sound (no rounding anywhere) range enclosure for polynomials on boxes.
//! This backs every certificate in the root-counting pipeline: no floating
//! point enters.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::poly::MultiPoly;
use crate::rational::{rat, Rat};

/// Closed interval [lo, hi] with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(q: Rat) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, q: &Rat) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn width(&self) -> Rat {
        self.hi.clone() - self.lo.clone()
    }

    pub fn mid(&self) -> Rat {
        (self.lo.clone() + self.hi.clone()) / rat(2)
    }

    pub fn add(&self, other: &Self) -> Self {
        Interval::new(
            self.lo.clone() + other.lo.clone(),
            self.hi.clone() + other.hi.clone(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Interval::new(
            self.lo.clone() - other.hi.clone(),
            self.hi.clone() - other.lo.clone(),
        )
    }

    pub fn neg(&self) -> Self {
        Interval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let candidates = [
            self.lo.clone() * other.lo.clone(),
            self.lo.clone() * other.hi.clone(),
            self.hi.clone() * other.lo.clone(),
            self.hi.clone() * other.hi.clone(),
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        Interval::new(lo, hi)
    }

    pub fn scale(&self, q: &Rat) -> Self {
        if q.is_negative() {
            Interval::new(self.hi.clone() * q.clone(), self.lo.clone() * q.clone())
        } else {
            Interval::new(self.lo.clone() * q.clone(), self.hi.clone() * q.clone())
        }
    }

    /// Tight power (monotone on sign-definite parts, even powers handled).
    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Interval::point(rat(1));
        }
        let plo = num_traits::pow::pow(self.lo.clone(), e as usize);
        let phi = num_traits::pow::pow(self.hi.clone(), e as usize);
        if e % 2 == 1 {
            Interval::new(plo, phi)
        } else if !self.lo.is_negative() {
            Interval::new(plo, phi)
        } else if !self.hi.is_positive() {
            Interval::new(phi, plo)
        } else {
            Interval::new(rat(0), plo.max(phi))
        }
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !(self.hi < other.lo || other.hi < self.lo)
    }

    /// Strict containment in the interior of `other`.
    pub fn inside_interior(&self, other: &Self) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn hull(&self, other: &Self) -> Self {
        Interval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }
}

/// Axis-aligned box: named coordinate intervals.
pub type IntervalBox = BTreeMap<String, Interval>;

/// Sound range enclosure of a polynomial over a box. Every symbol of `p`
/// must be bound (the polynomial side has already been specialized at the
/// parameter point, so only unknowns remain). Exponents must be nonnegative.
pub fn eval_poly_on_box(p: &MultiPoly, bx: &IntervalBox) -> Interval {
    let mut acc = Interval::point(rat(0));
    for (coeff, powers) in p.terms_desc() {
        let mut term = Interval::point(coeff);
        for (v, e) in powers {
            debug_assert!(e >= 0, "box evaluation needs polynomial exponents");
            let iv = bx
                .get(v.name())
                .cloned()
                .unwrap_or_else(|| Interval::point(rat(0)));
            term = term.mul(&iv.pow(e as u32));
        }
        acc = acc.add(&term);
    }
    acc
}

/// Mean-value-form enclosure: `f(mid) + sum_i df/dx_i(box) * (box_i - mid_i)`,
/// intersected with the naive enclosure. The centered form has quadratic
/// excess width, which naive term-by-term evaluation does not.
pub fn mean_value_enclosure(p: &MultiPoly, bx: &IntervalBox) -> Interval {
    let naive = eval_poly_on_box(p, bx);
    let mid: BTreeMap<String, Rat> = bx.iter().map(|(k, v)| (k.clone(), v.mid())).collect();
    let Ok(center) = p.eval(&mid) else {
        return naive;
    };
    let mut acc = Interval::point(center);
    for v in p.vars().to_vec() {
        let Ok(d) = p.diff(&v) else {
            return naive;
        };
        let grad = eval_poly_on_box(&d, bx);
        let Some(iv) = bx.get(v.name()) else {
            return naive;
        };
        let offset = iv.sub(&Interval::point(mid[v.name()].clone()));
        acc = acc.add(&grad.mul(&offset));
    }
    // Both are sound enclosures; intersect them.
    Interval::new(acc.lo.max(naive.lo), acc.hi.min(naive.hi))
}

/// Exact inverse of a square rational matrix, `None` when singular.
pub fn invert_matrix(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { rat(1) } else { rat(0) })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= p.clone();
            inv[col][j] /= p.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let d = a[col][j].clone() * factor.clone();
                a[r][j] -= d;
                let d = inv[col][j].clone() * factor.clone();
                inv[r][j] -= d;
            }
        }
    }
    Some(inv)
}

/// Interval determinant of an interval matrix (Laplace expansion; fine for
/// the n <= 3 sizes used here).
pub fn interval_det(m: &[Vec<Interval>]) -> Interval {
    let n = m.len();
    match n {
        0 => Interval::point(rat(1)),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Interval::point(rat(0));
            for j in 0..n {
                let minor: Vec<Vec<Interval>> = (1..n)
                    .map(|r| {
                        (0..n)
                            .filter(|c| *c != j)
                            .map(|c| m[r][c].clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][j].mul(&interval_det(&minor));
                acc = if j % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
    }
}
