//! Quasi-trigonometric polynomials: finite sums of `coeff * theta^p * h`
//! where `h` is 1, `cos(j theta)` or `sin(j theta)` and the coefficients are
//! multivariate polynomials in the phase variables and parameters.
//!
//! This function space is closed under products (by product-to-sum
//! linearization), differentiation and antidifferentiation in `theta`, which
//! is exactly what the averaging recurrence needs. Canonical form keeps one
//! term per `(theta power, harmonic)` pair, so equality is structural.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::Result;
use crate::poly::{Binding, MultiPoly, Var, PI};
use crate::rational::{rat, ratio, Rat};
use num_traits::Zero;

/// Single harmonic factor. `Cos(0)`/`Sin(0)` never appear: the constant
/// harmonic is `One` and `sin(0) = 0` is dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Harmonic {
    One,
    Cos(u32),
    Sin(u32),
}

/// Key of one canonical term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TrigKey {
    pub theta_pow: u32,
    pub harmonic: Harmonic,
}

/// Canonical quasi-trigonometric polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TrigPoly {
    terms: BTreeMap<TrigKey, MultiPoly>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        TrigPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// theta-free, harmonic-free embedding of a coefficient polynomial.
    pub fn from_poly(p: MultiPoly) -> Self {
        let mut t = TrigPoly::zero();
        t.add_term(0, Harmonic::One, p);
        t
    }

    pub fn term(theta_pow: u32, harmonic: Harmonic, coeff: MultiPoly) -> Self {
        let mut t = TrigPoly::zero();
        t.add_term(theta_pow, harmonic, coeff);
        t
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TrigKey, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, theta_pow: u32, harmonic: Harmonic, coeff: MultiPoly) {
        if coeff.is_zero() {
            return;
        }
        // Normalize impossible harmonics at the door.
        let harmonic = match harmonic {
            Harmonic::Cos(0) => Harmonic::One,
            Harmonic::Sin(0) => return,
            h => h,
        };
        let key = TrigKey {
            theta_pow,
            harmonic,
        };
        let entry = self.terms.entry(key).or_insert_with(MultiPoly::zero);
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.theta_pow, k.harmonic, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return TrigPoly::zero();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.scale(c);
        }
        out
    }

    pub fn scale_poly(&self, p: &MultiPoly) -> Self {
        let mut out = TrigPoly::zero();
        for (k, c) in &self.terms {
            out.add_term(k.theta_pow, k.harmonic, c.mul(p));
        }
        out
    }

    /// Exact product, fully linearized into the canonical harmonic basis.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = TrigPoly::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let coeff = ca.mul(cb);
                let tp = ka.theta_pow + kb.theta_pow;
                for (h, s) in linearize(ka.harmonic, kb.harmonic) {
                    out.add_term(tp, h, coeff.scale(&s));
                }
            }
        }
        out
    }

    /// Derivative with respect to theta.
    pub fn diff_theta(&self) -> Self {
        let mut out = TrigPoly::zero();
        for (k, c) in &self.terms {
            if k.theta_pow > 0 {
                out.add_term(
                    k.theta_pow - 1,
                    k.harmonic,
                    c.scale(&rat(k.theta_pow as i64)),
                );
            }
            match k.harmonic {
                Harmonic::One => {}
                Harmonic::Cos(j) => {
                    out.add_term(k.theta_pow, Harmonic::Sin(j), c.scale(&rat(-(j as i64))));
                }
                Harmonic::Sin(j) => {
                    out.add_term(k.theta_pow, Harmonic::Cos(j), c.scale(&rat(j as i64)));
                }
            }
        }
        out
    }

    /// Partial derivative of the coefficients with respect to a phase symbol.
    pub fn diff_var(&self, var: &Var) -> Result<Self> {
        let mut out = TrigPoly::zero();
        for (k, c) in &self.terms {
            out.add_term(k.theta_pow, k.harmonic, c.diff(var)?);
        }
        Ok(out)
    }

    /// Substitute into the coefficients.
    pub fn substitute(&self, bindings: &BTreeMap<alloc::string::String, Binding>) -> Result<Self> {
        let mut out = TrigPoly::zero();
        for (k, c) in &self.terms {
            out.add_term(k.theta_pow, k.harmonic, c.substitute(bindings)?);
        }
        Ok(out)
    }

    /// Antiderivative `G` with `G(0) = 0` and `dG/dtheta = self`.
    /// Powers of theta against harmonics integrate by parts in closed form.
    pub fn antiderivative(&self) -> Self {
        let mut out = TrigPoly::zero();
        for (k, c) in &self.terms {
            integrate_term(&mut out, k.theta_pow, k.harmonic, c);
        }
        // Enforce G(0) = 0: subtract the value at theta = 0.
        let at0 = out.eval_theta0();
        if !at0.is_zero() {
            out.add_term(0, Harmonic::One, at0.neg());
        }
        out
    }

    /// Value at theta = 0 (cos -> 1, sin -> 0, theta -> 0).
    pub fn eval_theta0(&self) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for (k, c) in &self.terms {
            if k.theta_pow != 0 {
                continue;
            }
            match k.harmonic {
                Harmonic::One | Harmonic::Cos(_) => acc = acc.add(c),
                Harmonic::Sin(_) => {}
            }
        }
        acc
    }

    /// Value at theta = 2*pi with pi kept symbolic:
    /// cos(2 pi j) = 1, sin(2 pi j) = 0, theta^p = (2 pi)^p.
    pub fn eval_two_pi(&self) -> MultiPoly {
        let pi = Var::new(PI);
        let mut acc = MultiPoly::zero();
        for (k, c) in &self.terms {
            let keep = match k.harmonic {
                Harmonic::One | Harmonic::Cos(_) => true,
                Harmonic::Sin(_) => false,
            };
            if !keep {
                continue;
            }
            let mut t = c.clone();
            if k.theta_pow > 0 {
                let two_pow = Rat::from_integer(num_bigint::BigInt::from(2).pow(k.theta_pow));
                let two_pi = MultiPoly::monomial(two_pow, &[(pi.clone(), k.theta_pow as i64)])
                    .expect("positive power of pi");
                t = t.mul(&two_pi);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Definite integral over one period: antiderivative evaluated at 2*pi.
    pub fn integral_over_period(&self) -> MultiPoly {
        self.antiderivative().eval_two_pi()
    }

    /// Union of symbols appearing in the coefficients.
    pub fn coefficient_vars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        for c in self.terms.values() {
            for v in c.vars() {
                if let Err(i) = out.binary_search(v) {
                    out.insert(i, v.clone());
                }
            }
        }
        out
    }

    /// Floating-point evaluation for the quadrature cross-check.
    #[cfg(feature = "std")]
    pub fn eval_f64(&self, theta: f64, bindings: &BTreeMap<alloc::string::String, f64>) -> f64 {
        let mut acc = 0.0;
        for (k, c) in &self.terms {
            let h = match k.harmonic {
                Harmonic::One => 1.0,
                Harmonic::Cos(j) => (j as f64 * theta).cos(),
                Harmonic::Sin(j) => (j as f64 * theta).sin(),
            };
            acc += c.eval_f64(bindings) * theta.powi(k.theta_pow as i32) * h;
        }
        acc
    }
}

/// Product of two harmonics as a list of (harmonic, rational weight).
fn linearize(a: Harmonic, b: Harmonic) -> Vec<(Harmonic, Rat)> {
    use Harmonic::*;
    let half = ratio(1, 2);
    match (a, b) {
        (One, h) | (h, One) => alloc::vec![(h, rat(1))],
        (Cos(p), Cos(q)) => {
            // cos p cos q = 1/2 cos(p-q) + 1/2 cos(p+q)
            alloc::vec![
                (cos_of(p as i64 - q as i64), half.clone()),
                (Cos(p + q), half)
            ]
        }
        (Sin(p), Sin(q)) => {
            // sin p sin q = 1/2 cos(p-q) - 1/2 cos(p+q)
            alloc::vec![
                (cos_of(p as i64 - q as i64), half.clone()),
                (Cos(p + q), -half)
            ]
        }
        (Sin(p), Cos(q)) | (Cos(q), Sin(p)) => {
            // sin p cos q = 1/2 sin(p+q) + 1/2 sin(p-q)
            let mut out = alloc::vec![(Sin(p + q), half.clone())];
            let d = p as i64 - q as i64;
            if d > 0 {
                out.push((Sin(d as u32), half));
            } else if d < 0 {
                out.push((Sin((-d) as u32), -half));
            }
            out
        }
    }
}

fn cos_of(j: i64) -> Harmonic {
    if j == 0 {
        Harmonic::One
    } else {
        Harmonic::Cos(j.unsigned_abs() as u32)
    }
}

/// Indefinite integral of `coeff * theta^p * h`, accumulated into `out`
/// (constant of integration not fixed here).
fn integrate_term(out: &mut TrigPoly, p: u32, h: Harmonic, coeff: &MultiPoly) {
    match h {
        Harmonic::One => {
            out.add_term(p + 1, Harmonic::One, coeff.scale(&ratio(1, (p + 1) as i64)));
        }
        Harmonic::Cos(j) => {
            // int theta^p cos(j theta) = theta^p sin(j theta)/j - (p/j) int theta^(p-1) sin(j theta)
            out.add_term(p, Harmonic::Sin(j), coeff.scale(&ratio(1, j as i64)));
            if p > 0 {
                integrate_term(
                    out,
                    p - 1,
                    Harmonic::Sin(j),
                    &coeff.scale(&ratio(-(p as i64), j as i64)),
                );
            }
        }
        Harmonic::Sin(j) => {
            // int theta^p sin(j theta) = -theta^p cos(j theta)/j + (p/j) int theta^(p-1) cos(j theta)
            out.add_term(p, Harmonic::Cos(j), coeff.scale(&ratio(-1, j as i64)));
            if p > 0 {
                integrate_term(
                    out,
                    p - 1,
                    Harmonic::Cos(j),
                    &coeff.scale(&ratio(p as i64, j as i64)),
                );
            }
        }
    }
}

impl core::fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if k.theta_pow > 0 {
                write!(f, "*theta")?;
                if k.theta_pow > 1 {
                    write!(f, "^{}", k.theta_pow)?;
                }
            }
            match k.harmonic {
                Harmonic::One => {}
                Harmonic::Cos(1) => write!(f, "*cos(theta)")?,
                Harmonic::Sin(1) => write!(f, "*sin(theta)")?,
                Harmonic::Cos(j) => write!(f, "*cos({j}*theta)")?,
                Harmonic::Sin(j) => write!(f, "*sin({j}*theta)")?,
            }
        }
        Ok(())
    }
}
