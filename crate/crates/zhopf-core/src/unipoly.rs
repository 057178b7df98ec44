//! Dense univariate polynomials over the rationals, with exact real-root
//! isolation.
//!
//! Isolation runs Descartes'-rule bisection on the squarefree part;
//! multiplicities come from Yun's decomposition. All certificates are exact:
//! intervals have rational endpoints and can be refined to any width.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Var};
use crate::rational::{rat, Rat};

/// Dense univariate polynomial; `coeffs[i]` is the coefficient of `x^i`.
/// Invariant: no trailing zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    pub coeffs: Vec<Rat>,
}

/// Location of one real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootLoc {
    /// The root is exactly this rational.
    Exact(Rat),
    /// Open interval (lo, hi) containing exactly one root; the polynomial has
    /// opposite signs at the endpoints.
    Interval(Rat, Rat),
}

impl RootLoc {
    pub fn lo(&self) -> Rat {
        match self {
            RootLoc::Exact(q) => q.clone(),
            RootLoc::Interval(a, _) => a.clone(),
        }
    }

    pub fn hi(&self) -> Rat {
        match self {
            RootLoc::Exact(q) => q.clone(),
            RootLoc::Interval(_, b) => b.clone(),
        }
    }

    pub fn width(&self) -> Rat {
        self.hi() - self.lo()
    }

    /// Midpoint, as a representative value.
    pub fn mid(&self) -> Rat {
        (self.lo() + self.hi()) / rat(2)
    }
}

/// One isolated real root with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub location: RootLoc,
    pub multiplicity: usize,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = rat(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * rat(i as i64))
                .collect(),
        )
    }

    /// Extract from a multivariate polynomial that involves (at most) the
    /// single symbol `var` with nonnegative exponents.
    pub fn from_multipoly(p: &MultiPoly, var: &Var) -> Result<Self> {
        for v in p.vars() {
            if v != var {
                return Err(Error::UnknownSymbol {
                    var: alloc::string::String::from(v.name()),
                });
            }
        }
        let cs = p.coefficients_in(var)?;
        let mut coeffs = Vec::with_capacity(cs.len());
        for c in cs {
            coeffs.push(c.constant_term());
        }
        Ok(UniPoly::new(coeffs))
    }

    fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero());
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let lead = d.coeffs[dd].clone();
        if rem.len() < d.coeffs.len() {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![rat(0); rem.len() - dd];
        while rem.len() >= d.coeffs.len() {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap().clone() / lead.clone();
            quot[k] = q.clone();
            for i in 0..=dd {
                let delta = q.clone() * d.coeffs[i].clone();
                rem[k + i] -= delta;
            }
            while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
                rem.pop();
            }
            if rem.len() < d.coeffs.len() {
                break;
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Monic gcd via a primitive remainder sequence over the integers.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let mut a = self.int_primitive();
        let mut b = other.int_primitive();
        if int_degree(&a) < int_degree(&b) {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = int_pseudo_rem(&a, &b);
            a = b;
            b = int_make_primitive(r);
        }
        UniPoly::new(a.into_iter().map(Rat::from_integer).collect()).monic()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let lead = self.coeffs.last().unwrap().clone();
        UniPoly::new(
            self.coeffs
                .iter()
                .map(|c| c.clone() / lead.clone())
                .collect(),
        )
    }

    /// Squarefree part `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.monic();
        }
        self.divrem(&g).0.monic()
    }

    /// Yun's squarefree decomposition: returns `(factor, multiplicity)` with
    /// the factors squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 || self.is_zero() {
            return out;
        }
        let d = self.derivative();
        let mut a = self.gcd(&d);
        let mut b = self.divrem(&a).0;
        let mut c = d.divrem(&a).0;
        let mut i = 1usize;
        loop {
            let bd = b.derivative();
            let delta = UniPoly::new(sub_vec(&c.coeffs, &bd.coeffs));
            if delta.is_zero() {
                if b.degree() > 0 {
                    out.push((b.monic(), i));
                }
                break;
            }
            a = b.gcd(&delta);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            c = delta.divrem(&a).0;
            i += 1;
            if b.degree() == 0 {
                break;
            }
        }
        out
    }

    /// Integer primitive form (content and sign stripped).
    fn int_primitive(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        int_make_primitive(ints)
    }

    /// Cauchy root bound: every real root lies in (-B, B).
    pub fn root_bound(&self) -> Rat {
        if self.is_zero() {
            return rat(1);
        }
        let lead = self.coeffs.last().unwrap().abs();
        let mut m = rat(0);
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let q = c.abs() / lead.clone();
            if q > m {
                m = q;
            }
        }
        m + rat(1)
    }

    /// Isolate all distinct real roots with multiplicities; the input must be
    /// nonzero. Intervals are pairwise disjoint and sorted increasingly.
    pub fn isolate_real_roots(&self) -> Result<Vec<IsolatedRoot>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut roots: Vec<IsolatedRoot> = Vec::new();
        for (factor, mult) in self.squarefree_decomposition() {
            for loc in isolate_squarefree(&factor) {
                roots.push(IsolatedRoot {
                    location: loc,
                    multiplicity: mult,
                });
            }
        }
        // Refine until pairwise disjoint so ordering is unambiguous.
        let factors = self.squarefree_decomposition();
        let factor_of = |root: &IsolatedRoot| -> &UniPoly {
            &factors
                .iter()
                .find(|(_, m)| *m == root.multiplicity)
                .unwrap()
                .0
        };
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..roots.len() {
                for j in (i + 1)..roots.len() {
                    if overlaps(&roots[i].location, &roots[j].location) {
                        let fi = factor_of(&roots[i]).clone();
                        let fj = factor_of(&roots[j]).clone();
                        let wi = roots[i].location.width();
                        let wj = roots[j].location.width();
                        roots[i].location = refine(&fi, roots[i].location.clone(), &(wi / rat(4)));
                        roots[j].location = refine(&fj, roots[j].location.clone(), &(wj / rat(4)));
                        changed = true;
                    }
                }
            }
        }
        roots.sort_by(|a, b| a.location.lo().cmp(&b.location.lo()));
        Ok(roots)
    }
}

fn sub_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| rat(0));
            let y = b.get(i).cloned().unwrap_or_else(|| rat(0));
            x - y
        })
        .collect()
}

fn int_degree(p: &[BigInt]) -> usize {
    p.len().saturating_sub(1)
}

fn int_make_primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    if p.is_empty() {
        return p;
    }
    let mut g = BigInt::zero();
    for c in &p {
        g = g.gcd(c);
    }
    if p.last().unwrap().is_negative() {
        g = -g;
    }
    for c in p.iter_mut() {
        *c = &*c / &g;
    }
    p
}

fn int_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<BigInt> = a.to_vec();
    let db = int_degree(b);
    let lb = b.last().unwrap().clone();
    while !r.is_empty() && int_degree(&r) >= db && !(r.len() == 1 && db == 0) {
        let dr = int_degree(&r);
        if dr < db {
            break;
        }
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for i in 0..=db {
            r[dr - db + i] -= &lr * &b[i];
        }
        while r.last().map(|c| c.is_zero()).unwrap_or(false) {
            r.pop();
        }
        if db == 0 {
            return vec![];
        }
    }
    r
}

/// Descartes sign-variation count of `(1+t)^n q(1/(1+t))` for q on (0,1).
fn variations_01(q: &[BigInt]) -> usize {
    let rev: Vec<BigInt> = q.iter().rev().cloned().collect();
    let shifted = taylor_shift_1(&rev);
    sign_variations(&shifted)
}

fn sign_variations(p: &[BigInt]) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for c in p {
        if c.is_zero() {
            continue;
        }
        let s = c.is_positive();
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// q(t+1) by iterated Pascal accumulation.
fn taylor_shift_1(q: &[BigInt]) -> Vec<BigInt> {
    let mut p = q.to_vec();
    let n = p.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let add = p[j + 1].clone();
            p[j] += add;
        }
        let _ = i;
    }
    p
}

/// 2^n q(t/2).
fn scale_half(q: &[BigInt]) -> Vec<BigInt> {
    let n = q.len();
    q.iter()
        .enumerate()
        .map(|(i, c)| c * (BigInt::one() << (n - 1 - i)))
        .collect()
}

/// Isolate the roots of a squarefree polynomial over the whole real line.
fn isolate_squarefree(p: &UniPoly) -> Vec<RootLoc> {
    let mut out = Vec::new();
    if p.degree() == 0 {
        return out;
    }
    // Root at zero.
    let mut q = p.clone();
    if q.coeffs[0].is_zero() {
        out.push(RootLoc::Exact(rat(0)));
        let mut cs = q.coeffs.clone();
        cs.remove(0);
        q = UniPoly::new(cs);
    }
    let bound = q.root_bound();
    // Positive axis: roots of q(B t) for t in (0,1).
    let pos = q.int_scaled(&bound);
    for loc in vca(&pos) {
        out.push(map_unit(loc, &bound, false));
    }
    // Negative axis: roots of q(-B t) for t in (0,1).
    let neg: Vec<BigInt> = pos
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
        .collect();
    for loc in vca(&neg) {
        out.push(map_unit(loc, &bound, true));
    }
    out.sort_by(|a, b| a.lo().cmp(&b.lo()));
    out
}

impl UniPoly {
    /// Integer coefficients of (a multiple of) `p(B t)`.
    fn int_scaled(&self, bound: &Rat) -> Vec<BigInt> {
        let ints = self.int_primitive();
        let num = bound.numer().clone();
        let den = bound.denom().clone();
        // p(B t): a_i B^i t^i; multiply through by den^n.
        let n = ints.len();
        let scaled: Vec<BigInt> = ints
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let mut v = c;
                for _ in 0..i {
                    v *= &num;
                }
                for _ in i..n.saturating_sub(1) {
                    v *= &den;
                }
                v
            })
            .collect();
        int_make_primitive(scaled)
    }
}

/// Dyadic subinterval of (0,1), plus exact hits at dyadic points.
enum UnitLoc {
    Exact(Rat),
    Open(Rat, Rat),
}

fn map_unit(loc: UnitLoc, bound: &Rat, negate: bool) -> RootLoc {
    let f = |t: Rat| {
        if negate {
            -(t * bound.clone())
        } else {
            t * bound.clone()
        }
    };
    match loc {
        UnitLoc::Exact(t) => RootLoc::Exact(f(t)),
        UnitLoc::Open(a, b) => {
            let (x, y) = (f(a), f(b));
            if x <= y {
                RootLoc::Interval(x, y)
            } else {
                RootLoc::Interval(y, x)
            }
        }
    }
}

/// Descartes bisection on (0,1) for a squarefree integer polynomial.
fn vca(q: &[BigInt]) -> Vec<UnitLoc> {
    let mut out = Vec::new();
    let mut stack: Vec<(Rat, Rat, Vec<BigInt>)> = vec![(rat(0), rat(1), q.to_vec())];
    while let Some((lo, hi, poly)) = stack.pop() {
        match variations_01(&poly) {
            0 => {}
            1 => out.push(UnitLoc::Open(lo, hi)),
            _ => {
                let mid = (lo.clone() + hi.clone()) / rat(2);
                let left = scale_half(&poly);
                let right = taylor_shift_1(&left);
                // Exact root at the midpoint shows as zero constant term of the
                // right half (t = 0 maps to the midpoint).
                let mut right = right;
                if right.first().map(|c| c.is_zero()).unwrap_or(false) {
                    out.push(UnitLoc::Exact(mid.clone()));
                    right.remove(0);
                }
                stack.push((lo, mid.clone(), left));
                stack.push((mid, hi, right));
            }
        }
    }
    out
}

/// Shrink an isolating interval below `width` by sign bisection.
///
/// Contract: the open interval contains exactly one root of `factor`, and
/// that root is simple. The endpoints themselves may be roots of other
/// factors (the bisection starts from strictly interior bracketing points).
pub fn refine(factor: &UniPoly, loc: RootLoc, width: &Rat) -> RootLoc {
    let RootLoc::Interval(lo0, hi0) = loc else {
        return loc;
    };
    // Probe inward until a sign-changing bracket appears; the root is strictly
    // interior, so a geometric approach to the endpoints must find one.
    let w = hi0.clone() - lo0.clone();
    let mut step = w.clone() / rat(4);
    let (mut lo, mut hi, mut slo);
    loop {
        let a = lo0.clone() + step.clone();
        let b = hi0.clone() - step.clone();
        let sa = factor.eval(&a);
        if sa.is_zero() {
            return RootLoc::Exact(a);
        }
        let sb = factor.eval(&b);
        if sb.is_zero() {
            return RootLoc::Exact(b);
        }
        if sa.is_positive() != sb.is_positive() {
            lo = a;
            hi = b;
            slo = sa;
            break;
        }
        step /= rat(4);
    }
    while hi.clone() - lo.clone() > *width {
        let mid = (lo.clone() + hi.clone()) / rat(2);
        let sm = factor.eval(&mid);
        if sm.is_zero() {
            return RootLoc::Exact(mid);
        }
        if sm.is_positive() == slo.is_positive() {
            lo = mid;
            slo = sm;
        } else {
            hi = mid;
        }
    }
    RootLoc::Interval(lo, hi)
}

fn overlaps(a: &RootLoc, b: &RootLoc) -> bool {
    !(a.hi() < b.lo() || b.hi() < a.lo())
}
