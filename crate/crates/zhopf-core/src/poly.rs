//! Sparse multivariate Laurent polynomials over the rationals.
//!
//! Representation: an ordered indeterminate list plus a term map from
//! exponent vectors to nonzero rational coefficients. Negative exponents are
//! permitted only on symbols flagged `laurent` (the symbols the analysis
//! divides by: the radial variable `R`, the frequency symbol, and any
//! explicitly flagged parameter).
//!
//! Canonical form: indeterminates sorted by the global symbol order, unused
//! indeterminates dropped, terms keyed in graded-lexicographic order, no zero
//! coefficients. Equality is structural on the canonical form.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat, Rat};

/// Indeterminate: a named symbol with a Laurent flag.
///
/// Ordering (and equality) is by name only, under the global symbol order:
/// the radial variable first, then phase variables `X3..Xn`, then parameters
/// alphabetically, with `pi` always last. The Laurent flag rides along and is
/// or-merged when polynomials over different lists are aligned.
#[derive(Clone, Debug)]
pub struct Var {
    name: String,
    laurent: bool,
}

/// Name of the symbolic transcendental constant kept unevaluated.
pub const PI: &str = "pi";

fn order_class(name: &str) -> (u8, u32) {
    if name == "R" || name == "rho" {
        return (0, 0);
    }
    if let Some(rest) = name.strip_prefix('X') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            return (1, rest.parse::<u32>().unwrap_or(u32::MAX));
        }
    }
    if name == PI {
        return (3, 0);
    }
    (2, 0)
}

impl Var {
    /// Ordinary (non-Laurent) symbol.
    pub fn new(name: &str) -> Self {
        Var {
            name: name.to_owned(),
            laurent: false,
        }
    }

    /// Symbol permitted to carry negative exponents.
    pub fn laurent(name: &str) -> Self {
        Var {
            name: name.to_owned(),
            laurent: true,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_laurent(&self) -> bool {
        self.laurent
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}
impl Eq for Var {}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        let (ca, ia) = order_class(&self.name);
        let (cb, ib) = order_class(&other.name);
        ca.cmp(&cb)
            .then(ia.cmp(&ib))
            .then_with(|| self.name.cmp(&other.name))
    }
}

/// Exponent vector keyed in graded-lexicographic order (total degree first,
/// then lexicographic with the earliest indeterminate most significant).
/// The maximum key under this order is the leading term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mono(pub Vec<i64>);

impl Mono {
    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse multivariate Laurent polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiPoly {
    vars: Vec<Var>,
    terms: BTreeMap<Mono, Rat>,
}

/// Substitution value: a rational constant or another polynomial.
#[derive(Clone, Debug)]
pub enum Binding {
    Const(Rat),
    Poly(MultiPoly),
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = MultiPoly::default();
        if !c.is_zero() {
            p.terms.insert(Mono(vec![]), c);
        }
        p
    }

    pub fn one() -> Self {
        Self::constant(rat(1))
    }

    /// Single indeterminate to the first power.
    pub fn var(v: &Var) -> Self {
        Self::monomial(rat(1), &[(v.clone(), 1)]).expect("exponent 1 is always valid")
    }

    /// `coeff * prod v_i^e_i`. Fails if a negative exponent lands on a
    /// non-Laurent symbol.
    pub fn monomial(coeff: Rat, powers: &[(Var, i64)]) -> Result<Self> {
        let mut p = MultiPoly::default();
        if coeff.is_zero() {
            return Ok(p);
        }
        let mut sorted: Vec<(Var, i64)> = Vec::new();
        for (v, e) in powers {
            if *e == 0 {
                continue;
            }
            if *e < 0 && !v.is_laurent() {
                return Err(Error::LaurentViolation {
                    var: v.name().to_owned(),
                });
            }
            match sorted.binary_search_by(|(w, _)| w.cmp(v)) {
                Ok(i) => {
                    sorted[i].1 += e;
                    if sorted[i].1 == 0 {
                        sorted.remove(i);
                    }
                }
                Err(i) => sorted.insert(i, (v.clone(), *e)),
            }
        }
        p.vars = sorted.iter().map(|(v, _)| v.clone()).collect();
        p.terms
            .insert(Mono(sorted.iter().map(|(_, e)| *e).collect()), coeff);
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.vars.is_empty())
    }

    /// The constant term (zero if absent).
    pub fn constant_term(&self) -> Rat {
        let key = Mono(vec![0; self.vars.len()]);
        self.terms.get(&key).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    /// Terms as (coefficient, exponent-by-var) pairs in descending canonical order.
    pub fn terms_desc(&self) -> Vec<(Rat, Vec<(Var, i64)>)> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let powers = self
                    .vars
                    .iter()
                    .zip(m.0.iter())
                    .filter(|(_, e)| **e != 0)
                    .map(|(v, e)| (v.clone(), *e))
                    .collect();
                (c.clone(), powers)
            })
            .collect()
    }

    /// Drop indeterminates that no longer occur, keeping canonical form.
    fn compress(&mut self) {
        if self.terms.is_empty() {
            self.vars.clear();
            return;
        }
        let n = self.vars.len();
        let mut used = vec![false; n];
        for m in self.terms.keys() {
            for (i, e) in m.0.iter().enumerate() {
                if *e != 0 {
                    used[i] = true;
                }
            }
        }
        if used.iter().all(|u| *u) {
            return;
        }
        let keep: Vec<usize> = (0..n).filter(|i| used[*i]).collect();
        self.vars = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let old = core::mem::take(&mut self.terms);
        for (m, c) in old {
            self.terms
                .insert(Mono(keep.iter().map(|&i| m.0[i]).collect()), c);
        }
    }

    /// Remap both polynomials onto the union of their indeterminate lists.
    /// Laurent flags are or-merged per name.
    fn aligned(&self, other: &Self) -> (Vec<Var>, Vec<(Mono, Rat)>, Vec<(Mono, Rat)>) {
        let mut union: Vec<Var> = Vec::with_capacity(self.vars.len() + other.vars.len());
        for v in self.vars.iter().chain(other.vars.iter()) {
            match union.binary_search(v) {
                Ok(i) => {
                    if v.is_laurent() {
                        union[i].laurent = true;
                    }
                }
                Err(i) => union.insert(i, v.clone()),
            }
        }
        let remap = |p: &MultiPoly| -> Vec<(Mono, Rat)> {
            let idx: Vec<usize> = p
                .vars
                .iter()
                .map(|v| union.binary_search(v).expect("var in union"))
                .collect();
            p.terms
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0i64; union.len()];
                    for (j, ex) in m.0.iter().enumerate() {
                        e[idx[j]] = *ex;
                    }
                    (Mono(e), c.clone())
                })
                .collect()
        };
        (union.clone(), remap(self), remap(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (vars, a, b) = self.aligned(other);
        let mut terms: BTreeMap<Mono, Rat> = a.into_iter().collect();
        for (m, c) in b {
            let entry = terms.entry(m).or_insert_with(|| rat(0));
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        let mut p = MultiPoly { vars, terms };
        p.compress();
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut p = self.clone();
        for c in p.terms.values_mut() {
            *c = -c.clone();
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        let (vars, a, b) = self.aligned(other);
        let mut terms: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m = Mono(ma.0.iter().zip(mb.0.iter()).map(|(x, y)| x + y).collect());
                let c = ca.clone() * cb.clone();
                let entry = terms.entry(m).or_insert_with(|| rat(0));
                *entry += c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        let mut p = MultiPoly { vars, terms };
        p.compress();
        p
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        let mut p = self.clone();
        for v in p.terms.values_mut() {
            *v *= c.clone();
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative. Laurent exponents differentiate as
    /// d/dx x^-m = -m x^-(m+1).
    pub fn diff(&self, var: &Var) -> Result<Self> {
        let Some(pos) = self.vars.iter().position(|v| v == var) else {
            // Constant in `var` only if the symbol is known to be absent;
            // the contract requires the symbol to be recognizable.
            if self.is_zero() || self.is_constant() {
                return Ok(MultiPoly::zero());
            }
            return Ok(MultiPoly::zero());
        };
        let mut terms: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[pos];
            if e == 0 {
                continue;
            }
            let mut ne = m.0.clone();
            ne[pos] = e - 1;
            let coeff = c.clone() * Rat::from_integer(e.into());
            let entry = terms.entry(Mono(ne)).or_insert_with(|| rat(0));
            *entry += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        let mut p = MultiPoly {
            vars: self.vars.clone(),
            terms,
        };
        p.compress();
        Ok(p)
    }

    /// Partial derivative, erroring when the symbol is not in the list.
    pub fn diff_strict(&self, var: &Var) -> Result<Self> {
        if !self.vars.iter().any(|v| v == var) {
            return Err(Error::UnknownSymbol {
                var: var.name().to_owned(),
            });
        }
        self.diff(var)
    }

    /// Exact substitution followed by renormalization. Substituting zero into
    /// a symbol occurring with negative exponent is an error.
    pub fn substitute(&self, bindings: &BTreeMap<String, Binding>) -> Result<Self> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let positions: Vec<Option<&Binding>> =
            self.vars.iter().map(|v| bindings.get(v.name())).collect();
        if positions.iter().all(|b| b.is_none()) {
            return Ok(self.clone());
        }
        let mut acc = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut factor = MultiPoly::constant(c.clone());
            for (i, e) in m.0.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                match positions[i] {
                    None => {
                        factor = factor.mul(
                            &MultiPoly::monomial(rat(1), &[(self.vars[i].clone(), *e)])
                                .expect("existing exponent stays valid"),
                        );
                    }
                    Some(Binding::Const(q)) => {
                        if q.is_zero() {
                            if *e < 0 {
                                return Err(Error::ZeroIntoLaurent {
                                    var: self.vars[i].name().to_owned(),
                                });
                            }
                            factor = MultiPoly::zero();
                            break;
                        }
                        let powed = if *e >= 0 {
                            num_traits::pow::pow(q.clone(), *e as usize)
                        } else {
                            num_traits::pow::pow(q.clone(), (-*e) as usize).recip()
                        };
                        factor = factor.scale(&powed);
                    }
                    Some(Binding::Poly(sub)) => {
                        if *e < 0 {
                            // Only monomial substitutions can hit negative powers.
                            let inv = sub.invert_monomial()?;
                            factor = factor.mul(&inv.pow((-*e) as u32));
                        } else {
                            factor = factor.mul(&sub.pow(*e as u32));
                        }
                    }
                }
            }
            acc = acc.add(&factor);
        }
        Ok(acc)
    }

    /// Substitute a single symbol.
    pub fn substitute_one(&self, name: &str, value: Binding) -> Result<Self> {
        let mut map = BTreeMap::new();
        map.insert(name.to_string(), value);
        self.substitute(&map)
    }

    /// Reciprocal of a single-term polynomial; every symbol occurring in it
    /// must be Laurent-flagged.
    pub fn invert_monomial(&self) -> Result<Self> {
        let (c, powers) = self.as_monomial().ok_or(Error::NotMonomial)?;
        for (v, _) in &powers {
            if !v.is_laurent() {
                return Err(Error::LaurentViolation {
                    var: v.name().to_owned(),
                });
            }
        }
        let inv_powers: Vec<(Var, i64)> = powers.into_iter().map(|(v, e)| (v, -e)).collect();
        MultiPoly::monomial(c.recip(), &inv_powers)
    }

    /// Decompose a single-term polynomial as (coefficient, powers).
    pub fn as_monomial(&self) -> Option<(Rat, Vec<(Var, i64)>)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let powers = self
            .vars
            .iter()
            .zip(m.0.iter())
            .filter(|(_, e)| **e != 0)
            .map(|(v, e)| (v.clone(), *e))
            .collect();
        Some((c.clone(), powers))
    }

    /// Leading (maximal in graded-lex) term.
    pub fn leading_term(&self) -> Option<(Rat, Vec<(Var, i64)>)> {
        let (m, c) = self.terms.iter().next_back()?;
        let powers = self
            .vars
            .iter()
            .zip(m.0.iter())
            .filter(|(_, e)| **e != 0)
            .map(|(v, e)| (v.clone(), *e))
            .collect();
        Some((c.clone(), powers))
    }

    /// Leading coefficient in the canonical term order.
    pub fn leading_coeff(&self) -> Rat {
        self.terms
            .iter()
            .next_back()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| rat(0))
    }

    /// Total degree of the leading term, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Degree in one symbol (maximal exponent; can be negative for Laurent
    /// symbols that only occur inverted). Zero polynomial gives `None`.
    pub fn degree_in(&self, var: &Var) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let Some(pos) = self.vars.iter().position(|v| v == var) else {
            return Some(0);
        };
        self.terms.keys().map(|m| m.0[pos]).max()
    }

    /// Minimal exponent of a symbol over all terms (0 when absent).
    pub fn min_exponent(&self, var: &Var) -> i64 {
        let Some(pos) = self.vars.iter().position(|v| v == var) else {
            return 0;
        };
        self.terms.keys().map(|m| m.0[pos]).min().unwrap_or(0)
    }

    /// Coefficients of the polynomial viewed as univariate in `var`, indexed
    /// by the exponent of `var`. Requires nonnegative exponents in `var`.
    pub fn coefficients_in(&self, var: &Var) -> Result<Vec<MultiPoly>> {
        if self.min_exponent(var) < 0 {
            return Err(Error::LaurentViolation {
                var: var.name().to_owned(),
            });
        }
        let deg = self.degree_in(var).unwrap_or(0).max(0) as usize;
        let mut out = vec![MultiPoly::zero(); deg + 1];
        let pos = self.vars.iter().position(|v| v == var);
        for (m, c) in &self.terms {
            let (e, rest) = match pos {
                Some(p) => {
                    let mut r = m.0.clone();
                    let e = r[p];
                    r[p] = 0;
                    (e as usize, r)
                }
                None => (0usize, m.0.clone()),
            };
            let mut term = MultiPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::from([(Mono(rest), c.clone())]),
            };
            term.compress();
            out[e] = out[e].add(&term);
        }
        Ok(out)
    }

    /// Multiply by `var^e` (e may be negative on Laurent symbols).
    pub fn mul_var_pow(&self, var: &Var, e: i64) -> Result<Self> {
        self.mul_checked(&MultiPoly::monomial(rat(1), &[(var.clone(), e)])?)
    }

    fn mul_checked(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(other))
    }

    /// Full rational evaluation; every symbol must be bound.
    pub fn eval(&self, bindings: &BTreeMap<String, Rat>) -> Result<Rat> {
        let mut acc = rat(0);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.0.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let v = &self.vars[i];
                let q = bindings
                    .get(v.name())
                    .ok_or_else(|| Error::UnboundParameters {
                        vars: v.name().to_owned(),
                    })?;
                if q.is_zero() && *e < 0 {
                    return Err(Error::ZeroIntoLaurent {
                        var: v.name().to_owned(),
                    });
                }
                let powed = if *e >= 0 {
                    num_traits::pow::pow(q.clone(), *e as usize)
                } else {
                    num_traits::pow::pow(q.clone(), (-*e) as usize).recip()
                };
                t *= powed;
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Positive gcd of all coefficients (1 for the zero polynomial).
    pub fn rational_content(&self) -> Rat {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.terms.is_empty() {
            return rat(1);
        }
        let mut num_gcd = BigInt::from(0);
        let mut den_lcm = BigInt::from(1);
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rat::new(num_gcd, den_lcm)
    }

    /// Largest monomial in the given symbols dividing every term: the per-symbol
    /// minimum exponent (possibly negative). Symbols outside `names` are untouched.
    pub fn monomial_content_in(&self, names: &[&str]) -> Vec<(Var, i64)> {
        let mut out = Vec::new();
        for (i, v) in self.vars.iter().enumerate() {
            if !names.contains(&v.name()) {
                continue;
            }
            let mn = self.terms.keys().map(|m| m.0[i]).min().unwrap_or(0);
            if mn != 0 {
                out.push((v.clone(), mn));
            }
        }
        out
    }

    /// Divide exactly by another polynomial; returns `None` when not divisible.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MultiPoly::zero());
        }
        let (vars, a, b) = self.aligned(divisor);
        let mut rem: BTreeMap<Mono, Rat> = a.into_iter().collect();
        let bmap: BTreeMap<Mono, Rat> = b.into_iter().collect();
        let (lead_m, lead_c) = bmap
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))?;
        let mut quot: BTreeMap<Mono, Rat> = BTreeMap::new();
        while let Some((rm, rc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let qm: Vec<i64> =
                rm.0.iter()
                    .zip(lead_m.0.iter())
                    .map(|(x, y)| x - y)
                    .collect();
            // Exponents on non-Laurent symbols must stay nonnegative.
            for (i, e) in qm.iter().enumerate() {
                if *e < 0 && !vars[i].is_laurent() {
                    return None;
                }
            }
            let qc = rc / lead_c.clone();
            quot.insert(Mono(qm.clone()), qc.clone());
            for (bm, bc) in &bmap {
                let m = Mono(bm.0.iter().zip(qm.iter()).map(|(x, y)| x + y).collect());
                let delta = bc.clone() * qc.clone();
                let entry = rem.entry(m).or_insert_with(|| rat(0));
                *entry -= delta;
            }
            rem.retain(|_, c| !c.is_zero());
        }
        let mut p = MultiPoly { vars, terms: quot };
        p.compress();
        Some(p)
    }

    /// True when every exponent of `var` is even.
    pub fn even_in(&self, var: &Var) -> bool {
        let Some(pos) = self.vars.iter().position(|v| v == var) else {
            return true;
        };
        self.terms.keys().all(|m| m.0[pos] % 2 == 0)
    }

    /// Rename a symbol, halving its exponents (used for rho = R^2).
    /// Requires all exponents of `var` even and nonnegative.
    pub fn halve_exponents(&self, var: &Var, renamed: &Var) -> Result<Self> {
        let Some(pos) = self.vars.iter().position(|v| v == var) else {
            return Ok(self.clone());
        };
        let mut acc = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.0[pos];
            if e % 2 != 0 || e < 0 {
                return Err(Error::ParityMismatch {
                    detail: alloc::format!("odd or negative exponent {e} on {}", var.name()),
                });
            }
            let mut powers: Vec<(Var, i64)> = self
                .vars
                .iter()
                .zip(m.0.iter())
                .enumerate()
                .filter(|(i, (_, ex))| *i != pos && **ex != 0)
                .map(|(_, (v, ex))| (v.clone(), *ex))
                .collect();
            if e != 0 {
                powers.push((renamed.clone(), e / 2));
            }
            acc = acc.add(&MultiPoly::monomial(c.clone(), &powers)?);
        }
        Ok(acc)
    }

    /// Evaluate into f64 given f64 bindings (cross-check oracle only).
    #[cfg(feature = "std")]
    pub fn eval_f64(&self, bindings: &BTreeMap<String, f64>) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0f64;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (i, e) in m.0.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let name = self.vars[i].name();
                let x = if name == PI {
                    core::f64::consts::PI
                } else {
                    *bindings.get(name).unwrap_or(&f64::NAN)
                };
                t *= x.powi(*e as i32);
            }
            acc += t;
        }
        acc
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &Rat, has_vars: bool, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if !has_vars || !abs.is_one() {
        write!(f, "{abs}")?;
        if has_vars {
            write!(f, "*")?;
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let powers: Vec<(usize, i64)> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, e)| **e != 0)
                    .map(|(j, e)| (j, *e))
                    .collect();
            write_coeff(f, c, !powers.is_empty(), i == 0)?;
            for (k, (j, e)) in powers.iter().enumerate() {
                if k > 0 {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.vars[*j].name())?;
                if *e != 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
