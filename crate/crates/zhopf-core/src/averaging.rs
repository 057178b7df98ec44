//! The averaged-function recurrence.
//!
//! `y_1 = int F_1`; for `i >= 2`,
//! `y_i = i! int ( F_i + sum_{l=1}^{i-1} sum_{m=1}^{l} (1/l!) *
//!        d^m F_{i-l} applied to each term of B[l,m](y_1, ..., y_{l-m+1}) )`.
//!
//! The multilinear derivative is applied termwise to the Bell polynomial: a
//! term with multiplicities `b_j` contracts `d^m F` against `b_j` copies of
//! each `y_j` (`m = sum b_j`). Evaluating the Bell polynomial first and
//! differentiating afterwards is not meaningful for vector arguments and is
//! not implemented.
//!
//! `y_i` is stored with its `i!` scaling; division by `i!` happens in
//! [`AveragingSession::averaged`]. Computed `y_i` are memoized per session.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::bell::{direct_tuples, partial_bell};
use crate::eps::EpsSeries;
use crate::error::{Error, Result};
use crate::poly::{Binding, MultiPoly, Var};
use crate::rational::{factorial, Rat};
use crate::standard_form::StandardForm;
use crate::system::SystemSpec;
use crate::trig::TrigPoly;

/// One averaged function `f_i = y_i(2 pi, .)/i!`: theta-free components in
/// the unknowns and parameters, Laurent in `R`, `b` and flagged parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AveragedFunction {
    pub order: usize,
    /// Components `f_{i,1}, f_{i,3}, ..., f_{i,n}`.
    pub components: Vec<MultiPoly>,
}

impl AveragedFunction {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(MultiPoly::is_zero)
    }
}

/// Memoizing evaluator of the recurrence over one standard form.
pub struct AveragingSession<'a> {
    sf: &'a StandardForm,
    unknowns: Vec<Var>,
    /// `ys[i-1]` holds `y_i` (including the `i!` factor), one entry per component.
    ys: Vec<Vec<TrigPoly>>,
    /// Memoized partial derivatives of the standard-form components:
    /// key = (order j1, component, sorted multi-index of unknowns).
    derivs: BTreeMap<(usize, usize, Vec<usize>), TrigPoly>,
}

impl<'a> AveragingSession<'a> {
    pub fn new(sf: &'a StandardForm) -> Self {
        AveragingSession {
            sf,
            unknowns: sf.unknowns(),
            ys: Vec::new(),
            derivs: BTreeMap::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.unknowns.len()
    }

    /// `y_i(theta, eta)` with the `i!` scaling, memoized.
    pub fn y(&mut self, i: usize) -> Result<Vec<TrigPoly>> {
        if i == 0 || i > self.sf.order {
            return Err(Error::DegreeOutOfRange {
                detail: format!("y_{i} outside 1..={}", self.sf.order),
            });
        }
        while self.ys.len() < i {
            let next = self.ys.len() + 1;
            let computed = self.compute_y(next)?;
            self.ys.push(computed);
        }
        Ok(self.ys[i - 1].clone())
    }

    fn compute_y(&mut self, i: usize) -> Result<Vec<TrigPoly>> {
        let d = self.dimension();
        let mut integrand: Vec<TrigPoly> = self.sf.components_at(i).to_vec();
        for l in 1..i {
            let inv_l_fact = factorial(l).recip();
            for m in 1..=l {
                for term in partial_bell(l, m)? {
                    // b_j copies of y_j, flattened into the m slots.
                    let mut slots: Vec<usize> = Vec::with_capacity(m);
                    for (j, b) in term.multiplicities.iter().enumerate() {
                        for _ in 0..*b {
                            slots.push(j + 1);
                        }
                    }
                    debug_assert_eq!(slots.len(), m);
                    let weight = term.coefficient.clone() * inv_l_fact.clone();
                    let contraction = self.contract(i - l, &slots)?;
                    for c in 0..d {
                        integrand[c] = integrand[c].add(&contraction[c].scale(&weight));
                    }
                }
            }
        }
        let scale = factorial(i);
        Ok(integrand
            .into_iter()
            .map(|f| f.antiderivative().scale(&scale))
            .collect())
    }

    /// `d^m F_{j1}` contracted against the product of the y's named by
    /// `slots` (orders of the vectors, one per derivative slot).
    fn contract(&mut self, j1: usize, slots: &[usize]) -> Result<Vec<TrigPoly>> {
        let d = self.dimension();
        // The slot vectors are lower-order y's: ensured computed.
        for &j in slots {
            let _ = self.y(j)?;
        }
        let mut out = vec![TrigPoly::zero(); d];
        let mut index = vec![0usize; slots.len()];
        loop {
            // Product of the chosen components.
            let mut product = TrigPoly::from_poly(MultiPoly::one());
            for (slot, &zi) in index.iter().enumerate() {
                let yj = &self.ys[slots[slot] - 1][zi];
                product = product.mul(yj);
            }
            let mut sorted = index.clone();
            sorted.sort_unstable();
            for (c, out_c) in out.iter_mut().enumerate() {
                let df = self.derivative(j1, c, &sorted)?;
                if !df.is_zero() {
                    *out_c = out_c.add(&df.mul(&product));
                }
            }
            // Advance the multi-index over unknowns^m.
            let mut pos = 0;
            loop {
                if pos == index.len() {
                    return Ok(out);
                }
                index[pos] += 1;
                if index[pos] < d {
                    break;
                }
                index[pos] = 0;
                pos += 1;
            }
        }
    }

    fn derivative(&mut self, j1: usize, comp: usize, sorted_index: &[usize]) -> Result<TrigPoly> {
        let key = (j1, comp, sorted_index.to_vec());
        if let Some(t) = self.derivs.get(&key) {
            return Ok(t.clone());
        }
        let value = if sorted_index.is_empty() {
            self.sf.component(j1, comp).clone()
        } else {
            let (rest, last) = (
                &sorted_index[..sorted_index.len() - 1],
                sorted_index[sorted_index.len() - 1],
            );
            let lower = self.derivative(j1, comp, rest)?;
            lower.diff_var(&self.unknowns[last])?
        };
        self.derivs.insert(key, value.clone());
        Ok(value)
    }

    /// `f_i = y_i(2 pi, .)/i!`.
    pub fn averaged(&mut self, i: usize) -> Result<AveragedFunction> {
        let y = self.y(i)?;
        let inv_fact = factorial(i).recip();
        Ok(AveragedFunction {
            order: i,
            components: y.iter().map(|c| c.eval_two_pi().scale(&inv_fact)).collect(),
        })
    }

    /// Alternative route for cross-checking: the direct tuple recurrence with
    /// weights `1/(b1! b2! 2!^b2 ... bl! l!^bl)`, bypassing the Bell
    /// enumeration (`y_i` inputs still come from the memo table).
    pub fn y_direct_route(&mut self, i: usize) -> Result<Vec<TrigPoly>> {
        if i == 0 || i > self.sf.order {
            return Err(Error::DegreeOutOfRange {
                detail: format!("y_{i} outside 1..={}", self.sf.order),
            });
        }
        let d = self.dimension();
        let mut integrand: Vec<TrigPoly> = self.sf.components_at(i).to_vec();
        for l in 1..i {
            for (tuple, weight) in direct_tuples(l) {
                let mut slots: Vec<usize> = Vec::new();
                for (j, b) in tuple.iter().enumerate() {
                    for _ in 0..*b {
                        slots.push(j + 1);
                    }
                }
                let contraction = self.contract(i - l, &slots)?;
                for c in 0..d {
                    integrand[c] = integrand[c].add(&contraction[c].scale(&weight));
                }
            }
        }
        let scale = factorial(i);
        Ok(integrand
            .into_iter()
            .map(|f| f.antiderivative().scale(&scale))
            .collect())
    }
}

/// Free-standing multilinear contraction: `d^L F` applied to the given `L`
/// vectors, all of length equal to the number of `unknowns`.
pub fn frechet_apply(
    f: &[TrigPoly],
    unknowns: &[Var],
    vectors: &[Vec<TrigPoly>],
) -> Result<Vec<TrigPoly>> {
    let d = unknowns.len();
    for v in vectors {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
    }
    let mut out = vec![TrigPoly::zero(); f.len()];
    if vectors.is_empty() {
        return Ok(f.to_vec());
    }
    let mut index = vec![0usize; vectors.len()];
    loop {
        let mut product = TrigPoly::from_poly(MultiPoly::one());
        for (slot, &zi) in index.iter().enumerate() {
            product = product.mul(&vectors[slot][zi]);
        }
        for (c, fc) in f.iter().enumerate() {
            let mut df = fc.clone();
            for &zi in index.iter() {
                df = df.diff_var(&unknowns[zi])?;
                if df.is_zero() {
                    break;
                }
            }
            if !df.is_zero() {
                out[c] = out[c].add(&df.mul(&product));
            }
        }
        let mut pos = 0;
        loop {
            if pos == index.len() {
                return Ok(out);
            }
            index[pos] += 1;
            if index[pos] < d {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

/// Substitute vanishing constraints into a system and verify that the
/// averaged functions of orders `1..=upto` are identically zero afterwards.
pub fn impose_vanishing(
    spec: &SystemSpec,
    constraints: &BTreeMap<String, Binding>,
    upto: usize,
    opts: crate::standard_form::StandardFormOptions,
) -> Result<SystemSpec> {
    let constrained = spec.substitute_params(constraints)?;
    if upto > 0 {
        let sf = crate::standard_form::to_standard_form(&constrained, opts)?;
        let mut session = AveragingSession::new(&sf);
        verify_vanishing(&mut session, upto)?;
    }
    Ok(constrained)
}

/// Check `f_1 = ... = f_upto = 0`; on failure list the surviving terms.
pub fn verify_vanishing(session: &mut AveragingSession, upto: usize) -> Result<()> {
    for i in 1..=upto {
        let f = session.averaged(i)?;
        if !f.is_zero() {
            let mut surviving = Vec::new();
            for (c, p) in f.components.iter().enumerate() {
                if !p.is_zero() {
                    let label = if c == 0 { 1 } else { c + 2 };
                    surviving.push(format!("f[{i},{label}] = {p}"));
                }
            }
            return Err(Error::VanishingFailed {
                detail: surviving.join("; "),
            });
        }
    }
    Ok(())
}

/// Truncated expansion of the periodic solution seeded at a verified zero
/// `z*` of `f_j`: `x(theta, eps) = z* + sum_i eps^i y_i(theta, z*)/i!`.
/// Returns one eps-series per component of eta.
pub fn periodic_solution_approx(
    session: &mut AveragingSession,
    z_star: &[Rat],
    j: usize,
) -> Result<Vec<EpsSeries>> {
    let d = session.dimension();
    if z_star.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: z_star.len(),
        });
    }
    let names: Vec<String> = session
        .unknowns
        .iter()
        .map(|v| v.name().to_string())
        .collect();
    let mut bindings: BTreeMap<String, Binding> = BTreeMap::new();
    for (name, q) in names.iter().zip(z_star.iter()) {
        bindings.insert(name.clone(), Binding::Const(q.clone()));
    }
    let mut out: Vec<EpsSeries> = Vec::with_capacity(d);
    for c in 0..d {
        let mut series = EpsSeries::monomial(
            j,
            0,
            TrigPoly::from_poly(MultiPoly::constant(z_star[c].clone())),
        );
        for i in 1..=j {
            let yi = session.y(i)?;
            let at_star = yi[c].substitute(&bindings)?;
            series.set_coeff(i, at_star.scale(&factorial(i).recip()));
        }
        out.push(series);
    }
    Ok(out)
}
