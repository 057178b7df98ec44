//! Perturbed polynomial systems near a complete zero-Hopf equilibrium.
//!
//! A `SystemSpec` is the validated input form: dimension `n >= 3`, degree
//! bound `N >= 2`, perturbation order `k >= 1`, frequency `b != 0`, and
//! coefficient tables for the unperturbed nonlinearities (total degree
//! `2..=N`) and the eps^j perturbations (total degree `1..=N`, `j <= k`).
//! The linear part is the Jordan block (0, -b; b, 0) with zeros elsewhere;
//! it is implicit in the form and verified when converting a raw system.
//!
//! Coefficients are polynomials in the declared parameters (Laurent in the
//! frequency symbol and any parameter flagged `laurent`), which is what a
//! linear change of basis with monomial determinant produces.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Binding, MultiPoly, Var};
use crate::rational::{rat, Rat};
use crate::resultant::bareiss_determinant;

/// Name of the small parameter in raw equations.
pub const EPS: &str = "eps";

/// Frequency of the linear rotation: a nonzero rational or a symbol assumed
/// nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Freq {
    Sym(Var),
    Num(Rat),
}

impl Freq {
    pub fn to_poly(&self) -> MultiPoly {
        match self {
            Freq::Sym(v) => MultiPoly::var(v),
            Freq::Num(q) => MultiPoly::constant(q.clone()),
        }
    }

    pub fn symbol(&self) -> Option<&Var> {
        match self {
            Freq::Sym(v) => Some(v),
            Freq::Num(_) => None,
        }
    }
}

/// Key of one coefficient: eps power (0 = unperturbed), exponent vector of
/// the phase variables, equation index (0-based; 0 and 1 are the rotating
/// pair, `s >= 2` the zero-eigenvalue directions).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoeffKey {
    pub eps: usize,
    pub exps: Vec<u32>,
    pub eq: usize,
}

/// Validated perturbed system in the canonical zero-Hopf input form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSpec {
    pub n: usize,
    pub degree: usize,
    pub order: usize,
    pub freq: Freq,
    coeffs: BTreeMap<CoeffKey, MultiPoly>,
}

impl SystemSpec {
    pub fn new(n: usize, degree: usize, order: usize, freq: Freq) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: n,
            });
        }
        if degree < 2 {
            return Err(Error::DegreeOutOfRange {
                detail: format!("N = {degree} < 2"),
            });
        }
        if order == 0 {
            return Err(Error::DegreeOutOfRange {
                detail: "k = 0".into(),
            });
        }
        if let Freq::Num(q) = &freq {
            if q.is_zero() {
                return Err(Error::ZeroFrequency);
            }
        }
        Ok(SystemSpec {
            n,
            degree,
            order,
            freq,
            coeffs: BTreeMap::new(),
        })
    }

    /// Insert (accumulate) a coefficient. Degree bounds are enforced here:
    /// unperturbed entries need total degree in `2..=N`, perturbation entries
    /// (`1 <= eps <= k`) total degree in `1..=N`.
    pub fn add_coeff(
        &mut self,
        eps: usize,
        exps: &[u32],
        eq: usize,
        value: MultiPoly,
    ) -> Result<()> {
        if exps.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: exps.len(),
            });
        }
        if eq >= self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: eq,
            });
        }
        let m: u32 = exps.iter().sum();
        if eps == 0 {
            if m < 2 || m as usize > self.degree {
                return Err(Error::DegreeOutOfRange {
                    detail: format!(
                        "unperturbed term of degree {m} (allowed 2..={})",
                        self.degree
                    ),
                });
            }
        } else {
            if eps > self.order {
                return Err(Error::DegreeOutOfRange {
                    detail: format!("eps^{eps} term beyond order k = {}", self.order),
                });
            }
            if m < 1 || m as usize > self.degree {
                return Err(Error::DegreeOutOfRange {
                    detail: format!(
                        "perturbation term of degree {m} (allowed 1..={})",
                        self.degree
                    ),
                });
            }
        }
        if value.is_zero() {
            return Ok(());
        }
        let key = CoeffKey {
            eps,
            exps: exps.to_vec(),
            eq,
        };
        let entry = self
            .coeffs
            .entry(key.clone())
            .or_insert_with(MultiPoly::zero);
        *entry = entry.add(&value);
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
        Ok(())
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&CoeffKey, &MultiPoly)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, eps: usize, exps: &[u32], eq: usize) -> MultiPoly {
        self.coeffs
            .get(&CoeffKey {
                eps,
                exps: exps.to_vec(),
                eq,
            })
            .cloned()
            .unwrap_or_else(MultiPoly::zero)
    }

    /// Substitute rational values (or renamings) into every coefficient.
    /// This is how vanishing conditions like `a1 = b1 = 0` are imposed; the
    /// caller is responsible for re-verifying that the lower-order averaged
    /// functions vanish afterwards.
    pub fn substitute_params(&self, bindings: &BTreeMap<String, Binding>) -> Result<SystemSpec> {
        let mut out = SystemSpec {
            n: self.n,
            degree: self.degree,
            order: self.order,
            freq: self.freq.clone(),
            coeffs: BTreeMap::new(),
        };
        if let Freq::Sym(v) = &self.freq {
            if let Some(Binding::Const(q)) = bindings.get(v.name()) {
                if q.is_zero() {
                    return Err(Error::ZeroFrequency);
                }
                out.freq = Freq::Num(q.clone());
            }
        }
        for (key, value) in &self.coeffs {
            let substituted = value.substitute(bindings)?;
            if !substituted.is_zero() {
                out.coeffs.insert(key.clone(), substituted);
            }
        }
        Ok(out)
    }

    /// Parameter symbols appearing in the coefficient tables (frequency
    /// symbol included when symbolic).
    pub fn parameters(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        let mut push = |v: &Var| {
            if let Err(i) = out.binary_search(v) {
                out.insert(i, v.clone());
            }
        };
        if let Freq::Sym(v) = &self.freq {
            push(v);
        }
        for value in self.coeffs.values() {
            for v in value.vars() {
                push(v);
            }
        }
        out
    }
}

/// Unvalidated polynomial system: one right-hand side per equation, written
/// in the phase symbols `x1..xn`, the small parameter `eps`, and parameters.
#[derive(Clone, Debug)]
pub struct RawSystem {
    pub n: usize,
    pub degree: usize,
    pub order: usize,
    pub freq: Freq,
    pub equations: Vec<MultiPoly>,
}

pub fn phase_var(i: usize) -> Var {
    Var::new(&format!("x{i}"))
}

impl RawSystem {
    /// Drop all terms of eps-degree above the declared order. Products of
    /// eps-expanded coefficients generate such terms; they never contribute
    /// to the averaged functions up to order `k`, so this is the exact
    /// analogue of Taylor-expanding the right-hand sides at eps = 0.
    pub fn truncate_eps(&self) -> Result<RawSystem> {
        let eps_var = Var::new(EPS);
        let mut equations = Vec::with_capacity(self.equations.len());
        for rhs in &self.equations {
            let parts = rhs.coefficients_in(&eps_var)?;
            let mut acc = MultiPoly::zero();
            for (j, part) in parts.iter().enumerate().take(self.order + 1) {
                let eps_pow = MultiPoly::monomial(rat(1), &[(eps_var.clone(), j as i64)])?;
                acc = acc.add(&part.mul(&eps_pow));
            }
            equations.push(acc);
        }
        Ok(RawSystem {
            n: self.n,
            degree: self.degree,
            order: self.order,
            freq: self.freq.clone(),
            equations,
        })
    }

    /// Conjugate by an invertible matrix: old variables in terms of new,
    /// `x_old_i = sum_j m[i][j] * x_new_j`. The determinant must be a nonzero
    /// rational or a Laurent-invertible monomial so the inverse is exact.
    /// The result is eps-truncated at the declared order (the change of
    /// basis is where coefficient products pile up higher eps powers).
    pub fn apply_linear_change(&self, m: &[Vec<MultiPoly>]) -> Result<RawSystem> {
        let n = self.n;
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.len(),
            });
        }
        let det = bareiss_determinant(m.to_vec());
        if det.is_zero() {
            return Err(Error::SingularMatrix {
                detail: "determinant is zero".into(),
            });
        }
        let det_inv = det.invert_monomial().map_err(|_| Error::SingularMatrix {
            detail: format!("determinant `{det}` is not an invertible monomial"),
        })?;

        // Substitution map x_i -> sum_j m[i][j] u_j (u reuses the x names;
        // the substitution is simultaneous so there is no capture).
        let mut bindings: BTreeMap<String, Binding> = BTreeMap::new();
        for i in 0..n {
            let mut form = MultiPoly::zero();
            for (j, entry) in m[i].iter().enumerate() {
                form = form.add(&entry.mul(&MultiPoly::var(&phase_var(j + 1))));
            }
            bindings.insert(phase_var(i + 1).name().to_string(), Binding::Poly(form));
        }
        let transformed: Vec<MultiPoly> = self
            .equations
            .iter()
            .map(|g| g.substitute(&bindings))
            .collect::<Result<_>>()?;

        // Adjugate / det, times the transformed right-hand sides.
        let mut new_eqs = vec![MultiPoly::zero(); n];
        for (j, new_eq) in new_eqs.iter_mut().enumerate() {
            for (i, rhs) in transformed.iter().enumerate() {
                let cof = cofactor(m, i, j);
                *new_eq = new_eq.add(&cof.mul(rhs));
            }
            *new_eq = new_eq.mul(&det_inv);
        }
        RawSystem {
            n,
            degree: self.degree,
            order: self.order,
            freq: self.freq.clone(),
            equations: new_eqs,
        }
        .truncate_eps()
    }

    /// Validate the zero-Hopf input form and split into coefficient tables.
    ///
    /// Rejects: constant terms, terms of total degree above `N`, eps-degrees
    /// above `k`, and any linear part differing from the Jordan block
    /// (0, -b; b, 0) with zeros elsewhere.
    pub fn into_spec(&self) -> Result<SystemSpec> {
        let n = self.n;
        if self.equations.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.equations.len(),
            });
        }
        let mut spec = SystemSpec::new(n, self.degree, self.order, self.freq.clone())?;
        let eps_var = Var::new(EPS);
        let phase: Vec<Var> = (1..=n).map(phase_var).collect();
        let b = self.freq.to_poly();

        // Expected linear part at eps^0.
        let mut expected_linear: BTreeMap<(usize, usize), MultiPoly> = BTreeMap::new();
        expected_linear.insert((0, 1), b.neg());
        expected_linear.insert((1, 0), b.clone());

        for (eq, rhs) in self.equations.iter().enumerate() {
            // Split by eps power, then by phase-variable exponents.
            let eps_parts = rhs.coefficients_in(&eps_var)?;
            for (j, part) in eps_parts.iter().enumerate() {
                if part.is_zero() {
                    continue;
                }
                if j > self.order {
                    return Err(Error::DegreeOutOfRange {
                        detail: format!(
                            "equation {} carries eps^{j} beyond k = {}",
                            eq + 1,
                            self.order
                        ),
                    });
                }
                for (coeff, exps) in split_phase_terms(part, &phase)? {
                    let m: u32 = exps.iter().sum();
                    if m == 0 {
                        return Err(Error::DegreeOutOfRange {
                            detail: format!("constant term in equation {}", eq + 1),
                        });
                    }
                    if j == 0 && m == 1 {
                        // Linear part: must match the Jordan block exactly.
                        let var_idx = exps.iter().position(|e| *e == 1).unwrap();
                        let expected = expected_linear
                            .get(&(eq, var_idx))
                            .cloned()
                            .unwrap_or_else(MultiPoly::zero);
                        if coeff != expected {
                            return Err(Error::NotJordanForm {
                                detail: format!(
                                    "coefficient of x{} in equation {} is `{}`, expected `{}`",
                                    var_idx + 1,
                                    eq + 1,
                                    coeff,
                                    expected
                                ),
                            });
                        }
                        expected_linear.remove(&(eq, var_idx));
                        continue;
                    }
                    spec.add_coeff(j, &exps, eq, coeff)?;
                }
            }
        }
        if !expected_linear.is_empty() {
            let missing: Vec<String> = expected_linear
                .keys()
                .map(|(eq, v)| format!("x{} in equation {}", v + 1, eq + 1))
                .collect();
            return Err(Error::NotJordanForm {
                detail: format!("missing rotation terms: {}", missing.join(", ")),
            });
        }
        Ok(spec)
    }
}

/// Group a polynomial by its phase-variable monomials; returns (parameter
/// coefficient, exponent vector) pairs.
fn split_phase_terms(p: &MultiPoly, phase: &[Var]) -> Result<Vec<(MultiPoly, Vec<u32>)>> {
    let mut groups: BTreeMap<Vec<u32>, MultiPoly> = BTreeMap::new();
    for (coeff, powers) in p.terms_desc() {
        let mut exps = vec![0u32; phase.len()];
        let mut param_powers: Vec<(Var, i64)> = Vec::new();
        for (v, e) in powers {
            if let Some(idx) = phase.iter().position(|ph| *ph == v) {
                if e < 0 {
                    return Err(Error::LaurentViolation {
                        var: v.name().to_string(),
                    });
                }
                exps[idx] = e as u32;
            } else {
                param_powers.push((v, e));
            }
        }
        let coeff_poly = MultiPoly::monomial(coeff, &param_powers)?;
        let entry = groups.entry(exps).or_insert_with(MultiPoly::zero);
        *entry = entry.add(&coeff_poly);
    }
    Ok(groups
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (c, e))
        .collect())
}

fn cofactor(m: &[Vec<MultiPoly>], i: usize, j: usize) -> MultiPoly {
    let n = m.len();
    let minor: Vec<Vec<MultiPoly>> = (0..n)
        .filter(|r| *r != i)
        .map(|r| {
            (0..n)
                .filter(|c| *c != j)
                .map(|c| m[r][c].clone())
                .collect()
        })
        .collect();
    let det = bareiss_determinant(minor);
    if (i + j) % 2 == 1 {
        det.neg()
    } else {
        det
    }
}

/// Identity matrix of polynomial entries.
pub fn identity_matrix(n: usize) -> Vec<Vec<MultiPoly>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        MultiPoly::one()
                    } else {
                        MultiPoly::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Convenience: build a rational-entry matrix.
pub fn rational_matrix(entries: &[&[i64]]) -> Vec<Vec<MultiPoly>> {
    entries
        .iter()
        .map(|row| row.iter().map(|e| MultiPoly::constant(rat(*e))).collect())
        .collect()
}
