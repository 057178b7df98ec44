//! Semi-algebraic systems built from averaged functions.
//!
//! The equations are the normalized numerators of the averaged-function
//! components; the inequalities are `R > 0`, `Dbar != 0` (the numerator of
//! the Jacobian determinant) and `b != 0`, plus user-declared nonvanishing
//! parameters. Numerator normalization strips rational content and common
//! monomial factors in symbols constrained nonzero (`pi`, `R`, the frequency
//! symbol, Laurent-flagged parameters); the canonical leading coefficient is
//! made positive.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::averaging::AveragedFunction;
use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Var, PI};
use crate::ratfn::{strip_content, RationalFn};
use crate::resultant::bareiss_determinant;
use crate::standard_form::unknown_vars;

/// Equations and inequalities of the root-counting problem.
#[derive(Clone, Debug)]
pub struct SemiAlgebraicSystem {
    /// Unknowns eta, in elimination-relevant order: positive variable first.
    pub unknowns: Vec<Var>,
    /// Normalized numerators, one per averaged-function component.
    pub equations: Vec<MultiPoly>,
    /// Normalized numerator of the Jacobian determinant.
    pub jacobian: MultiPoly,
    /// Additional polynomials required nonzero (user-declared; parameters or
    /// unknowns).
    pub nonzero: Vec<MultiPoly>,
    /// The strictly positive unknown (`R`, or `rho` after substitution).
    pub positive: Var,
    /// Whether rho = R^2 was substituted.
    pub rho_substituted: bool,
    /// Structural degeneracy flags raised at build time.
    pub flags: Vec<String>,
}

/// Jacobian determinant of an averaged function with respect to eta.
/// Returns the split numerator/monomial-denominator form.
pub fn jacobian_determinant(f: &AveragedFunction, n: usize) -> Result<RationalFn> {
    let unknowns = unknown_vars(n);
    let d = unknowns.len();
    if f.components.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f.components.len(),
        });
    }
    let mut m = Vec::with_capacity(d);
    for comp in &f.components {
        let mut row = Vec::with_capacity(d);
        for u in &unknowns {
            row.push(comp.diff(u)?);
        }
        m.push(row);
    }
    let det = bareiss_determinant(m);
    RationalFn::from_laurent(&det)
}

/// Build the semi-algebraic system for an averaged function.
///
/// `nonzero_symbols` are the symbol names constrained nonzero (frequency and
/// Laurent-flagged parameters); they may be stripped from numerators.
/// `extra_nonzero` adds user inequalities. With `rho` set, even powers of `R`
/// are rewritten as `rho = R^2` (after stripping the odd content permitted by
/// `R > 0`); mixed parity is an error.
pub fn build_semialgebraic(
    f: &AveragedFunction,
    n: usize,
    nonzero_symbols: &[String],
    extra_nonzero: &[MultiPoly],
    rho: bool,
) -> Result<SemiAlgebraicSystem> {
    let unknowns = unknown_vars(n);
    let d = unknowns.len();
    if f.components.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f.components.len(),
        });
    }
    let mut strip: Vec<&str> = alloc::vec![PI, "R"];
    for s in nonzero_symbols {
        if !strip.contains(&s.as_str()) {
            strip.push(s);
        }
    }

    let mut flags = Vec::new();
    let mut equations = Vec::with_capacity(d);
    for (c, comp) in f.components.iter().enumerate() {
        let label = if c == 0 { 1 } else { c + 2 };
        let numerator = strip_content(comp, &strip);
        if numerator.is_zero() {
            flags.push(format!(
                "component f[{},{label}] is identically zero: higher-order averaging needed",
                f.order
            ));
        } else if constant_in(&numerator, &unknowns) {
            flags.push(format!(
                "component f[{},{label}] is constant in the unknowns: no isolated positive-R zeros",
                f.order
            ));
        }
        equations.push(numerator);
    }

    let jac = jacobian_determinant(f, n)?;
    let jacobian = strip_content(&jac.numerator, &strip);
    if jacobian.is_zero() {
        flags.push(format!(
            "Jacobian determinant of f[{}] is identically zero: zeros cannot be simple",
            f.order
        ));
    }

    let mut sys = SemiAlgebraicSystem {
        unknowns: unknowns.clone(),
        equations,
        jacobian,
        nonzero: extra_nonzero.to_vec(),
        positive: unknowns[0].clone(),
        rho_substituted: false,
        flags,
    };
    if rho {
        sys = substitute_rho(&sys)?;
    }
    Ok(sys)
}

fn constant_in(p: &MultiPoly, unknowns: &[Var]) -> bool {
    unknowns.iter().all(|u| p.degree_in(u).unwrap_or(0) == 0)
}

/// Rewrite even powers of `R` as `rho`, allowed because `R > 0` makes
/// `R -> rho = R^2` a bijection onto `rho > 0`.
pub fn substitute_rho(sys: &SemiAlgebraicSystem) -> Result<SemiAlgebraicSystem> {
    if sys.rho_substituted {
        return Ok(sys.clone());
    }
    let r = &sys.unknowns[0];
    if r.name() != "R" {
        return Err(Error::ParityMismatch {
            detail: "positive unknown is not R".into(),
        });
    }
    let rho = Var::new("rho");
    let halve = |p: &MultiPoly, what: &str| -> Result<MultiPoly> {
        if !p.even_in(r) {
            return Err(Error::ParityMismatch {
                detail: format!("{what} has odd powers of R after content stripping"),
            });
        }
        p.halve_exponents(r, &rho)
    };
    let equations = sys
        .equations
        .iter()
        .enumerate()
        .map(|(i, p)| halve(p, &format!("equation {}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    let jacobian = halve(&sys.jacobian, "the Jacobian numerator")?;
    let mut unknowns = sys.unknowns.clone();
    unknowns[0] = rho.clone();
    Ok(SemiAlgebraicSystem {
        unknowns,
        equations,
        jacobian,
        nonzero: sys.nonzero.clone(),
        positive: rho,
        rho_substituted: true,
        flags: sys.flags.clone(),
    })
}

impl SemiAlgebraicSystem {
    /// Bind parameters to rationals; remaining symbols must be unknowns.
    pub fn at_point(
        &self,
        point: &alloc::collections::BTreeMap<String, crate::rational::Rat>,
    ) -> Result<SemiAlgebraicSystem> {
        use crate::poly::Binding;
        let bindings: alloc::collections::BTreeMap<String, Binding> = point
            .iter()
            .map(|(k, v)| (k.clone(), Binding::Const(v.clone())))
            .collect();
        let subst = |p: &MultiPoly| -> Result<MultiPoly> { p.substitute(&bindings) };
        let equations = self
            .equations
            .iter()
            .map(subst)
            .collect::<Result<Vec<_>>>()?;
        let jacobian = subst(&self.jacobian)?;
        let nonzero = self.nonzero.iter().map(subst).collect::<Result<Vec<_>>>()?;
        // Every surviving symbol must be an unknown.
        let mut free: Vec<String> = Vec::new();
        for p in equations
            .iter()
            .chain(core::iter::once(&jacobian))
            .chain(nonzero.iter())
        {
            for v in p.vars() {
                if v.name() != PI
                    && !self.unknowns.contains(v)
                    && !free.contains(&v.name().to_string())
                {
                    free.push(v.name().to_string());
                }
            }
        }
        if !free.is_empty() {
            return Err(Error::UnboundParameters {
                vars: free.join(", "),
            });
        }
        Ok(SemiAlgebraicSystem {
            unknowns: self.unknowns.clone(),
            equations,
            jacobian,
            nonzero,
            positive: self.positive.clone(),
            rho_substituted: self.rho_substituted,
            flags: self.flags.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::standard_form::{radial_var, x_var};

    #[test]
    fn identity_map_has_unit_jacobian() {
        // f = (R, X3): determinant 1.
        let f = AveragedFunction {
            order: 1,
            components: alloc::vec![MultiPoly::var(&radial_var()), MultiPoly::var(&x_var(3)),],
        };
        let j = jacobian_determinant(&f, 3).unwrap();
        assert_eq!(j.numerator, MultiPoly::one());
        assert_eq!(j.denominator, MultiPoly::one());
    }

    #[test]
    fn rank_deficient_jacobian_is_zero() {
        // f = (R X3, 0): determinant 0.
        let f = AveragedFunction {
            order: 1,
            components: alloc::vec![
                MultiPoly::var(&radial_var()).mul(&MultiPoly::var(&x_var(3))),
                MultiPoly::zero(),
            ],
        };
        let j = jacobian_determinant(&f, 3).unwrap();
        assert!(j.numerator.is_zero());
    }

    #[test]
    fn degenerate_components_flagged() {
        // Constant-in-eta component raises a flag; zero components raise the
        // higher-order flag.
        let beta = Var::laurent("beta");
        let f = AveragedFunction {
            order: 1,
            components: alloc::vec![
                MultiPoly::var(&beta).mul(&MultiPoly::var(&radial_var())),
                MultiPoly::zero(),
            ],
        };
        let sys = build_semialgebraic(&f, 3, &["beta".to_string()], &[], false).unwrap();
        assert_eq!(sys.flags.len(), 3); // constant eq, zero eq, zero jacobian
        assert!(sys.flags[0].contains("constant in the unknowns"));
    }

    #[test]
    fn rho_substitution_halves_even_powers() {
        // f = (R (R^2 - 2), R^2 X3 - X3^3) -> equations in rho.
        let r = radial_var();
        let x3 = x_var(3);
        let f = AveragedFunction {
            order: 2,
            components: alloc::vec![
                MultiPoly::monomial(rat(1), &[(r.clone(), 3)])
                    .unwrap()
                    .add(&MultiPoly::monomial(rat(-2), &[(r.clone(), 1)]).unwrap()),
                MultiPoly::monomial(rat(1), &[(r.clone(), 2), (x3.clone(), 1)])
                    .unwrap()
                    .add(&MultiPoly::monomial(rat(-1), &[(x3.clone(), 3)]).unwrap()),
            ],
        };
        let sys = build_semialgebraic(&f, 3, &[], &[], true).unwrap();
        assert!(sys.rho_substituted);
        let rho = Var::new("rho");
        let expect0 = MultiPoly::var(&rho).add(&MultiPoly::constant(rat(-2)));
        assert_eq!(sys.equations[0], expect0);
        assert_eq!(sys.positive, rho);
    }
}
