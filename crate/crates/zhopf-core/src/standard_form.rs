//! Transformation of a validated system into the standard form of averaging.
//!
//! Steps: rescale the phase variables by eps, pass to polar coordinates
//! `x1 = R cos(theta), x2 = R sin(theta)`, divide by `dtheta/dt`, and expand
//! the resulting rational right-hand sides as truncated series in eps. The
//! denominator `b R + cos(theta) S2 - sin(theta) S1` has unit leading
//! monomial `b R`, so the expansion is a geometric series; no general
//! differentiation in eps is needed.
//!
//! The result is the family `F[j][component]` of quasi-trigonometric
//! polynomials, with Laurent denominators only in `b` and `R`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::eps::EpsSeries;
use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Var};
use crate::system::{Freq, SystemSpec};
use crate::trig::{Harmonic, TrigPoly};

/// Options for the transformation.
#[derive(Clone, Copy, Debug, Default)]
pub struct StandardFormOptions {
    /// Reproduce the source text's literal angular factor, which uses
    /// `(R cos)^(i1) (R cos)^(i2)` for the first two exponents instead of
    /// `(R cos)^(i1) (R sin)^(i2)`. Off by default: the sine factor is the
    /// one under which `x2 = R sin(theta)` ever enters the form.
    pub psi_literal: bool,
}

/// The standard form of averaging: per-order, per-component
/// quasi-trigonometric right-hand sides, with `F0 = 0` by construction.
#[derive(Clone, Debug)]
pub struct StandardForm {
    pub n: usize,
    pub order: usize,
    pub freq: Freq,
    components: Vec<Vec<TrigPoly>>,
}

impl StandardForm {
    /// Assemble from explicit components: `components[j-1][c]` is `F_{j, c}`.
    pub fn from_components(
        n: usize,
        order: usize,
        freq: Freq,
        components: Vec<Vec<TrigPoly>>,
    ) -> Result<Self> {
        if components.len() != order || components.iter().any(|row| row.len() != n - 1) {
            return Err(Error::DimensionMismatch {
                expected: order,
                found: components.len(),
            });
        }
        Ok(StandardForm {
            n,
            order,
            freq,
            components,
        })
    }

    /// Component of `F_j`; `j` in `1..=order`, `comp` in `0..n-1`
    /// (0 is the R-equation, `c >= 1` is the X_{c+2} equation).
    pub fn component(&self, j: usize, comp: usize) -> &TrigPoly {
        &self.components[j - 1][comp]
    }

    pub fn components_at(&self, j: usize) -> &[TrigPoly] {
        &self.components[j - 1]
    }

    /// The unknowns eta = (R, X3, ..., Xn).
    pub fn unknowns(&self) -> Vec<Var> {
        unknown_vars(self.n)
    }
}

/// Radial symbol (Laurent: the transformation divides by it).
pub fn radial_var() -> Var {
    Var::laurent("R")
}

/// The zero-eigenvalue phase symbols X3..Xn.
pub fn x_var(s: usize) -> Var {
    Var::new(&alloc::format!("X{s}"))
}

pub fn unknown_vars(n: usize) -> Vec<Var> {
    let mut out = vec![radial_var()];
    for s in 3..=n {
        out.push(x_var(s));
    }
    out
}

/// Build the standard form of a validated system.
pub fn to_standard_form(spec: &SystemSpec, opts: StandardFormOptions) -> Result<StandardForm> {
    let n = spec.n;
    let k = spec.order;
    let r = radial_var();

    // Frequency as a Laurent-invertible polynomial, symbol flagged laurent.
    let freq_poly = match &spec.freq {
        Freq::Sym(v) => MultiPoly::var(&Var::laurent(v.name())),
        Freq::Num(q) => MultiPoly::constant(q.clone()),
    };

    // S series per equation: S[eq] = sum over table entries of
    // eps^(j + m - 1) * coeff * Psi, with Psi in polar coordinates.
    let mut trig_pow_cache: BTreeMap<(u32, u32), TrigPoly> = BTreeMap::new();
    let mut s_series: Vec<EpsSeries> = vec![EpsSeries::zero(k); n];
    for (key, coeff) in spec.coeffs() {
        let m: u32 = key.exps.iter().sum();
        let eps_pow = if key.eps == 0 {
            (m - 1) as usize
        } else {
            key.eps + m as usize - 1
        };
        if eps_pow > k {
            continue;
        }
        let (i1, i2) = (key.exps[0], key.exps[1]);
        let angular = if opts.psi_literal {
            cos_sin_power(&mut trig_pow_cache, i1 + i2, 0)
        } else {
            cos_sin_power(&mut trig_pow_cache, i1, i2)
        };
        let mut poly_factor = coeff.clone();
        if i1 + i2 > 0 {
            poly_factor = poly_factor.mul_var_pow(&r, (i1 + i2) as i64)?;
        }
        for (s, e) in key.exps.iter().enumerate().skip(2) {
            if *e > 0 {
                poly_factor = poly_factor.mul_var_pow(&x_var(s + 1), *e as i64)?;
            }
        }
        let contribution = angular.scale_poly(&poly_factor);
        let updated = s_series[key.eq].coeff(eps_pow).add(&contribution);
        s_series[key.eq].set_coeff(eps_pow, updated);
    }

    let cos1 = TrigPoly::term(0, Harmonic::Cos(1), MultiPoly::one());
    let sin1 = TrigPoly::term(0, Harmonic::Sin(1), MultiPoly::one());
    let mul_trig = |series: &EpsSeries, t: &TrigPoly| -> EpsSeries {
        let mut out = EpsSeries::zero(k);
        for j in 0..=k {
            out.set_coeff(j, series.coeff(j).mul(t));
        }
        out
    };
    let scale_series = |series: &EpsSeries, p: &MultiPoly| -> EpsSeries {
        let mut out = EpsSeries::zero(k);
        for j in 0..=k {
            out.set_coeff(j, series.coeff(j).scale_poly(p));
        }
        out
    };

    let r_poly = MultiPoly::var(&r);

    // Denominator b R + cos*S2 - sin*S1, with unit monomial b R at eps^0.
    let mut denom = mul_trig(&s_series[1], &cos1).add(&mul_trig(&s_series[0], &sin1).neg())?;
    let br = freq_poly.mul(&r_poly);
    denom.set_coeff(0, denom.coeff(0).add(&TrigPoly::from_poly(br)));
    let denom_inv = denom.invert_unit()?;

    // Numerators: R (cos*S1 + sin*S2) for the radial equation, R*S_s for the rest.
    let mut numerators: Vec<EpsSeries> = Vec::with_capacity(n - 1);
    let radial_num = mul_trig(&s_series[0], &cos1).add(&mul_trig(&s_series[1], &sin1))?;
    numerators.push(scale_series(&radial_num, &r_poly));
    for s in 2..n {
        numerators.push(scale_series(&s_series[s], &r_poly));
    }

    let mut components: Vec<Vec<TrigPoly>> = vec![Vec::with_capacity(n - 1); k];
    for num in &numerators {
        let f = num.mul(&denom_inv)?;
        debug_assert!(f.coeff(0).is_zero(), "standard form must have F0 = 0");
        for (j, store) in components.iter_mut().enumerate() {
            store.push(f.coeff(j + 1).clone());
        }
    }

    Ok(StandardForm {
        n,
        order: k,
        freq: spec.freq.clone(),
        components,
    })
}

/// cos^a(theta) sin^b(theta) linearized into the harmonic basis.
fn cos_sin_power(cache: &mut BTreeMap<(u32, u32), TrigPoly>, a: u32, b: u32) -> TrigPoly {
    if let Some(t) = cache.get(&(a, b)) {
        return t.clone();
    }
    let result = if a == 0 && b == 0 {
        TrigPoly::from_poly(MultiPoly::one())
    } else if a > 0 {
        let rest = cos_sin_power(cache, a - 1, b);
        rest.mul(&TrigPoly::term(0, Harmonic::Cos(1), MultiPoly::one()))
    } else {
        let rest = cos_sin_power(cache, a, b - 1);
        rest.mul(&TrigPoly::term(0, Harmonic::Sin(1), MultiPoly::one()))
    };
    cache.insert((a, b), result.clone());
    result
}
