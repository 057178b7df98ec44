//! Truncated power series in the small parameter epsilon with
//! quasi-trigonometric coefficients.
//!
//! A series of truncation order `k` stores coefficients of eps^0 .. eps^k;
//! arithmetic never reads or writes beyond the truncation order. The
//! standard form of averaging only ever exposes series with zero constant
//! coefficient, but intermediate denominators carry an eps^0 unit.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::trig::TrigPoly;

/// Truncated epsilon-series; `coeffs[i]` multiplies eps^i, `coeffs.len() == order + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsSeries {
    coeffs: Vec<TrigPoly>,
}

impl EpsSeries {
    pub fn zero(order: usize) -> Self {
        EpsSeries {
            coeffs: vec![TrigPoly::zero(); order + 1],
        }
    }

    /// Series with a single coefficient at eps^power.
    pub fn monomial(order: usize, power: usize, value: TrigPoly) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = value;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, power: usize) -> &TrigPoly {
        &self.coeffs[power]
    }

    pub fn set_coeff(&mut self, power: usize, value: TrigPoly) {
        if power < self.coeffs.len() {
            self.coeffs[power] = value;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(TrigPoly::is_zero)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(EpsSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        EpsSeries {
            coeffs: self.coeffs.iter().map(TrigPoly::neg).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let k = self.order();
        let mut out = EpsSeries::zero(k);
        for i in 0..=k {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(k - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = self.coeffs[i].mul(&other.coeffs[j]);
                out.coeffs[i + j] = out.coeffs[i + j].add(&prod);
            }
        }
        Ok(out)
    }

    /// Geometric-series inverse of `d = m (1 + eps-tail)` where `m` is an
    /// invertible monomial in Laurent symbols: returns
    /// `m^-1 (1 - t + t^2 - ...)` truncated at the series order.
    pub fn invert_unit(&self) -> Result<Self> {
        let k = self.order();
        let lead = &self.coeffs[0];
        // The eps^0 coefficient must be a theta-free monomial.
        let mut lead_poly = MultiPoly::zero();
        let mut found = false;
        for (key, c) in lead.terms() {
            if key.theta_pow != 0 || key.harmonic != crate::trig::Harmonic::One || found {
                return Err(Error::NotMonomial);
            }
            lead_poly = c.clone();
            found = true;
        }
        if !found {
            return Err(Error::ZeroPolynomial);
        }
        let m_inv = lead_poly.invert_monomial()?;
        // t = (series - m)/m, a pure eps-tail.
        let mut tail = self.clone();
        tail.coeffs[0] = TrigPoly::zero();
        let tail_over_m = EpsSeries {
            coeffs: tail.coeffs.iter().map(|c| c.scale_poly(&m_inv)).collect(),
        };
        // 1 - t + t^2 - ... +- t^k
        let mut geom = EpsSeries::monomial(k, 0, TrigPoly::from_poly(MultiPoly::one()));
        let mut power = EpsSeries::monomial(k, 0, TrigPoly::from_poly(MultiPoly::one()));
        for i in 1..=k {
            power = power.mul(&tail_over_m)?;
            let signed = if i % 2 == 1 {
                power.neg()
            } else {
                power.clone()
            };
            geom = geom.add(&signed)?;
        }
        Ok(EpsSeries {
            coeffs: geom.coeffs.iter().map(|c| c.scale_poly(&m_inv)).collect(),
        })
    }
}
