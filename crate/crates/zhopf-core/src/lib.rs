//! Exact kernel for averaging-based limit-cycle analysis of polynomial
//! differential systems near a zero-Hopf equilibrium.
//!
//! The crate is organized in three layers:
//!
//! * exact algebra: arbitrary-precision rationals, multivariate Laurent
//!   polynomials, resultants and real-root isolation ([`poly`], [`unipoly`],
//!   [`resultant`]);
//! * trigonometric calculus: canonical quasi-trigonometric polynomials,
//!   truncated epsilon-series, exact integration over a period ([`trig`],
//!   [`eps`]);
//! * averaging and analysis: standard-form transformation, the averaged
//!   function recurrence through partial Bell polynomials, semi-algebraic
//!   root counting with certified boxes, and mixed-volume bounds
//!   ([`system`], [`averaging`], [`semialg`], [`count`], [`mixedvol`]).
//!
//! Everything is exact: no floating point enters any certificate. The only
//! floating-point code lives behind the `std` feature and exists to
//! cross-check exact results numerically.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bell;
pub mod eps;
pub mod error;
pub mod interval;
pub mod mixedvol;
pub mod poly;
pub mod ratfn;
pub mod rational;
pub mod resultant;
pub mod subdivision;
pub mod system;
pub mod template;
pub mod trig;
pub mod unipoly;

pub mod averaging;
pub mod count;
pub mod semialg;
pub mod standard_form;

pub use error::Error;
pub use poly::{MultiPoly, Var};
pub use rational::Rat;
