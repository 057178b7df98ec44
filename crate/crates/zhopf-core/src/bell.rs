//! Partial Bell polynomials and the integer-tuple index sets driving the
//! averaging recurrence.
//!
//! `B[l,m](x1, ..., x_{l-m+1})` is enumerated exactly: one `BellTerm` per
//! multiplicity tuple, with coefficient `l! / (b1! ... b_{l-m+1}! *
//! prod_j (j!)^{b_j})`. A second enumeration walks the unrestricted tuple set
//! (all tuples with `sum j b_j = l`) with its own weight formula; the two
//! routes are kept independent so they can check each other.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::{factorial, rat, Rat};

/// One monomial of a partial Bell polynomial: multiplicities `b_j` of the
/// arguments `x_j` (index j = position + 1) and its exact coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellTerm {
    pub multiplicities: Vec<usize>,
    pub coefficient: Rat,
}

impl BellTerm {
    /// Total number of factors `L = sum b_j`.
    pub fn factor_count(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

/// All tuples `[b_1, ..., b_len]` of nonnegative integers with
/// `sum j*b_j = weight` and, when `parts` is set, `sum b_j = parts`.
fn tuples(len: usize, weight: usize, parts: Option<usize>) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; len];
    fn rec(
        j: usize,
        len: usize,
        weight_left: usize,
        parts_left: Option<usize>,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if j == len {
            if weight_left == 0 && parts_left.map(|p| p == 0).unwrap_or(true) {
                out.push(current.clone());
            }
            return;
        }
        let step = j + 1;
        let max_by_weight = weight_left / step;
        let max = match parts_left {
            Some(p) => max_by_weight.min(p),
            None => max_by_weight,
        };
        for b in 0..=max {
            current[j] = b;
            rec(
                j + 1,
                len,
                weight_left - b * step,
                parts_left.map(|p| p - b),
                current,
                out,
            );
        }
        current[j] = 0;
    }
    rec(0, len, weight, parts, &mut current, &mut out);
    out
}

/// Complete enumeration of the partial Bell polynomial `B[l,m]`.
pub fn partial_bell(l: usize, m: usize) -> Result<Vec<BellTerm>> {
    if m == 0 || l == 0 || m > l {
        return Err(Error::BellIndex { l, m });
    }
    let len = l - m + 1;
    let mut terms = Vec::new();
    for t in tuples(len, l, Some(m)) {
        let mut denom = rat(1);
        for (j, b) in t.iter().enumerate() {
            denom *= factorial(*b);
            for _ in 0..*b {
                denom *= factorial(j + 1);
            }
        }
        terms.push(BellTerm {
            multiplicities: t,
            coefficient: factorial(l) / denom,
        });
    }
    terms.sort_by(|a, b| a.multiplicities.cmp(&b.multiplicities));
    Ok(terms)
}

/// The unrestricted tuple set of length `l` with `sum j*b_j = l`, together
/// with the direct recurrence weight `1/(b1! b2! 2!^b2 ... bl! l!^bl)`.
/// This is the alternative route to the same terms as `partial_bell` summed
/// over `m`; the two are implemented independently.
pub fn direct_tuples(l: usize) -> Vec<(Vec<usize>, Rat)> {
    let mut out = Vec::new();
    for t in tuples(l, l, None) {
        let mut denom = rat(1);
        for (j, b) in t.iter().enumerate() {
            if *b == 0 {
                continue;
            }
            denom *= factorial(*b);
            let jf = factorial(j + 1);
            for _ in 0..*b {
                denom *= jf.clone();
            }
        }
        out.push((t, denom.recip()));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
