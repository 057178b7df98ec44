//! Independent root-counting oracle by box subdivision.
//!
//! Counts the zeros of a square polynomial system inside a box using only
//! interval exclusion, a preconditioned Miranda existence test and
//! interval-Jacobian regularity for uniqueness. It shares no code path with
//! the elimination pipeline (no resultants, no univariate isolation, no
//! Krawczyk operator), which is the point: the two counters check each other.
//!
//! Polynomials are compiled once into index-addressed term lists; everything
//! per box is plain interval arithmetic. Cut points snap to dyadics of
//! bounded denominator so coefficient bit sizes stay flat.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::interval::{interval_det, invert_matrix, Interval, IntervalBox};
use crate::poly::{MultiPoly, Var};
use crate::rational::{rat, ratio, Rat};

/// Index-compiled polynomial: exponents address a fixed coordinate order.
struct Compiled {
    terms: Vec<(Rat, Vec<(usize, u32)>)>,
}

impl Compiled {
    fn from_poly(p: &MultiPoly, names: &[String]) -> Result<Compiled> {
        let mut terms = Vec::with_capacity(p.num_terms());
        for (coeff, powers) in p.terms_desc() {
            let mut idx = Vec::with_capacity(powers.len());
            for (v, e) in powers {
                let Some(i) = names.iter().position(|n| n == v.name()) else {
                    return Err(Error::UnboundParameters {
                        vars: v.name().to_string(),
                    });
                };
                if e < 0 {
                    return Err(Error::LaurentViolation {
                        var: v.name().to_string(),
                    });
                }
                idx.push((i, e as u32));
            }
            terms.push((coeff, idx));
        }
        Ok(Compiled { terms })
    }

    fn eval_box(&self, bx: &[Interval]) -> Interval {
        let mut acc = Interval::point(rat(0));
        for (c, powers) in &self.terms {
            let mut term = Interval::point(c.clone());
            for (i, e) in powers {
                term = term.mul(&bx[*i].pow(*e));
            }
            acc = acc.add(&term);
        }
        acc
    }

    fn eval_point(&self, pt: &[Rat]) -> Rat {
        let mut acc = rat(0);
        for (c, powers) in &self.terms {
            let mut term = c.clone();
            for (i, e) in powers {
                term *= num_traits::pow::pow(pt[*i].clone(), *e as usize);
            }
            acc += term;
        }
        acc
    }
}

struct System {
    dim: usize,
    equations: Vec<Compiled>,
    /// gradients[j][k] = d equations[j] / d x_k
    gradients: Vec<Vec<Compiled>>,
}

/// Count zeros of `equations` (square system in `unknowns`) inside `bounds`.
/// Returns the certified count, or an error when the budget runs out before
/// every subbox is resolved.
pub fn count_roots_subdivision(
    equations: &[MultiPoly],
    unknowns: &[Var],
    bounds: &IntervalBox,
    max_boxes: usize,
) -> Result<usize> {
    let d = unknowns.len();
    if equations.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: equations.len(),
        });
    }
    let names: Vec<String> = unknowns.iter().map(|v| v.name().to_string()).collect();
    let sys = System {
        dim: d,
        equations: equations
            .iter()
            .map(|e| Compiled::from_poly(e, &names))
            .collect::<Result<_>>()?,
        gradients: equations
            .iter()
            .map(|e| {
                unknowns
                    .iter()
                    .map(|u| Compiled::from_poly(&e.diff(u)?, &names))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?,
    };
    let root_box: Vec<Interval> = names.iter().map(|n| bounds[n].clone()).collect();

    let mut work: Vec<Vec<Interval>> = vec![root_box.clone()];
    let mut accepted: Vec<Vec<Interval>> = Vec::new();
    let mut processed = 0usize;
    while let Some(bx) = work.pop() {
        processed += 1;
        if processed > max_boxes {
            return Err(Error::CertificationFailed {
                detail: alloc::format!("subdivision budget of {max_boxes} boxes exhausted"),
            });
        }
        // Exclusion.
        if sys
            .equations
            .iter()
            .any(|eq| !eq.eval_box(&bx).contains_zero())
        {
            continue;
        }
        // Uniqueness gate: interval Jacobian regular on the box.
        let jb: Vec<Vec<Interval>> = sys
            .gradients
            .iter()
            .map(|row| row.iter().map(|g| g.eval_box(&bx)).collect())
            .collect();
        if !interval_det(&jb).contains_zero() {
            // Existence: preconditioned Miranda on the box, then on a mildly
            // inflated copy (a root near a face defeats Miranda on both
            // neighbours), clamped to the overall bounds.
            let inflated = inflate(&bx, &root_box);
            let candidates = [bx.clone(), inflated];
            let mut certified: Option<Vec<Interval>> = None;
            for cand in candidates {
                let jc: Vec<Vec<Interval>> = sys
                    .gradients
                    .iter()
                    .map(|row| row.iter().map(|g| g.eval_box(&cand)).collect())
                    .collect();
                if interval_det(&jc).contains_zero() {
                    continue;
                }
                if miranda(&sys, &cand) {
                    certified = Some(cand);
                    break;
                }
            }
            if let Some(cert) = certified {
                // A root on a shared boundary of two certified boxes is the
                // same root iff their hull is still uniquely-rooted.
                let mut duplicate = false;
                for acc in &accepted {
                    if boxes_touch(acc, &cert) {
                        let hull: Vec<Interval> = acc
                            .iter()
                            .zip(cert.iter())
                            .map(|(a, b)| a.hull(b))
                            .collect();
                        let jh: Vec<Vec<Interval>> = sys
                            .gradients
                            .iter()
                            .map(|row| row.iter().map(|g| g.eval_box(&hull)).collect())
                            .collect();
                        if !interval_det(&jh).contains_zero() {
                            duplicate = true;
                            break;
                        }
                        return Err(Error::CertificationFailed {
                            detail: "adjacent certified boxes with ambiguous hull".into(),
                        });
                    }
                }
                if !duplicate {
                    accepted.push(cert);
                }
                continue;
            }
        }
        // Split along the widest coordinate, off-center so that exact
        // rational root coordinates are unlikely to land on a cut.
        let widest = (0..d)
            .max_by(|a, b| bx[*a].width().cmp(&bx[*b].width()))
            .unwrap();
        let iv = bx[widest].clone();
        if iv.width() < ratio(1, 1_000_000_000) {
            return Err(Error::CertificationFailed {
                detail: "subdivision reached width limit without resolving a box".into(),
            });
        }
        let raw_cut = iv.lo.clone() + iv.width() * ratio(9, 16);
        let cut = snap_dyadic(&raw_cut, &(iv.width() / rat(64)), &iv);
        let mut left = bx.clone();
        left[widest] = Interval::new(iv.lo.clone(), cut.clone());
        let mut right = bx;
        right[widest] = Interval::new(cut, iv.hi);
        work.push(left);
        work.push(right);
    }
    Ok(accepted.len())
}

/// Preconditioned Miranda test. The system is multiplied by the exact
/// inverse of the midpoint Jacobian (same zero set); each face range uses a
/// mean-value enclosure assembled from the precompiled gradients, so the
/// excess width is quadratic in the face size.
fn miranda(sys: &System, bx: &[Interval]) -> bool {
    let d = sys.dim;
    let mid: Vec<Rat> = bx.iter().map(Interval::mid).collect();
    let jm: Vec<Vec<Rat>> = sys
        .gradients
        .iter()
        .map(|row| row.iter().map(|g| g.eval_point(&mid)).collect())
        .collect();
    let Some(a) = invert_matrix(&jm) else {
        return false;
    };
    // For each coordinate i, the preconditioned G_i must have opposite signs
    // on the two x_i-faces. (With midpoint preconditioning the natural
    // assignment is the identity, and the sign orientation is +.)
    for i in 0..d {
        let lo_range = face_range(sys, &a, i, bx, true);
        let hi_range = face_range(sys, &a, i, bx, false);
        let plain = !lo_range.hi.is_positive() && !hi_range.lo.is_negative();
        let flipped = !lo_range.lo.is_negative() && !hi_range.hi.is_positive();
        if !plain && !flipped {
            return false;
        }
    }
    true
}

/// Mean-value enclosure of `G_i = sum_j A[i][j] F_j` on the face of `bx`
/// where coordinate `i` is pinned to its lower/upper endpoint.
fn face_range(sys: &System, a: &[Vec<Rat>], i: usize, bx: &[Interval], low: bool) -> Interval {
    let mut face: Vec<Interval> = bx.to_vec();
    let pinned = if low {
        bx[i].lo.clone()
    } else {
        bx[i].hi.clone()
    };
    face[i] = Interval::point(pinned);
    let mid: Vec<Rat> = face.iter().map(Interval::mid).collect();
    // Exact center value.
    let mut center = rat(0);
    for (j, eq) in sys.equations.iter().enumerate() {
        center += a[i][j].clone() * eq.eval_point(&mid);
    }
    let mut acc = Interval::point(center);
    // Gradient sweep: sum_k (sum_j A[i][j] dF_j/dx_k (face)) * (face_k - mid_k)
    for k in 0..sys.dim {
        if k == i {
            continue;
        }
        let mut grad = Interval::point(rat(0));
        for (j, row) in sys.gradients.iter().enumerate() {
            grad = grad.add(&row[k].eval_box(&face).scale(&a[i][j]));
        }
        let offset = face[k].sub(&Interval::point(mid[k].clone()));
        acc = acc.add(&grad.mul(&offset));
    }
    acc
}

/// Grow a box by half its width on each side, clamped to `bounds`.
fn inflate(bx: &[Interval], bounds: &[Interval]) -> Vec<Interval> {
    bx.iter()
        .zip(bounds.iter())
        .map(|(iv, b)| {
            let pad = iv.width() / rat(2);
            let lo = (iv.lo.clone() - pad.clone()).max(b.lo.clone());
            let hi = (iv.hi.clone() + pad).min(b.hi.clone());
            Interval::new(lo, hi)
        })
        .collect()
}

fn boxes_touch(a: &[Interval], b: &[Interval]) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x.intersects(y))
}

/// Nearest dyadic multiple of a power of two below `step`, clamped strictly
/// inside the interval.
fn snap_dyadic(q: &Rat, step: &Rat, iv: &Interval) -> Rat {
    use num_bigint::BigInt;
    let mut scale = BigInt::from(1);
    let mut s = rat(1);
    while s > *step {
        s /= rat(2);
        scale *= 2;
    }
    let scaled = q * Rat::from_integer(scale.clone());
    let snapped = Rat::new(scaled.floor().to_integer(), scale);
    if snapped > iv.lo && snapped < iv.hi {
        snapped
    } else {
        q.clone()
    }
}

/// Convenience: a box from per-coordinate bounds.
pub fn make_box(unknowns: &[Var], bounds: &[(Rat, Rat)]) -> IntervalBox {
    let mut bx = IntervalBox::new();
    for (v, (lo, hi)) in unknowns.iter().zip(bounds.iter()) {
        bx.insert(v.name().to_string(), Interval::new(lo.clone(), hi.clone()));
    }
    bx
}

/// Keep the compiled-poly map type alive for callers building boxes by name.
pub type NamedBox = BTreeMap<String, Interval>;
