//! Exact counting of the distinct real solutions of a semi-algebraic system
//! at a rational parameter point.
//!
//! Pipeline: eliminate down to one univariate per coordinate by iterated
//! pairwise resultants (X-variables first, the positive variable last, ties
//! broken by lowest degree), isolate the candidate coordinates with the
//! Descartes machinery, form candidate boxes, then certify each box with a
//! Krawczyk operator over exact rational interval arithmetic. Spurious
//! candidates die by interval evaluation; every accepted box carries a
//! sign certificate for the Jacobian numerator `Dbar`.
//!
//! Nothing in this path uses floating point, and no distance threshold
//! exists anywhere: distinctness is disjointness of certified boxes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{eval_poly_on_box, invert_matrix, Interval, IntervalBox};
use crate::poly::{MultiPoly, Var};
use crate::ratfn::strip_content;
use crate::rational::{rat, ratio, Rat};
use crate::resultant::resultant;
use crate::semialg::SemiAlgebraicSystem;
use crate::unipoly::{refine, RootLoc, UniPoly};

/// One certified solution box.
#[derive(Clone, Debug)]
pub struct RootBox {
    /// Intervals in the order of the system's unknowns.
    pub coords: Vec<Interval>,
    /// Sign of the Jacobian numerator on the box (+1 or -1).
    pub jacobian_sign: i8,
}

/// Result of counting at one parameter point.
#[derive(Clone, Debug)]
pub struct BifurcationReport {
    pub point: BTreeMap<String, Rat>,
    pub unknowns: Vec<String>,
    pub count: usize,
    pub boxes: Vec<RootBox>,
    /// Degeneracy flags (structural or at-point); nonempty means the count
    /// is not an ordinary certified answer.
    pub flags: Vec<String>,
    /// Mixed-volume bound, when requested by the caller.
    pub bkk: Option<usize>,
}

#[derive(Clone, Copy, Debug)]
pub struct CountOptions {
    /// Refinement rounds before giving up on a candidate box.
    pub max_depth: u32,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { max_depth: 64 }
    }
}

/// Count the distinct real solutions with positive first coordinate, all
/// parameters bound by `point`.
pub fn count_positive_roots(
    sys: &SemiAlgebraicSystem,
    point: &BTreeMap<String, Rat>,
    opts: CountOptions,
) -> Result<BifurcationReport> {
    let bound = sys.at_point(point)?;
    let d = bound.unknowns.len();
    if d > 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: d,
        });
    }
    let mut flags = bound.flags.clone();

    // Parameter-only nonzero constraints must hold at the point.
    for nz in &bound.nonzero {
        if constant_in(nz, &bound.unknowns) && nz.constant_term().is_zero() {
            return Err(Error::CertificationFailed {
                detail: "a declared-nonzero polynomial vanishes at the parameter point".into(),
            });
        }
    }

    // Degeneracies at the point.
    let mut infeasible = false;
    for (i, eq) in bound.equations.iter().enumerate() {
        if eq.is_zero() {
            return Err(Error::NonIsolatedRoots);
        }
        if constant_in(eq, &bound.unknowns) {
            flags.push(format!(
                "equation {} is a nonzero constant at this point: system infeasible",
                i + 1
            ));
            infeasible = true;
        }
    }
    if infeasible {
        return Ok(BifurcationReport {
            point: point.clone(),
            unknowns: bound
                .unknowns
                .iter()
                .map(|v| v.name().to_string())
                .collect(),
            count: 0,
            boxes: Vec::new(),
            flags,
            bkk: None,
        });
    }

    // Candidate coordinates: one univariate per axis.
    let mut axis_roots: Vec<Vec<AxisRoot>> = Vec::with_capacity(d);
    for (axis, target) in bound.unknowns.iter().enumerate() {
        let uni = project_to(&bound.equations, target, &bound.unknowns)?;
        let Some(uni) = uni else {
            // No candidate constraint on this axis at all.
            return Err(Error::NonIsolatedRoots);
        };
        if uni.degree() == 0 {
            // Nonzero constant: empty projection, no common roots anywhere.
            return Ok(BifurcationReport {
                point: point.clone(),
                unknowns: bound
                    .unknowns
                    .iter()
                    .map(|v| v.name().to_string())
                    .collect(),
                count: 0,
                boxes: Vec::new(),
                flags,
                bkk: None,
            });
        }
        let roots = isolate_axis(&uni, axis == 0)?;
        axis_roots.push(roots);
    }

    // Candidate boxes: cross product of axis roots.
    let mut candidates: Vec<Vec<usize>> = vec![vec![]];
    for roots in &axis_roots {
        let mut next = Vec::new();
        for c in &candidates {
            for i in 0..roots.len() {
                let mut cc = c.clone();
                cc.push(i);
                next.push(cc);
            }
        }
        candidates = next;
    }

    // Symbolic Jacobian of the equations (certification only; the reported
    // sign certificate uses the system's Dbar numerator).
    let eq_jacobian: Vec<Vec<MultiPoly>> = bound
        .equations
        .iter()
        .map(|eq| {
            bound
                .unknowns
                .iter()
                .map(|u| eq.diff(u))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let names: Vec<String> = bound
        .unknowns
        .iter()
        .map(|v| v.name().to_string())
        .collect();
    let mut accepted: Vec<RootBox> = Vec::new();
    'candidates: for cand in &candidates {
        let mut depth = 0u32;
        loop {
            let bx = candidate_box(&names, &axis_roots, cand);
            // Cheap exclusion.
            let mut excluded = false;
            for eq in &bound.equations {
                if !eval_poly_on_box(eq, &bx).contains_zero() {
                    excluded = true;
                    break;
                }
            }
            if excluded {
                continue 'candidates;
            }
            match krawczyk(&bound.equations, &eq_jacobian, &names, &bx)? {
                KrawczykOutcome::UniqueRoot => {
                    // Certify the inequalities on the box.
                    let jac_range = eval_poly_on_box(&bound.jacobian, &bx);
                    let extras_ok = bound
                        .nonzero
                        .iter()
                        .filter(|nz| !constant_in(nz, &bound.unknowns))
                        .all(|nz| !eval_poly_on_box(nz, &bx).contains_zero());
                    if !jac_range.contains_zero() && extras_ok {
                        let sign = if jac_range.lo.is_positive() { 1 } else { -1 };
                        let coords = names.iter().map(|n| bx[n].clone()).collect();
                        accepted.push(RootBox {
                            coords,
                            jacobian_sign: sign,
                        });
                        continue 'candidates;
                    }
                    // Root certified but an inequality straddles zero: refine.
                }
                KrawczykOutcome::NoRoot => continue 'candidates,
                KrawczykOutcome::Undecided => {}
            }
            depth += 1;
            if depth > opts.max_depth {
                return Err(Error::CertificationFailed {
                    detail: format!(
                        "candidate box near ({}) undecided after {} refinements",
                        cand.iter()
                            .enumerate()
                            .map(|(a, i)| format!("{} ~ {}", names[a], axis_roots[a][*i].loc.mid()))
                            .collect::<Vec<_>>()
                            .join(", "),
                        opts.max_depth
                    ),
                });
            }
            for (axis, idx) in cand.iter().enumerate() {
                refine_axis_root(&mut axis_roots[axis][*idx]);
            }
        }
    }

    Ok(BifurcationReport {
        point: point.clone(),
        unknowns: names,
        count: accepted.len(),
        boxes: accepted,
        flags,
        bkk: None,
    })
}

/// Batch driver: one report per sample point; errors are propagated per
/// point so one failed certification does not hide the others.
pub fn scan_points(
    sys: &SemiAlgebraicSystem,
    points: &[BTreeMap<String, Rat>],
    opts: CountOptions,
) -> Vec<(BTreeMap<String, Rat>, Result<BifurcationReport>)> {
    points
        .iter()
        .map(|p| (p.clone(), count_positive_roots(sys, p, opts)))
        .collect()
}

fn constant_in(p: &MultiPoly, unknowns: &[Var]) -> bool {
    unknowns.iter().all(|u| p.degree_in(u).unwrap_or(0) == 0)
}

/// One isolated candidate coordinate with its refinement factor.
#[derive(Clone, Debug)]
struct AxisRoot {
    loc: RootLoc,
    factor: UniPoly,
    /// Half-width used to pad exact roots into full-dimensional intervals.
    pad: Rat,
}

fn refine_axis_root(root: &mut AxisRoot) {
    match &root.loc {
        RootLoc::Exact(_) => {
            root.pad = root.pad.clone() / rat(4);
        }
        RootLoc::Interval(a, b) => {
            let target = (b.clone() - a.clone()) / rat(4);
            root.loc = refine(&root.factor, root.loc.clone(), &target);
        }
    }
}

fn candidate_box(names: &[String], axis_roots: &[Vec<AxisRoot>], cand: &[usize]) -> IntervalBox {
    let mut bx = IntervalBox::new();
    for (axis, idx) in cand.iter().enumerate() {
        let root = &axis_roots[axis][*idx];
        let iv = match &root.loc {
            RootLoc::Exact(q) => {
                Interval::new(q.clone() - root.pad.clone(), q.clone() + root.pad.clone())
            }
            RootLoc::Interval(a, b) => Interval::new(a.clone(), b.clone()),
        };
        bx.insert(names[axis].clone(), iv);
    }
    bx
}

/// Project the system onto a single coordinate: eliminate every other
/// unknown by pairwise resultants (lowest max-degree first), then gcd the
/// surviving univariates. `None` when the axis ends up unconstrained.
fn project_to(polys: &[MultiPoly], target: &Var, unknowns: &[Var]) -> Result<Option<UniPoly>> {
    let mut set: Vec<MultiPoly> = polys
        .iter()
        .map(|p| strip_unknown_content(p, unknowns))
        .filter(|p| !p.is_zero())
        .collect();
    let mut others: Vec<Var> = unknowns.iter().filter(|v| *v != target).cloned().collect();
    // Eliminate the variable of lowest maximal degree first.
    others.sort_by_key(|v| {
        set.iter()
            .map(|p| p.degree_in(v).unwrap_or(0))
            .max()
            .unwrap_or(0)
    });
    for v in &others {
        set = eliminate(&set, v, unknowns)?;
        if set.is_empty() {
            return Ok(None);
        }
    }
    // gcd of the univariate projections: the candidate polynomial.
    let mut g: Option<UniPoly> = None;
    for p in &set {
        let u = UniPoly::from_multipoly(p, target)?;
        if u.is_zero() {
            continue;
        }
        g = Some(match g {
            None => u,
            Some(prev) => prev.gcd(&u),
        });
    }
    Ok(g)
}

fn strip_unknown_content(p: &MultiPoly, _unknowns: &[Var]) -> MultiPoly {
    // Content in parameters was already stripped at build; here just
    // normalize the rational content to keep coefficients small.
    strip_content(p, &[])
}

/// Eliminate `v`: keep polynomials free of it, pair up the rest through
/// resultants. Identically-zero resultants (shared factors) are dropped; if
/// nothing survives the system has a positive-dimensional projection.
fn eliminate(set: &[MultiPoly], v: &Var, unknowns: &[Var]) -> Result<Vec<MultiPoly>> {
    let mut kept: Vec<MultiPoly> = Vec::new();
    let mut involved: Vec<&MultiPoly> = Vec::new();
    for p in set {
        if p.degree_in(v).unwrap_or(0) == 0 {
            kept.push(p.clone());
        } else {
            involved.push(p);
        }
    }
    if involved.is_empty() {
        return Ok(kept);
    }
    if involved.len() == 1 && kept.is_empty() {
        return Err(Error::NonIsolatedRoots);
    }
    let mut any_resultant = false;
    for i in 0..involved.len() {
        for j in (i + 1)..involved.len() {
            let r = resultant(involved[i], involved[j], v)?;
            let r = strip_unknown_content(&r, unknowns);
            if !r.is_zero() {
                any_resultant = true;
                if !kept.contains(&r) {
                    kept.push(r);
                }
            }
        }
    }
    if involved.len() >= 2 && !any_resultant && kept.is_empty() {
        return Err(Error::NonIsolatedRoots);
    }
    Ok(kept)
}

/// Isolate the candidate coordinates on one axis; on the positive axis only
/// strictly positive roots survive. Exact roots get a positive pad width,
/// chosen below the separation of neighbouring roots.
fn isolate_axis(uni: &UniPoly, positive_only: bool) -> Result<Vec<AxisRoot>> {
    let factors = uni.squarefree_decomposition();
    let isolated = uni.isolate_real_roots()?;
    let mut out: Vec<AxisRoot> = Vec::new();
    for root in isolated {
        let factor = factors
            .iter()
            .find(|(_, m)| *m == root.multiplicity)
            .map(|(f, _)| f.clone())
            .unwrap_or_else(|| uni.squarefree_part());
        let mut loc = root.location;
        if positive_only {
            // Refine until the interval is sign-definite (a root exactly at
            // zero always isolates as Exact(0), so this terminates).
            while let RootLoc::Interval(a, b) = &loc {
                if !a.is_negative() || !b.is_positive() {
                    break;
                }
                let w = (b.clone() - a.clone()) / rat(4);
                loc = refine(&factor, loc.clone(), &w);
            }
            // Open interval with a >= 0 holds a strictly positive root.
            let keep = match &loc {
                RootLoc::Exact(q) => q.is_positive(),
                RootLoc::Interval(a, b) => !a.is_negative() && b.is_positive(),
            };
            if !keep {
                continue;
            }
        }
        out.push(AxisRoot {
            loc,
            factor,
            pad: rat(0),
        });
    }
    // Pad exact roots below half the gap to their neighbours (and below the
    // root itself on the positive axis, so boxes stay positive).
    let locs: Vec<RootLoc> = out.iter().map(|r| r.loc.clone()).collect();
    for (i, root) in out.iter_mut().enumerate() {
        if let RootLoc::Exact(q) = &root.loc {
            let mut pad = ratio(1, 1024);
            for (j, other) in locs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let gap = if other.lo() > *q {
                    other.lo() - q.clone()
                } else {
                    q.clone() - other.hi()
                };
                if gap.is_positive() {
                    let quarter = gap / rat(4);
                    if quarter < pad {
                        pad = quarter;
                    }
                }
            }
            if positive_only && q.is_positive() {
                let half = q.clone() / rat(2);
                if half < pad {
                    pad = half;
                }
            }
            root.pad = pad;
        }
    }
    Ok(out)
}

enum KrawczykOutcome {
    UniqueRoot,
    NoRoot,
    Undecided,
}

/// Krawczyk operator over exact rational intervals.
fn krawczyk(
    equations: &[MultiPoly],
    jacobian: &[Vec<MultiPoly>],
    names: &[String],
    bx: &IntervalBox,
) -> Result<KrawczykOutcome> {
    let d = names.len();
    // Midpoint and F(m).
    let mid: BTreeMap<String, Rat> = names.iter().map(|n| (n.clone(), bx[n].mid())).collect();
    let fm: Vec<Rat> = equations
        .iter()
        .map(|eq| eq.eval(&mid))
        .collect::<Result<Vec<_>>>()?;
    // Y = J(m)^-1 (exact); singular midpoint means refine further.
    let jm: Vec<Vec<Rat>> = jacobian
        .iter()
        .map(|row| row.iter().map(|e| e.eval(&mid)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let Some(y) = invert_matrix(&jm) else {
        return Ok(KrawczykOutcome::Undecided);
    };
    // Interval Jacobian over the box.
    let jb: Vec<Vec<Interval>> = jacobian
        .iter()
        .map(|row| row.iter().map(|e| eval_poly_on_box(e, bx)).collect())
        .collect();
    // K = m - Y F(m) + (I - Y J(B)) (B - m)
    let mut k: Vec<Interval> = Vec::with_capacity(d);
    for i in 0..d {
        let mut yfm = rat(0);
        for (j, f) in fm.iter().enumerate() {
            yfm += y[i][j].clone() * f.clone();
        }
        let mut acc = Interval::point(mid[&names[i]].clone() - yfm);
        for j in 0..d {
            // (I - Y J(B))_{ij}
            let mut entry = Interval::point(rat(0));
            for (l, jb_row) in jb.iter().enumerate() {
                entry = entry.add(&jb_row[j].scale(&y[i][l]));
            }
            let iij = if i == j {
                Interval::point(rat(1)).sub(&entry)
            } else {
                entry.neg()
            };
            let bmj = bx[&names[j]].sub(&Interval::point(mid[&names[j]].clone()));
            acc = acc.add(&iij.mul(&bmj));
        }
        k.push(acc);
    }
    let mut inside = true;
    for (i, n) in names.iter().enumerate() {
        if !k[i].inside_interior(&bx[n]) {
            inside = false;
        }
        if !k[i].intersects(&bx[n]) {
            return Ok(KrawczykOutcome::NoRoot);
        }
    }
    if inside {
        Ok(KrawczykOutcome::UniqueRoot)
    } else {
        Ok(KrawczykOutcome::Undecided)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semialg::SemiAlgebraicSystem;
    use crate::standard_form::{radial_var, x_var};

    fn simple_system(equations: Vec<MultiPoly>, jacobian: MultiPoly) -> SemiAlgebraicSystem {
        SemiAlgebraicSystem {
            unknowns: vec![radial_var(), x_var(3)],
            equations,
            jacobian,
            nonzero: vec![],
            positive: radial_var(),
            rho_substituted: false,
            flags: vec![],
        }
    }

    #[test]
    fn circle_and_line() {
        // R^2 + X3^2 - 4 = 0, R - X3 = 0, R > 0: single root (sqrt(2), sqrt(2)).
        let r = radial_var();
        let x3 = x_var(3);
        let eq1 = MultiPoly::monomial(rat(1), &[(r.clone(), 2)])
            .unwrap()
            .add(&MultiPoly::monomial(rat(1), &[(x3.clone(), 2)]).unwrap())
            .add(&MultiPoly::constant(rat(-4)));
        let eq2 = MultiPoly::var(&r).sub(&MultiPoly::var(&x3));
        // Jacobian det = 2R*(-1) - 2X3*1 = -2R - 2X3, nonzero at the root.
        let jac = MultiPoly::monomial(rat(-2), &[(r.clone(), 1)])
            .unwrap()
            .add(&MultiPoly::monomial(rat(-2), &[(x3.clone(), 1)]).unwrap());
        let sys = simple_system(vec![eq1, eq2], jac);
        let report = count_positive_roots(&sys, &BTreeMap::new(), CountOptions::default()).unwrap();
        assert_eq!(report.count, 1);
        assert_eq!(report.boxes.len(), 1);
        assert_eq!(report.boxes[0].jacobian_sign, -1);
        // sqrt(2) is inside the R interval.
        let iv = &report.boxes[0].coords[0];
        assert!(iv.lo.clone() * iv.lo.clone() < rat(2));
        assert!(iv.hi.clone() * iv.hi.clone() > rat(2));
    }

    #[test]
    fn exact_rational_roots_with_x_zero() {
        // X3 (X3 - 1) = 0 crossed with R - 1 = 0 and R > 0.
        // System: R - 1 = 0, X3^2 - X3 = 0: roots (1, 0) and (1, 1).
        let r = radial_var();
        let x3 = x_var(3);
        let eq1 = MultiPoly::var(&r).sub(&MultiPoly::one());
        let eq2 = MultiPoly::monomial(rat(1), &[(x3.clone(), 2)])
            .unwrap()
            .sub(&MultiPoly::var(&x3));
        // det J = 1*(2X3 - 1): nonzero at both roots.
        let jac = MultiPoly::monomial(rat(2), &[(x3.clone(), 1)])
            .unwrap()
            .add(&MultiPoly::constant(rat(-1)));
        let sys = simple_system(vec![eq1, eq2], jac);
        let report = count_positive_roots(&sys, &BTreeMap::new(), CountOptions::default()).unwrap();
        assert_eq!(report.count, 2);
        let signs: Vec<i8> = report.boxes.iter().map(|b| b.jacobian_sign).collect();
        assert!(signs.contains(&1) && signs.contains(&-1));
    }

    #[test]
    fn positive_filter_drops_negative_branch() {
        // R^2 - 1 = 0, X3 = 0: only R = +1 counts.
        let r = radial_var();
        let x3 = x_var(3);
        let eq1 = MultiPoly::monomial(rat(1), &[(r.clone(), 2)])
            .unwrap()
            .sub(&MultiPoly::one());
        let eq2 = MultiPoly::var(&x3);
        let jac = MultiPoly::monomial(rat(2), &[(r.clone(), 1)]).unwrap();
        let sys = simple_system(vec![eq1, eq2], jac);
        let report = count_positive_roots(&sys, &BTreeMap::new(), CountOptions::default()).unwrap();
        assert_eq!(report.count, 1);
    }

    #[test]
    fn positive_dimensional_detected() {
        // Same equation twice: resultant identically zero.
        let r = radial_var();
        let x3 = x_var(3);
        let eq = MultiPoly::var(&r).sub(&MultiPoly::var(&x3));
        let sys = simple_system(vec![eq.clone(), eq], MultiPoly::one());
        assert!(matches!(
            count_positive_roots(&sys, &BTreeMap::new(), CountOptions::default()),
            Err(Error::NonIsolatedRoots)
        ));
    }

    #[test]
    fn unbound_parameter_reported() {
        let r = radial_var();
        let x3 = x_var(3);
        let a = Var::new("a2");
        let eq1 = MultiPoly::var(&r).sub(&MultiPoly::var(&a));
        let eq2 = MultiPoly::var(&x3);
        let sys = simple_system(vec![eq1, eq2], MultiPoly::one());
        assert!(matches!(
            count_positive_roots(&sys, &BTreeMap::new(), CountOptions::default()),
            Err(Error::UnboundParameters { .. })
        ));
    }
}
