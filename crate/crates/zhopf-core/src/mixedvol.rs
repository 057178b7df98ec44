//! Mixed volumes of Newton polytopes: the generic complex-solution count of
//! a sparse polynomial system, normalized so that `n` unit simplices give 1.
//!
//! The mixed volume is computed by inclusion-exclusion over Minkowski sums,
//! `MV(P1..Pn) = sum_{S nonempty} (-1)^(n-|S|) vol(sum_{i in S} Pi)`, with
//! exact lattice-polytope volumes from an incremental convex-hull
//! triangulation (exact integer determinants, dimensions up to 4).

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Var};

type Point = Vec<i128>;

/// Exponent-vector support of a polynomial in the given unknowns.
/// Exponents in other symbols are ignored (they sit in the coefficient).
pub fn newton_points(p: &MultiPoly, unknowns: &[Var]) -> Vec<Point> {
    let mut set: BTreeSet<Point> = BTreeSet::new();
    for (_, powers) in p.terms_desc() {
        let mut pt = vec![0i128; unknowns.len()];
        for (v, e) in powers {
            if let Some(i) = unknowns.iter().position(|u| *u == v) {
                pt[i] = e as i128;
            }
        }
        set.insert(pt);
    }
    set.into_iter().collect()
}

/// Mixed volume of `n` polynomials in `n` unknowns (Bernstein count
/// normalization: `n` generic simplices give 1). This is the toric count:
/// solutions with a zero coordinate are not covered.
pub fn mixed_volume(polys: &[MultiPoly], unknowns: &[Var]) -> Result<u128> {
    mixed_volume_impl(polys, unknowns, false)
}

/// Bound for the number of isolated solutions in affine space: the mixed
/// volume with each support augmented by the origin. This is the quantity
/// reported as the BKK bound (solutions with zero coordinates, e.g. X = 0
/// on the averaged systems, count).
pub fn bkk_bound(polys: &[MultiPoly], unknowns: &[Var]) -> Result<u128> {
    mixed_volume_impl(polys, unknowns, true)
}

fn mixed_volume_impl(polys: &[MultiPoly], unknowns: &[Var], augment_origin: bool) -> Result<u128> {
    let n = unknowns.len();
    if polys.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: polys.len(),
        });
    }
    if n == 0 || n > 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: n,
        });
    }
    for p in polys {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
    }
    let supports: Vec<Vec<Point>> = polys
        .iter()
        .map(|p| {
            let mut pts = newton_points(p, unknowns);
            if augment_origin {
                pts.push(vec![0; n]);
            }
            hull_vertices(&pts)
        })
        .collect();

    // Inclusion-exclusion over nonempty subsets, in units of d! * volume.
    let mut total: i128 = 0;
    for mask in 1u32..(1 << n) {
        let mut sum_points: Vec<Point> = vec![vec![0; n]];
        for (i, support) in supports.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            let mut next: BTreeSet<Point> = BTreeSet::new();
            for a in &sum_points {
                for b in support {
                    next.insert(a.iter().zip(b.iter()).map(|(x, y)| x + y).collect());
                }
            }
            sum_points = hull_vertices(&next.into_iter().collect::<Vec<_>>());
        }
        let v = scaled_volume(&sum_points, n);
        let sign = if (n - (mask.count_ones() as usize)) % 2 == 0 {
            1
        } else {
            -1
        };
        total += sign * v;
    }
    if total < 0 {
        total = 0;
    }
    let dfact: i128 = (1..=n as i128).product();
    debug_assert!(total % dfact == 0, "mixed volume must be integral");
    Ok((total / dfact) as u128)
}

/// d! times the Euclidean volume of the convex hull (0 when degenerate).
fn scaled_volume(points: &[Point], d: usize) -> i128 {
    Hull::build(points, d).map(|h| h.scaled_volume).unwrap_or(0)
}

/// Vertices of the convex hull; falls back to the deduplicated input when
/// the hull is not full-dimensional (volume-0 summands are kept as is since
/// only Minkowski sums and volumes consume them).
fn hull_vertices(points: &[Point]) -> Vec<Point> {
    let dedup: BTreeSet<Point> = points.iter().cloned().collect();
    let pts: Vec<Point> = dedup.into_iter().collect();
    if pts.is_empty() {
        return pts;
    }
    let d = pts[0].len();
    match Hull::build(&pts, d) {
        Some(hull) => {
            let mut ids: BTreeSet<usize> = BTreeSet::new();
            for f in &hull.facets {
                ids.extend(f.verts.iter().copied());
            }
            ids.into_iter().map(|i| hull.points[i].clone()).collect()
        }
        None => pts,
    }
}

struct Facet {
    verts: Vec<usize>,
}

struct Hull {
    points: Vec<Point>,
    facets: Vec<Facet>,
    scaled_volume: i128,
    interior: Vec<i128>, // scaled by `scale` to stay integral
    scale: i128,
}

impl Hull {
    /// Incremental hull with strict-visibility degeneracy handling.
    /// Returns `None` when the points do not span dimension `d`.
    fn build(points: &[Point], d: usize) -> Option<Hull> {
        let pts: Vec<Point> = points.to_vec();
        if pts.len() < d + 1 {
            return None;
        }
        // Greedy affinely independent seed simplex.
        let mut simplex: Vec<usize> = vec![0];
        for (i, _) in pts.iter().enumerate().skip(1) {
            if simplex.len() == d + 1 {
                break;
            }
            let mut trial = simplex.clone();
            trial.push(i);
            if affine_rank(&pts, &trial) == trial.len() - 1 {
                simplex = trial;
            }
        }
        if simplex.len() < d + 1 {
            return None;
        }
        // Interior reference: the centroid of the seed simplex, scaled by d+1.
        let scale = (d + 1) as i128;
        let mut interior = vec![0i128; d];
        for &i in &simplex {
            for (k, x) in pts[i].iter().enumerate() {
                interior[k] += x;
            }
        }

        let mut hull = Hull {
            points: pts,
            facets: Vec::new(),
            scaled_volume: simplex_scaled_volume(points, &simplex),
            interior,
            scale,
        };
        for omit in 0..simplex.len() {
            let verts: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != omit)
                .map(|(_, v)| *v)
                .collect();
            hull.facets.push(Facet { verts });
        }
        let seed: BTreeSet<usize> = simplex.iter().copied().collect();
        for i in 0..hull.points.len() {
            if !seed.contains(&i) {
                hull.insert(i);
            }
        }
        Some(hull)
    }

    /// Signed orientation of point `x` against facet `f`: positive outside.
    fn orient(&self, f: &Facet, x: usize) -> i128 {
        let raw = facet_det(&self.points, &f.verts, &self.points[x]);
        // Fix the sign so the interior reference is negative.
        let interior_side = facet_det_scaled(&self.points, &f.verts, &self.interior, self.scale);
        debug_assert!(interior_side != 0, "interior point on a facet hyperplane");
        if interior_side > 0 {
            -raw
        } else {
            raw
        }
    }

    fn insert(&mut self, x: usize) {
        let mut visible: Vec<usize> = Vec::new();
        for (fi, f) in self.facets.iter().enumerate() {
            if self.orient(f, x) > 0 {
                visible.push(fi);
            }
        }
        if visible.is_empty() {
            return;
        }
        // Cone volume over the visible facets.
        for &fi in &visible {
            let det = facet_det(&self.points, &self.facets[fi].verts, &self.points[x]).abs();
            self.scaled_volume += det;
        }
        // Horizon ridges: sub-tuples occurring exactly once among visible facets.
        let mut ridge_count: alloc::collections::BTreeMap<Vec<usize>, usize> =
            alloc::collections::BTreeMap::new();
        for &fi in &visible {
            let verts = &self.facets[fi].verts;
            for omit in 0..verts.len() {
                let mut ridge: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != omit)
                    .map(|(_, v)| *v)
                    .collect();
                ridge.sort_unstable();
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        let visible_set: BTreeSet<usize> = visible.iter().copied().collect();
        let mut kept: Vec<Facet> = Vec::new();
        for (fi, f) in self.facets.drain(..).enumerate() {
            if !visible_set.contains(&fi) {
                kept.push(f);
            }
        }
        for (ridge, count) in ridge_count {
            if count == 1 {
                let mut verts = ridge;
                verts.push(x);
                kept.push(Facet { verts });
            }
        }
        self.facets = kept;
    }
}

/// det of the (d x d) matrix whose rows are verts[1..] - verts[0] and x - verts[0].
fn facet_det(points: &[Point], verts: &[usize], x: &Point) -> i128 {
    let base = &points[verts[0]];
    let mut rows: Vec<Vec<i128>> = verts[1..]
        .iter()
        .map(|&v| {
            points[v]
                .iter()
                .zip(base.iter())
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    rows.push(x.iter().zip(base.iter()).map(|(a, b)| a - b).collect());
    int_det(rows)
}

/// Same determinant but with the last row a point stored scaled by `scale`;
/// only that row is scaled (determinants are linear per row), so the sign is
/// unchanged.
fn facet_det_scaled(points: &[Point], verts: &[usize], x_scaled: &[i128], scale: i128) -> i128 {
    let base = &points[verts[0]];
    let mut rows: Vec<Vec<i128>> = verts[1..]
        .iter()
        .map(|&v| {
            points[v]
                .iter()
                .zip(base.iter())
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    rows.push(
        x_scaled
            .iter()
            .zip(base.iter())
            .map(|(a, b)| a - b * scale)
            .collect(),
    );
    int_det(rows)
}

fn simplex_scaled_volume(points: &[Point], simplex: &[usize]) -> i128 {
    let base = &points[simplex[0]];
    let rows: Vec<Vec<i128>> = simplex[1..]
        .iter()
        .map(|&v| {
            points[v]
                .iter()
                .zip(base.iter())
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    int_det(rows).abs()
}

fn affine_rank(points: &[Point], ids: &[usize]) -> usize {
    if ids.len() <= 1 {
        return 0;
    }
    let base = &points[ids[0]];
    let rows: Vec<Vec<i128>> = ids[1..]
        .iter()
        .map(|&v| {
            points[v]
                .iter()
                .zip(base.iter())
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    int_rank(rows)
}

/// Fraction-free integer determinant (Bareiss).
fn int_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn int_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot) = (row..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pivot);
        for r in 0..rows {
            if r != row && m[r][col] != 0 {
                let (a, b) = (m[row][col], m[r][col]);
                for c in 0..cols {
                    m[r][c] = m[r][c] * a - m[row][c] * b;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn v(name: &str) -> Var {
        Var::new(name)
    }

    fn poly_from_support(support: &[&[i64]], vars: &[Var]) -> MultiPoly {
        let mut p = MultiPoly::zero();
        for (i, pt) in support.iter().enumerate() {
            let powers: Vec<(Var, i64)> = vars
                .iter()
                .cloned()
                .zip(pt.iter().copied())
                .filter(|(_, e)| *e != 0)
                .collect();
            p = p.add(&MultiPoly::monomial(rat(i as i64 + 1), &powers).unwrap());
        }
        p
    }

    #[test]
    fn two_generic_lines() {
        let vars = [v("x"), v("y")];
        let line = poly_from_support(&[&[0, 0], &[1, 0], &[0, 1]], &vars);
        let mv = mixed_volume(&[line.clone(), line], &vars).unwrap();
        assert_eq!(mv, 1);
    }

    #[test]
    fn dense_bezout() {
        // Dense degrees (2, 3) in two unknowns: 6. Dense (1,2,2) in three: 4.
        let vars = [v("x"), v("y")];
        let dense = |d: i64| {
            let mut support = Vec::new();
            for i in 0..=d {
                for j in 0..=(d - i) {
                    support.push(vec![i, j]);
                }
            }
            let refs: Vec<&[i64]> = support.iter().map(|s| s.as_slice()).collect();
            poly_from_support(&refs, &vars)
        };
        assert_eq!(mixed_volume(&[dense(2), dense(3)], &vars).unwrap(), 6);

        let vars3 = [v("x"), v("y"), v("z")];
        let dense3 = |d: i64| {
            let mut support = Vec::new();
            for i in 0..=d {
                for j in 0..=(d - i) {
                    for k in 0..=(d - i - j) {
                        support.push(vec![i, j, k]);
                    }
                }
            }
            let refs: Vec<&[i64]> = support.iter().map(|s| s.as_slice()).collect();
            poly_from_support(&refs, &vars3)
        };
        assert_eq!(
            mixed_volume(&[dense3(1), dense3(2), dense3(2)], &vars3).unwrap(),
            4
        );
    }

    #[test]
    fn sparse_pair_matches_hand_count() {
        // {a rho + b X^2 + c, X (d rho + e X^2 + f)}: three affine solutions
        // (one with X = 0, two toric), so the BKK bound is 3 while the plain
        // mixed volume (toric count) is area(P1+P2) - area(P1) - area(P2)
        // = 4 - 1 - 1 = 2.
        let vars = [v("x"), v("y")];
        let p1 = poly_from_support(&[&[1, 0], &[0, 2], &[0, 0]], &vars);
        let p2 = poly_from_support(&[&[1, 1], &[0, 3], &[0, 1]], &vars);
        assert_eq!(mixed_volume(&[p1.clone(), p2.clone()], &vars).unwrap(), 2);
        assert_eq!(bkk_bound(&[p1, p2], &vars).unwrap(), 3);
    }

    #[test]
    fn symmetry_and_shared_polygon() {
        let vars = [v("x"), v("y")];
        let p1 = poly_from_support(&[&[2, 0], &[0, 1], &[0, 0]], &vars);
        let p2 = poly_from_support(&[&[1, 1], &[1, 0], &[0, 0]], &vars);
        let a = mixed_volume(&[p1.clone(), p2.clone()], &vars).unwrap();
        let b = mixed_volume(&[p2.clone(), p1.clone()], &vars).unwrap();
        assert_eq!(a, b);
        // Shared Newton polygon: MV(P, P) = 2 area(P).
        // P = triangle (0,0),(2,0),(0,1): area 1 -> MV 2.
        let tri = poly_from_support(&[&[0, 0], &[2, 0], &[0, 1]], &vars);
        assert_eq!(mixed_volume(&[tri.clone(), tri], &vars).unwrap(), 2);
    }

    #[test]
    fn dimension_mismatch() {
        let vars = [v("x"), v("y")];
        let p = poly_from_support(&[&[1, 0]], &vars);
        assert!(mixed_volume(&[p], &vars).is_err());
    }
}
