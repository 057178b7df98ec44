//! Symbolic recurrence templates: the integrand of `y_k` with uninterpreted
//! `F` symbols, for any order `k` and dimension `n`.
//!
//! The generator walks the same Bell enumeration as the numeric engine but
//! keeps the `F` derivatives and `y` factors symbolic, grouping equal terms
//! (equal derivative multiset and equal `y` multiset) with accumulated
//! integer coefficients. This is the output mode used for golden comparison
//! and for the scaling benchmark.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bell::partial_bell;
use crate::error::Result;
use crate::rational::{factorial, Rat};

/// One grouped template term
/// `coefficient * d^m F_{f_order} / dz^derivs * prod y_factors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateTerm {
    pub coefficient: Rat,
    /// Which F enters: order index `i - l`.
    pub f_order: usize,
    /// Derivative multiset: (z index, multiplicity), 1-based, sorted.
    pub derivs: Vec<(usize, u32)>,
    /// y factors: (order j, component index, power), 1-based, sorted.
    pub y_factors: Vec<(usize, usize, u32)>,
}

/// The template of one component's integrand; the structure is identical for
/// every component (only the F component index changes on rendering).
#[derive(Clone, Debug)]
pub struct OrderTemplate {
    pub order: usize,
    pub dimension: usize,
    pub terms: Vec<TemplateTerm>,
}

/// Generate the integrand template of `y_k` in dimension `n`.
pub fn order_k_template(k: usize, n: usize) -> Result<OrderTemplate> {
    let mut grouped: BTreeMap<(usize, Vec<(usize, u32)>, Vec<(usize, usize, u32)>), Rat> =
        BTreeMap::new();
    let k_fact = factorial(k);

    // Leading term k! F_k.
    grouped.insert((k, Vec::new(), Vec::new()), k_fact.clone());

    for l in 1..k {
        let inv_l_fact = factorial(l).recip();
        for m in 1..=l {
            for bell in partial_bell(l, m)? {
                let mut slots: Vec<usize> = Vec::new();
                for (j, b) in bell.multiplicities.iter().enumerate() {
                    for _ in 0..*b {
                        slots.push(j + 1);
                    }
                }
                let weight = k_fact.clone() * inv_l_fact.clone() * bell.coefficient.clone();
                // Expand the multilinear map over all index assignments.
                let mut index = alloc::vec![0usize; m];
                loop {
                    let mut derivs: Vec<usize> = index.iter().map(|z| z + 1).collect();
                    derivs.sort_unstable();
                    let deriv_ms = to_multiset(&derivs);
                    let mut yfs: Vec<(usize, usize)> = slots
                        .iter()
                        .zip(index.iter())
                        .map(|(j, z)| (*j, z + 1))
                        .collect();
                    yfs.sort_unstable();
                    let y_ms = to_y_multiset(&yfs);
                    let entry = grouped
                        .entry((k - l, deriv_ms, y_ms))
                        .or_insert_with(|| crate::rational::rat(0));
                    *entry += weight.clone();

                    let mut pos = 0;
                    loop {
                        if pos == m {
                            break;
                        }
                        index[pos] += 1;
                        if index[pos] < n {
                            break;
                        }
                        index[pos] = 0;
                        pos += 1;
                    }
                    if pos == m {
                        break;
                    }
                }
            }
        }
    }

    let mut terms: Vec<TemplateTerm> = grouped
        .into_iter()
        .map(|((f_order, derivs, y_factors), coefficient)| TemplateTerm {
            coefficient,
            f_order,
            derivs,
            y_factors,
        })
        .collect();
    // Order: F_k lead first, then descending F order (ascending l), then by
    // derivative count and the flattened derivative tuple (so dz1 dz1 sorts
    // before dz1 dz2 before dz2 dz2), then the y structure.
    let flat = |derivs: &[(usize, u32)]| -> Vec<usize> {
        derivs
            .iter()
            .flat_map(|(z, c)| core::iter::repeat(*z).take(*c as usize))
            .collect()
    };
    terms.sort_by(|a, b| {
        let fa = flat(&a.derivs);
        let fb = flat(&b.derivs);
        (k - a.f_order, fa.len(), fa, &a.y_factors).cmp(&(
            k - b.f_order,
            fb.len(),
            fb,
            &b.y_factors,
        ))
    });
    Ok(OrderTemplate {
        order: k,
        dimension: n,
        terms,
    })
}

fn to_multiset(sorted: &[usize]) -> Vec<(usize, u32)> {
    let mut out: Vec<(usize, u32)> = Vec::new();
    for &z in sorted {
        match out.last_mut() {
            Some((v, c)) if *v == z => *c += 1,
            _ => out.push((z, 1)),
        }
    }
    out
}

fn to_y_multiset(sorted: &[(usize, usize)]) -> Vec<(usize, usize, u32)> {
    let mut out: Vec<(usize, usize, u32)> = Vec::new();
    for &(j, c) in sorted {
        match out.last_mut() {
            Some((oj, oc, p)) if *oj == j && *oc == c => *p += 1,
            _ => out.push((j, c, 1)),
        }
    }
    out
}

impl OrderTemplate {
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Render the template of `y_{k, component}` (1-based component).
    pub fn render_component(&self, component: usize) -> String {
        let mut out = String::new();
        out.push_str(&format!("y[{},{}] = int( ", self.order, component));
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&format!("{}", t.coefficient));
            if t.derivs.is_empty() {
                out.push_str(&format!("*F[{},{}]", t.f_order, component));
            } else {
                let ds: Vec<String> = t
                    .derivs
                    .iter()
                    .flat_map(|(z, c)| (0..*c).map(move |_| format!("z{z}")))
                    .collect();
                out.push_str(&format!(
                    "*D[{}](F[{},{}])",
                    ds.join(","),
                    t.f_order,
                    component
                ));
            }
            for (j, c, p) in &t.y_factors {
                out.push_str(&format!("*y[{j},{c}]"));
                if *p > 1 {
                    out.push_str(&format!("^{p}"));
                }
            }
        }
        out.push_str(", theta = 0..t )");
        out
    }

    /// Full rendering, one line per component.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in 1..=self.dimension {
            out.push_str(&self.render_component(c));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn first_order_is_plain_integral() {
        let t = order_k_template(1, 2).unwrap();
        assert_eq!(t.terms.len(), 1);
        assert_eq!(t.terms[0].coefficient, rat(1));
        assert_eq!(t.terms[0].f_order, 1);
        assert!(t.terms[0].derivs.is_empty());
        assert!(t.terms[0].y_factors.is_empty());
    }

    #[test]
    fn second_order_n2_coefficients() {
        // 2 F2 + 2 dF1/dz1 y11 + 2 dF1/dz2 y12
        let t = order_k_template(2, 2).unwrap();
        let coeffs: Vec<Rat> = t.terms.iter().map(|x| x.coefficient.clone()).collect();
        assert_eq!(coeffs, alloc::vec![rat(2), rat(2), rat(2)]);
        assert_eq!(t.terms[1].derivs, alloc::vec![(1, 1)]);
        assert_eq!(t.terms[1].y_factors, alloc::vec![(1, 1, 1)]);
        assert_eq!(t.terms[2].derivs, alloc::vec![(2, 1)]);
        assert_eq!(t.terms[2].y_factors, alloc::vec![(1, 2, 1)]);
    }

    #[test]
    fn third_order_n2_structure() {
        // Eight terms with coefficients 6,6,6,3,3,3,6,3.
        let t = order_k_template(3, 2).unwrap();
        let coeffs: Vec<i64> = t
            .terms
            .iter()
            .map(|x| {
                use num_traits::ToPrimitive;
                x.coefficient.to_integer().to_i64().unwrap()
            })
            .collect();
        assert_eq!(coeffs, alloc::vec![6, 6, 6, 3, 3, 3, 6, 3]);
        // Spot-check the mixed second derivative term: 6 d2 F1/dz1 dz2 y11 y12.
        let mixed = &t.terms[6];
        assert_eq!(mixed.coefficient, rat(6));
        assert_eq!(mixed.f_order, 1);
        assert_eq!(mixed.derivs, alloc::vec![(1, 1), (2, 1)]);
        assert_eq!(mixed.y_factors, alloc::vec![(1, 1, 1), (1, 2, 1)]);
    }

    #[test]
    fn term_counts_monotone() {
        let mut prev = 0;
        for k in 1..=4 {
            let c = order_k_template(k, 3).unwrap().term_count();
            assert!(c >= prev);
            prev = c;
        }
        let mut prev = 0;
        for n in 2..=5 {
            let c = order_k_template(3, n).unwrap().term_count();
            assert!(c >= prev);
            prev = c;
        }
    }
}
