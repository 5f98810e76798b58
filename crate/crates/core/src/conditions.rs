//! Necessary conditions for a monomial to appear in a hierarchical
//! identifiable model, and the sufficient bound `G(a)` on the number of design
//! points that forces a monomial into every leaf of the statistical fan.

use serde::Serialize;

use crate::design::Design;
use crate::error::{Error, Result};
use crate::fan::proper_subsets;
use crate::monomial::{box_monomials, canonical_cmp, Monomial};

/// Every hierarchical model containing `m` also contains its
/// `prod(a_j + 1)` constituents, so this many points are needed.
pub fn necessary_total(m: &Monomial, n: usize) -> bool {
    constituent_count(m.exponents().iter().copied()) <= n as u128
}

fn constituent_count(exponents: impl Iterator<Item = u32>) -> u128 {
    exponents.fold(1u128, |acc, e| acc.saturating_mul(e as u128 + 1))
}

/// `a_j <= n_j - 1` for every indeterminate.
pub fn necessary_box(m: &Monomial, levels: &[usize]) -> Result<bool> {
    if m.nvars() != levels.len() {
        return Err(Error::DimensionMismatch {
            expected: levels.len(),
            found: m.nvars(),
        });
    }
    Ok(m.exponents()
        .iter()
        .zip(levels)
        .all(|(&a, &n)| (a as usize) < n))
}

/// Result of the all-subsets condition: `prod_{i in U}(a_i + 1) <= n_U` for
/// every nonempty `U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetVerdict {
    pub holds: bool,
    /// A violating subset (zero-based indices), when the condition fails.
    pub witness: Option<Vec<usize>>,
}

pub fn necessary_subsets(design: &Design, m: &Monomial) -> Result<SubsetVerdict> {
    if m.nvars() != design.r() {
        return Err(Error::DimensionMismatch {
            expected: design.r(),
            found: m.nvars(),
        });
    }
    let r = design.r();
    let mut subsets = proper_subsets(r);
    subsets.push((0..r).collect());
    for subset in subsets {
        let needed = constituent_count(subset.iter().map(|&i| m.exponents()[i]));
        let n_u = if subset.len() == r {
            design.n()
        } else {
            design.projected_size(&subset)?
        };
        if needed > n_u as u128 {
            return Ok(SubsetVerdict {
                holds: false,
                witness: Some(subset),
            });
        }
    }
    Ok(SubsetVerdict {
        holds: true,
        witness: None,
    })
}

/// `G(a) = prod n_i - prod (n_i - a_i) + 1`, defined for monomials strictly
/// inside the level box.
pub fn g_value(levels: &[usize], m: &Monomial) -> Result<u128> {
    if !necessary_box(m, levels)? {
        return Err(Error::BoxViolation {
            monomial: m.tuple_string(),
            levels: levels.to_vec(),
        });
    }
    let full: u128 = levels.iter().map(|&n| n as u128).product();
    let above: u128 = levels
        .iter()
        .zip(m.exponents())
        .map(|(&n, &a)| (n - a as usize) as u128)
        .product();
    Ok(full - above + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GEntry {
    pub monomial: Monomial,
    pub degree: u32,
    pub g_value: u128,
}

/// `G` for every nonconstant monomial in the level box, ascending by `G`,
/// then by degree, then canonically.
pub fn g_table(levels: &[usize]) -> Vec<GEntry> {
    let mut entries: Vec<GEntry> = box_monomials(levels)
        .into_iter()
        .filter(|m| !m.is_one())
        .map(|m| GEntry {
            g_value: g_value(levels, &m).expect("box monomial"),
            degree: m.total_degree(),
            monomial: m,
        })
        .collect();
    entries.sort_by(|a, b| {
        a.g_value
            .cmp(&b.g_value)
            .then(a.degree.cmp(&b.degree))
            .then_with(|| canonical_cmp(&a.monomial, &b.monomial))
    });
    entries
}

/// Monomials guaranteed to lie in every leaf of any design with these level
/// counts and `n` points: the constant, plus every box monomial with
/// `G(a) <= n`. Returned in canonical order.
pub fn guaranteed_monomials(levels: &[usize], n: usize) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = box_monomials(levels)
        .into_iter()
        .filter(|m| m.is_one() || g_value(levels, m).expect("box monomial") <= n as u128)
        .collect();
    out.sort_by(canonical_cmp);
    out
}

/// Aligned text rendering of a `G` table.
pub fn format_g_table(entries: &[GEntry]) -> String {
    let width = entries
        .iter()
        .map(|e| e.monomial.tuple_string().len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = format!("{:<width$}  {:>6}  {:>6}  term\n", "alpha", "degree", "G");
    for e in entries {
        out.push_str(&format!(
            "{:<width$}  {:>6}  {:>6}  {}\n",
            e.monomial.tuple_string(),
            e.degree,
            e.g_value,
            e.monomial
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn total_condition() {
        assert!(!necessary_total(&m(&[2, 0, 1]), 5));
        assert!(necessary_total(&m(&[0, 0, 0]), 1));
        assert!(necessary_total(&m(&[1, 1]), 4));
    }

    #[test]
    fn box_condition() {
        assert!(necessary_box(&m(&[0, 1, 2]), &[3, 2, 3]).unwrap());
        assert!(!necessary_box(&m(&[0, 2, 0]), &[3, 2, 3]).unwrap());
        assert!(necessary_box(&m(&[0, 0, 0]), &[2, 2, 2]).unwrap());
        assert!(necessary_box(&m(&[0, 0]), &[2, 2, 2]).is_err());
    }

    #[test]
    fn subset_condition() {
        let d = catalog::small_three_factor();
        assert!(necessary_subsets(&d, &m(&[0, 1, 1])).unwrap().holds);
        let v = necessary_subsets(&d, &m(&[1, 1, 0])).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(vec![0, 1]));
        assert!(necessary_subsets(&d, &m(&[0, 0, 0])).unwrap().holds);
    }

    #[test]
    fn g_values() {
        let levels = [2, 2, 3, 3];
        assert_eq!(g_value(&levels, &m(&[0, 0, 1, 0])).unwrap(), 13);
        assert_eq!(g_value(&levels, &m(&[1, 0, 0, 0])).unwrap(), 19);
        assert_eq!(g_value(&levels, &m(&[1, 1, 2, 2])).unwrap(), 36);
        assert!(matches!(
            g_value(&levels, &m(&[2, 0, 0, 0])),
            Err(Error::BoxViolation { .. })
        ));
    }

    #[test]
    fn g_table_shape() {
        let t = g_table(&[2, 2, 3, 3]);
        assert_eq!(t.len(), 35);
        assert_eq!(t[0].g_value, 13);
        assert_eq!(t[1].g_value, 13);
        assert_eq!(t[34].monomial, m(&[1, 1, 2, 2]));
        let text = format_g_table(&t);
        assert_eq!(text.lines().count(), 36);
    }

    #[test]
    fn guaranteed_sets() {
        let g = guaranteed_monomials(&[4, 3], 8);
        let expected = vec![m(&[0, 0]), m(&[1, 0]), m(&[0, 1]), m(&[2, 0]), m(&[1, 1])];
        let mut expected_sorted = expected.clone();
        expected_sorted.sort_by(canonical_cmp);
        assert_eq!(g, expected_sorted);
        assert_eq!(guaranteed_monomials(&[2, 2, 3, 3], 25).len(), 12);
    }
}
