//! Exhaustive search over the `n`-point subsets of a full factorial for
//! designs that identify a prescribed family of models at once.

use serde::Serialize;

use crate::catalog::full_factorial;
use crate::design::{Design, Model};
use crate::error::{Error, Result};
use crate::exact::{rank, Matrix, Rational};
use crate::fan::staircases;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    /// Number of `n`-subsets examined.
    pub evaluated: u64,
    /// Subsets identifying every required model.
    pub supporting_all: u64,
    /// For each required model, the subsets identifying it.
    pub per_model: Vec<u64>,
    /// Row indices (into the factorial, first factor slowest) of each subset
    /// identifying every required model.
    pub witnesses: Vec<Vec<usize>>,
}

/// Binomial coefficient, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..=n - (k - current.len()) {
            current.push(i);
            go(i + 1, n, k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Examines every `n`-point subset of the factorial with the given level
/// values, counting those on which each required model is identifiable.
/// With `required = None` the required family is every staircase of `n`
/// monomials inside the level box.
pub fn search_factorial(
    level_values: &[Vec<Rational>],
    n: usize,
    required: Option<&[Model]>,
    max_subsets: u64,
) -> Result<SearchSummary> {
    let r = level_values.len();
    if r == 0 || level_values.iter().any(|v| v.len() < 2) {
        return Err(Error::InvalidDesign(
            "every factor needs at least two levels".into(),
        ));
    }
    let grid = full_factorial(level_values);
    let total = binomial(grid.len() as u64, n as u64).unwrap_or(u64::MAX);
    if total > max_subsets {
        return Err(Error::CapExceeded(format!(
            "{total} subsets of {} points exceeds the limit of {max_subsets}",
            grid.len()
        )));
    }
    log::debug!("search: {total} subsets of {} grid points", grid.len());
    let bounds: Vec<usize> = level_values.iter().map(Vec::len).collect();
    let models: Vec<Model> = match required {
        Some(models) => models.to_vec(),
        None => staircases(&bounds, n),
    };
    for model in &models {
        if model.r() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: model.r(),
            });
        }
        if model.len() != n {
            return Err(Error::InvalidDesign(format!(
                "required model {model} has {} terms, expected {n}",
                model.len()
            )));
        }
    }
    // model matrices of each required model on the whole factorial
    let whole = Design::new(grid)?;
    let full: Vec<Matrix> = models
        .iter()
        .map(|m| whole.model_matrix(m))
        .collect::<Result<_>>()?;
    let subsets = combinations(whole.n(), n);
    let verdicts = crate::par_map(&subsets, |rows| {
        full.iter()
            .map(|matrix| {
                let picked: Vec<Vec<Rational>> = rows.iter().map(|&i| matrix.row(i).to_vec()).collect();
                rank(&Matrix::from_rows(picked).expect("rectangular")) == n
            })
            .collect::<Vec<bool>>()
    });
    let mut summary = SearchSummary {
        evaluated: subsets.len() as u64,
        supporting_all: 0,
        per_model: vec![0; models.len()],
        witnesses: Vec::new(),
    };
    for (rows, verdict) in subsets.iter().zip(verdicts) {
        for (count, ok) in summary.per_model.iter_mut().zip(&verdict) {
            *count += u64::from(*ok);
        }
        if verdict.iter().all(|&ok| ok) {
            summary.supporting_all += 1;
            summary.witnesses.push(rows.clone());
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::symmetric_levels;

    #[test]
    fn binomials() {
        assert_eq!(binomial(12, 8), Some(495));
        assert_eq!(binomial(5, 0), Some(1));
        assert_eq!(binomial(3, 4), Some(0));
        assert_eq!(combinations(4, 2).len(), 6);
    }

    #[test]
    fn square_two_by_two() {
        let levels = vec![symmetric_levels(2), symmetric_levels(2)];
        let s = search_factorial(&levels, 3, None, 1000).unwrap();
        // three-point subsets of a square; the staircases are {1,x1,x2},
        // which every triangle identifies
        assert_eq!(s.evaluated, 4);
        assert_eq!(s.per_model, vec![4]);
        assert_eq!(s.supporting_all, 4);
    }

    #[test]
    fn cap_is_enforced() {
        let levels = vec![symmetric_levels(4), symmetric_levels(3)];
        assert!(matches!(
            search_factorial(&levels, 8, None, 100),
            Err(Error::CapExceeded(_))
        ));
    }
}
