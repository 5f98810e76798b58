//! Designs (sets of distinct points), polynomial models, model matrices and
//! identifiability checks.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Pow};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{parse_rational, rank, Matrix, Rational};
use crate::monomial::{canonical_cmp, is_staircase, Monomial};

/// A finite set of distinct points in `r` indeterminates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    points: Matrix,
    level_counts: Vec<usize>,
    names: Option<Vec<String>>,
    duplicates_dropped: usize,
}

impl Design {
    /// Builds a design from raw rows. Repeated rows are merged (first
    /// occurrence wins); at least two distinct rows are required.
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.first().map_or(0, Vec::len);
        if r == 0 {
            return Err(Error::InvalidDesign("no indeterminates".into()));
        }
        let mut seen = HashSet::new();
        let mut distinct = Vec::new();
        let mut duplicates = 0;
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != r {
                return Err(Error::InvalidDesign(format!(
                    "row {} has {} entries, expected {r}",
                    i + 1,
                    row.len()
                )));
            }
            if seen.insert(row.clone()) {
                distinct.push(row);
            } else {
                duplicates += 1;
            }
        }
        if duplicates > 0 {
            log::warn!("merged {duplicates} repeated design point(s)");
        }
        if distinct.len() < 2 {
            return Err(Error::InvalidDesign(format!(
                "need at least 2 distinct points, found {}",
                distinct.len()
            )));
        }
        let points = Matrix::from_rows(distinct)?;
        let level_counts: Vec<usize> = (0..r)
            .map(|j| points.column(j).into_iter().collect::<HashSet<_>>().len())
            .collect();
        for (j, &c) in level_counts.iter().enumerate() {
            if c == 1 {
                log::warn!("indeterminate x{} takes a single value", j + 1);
            }
        }
        Ok(Design {
            points,
            level_counts,
            names: None,
            duplicates_dropped: duplicates,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Design::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| crate::exact::rational(v)).collect())
                .collect(),
        )
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.r() {
            return Err(Error::DimensionMismatch {
                expected: self.r(),
                found: names.len(),
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.points.rows()
    }

    pub fn r(&self) -> usize {
        self.points.cols()
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[Rational] {
        self.points.row(i)
    }

    pub fn level_counts(&self) -> &[usize] {
        &self.level_counts
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    /// Projection onto the indeterminates in `subset` (zero-based), with
    /// repeated rows removed. Its `n()` is the number of distinct points of
    /// the projected design.
    pub fn project(&self, subset: &[usize]) -> Result<Design> {
        validate_subset(subset, self.r())?;
        let rows: Vec<Vec<Rational>> = (0..self.n())
            .map(|i| subset.iter().map(|&j| self.points.get(i, j).clone()).collect())
            .collect();
        let mut seen = HashSet::new();
        let distinct: Vec<Vec<Rational>> =
            rows.into_iter().filter(|r| seen.insert(r.clone())).collect();
        let points = Matrix::from_rows(distinct)?;
        let level_counts = subset.iter().map(|&j| self.level_counts[j]).collect();
        let names = self
            .names
            .as_ref()
            .map(|ns| subset.iter().map(|&j| ns[j].clone()).collect());
        Ok(Design {
            points,
            level_counts,
            names,
            duplicates_dropped: 0,
        })
    }

    /// Number of distinct points after projecting onto `subset`.
    pub fn projected_size(&self, subset: &[usize]) -> Result<usize> {
        validate_subset(subset, self.r())?;
        let distinct: HashSet<Vec<&Rational>> = (0..self.n())
            .map(|i| subset.iter().map(|&j| self.points.get(i, j)).collect())
            .collect();
        Ok(distinct.len())
    }

    /// Values of `m` at every design point.
    pub fn monomial_vector(&self, m: &Monomial) -> Result<Vec<Rational>> {
        if m.nvars() != self.r() {
            return Err(Error::DimensionMismatch {
                expected: self.r(),
                found: m.nvars(),
            });
        }
        Ok((0..self.n())
            .map(|i| {
                self.point(i)
                    .iter()
                    .zip(m.exponents())
                    .filter(|(_, &e)| e > 0)
                    .fold(Rational::one(), |acc, (x, &e)| acc * Pow::pow(x, e))
            })
            .collect())
    }

    /// The `n × p` model matrix, columns in the model's canonical order.
    pub fn model_matrix(&self, model: &Model) -> Result<Matrix> {
        if model.is_empty() {
            return Err(Error::EmptyModel);
        }
        if model.r() != self.r() {
            return Err(Error::DimensionMismatch {
                expected: self.r(),
                found: model.r(),
            });
        }
        let columns = model
            .terms()
            .iter()
            .map(|m| self.monomial_vector(m))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(self.n(), &columns)
    }

    pub fn is_identifiable(&self, model: &Model) -> Result<bool> {
        if model.len() > self.n() {
            return Ok(false);
        }
        Ok(rank(&self.model_matrix(model)?) == model.len())
    }

    /// Hierarchical, identifiable and saturated.
    pub fn is_his(&self, model: &Model) -> Result<bool> {
        Ok(model.len() == self.n() && model.is_hierarchical() && self.is_identifiable(model)?)
    }

    pub fn check(&self, model: &Model) -> Result<ModelReport> {
        let rank = rank(&self.model_matrix(model)?);
        let p = model.len();
        let identifiable = rank == p;
        Ok(ModelReport {
            p,
            n: self.n(),
            rank,
            identifiable,
            hierarchical: model.is_hierarchical(),
            saturated: identifiable && p == self.n(),
        })
    }
}

fn validate_subset(subset: &[usize], r: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("empty".into()));
    }
    let mut seen = HashSet::new();
    for &j in subset {
        if j >= r {
            return Err(Error::InvalidSubset(format!(
                "index {} out of range for {r} indeterminates",
                j + 1
            )));
        }
        if !seen.insert(j) {
            return Err(Error::InvalidSubset(format!("x{} repeated", j + 1)));
        }
    }
    Ok(())
}

/// Reads a design table: one point per line, entries separated by commas,
/// tabs, semicolons or spaces. Blank lines and `#` comments are skipped.
/// With `header`, the first non-blank line names the indeterminates.
pub fn load_design(source: &str, header: bool) -> Result<Design> {
    let mut lines = source
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let names = if header {
        let line = lines
            .next()
            .ok_or_else(|| Error::InvalidDesign("missing header row".into()))?;
        Some(split_fields(line).map(str::to_string).collect::<Vec<_>>())
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut width = None;
    for (i, line) in lines.enumerate() {
        let row = split_fields(line)
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::InvalidDesign(format!(
                    "ragged table: data row {} has {} entries, expected {w}",
                    i + 1,
                    row.len()
                )))
            }
            _ => {}
        }
        rows.push(row);
    }
    let design = Design::new(rows)?;
    match names {
        Some(ns) => design.with_names(ns),
        None => Ok(design),
    }
}

fn split_fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c == ';' || c == '\t' || c.is_whitespace())
        .map(str::trim)
        .filter(|f| !f.is_empty())
}

/// A polynomial model: a set of monomials kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Model {
    r: usize,
    terms: Vec<Monomial>,
}

impl Model {
    pub fn new(r: usize, terms: Vec<Monomial>) -> Result<Self> {
        if let Some(bad) = terms.iter().find(|m| m.nvars() != r) {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: bad.nvars(),
            });
        }
        let mut terms = terms;
        terms.sort_by(canonical_cmp);
        terms.dedup();
        Ok(Model { r, terms })
    }

    /// Builds a model from exponent tuples; panics on ragged input.
    pub fn from_exponents(exponents: &[&[u32]]) -> Self {
        let r = exponents.first().map_or(0, |e| e.len());
        Model::new(
            r,
            exponents.iter().map(|e| Monomial::new(e.to_vec())).collect(),
        )
        .expect("exponent tuples of equal length")
    }

    /// One monomial per line in tuple or product form; blank lines and
    /// `#` comments are ignored.
    pub fn parse(text: &str, r: usize) -> Result<Self> {
        let terms = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| Monomial::parse(l, r))
            .collect::<Result<Vec<_>>>()?;
        Model::new(r, terms)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.binary_search_by(|t| canonical_cmp(t, m)).is_ok()
    }

    pub fn is_hierarchical(&self) -> bool {
        is_staircase(&self.terms).expect("model terms share a length")
    }

    /// Embeds a model on the indeterminates `subset` into `r` indeterminates.
    pub fn lift(&self, subset: &[usize], r: usize) -> Model {
        Model::new(r, self.terms.iter().map(|m| m.lift(subset, r)).collect())
            .expect("lifted monomials have length r")
    }

    /// Relabels indeterminates: exponent of `x_j` moves to `x_{mapping[j]}`.
    pub fn relabel(&self, mapping: &[usize]) -> Model {
        let terms = self
            .terms
            .iter()
            .map(|m| {
                let mut e = vec![0; self.r];
                for (j, &x) in m.exponents().iter().enumerate() {
                    e[mapping[j]] = x;
                }
                Monomial::new(e)
            })
            .collect();
        Model::new(self.r, terms).expect("relabeling preserves length")
    }

    /// Indeterminates (zero-based) that appear in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.r)
            .filter(|&j| self.terms.iter().any(|m| m.exponents()[j] > 0))
            .collect()
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(Monomial::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Outcome of checking one model against one design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub p: usize,
    pub n: usize,
    pub rank: usize,
    pub identifiable: bool,
    pub hierarchical: bool,
    pub saturated: bool,
}
