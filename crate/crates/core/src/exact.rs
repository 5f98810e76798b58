//! Exact rational scalars, dense matrices, and the rank / independence / span
//! primitives that every identifiability decision is built on.
//!
//! All elimination is fraction-free: rational rows are first scaled to integer
//! rows, then reduced with Bareiss-style exact divisions. Pivots are the first
//! nonzero entry in column scan order, so results are deterministic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an integer (`-3`), a terminating decimal (`0.25`, `-.5`) or a
/// fraction (`6/8`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::parse("rational", text, "empty"));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = parse_integer(num.trim(), text)?;
        let d = parse_integer(den.trim(), text)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator(text.to_string()));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let (negative, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        let digits_ok = |s: &str| s.chars().all(|c| c.is_ascii_digit());
        if !digits_ok(int_digits)
            || !digits_ok(frac_part)
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return Err(Error::parse("rational", text, "malformed decimal"));
        }
        let mantissa: BigInt = format!("{int_digits}{frac_part}")
            .parse()
            .map_err(|_| Error::parse("rational", text, "malformed decimal"))?;
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = Rational::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    Ok(Rational::from_integer(parse_integer(t, text)?))
}

fn parse_integer(s: &str, original: &str) -> Result<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::parse("rational", original, "malformed integer"));
    }
    s.parse()
        .map_err(|_| Error::parse("rational", original, "malformed integer"))
}

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Matrix::zeros(size, size);
        for i in 0..size {
            m.entries[i * size + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Matrix::new(n, cols, entries)
    }

    /// Builds a matrix whose columns are `columns`; `rows` fixes the height
    /// so that a matrix with no columns still has a definite shape.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self> {
        let cols = columns.len();
        let mut entries = vec![Rational::zero(); rows * cols];
        for (j, column) in columns.iter().enumerate() {
            if column.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: column.len(),
                });
            }
            for (i, value) in column.iter().enumerate() {
                entries[i * cols + j] = value.clone();
            }
        }
        Matrix::new(rows, cols, entries)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rational(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// Multiplies a rational vector by the lcm of its denominators, giving an
/// integer vector with the same span.
pub(crate) fn clear_denominators(values: &[Rational]) -> Vec<BigInt> {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    values
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect()
}

fn remove_content(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Bareiss elimination in place. Only the first `pivot_cols` columns are
/// eligible for pivots. Returns the `(row, column)` pivot positions.
fn bareiss(m: &mut [Vec<BigInt>], pivot_cols: usize) -> Vec<(usize, usize)> {
    let rows = m.len();
    let width = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..width {
                let num = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss division");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    pivots
}

fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| clear_denominators(m.row(i))).collect()
}

/// Exact rank over the rationals.
pub fn rank(m: &Matrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let mut rows = integer_rows(m);
    bareiss(&mut rows, m.cols()).len()
}

/// True iff appending `v` as a new column to `basis` increases its rank by one.
pub fn extends_independent(basis: &Matrix, v: &[Rational]) -> Result<bool> {
    if v.len() != basis.rows() {
        return Err(Error::DimensionMismatch {
            expected: basis.rows(),
            found: v.len(),
        });
    }
    let mut echelon = EchelonBasis::new(basis.rows());
    for column in basis.columns() {
        echelon.push(&column)?;
    }
    echelon.is_independent(v)
}

/// Solves `basis · c = v` exactly. Returns `None` when `v` is outside the
/// column span. When the columns of `basis` are dependent, free coefficients
/// are set to zero.
pub fn in_span_coefficients(basis: &Matrix, v: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let n = basis.rows();
    let k = basis.cols();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = basis.row(i).to_vec();
            row.push(v[i].clone());
            clear_denominators(&row)
        })
        .collect();
    let pivots = bareiss(&mut rows, k);
    if rows[pivots.len()..].iter().any(|row| !row[k].is_zero()) {
        return Ok(None);
    }
    let mut coefficients = vec![Rational::zero(); k];
    for &(r, c) in pivots.iter().rev() {
        let row = &rows[r];
        let mut rhs = Rational::from_integer(row[k].clone());
        for j in c + 1..k {
            if !row[j].is_zero() {
                rhs -= Rational::from_integer(row[j].clone()) * &coefficients[j];
            }
        }
        coefficients[c] = rhs / Rational::from_integer(row[c].clone());
    }
    Ok(Some(coefficients))
}

/// Incremental column echelon form over the integers.
///
/// Each stored vector has been reduced against all earlier ones and carries a
/// distinct pivot position, so testing a new vector costs one pass over the
/// stored vectors. `truncate` undoes pushes, which lets search code push and
/// pop candidate columns while backtracking.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    dim: usize,
    reduced: Vec<(usize, Vec<BigInt>)>,
    originals: Vec<Vec<Rational>>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            reduced: Vec::new(),
            originals: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (independent) vectors.
    pub fn len(&self) -> usize {
        self.reduced.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reduced.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.reduced.len() == self.dim
    }

    fn check_len(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    fn residual(&self, v: &[Rational]) -> Vec<BigInt> {
        let mut w = clear_denominators(v);
        remove_content(&mut w);
        for (pivot, b) in &self.reduced {
            if w[*pivot].is_zero() {
                continue;
            }
            let scale = b[*pivot].clone();
            let factor = w[*pivot].clone();
            for (x, y) in w.iter_mut().zip(b) {
                *x = &scale * &*x - &factor * y;
            }
            remove_content(&mut w);
        }
        w
    }

    pub fn is_independent(&self, v: &[Rational]) -> Result<bool> {
        self.check_len(v)?;
        if self.is_full() {
            return Ok(false);
        }
        Ok(self.residual(v).iter().any(|x| !x.is_zero()))
    }

    /// Adds `v` if it is independent of the stored vectors; returns whether it
    /// was added.
    pub fn push(&mut self, v: &[Rational]) -> Result<bool> {
        self.check_len(v)?;
        if self.is_full() {
            return Ok(false);
        }
        let w = self.residual(v);
        match w.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                self.reduced.push((pivot, w));
                self.originals.push(v.to_vec());
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// Drops every vector pushed after the first `len`.
    pub fn truncate(&mut self, len: usize) {
        self.reduced.truncate(len);
        self.originals.truncate(len);
    }

    /// The vectors in insertion order, as originally supplied.
    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.originals
    }

    /// Coefficients of `v` in terms of the stored vectors (insertion order),
    /// or `None` if `v` is independent of them.
    pub fn express(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>> {
        self.check_len(v)?;
        let basis = Matrix::from_columns(self.dim, &self.originals)?;
        in_span_coefficients(&basis, v)
    }
}

/// Rationals print as `3`, `-1/2`; handy for aligned text output.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| rational(v)).collect()
    }

    #[test]
    fn parses_integers_decimals_and_fractions() {
        assert_eq!(parse_rational("-1").unwrap(), rational(-1));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("6/8").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational(" 1/-3 ").unwrap(), ratio(-1, 3));
        assert_eq!(parse_rational("+2").unwrap(), rational(2));
    }

    #[test]
    fn rejects_malformed_rationals() {
        for bad in ["", "abc", "1/", "1.2.3", "--1", ".", "1e3", "0x10"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should fail");
        }
        assert!(matches!(
            parse_rational("3/0"),
            Err(Error::ZeroDenominator(_))
        ));
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(rank(&Matrix::zeros(3, 3)), 0);
        assert_eq!(rank(&Matrix::zeros(0, 4)), 0);
    }

    #[test]
    fn rank_handles_skipped_columns() {
        let m = Matrix::from_i64_rows(&[&[0, 1, 2, 3], &[0, 2, 4, 7], &[0, 3, 6, 1]]).unwrap();
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn rank_with_fractions() {
        let m = Matrix::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(3, 2), rational(1)],
        ])
        .unwrap();
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn identity_is_full_so_nothing_extends_it() {
        let id = Matrix::identity(3);
        assert!(!extends_independent(&id, &col(&[1, 1, 1])).unwrap());
    }

    #[test]
    fn span_of_ones() {
        let basis = Matrix::from_columns(3, &[col(&[1, 1, 1])]).unwrap();
        let c = in_span_coefficients(&basis, &col(&[1, 1, 1])).unwrap();
        assert_eq!(c, Some(vec![rational(1)]));
        assert_eq!(in_span_coefficients(&basis, &col(&[1, 2, 1])).unwrap(), None);
    }

    #[test]
    fn recovers_known_coefficients() {
        let a = col(&[1, 0, 2, -1]);
        let b = col(&[3, 1, 1, 5]);
        let v: Vec<Rational> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| rational(2) * x - rational(3) * y)
            .collect();
        let basis = Matrix::from_columns(4, &[a, b]).unwrap();
        let c = in_span_coefficients(&basis, &v).unwrap().unwrap();
        assert_eq!(c, vec![rational(2), rational(-3)]);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let basis = Matrix::identity(3);
        assert!(extends_independent(&basis, &col(&[1, 2])).is_err());
        assert!(in_span_coefficients(&basis, &col(&[1])).is_err());
        let mut e = EchelonBasis::new(2);
        assert!(e.push(&col(&[1, 2, 3])).is_err());
    }

    #[test]
    fn echelon_push_and_truncate() {
        let mut e = EchelonBasis::new(3);
        assert!(e.push(&col(&[1, 1, 1])).unwrap());
        assert!(e.push(&col(&[1, 2, 3])).unwrap());
        assert!(!e.push(&col(&[3, 5, 7])).unwrap());
        assert_eq!(e.len(), 2);
        assert!(e.push(&col(&[0, 0, 1])).unwrap());
        assert!(e.is_full());
        e.truncate(1);
        assert!(e.is_independent(&col(&[1, 2, 3])).unwrap());
        let c = e.express(&col(&[4, 4, 4])).unwrap().unwrap();
        assert_eq!(c, vec![rational(4)]);
    }
}
