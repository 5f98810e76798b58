//! Exponent-vector monomials, constituency, staircases and the three named
//! monomial orderings (lex, grlex, grevlex), each with an optional relabeling
//! of the indeterminates.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The monomial `x1^a1 * ... * xr^ar`, stored as its exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(r: usize) -> Self {
        Monomial(vec![0; r])
    }

    /// `x_j` (zero-based `j`) in `r` indeterminates.
    pub fn var(r: usize, j: usize) -> Self {
        let mut e = vec![0; r];
        e[j] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// Componentwise `self <= other`; for monomials this is divisibility.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Multiplies by `x_j`.
    pub fn times_var(&self, j: usize) -> Monomial {
        let mut e = self.0.clone();
        e[j] += 1;
        Monomial(e)
    }

    /// Keeps only the coordinates listed in `indices`.
    pub fn restrict(&self, indices: &[usize]) -> Monomial {
        Monomial(indices.iter().map(|&j| self.0[j]).collect())
    }

    /// Inverse of [`Monomial::restrict`]: places the exponents at `indices`
    /// in an `r`-vector, zero elsewhere.
    pub fn lift(&self, indices: &[usize], r: usize) -> Monomial {
        let mut e = vec![0; r];
        for (k, &j) in indices.iter().enumerate() {
            e[j] = self.0[k];
        }
        Monomial(e)
    }

    /// Parses either the tuple form `(2,0,1)` or the product form
    /// `x1^2*x3` (`1` for the constant monomial) in `r` indeterminates.
    pub fn parse(text: &str, r: usize) -> Result<Monomial> {
        let t = text.trim();
        let m = if t.starts_with('(') || t.starts_with('[') {
            parse_tuple(t)?
        } else {
            parse_product(t, r)?
        };
        if m.nvars() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: m.nvars(),
            });
        }
        Ok(m)
    }

    /// Tuple form, e.g. `(2,0,1)`.
    pub fn tuple_string(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        format!("({})", parts.join(","))
    }
}

fn parse_tuple(t: &str) -> Result<Monomial> {
    let inner = t
        .strip_prefix(['(', '['])
        .and_then(|s| s.strip_suffix([')', ']']))
        .ok_or_else(|| Error::parse("monomial", t, "unbalanced brackets"))?;
    let exps = inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Error::parse("monomial", t, "exponent is not a non-negative integer"))
        })
        .collect::<Result<Vec<_>>>()?;
    if exps.is_empty() {
        return Err(Error::parse("monomial", t, "no exponents"));
    }
    Ok(Monomial(exps))
}

fn parse_product(t: &str, r: usize) -> Result<Monomial> {
    let mut e = vec![0u32; r];
    if t == "1" {
        return Ok(Monomial(e));
    }
    for factor in t.split('*') {
        let f = factor.trim();
        let (var, power) = match f.split_once('^') {
            Some((v, p)) => (
                v.trim(),
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::parse("monomial", t, "bad power"))?,
            ),
            None => (f, 1),
        };
        let index = var
            .strip_prefix('x')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&i| i >= 1)
            .ok_or_else(|| Error::parse("monomial", t, "expected factors like x2 or x2^3"))?;
        if index > r {
            return Err(Error::parse(
                "monomial",
                t,
                format!("x{index} exceeds the {r} indeterminates"),
            ));
        }
        e[index - 1] += power;
    }
    Ok(Monomial(e))
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (j, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", j + 1)?;
            } else {
                write!(f, "x{}^{}", j + 1, e)?;
            }
        }
        Ok(())
    }
}

fn check_same_len(a: &Monomial, b: &Monomial) -> Result<()> {
    if a.nvars() != b.nvars() {
        return Err(Error::DimensionMismatch {
            expected: a.nvars(),
            found: b.nvars(),
        });
    }
    Ok(())
}

pub fn total_degree(m: &Monomial) -> u32 {
    m.total_degree()
}

/// True iff `b` is a constituent of `a`, i.e. `b_j <= a_j` for all `j`.
pub fn is_constituent(b: &Monomial, a: &Monomial) -> Result<bool> {
    check_same_len(a, b)?;
    Ok(b.divides(a))
}

/// All constituents of `a` (the box below it), in canonical order.
pub fn constituents(a: &Monomial) -> Vec<Monomial> {
    let mut out = vec![Vec::with_capacity(a.nvars())];
    for &bound in a.exponents() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=bound).map(move |e| {
                    let mut p = prefix.clone();
                    p.push(e);
                    p
                })
            })
            .collect();
    }
    let mut result: Vec<Monomial> = out.into_iter().map(Monomial).collect();
    result.sort_by(canonical_cmp);
    result
}

/// Every monomial of total degree `d` in `r` indeterminates, ascending in the
/// canonical order.
pub fn monomials_of_degree(r: usize, d: u32) -> Vec<Monomial> {
    fn fill(r: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == r {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            fill(r, left - e, prefix, out);
            prefix.pop();
        }
    }
    assert!(r >= 1, "monomials need at least one indeterminate");
    let mut out = Vec::new();
    fill(r, d, &mut Vec::with_capacity(r), &mut out);
    out.sort_by(canonical_cmp);
    out
}

/// All monomials `a` with `a_j < bounds[j]`, ascending in canonical order.
pub fn box_monomials(bounds: &[usize]) -> Vec<Monomial> {
    let top = Monomial(
        bounds
            .iter()
            .map(|&b| (b as u32).saturating_sub(1))
            .collect(),
    );
    if bounds.contains(&0) {
        return Vec::new();
    }
    constituents(&top)
}

/// True iff `set` is closed under taking constituents (an order ideal).
pub fn is_staircase(set: &[Monomial]) -> Result<bool> {
    let Some(first) = set.first() else {
        return Ok(true);
    };
    let r = first.nvars();
    if let Some(bad) = set.iter().find(|m| m.nvars() != r) {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: bad.nvars(),
        });
    }
    let members: HashSet<&Monomial> = set.iter().collect();
    for m in set {
        for j in 0..r {
            if m.0[j] > 0 {
                let mut below = m.0.clone();
                below[j] -= 1;
                if !members.contains(&Monomial(below)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Lex,
    Grlex,
    Grevlex,
}

impl OrderKind {
    pub const ALL: [OrderKind; 3] = [OrderKind::Lex, OrderKind::Grlex, OrderKind::Grevlex];

    pub fn is_graded(self) -> bool {
        !matches!(self, OrderKind::Lex)
    }

    pub fn name(self) -> &'static str {
        match self {
            OrderKind::Lex => "lex",
            OrderKind::Grlex => "grlex",
            OrderKind::Grevlex => "grevlex",
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lex" => Ok(OrderKind::Lex),
            "grlex" | "deglex" => Ok(OrderKind::Grlex),
            "grevlex" | "degrevlex" => Ok(OrderKind::Grevlex),
            _ => Err(Error::parse("order kind", s, "expected lex, grlex or grevlex")),
        }
    }
}

/// A monomial ordering: one of the named kinds applied after relabeling the
/// indeterminates.
///
/// `permutation[i]` (zero-based) is the indeterminate that plays the role of
/// the `i`-th variable, so for lex with permutation `[1, 2, 3, 0]` the most
/// significant variable is `x2` and the least is `x1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub permutation: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, r: usize) -> Self {
        MonomialOrder {
            kind,
            permutation: (0..r).collect(),
        }
    }

    pub fn with_permutation(kind: OrderKind, permutation: Vec<usize>) -> Result<Self> {
        let r = permutation.len();
        let mut seen = vec![false; r];
        for &p in &permutation {
            if p >= r || seen[p] {
                return Err(Error::InvalidPermutation(format!("{permutation:?}")));
            }
            seen[p] = true;
        }
        Ok(MonomialOrder { kind, permutation })
    }

    /// Parses a one-based permutation such as `"2,3,4,1"`.
    pub fn parse_permutation(kind: OrderKind, text: &str) -> Result<Self> {
        let perm = text
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .ok()
                    .and_then(|v| v.checked_sub(1))
                    .ok_or_else(|| Error::InvalidPermutation(text.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        MonomialOrder::with_permutation(kind, perm)
    }

    pub fn nvars(&self) -> usize {
        self.permutation.len()
    }

    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        check_same_len(a, b)?;
        if a.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: a.nvars(),
            });
        }
        Ok(self.cmp(a, b))
    }

    /// Unchecked comparison for hot loops; lengths must agree.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let pa = |i: usize| a.0[self.permutation[i]];
        let pb = |i: usize| b.0[self.permutation[i]];
        let r = self.permutation.len();
        let lex = || {
            (0..r)
                .map(|i| pa(i).cmp(&pb(i)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        };
        match self.kind {
            OrderKind::Lex => lex(),
            OrderKind::Grlex => a
                .total_degree()
                .cmp(&b.total_degree())
                .then_with(lex),
            OrderKind::Grevlex => a.total_degree().cmp(&b.total_degree()).then_with(|| {
                (0..r)
                    .rev()
                    .map(|i| pb(i).cmp(&pa(i)))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            }),
        }
    }

    pub fn sort(&self, monomials: &mut [Monomial]) {
        monomials.sort_by(|a, b| self.cmp(a, b));
    }

    /// Human form, e.g. `grlex` or `lex[x2>x3>x4>x1]`.
    pub fn describe(&self) -> String {
        if self.is_identity() {
            self.kind.to_string()
        } else {
            let vars: Vec<String> = self
                .permutation
                .iter()
                .map(|p| format!("x{}", p + 1))
                .collect();
            format!("{}[{}]", self.kind, vars.join(">"))
        }
    }
}

/// The fixed storage order for models: ascending grevlex, identity labels.
pub fn canonical_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    a.total_degree().cmp(&b.total_degree()).then_with(|| {
        a.0.iter()
            .zip(&b.0)
            .rev()
            .map(|(x, y)| y.cmp(x))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// All `r!` permutations of `0..r` in lexicographic order.
pub fn permutations(r: usize) -> Vec<Vec<usize>> {
    fn go(current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == used.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                current.push(i);
                go(current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(r), &mut vec![false; r], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn sample() -> Vec<Monomial> {
        vec![
            m(&[1, 2, 3]),
            m(&[2, 0, 4]),
            m(&[2, 1, 3]),
            m(&[2, 1, 0]),
            m(&[3, 0, 0]),
        ]
    }

    #[test]
    fn total_degrees() {
        assert_eq!(m(&[1, 3, 1]).total_degree(), 5);
        assert_eq!(m(&[0, 0, 0]).total_degree(), 0);
        assert_eq!(m(&[2, 0, 4]).total_degree(), 6);
    }

    #[test]
    fn constituency() {
        assert!(is_constituent(&m(&[1, 0, 1]), &m(&[2, 0, 1])).unwrap());
        assert!(!is_constituent(&m(&[0, 1, 0]), &m(&[2, 0, 1])).unwrap());
        assert!(is_constituent(&m(&[2, 0, 1]), &m(&[2, 0, 1])).unwrap());
        assert!(is_constituent(&m(&[1, 0]), &m(&[2, 0, 1])).is_err());
    }

    #[test]
    fn constituents_of_x1sq_x3() {
        let c = constituents(&m(&[2, 0, 1]));
        let mut expected = vec![
            m(&[0, 0, 0]),
            m(&[1, 0, 0]),
            m(&[2, 0, 0]),
            m(&[0, 0, 1]),
            m(&[1, 0, 1]),
            m(&[2, 0, 1]),
        ];
        expected.sort_by(canonical_cmp);
        assert_eq!(c, expected);
        assert_eq!(constituents(&m(&[0, 0, 0, 0])), vec![m(&[0, 0, 0, 0])]);
        assert_eq!(constituents(&m(&[1, 1])).len(), 4);
    }

    #[test]
    fn named_orders_sort_the_reference_set() {
        let cases = [
            (
                OrderKind::Lex,
                vec![[1, 2, 3], [2, 0, 4], [2, 1, 0], [2, 1, 3], [3, 0, 0]],
            ),
            (
                OrderKind::Grlex,
                vec![[2, 1, 0], [3, 0, 0], [1, 2, 3], [2, 0, 4], [2, 1, 3]],
            ),
            (
                OrderKind::Grevlex,
                vec![[2, 1, 0], [3, 0, 0], [2, 0, 4], [1, 2, 3], [2, 1, 3]],
            ),
        ];
        for (kind, expected) in cases {
            let mut s = sample();
            MonomialOrder::new(kind, 3).sort(&mut s);
            let expected: Vec<Monomial> = expected.iter().map(|e| m(e)).collect();
            assert_eq!(s, expected, "{kind}");
        }
    }

    #[test]
    fn permutation_relabels_variables() {
        let o = MonomialOrder::parse_permutation(OrderKind::Lex, "2,1").unwrap();
        // x2 is most significant: x1^5 < x2
        assert_eq!(o.cmp(&m(&[5, 0]), &m(&[0, 1])), Ordering::Less);
        assert_eq!(o.describe(), "lex[x2>x1]");
        assert!(MonomialOrder::parse_permutation(OrderKind::Lex, "1,1").is_err());
        assert!(MonomialOrder::parse_permutation(OrderKind::Lex, "0,1").is_err());
        let o = MonomialOrder::new(OrderKind::Grlex, 3);
        assert!(o.compare(&m(&[1, 0]), &m(&[0, 1])).is_err());
    }

    #[test]
    fn degree_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(1, 5), vec![m(&[5])]);
        assert_eq!(monomials_of_degree(4, 1).len(), 4);
    }

    #[test]
    fn staircases() {
        let model_two = vec![
            m(&[0, 0, 0]),
            m(&[1, 0, 0]),
            m(&[0, 1, 0]),
            m(&[0, 0, 1]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
        ];
        assert!(is_staircase(&model_two).unwrap());
        let model_three = vec![m(&[1, 0, 0]), m(&[0, 0, 1]), m(&[1, 0, 1]), m(&[2, 0, 1])];
        assert!(!is_staircase(&model_three).unwrap());
        assert!(is_staircase(&[]).unwrap());
        assert!(is_staircase(&[m(&[0]), m(&[0, 0])]).is_err());
    }

    #[test]
    fn parse_and_print() {
        let a = Monomial::parse("x1^2*x3", 3).unwrap();
        assert_eq!(a, m(&[2, 0, 1]));
        assert_eq!(a.to_string(), "x1^2*x3");
        assert_eq!(a.tuple_string(), "(2,0,1)");
        assert_eq!(Monomial::parse("(2, 0, 1)", 3).unwrap(), a);
        assert_eq!(Monomial::parse("1", 2).unwrap(), m(&[0, 0]));
        assert_eq!(Monomial::parse("x2*x2", 2).unwrap(), m(&[0, 2]));
        assert!(Monomial::parse("x4", 3).is_err());
        assert!(Monomial::parse("(1,2)", 3).is_err());
        assert!(Monomial::parse("y1", 3).is_err());
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(1), vec![vec![0]]);
    }
}
