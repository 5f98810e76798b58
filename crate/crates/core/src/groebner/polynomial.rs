use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational};
use crate::monomial::{Monomial, MonomialOrder};

/// Sparse polynomial over the rationals with terms kept strictly decreasing
/// under a bound monomial order. No stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    order: MonomialOrder,
    terms: Vec<(Monomial, Rational)>,
}

impl Polynomial {
    pub fn zero(order: &MonomialOrder) -> Self {
        Polynomial {
            order: order.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(order: &MonomialOrder, c: Rational) -> Self {
        Polynomial::from_terms(order, vec![(Monomial::one(order.nvars()), c)])
    }

    pub fn monomial(order: &MonomialOrder, m: Monomial) -> Self {
        Polynomial::from_terms(order, vec![(m, Rational::one())])
    }

    /// Collects like terms, drops zeros and sorts under `order`.
    pub fn from_terms(order: &MonomialOrder, mut terms: Vec<(Monomial, Rational)>) -> Self {
        debug_assert!(terms.iter().all(|(m, _)| m.nvars() == order.nvars()));
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut merged: Vec<(Monomial, Rational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match merged.last_mut() {
                Some((last, acc)) if *last == m => *acc += c,
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Polynomial {
            order: order.clone(),
            terms: merged,
        }
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.order.nvars()
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    /// Re-sorts the terms under another order.
    pub fn with_order(&self, order: &MonomialOrder) -> Polynomial {
        Polynomial::from_terms(order, self.terms.clone())
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.order);
        }
        Polynomial {
            order: self.order.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, c: &Rational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.order);
        }
        // multiplying by a monomial preserves the order of terms
        Polynomial {
            order: self.order.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), a * c))
                .collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.combine(other, true)
    }

    fn combine(&self, other: &Polynomial, subtract: bool) -> Polynomial {
        debug_assert_eq!(self.order, other.order);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let rhs = |c: &Rational| if subtract { -c } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (a, ca) = &self.terms[i];
            let (b, cb) = &other.terms[j];
            match self.order.cmp(a, b) {
                Ordering::Greater => {
                    out.push((a.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.clone(), rhs(cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = ca + rhs(cb);
                    if !s.is_zero() {
                        out.push((a.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), rhs(c))));
        Polynomial {
            order: self.order.clone(),
            terms: out,
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero(&self.order);
        for (m, c) in &other.terms {
            acc = acc.add(&self.mul_term(c, m));
        }
        acc
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: point.len(),
            });
        }
        Ok(self.terms.iter().fold(Rational::zero(), |acc, (m, c)| {
            let value = point
                .iter()
                .zip(m.exponents())
                .filter(|(_, &e)| e > 0)
                .fold(c.clone(), |v, (x, &e)| v * Pow::pow(x, e));
            acc + value
        }))
    }

    /// Parses the human form, e.g. `x1*x2 - x2*x4 + x1 - x4` or
    /// `x1 - 1/2*x2*x3 + 1/2`.
    pub fn parse(text: &str, order: &MonomialOrder) -> Result<Polynomial> {
        let r = order.nvars();
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::parse("polynomial", text, "empty"));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in compact.chars().enumerate() {
            let after_caret = current.ends_with('^');
            if (ch == '+' || ch == '-') && !after_caret {
                if !current.is_empty() {
                    pieces.push((negative, std::mem::take(&mut current)));
                } else if i > 0 {
                    return Err(Error::parse("polynomial", text, "dangling sign"));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(Error::parse("polynomial", text, "trailing sign"));
        }
        pieces.push((negative, current));
        let mut terms = Vec::new();
        for (negative, piece) in pieces {
            let mut coeff = Rational::one();
            let mut exps = vec![0u32; r];
            for factor in piece.split('*') {
                if factor.starts_with('x') {
                    let m = Monomial::parse(factor, r)?;
                    for (e, add) in exps.iter_mut().zip(m.exponents()) {
                        *e += add;
                    }
                } else {
                    coeff *= parse_rational(factor)
                        .map_err(|_| Error::parse("polynomial", text, "bad coefficient"))?;
                }
            }
            if negative {
                coeff = -coeff;
            }
            terms.push((Monomial::new(exps), coeff));
        }
        Ok(Polynomial::from_terms(order, terms))
    }

    pub fn to_record(&self) -> PolynomialRecord {
        PolynomialRecord {
            text: self.to_string(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRecord {
                    coefficient: format_rational(c),
                    exponents: m.exponents().to_vec(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&magnitude))?;
            } else if magnitude.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&magnitude))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coefficient: String,
    pub exponents: Vec<u32>,
}

/// Structured form of a polynomial: the human string plus its terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialRecord {
    pub text: String,
    pub terms: Vec<TermRecord>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ratio, rational};
    use crate::monomial::OrderKind;

    fn grlex4() -> MonomialOrder {
        MonomialOrder::new(OrderKind::Grlex, 4)
    }

    #[test]
    fn parse_print_cycle() {
        let o = grlex4();
        let p = Polynomial::parse("x1*x2 - x2*x4 + x1 - x4", &o).unwrap();
        assert_eq!(p.to_string(), "x1*x2 - x2*x4 + x1 - x4");
        let q = Polynomial::parse("x1 - 1/2*x2*x3 + 1/2*x2 + 1/2 * x3 - x4 - 1/2", &o).unwrap();
        assert_eq!(q.leading_monomial(), Some(&Monomial::new(vec![0, 1, 1, 0])));
        assert_eq!(q.leading_coefficient(), Some(&ratio(-1, 2)));
        assert_eq!(q.to_string(), "-1/2*x2*x3 + x1 + 1/2*x2 + 1/2*x3 - x4 - 1/2");
        assert!(Polynomial::parse("x1 +", &o).is_err());
        assert!(Polynomial::parse("x9", &o).is_err());
        assert!(Polynomial::parse("", &o).is_err());
    }

    #[test]
    fn arithmetic() {
        let o = MonomialOrder::new(OrderKind::Grlex, 2);
        let a = Polynomial::parse("x1 + 1", &o).unwrap();
        let b = Polynomial::parse("x1 - 1", &o).unwrap();
        assert_eq!(a.mul(&b), Polynomial::parse("x1^2 - 1", &o).unwrap());
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.add(&b), Polynomial::parse("2*x1", &o).unwrap());
        assert_eq!(a.scale(&ratio(1, 2)).monic(), a);
    }

    #[test]
    fn evaluation() {
        let o = grlex4();
        let g1 = Polynomial::parse("x1^2 - 1", &o).unwrap();
        let pt: Vec<Rational> = [1, 1, 1, 1].iter().map(|&v| rational(v)).collect();
        assert!(g1.evaluate(&pt).unwrap().is_zero());
        let five = Polynomial::constant(&o, rational(5));
        assert_eq!(five.evaluate(&pt).unwrap(), rational(5));
        assert!(five.evaluate(&pt[..2]).is_err());
    }

    #[test]
    fn reordering_changes_leading_term() {
        let lex = MonomialOrder::new(OrderKind::Lex, 2);
        let grlex = MonomialOrder::new(OrderKind::Grlex, 2);
        let p = Polynomial::parse("x1 + x2^2", &grlex).unwrap();
        assert_eq!(p.leading_monomial(), Some(&Monomial::new(vec![0, 2])));
        assert_eq!(
            p.with_order(&lex).leading_monomial(),
            Some(&Monomial::new(vec![1, 0]))
        );
    }
}
