use std::collections::BTreeSet;

use serde::Serialize;

use crate::design::Model;
use crate::monomial::{box_monomials, Monomial, MonomialOrder};

use super::polynomial::{Polynomial, PolynomialRecord};

/// Multivariate division: `f = sum q_i d_i + remainder`, where no term of the
/// remainder is divisible by any divisor's leading monomial.
pub fn divide(
    f: &Polynomial,
    divisors: &[Polynomial],
    order: &MonomialOrder,
) -> (Vec<Polynomial>, Polynomial) {
    let divisors: Vec<Polynomial> = divisors.iter().map(|d| d.with_order(order)).collect();
    let mut p = f.with_order(order);
    let mut quotients = vec![Polynomial::zero(order); divisors.len()];
    let mut remainder = Vec::new();
    while let Some((lm, lc)) = p.terms().first().cloned() {
        let hit = divisors.iter().enumerate().find_map(|(i, d)| {
            let dlm = d.leading_monomial()?;
            lm.div(dlm).map(|q| (i, q))
        });
        match hit {
            Some((i, q)) => {
                let d = &divisors[i];
                let c = lc / d.leading_coefficient().expect("nonzero divisor");
                quotients[i] = quotients[i].add(&Polynomial::from_terms(order, vec![(q.clone(), c.clone())]));
                p = p.sub(&d.mul_term(&c, &q));
            }
            None => {
                remainder.push((lm.clone(), lc.clone()));
                p = p.sub(&Polynomial::from_terms(order, vec![(lm, lc)]));
            }
        }
    }
    (quotients, Polynomial::from_terms(order, remainder))
}

/// Remainder of `f` on division by `divisors`.
pub fn normal_form(f: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    divide(f, divisors, f.order()).1
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (Some(lf), Some(lg)) = (f.leading_monomial(), g.leading_monomial()) else {
        return Polynomial::zero(f.order());
    };
    let lcm = lf.lcm(lg);
    let cf = f.leading_coefficient().expect("nonzero").recip();
    let cg = g.leading_coefficient().expect("nonzero").recip();
    f.mul_term(&cf, &lcm.div(lf).expect("lcm is a multiple"))
        .sub(&g.mul_term(&cg, &lcm.div(lg).expect("lcm is a multiple")))
}

fn coprime(a: &Monomial, b: &Monomial) -> bool {
    a.exponents()
        .iter()
        .zip(b.exponents())
        .all(|(x, y)| *x == 0 || *y == 0)
}

/// Reduced monic Groebner basis of the ideal generated by `gens` under
/// `order`, by Buchberger's algorithm with the coprime-leading-term and chain
/// criteria for discarding S-pairs.
pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder) -> GroebnerBasis {
    let mut basis: Vec<Polynomial> = gens
        .iter()
        .map(|g| g.with_order(order))
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    while let Some(&(i, j)) = pending.iter().next() {
        pending.remove(&(i, j));
        let li = basis[i].leading_monomial().expect("nonzero").clone();
        let lj = basis[j].leading_monomial().expect("nonzero").clone();
        if coprime(&li, &lj) {
            continue;
        }
        let lcm = li.lcm(&lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
                && basis[k].leading_monomial().expect("nonzero").divides(&lcm)
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = normal_form(&s, &basis);
        if !r.is_zero() {
            let new = basis.len();
            basis.push(r.monic());
            for k in 0..new {
                pending.insert((k, new));
            }
        }
    }
    GroebnerBasis::reduce_from(order, basis)
}

/// A reduced, monic Groebner basis. Generators are sorted by increasing
/// leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    generators: Vec<Polynomial>,
}

impl GroebnerBasis {
    /// Minimalizes and interreduces an arbitrary Groebner basis.
    pub fn reduce_from(order: &MonomialOrder, basis: Vec<Polynomial>) -> GroebnerBasis {
        let mut basis: Vec<Polynomial> = basis
            .into_iter()
            .map(|g| g.with_order(order).monic())
            .filter(|g| !g.is_zero())
            .collect();
        basis.sort_by(|a, b| {
            order.cmp(
                a.leading_monomial().expect("nonzero"),
                b.leading_monomial().expect("nonzero"),
            )
        });
        let mut minimal: Vec<Polynomial> = Vec::new();
        for g in basis {
            let lm = g.leading_monomial().expect("nonzero");
            if !minimal
                .iter()
                .any(|h| h.leading_monomial().expect("nonzero").divides(lm))
            {
                minimal.push(g);
            }
        }
        let mut reduced = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, g)| g.clone())
                .collect();
            let g = &minimal[i];
            let lm = g.leading_monomial().expect("nonzero").clone();
            let tail = g.sub(&Polynomial::monomial(order, lm.clone()));
            let tail = normal_form(&tail, &others);
            reduced.push(Polynomial::monomial(order, lm).add(&tail));
        }
        GroebnerBasis {
            order: order.clone(),
            generators: reduced,
        }
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .map(|g| g.leading_monomial().expect("nonzero").clone())
            .collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators.iter().any(Polynomial::is_constant)
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form(&f.with_order(&self.order), &self.generators)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Every S-polynomial of the generators reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|j| (0..j).all(|i| normal_form(&s_polynomial(&g[i], &g[j]), g).is_zero()))
    }

    /// Monomials divisible by no leading monomial. `None` when the ideal is
    /// not zero-dimensional (some indeterminate has no pure power among the
    /// leading monomials), since the set is then infinite.
    pub fn standard_monomials(&self) -> Option<Model> {
        let r = self.order.nvars();
        let lms = self.leading_monomials();
        let mut bounds = Vec::with_capacity(r);
        for j in 0..r {
            let pure = lms
                .iter()
                .filter(|m| {
                    m.exponents()
                        .iter()
                        .enumerate()
                        .all(|(k, &e)| k == j || e == 0)
                })
                .map(|m| m.exponents()[j] as usize)
                .filter(|&e| e > 0)
                .min()?;
            bounds.push(pure);
        }
        let terms = box_monomials(&bounds)
            .into_iter()
            .filter(|m| !lms.iter().any(|l| l.divides(m)))
            .collect();
        Some(Model::new(r, terms).expect("box monomials have length r"))
    }

    pub fn to_record(&self) -> GroebnerRecord {
        GroebnerRecord {
            order: self.order.describe(),
            generators: self.generators.iter().map(Polynomial::to_record).collect(),
            leading_monomials: self.leading_monomials(),
            standard_monomials: self
                .standard_monomials()
                .map(|m| m.terms().to_vec())
                .unwrap_or_default(),
        }
    }
}

/// Structured form of a Groebner basis and its standard monomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroebnerRecord {
    pub order: String,
    pub generators: Vec<PolynomialRecord>,
    pub leading_monomials: Vec<Monomial>,
    pub standard_monomials: Vec<Monomial>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::OrderKind;

    fn poly(text: &str, o: &MonomialOrder) -> Polynomial {
        Polynomial::parse(text, o).unwrap()
    }

    #[test]
    fn division_by_square_minus_one() {
        let o = MonomialOrder::new(OrderKind::Grlex, 3);
        let (q, r) = divide(&poly("x1^2*x3", &o), &[poly("x1^2 - 1", &o)], &o);
        assert_eq!(r, poly("x3", &o));
        assert_eq!(q[0], poly("x3", &o));
        let (_, r0) = divide(&Polynomial::zero(&o), &[poly("x1^2 - 1", &o)], &o);
        assert!(r0.is_zero());
    }

    #[test]
    fn division_identity_holds() {
        let o = MonomialOrder::new(OrderKind::Lex, 2);
        let f = poly("x1^2*x2 + x1*x2^2 + x2^2", &o);
        let ds = [poly("x1*x2 - 1", &o), poly("x2^2 - 1", &o)];
        let (q, r) = divide(&f, &ds, &o);
        let rebuilt = q
            .iter()
            .zip(&ds)
            .fold(r.clone(), |acc, (qi, di)| acc.add(&qi.mul(di)));
        assert_eq!(rebuilt, f);
        assert_eq!(r, poly("x1 + x2 + 1", &o));
    }

    #[test]
    fn single_generator_is_its_own_basis() {
        let o = MonomialOrder::new(OrderKind::Grlex, 2);
        let gb = buchberger(&[poly("x1^2 - 1", &o)], &o);
        assert_eq!(gb.generators(), &[poly("x1^2 - 1", &o)]);
        assert!(gb.standard_monomials().is_none());
    }

    #[test]
    fn inconsistent_points_give_unit_ideal() {
        let o = MonomialOrder::new(OrderKind::Lex, 1);
        let gb = buchberger(&[poly("x1 - 1", &o), poly("x1 - 2", &o)], &o);
        assert_eq!(gb.generators(), &[poly("1", &o)]);
        assert!(gb.is_unit_ideal());
    }

    #[test]
    fn textbook_example() {
        // x^3 - 2xy, x^2 y - 2y^2 + x under grlex: reduced basis {x^2, xy, y^2 - x/2}
        let o = MonomialOrder::new(OrderKind::Grlex, 2);
        let gb = buchberger(
            &[poly("x1^3 - 2*x1*x2", &o), poly("x1^2*x2 - 2*x2^2 + x1", &o)],
            &o,
        );
        let mut got: Vec<String> = gb.generators().iter().map(|g| g.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["x1*x2", "x1^2", "x2^2 - 1/2*x1"]);
        assert!(gb.is_groebner());
    }
}
