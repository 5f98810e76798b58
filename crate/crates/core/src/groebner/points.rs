//! Vanishing ideals of finite point sets and the algebraic fan.

use num_traits::{One, Zero};

use crate::design::{Design, Model};
use crate::error::{Error, Result};
use crate::exact::{EchelonBasis, Rational};
use crate::fan::{proper_subsets, FanResult, Provenance};
use crate::monomial::{permutations, Monomial, MonomialOrder, OrderKind};

use super::basis::GroebnerBasis;
use super::polynomial::Polynomial;

/// Reduced Groebner basis of the ideal of polynomials vanishing on the design
/// points, with its standard monomials, by the Buchberger–Möller algorithm.
///
/// Candidate monomials are taken in increasing order. A candidate whose
/// evaluation vector is independent of the accepted ones joins the quotient
/// basis and spawns its multiples by each indeterminate; a dependent one
/// yields the generator `t - sum c_q q`.
pub fn vanishing_ideal(design: &Design, order: &MonomialOrder) -> Result<(GroebnerBasis, Model)> {
    let r = design.r();
    if order.nvars() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: order.nvars(),
        });
    }
    let mut echelon = EchelonBasis::new(design.n());
    let mut quotient: Vec<Monomial> = Vec::new();
    let mut leading: Vec<Monomial> = Vec::new();
    let mut generators: Vec<Polynomial> = Vec::new();
    let mut candidates: Vec<Monomial> = vec![Monomial::one(r)];
    while !candidates.is_empty() {
        let (at, _) = candidates
            .iter()
            .enumerate()
            .min_by(|a, b| order.cmp(a.1, b.1))
            .expect("nonempty");
        let t = candidates.swap_remove(at);
        if leading.iter().any(|l| l.divides(&t)) {
            continue;
        }
        let v = design.monomial_vector(&t)?;
        if echelon.push(&v)? {
            for j in 0..r {
                let next = t.times_var(j);
                if !candidates.contains(&next) {
                    candidates.push(next);
                }
            }
            quotient.push(t);
        } else {
            let coefficients = echelon.express(&v)?.expect("dependent vector lies in the span");
            let mut terms: Vec<(Monomial, Rational)> = vec![(t.clone(), Rational::one())];
            for (q, c) in quotient.iter().zip(coefficients) {
                if !c.is_zero() {
                    terms.push((q.clone(), -c));
                }
            }
            generators.push(Polynomial::from_terms(order, terms));
            leading.push(t);
        }
    }
    let gb = GroebnerBasis::reduce_from(order, generators);
    let model = Model::new(r, quotient)?;
    Ok((gb, model))
}

/// Independent certificate that `gb` generates the vanishing ideal of the
/// design: every generator vanishes on every point, the generators form a
/// Groebner basis, and there are exactly `n` standard monomials whose vectors
/// are independent on the design.
pub fn certify_vanishing_ideal(design: &Design, gb: &GroebnerBasis) -> Result<bool> {
    for g in gb.generators() {
        for i in 0..design.n() {
            if !g.evaluate(design.point(i))?.is_zero() {
                return Ok(false);
            }
        }
    }
    if !gb.is_groebner() {
        return Ok(false);
    }
    match gb.standard_monomials() {
        Some(model) if model.len() == design.n() => design.is_identifiable(&model),
        _ => Ok(false),
    }
}

/// Which term orders the algebraic sweep visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOptions {
    pub kinds: Vec<OrderKind>,
    /// Visit every relabelling of the indeterminates; otherwise identity only.
    pub all_permutations: bool,
    /// Also sweep projections onto proper subsets that keep all points
    /// distinct, lifting the quotient bases.
    pub include_subsets: bool,
    /// Upper bound on the number of (order, target) pairs visited.
    pub max_orders: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            kinds: OrderKind::ALL.to_vec(),
            all_permutations: true,
            include_subsets: false,
            max_orders: 100_000,
        }
    }
}

/// Quotient bases of the vanishing ideal over a family of term orders. Each
/// distinct leaf records the first order that produced it.
pub fn algebraic_fan(design: &Design, options: &SweepOptions) -> Result<FanResult> {
    let r = design.r();
    let mut targets: Vec<Option<Vec<usize>>> = vec![None];
    if options.include_subsets {
        for subset in proper_subsets(r) {
            if design.projected_size(&subset)? == design.n() {
                targets.push(Some(subset));
            }
        }
    }
    let mut jobs = Vec::new();
    for target in &targets {
        let k = target.as_ref().map_or(r, Vec::len);
        let per_kind = if options.all_permutations {
            (1..=k).try_fold(1usize, |acc, i| acc.checked_mul(i))
        } else {
            Some(1)
        };
        let planned = per_kind
            .and_then(|p| p.checked_mul(options.kinds.len()))
            .and_then(|p| p.checked_add(jobs.len()));
        if planned.is_none_or(|p| p > options.max_orders) {
            return Err(Error::CapExceeded(format!(
                "algebraic sweep over {k} indeterminates exceeds {} orders",
                options.max_orders
            )));
        }
        let perms = if options.all_permutations {
            permutations(k)
        } else {
            vec![(0..k).collect()]
        };
        for kind in &options.kinds {
            for p in &perms {
                jobs.push((target.clone(), MonomialOrder::with_permutation(*kind, p.clone())?));
            }
        }
    }
    log::debug!("algebraic sweep: {} term orders", jobs.len());
    let found = crate::par_map(&jobs, |(target, order)| -> Result<(Model, Provenance)> {
        let (model, indeterminates) = match target {
            None => (vanishing_ideal(design, order)?.1, None),
            Some(subset) => {
                let projected = design.project(subset)?;
                let quotient = vanishing_ideal(&projected, order)?.1;
                (quotient.lift(subset, r), Some(subset.clone()))
            }
        };
        Ok((
            model,
            Provenance::Algebraic {
                order: order.describe(),
                indeterminates,
            },
        ))
    });
    let mut fan = FanResult::new();
    for item in found {
        let (model, provenance) = item?;
        fan.insert(model, provenance);
    }
    Ok(fan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn two_points_on_a_line() {
        let d = Design::from_i64(&[&[0], &[1]]).unwrap();
        let o = MonomialOrder::new(OrderKind::Lex, 1);
        let (gb, q) = vanishing_ideal(&d, &o).unwrap();
        assert_eq!(gb.generators(), &[Polynomial::parse("x1^2 - x1", &o).unwrap()]);
        assert_eq!(q, Model::from_exponents(&[&[0], &[1]]));
        assert!(certify_vanishing_ideal(&d, &gb).unwrap());
    }

    #[test]
    fn quotient_basis_is_a_leaf() {
        let d = catalog::small_three_factor();
        for kind in OrderKind::ALL {
            let o = MonomialOrder::new(kind, 3);
            let (gb, q) = vanishing_ideal(&d, &o).unwrap();
            assert_eq!(q.len(), d.n());
            assert!(d.is_his(&q).unwrap());
            assert_eq!(gb.standard_monomials().unwrap(), q);
            assert!(certify_vanishing_ideal(&d, &gb).unwrap());
        }
    }

    #[test]
    fn certificate_rejects_wrong_basis() {
        let d = catalog::seven_point_two_level();
        let o = MonomialOrder::new(OrderKind::Grlex, 4);
        let (gb, _) = vanishing_ideal(&d, &o).unwrap();
        let fewer = GroebnerBasis::reduce_from(&o, gb.generators()[1..].to_vec());
        assert!(!certify_vanishing_ideal(&d, &fewer).unwrap());
        let other = catalog::definitive_screening_4();
        assert!(!certify_vanishing_ideal(&other, &gb).unwrap());
    }

    #[test]
    fn sweep_cap() {
        let d = catalog::definitive_screening_4();
        let options = SweepOptions {
            max_orders: 10,
            ..SweepOptions::default()
        };
        assert!(matches!(algebraic_fan(&d, &options), Err(Error::CapExceeded(_))));
    }
}
