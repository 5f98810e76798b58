use std::collections::BTreeSet;

use proptest::prelude::*;

use hisfan::conditions::{g_value, necessary_box, necessary_subsets, necessary_total};
use hisfan::exact::{extends_independent, in_span_coefficients, rank, rational, EchelonBasis};
use hisfan::fan::{enumerate_greedy_fan, enumerate_statistical_fan, greedy_his, FanLimits, PriorityPolicy};
use hisfan::groebner::{buchberger, certify_vanishing_ideal, vanishing_ideal, Polynomial};
use hisfan::monomial::{box_monomials, permutations};
use hisfan::{Design, Matrix, Monomial, MonomialOrder, OrderKind, Rational};

fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(-3i64..=3, rows * cols)
            .prop_map(move |e| Matrix::new(rows, cols, e.into_iter().map(rational).collect()).unwrap())
    })
}

/// Between 2 and 6 distinct points with coordinates in -2..=2.
fn design() -> impl Strategy<Value = Design> {
    (1usize..=3).prop_flat_map(|r| {
        prop::collection::btree_set(prop::collection::vec(-2i64..=2, r), 2..=6).prop_map(|pts| {
            Design::new(pts.into_iter().map(|p| p.into_iter().map(rational).collect()).collect()).unwrap()
        })
    })
}

fn kind() -> impl Strategy<Value = OrderKind> {
    prop::sample::select(OrderKind::ALL.to_vec())
}

fn monomial(r: usize, max: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max, r).prop_map(Monomial::new)
}

fn relabelled(design: &Design, mapping: &[usize]) -> Design {
    let rows = (0..design.n())
        .map(|i| {
            let p = design.point(i);
            let mut q = vec![Rational::default(); p.len()];
            for (j, x) in p.iter().enumerate() {
                q[mapping[j]] = x.clone();
            }
            q
        })
        .collect();
    Design::new(rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_of_transpose(m in matrix()) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        prop_assert!(rank(&m) <= m.rows().min(m.cols()));
    }

    #[test]
    fn extension_raises_rank_exactly_when_independent(m in matrix(), v in prop::collection::vec(-3i64..=3, 4)) {
        let v: Vec<Rational> = v.into_iter().take(m.rows()).map(rational).collect();
        prop_assume!(v.len() == m.rows());
        let mut cols = m.columns();
        cols.push(v.clone());
        let extended = Matrix::from_columns(m.rows(), &cols).unwrap();
        prop_assert_eq!(extends_independent(&m, &v).unwrap(), rank(&extended) > rank(&m));
    }

    #[test]
    fn span_coefficients_reconstruct(m in matrix(), c in prop::collection::vec(-3i64..=3, 4)) {
        let c: Vec<Rational> = c.into_iter().take(m.cols()).map(rational).collect();
        prop_assume!(c.len() == m.cols());
        let target = m.mul_vec(&c).unwrap();
        let found = in_span_coefficients(&m, &target).unwrap().expect("combination lies in the span");
        prop_assert_eq!(m.mul_vec(&found).unwrap(), target);
    }

    #[test]
    fn echelon_express_reconstructs(m in matrix()) {
        let mut basis = EchelonBasis::new(m.rows());
        let mut kept = Vec::new();
        for col in m.columns() {
            match basis.express(&col).unwrap() {
                Some(c) => {
                    let mut sum = vec![Rational::default(); m.rows()];
                    for (k, coef) in kept.iter().zip(&c) {
                        for (s, x) in sum.iter_mut().zip(k as &Vec<Rational>) {
                            *s += coef * x;
                        }
                    }
                    prop_assert_eq!(sum, col);
                }
                None => {
                    prop_assert!(basis.push(&col).unwrap());
                    kept.push(col);
                }
            }
        }
        prop_assert_eq!(basis.len(), rank(&m));
    }

    #[test]
    fn order_axioms(k in kind(), perm in prop::sample::select(permutations(3)),
                    a in monomial(3, 3), b in monomial(3, 3), c in monomial(3, 3)) {
        let o = MonomialOrder::with_permutation(k, perm).unwrap();
        let ab = o.cmp(&a, &b);
        prop_assert_eq!(ab, o.cmp(&b, &a).reverse());
        prop_assert_eq!(ab.is_eq(), a == b);
        prop_assert_eq!(o.cmp(&a.mul(&c), &b.mul(&c)), ab);
        prop_assert!(!o.cmp(&a, &Monomial::one(3)).is_lt());
        if o.cmp(&a, &b).is_le() && o.cmp(&b, &c).is_le() {
            prop_assert!(o.cmp(&a, &c).is_le());
        }
    }

    #[test]
    fn greedy_model_is_his(d in design(), k in kind()) {
        let order = MonomialOrder::new(k, d.r());
        for policy in [PriorityPolicy::uniform(order.clone()), PriorityPolicy::term_order(order)] {
            let m = greedy_his(&d, &policy).unwrap();
            prop_assert_eq!(m.len(), d.n());
            prop_assert!(d.is_his(&m).unwrap());
        }
    }

    #[test]
    fn greedy_leaves_lie_in_statistical_fan(d in design()) {
        let limits = FanLimits::default();
        let greedy = enumerate_greedy_fan(&d, &limits).unwrap();
        let all = enumerate_statistical_fan(&d, &limits).unwrap();
        prop_assert!(!greedy.is_empty());
        for leaf in greedy.models() {
            prop_assert!(all.contains(leaf));
        }
        for leaf in all.models() {
            prop_assert!(d.is_his(leaf).unwrap());
            for t in leaf.terms() {
                prop_assert!(necessary_total(t, d.n()));
                prop_assert!(necessary_box(t, d.level_counts()).unwrap());
                prop_assert!(necessary_subsets(&d, t).unwrap().holds);
            }
        }
    }

    #[test]
    fn statistical_fan_is_relabelling_equivariant(d in design(), pick in 0usize..6) {
        let perms = permutations(d.r());
        let mapping = &perms[pick % perms.len()];
        let limits = FanLimits::default();
        let moved: BTreeSet<String> = enumerate_statistical_fan(&d, &limits)
            .unwrap()
            .models()
            .map(|m| m.relabel(mapping).to_string())
            .collect();
        let direct: BTreeSet<String> = enumerate_statistical_fan(&relabelled(&d, mapping), &limits)
            .unwrap()
            .models()
            .map(ToString::to_string)
            .collect();
        prop_assert_eq!(moved, direct);
    }

    #[test]
    fn vanishing_ideal_is_certified_and_unique(d in design(), k in kind(), seed in any::<u64>()) {
        let order = MonomialOrder::new(k, d.r());
        let (gb, quotient) = vanishing_ideal(&d, &order).unwrap();
        prop_assert!(certify_vanishing_ideal(&d, &gb).unwrap());
        prop_assert_eq!(gb.standard_monomials().unwrap(), quotient);
        let mut gens: Vec<Polynomial> = gb.generators().to_vec();
        let len = gens.len();
        if len > 1 {
            gens.rotate_left((seed as usize) % len);
        }
        let scaled: Vec<Polynomial> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| g.scale(&rational(((seed >> i) % 5) as i64 + 1)))
            .collect();
        prop_assert_eq!(buchberger(&scaled, &order), gb);
    }

    #[test]
    fn ideal_combinations_reduce_to_zero(d in design(), k in kind(),
                                         coefs in prop::collection::vec((-3i64..=3, prop::collection::vec(0u32..=2, 3)), 1..4)) {
        let order = MonomialOrder::new(k, d.r());
        let (gb, _) = vanishing_ideal(&d, &order).unwrap();
        prop_assume!(!gb.is_empty());
        let mut h = Polynomial::zero(&order);
        for (i, (c, e)) in coefs.into_iter().enumerate() {
            let g = &gb.generators()[i % gb.len()];
            let m = Monomial::new(e.into_iter().take(d.r()).collect());
            h = h.add(&g.mul_term(&rational(c), &m));
        }
        prop_assert!(gb.normal_form(&h).is_zero());
        prop_assert!(gb.contains(&h));
        prop_assert!((0..d.n()).all(|i| h.evaluate(d.point(i)).unwrap() == Rational::default()));
    }

    #[test]
    fn g_is_monotone_under_divisibility(levels in prop::collection::vec(1usize..=4, 1..=3),
                                        pick in any::<(usize, usize)>()) {
        let all = box_monomials(&levels);
        let a = &all[pick.0 % all.len()];
        let b = &all[pick.1 % all.len()];
        let ga = g_value(&levels, a).unwrap();
        let gb = g_value(&levels, b).unwrap();
        if a.divides(b) {
            prop_assert!(ga <= gb);
        }
        let total: u128 = levels.iter().map(|&l| l as u128).product();
        prop_assert!(ga >= 1 && ga <= total);
    }
}
