//! Construction and enumeration of hierarchical identifiable saturated (HIS)
//! models, the leaves of a design's statistical fan.
//!
//! Three routes are provided:
//!
//! * [`greedy_his`] builds one leaf degree by degree, admitting a monomial
//!   once all its constituents are in the model and its vector is independent
//!   of those already chosen.
//! * [`enumerate_greedy_fan`] and [`subset_fan`] branch over every choice the
//!   greedy construction can make, on the full design and on projections.
//! * [`enumerate_statistical_fan`] grows every staircase inside the level box
//!   with incremental rank pruning; it is exhaustive and serves as the oracle
//!   for the other two.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::design::{Design, Model};
use crate::error::{Error, Result};
use crate::exact::{EchelonBasis, Rational};
use crate::monomial::{box_monomials, monomials_of_degree, Monomial, MonomialOrder, OrderKind};

/// How a leaf was found.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Greedy,
    /// Greedy construction on the projection onto these (zero-based)
    /// indeterminates.
    Subset { indeterminates: Vec<usize> },
    Exhaustive,
    /// Standard monomials of a vanishing-ideal Groebner basis.
    Algebraic {
        order: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        indeterminates: Option<Vec<usize>>,
    },
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::Greedy => "greedy",
            Provenance::Subset { .. } => "subset",
            Provenance::Exhaustive => "exhaustive",
            Provenance::Algebraic { .. } => "algebraic",
        }
    }
}

/// Search limits. Exceeding the box or point limits is an error; reaching
/// `max_leaves` stops the search and marks the result truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FanLimits {
    pub max_box: usize,
    pub max_points: usize,
    pub max_leaves: usize,
}

impl Default for FanLimits {
    fn default() -> Self {
        FanLimits {
            max_box: 4096,
            max_points: 16,
            max_leaves: 1_000_000,
        }
    }
}

/// A deduplicated set of leaves with the provenance under which each was
/// first found.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FanResult {
    leaves: BTreeMap<Model, Provenance>,
    truncated: bool,
}

impl FanResult {
    pub fn new() -> Self {
        FanResult::default()
    }

    /// Adds a leaf; returns false if it was already present (the existing
    /// provenance is kept).
    pub fn insert(&mut self, model: Model, provenance: Provenance) -> bool {
        use std::collections::btree_map::Entry;
        match self.leaves.entry(model) {
            Entry::Vacant(v) => {
                v.insert(provenance);
                true
            }
            Entry::Occupied(_) => false,
        }
    }

    /// Union; leaves already present keep their provenance.
    pub fn merge(&mut self, other: FanResult) {
        self.truncated |= other.truncated;
        for (model, provenance) in other.leaves {
            self.insert(model, provenance);
        }
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn contains(&self, model: &Model) -> bool {
        self.leaves.contains_key(model)
    }

    pub fn provenance(&self, model: &Model) -> Option<&Provenance> {
        self.leaves.get(model)
    }

    pub fn leaves(&self) -> impl Iterator<Item = (&Model, &Provenance)> {
        self.leaves.iter()
    }

    pub fn models(&self) -> impl Iterator<Item = &Model> {
        self.leaves.keys()
    }

    /// Leaf counts keyed by provenance label.
    pub fn counts(&self) -> BTreeMap<&'static str, usize> {
        let mut counts = BTreeMap::new();
        for p in self.leaves.values() {
            *counts.entry(p.label()).or_insert(0) += 1;
        }
        counts
    }

    fn mark_truncated(&mut self) {
        self.truncated = true;
    }

    /// One structured record per leaf, in canonical leaf order.
    pub fn records(&self) -> Vec<LeafRecord> {
        self.leaves
            .iter()
            .map(|(model, provenance)| LeafRecord {
                terms: model.terms().to_vec(),
                pretty: model.to_string(),
                provenance: provenance.clone(),
                p: model.len(),
            })
            .collect()
    }
}

/// Structured form of one leaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafRecord {
    pub terms: Vec<Monomial>,
    pub pretty: String,
    pub provenance: Provenance,
    pub p: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stepping {
    ByDegree,
    ByOrder,
}

/// The order in which candidate monomials are offered to the greedy
/// construction.
///
/// In the default degree-by-degree mode, the monomials listed for a degree
/// come first (in listed order), followed by the remaining monomials of that
/// degree in the fallback order. In term-order mode, every monomial of the
/// level box is offered in increasing fallback order regardless of degree,
/// which reproduces the standard monomials of the vanishing ideal for that
/// ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityPolicy {
    preferences: BTreeMap<u32, Vec<Monomial>>,
    fallback: MonomialOrder,
    stepping: Stepping,
}

impl PriorityPolicy {
    /// Degree by degree, each degree in increasing `order`.
    pub fn uniform(order: MonomialOrder) -> Self {
        PriorityPolicy {
            preferences: BTreeMap::new(),
            fallback: order,
            stepping: Stepping::ByDegree,
        }
    }

    /// All monomials in increasing `order`, not grouped by degree.
    pub fn term_order(order: MonomialOrder) -> Self {
        PriorityPolicy {
            preferences: BTreeMap::new(),
            fallback: order,
            stepping: Stepping::ByOrder,
        }
    }

    /// Default policy for `r` indeterminates: ascending grevlex per degree.
    pub fn default_for(r: usize) -> Self {
        PriorityPolicy::uniform(MonomialOrder::new(OrderKind::Grevlex, r))
    }

    /// Lists the preferred monomials of one degree, most relevant first.
    pub fn with_preference(mut self, degree: u32, monomials: Vec<Monomial>) -> Result<Self> {
        let mut seen = HashSet::new();
        for m in &monomials {
            if m.total_degree() != degree {
                return Err(Error::parse(
                    "priority policy",
                    &m.to_string(),
                    format!("listed under degree {degree}"),
                ));
            }
            if m.nvars() != self.fallback.nvars() {
                return Err(Error::DimensionMismatch {
                    expected: self.fallback.nvars(),
                    found: m.nvars(),
                });
            }
            if !seen.insert(m.clone()) {
                return Err(Error::parse("priority policy", &m.to_string(), "listed twice"));
            }
        }
        self.preferences.insert(degree, monomials);
        Ok(self)
    }

    pub fn fallback(&self) -> &MonomialOrder {
        &self.fallback
    }

    fn arrange(&self, degree: u32, mut candidates: Vec<Monomial>) -> Vec<Monomial> {
        self.fallback.sort(&mut candidates);
        let Some(listed) = self.preferences.get(&degree) else {
            return candidates;
        };
        let mut out: Vec<Monomial> = listed
            .iter()
            .filter(|m| candidates.contains(m))
            .cloned()
            .collect();
        out.extend(candidates.into_iter().filter(|m| !listed.contains(m)));
        out
    }
}

/// Model under construction: its terms, their set, and the echelon form of
/// their vectors.
struct Growing<'a> {
    design: &'a Design,
    terms: Vec<Monomial>,
    members: HashSet<Monomial>,
    basis: EchelonBasis,
    vectors: HashMap<Monomial, Vec<Rational>>,
}

impl<'a> Growing<'a> {
    fn start(design: &'a Design) -> Self {
        let mut g = Growing {
            design,
            terms: Vec::new(),
            members: HashSet::new(),
            basis: EchelonBasis::new(design.n()),
            vectors: HashMap::new(),
        };
        let one = Monomial::one(design.r());
        let added = g.try_add(&one);
        debug_assert!(added);
        g
    }

    fn vector(&mut self, m: &Monomial) -> Vec<Rational> {
        if let Some(v) = self.vectors.get(m) {
            return v.clone();
        }
        let v = self
            .design
            .monomial_vector(m)
            .expect("monomial length matches design");
        self.vectors.insert(m.clone(), v.clone());
        v
    }

    fn constituents_present(&self, m: &Monomial) -> bool {
        (0..m.nvars()).all(|j| {
            m.exponents()[j] == 0 || {
                let mut e = m.exponents().to_vec();
                e[j] -= 1;
                self.members.contains(&Monomial::new(e))
            }
        })
    }

    fn try_add(&mut self, m: &Monomial) -> bool {
        let v = self.vector(m);
        let added = self.basis.push(&v).expect("vector length is n");
        if added {
            self.terms.push(m.clone());
            self.members.insert(m.clone());
        }
        added
    }

    fn remove_last(&mut self) {
        if let Some(m) = self.terms.pop() {
            self.members.remove(&m);
            self.basis.truncate(self.terms.len());
        }
    }

    fn is_full(&self) -> bool {
        self.terms.len() == self.design.n()
    }

    /// Degree-`q` monomials all of whose constituents are already present.
    fn admissible(&self, q: u32) -> Vec<Monomial> {
        monomials_of_degree(self.design.r(), q)
            .into_iter()
            .filter(|m| self.constituents_present(m))
            .collect()
    }

    fn model(&self) -> Model {
        Model::new(self.design.r(), self.terms.clone()).expect("terms have length r")
    }
}

/// Builds one HIS model by the greedy construction under `policy`.
pub fn greedy_his(design: &Design, policy: &PriorityPolicy) -> Result<Model> {
    if policy.fallback.nvars() != design.r() {
        return Err(Error::DimensionMismatch {
            expected: design.r(),
            found: policy.fallback.nvars(),
        });
    }
    let mut g = Growing::start(design);
    match policy.stepping {
        Stepping::ByDegree => {
            let mut q = 1;
            while !g.is_full() {
                let candidates = g.admissible(q);
                if candidates.is_empty() {
                    break;
                }
                for m in policy.arrange(q, candidates) {
                    if g.is_full() {
                        break;
                    }
                    g.try_add(&m);
                }
                q += 1;
            }
        }
        Stepping::ByOrder => {
            let mut candidates = box_monomials(design.level_counts());
            policy.fallback.sort(&mut candidates);
            for m in candidates {
                if g.is_full() {
                    break;
                }
                if !m.is_one() && g.constituents_present(&m) {
                    g.try_add(&m);
                }
            }
        }
    }
    if !g.is_full() {
        return Err(Error::InvalidDesign(format!(
            "greedy construction stalled at {} of {} terms",
            g.terms.len(),
            design.n()
        )));
    }
    Ok(g.model())
}

/// Every leaf the greedy construction can reach: at each degree, branch on
/// every maximal independent selection from the admissible monomials.
pub fn enumerate_greedy_fan(design: &Design, limits: &FanLimits) -> Result<FanResult> {
    let mut result = FanResult::new();
    let mut g = Growing::start(design);
    greedy_step(&mut g, 1, limits, &mut result, &Provenance::Greedy)?;
    log::debug!("greedy fan: {} leaves", result.len());
    Ok(result)
}

fn greedy_step(
    g: &mut Growing<'_>,
    q: u32,
    limits: &FanLimits,
    out: &mut FanResult,
    provenance: &Provenance,
) -> Result<()> {
    if out.is_truncated() {
        return Ok(());
    }
    if g.is_full() {
        if out.len() >= limits.max_leaves {
            out.mark_truncated();
        } else {
            out.insert(g.model(), provenance.clone());
        }
        return Ok(());
    }
    let candidates = g.admissible(q);
    let before = g.terms.len();
    for m in &candidates {
        g.try_add(m);
    }
    let gain = g.terms.len() - before;
    while g.terms.len() > before {
        g.remove_last();
    }
    if gain == 0 {
        return Err(Error::InvalidDesign(format!(
            "greedy construction stalled at {before} of {} terms",
            g.design.n()
        )));
    }
    choose(g, &candidates, 0, gain, q, limits, out, provenance)
}

#[allow(clippy::too_many_arguments)]
fn choose(
    g: &mut Growing<'_>,
    candidates: &[Monomial],
    from: usize,
    need: usize,
    q: u32,
    limits: &FanLimits,
    out: &mut FanResult,
    provenance: &Provenance,
) -> Result<()> {
    if need == 0 {
        return greedy_step(g, q + 1, limits, out, provenance);
    }
    for i in from..candidates.len() {
        if candidates.len() - i < need || out.is_truncated() {
            break;
        }
        if g.try_add(&candidates[i]) {
            choose(g, candidates, i + 1, need - 1, q, limits, out, provenance)?;
            g.remove_last();
        }
    }
    Ok(())
}

/// Nonempty proper subsets of `0..r`, smallest first.
pub fn proper_subsets(r: usize) -> Vec<Vec<usize>> {
    let mut subsets: Vec<Vec<usize>> = (1u32..(1 << r) - 1)
        .map(|mask| (0..r).filter(|j| mask & (1 << j) != 0).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subsets
}

/// Greedy fans of every projection onto a proper subset of indeterminates
/// that keeps all `n` points distinct, lifted back to `r` indeterminates.
pub fn subset_fan(design: &Design, limits: &FanLimits) -> Result<FanResult> {
    let mut candidates = Vec::new();
    for subset in proper_subsets(design.r()) {
        if design.projected_size(&subset)? == design.n() {
            candidates.push(subset);
        }
    }
    log::debug!("subset fan: {} projections keep all points distinct", candidates.len());
    let per_subset = crate::par_map(&candidates, |subset| -> Result<FanResult> {
        let projected = design.project(subset)?;
        let fan = enumerate_greedy_fan(&projected, limits)?;
        let mut lifted = FanResult::new();
        lifted.truncated = fan.truncated;
        let provenance = Provenance::Subset {
            indeterminates: subset.clone(),
        };
        for model in fan.models() {
            lifted.insert(model.lift(subset, design.r()), provenance.clone());
        }
        Ok(lifted)
    });
    let mut result = FanResult::new();
    for fan in per_subset {
        result.merge(fan?);
    }
    Ok(result)
}

/// Monomials of a level box in canonical (graded) order, with the positions
/// of each monomial's immediate divisors.
struct BoxLattice {
    monomials: Vec<Monomial>,
    below: Vec<Vec<usize>>,
}

impl BoxLattice {
    fn new(bounds: &[usize]) -> Self {
        let monomials = box_monomials(bounds);
        let index: HashMap<&Monomial, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let below = monomials
            .iter()
            .map(|m| {
                (0..m.nvars())
                    .filter(|&j| m.exponents()[j] > 0)
                    .map(|j| {
                        let mut e = m.exponents().to_vec();
                        e[j] -= 1;
                        index[&Monomial::new(e)]
                    })
                    .collect()
            })
            .collect();
        BoxLattice { monomials, below }
    }
}

/// Walks every staircase of `size` elements in the lattice exactly once:
/// elements are added in increasing canonical order, and `admit` may veto an
/// element (its veto prunes the whole subtree). `emit` returns false to stop.
fn walk_staircases(
    lattice: &BoxLattice,
    size: usize,
    admit: &mut dyn FnMut(usize) -> bool,
    retract: &mut dyn FnMut(),
    emit: &mut dyn FnMut(&[usize]) -> bool,
) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        lattice: &BoxLattice,
        size: usize,
        members: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        from: usize,
        admit: &mut dyn FnMut(usize) -> bool,
        retract: &mut dyn FnMut(),
        emit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if chosen.len() == size {
            return emit(chosen);
        }
        for i in from..lattice.monomials.len() {
            if !lattice.below[i].iter().all(|&b| members[b]) {
                continue;
            }
            if !admit(i) {
                continue;
            }
            members[i] = true;
            chosen.push(i);
            let go_on = go(lattice, size, members, chosen, i + 1, admit, retract, emit);
            chosen.pop();
            members[i] = false;
            retract();
            if !go_on {
                return false;
            }
        }
        true
    }
    let mut members = vec![false; lattice.monomials.len()];
    go(
        lattice,
        size,
        &mut members,
        &mut Vec::with_capacity(size),
        0,
        admit,
        retract,
        emit,
    );
}

/// Number of staircases (order ideals) with `size` elements inside the box
/// `{a : a_j < bounds[j]}`, ignoring any design.
pub fn count_staircases(bounds: &[usize], size: usize) -> u64 {
    let lattice = BoxLattice::new(bounds);
    if size > lattice.monomials.len() {
        return 0;
    }
    let mut count = 0u64;
    walk_staircases(&lattice, size, &mut |_| true, &mut || {}, &mut |_| {
        count += 1;
        true
    });
    count
}

/// The staircases counted by [`count_staircases`], as models.
pub fn staircases(bounds: &[usize], size: usize) -> Vec<Model> {
    let lattice = BoxLattice::new(bounds);
    let mut out = Vec::new();
    if size > lattice.monomials.len() {
        return out;
    }
    walk_staircases(&lattice, size, &mut |_| true, &mut || {}, &mut |chosen| {
        let terms = chosen.iter().map(|&i| lattice.monomials[i].clone()).collect();
        out.push(Model::new(bounds.len(), terms).expect("box monomials have length r"));
        true
    });
    out
}

/// The complete statistical fan: every staircase of `n` monomials inside the
/// level box whose model matrix has full rank.
pub fn enumerate_statistical_fan(design: &Design, limits: &FanLimits) -> Result<FanResult> {
    let box_size = design
        .level_counts()
        .iter()
        .try_fold(1usize, |acc, &c| acc.checked_mul(c));
    match box_size {
        Some(size) if size <= limits.max_box => {}
        _ => {
            return Err(Error::CapExceeded(format!(
                "level box {:?} exceeds {} monomials",
                design.level_counts(),
                limits.max_box
            )))
        }
    }
    if design.n() > limits.max_points {
        return Err(Error::CapExceeded(format!(
            "{} points exceeds the exhaustive limit of {}",
            design.n(),
            limits.max_points
        )));
    }
    let lattice = BoxLattice::new(design.level_counts());
    let vectors = lattice
        .monomials
        .iter()
        .map(|m| design.monomial_vector(m))
        .collect::<Result<Vec<_>>>()?;
    let basis = std::cell::RefCell::new(EchelonBasis::new(design.n()));
    let mut result = FanResult::new();
    let r = design.r();
    walk_staircases(
        &lattice,
        design.n(),
        &mut |i| basis.borrow_mut().push(&vectors[i]).expect("length n"),
        &mut || {
            let mut b = basis.borrow_mut();
            let len = b.len();
            b.truncate(len - 1);
        },
        &mut |chosen| {
            if result.len() >= limits.max_leaves {
                result.mark_truncated();
                return false;
            }
            let terms = chosen.iter().map(|&i| lattice.monomials[i].clone()).collect();
            result.insert(
                Model::new(r, terms).expect("box monomials have length r"),
                Provenance::Exhaustive,
            );
            true
        },
    );
    Ok(result)
}
