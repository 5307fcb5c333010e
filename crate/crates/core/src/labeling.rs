//! Triple assignments, rising chains, R-labelings and the statistics built
//! from them.
//!
//! A triple assignment maps every cover triplet `x ≺ y ≺ z` to a letter in
//! `{a, b}`. A maximal chain of an interval is rising when all its consecutive
//! triplets carry `a`; the assignment is valid when every interval of rank at
//! least 2 has exactly one rising chain. This is equivalent to the poset
//! having an R-labeling, and [`labeling_to_assignment`] /
//! [`assignment_to_labeling`] translate between the two.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::flag::{FlagVector, RankMask};
use crate::poly::{AbPolynomial, Word};
use crate::poset::{Elem, GradedPoset, MaximalChain, PosetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn flip(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            _ => None,
        }
    }

    fn bit(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A letter for each triplet of a poset, indexed like
/// [`GradedPoset::triplets`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleAssignment {
    values: Vec<Letter>,
}

impl TripleAssignment {
    pub fn new(poset: &GradedPoset, values: Vec<Letter>) -> Self {
        assert_eq!(
            values.len(),
            poset.triplets().len(),
            "assignment must cover every triplet"
        );
        TripleAssignment { values }
    }

    pub fn constant(poset: &GradedPoset, letter: Letter) -> Self {
        Self::new(poset, vec![letter; poset.triplets().len()])
    }

    /// Builds an assignment from a function on `(x, y, z)`.
    pub fn from_fn(poset: &GradedPoset, mut f: impl FnMut(Elem, Elem, Elem) -> Letter) -> Self {
        let values = poset.triplets().iter().map(|t| f(t.x, t.y, t.z)).collect();
        TripleAssignment { values }
    }

    pub(crate) fn from_letters(values: Vec<Letter>) -> Self {
        TripleAssignment { values }
    }

    pub fn values(&self) -> &[Letter] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, poset: &GradedPoset, x: Elem, y: Elem, z: Elem) -> Letter {
        let i = poset
            .triplet_index(x, y, z)
            .unwrap_or_else(|| panic!("({x}, {y}, {z}) is not a cover triplet"));
        self.values[i]
    }

    pub fn set(&mut self, poset: &GradedPoset, x: Elem, y: Elem, z: Elem, letter: Letter) {
        let i = poset
            .triplet_index(x, y, z)
            .unwrap_or_else(|| panic!("({x}, {y}, {z}) is not a cover triplet"));
        self.values[i] = letter;
    }
}

/// Number of rising maximal chains in an interval, capped at two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RisingStatus {
    Zero,
    Unique(MaximalChain),
    Many,
}

impl RisingStatus {
    pub fn is_unique(&self) -> bool {
        matches!(self, RisingStatus::Unique(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            RisingStatus::Zero => "zero",
            RisingStatus::Unique(_) => "unique",
            RisingStatus::Many => "many",
        }
    }
}

/// The first interval breaking the unique-rising-chain condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub x: Elem,
    pub y: Elem,
    pub status: RisingStatus,
}

/// Every consecutive triplet of the chain maps to `a`. Chains with fewer
/// than three elements are vacuously rising.
pub fn is_rising(poset: &GradedPoset, chain: &[Elem], tau: &TripleAssignment) -> bool {
    chain
        .windows(3)
        .all(|w| tau.get(poset, w[0], w[1], w[2]) == Letter::A)
}

/// Classifies the rising maximal chains of `[x, y]` for `x < y`.
pub fn rising_chain_status(
    poset: &GradedPoset,
    tau: &TripleAssignment,
    x: Elem,
    y: Elem,
) -> Result<RisingStatus, PosetError> {
    if !poset.lt(x, y) {
        return Err(PosetError::NotComparable(
            poset.id(x).into(),
            poset.id(y).into(),
        ));
    }
    let mut found = Vec::new();
    let mut path = vec![x];
    collect_rising(poset, y, &mut path, &mut found, &|a, b, c| {
        tau.get(poset, a, b, c) == Letter::A
    });
    Ok(match found.len() {
        0 => RisingStatus::Zero,
        1 => RisingStatus::Unique(found.pop().unwrap()),
        _ => RisingStatus::Many,
    })
}

// DFS over covers inside [path[0], target], stopping after two rising chains.
fn collect_rising(
    poset: &GradedPoset,
    target: Elem,
    path: &mut Vec<Elem>,
    found: &mut Vec<MaximalChain>,
    related: &dyn Fn(Elem, Elem, Elem) -> bool,
) {
    if found.len() >= 2 {
        return;
    }
    let last = *path.last().unwrap();
    if last == target {
        found.push(path.clone());
        return;
    }
    for &w in poset.up_covers(last) {
        if !poset.leq(w, target) {
            continue;
        }
        if path.len() >= 2 && !related(path[path.len() - 2], last, w) {
            continue;
        }
        path.push(w);
        collect_rising(poset, target, path, found, related);
        path.pop();
        if found.len() >= 2 {
            return;
        }
    }
}

/// Checks the unique-rising-chain condition on every interval whose rank lies
/// in `min_rank..=max_rank`, reporting the first failure in `(x, y)` order.
fn check_intervals(
    poset: &GradedPoset,
    tau: &TripleAssignment,
    min_rank: usize,
    max_rank: usize,
) -> Result<(), Violation> {
    for x in poset.elements() {
        for y in poset.elements() {
            if !poset.lt(x, y) {
                continue;
            }
            let len = poset.rank_of(y) - poset.rank_of(x);
            if len < min_rank || len > max_rank {
                continue;
            }
            let status = rising_chain_status(poset, tau, x, y).expect("x < y");
            if !status.is_unique() {
                return Err(Violation { x, y, status });
            }
        }
    }
    Ok(())
}

/// Whether `tau` is a triple assignment; on failure, the lexicographically
/// first violating interval.
pub fn is_triple_assignment(poset: &GradedPoset, tau: &TripleAssignment) -> Result<(), Violation> {
    check_intervals(poset, tau, 2, usize::MAX)
}

/// Unique rising chains in every interval of rank `2..=max_rank`.
pub fn locally_valid(poset: &GradedPoset, tau: &TripleAssignment, max_rank: usize) -> bool {
    check_intervals(poset, tau, 2, max_rank).is_ok()
}

/// Interior elements `y` for which `τ(x, y, z)` is the same for every
/// `x ≺ y ≺ z`.
pub fn breakpoints(poset: &GradedPoset, tau: &TripleAssignment) -> BTreeSet<Elem> {
    let mut seen: BTreeMap<Elem, Option<Letter>> = BTreeMap::new();
    let mut broken = BTreeSet::new();
    for (i, t) in poset.triplets().iter().enumerate() {
        let v = tau.values[i];
        match seen.get(&t.y) {
            Some(Some(prev)) if *prev != v => {
                broken.insert(t.y);
            }
            _ => {
                seen.insert(t.y, Some(v));
            }
        }
    }
    poset
        .elements()
        .filter(|&e| e != poset.bottom() && e != poset.top() && !broken.contains(&e))
        .collect()
}

/// Letter of a breakpoint (the common value of its triplets).
pub fn breakpoint_letter(poset: &GradedPoset, tau: &TripleAssignment, y: Elem) -> Option<Letter> {
    poset
        .triplets()
        .iter()
        .position(|t| t.y == y)
        .map(|i| tau.values[i])
}

/// The word `τ(x₀,x₁,x₂) ⋯ τ(x_{n−2},x_{n−1},x_n)` of a maximal chain.
pub fn chain_weight(poset: &GradedPoset, tau: &TripleAssignment, chain: &[Elem]) -> Word {
    Word::from_letters(
        chain
            .windows(3)
            .map(|w| tau.get(poset, w[0], w[1], w[2]).bit()),
    )
}

/// `Σ_c wt(c)` over the maximal chains of the poset.
pub fn ab_index_from_assignment(poset: &GradedPoset, tau: &TripleAssignment) -> AbPolynomial {
    let mut out = AbPolynomial::zero();
    if poset.rank() == 0 {
        return out;
    }
    for chain in poset.maximal_chains() {
        out.add_term(chain_weight(poset, tau, &chain), BigInt::one());
    }
    out
}

/// Number of maximal chains with each descent set, where position `i` is a
/// descent when the triplet centred at rank `i` carries `b`.
pub fn descent_distribution(poset: &GradedPoset, tau: &TripleAssignment) -> FlagVector {
    let n = poset.rank();
    if n == 0 {
        return FlagVector::from_entries(0, Vec::new());
    }
    let mut counts = vec![0u64; 1 << (n - 1)];
    for chain in poset.maximal_chains() {
        let mask: RankMask = chain
            .windows(3)
            .enumerate()
            .filter(|(_, w)| tau.get(poset, w[0], w[1], w[2]) == Letter::B)
            .fold(0, |m, (i, _)| m | 1 << i);
        counts[mask as usize] += 1;
    }
    FlagVector::from_entries(n, counts.into_iter().map(BigInt::from).collect())
}

/// For posets whose rank-2 intervals are all diamonds, the pairs of triplets
/// sharing endpoints `(x, z)`. `None` if some rank-2 interval is not a diamond.
pub fn diamond_pairs(poset: &GradedPoset) -> Option<Vec<[usize; 2]>> {
    let mut by_ends: BTreeMap<(Elem, Elem), Vec<usize>> = BTreeMap::new();
    for (i, t) in poset.triplets().iter().enumerate() {
        by_ends.entry((t.x, t.z)).or_default().push(i);
    }
    by_ends
        .into_values()
        .map(|v| <[usize; 2]>::try_from(v).ok())
        .collect()
}

/// Every assignment giving the two middle triplets of each diamond opposite
/// letters, in lexicographic order of the free choices (`a` first).
pub fn diamond_consistent_assignments(poset: &GradedPoset) -> Option<Vec<TripleAssignment>> {
    let pairs = diamond_pairs(poset)?;
    assert!(pairs.len() < 32, "too many diamonds to enumerate");
    let out = (0..1u32 << pairs.len())
        .map(|bits| {
            let mut values = vec![Letter::A; poset.triplets().len()];
            for (k, [first, second]) in pairs.iter().enumerate() {
                // most significant choice first so the list is lexicographic
                let choose_b = bits >> (pairs.len() - 1 - k) & 1 == 1;
                let letter = if choose_b { Letter::B } else { Letter::A };
                values[*first] = letter;
                values[*second] = letter.flip();
            }
            TripleAssignment { values }
        })
        .collect();
    Some(out)
}

/// Edge labels plus an arbitrary relation `~` on the label set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    pub labels: BTreeMap<(Elem, Elem), String>,
    pub relation: BTreeSet<(String, String)>,
}

impl Labeling {
    pub fn label(&self, x: Elem, y: Elem) -> &str {
        &self.labels[&(x, y)]
    }

    pub fn related(&self, x: Elem, y: Elem, z: Elem) -> bool {
        self.relation
            .contains(&(self.label(x, y).to_string(), self.label(y, z).to_string()))
    }
}

/// `τ(x, y, z) = a` iff `λ(x, y) ~ λ(y, z)`.
pub fn labeling_to_assignment(poset: &GradedPoset, labeling: &Labeling) -> TripleAssignment {
    TripleAssignment::from_fn(poset, |x, y, z| {
        if labeling.related(x, y, z) {
            Letter::A
        } else {
            Letter::B
        }
    })
}

/// Label each cover by itself, and relate `(x, y) ~ (y, z)` iff `τ(x, y, z) = a`.
pub fn assignment_to_labeling(poset: &GradedPoset, tau: &TripleAssignment) -> Labeling {
    let name = |x: Elem, y: Elem| format!("({},{})", poset.id(x), poset.id(y));
    let labels = poset
        .covers()
        .iter()
        .map(|&(x, y)| ((x, y), name(x, y)))
        .collect();
    let relation = poset
        .triplets()
        .iter()
        .zip(&tau.values)
        .filter(|(_, &l)| l == Letter::A)
        .map(|(t, _)| (name(t.x, t.y), name(t.y, t.z)))
        .collect();
    Labeling { labels, relation }
}

/// Checks the R-labeling condition directly on labels: every interval of
/// rank at least 2 has exactly one chain whose consecutive labels are related.
pub fn is_r_labeling(poset: &GradedPoset, labeling: &Labeling) -> Result<(), Violation> {
    if let Some(&(x, y)) = poset
        .covers()
        .iter()
        .find(|c| !labeling.labels.contains_key(c))
    {
        return Err(Violation {
            x,
            y,
            status: RisingStatus::Zero,
        });
    }
    for x in poset.elements() {
        for y in poset.elements() {
            if !poset.lt(x, y) || poset.rank_of(y) - poset.rank_of(x) < 2 {
                continue;
            }
            let mut found = Vec::new();
            let mut path = vec![x];
            collect_rising(poset, y, &mut path, &mut found, &|a, b, c| {
                labeling.related(a, b, c)
            });
            let status = match found.len() {
                0 => RisingStatus::Zero,
                1 => RisingStatus::Unique(found.pop().unwrap()),
                _ => RisingStatus::Many,
            };
            if !status.is_unique() {
                return Err(Violation { x, y, status });
            }
        }
    }
    Ok(())
}

/// The boolean lattice `B_n` labeled by `λ(S, S ∪ {i}) = i` with `i ~ j` iff
/// `i < j`.
pub fn boolean_min_labeling(poset: &GradedPoset) -> Labeling {
    let parse = |id: &str| -> BTreeSet<u32> {
        id.trim_matches(['{', '}'])
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().expect("boolean lattice element names are sets"))
            .collect()
    };
    let mut labels = BTreeMap::new();
    let mut max_label = 0;
    for &(x, y) in poset.covers() {
        let lo = parse(poset.id(x));
        let added = *parse(poset.id(y))
            .difference(&lo)
            .next()
            .expect("a cover adds one element");
        max_label = max_label.max(added);
        labels.insert((x, y), added.to_string());
    }
    let relation = (1..=max_label)
        .flat_map(|i| (i + 1..=max_label).map(move |j| (i.to_string(), j.to_string())))
        .collect();
    Labeling { labels, relation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::{flag_f_vector, flag_h_vector};
    use crate::poset::{boolean_lattice, butterfly, chain};

    fn t2_assignment(first: Letter) -> (GradedPoset, TripleAssignment) {
        let t2 = butterfly(2).unwrap();
        let tau = TripleAssignment::new(&t2, vec![first, first.flip()]);
        (t2, tau)
    }

    #[test]
    fn rising_basics() {
        let (t2, tau) = t2_assignment(Letter::A);
        let x1 = t2.element("x1").unwrap();
        let x1b = t2.element("x1b").unwrap();
        assert!(is_rising(&t2, &[t2.bottom(), x1], &tau));
        assert!(is_rising(&t2, &[t2.bottom(), x1, t2.top()], &tau));
        assert!(!is_rising(&t2, &[t2.bottom(), x1b, t2.top()], &tau));

        let t3 = butterfly(3).unwrap();
        let chain: Vec<Elem> = ["bot", "x1", "x2", "top"]
            .iter()
            .map(|s| t3.element(s).unwrap())
            .collect();
        let mut tau3 = TripleAssignment::constant(&t3, Letter::A);
        tau3.set(&t3, chain[1], chain[2], chain[3], Letter::B);
        assert!(!is_rising(&t3, &chain, &tau3));
    }

    #[test]
    fn statuses() {
        let (t2, tau) = t2_assignment(Letter::A);
        let x1 = t2.element("x1").unwrap();
        assert_eq!(
            rising_chain_status(&t2, &tau, t2.bottom(), x1).unwrap(),
            RisingStatus::Unique(vec![t2.bottom(), x1])
        );
        assert_eq!(
            rising_chain_status(&t2, &tau, t2.bottom(), t2.top()).unwrap(),
            RisingStatus::Unique(vec![t2.bottom(), x1, t2.top()])
        );
        let both_a = TripleAssignment::constant(&t2, Letter::A);
        assert_eq!(
            rising_chain_status(&t2, &both_a, t2.bottom(), t2.top()).unwrap(),
            RisingStatus::Many
        );
        assert!(rising_chain_status(&t2, &tau, t2.top(), t2.bottom()).is_err());
    }

    #[test]
    fn triple_assignment_check() {
        let (t2, tau) = t2_assignment(Letter::A);
        assert!(is_triple_assignment(&t2, &tau).is_ok());
        let both_a = TripleAssignment::constant(&t2, Letter::A);
        let v = is_triple_assignment(&t2, &both_a).unwrap_err();
        assert_eq!(
            (v.x, v.y, v.status),
            (t2.bottom(), t2.top(), RisingStatus::Many)
        );
    }

    #[test]
    fn t3_with_both_chains_rising_is_not_locally_valid() {
        let t3 = butterfly(3).unwrap();
        let id = |s| t3.element(s).unwrap();
        // diamond-consistent, with both x1 and x2b and their siblings non-breakpoints
        let tau = TripleAssignment::from_fn(&t3, |x, y, z| {
            let up = (t3.id(x), t3.id(y), t3.id(z));
            match up {
                ("bot", "x1", "x2") | ("bot", "x1b", "x2b") => Letter::A,
                ("bot", "x1", "x2b") | ("bot", "x1b", "x2") => Letter::B,
                ("x1", "x2", "top") | ("x1b", "x2b", "top") => Letter::A,
                _ => Letter::B,
            }
        });
        let rising = [["bot", "x1", "x2", "top"], ["bot", "x1b", "x2b", "top"]];
        for c in rising {
            let chain: Vec<Elem> = c.iter().map(|s| id(s)).collect();
            assert!(is_rising(&t3, &chain, &tau));
        }
        assert!(!locally_valid(&t3, &tau, 3));
    }

    #[test]
    fn breakpoint_examples() {
        let (t2, tau) = t2_assignment(Letter::B);
        assert_eq!(breakpoints(&t2, &tau).len(), 2);

        let t3 = butterfly(3).unwrap();
        let mut tau3 = TripleAssignment::constant(&t3, Letter::A);
        let (b, x1, x2b) = (
            t3.bottom(),
            t3.element("x1").unwrap(),
            t3.element("x2b").unwrap(),
        );
        tau3.set(&t3, b, x1, x2b, Letter::B);
        assert!(!breakpoints(&t3, &tau3).contains(&x1));
    }

    #[test]
    fn labeling_conversions() {
        let c3 = chain(3);
        let (x1, x2) = (c3.element("x1").unwrap(), c3.element("x2").unwrap());
        let labels: BTreeMap<_, _> = [
            ((c3.bottom(), x1), "1".to_string()),
            ((x1, x2), "2".to_string()),
            ((x2, c3.top()), "3".to_string()),
        ]
        .into();
        let related = Labeling {
            labels: labels.clone(),
            relation: [("1".to_string(), "2".to_string())].into(),
        };
        let tau = labeling_to_assignment(&c3, &related);
        assert_eq!(tau.get(&c3, c3.bottom(), x1, x2), Letter::A);
        assert_eq!(tau.get(&c3, x1, x2, c3.top()), Letter::B);

        let unrelated = Labeling {
            labels,
            relation: BTreeSet::new(),
        };
        let tau_b = labeling_to_assignment(&c3, &unrelated);
        assert!(tau_b.values().iter().all(|&l| l == Letter::B));
        let back = assignment_to_labeling(&c3, &tau_b);
        assert!(back.relation.is_empty());
        assert_eq!(labeling_to_assignment(&c3, &back), tau_b);
    }

    #[test]
    fn t2_round_trip() {
        let (t2, tau) = t2_assignment(Letter::B);
        let lab = assignment_to_labeling(&t2, &tau);
        assert_eq!(lab.labels.len(), 4);
        assert_eq!(labeling_to_assignment(&t2, &lab), tau);
        assert!(is_r_labeling(&t2, &lab).is_ok());
    }

    #[test]
    fn boolean_b3_standard_labeling() {
        let b3 = boolean_lattice(3);
        let lab = boolean_min_labeling(&b3);
        assert!(is_r_labeling(&b3, &lab).is_ok());
        let tau = labeling_to_assignment(&b3, &lab);
        assert!(is_triple_assignment(&b3, &tau).is_ok());
        let h = flag_h_vector(&flag_f_vector(&b3));
        assert_eq!(descent_distribution(&b3, &tau), h);
    }

    #[test]
    fn descents_on_chain() {
        let c3 = chain(3);
        let tau = TripleAssignment::constant(&c3, Letter::A);
        let d = descent_distribution(&c3, &tau);
        let counts: Vec<u64> = d.iter().map(|(_, v)| u64::try_from(v).unwrap()).collect();
        assert_eq!(counts, [1, 0, 0, 0]);
    }

    #[test]
    fn diamond_enumeration_sizes() {
        assert_eq!(
            diamond_consistent_assignments(&butterfly(3).unwrap())
                .unwrap()
                .len(),
            16
        );
        assert_eq!(
            diamond_consistent_assignments(&butterfly(4).unwrap())
                .unwrap()
                .len(),
            256
        );
        assert!(diamond_pairs(&chain(3)).is_none());
    }
}
