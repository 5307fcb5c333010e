//! Complete backtracking search for triple assignments.
//!
//! Every interval `[x, y]` of rank at least 2 becomes one constraint: among
//! its maximal chains (each a list of triplet variables), exactly one must
//! have all variables set to `a`. After each assignment the constraints
//! watching that variable are re-evaluated:
//!
//! - two chains already all-`a`, or no chain left without a `b`: conflict;
//! - exactly one chain can still be rising and none is yet: force it to `a`;
//! - one chain is rising: any other live chain with a single open variable
//!   gets that variable forced to `b`.
//!
//! On rank-2 intervals this is the diamond rule (the two middle triplets get
//! opposite letters). A full assignment reached without conflict satisfies
//! every constraint, so leaves of the search tree are exactly the triple
//! assignments. Variables are decided in triplet order, `a` before `b`.
//!
//! With several workers the tree is split at a fixed depth into subtrees
//! listed in search order; the first witness, the count and the list of
//! solutions are assembled in that order, so results do not depend on the
//! number of workers.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::labeling::{Letter, TripleAssignment};
use crate::poset::{Elem, GradedPoset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop at the first triple assignment.
    First,
    /// Count all triple assignments.
    CountAll,
    /// Collect all triple assignments.
    EnumerateAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
    /// Worker threads; 0 or 1 runs on the calling thread.
    pub jobs: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_nodes: Some(100_000_000),
            timeout: Some(Duration::from_secs(300)),
            jobs: 1,
        }
    }
}

impl SearchLimits {
    pub fn unlimited() -> Self {
        SearchLimits {
            max_nodes: None,
            timeout: None,
            jobs: 1,
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    ProvenNone,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub propagations: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// First assignment in search order, if any.
    pub witness: Option<TripleAssignment>,
    /// Number of assignments for `CountAll` / `EnumerateAll`.
    pub count: Option<u64>,
    /// All assignments for `EnumerateAll`, in search order.
    pub solutions: Vec<TripleAssignment>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    /// Budget exhausted before the tree was; nothing is proven.
    #[error("search budget exhausted after {} nodes in {:?}; result inconclusive", .0.nodes, .0.elapsed)]
    LimitExceeded(SearchStats),
}

/// The exactly-one-rising-chain constraints of a poset.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    num_vars: usize,
    intervals: Vec<(Elem, Elem)>,
    chains: Vec<Vec<Vec<u32>>>,
    watches: Vec<Vec<u32>>,
}

impl ConstraintSystem {
    pub fn new(poset: &GradedPoset) -> Self {
        let num_vars = poset.triplets().len();
        let mut intervals = Vec::new();
        let mut chains = Vec::new();
        for x in poset.elements() {
            for y in poset.elements() {
                if !poset.leq(x, y) || poset.rank_of(y) < poset.rank_of(x) + 2 {
                    continue;
                }
                let vars: Vec<Vec<u32>> = poset
                    .chains_between(x, y)
                    .iter()
                    .map(|c| {
                        c.windows(3)
                            .map(|w| poset.triplet_index(w[0], w[1], w[2]).unwrap() as u32)
                            .collect()
                    })
                    .collect();
                intervals.push((x, y));
                chains.push(vars);
            }
        }
        let mut watches = vec![Vec::new(); num_vars];
        for (ci, cs) in chains.iter().enumerate() {
            let mut vars: Vec<u32> = cs.iter().flatten().copied().collect();
            vars.sort_unstable();
            vars.dedup();
            for v in vars {
                watches[v as usize].push(ci as u32);
            }
        }
        ConstraintSystem {
            num_vars,
            intervals,
            chains,
            watches,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_constraints(&self) -> usize {
        self.chains.len()
    }

    /// Intervals `(x, y)` backing each constraint.
    pub fn intervals(&self) -> &[(Elem, Elem)] {
        &self.intervals
    }
}

const UNSET: u8 = 2;

struct Budget<'a> {
    nodes: &'a AtomicU64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    aborted: &'a AtomicBool,
}

impl Budget<'_> {
    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.max_nodes.is_some_and(|m| n > m)
            || (n.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() > d))
        {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }
}

#[derive(Clone)]
struct Solver<'s> {
    sys: &'s ConstraintSystem,
    // 0 = a, 1 = b, UNSET
    values: Vec<u8>,
    trail: Vec<u32>,
    queue: VecDeque<u32>,
    propagations: u64,
}

enum Flow {
    Continue,
    Stop,
    Abort,
}

impl<'s> Solver<'s> {
    fn new(sys: &'s ConstraintSystem) -> Self {
        Solver {
            sys,
            values: vec![UNSET; sys.num_vars],
            trail: Vec::new(),
            queue: VecDeque::new(),
            propagations: 0,
        }
    }

    fn assign(&mut self, var: u32, value: u8) -> bool {
        match self.values[var as usize] {
            UNSET => {
                self.values[var as usize] = value;
                self.trail.push(var);
                self.queue.push_back(var);
                true
            }
            v => v == value,
        }
    }

    fn undo_to(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.values[v as usize] = UNSET;
        }
        self.queue.clear();
    }

    /// Evaluates one constraint, queueing forced values. False on conflict.
    fn evaluate(&mut self, ci: usize) -> bool {
        let sys = self.sys;
        let chains = &sys.chains[ci];
        let mut rising = 0usize;
        let mut open_chain = None;
        let mut open = 0usize;
        for (k, chain) in chains.iter().enumerate() {
            let mut dead = false;
            let mut unset = 0;
            for &v in chain {
                match self.values[v as usize] {
                    1 => {
                        dead = true;
                        break;
                    }
                    UNSET => unset += 1,
                    _ => {}
                }
            }
            if dead {
                continue;
            }
            if unset == 0 {
                rising += 1;
                if rising > 1 {
                    return false;
                }
            } else {
                open += 1;
                open_chain = Some(k);
            }
        }
        if rising == 0 && open == 0 {
            return false;
        }
        if rising == 0 && open == 1 {
            let k = open_chain.unwrap();
            for &v in &chains[k] {
                self.propagations += 1;
                if !self.assign(v, 0) {
                    return false;
                }
            }
        } else if rising == 1 && open > 0 {
            for chain in chains {
                let mut last_unset = None;
                let mut unset = 0;
                let mut dead = false;
                for &v in chain {
                    match self.values[v as usize] {
                        1 => {
                            dead = true;
                            break;
                        }
                        UNSET => {
                            unset += 1;
                            last_unset = Some(v);
                        }
                        _ => {}
                    }
                }
                if !dead && unset == 1 {
                    self.propagations += 1;
                    if !self.assign(last_unset.unwrap(), 1) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn propagate(&mut self) -> bool {
        while let Some(var) = self.queue.pop_front() {
            let sys = self.sys;
            for &ci in &sys.watches[var as usize] {
                if !self.evaluate(ci as usize) {
                    self.queue.clear();
                    return false;
                }
            }
        }
        true
    }

    fn root_propagate(&mut self) -> bool {
        for ci in 0..self.sys.chains.len() {
            if !self.evaluate(ci) || !self.propagate() {
                return false;
            }
        }
        true
    }

    fn first_unset(&self) -> Option<u32> {
        self.values
            .iter()
            .position(|&v| v == UNSET)
            .map(|i| i as u32)
    }

    fn try_value(&mut self, var: u32, value: u8) -> bool {
        self.assign(var, value) && self.propagate()
    }

    fn to_assignment(&self) -> TripleAssignment {
        let letters = self
            .values
            .iter()
            .map(|&v| if v == 0 { Letter::A } else { Letter::B })
            .collect();
        TripleAssignment::from_letters(letters)
    }

    fn dfs(
        &mut self,
        budget: &Budget<'_>,
        on_solution: &mut dyn FnMut(&Solver<'_>) -> bool,
        cancelled: &dyn Fn() -> bool,
    ) -> Flow {
        if !budget.tick() {
            return Flow::Abort;
        }
        if cancelled() {
            return Flow::Stop;
        }
        let Some(var) = self.first_unset() else {
            return if on_solution(self) {
                Flow::Continue
            } else {
                Flow::Stop
            };
        };
        for value in [0, 1] {
            let mark = self.trail.len();
            if self.try_value(var, value) {
                match self.dfs(budget, on_solution, cancelled) {
                    Flow::Continue => {}
                    other => {
                        self.undo_to(mark);
                        return other;
                    }
                }
            }
            self.undo_to(mark);
        }
        Flow::Continue
    }

    /// Subtree roots at `depth` decisions below the current node, in search
    /// order. Complete assignments reached earlier are included as-is.
    fn split(&mut self, depth: usize, out: &mut Vec<Vec<u8>>) {
        if depth == 0 {
            out.push(self.values.clone());
            return;
        }
        let Some(var) = self.first_unset() else {
            out.push(self.values.clone());
            return;
        };
        for value in [0, 1] {
            let mark = self.trail.len();
            if self.try_value(var, value) {
                self.split(depth - 1, out);
            }
            self.undo_to(mark);
        }
    }
}

enum Part {
    Done {
        solutions: Vec<TripleAssignment>,
        count: u64,
    },
    Aborted,
    Cancelled,
}

/// Decides whether `poset` has a triple assignment (equivalently an
/// R-labeling), or counts / lists all of them.
///
/// `ProvenNone` is only returned after the whole search tree is exhausted;
/// an exhausted budget yields [`SearchError::LimitExceeded`].
pub fn search_triple_assignment(
    poset: &GradedPoset,
    mode: SearchMode,
    limits: SearchLimits,
) -> Result<SearchOutcome, SearchError> {
    let sys = ConstraintSystem::new(poset);
    search_system(&sys, mode, limits)
}

pub fn search_system(
    sys: &ConstraintSystem,
    mode: SearchMode,
    limits: SearchLimits,
) -> Result<SearchOutcome, SearchError> {
    let start = Instant::now();
    let nodes = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let budget = Budget {
        nodes: &nodes,
        max_nodes: limits.max_nodes,
        deadline: limits.timeout.map(|t| start + t),
        aborted: &aborted,
    };

    let mut root = Solver::new(sys);
    let consistent = root.root_propagate();
    let propagations = AtomicU64::new(root.propagations);

    let parts: Vec<Part> = if !consistent {
        vec![]
    } else {
        let jobs = limits.jobs.max(1);
        let mut roots = Vec::new();
        if jobs == 1 {
            roots.push(root.values.clone());
        } else {
            // enough subtrees to keep every worker busy
            let depth = (usize::BITS - (4 * jobs).leading_zeros()) as usize;
            root.split(depth, &mut roots);
        }
        let best = AtomicUsize::new(usize::MAX);
        let run = |(idx, values): (usize, &Vec<u8>)| -> Part {
            let mut solver = Solver::new(sys);
            solver.values.clone_from(values);
            let mut solutions = Vec::new();
            let mut count = 0u64;
            let cancelled = || mode == SearchMode::First && best.load(Ordering::Relaxed) < idx;
            let flow = solver.dfs(
                &budget,
                &mut |s| {
                    count += 1;
                    match mode {
                        SearchMode::First => {
                            solutions.push(s.to_assignment());
                            best.fetch_min(idx, Ordering::Relaxed);
                            false
                        }
                        SearchMode::CountAll => {
                            if solutions.is_empty() {
                                solutions.push(s.to_assignment());
                            }
                            true
                        }
                        SearchMode::EnumerateAll => {
                            solutions.push(s.to_assignment());
                            true
                        }
                    }
                },
                &cancelled,
            );
            propagations.fetch_add(solver.propagations, Ordering::Relaxed);
            match flow {
                Flow::Abort => Part::Aborted,
                Flow::Stop if count == 0 => Part::Cancelled,
                _ => Part::Done { solutions, count },
            }
        };
        if jobs == 1 {
            roots.iter().enumerate().map(run).collect()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool");
            pool.install(|| roots.par_iter().enumerate().map(run).collect())
        }
    };

    let stats = SearchStats {
        nodes: nodes.load(Ordering::Relaxed),
        propagations: propagations.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    };

    let mut witness = None;
    let mut all = Vec::new();
    let mut count = 0u64;
    for part in parts {
        match part {
            Part::Aborted => return Err(SearchError::LimitExceeded(stats)),
            // only parts after a found witness are cancelled
            Part::Cancelled => {
                debug_assert!(witness.is_some());
                break;
            }
            Part::Done {
                solutions,
                count: c,
            } => {
                count += c;
                if witness.is_none() {
                    witness = solutions.first().cloned();
                }
                if mode == SearchMode::EnumerateAll {
                    all.extend(solutions);
                }
                if mode == SearchMode::First && witness.is_some() {
                    break;
                }
            }
        }
    }
    Ok(SearchOutcome {
        status: if witness.is_some() {
            SearchStatus::Found
        } else {
            SearchStatus::ProvenNone
        },
        witness,
        count: (mode != SearchMode::First).then_some(count),
        solutions: all,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::is_triple_assignment;
    use crate::poset::{butterfly, chain, glued_butterflies};

    #[test]
    fn diamond_has_two() {
        let t2 = butterfly(2).unwrap();
        let out =
            search_triple_assignment(&t2, SearchMode::CountAll, SearchLimits::unlimited()).unwrap();
        assert_eq!(out.count, Some(2));
    }

    #[test]
    fn p3_found_p4_none() {
        let p3 = glued_butterflies(3).unwrap();
        let out =
            search_triple_assignment(&p3, SearchMode::First, SearchLimits::default()).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        assert!(is_triple_assignment(&p3, out.witness.as_ref().unwrap()).is_ok());

        let p4 = glued_butterflies(4).unwrap();
        let out =
            search_triple_assignment(&p4, SearchMode::First, SearchLimits::default()).unwrap();
        assert_eq!(out.status, SearchStatus::ProvenNone);
        assert!(out.witness.is_none());
    }

    #[test]
    fn chain_has_no_assignment_beyond_rank_two() {
        // rank-2 interval of a chain has one chain, forced to a; rank 3 then has it rising
        let c3 = chain(3);
        let out =
            search_triple_assignment(&c3, SearchMode::CountAll, SearchLimits::unlimited()).unwrap();
        assert_eq!(out.count, Some(1));
    }

    #[test]
    fn rank_one_is_vacuous() {
        let out = search_triple_assignment(&chain(1), SearchMode::First, SearchLimits::unlimited())
            .unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        assert!(out.witness.unwrap().is_empty());
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let p5 = glued_butterflies(5).unwrap();
        let limits = SearchLimits {
            max_nodes: Some(3),
            timeout: None,
            jobs: 1,
        };
        let err = search_triple_assignment(&p5, SearchMode::First, limits).unwrap_err();
        assert!(matches!(err, SearchError::LimitExceeded(_)));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let t4 = butterfly(4).unwrap();
        let one =
            search_triple_assignment(&t4, SearchMode::EnumerateAll, SearchLimits::unlimited())
                .unwrap();
        let four = search_triple_assignment(
            &t4,
            SearchMode::EnumerateAll,
            SearchLimits::unlimited().with_jobs(4),
        )
        .unwrap();
        assert_eq!(one.count, four.count);
        assert_eq!(one.solutions, four.solutions);
        let f1 =
            search_triple_assignment(&t4, SearchMode::First, SearchLimits::unlimited()).unwrap();
        let f4 = search_triple_assignment(
            &t4,
            SearchMode::First,
            SearchLimits::unlimited().with_jobs(4),
        )
        .unwrap();
        assert_eq!(f1.witness, f4.witness);
        assert_eq!(f1.witness.as_ref(), one.solutions.first());
    }
}
