//! Finite graded posets stored as Hasse diagrams.
//!
//! A [`GradedPoset`] is validated on construction and immutable afterwards.
//! Elements are addressed by dense indices ([`Elem`]) assigned in
//! `(rank, identifier)` order, so index order doubles as the deterministic
//! output order used by chains, triplets and every report built on top.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense element index inside one [`GradedPoset`].
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("duplicate element identifier `{0}`")]
    DuplicateElement(String),
    #[error("cover ({0}, {1}) references an undeclared element")]
    DanglingCover(String, String),
    #[error("cover ({lower}, {upper}) jumps from rank {lower_rank} to rank {upper_rank}")]
    NotGraded {
        lower: String,
        upper: String,
        lower_rank: usize,
        upper_rank: usize,
    },
    #[error("poset is not bounded: {0}")]
    NotBounded(String),
    #[error("invalid rank {0} for this family")]
    InvalidRank(usize),
    #[error("cannot glue posets of rank {0} and {1}")]
    RankMismatch(usize, usize),
    #[error("gluing requires rank at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("elements `{0}` and `{1}` are not comparable as x <= y")]
    NotComparable(String, String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
}

/// A cover triplet `x ≺ y ≺ z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triplet {
    pub x: Elem,
    pub y: Elem,
    pub z: Elem,
}

/// A maximal chain of the poset or of one of its intervals, as a list of
/// elements where consecutive entries are covers.
pub type MaximalChain = Vec<Elem>;

#[derive(Debug, Clone)]
pub struct GradedPoset {
    ids: Vec<String>,
    ranks: Vec<usize>,
    index: HashMap<String, Elem>,
    up: Vec<Vec<Elem>>,
    down: Vec<Vec<Elem>>,
    covers: Vec<(Elem, Elem)>,
    bottom: Elem,
    top: Elem,
    // leq[x][y] == x <= y
    leq: Vec<Vec<bool>>,
    triplets: Vec<Triplet>,
    triplet_index: HashMap<Triplet, usize>,
}

impl GradedPoset {
    /// Builds and validates a poset from `(identifier, rank)` pairs and
    /// cover pairs `(lower, upper)`. Repeated cover pairs are collapsed.
    pub fn from_cover_relations<S, T>(
        ranked_elements: impl IntoIterator<Item = (S, usize)>,
        cover_pairs: impl IntoIterator<Item = (T, T)>,
    ) -> Result<Self, PosetError>
    where
        S: Into<String>,
        T: AsRef<str>,
    {
        let mut decl: Vec<(usize, String)> = Vec::new();
        let mut seen = BTreeSet::new();
        for (id, rank) in ranked_elements {
            let id = id.into();
            if !seen.insert(id.clone()) {
                return Err(PosetError::DuplicateElement(id));
            }
            decl.push((rank, id));
        }
        decl.sort();
        if decl.is_empty() {
            return Err(PosetError::NotBounded("no elements".into()));
        }

        let ids: Vec<String> = decl.iter().map(|(_, id)| id.clone()).collect();
        let ranks: Vec<usize> = decl.iter().map(|(r, _)| *r).collect();
        let index: HashMap<String, Elem> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();

        let mut cover_set = BTreeSet::new();
        for (lo, hi) in cover_pairs {
            let (lo, hi) = (lo.as_ref(), hi.as_ref());
            let (Some(&x), Some(&y)) = (index.get(lo), index.get(hi)) else {
                return Err(PosetError::DanglingCover(lo.into(), hi.into()));
            };
            if ranks[y] != ranks[x] + 1 {
                return Err(PosetError::NotGraded {
                    lower: lo.into(),
                    upper: hi.into(),
                    lower_rank: ranks[x],
                    upper_rank: ranks[y],
                });
            }
            cover_set.insert((x, y));
        }
        let covers: Vec<(Elem, Elem)> = cover_set.into_iter().collect();

        let len = ids.len();
        let mut up = vec![Vec::new(); len];
        let mut down = vec![Vec::new(); len];
        for &(x, y) in &covers {
            up[x].push(y);
            down[y].push(x);
        }
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_unstable();
        }

        let rank_zero: Vec<Elem> = (0..len).filter(|&i| ranks[i] == 0).collect();
        if rank_zero.len() != 1 {
            return Err(PosetError::NotBounded(format!(
                "expected exactly one element of rank 0, found {}",
                rank_zero.len()
            )));
        }
        let bottom = rank_zero[0];
        let maximal: Vec<Elem> = (0..len).filter(|&i| up[i].is_empty()).collect();
        if maximal.len() != 1 {
            let names: Vec<&str> = maximal.iter().map(|&i| ids[i].as_str()).collect();
            return Err(PosetError::NotBounded(format!(
                "expected a unique maximal element, found {names:?}"
            )));
        }
        let top = maximal[0];
        if let Some(stranded) = (0..len).find(|&i| i != bottom && down[i].is_empty()) {
            return Err(PosetError::NotBounded(format!(
                "element `{}` has no lower cover",
                ids[stranded]
            )));
        }

        let leq = (0..len)
            .map(|x| {
                let mut reach = vec![false; len];
                reach[x] = true;
                let mut queue = VecDeque::from([x]);
                while let Some(v) = queue.pop_front() {
                    for &w in &up[v] {
                        if !reach[w] {
                            reach[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
                reach
            })
            .collect();

        let mut triplets = Vec::new();
        for x in 0..len {
            for &y in &up[x] {
                for &z in &up[y] {
                    triplets.push(Triplet { x, y, z });
                }
            }
        }
        triplets.sort_unstable();
        let triplet_index = triplets.iter().enumerate().map(|(i, &t)| (t, i)).collect();

        Ok(GradedPoset {
            ids,
            ranks,
            index,
            up,
            down,
            covers,
            bottom,
            top,
            leq,
            triplets,
            triplet_index,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Rank of the top element.
    pub fn rank(&self) -> usize {
        self.ranks[self.top]
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.ids.len()
    }

    pub fn id(&self, e: Elem) -> &str {
        &self.ids[e]
    }

    pub fn element(&self, id: &str) -> Result<Elem, PosetError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| PosetError::UnknownElement(id.into()))
    }

    pub fn rank_of(&self, e: Elem) -> usize {
        self.ranks[e]
    }

    pub fn up_covers(&self, e: Elem) -> &[Elem] {
        &self.up[e]
    }

    pub fn down_covers(&self, e: Elem) -> &[Elem] {
        &self.down[e]
    }

    /// Cover pairs in lexicographic index order.
    pub fn covers(&self) -> &[(Elem, Elem)] {
        &self.covers
    }

    pub fn is_cover(&self, x: Elem, y: Elem) -> bool {
        self.up[x].binary_search(&y).is_ok()
    }

    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: Elem, y: Elem) -> bool {
        x != y && self.leq[x][y]
    }

    /// Elements of each rank, in index order.
    pub fn rank_levels(&self) -> Vec<Vec<Elem>> {
        let mut levels = vec![Vec::new(); self.rank() + 1];
        for e in self.elements() {
            levels[self.ranks[e]].push(e);
        }
        levels
    }

    /// Number of elements of each rank.
    pub fn rank_profile(&self) -> Vec<usize> {
        self.rank_levels().iter().map(Vec::len).collect()
    }

    /// All cover triplets `W(P)`, sorted by `(x, y, z)`.
    pub fn triplets(&self) -> &[Triplet] {
        &self.triplets
    }

    /// Position of `(x, y, z)` in [`triplets`](Self::triplets).
    pub fn triplet_index(&self, x: Elem, y: Elem, z: Elem) -> Option<usize> {
        self.triplet_index.get(&Triplet { x, y, z }).copied()
    }

    /// Elements of the closed interval `[x, y]` in index order.
    pub fn interval_elements(&self, x: Elem, y: Elem) -> Vec<Elem> {
        self.elements()
            .filter(|&z| self.leq[x][z] && self.leq[z][y])
            .collect()
    }

    /// Maximal chains of `[x, y]`, lexicographic in element index.
    /// Empty when `x` is not below `y`.
    pub fn chains_between(&self, x: Elem, y: Elem) -> Vec<MaximalChain> {
        let mut out = Vec::new();
        if !self.leq(x, y) {
            return out;
        }
        let mut path = vec![x];
        self.extend_chains(y, &mut path, &mut out);
        out
    }

    fn extend_chains(&self, target: Elem, path: &mut Vec<Elem>, out: &mut Vec<MaximalChain>) {
        let last = *path.last().expect("non-empty path");
        if last == target {
            out.push(path.clone());
            return;
        }
        for &w in &self.up[last] {
            if self.leq[w][target] {
                path.push(w);
                self.extend_chains(target, path, out);
                path.pop();
            }
        }
    }

    /// All maximal chains `0̂ = x₀ ≺ ⋯ ≺ xₙ = 1̂`.
    pub fn maximal_chains(&self) -> Vec<MaximalChain> {
        self.chains_between(self.bottom, self.top)
    }

    /// Induced subposet on `[x, y]`, re-ranked so that `x` has rank 0.
    pub fn interval(&self, x: Elem, y: Elem) -> Result<Interval, PosetError> {
        if !self.leq(x, y) {
            return Err(PosetError::NotComparable(
                self.ids[x].clone(),
                self.ids[y].clone(),
            ));
        }
        let members = self.interval_elements(x, y);
        let base = self.ranks[x];
        let elems = members
            .iter()
            .map(|&e| (self.ids[e].clone(), self.ranks[e] - base));
        let covers = self
            .covers
            .iter()
            .filter(|(a, b)| self.leq[x][*a] && self.leq[*b][y])
            .map(|&(a, b)| (self.ids[a].as_str(), self.ids[b].as_str()));
        let poset = GradedPoset::from_cover_relations(elems, covers)?;
        let to_parent = poset.elements().map(|e| self.index[poset.id(e)]).collect();
        Ok(Interval { poset, to_parent })
    }

    /// Looks up both endpoints by identifier, then calls [`interval`](Self::interval).
    pub fn interval_by_id(&self, x: &str, y: &str) -> Result<Interval, PosetError> {
        self.interval(self.element(x)?, self.element(y)?)
    }

    /// Every interval of rank at least 1 has as many elements of odd rank as
    /// of even rank.
    pub fn is_eulerian(&self) -> bool {
        self.elements().all(|x| {
            self.elements()
                .filter(|&y| y != x && self.leq[x][y])
                .all(|y| {
                    let balance: i64 = self
                        .elements()
                        .filter(|&z| self.leq[x][z] && self.leq[z][y])
                        .map(|z| {
                            if self.ranks[z].is_multiple_of(2) {
                                1
                            } else {
                                -1
                            }
                        })
                        .sum();
                    balance == 0
                })
        })
    }

    /// Rank-preserving isomorphism test by backtracking over each rank level.
    pub fn is_isomorphic(&self, other: &GradedPoset) -> bool {
        if self.rank_profile() != other.rank_profile() || self.covers.len() != other.covers.len() {
            return false;
        }
        let mut map = vec![usize::MAX; self.len()];
        let mut used = vec![false; other.len()];
        self.iso_extend(other, 0, &mut map, &mut used)
    }

    fn iso_extend(
        &self,
        other: &GradedPoset,
        e: Elem,
        map: &mut [Elem],
        used: &mut [bool],
    ) -> bool {
        if e == self.len() {
            return true;
        }
        for f in other.elements() {
            if used[f]
                || other.ranks[f] != self.ranks[e]
                || other.up[f].len() != self.up[e].len()
                || other.down[f].len() != self.down[e].len()
            {
                continue;
            }
            // lower covers of e are already mapped since indices are rank-sorted
            let consistent = self.down[e].iter().all(|&d| other.is_cover(map[d], f))
                && self.down[e].len() == other.down[f].len();
            if !consistent {
                continue;
            }
            map[e] = f;
            used[f] = true;
            if self.iso_extend(other, e + 1, map, used) {
                return true;
            }
            used[f] = false;
        }
        map[e] = usize::MAX;
        false
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            rank: self.rank(),
            elements: self
                .elements()
                .map(|e| ElementJson {
                    id: self.ids[e].clone(),
                    rank: self.ranks[e],
                })
                .collect(),
            covers: {
                let mut covers: Vec<[String; 2]> = self
                    .covers
                    .iter()
                    .map(|&(x, y)| [self.ids[x].clone(), self.ids[y].clone()])
                    .collect();
                covers.sort();
                covers
            },
        }
    }

    pub fn from_json(json: &PosetJson) -> Result<Self, PosetError> {
        let poset = GradedPoset::from_cover_relations(
            json.elements.iter().map(|e| (e.id.clone(), e.rank)),
            json.covers.iter().map(|[x, y]| (x.as_str(), y.as_str())),
        )?;
        if poset.rank() != json.rank {
            return Err(PosetError::NotBounded(format!(
                "declared rank {} but top element has rank {}",
                json.rank,
                poset.rank()
            )));
        }
        Ok(poset)
    }
}

/// An interval `[x, y]` as a standalone poset, with the map back to the
/// parent's element indices.
#[derive(Debug, Clone)]
pub struct Interval {
    pub poset: GradedPoset,
    pub to_parent: Vec<Elem>,
}

/// Interchange form of a poset: elements sorted by `(rank, id)` and covers
/// sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub rank: usize,
    pub elements: Vec<ElementJson>,
    pub covers: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub id: String,
    pub rank: usize,
}

/// Chain `bot ≺ x1 ≺ ⋯ ≺ x{n-1} ≺ top`. Rank 0 is the one-element poset.
pub fn chain(n: usize) -> GradedPoset {
    let names = level_names(n, |i| vec![format!("x{i}")]);
    complete_levels(&names)
}

/// The butterfly poset `T_n`: two elements `x{i}`, `x{i}b` at each middle rank,
/// each covering everything one rank below.
pub fn butterfly(n: usize) -> Result<GradedPoset, PosetError> {
    if n < 1 {
        return Err(PosetError::InvalidRank(n));
    }
    let names = level_names(n, |i| vec![format!("x{i}"), format!("x{i}b")]);
    Ok(complete_levels(&names))
}

/// Subsets of `{1..n}` under inclusion, named like `{}`, `{1,3}`.
pub fn boolean_lattice(n: usize) -> GradedPoset {
    assert!(n < usize::BITS as usize, "boolean lattice rank too large");
    let name = |mask: usize| {
        let parts: Vec<String> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (i + 1).to_string())
            .collect();
        format!("{{{}}}", parts.join(","))
    };
    let elems = (0..1usize << n).map(|m| (name(m), m.count_ones() as usize));
    let mut covers = Vec::new();
    for m in 0..1usize << n {
        for i in 0..n {
            if m >> i & 1 == 0 {
                covers.push((name(m), name(m | 1 << i)));
            }
        }
    }
    GradedPoset::from_cover_relations(elems, covers).expect("boolean lattice is graded")
}

/// Identifies the bottoms and the tops of two posets of equal rank. Interior
/// elements get `L:` / `R:` prefixes; the shared bottom and top keep the
/// identifiers from `p`.
pub fn glue(p: &GradedPoset, q: &GradedPoset) -> Result<GradedPoset, PosetError> {
    if p.rank() != q.rank() {
        return Err(PosetError::RankMismatch(p.rank(), q.rank()));
    }
    if p.rank() < 2 {
        return Err(PosetError::RankTooSmall(p.rank()));
    }
    let (bot, top) = (p.id(p.bottom()).to_string(), p.id(p.top()).to_string());
    let rename = |src: &GradedPoset, prefix: &str, e: Elem| -> String {
        if e == src.bottom() {
            bot.clone()
        } else if e == src.top() {
            top.clone()
        } else {
            format!("{prefix}{}", src.id(e))
        }
    };
    let mut elems = vec![(bot.clone(), 0), (top.clone(), p.rank())];
    let mut covers = Vec::new();
    for (src, prefix) in [(p, "L:"), (q, "R:")] {
        for e in src.elements() {
            if e != src.bottom() && e != src.top() {
                elems.push((rename(src, prefix, e), src.rank_of(e)));
            }
        }
        for &(x, y) in src.covers() {
            covers.push((rename(src, prefix, x), rename(src, prefix, y)));
        }
    }
    GradedPoset::from_cover_relations(elems, covers)
}

/// `P_n`: two copies of `T_n` glued at bottom and top.
pub fn glued_butterflies(n: usize) -> Result<GradedPoset, PosetError> {
    let t = butterfly(n)?;
    glue(&t, &t)
}

fn level_names(n: usize, middle: impl Fn(usize) -> Vec<String>) -> Vec<Vec<String>> {
    if n == 0 {
        return vec![vec!["bot".into()]];
    }
    let mut levels = vec![vec!["bot".to_string()]];
    levels.extend((1..n).map(middle));
    levels.push(vec!["top".into()]);
    levels
}

fn complete_levels(levels: &[Vec<String>]) -> GradedPoset {
    let elems = levels
        .iter()
        .enumerate()
        .flat_map(|(r, names)| names.iter().map(move |id| (id.clone(), r)));
    let covers = levels.windows(2).flat_map(|w| {
        w[0].iter()
            .flat_map(move |lo| w[1].iter().map(move |hi| (lo.clone(), hi.clone())))
    });
    GradedPoset::from_cover_relations(elems, covers).expect("complete levels are graded")
}
