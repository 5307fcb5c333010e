//! Reference computations shared by the integration tests. Everything here
//! works directly from cover relations and plain strings, so it does not
//! lean on the library's chain enumeration, polynomial type or search.

#![allow(dead_code)]

use std::collections::BTreeMap;

use posetlab::{Elem, GradedPoset, Letter, TripleAssignment};

/// Noncommutative polynomial over words spelled out as strings.
pub type StrPoly = BTreeMap<String, i64>;

pub fn sp(terms: &[(&str, i64)]) -> StrPoly {
    let mut p = StrPoly::new();
    for (w, c) in terms {
        *p.entry(w.to_string()).or_default() += c;
    }
    p.retain(|_, c| *c != 0);
    p
}

pub fn sp_add(p: &StrPoly, q: &StrPoly, k: i64) -> StrPoly {
    let mut out = p.clone();
    for (w, c) in q {
        *out.entry(w.clone()).or_default() += k * c;
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn sp_mul(p: &StrPoly, q: &StrPoly) -> StrPoly {
    let mut out = StrPoly::new();
    for (u, a) in p {
        for (v, b) in q {
            *out.entry(format!("{u}{v}")).or_default() += a * b;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn sp_pow(p: &StrPoly, e: usize) -> StrPoly {
    (0..e).fold(sp(&[("", 1)]), |acc, _| sp_mul(&acc, p))
}

/// Substitutes `c -> a + b` and `d -> ab + ba` letter by letter.
pub fn sp_expand_cd(q: &StrPoly) -> StrPoly {
    let c = sp(&[("a", 1), ("b", 1)]);
    let d = sp(&[("ab", 1), ("ba", 1)]);
    let mut out = StrPoly::new();
    for (w, k) in q {
        let mut term = sp(&[("", *k)]);
        for ch in w.chars() {
            term = sp_mul(&term, if ch == 'c' { &c } else { &d });
        }
        out = sp_add(&out, &term, 1);
    }
    out
}

/// A library polynomial as a string map, for comparison with `StrPoly`.
pub fn from_lib(terms: Vec<(String, num_bigint::BigInt)>) -> StrPoly {
    terms
        .into_iter()
        .map(|(w, c)| (w, i64::try_from(c).expect("small coefficient")))
        .collect()
}

/// Maximal chains from `x` to `y`, by depth-first search over up-covers.
pub fn chains(p: &GradedPoset, x: Elem, y: Elem) -> Vec<Vec<Elem>> {
    fn go(p: &GradedPoset, cur: &mut Vec<Elem>, y: Elem, out: &mut Vec<Vec<Elem>>) {
        let last = *cur.last().unwrap();
        if last == y {
            out.push(cur.clone());
            return;
        }
        for &z in p.up_covers(last) {
            if p.rank_of(z) <= p.rank_of(y) {
                cur.push(z);
                go(p, cur, y, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(p, &mut vec![x], y, &mut out);
    out
}

pub fn letter(p: &GradedPoset, tau: &TripleAssignment, x: Elem, y: Elem, z: Elem) -> Letter {
    let i = p
        .triplets()
        .iter()
        .position(|t| (t.x, t.y, t.z) == (x, y, z))
        .expect("triplet exists");
    tau.values()[i]
}

pub fn rising(p: &GradedPoset, tau: &TripleAssignment, chain: &[Elem]) -> bool {
    chain
        .windows(3)
        .all(|w| letter(p, tau, w[0], w[1], w[2]) == Letter::A)
}

/// Pairs `x < y` with `rank(y) - rank(x)` between 2 and `max_len`.
pub fn intervals(p: &GradedPoset, max_len: usize) -> Vec<(Elem, Elem)> {
    let mut out = Vec::new();
    for x in p.elements() {
        for y in p.elements() {
            let len = p.rank_of(y) as isize - p.rank_of(x) as isize;
            if len >= 2 && len as usize <= max_len && p.leq(x, y) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Every interval of length at most `max_len` has exactly one rising chain.
pub fn unique_rising_up_to(p: &GradedPoset, tau: &TripleAssignment, max_len: usize) -> bool {
    intervals(p, max_len)
        .into_iter()
        .all(|(x, y)| chains(p, x, y).iter().filter(|c| rising(p, tau, c)).count() == 1)
}

pub fn is_triple_assignment(p: &GradedPoset, tau: &TripleAssignment) -> bool {
    unique_rising_up_to(p, tau, usize::MAX)
}

/// All assignments in binary counting order, first triplet least significant.
pub fn all_assignments(p: &GradedPoset) -> impl Iterator<Item = TripleAssignment> + '_ {
    let k = p.triplets().len();
    assert!(k <= 20, "too many triplets for brute force");
    (0u32..1 << k).map(move |bits| {
        let values = (0..k)
            .map(|i| {
                if bits >> i & 1 == 0 {
                    Letter::A
                } else {
                    Letter::B
                }
            })
            .collect();
        TripleAssignment::new(p, values)
    })
}

/// Chains of the whole poset tallied by descent set, bit `i - 1` for rank `i`.
pub fn descent_counts(p: &GradedPoset, tau: &TripleAssignment) -> BTreeMap<u32, u64> {
    let mut out = BTreeMap::new();
    for c in chains(p, p.bottom(), p.top()) {
        let mut mask = 0u32;
        for (i, w) in c.windows(3).enumerate() {
            if letter(p, tau, w[0], w[1], w[2]) == Letter::B {
                mask |= 1 << i;
            }
        }
        *out.entry(mask).or_default() += 1;
    }
    out
}

/// Graded poset from level sizes and a bit stream deciding covers between
/// consecutive middle levels. Every element keeps at least one cover in each
/// direction, so the result is always bounded and graded.
pub fn random_graded(levels: &[usize], bits: &[bool]) -> GradedPoset {
    let rank = levels.len() + 1;
    let mut names: Vec<Vec<String>> = vec![vec!["bot".into()]];
    for (r, &n) in levels.iter().enumerate() {
        names.push((0..n).map(|i| format!("e{}_{i}", r + 1)).collect());
    }
    names.push(vec!["top".into()]);
    let mut bits = bits.iter().cycle();
    let mut covers = Vec::new();
    for r in 0..rank {
        let (lo, hi) = (&names[r], &names[r + 1]);
        let mut m: Vec<Vec<bool>> = lo
            .iter()
            .map(|_| {
                hi.iter()
                    .map(|_| lo.len() == 1 || hi.len() == 1 || *bits.next().unwrap())
                    .collect()
            })
            .collect();
        for (i, row) in m.iter_mut().enumerate() {
            if !row.iter().any(|&b| b) {
                row[i % hi.len()] = true;
            }
        }
        for j in 0..hi.len() {
            if !m.iter().any(|row| row[j]) {
                m[j % lo.len()][j] = true;
            }
        }
        for (i, row) in m.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                if b {
                    covers.push((lo[i].clone(), hi[j].clone()));
                }
            }
        }
    }
    let elements = names
        .iter()
        .enumerate()
        .flat_map(|(r, level)| level.iter().map(move |n| (n.clone(), r)));
    GradedPoset::from_cover_relations(elements, covers).expect("valid graded poset")
}
