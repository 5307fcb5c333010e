//! Flag f- and h-vectors and the ab-index.
//!
//! A rank subset `S ⊆ {1, …, n−1}` is encoded as a bitmask where bit `i−1`
//! stands for rank `i`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{AbPolynomial, Word};
use crate::poset::GradedPoset;

/// Rank-subset bitmask: bit `i - 1` set iff rank `i` is in the subset.
pub type RankMask = u32;

/// Largest rank whose flag vectors we index densely.
pub const MAX_FLAG_RANK: usize = 31;

/// One integer per subset of `{1, …, n−1}`, used for both f and h roles.
/// A rank-0 poset has no entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagVector {
    rank: usize,
    entries: Vec<BigInt>,
}

impl FlagVector {
    pub fn from_entries(rank: usize, entries: Vec<BigInt>) -> Self {
        assert!(rank <= MAX_FLAG_RANK, "rank {rank} exceeds {MAX_FLAG_RANK}");
        let expected = if rank == 0 { 0 } else { 1usize << (rank - 1) };
        assert_eq!(
            entries.len(),
            expected,
            "flag vector of rank {rank} needs {expected} entries"
        );
        FlagVector { rank, entries }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, mask: RankMask) -> &BigInt {
        &self.entries[mask as usize]
    }

    /// Entry for an explicit list of ranks.
    pub fn at(&self, ranks: &[usize]) -> &BigInt {
        self.get(mask_of(ranks))
    }

    /// `(mask, value)` pairs in ascending mask order.
    pub fn iter(&self) -> impl Iterator<Item = (RankMask, &BigInt)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(m, v)| (m as RankMask, v))
    }

    pub fn total(&self) -> BigInt {
        self.entries.iter().sum()
    }
}

/// Mask for a list of ranks (each in `1..`).
pub fn mask_of(ranks: &[usize]) -> RankMask {
    ranks.iter().fold(0, |m, &r| {
        assert!(r >= 1, "ranks in a flag subset start at 1");
        m | 1 << (r - 1)
    })
}

/// Ranks contained in a mask, ascending.
pub fn ranks_of(mask: RankMask) -> Vec<usize> {
    (0..RankMask::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

/// `f_S`: number of chains `0̂ < x₁ < ⋯ < x_k < 1̂` with `ρ(x_i) = s_i`.
pub fn flag_f_vector(poset: &GradedPoset) -> FlagVector {
    let n = poset.rank();
    if n == 0 {
        return FlagVector::from_entries(0, Vec::new());
    }
    let levels = poset.rank_levels();
    let entries = (0..1u32 << (n - 1))
        .map(|mask| {
            // ways[e]: chains from the bottom ending at e through the chosen ranks so far
            let mut ways: Vec<(usize, BigInt)> = vec![(poset.bottom(), BigInt::one())];
            for r in ranks_of(mask).into_iter().chain([n]) {
                ways = levels[r]
                    .iter()
                    .map(|&e| {
                        let count = ways
                            .iter()
                            .filter(|(prev, _)| poset.leq(*prev, e))
                            .map(|(_, w)| w)
                            .sum();
                        (e, count)
                    })
                    .collect();
            }
            ways.into_iter().map(|(_, w)| w).sum()
        })
        .collect();
    FlagVector::from_entries(n, entries)
}

/// `h_S = Σ_{T ⊆ S} (−1)^{|S−T|} f_T`.
pub fn flag_h_vector(f: &FlagVector) -> FlagVector {
    let entries = (0..f.len() as RankMask)
        .map(|s| {
            let mut acc = BigInt::zero();
            for_each_submask(s, |t| {
                if (s ^ t).count_ones() % 2 == 0 {
                    acc += f.get(t);
                } else {
                    acc -= f.get(t);
                }
            });
            acc
        })
        .collect();
    FlagVector::from_entries(f.rank, entries)
}

/// Inverse transform `f_S = Σ_{T ⊆ S} h_T`.
pub fn flag_f_from_h(h: &FlagVector) -> FlagVector {
    let entries = (0..h.len() as RankMask)
        .map(|s| {
            let mut acc = BigInt::zero();
            for_each_submask(s, |t| acc += h.get(t));
            acc
        })
        .collect();
    FlagVector::from_entries(h.rank, entries)
}

/// `Ψ = Σ_S h_S · u_S` with `u_i = b` for `i ∈ S`, else `a`.
pub fn ab_index_from_flag_h(h: &FlagVector) -> AbPolynomial {
    let mut out = AbPolynomial::zero();
    if h.rank == 0 {
        return out;
    }
    let len = h.rank - 1;
    for (mask, value) in h.iter() {
        let word = Word::from_letters((0..len).map(|i| (mask >> i & 1) as u8));
        out.add_term(word, value.clone());
    }
    out
}

/// ab-index of a poset straight from its flag f-vector.
pub fn ab_index(poset: &GradedPoset) -> AbPolynomial {
    ab_index_from_flag_h(&flag_h_vector(&flag_f_vector(poset)))
}

fn for_each_submask(s: RankMask, mut visit: impl FnMut(RankMask)) {
    let mut t = s;
    loop {
        visit(t);
        if t == 0 {
            break;
        }
        t = (t - 1) & s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{boolean_lattice, butterfly, chain, glued_butterflies};

    fn ints(v: &FlagVector) -> Vec<i64> {
        v.iter().map(|(_, x)| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn butterfly_t3() {
        let f = flag_f_vector(&butterfly(3).unwrap());
        assert_eq!(ints(&f), [1, 2, 2, 4]);
        assert_eq!(ints(&flag_h_vector(&f)), [1, 1, 1, 1]);
        assert_eq!(
            ab_index_from_flag_h(&flag_h_vector(&f)),
            "aa + ab + ba + bb".parse().unwrap()
        );
    }

    #[test]
    fn glued_p3() {
        let f = flag_f_vector(&glued_butterflies(3).unwrap());
        assert_eq!(ints(&f), [1, 4, 4, 8]);
        let h = flag_h_vector(&f);
        assert_eq!(ints(&h), [1, 3, 3, 1]);
        assert_eq!(
            ab_index_from_flag_h(&h),
            "aa + 3ab + 3ba + bb".parse().unwrap()
        );
    }

    #[test]
    fn chain_rank_three() {
        let f = flag_f_vector(&chain(3));
        assert_eq!(ints(&f), [1, 1, 1, 1]);
        let h = flag_h_vector(&f);
        assert_eq!(ints(&h), [1, 0, 0, 0]);
        assert_eq!(ab_index_from_flag_h(&h), "aa".parse().unwrap());
    }

    #[test]
    fn degenerate_ranks() {
        let f0 = flag_f_vector(&boolean_lattice(0));
        assert!(f0.is_empty());
        assert!(ab_index_from_flag_h(&flag_h_vector(&f0)).is_zero());

        let f1 = flag_f_vector(&chain(1));
        assert_eq!(ints(&f1), [1]);
        assert_eq!(
            ab_index_from_flag_h(&flag_h_vector(&f1)),
            AbPolynomial::one()
        );
    }

    #[test]
    fn boolean_b3_h_counts_permutations_by_descent() {
        // h_S of B_3 = number of permutations of 3 with descent set S
        let h = flag_h_vector(&flag_f_vector(&boolean_lattice(3)));
        assert_eq!(ints(&h), [1, 2, 2, 1]);
    }

    #[test]
    fn masks() {
        assert_eq!(mask_of(&[1, 3]), 0b101);
        assert_eq!(ranks_of(0b101), vec![1, 3]);
        assert_eq!(mask_of(&[]), 0);
    }

    #[test]
    fn inversion_on_generated_posets() {
        for n in 1..=8 {
            for p in [butterfly(n).unwrap(), chain(n)] {
                let f = flag_f_vector(&p);
                assert_eq!(flag_f_from_h(&flag_h_vector(&f)), f);
            }
        }
    }
}
