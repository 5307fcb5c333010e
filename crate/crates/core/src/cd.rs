//! Rewriting between the ab-basis and the cd-basis, `c = a + b`,
//! `d = ab + ba`.
//!
//! [`to_cd_index`] enumerates every cd-monomial of the target degree, expands
//! each into the ab-basis and solves the resulting linear system exactly over
//! the rationals. The cd-monomials expand to linearly independent
//! ab-polynomials, so a solution is unique when it exists.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{AbPolynomial, CdPolynomial, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdError {
    /// The polynomial is outside the span of the cd-monomials, i.e. the
    /// generalized Dehn–Somerville relations fail.
    #[error("ab-polynomial has no cd-index (degree {degree} component is outside the cd span)")]
    NotExpressible { degree: usize },
}

/// Substitutes `c ↦ a + b`, `d ↦ ab + ba` and expands.
pub fn expand_cd(q: &CdPolynomial) -> AbPolynomial {
    let mut out = AbPolynomial::zero();
    for (word, coeff) in q.terms() {
        out = &out + &expand_cd_word(word).scale(coeff);
    }
    out
}

fn expand_cd_word(word: Word) -> AbPolynomial {
    let c: AbPolynomial = AbPolynomial::letter(0) + AbPolynomial::letter(1);
    let d: AbPolynomial = &(AbPolynomial::letter(0) * AbPolynomial::letter(1))
        + &(AbPolynomial::letter(1) * AbPolynomial::letter(0));
    word.letters().fold(AbPolynomial::one(), |acc, l| {
        if l == 0 {
            &acc * &c
        } else {
            &acc * &d
        }
    })
}

/// All cd-words of weighted degree `m`, in lexicographic order. There are
/// Fibonacci(m + 1) of them.
pub fn cd_monomials(m: usize) -> Vec<Word> {
    fn go(rest: usize, cur: Word, out: &mut Vec<Word>) {
        if rest == 0 {
            out.push(cur);
            return;
        }
        let mut with_c = cur;
        with_c.push(0);
        go(rest - 1, with_c, out);
        if rest >= 2 {
            let mut with_d = cur;
            with_d.push(1);
            go(rest - 2, with_d, out);
        }
    }
    let mut out = Vec::new();
    go(m, Word::EMPTY, &mut out);
    out
}

/// The unique cd-polynomial expanding to `p`. Each homogeneous component is
/// solved separately; the zero polynomial maps to zero.
pub fn to_cd_index(p: &AbPolynomial) -> Result<CdPolynomial, CdError> {
    let mut out = CdPolynomial::zero();
    for (degree, component) in p.components() {
        out = &out + &solve_component(degree, &component)?;
    }
    Ok(out)
}

fn solve_component(degree: usize, p: &AbPolynomial) -> Result<CdPolynomial, CdError> {
    let basis = cd_monomials(degree);
    let expansions: Vec<AbPolynomial> = basis.iter().map(|&w| expand_cd_word(w)).collect();

    // augmented system: one row per ab-word of this degree, one column per cd-monomial
    let rows = 1usize << degree;
    let cols = basis.len();
    let word_of_row = |r: usize| Word::from_letters((0..degree).map(|i| (r >> i & 1) as u8));
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let w = word_of_row(r);
            let mut row: Vec<BigRational> = expansions
                .iter()
                .map(|e| BigRational::from_integer(e.coeff(w)))
                .collect();
            row.push(BigRational::from_integer(p.coeff(w)));
            row
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(found) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            unreachable!("cd-monomial expansions are linearly independent");
        };
        m.swap(pivot_row, found);
        let inv = m[pivot_row][col].recip();
        for v in m[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let pivot = m[pivot_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot) {
                    *v -= &factor * pv;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return Err(CdError::NotExpressible { degree });
    }

    let mut out = CdPolynomial::zero();
    for (col, &word) in basis.iter().enumerate() {
        let value = &m[col][cols];
        // integer by unitriangularity of the expansion
        if !value.is_integer() {
            return Err(CdError::NotExpressible { degree });
        }
        out.add_term(word, value.to_integer());
    }
    debug_assert_eq!(&expand_cd(&out), p);
    Ok(out)
}

/// `2·c^(n−1) − (a−b)^(n−1)`, the ab-index of two butterflies glued together.
pub fn glued_butterfly_ab_formula(n: usize) -> AbPolynomial {
    let c = AbPolynomial::letter(0) + AbPolynomial::letter(1);
    let a_minus_b = AbPolynomial::letter(0) - AbPolynomial::letter(1);
    let e = (n - 1) as u32;
    &c.pow(e).scale(&BigInt::from(2)) - &a_minus_b.pow(e)
}

/// `2·c^(2k) − (c² − 2d)^k` in the cd-basis.
pub fn glued_butterfly_cd_formula(k: usize) -> CdPolynomial {
    let c = CdPolynomial::letter(0);
    let d = CdPolynomial::letter(1);
    let inner = &c.pow(2) - &d.scale(&BigInt::from(2));
    &c.pow(2 * k as u32).scale(&BigInt::from(2)) - &inner.pow(k as u32)
}

/// Whether `q` has a monomial with an even, positive number of `d`s and all
/// such monomials with nonzero coefficient are strictly negative.
pub fn even_d_monomials_negative(q: &CdPolynomial) -> bool {
    let mut even = q
        .terms()
        .filter(|(w, _)| w.count_second() % 2 == 0 && w.count_second() > 0)
        .peekable();
    even.peek().is_some() && even.all(|(_, c)| *c < BigInt::zero())
}
