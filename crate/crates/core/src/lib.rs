//! Exact enumerative invariants of finite graded posets and a complete search
//! for R-labelings.
//!
//! - [`poset`]: validated graded posets, the butterfly / glued / boolean /
//!   chain families, intervals, chains and cover triplets.
//! - [`flag`]: flag f- and h-vectors and the ab-index.
//! - [`poly`] and [`cd`]: noncommutative polynomials and the cd-index.
//! - [`labeling`]: triple assignments, rising chains, breakpoints, descent
//!   statistics and conversion to and from R-labelings.
//! - [`search`]: backtracking with propagation deciding whether a triple
//!   assignment exists.
//! - [`json`]: the interchange formats used by the command-line tool.

pub mod cd;
pub mod flag;
pub mod json;
pub mod labeling;
pub mod poly;
pub mod poset;
pub mod search;

pub use cd::{expand_cd, to_cd_index, CdError};
pub use flag::{
    ab_index, ab_index_from_flag_h, flag_f_vector, flag_h_vector, FlagVector, RankMask,
};
pub use labeling::{
    ab_index_from_assignment, assignment_to_labeling, breakpoints, descent_distribution,
    is_r_labeling, is_rising, is_triple_assignment, labeling_to_assignment, locally_valid,
    rising_chain_status, Labeling, Letter, RisingStatus, TripleAssignment, Violation,
};
pub use poly::{AbPolynomial, CdPolynomial, Word};
pub use poset::{
    boolean_lattice, butterfly, chain, glue, glued_butterflies, Elem, GradedPoset, Interval,
    MaximalChain, PosetError, Triplet,
};
pub use search::{
    search_triple_assignment, SearchError, SearchLimits, SearchMode, SearchOutcome, SearchStats,
    SearchStatus,
};
