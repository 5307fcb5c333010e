mod common;

use std::time::Duration;

use common::*;
use posetlab::json::{assignment_from_values, assignment_values, poset_from_str, poset_to_string};
use posetlab::labeling::breakpoint_letter;
use posetlab::*;

#[test]
fn weights_of_a_triple_assignment_give_the_ab_index() {
    for p in [
        butterfly(4).unwrap(),
        glued_butterflies(3).unwrap(),
        boolean_lattice(3),
    ] {
        let out = search_triple_assignment(&p, SearchMode::EnumerateAll, SearchLimits::unlimited())
            .unwrap();
        for tau in out.solutions.iter().take(50) {
            assert_eq!(ab_index_from_assignment(&p, tau), ab_index(&p));
        }
    }
}

#[test]
fn every_butterfly_assignment_has_a_breakpoint() {
    for n in 3..=5 {
        let t = butterfly(n).unwrap();
        let out = search_triple_assignment(&t, SearchMode::EnumerateAll, SearchLimits::unlimited())
            .unwrap();
        for tau in &out.solutions {
            let bps = breakpoints(&t, tau);
            assert!(!bps.is_empty());
            for &y in &bps {
                // all triplets through y agree
                let letter = breakpoint_letter(&t, tau, y).expect("breakpoint has a letter");
                for x in t.down_covers(y) {
                    for z in t.up_covers(y) {
                        assert_eq!(common::letter(&t, tau, *x, y, *z), letter);
                    }
                }
            }
        }
    }
}

#[test]
fn butterfly_assignment_counts_match_brute_force() {
    let t3 = butterfly(3).unwrap();
    let brute = all_assignments(&t3)
        .filter(|tau| common::is_triple_assignment(&t3, tau))
        .count();
    assert_eq!(brute, 12);
    let counts: Vec<u64> = (2..=6)
        .map(|n| {
            let t = butterfly(n).unwrap();
            search_triple_assignment(&t, SearchMode::CountAll, SearchLimits::unlimited())
                .unwrap()
                .count
                .unwrap()
        })
        .collect();
    assert_eq!(counts, [2, 12, 104, 816, 6560]);
}

#[test]
fn parallel_refutation_agrees_with_serial() {
    let p4 = glued_butterflies(4).unwrap();
    for jobs in [1, 2, 8] {
        let out = search_triple_assignment(
            &p4,
            SearchMode::First,
            SearchLimits::unlimited().with_jobs(jobs),
        )
        .unwrap();
        assert_eq!(out.status, SearchStatus::ProvenNone);
    }
    let t5 = butterfly(5).unwrap();
    let serial =
        search_triple_assignment(&t5, SearchMode::EnumerateAll, SearchLimits::unlimited()).unwrap();
    let parallel = search_triple_assignment(
        &t5,
        SearchMode::EnumerateAll,
        SearchLimits::unlimited().with_jobs(4),
    )
    .unwrap();
    assert_eq!(serial.solutions, parallel.solutions);
    assert_eq!(serial.witness, parallel.witness);
}

#[test]
fn budgets_make_the_search_inconclusive() {
    let p5 = glued_butterflies(5).unwrap();
    let nodes = SearchLimits {
        max_nodes: Some(100),
        timeout: None,
        jobs: 1,
    };
    assert!(matches!(
        search_triple_assignment(&p5, SearchMode::First, nodes),
        Err(SearchError::LimitExceeded(_))
    ));
    let time = SearchLimits {
        max_nodes: None,
        timeout: Some(Duration::ZERO),
        jobs: 2,
    };
    assert!(matches!(
        search_triple_assignment(&p5, SearchMode::First, time),
        Err(SearchError::LimitExceeded(_))
    ));
}

#[test]
fn glued_copies_are_labelable_but_the_glued_poset_is_not() {
    for n in 4..=5 {
        let t = butterfly(n).unwrap();
        let copy =
            search_triple_assignment(&t, SearchMode::First, SearchLimits::unlimited()).unwrap();
        assert_eq!(copy.status, SearchStatus::Found);
        let p = glued_butterflies(n).unwrap();
        let whole =
            search_triple_assignment(&p, SearchMode::First, SearchLimits::unlimited()).unwrap();
        assert_eq!(whole.status, SearchStatus::ProvenNone);
    }
}

#[test]
fn json_round_trips() {
    for p in [glued_butterflies(4).unwrap(), boolean_lattice(3), chain(4)] {
        let text = poset_to_string(&p);
        let back = poset_from_str(&text).unwrap();
        assert_eq!(poset_to_string(&back), text);
        assert!(back.is_isomorphic(&p));
    }
    let p3 = glued_butterflies(3).unwrap();
    let tau = search_triple_assignment(&p3, SearchMode::First, SearchLimits::unlimited())
        .unwrap()
        .witness
        .unwrap();
    let values = assignment_values(&p3, &tau);
    assert_eq!(assignment_from_values(&p3, &values).unwrap(), tau);
    assert!(assignment_from_values(&p3, &values[1..]).is_err());
}

#[test]
fn random_posets_agree_with_reference_flag_counts() {
    let mut bits = Vec::new();
    let mut state = 0x2545_f491_4f6c_dd1du64;
    for _ in 0..64 {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        bits.push(state & 1 == 1);
    }
    for levels in [vec![2, 2], vec![3, 1, 2], vec![2, 3, 3, 2]] {
        let p = random_graded(&levels, &bits);
        let f = flag_f_vector(&p);
        let all = chains(&p, p.bottom(), p.top()).len() as u64;
        assert_eq!(*f.get((1 << levels.len()) - 1), all.into());
        assert_eq!(*f.get(0), 1u64.into());
    }
}
