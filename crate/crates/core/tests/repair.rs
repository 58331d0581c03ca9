use lrc_core::constructions::{construct_t2, construct_t3, Certificate};
use lrc_core::repair::{find_repair_set, is_e_r_repairable, is_elrc, is_repair_code, simulate_failures, RepairIndex};
use lrc_core::{BinaryMatrix, BitVec, LinearCode, DEFAULT_BUDGET};
use proptest::prelude::*;

/// Systematic generator `[I | P]` with its columns shuffled, so it always has
/// full rank.
fn small_code() -> impl Strategy<Value = LinearCode> {
    (3usize..=9)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_flat_map(|(n, k)| {
            (
                Just(n),
                Just(k),
                proptest::collection::vec(any::<bool>(), k * (n - k)),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, k, bits, perm)| {
            let mut g = BinaryMatrix::zeros(k, n);
            for i in 0..k {
                g.set(i, perm[i], true);
                for j in 0..n - k {
                    g.set(i, perm[k + j], bits[i * (n - k) + j]);
                }
            }
            LinearCode::new(g, None).unwrap()
        })
}

fn subsets_up_to(n: usize, t: usize) -> Vec<Vec<usize>> {
    (1u32..1 << n)
        .filter(|m| m.count_ones() as usize <= t)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn xor_is_column(code: &LinearCode, i: usize, set: &[usize]) -> bool {
    let mut acc = code.column(i).clone();
    for &j in set {
        acc.xor_assign(code.column(j));
    }
    acc.is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_agrees_with_span_route(code in small_code(), r in 1usize..4, mask in any::<u16>()) {
        let index = RepairIndex::build(&code, r).unwrap();
        for i in 0..code.n() {
            let allowed: Vec<usize> = (0..code.n()).filter(|&j| j != i && mask >> j & 1 == 1).collect();
            prop_assert_eq!(index.find_within(i, &allowed), find_repair_set(&code, i, &allowed, r).unwrap());
        }
    }

    #[test]
    fn minimal_sets_repair_and_are_minimal(code in small_code(), r in 1usize..4) {
        let index = RepairIndex::build(&code, r).unwrap();
        for i in 0..code.n() {
            for set in index.minimal_sets(i) {
                prop_assert!(set.len() <= r && !set.contains(&i));
                prop_assert!(xor_is_column(&code, i, &set));
                for drop in 0..set.len() {
                    let mut smaller = set.clone();
                    smaller.remove(drop);
                    prop_assert_eq!(find_repair_set(&code, i, &smaller, r).unwrap(), None);
                }
            }
        }
    }

    #[test]
    fn repairability_is_monotone_and_oracles_agree(code in small_code(), r in 1usize..4) {
        let index = RepairIndex::build(&code, r).unwrap();
        let n = code.n();
        let sets = subsets_up_to(n, 3);
        for e in &sets {
            let by_span = is_e_r_repairable(&code, e, r).unwrap();
            prop_assert_eq!(by_span.is_some(), index.peel_criterion(e));
            prop_assert_eq!(by_span.clone(), index.schedule(e));
            if let Some(s) = &by_span {
                prop_assert!(s.is_valid(&code, e, r));
                for drop in 0..e.len() {
                    let mut sub = e.clone();
                    sub.remove(drop);
                    prop_assert!(is_e_r_repairable(&code, &sub, r).unwrap().is_some());
                }
            }
        }
    }

    #[test]
    fn elrc_verdict_matches_brute_force(code in small_code(), r in 1usize..4, t in 1usize..4) {
        let rep = is_elrc(&code, r, t, u64::MAX).unwrap();
        let expected = subsets_up_to(code.n(), t)
            .iter()
            .all(|e| is_e_r_repairable(&code, e, r).unwrap().is_some());
        prop_assert_eq!(rep.verdict, expected);
        prop_assert!(rep.failures.iter().all(|f| !f.reason.starts_with("oracles")));
    }

    #[test]
    fn simulation_recovers_or_gets_stuck(code in small_code(), r in 1usize..4, msg in any::<u16>(), mask in any::<u16>()) {
        let k = code.k();
        let message = BitVec::from_bools(&(0..k).map(|i| msg >> i & 1 == 1).collect::<Vec<_>>());
        let word = code.encode(&message).unwrap();
        let erased: Vec<usize> = (0..code.n()).filter(|j| mask >> j & 1 == 1).collect();
        let trace = simulate_failures(&code, &word, &erased, r).unwrap();
        let repairable = is_e_r_repairable(&code, &erased, r).unwrap().is_some();
        prop_assert_eq!(trace.succeeded(), repairable);
        if repairable {
            prop_assert_eq!(trace.recovered.as_ref(), Some(&word));
            prop_assert!(trace.max_locality() <= r);
        }
    }
}

#[test]
fn parity_of_the_first_cover_subset_repairs_from_information() {
    let c = construct_t2(12, 3).unwrap();
    let Certificate::Cover(cover) = &c.certificate else {
        panic!()
    };
    let info: Vec<usize> = (0..12).collect();
    assert_eq!(
        find_repair_set(&c.code, 12, &info, 3).unwrap(),
        Some(cover.member(0).to_vec())
    );
}

#[test]
fn cover_code_schedules() {
    let code = construct_t2(12, 3).unwrap().code;
    let s = is_e_r_repairable(&code, &[0, 12], 3).unwrap().unwrap();
    assert!(s.is_valid(&code, &[0, 12], 3));
    assert!(is_elrc(&code, 3, 2, DEFAULT_BUDGET).unwrap().verdict);
    assert!(!is_elrc(&code, 3, 3, DEFAULT_BUDGET).unwrap().verdict);
}

#[test]
fn mesh_code_is_three_erasure_local() {
    let code = construct_t3(12, 3).unwrap().code;
    let rep = is_elrc(&code, 3, 3, DEFAULT_BUDGET).unwrap();
    assert!(rep.verdict, "{rep}");
    assert_eq!(rep.checked, 22 + 231 + 1540);
    assert!(rep.cross_checked > 0);
    assert!(rep.census.iter().all(|c| c.smallest.is_some_and(|s| s <= 3)));
}

#[test]
fn repair_code_relation() {
    let code = construct_t2(9, 3).unwrap().code;
    assert!(is_repair_code(&code, &code, &[], 3).unwrap());
    assert!(is_repair_code(&code, &code, &[1, 10], 3).unwrap());

    // Zeroing a column outside E changes the punctured code.
    let mut g = code.generator().clone();
    for row in 0..g.rows() {
        g.set(row, 13, false);
    }
    let zeroed = LinearCode::new(g, None).unwrap();
    assert!(!is_repair_code(&zeroed, &code, &[1], 3).unwrap());
}

#[test]
fn simulation_on_cover_code() {
    let code = construct_t2(12, 3).unwrap().code;
    let message = BitVec::from_str01("101100111010").unwrap();
    let word = code.encode(&message).unwrap();
    let trace = simulate_failures(&code, &word, &[1, 13], 3).unwrap();
    assert_eq!(trace.recovered.as_ref(), Some(&word));
    assert!(trace.downloaded() <= 6);

    let zero = BitVec::zeros(20);
    let trace = simulate_failures(&code, &zero, &[1, 13], 3).unwrap();
    assert!(trace.steps.iter().all(|s| !s.value));

    // Erasing all information symbols leaves only parities of size r.
    let info: Vec<usize> = (0..12).collect();
    let trace = simulate_failures(&code, &word, &info, 3).unwrap();
    assert!(!trace.succeeded());
    assert!(is_e_r_repairable(&code, &info, 3).unwrap().is_none());
}
