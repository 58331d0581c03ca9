use lrc_core::gf2::{in_span, min_distance, rank, row_space_equal, solve_combination};
use lrc_core::{BinaryMatrix, BitVec, LinearCode, RowSpace};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BinaryMatrix> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(any::<bool>(), r * c)))
        .prop_map(|(r, c, bits)| {
            let mut m = BinaryMatrix::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    m.set(i, j, bits[i * c + j]);
                }
            }
            m
        })
}

/// Every XOR of a subset of `rows`, as bit strings.
fn naive_span(rows: &[BitVec], len: usize) -> Vec<String> {
    let mut out: Vec<String> = (0u32..1 << rows.len())
        .map(|sel| {
            let mut acc = BitVec::zeros(len);
            for (i, row) in rows.iter().enumerate() {
                if sel >> i & 1 == 1 {
                    acc.xor_assign(row);
                }
            }
            acc.to_str01()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

proptest! {
    #[test]
    fn rank_is_log_of_span_size(m in matrix(8, 70)) {
        let span = naive_span(&m.row_vecs(), m.cols());
        prop_assert_eq!(1usize << rank(&m), span.len());
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        prop_assert_eq!(RowSpace::of(&m).dimension(), rank(&m));
    }

    #[test]
    fn row_operations_keep_the_row_space(m in matrix(6, 12), a in 0usize..6, b in 0usize..6) {
        let rows = m.row_vecs();
        let (a, b) = (a % rows.len(), b % rows.len());
        prop_assume!(a != b);
        let mut changed = rows.clone();
        let src = changed[b].clone();
        changed[a].xor_assign(&src);
        let other = BinaryMatrix::from_rows(m.cols(), &changed).unwrap();
        prop_assert!(row_space_equal(&m, &other).unwrap());
        prop_assert!(row_space_equal(&m, &m.rref()).unwrap());
    }

    #[test]
    fn solved_combinations_reproduce_the_target(m in matrix(7, 9), t in proptest::collection::vec(any::<bool>(), 9)) {
        let basis = m.row_vecs();
        let target = BitVec::from_bools(&t[..m.cols()]);
        let expected = naive_span(&basis, m.cols()).contains(&target.to_str01());
        prop_assert_eq!(in_span(&target, &basis).unwrap(), expected);
        match solve_combination(&target, &basis).unwrap() {
            Some(coeffs) => {
                let mut acc = BitVec::zeros(m.cols());
                for (row, &c) in basis.iter().zip(&coeffs) {
                    if c {
                        acc.xor_assign(row);
                    }
                }
                prop_assert_eq!(acc, target);
            }
            None => prop_assert!(!expected),
        }
    }

    #[test]
    fn min_distance_matches_enumeration(m in matrix(6, 12)) {
        prop_assume!(rank(&m) == m.rows() && m.rows() < m.cols());
        let code = LinearCode::new(m.clone(), None).unwrap();
        let naive = (1u32..1 << m.rows())
            .map(|sel| {
                let msg = BitVec::from_bools(&(0..m.rows()).map(|i| sel >> i & 1 == 1).collect::<Vec<_>>());
                code.encode(&msg).unwrap().count_ones()
            })
            .min()
            .unwrap();
        prop_assert_eq!(min_distance(&code).unwrap(), naive);
    }

    #[test]
    fn codewords_survive_puncturing(m in matrix(5, 10), msg in any::<u8>(), mask in any::<u16>()) {
        prop_assume!(rank(&m) == m.rows() && m.rows() < m.cols());
        let code = LinearCode::new(m.clone(), None).unwrap();
        let message = BitVec::from_bools(&(0..m.rows()).map(|i| msg >> i & 1 == 1).collect::<Vec<_>>());
        let word = code.encode(&message).unwrap();
        prop_assert!(code.contains(&word).unwrap());
        let erased: Vec<usize> = (0..m.cols()).filter(|j| mask >> j & 1 == 1).collect();
        prop_assume!(erased.len() < m.cols());
        let kept: Vec<bool> = (0..m.cols()).filter(|j| !erased.contains(j)).map(|j| word.get(j)).collect();
        prop_assert!(code.puncture(&erased).unwrap().contains(&BitVec::from_bools(&kept)).unwrap());
    }
}

#[test]
fn puncturing_examples() {
    let spc = LinearCode::new(BinaryMatrix::from_strs(3, &["101", "011"]).unwrap(), None).unwrap();
    assert_eq!(spc.puncture(&[2]).unwrap().dimension(), 2);
    let c = LinearCode::new(BinaryMatrix::from_strs(4, &["1010", "0101"]).unwrap(), None).unwrap();
    let p = c.puncture(&[2, 3]).unwrap();
    assert!(row_space_equal(p.basis(), &BinaryMatrix::identity(2)).unwrap());
}
