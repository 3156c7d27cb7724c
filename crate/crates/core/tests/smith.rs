mod oracle;

use a2k_core::zlinalg::{hnf_accumulate, snf, snf_direct, IntMatrix};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn small_matrix() -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        (prop::collection::vec(prop::collection::vec(-9i64..=9, c), r), Just(c))
    })
}

#[test]
fn snf_matches_minor_gcds_on_random_matrices() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let (a, n) = oracle::random_matrix(&mut rng, 6, 9);
        let got = snf(&IntMatrix::from_dense(a.clone(), n));
        let want = oracle::minor_gcd_factors(&a, n);
        assert_eq!(got.invariant_factors, want, "matrix {a:?}");
        assert!(oracle::is_chain(&got.invariant_factors));
        assert_eq!(got.rank + got.free_rank, n);
    }
}

#[test]
fn snf_preserves_square_determinants() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in 1..=6 {
        for _ in 0..40 {
            let a: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rand::Rng::gen_range(&mut rng, -9..=9)).collect())
                .collect();
            let d = oracle::det(&a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect::<Vec<_>>());
            let s = snf(&IntMatrix::from_dense(a.clone(), n));
            if d == 0 {
                assert!(s.rank < n);
            } else {
                assert_eq!(s.rank, n);
                let prod: BigInt = s.invariant_factors.iter().product();
                assert_eq!(prod, BigInt::from(d).abs());
            }
        }
    }
}

proptest! {
    #[test]
    fn hnf_ignores_row_order((a, n) in small_matrix(), seed in any::<u64>()) {
        let m = IntMatrix::from_dense(a.clone(), n);
        let forward = hnf_accumulate(n, m.rows());
        let mut rows = m.rows().to_vec();
        let mut rng = StdRng::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(rows.as_mut_slice(), &mut rng);
        prop_assert_eq!(forward.to_dense(), hnf_accumulate(n, rows.iter()).to_dense());
    }

    #[test]
    fn hnf_then_snf_equals_direct_snf((a, n) in small_matrix()) {
        let m = IntMatrix::from_dense(a, n);
        prop_assert_eq!(snf(&m), snf_direct(&m));
    }

    #[test]
    fn invariant_factors_form_a_chain((a, n) in small_matrix()) {
        let s = snf(&IntMatrix::from_dense(a, n));
        prop_assert!(oracle::is_chain(&s.invariant_factors));
    }

    #[test]
    fn large_entries_survive_promotion(a in prop::collection::vec(prop::collection::vec(-(1i64 << 40)..(1i64 << 40), 3), 3)) {
        let m = IntMatrix::from_dense(a.clone(), 3);
        let d = oracle::det(&a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect::<Vec<_>>());
        let s = snf(&m);
        if d != 0 {
            let prod: BigInt = s.invariant_factors.iter().product();
            prop_assert_eq!(prod, BigInt::from(d).abs());
        }
        prop_assert_eq!(s, snf_direct(&m));
    }
}
