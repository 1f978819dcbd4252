mod common;

use common::*;
use gradalib::exactla::{integer_diagonalizable, minimal_polynomial};
use gradalib::{FieldSpec, Mat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fields() -> [FieldSpec; 4] {
    [GF2, GF3, FieldSpec::Prime(7), Q]
}

/// Kernel size by enumeration of all vectors over GF(p).
fn brute_kernel_size(a: &Mat) -> usize {
    all_matrices(a.field(), a.cols(), 1).iter().filter(|x| a.mul(x).is_zero()).count()
}

#[test]
fn kernel_matches_enumeration_over_small_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for f in [GF2, GF3] {
        for _ in 0..60 {
            let (r, c) = (1 + (rand::Rng::gen_range(&mut rng, 0..4)), 1 + rand::Rng::gen_range(&mut rng, 0..4));
            let a = random_matrix(f, r, c, &mut rng);
            let k = a.kernel().cols();
            let p = f.characteristic() as usize;
            assert_eq!(brute_kernel_size(&a), p.pow(k as u32));
        }
    }
}

#[test]
fn solve_row_over_gf2() {
    let a = Mat::from_i64(GF2, &[&[1, 1]]);
    let b = Mat::from_i64(GF2, &[&[0]]);
    let (x, k) = a.solve(&b).unwrap().unwrap();
    assert!(x.is_zero());
    assert_eq!(k, Mat::from_i64(GF2, &[&[1], &[1]]));
    // all solutions by enumeration: (0,0) and (1,1)
    assert_eq!(brute_kernel_size(&a), 2);
}

#[test]
fn rank_of_dependent_rows_over_q() {
    assert_eq!(Mat::from_i64(Q, &[&[1, 2], &[2, 4]]).rank(), 1);
    assert_eq!(Mat::identity(Q, 3).rank(), 3);
    assert_eq!(Mat::zeros(Q, 2, 2).rank(), 0);
}

#[test]
fn minimal_polynomial_of_jordan_block_is_t_squared() {
    let j = Mat::from_i64(Q, &[&[0, 1], &[0, 0]]);
    let m = minimal_polynomial(&j).unwrap();
    assert_eq!(m.coeffs().iter().map(|c| c.to_integer().unwrap()).collect::<Vec<_>>(), vec![0, 0, 1]);
    assert_eq!(integer_diagonalizable(&j).unwrap(), None);
    let d = Mat::from_i64(Q, &[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    assert_eq!(integer_diagonalizable(&d).unwrap().unwrap().0, vec![0, 1, 1]);
    let half = Mat::from_vec(Q, 1, 1, vec![Q.from_ratio(1, 2).unwrap()]);
    assert_eq!(integer_diagonalizable(&half).unwrap(), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_nullity(seed in any::<u64>(), fi in 0usize..4, r in 1usize..6, c in 1usize..6) {
        let f = fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(f, r, c, &mut rng);
        let k = a.kernel();
        prop_assert_eq!(a.rank() + k.cols(), c);
        prop_assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn solve_verifies(seed in any::<u64>(), fi in 0usize..4, r in 1usize..5, c in 1usize..5) {
        let f = fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(f, r, c, &mut rng);
        let x0 = random_matrix(f, c, 2, &mut rng);
        let b = a.mul(&x0);
        let (x, k) = a.solve(&b).unwrap().expect("consistent by construction");
        prop_assert_eq!(a.mul(&x), b);
        prop_assert!(a.mul(&k).is_zero());
        let other = random_matrix(f, r, 1, &mut rng);
        if let Some((y, _)) = a.solve(&other).unwrap() {
            prop_assert_eq!(a.mul(&y), other);
        } else {
            prop_assert!(a.hstack(&other).rank() > a.rank());
        }
    }

    #[test]
    fn minimal_polynomial_annihilates(seed in any::<u64>(), fi in 0usize..4, n in 1usize..5) {
        let f = fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(f, n, n, &mut rng);
        let m = minimal_polynomial(&a).unwrap();
        prop_assert!(m.eval_mat(&a).is_zero());
        prop_assert!(m.degree().unwrap() <= n);
        prop_assert!(m.leading().is_one());
    }

    #[test]
    fn inverse_round_trip(seed in any::<u64>(), fi in 0usize..4, n in 1usize..5) {
        let f = fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_invertible(f, n, &mut rng);
        let inv = a.inverse().unwrap();
        prop_assert!(a.mul(&inv).is_identity());
        prop_assert!(inv.mul(&a).is_identity());
    }
}
