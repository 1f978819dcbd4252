mod common;

use common::*;
use gradalib::corpus::{algebras, exterior_like, kronecker, linear_quiver, truncated_polynomial};
use gradalib::{Mat, Scalar};

#[test]
fn basis_sizes_match_path_counts() {
    // k[x]/(x^n): 1, x, .., x^{n-1}; Kronecker: e1, e2, a, b; A_n: n(n+1)/2 paths
    for n in 1..=4 {
        assert_eq!(truncated_polynomial(GF3, n).dim(), n);
        assert_eq!(linear_quiver(GF3, n, 1).dim(), n * (n + 1) / 2);
    }
    assert_eq!(kronecker(GF3).dim(), 4);
    assert_eq!(exterior_like(Q).dim(), 4);
}

#[test]
fn homogeneous_components() {
    let r = truncated_polynomial(GF3, 3);
    let names = |idx: Vec<usize>| idx.into_iter().map(|i| r.basis_name(i)).collect::<Vec<_>>();
    assert_eq!(names(r.homogeneous_component(2)), vec!["x*x"]);
    assert!(r.homogeneous_component(3).is_empty());
    let k = kronecker(GF3);
    let mut zero: Vec<String> = k.homogeneous_component(0).into_iter().map(|i| k.basis_name(i)).collect();
    zero.sort();
    assert_eq!(zero, vec!["a", "e_1", "e_2"]);
}

fn unit(dim: usize, i: usize, f: gradalib::FieldSpec) -> Vec<Scalar> {
    (0..dim).map(|j| if i == j { f.one() } else { f.zero() }).collect()
}

#[test]
fn associativity_and_homogeneity_on_corpus() {
    for f in [GF2, GF3, Q] {
        let mut algs = algebras(f);
        algs.push(("exterior", exterior_like(f)));
        for (name, alg) in algs {
            let n = alg.dim();
            let deg: Vec<i64> = alg.basis().iter().map(|b| b.degree).collect();
            for i in 0..n {
                for j in 0..n {
                    let ij = alg.mul(&unit(n, i, f), &unit(n, j, f));
                    for (k, c) in ij.iter().enumerate() {
                        assert!(c.is_zero() || deg[k] == deg[i] + deg[j], "{name}: degree of product");
                    }
                    for k in 0..n {
                        let left = alg.mul(&ij, &unit(n, k, f));
                        let right = alg.mul(&unit(n, i, f), &alg.mul(&unit(n, j, f), &unit(n, k, f)));
                        assert_eq!(left, right, "{name}: ({i}{j}){k}");
                    }
                }
            }
            let d = alg.max_degree();
            let total: usize = (-d..=d).map(|t| alg.homogeneous_component(t).len()).sum();
            assert_eq!(total, n, "{name}");
        }
    }
}

#[test]
fn radical_is_nilpotent_with_split_semisimple_quotient() {
    for (name, alg) in algebras(GF3) {
        let f = alg.field();
        let n = alg.dim();
        let rad = alg.radical_basis();
        assert_eq!(n - rad.len(), alg.num_vertices(), "{name}: A/J is k^vertices");
        // products of radical elements of length nilpotency index vanish
        let mut span: Vec<Vec<Scalar>> = rad.iter().map(|&i| unit(n, i, f)).collect();
        for _ in 1..alg.nilpotency_index() {
            let mut next = Vec::new();
            for x in &span {
                for &r in &rad {
                    next.push(alg.mul(x, &unit(n, r, f)));
                }
            }
            span = next;
        }
        assert!(span.iter().all(|x| x.iter().all(Scalar::is_zero)), "{name}");
        let m = Mat::from_cols(f, n, &rad.iter().map(|&i| unit(n, i, f)).collect::<Vec<_>>());
        assert_eq!(m.rank(), rad.len());
    }
}

#[test]
fn opposite_algebras() {
    let k = kronecker(GF3);
    let op = k.opposite().unwrap();
    for (a, b) in k.arrows().iter().zip(op.arrows()) {
        assert_eq!((a.source, a.target, a.degree), (b.target, b.source, b.degree));
    }
    let r = truncated_polynomial(GF3, 3);
    assert_eq!(r.opposite().unwrap().presentation(), r.presentation());
    assert_eq!(op.opposite().unwrap().presentation(), k.presentation());
}
