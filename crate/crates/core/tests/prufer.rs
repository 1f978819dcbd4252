mod common;

use common::*;
use gradalib::corpus::{algebras, cyclic_module, kronecker, kronecker_band, truncated_polynomial};
use gradalib::gradability::{exhaustive_oracle, OracleVerdict};
use gradalib::module_rep::{decompose, enumerate_modules};
use gradalib::prufer::{build_tower, finite_type_scan};
use gradalib::suites::kronecker_r1;

#[test]
fn kronecker_r1_tower_dimensions() {
    let t = build_tower(&kronecker_r1(GF3)).unwrap();
    for n in 1..=6 {
        let y = t.member(n).unwrap();
        assert_eq!(y.module().dims(), &[n, n]);
        assert!(y.check_homogeneous().is_ok());
        assert!(y.module().check_relations().is_ok());
    }
}

#[test]
fn tower_members_have_length_n_times_base() {
    for (name, alg) in algebras(GF3) {
        for m in enumerate_modules(&alg, 3).unwrap() {
            let t = build_tower(&m).unwrap();
            for n in 1..=4 {
                let y = t.member(n).unwrap();
                assert_eq!(y.total_dim(), n * m.total_dim(), "{name}");
                assert!(t.check_exactness(n).unwrap(), "{name} n = {n}");
                let phi = t.phi_on(n).unwrap();
                let mut p = phi.clone();
                for _ in 1..n {
                    p = p.compose(&phi);
                }
                assert!(phi.is_homomorphism(y.module(), y.module()));
                assert!(p.is_zero(), "{name}: φ^n vanishes on Y[n]");
            }
        }
    }
}

#[test]
fn y1_is_the_associated_graded() {
    for (name, alg) in algebras(GF2) {
        for m in enumerate_modules(&alg, 3).unwrap() {
            let t = build_tower(&m).unwrap();
            let y1 = t.member(1).unwrap();
            assert_eq!(y1.module().dims(), m.dims(), "{name}");
            for v in 0..m.dims().len() {
                for (j, r) in y1.vertex_degree_ranges(v) {
                    let j = j as usize;
                    let next = t.chain((j + 1) as i64)[v].cols();
                    assert_eq!(r.len(), t.chain(j as i64)[v].cols() - next, "{name}");
                }
            }
        }
    }
    let r1 = kronecker_r1(GF2);
    let y1 = build_tower(&r1).unwrap().member(1).unwrap();
    assert!(!brute_isomorphic(y1.module(), &r1));
}

#[test]
fn scan_stabilizes_iff_gradable() {
    let mut inputs: Vec<gradalib::Module> = Vec::new();
    for n in 1..=3 {
        let alg = truncated_polynomial(GF3, n);
        for i in 1..=n {
            inputs.push(cyclic_module(&alg, i));
        }
    }
    let kr = kronecker(GF3);
    for lambda in 0..3 {
        inputs.push(kronecker_band(&kr, lambda));
    }
    for m in inputs {
        let gradable = matches!(exhaustive_oracle(&m).unwrap(), OracleVerdict::Gradable(_));
        let scan = finite_type_scan(&build_tower(&m).unwrap(), 8).unwrap();
        assert_eq!(scan.stabilized, gradable, "{:?}", m.dims());
        assert!(scan.growth.windows(2).all(|w| w[0] <= w[1]));
        if !gradable {
            assert!(scan.registry.len() >= 8);
        }
    }
}

#[test]
fn tower_summands_are_indecomposable() {
    let t = build_tower(&cyclic_module(&truncated_polynomial(GF2, 3), 2)).unwrap();
    let scan = finite_type_scan(&t, 5).unwrap();
    for step in &scan.steps {
        for s in &step.summands {
            assert!(brute_indecomposable(s.module()));
            assert_eq!(decompose(s.module()).unwrap().summands.len(), 1);
        }
    }
}
