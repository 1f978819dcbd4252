//! Built-in algebras and modules used by the verification suites and tests.

use std::sync::Arc;

use crate::algebra::{GradedAlgebra, QuiverPresentation};
use crate::exactla::{FieldSpec, Mat};
use crate::module_rep::{GradedModule, Module};

/// `k[x]/(x^n)` with `deg x = 1`.
pub fn truncated_polynomial(field: FieldSpec, n: usize) -> Arc<GradedAlgebra> {
    let rel = vec!["x"; n].join("*");
    GradedAlgebra::build(
        QuiverPresentation::new(field)
            .with_vertex("1")
            .with_arrow("x", "1", "1", 1)
            .with_relation(&rel),
    )
    .expect("truncated polynomial algebra")
}

/// The Kronecker quiver `1 ⇉ 2` with `deg a = 0`, `deg b = 1`.
pub fn kronecker(field: FieldSpec) -> Arc<GradedAlgebra> {
    GradedAlgebra::build(
        QuiverPresentation::new(field)
            .with_vertex("1")
            .with_vertex("2")
            .with_arrow("a", "1", "2", 0)
            .with_arrow("b", "1", "2", 1),
    )
    .expect("Kronecker algebra")
}

/// Linear `A_n`: `1 -> 2 -> ... -> n`, every arrow of degree `deg`.
pub fn linear_quiver(field: FieldSpec, n: usize, deg: i64) -> Arc<GradedAlgebra> {
    let mut p = QuiverPresentation::new(field);
    for v in 1..=n {
        p = p.with_vertex(&v.to_string());
    }
    for v in 1..n {
        p = p.with_arrow(&format!("a{v}"), &v.to_string(), &(v + 1).to_string(), deg);
    }
    GradedAlgebra::build(p).expect("linear quiver")
}

/// `k × k`, concentrated in degree 0.
pub fn semisimple_pair(field: FieldSpec) -> Arc<GradedAlgebra> {
    GradedAlgebra::build(QuiverPresentation::new(field).with_vertex("1").with_vertex("2"))
        .expect("semisimple algebra")
}

/// `k[x, y]/(x^2, y^2, xy - yx)` with `deg x = deg y = 1`.
pub fn exterior_like(field: FieldSpec) -> Arc<GradedAlgebra> {
    GradedAlgebra::build(
        QuiverPresentation::new(field)
            .with_vertex("1")
            .with_arrow("x", "1", "1", 1)
            .with_arrow("y", "1", "1", 1)
            .with_relation("x*x")
            .with_relation("y*y")
            .with_relation("x*y - y*x"),
    )
    .expect("commutative local algebra")
}

/// The named algebras of the bundled corpus.
pub fn algebras(field: FieldSpec) -> Vec<(&'static str, Arc<GradedAlgebra>)> {
    vec![
        ("k[x]/(x^2)", truncated_polynomial(field, 2)),
        ("k[x]/(x^3)", truncated_polynomial(field, 3)),
        ("kronecker", kronecker(field)),
        ("A2", linear_quiver(field, 2, 1)),
        ("A3", linear_quiver(field, 3, 1)),
    ]
}

/// `k[x]/(x^i)` as a module over `k[x]/(x^n)`, basis `1, x, ..., x^{i-1}`.
pub fn cyclic_module(alg: &Arc<GradedAlgebra>, i: usize) -> Module {
    let f = alg.field();
    let mut x = Mat::zeros(f, i, i);
    for j in 0..i.saturating_sub(1) {
        x.set(j + 1, j, f.one());
    }
    Module::new(alg.clone(), vec![i], vec![x]).expect("cyclic module")
}

/// The graded version of [`cyclic_module`] starting in degree `start`.
pub fn graded_cyclic_module(alg: &Arc<GradedAlgebra>, i: usize, start: i64) -> GradedModule {
    let m = cyclic_module(alg, i);
    GradedModule::new(m, vec![(0..i as i64).map(|j| start + j).collect()]).expect("graded cyclic module")
}

/// Kronecker module of dimension `(1, 1)` with `a = [1]`, `b = [lambda]`.
pub fn kronecker_band(alg: &Arc<GradedAlgebra>, lambda: i64) -> Module {
    let f = alg.field();
    Module::new(
        alg.clone(),
        vec![1, 1],
        vec![Mat::from_i64(f, &[&[1]]), Mat::from_i64(f, &[&[lambda]])],
    )
    .expect("Kronecker band module")
}

/// Kronecker module of dimension `(1, 2)` with `a = (1, 0)^T`, `b = (0, 1)^T`.
pub fn kronecker_preinjective(alg: &Arc<GradedAlgebra>) -> Module {
    let f = alg.field();
    Module::new(
        alg.clone(),
        vec![1, 2],
        vec![Mat::from_i64(f, &[&[1], &[0]]), Mat::from_i64(f, &[&[0], &[1]])],
    )
    .expect("Kronecker module")
}
