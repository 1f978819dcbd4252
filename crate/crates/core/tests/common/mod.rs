//! Brute-force oracles over tiny prime fields and random module generators.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use gradalib::{FieldSpec, GradedAlgebra, GradedModule, Mat, Module, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const GF2: FieldSpec = FieldSpec::Prime(2);
pub const GF3: FieldSpec = FieldSpec::Prime(3);
pub const Q: FieldSpec = FieldSpec::Rationals;

/// Every `rows × cols` matrix over `GF(p)`.
pub fn all_matrices(f: FieldSpec, rows: usize, cols: usize) -> Vec<Mat> {
    let p = f.characteristic() as usize;
    let n = rows * cols;
    let total = p.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let data: Vec<Scalar> = (0..n)
                .map(|_| {
                    let d = code % p;
                    code /= p;
                    f.from_i64(d as i64)
                })
                .collect();
            Mat::from_vec(f, rows, cols, data)
        })
        .collect()
}

/// Every tuple of per-vertex matrices `dims_n[v] × dims_m[v]`.
pub fn all_block_tuples(f: FieldSpec, m: &[usize], n: &[usize]) -> Vec<Vec<Mat>> {
    let mut out = vec![Vec::new()];
    for (&c, &r) in m.iter().zip(n) {
        let mats = all_matrices(f, r, c);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                mats.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect();
    }
    out
}

pub fn intertwines(f: &[Mat], m: &Module, n: &Module) -> bool {
    m.algebra().arrows().iter().enumerate().all(|(ai, a)| {
        n.action(ai).mul(&f[a.source]) == f[a.target].mul(m.action(ai))
    })
}

/// Number of homomorphisms `M -> N`, by enumeration.
pub fn count_homs(m: &Module, n: &Module) -> usize {
    all_block_tuples(m.field(), m.dims(), n.dims())
        .iter()
        .filter(|f| intertwines(f, m, n))
        .count()
}

pub fn brute_hom_dim(m: &Module, n: &Module) -> usize {
    let p = m.field().characteristic() as usize;
    let mut c = count_homs(m, n);
    let mut d = 0;
    while c > 1 {
        assert_eq!(c % p, 0, "hom count is a power of p");
        c /= p;
        d += 1;
    }
    d
}

pub fn brute_isomorphic(m: &Module, n: &Module) -> bool {
    m.dims() == n.dims()
        && all_block_tuples(m.field(), m.dims(), n.dims())
            .iter()
            .any(|f| f.iter().all(Mat::is_invertible) && intertwines(f, m, n))
}

/// Decomposable iff some endomorphism is an idempotent other than 0 and 1.
pub fn brute_indecomposable(m: &Module) -> bool {
    if m.is_zero() {
        return false;
    }
    !all_block_tuples(m.field(), m.dims(), m.dims()).iter().any(|e| {
        intertwines(e, m, m)
            && e.iter().all(|x| x.mul(x) == *x)
            && !e.iter().all(Mat::is_zero)
            && !e.iter().all(Mat::is_identity)
    })
}

/// Dimension vectors with total at most `max`.
pub fn dim_vectors(nv: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..nv {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                let used: usize = p.iter().sum();
                (0..=max - used).map(move |d| {
                    let mut q = p.clone();
                    q.push(d);
                    q
                })
            })
            .collect();
    }
    out.retain(|d| d.iter().sum::<usize>() > 0);
    out
}

/// Indecomposable isomorphism classes of total dimension ≤ `max`, by exhaustion.
pub fn brute_enumerate(alg: &Arc<GradedAlgebra>, max: usize) -> Vec<Module> {
    let f = alg.field();
    let mut reps: Vec<Module> = Vec::new();
    for dims in dim_vectors(alg.num_vertices(), max) {
        let arrows = alg.arrows().to_vec();
        let mut tuples = vec![Vec::new()];
        for a in &arrows {
            let mats = all_matrices(f, dims[a.target], dims[a.source]);
            tuples = tuples
                .into_iter()
                .flat_map(|prefix: Vec<Mat>| {
                    mats.iter().map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x.clone());
                        p
                    })
                })
                .collect();
        }
        for t in tuples {
            let Ok(m) = Module::new(alg.clone(), dims.clone(), t) else {
                continue;
            };
            if brute_indecomposable(&m) && !reps.iter().any(|r| brute_isomorphic(r, &m)) {
                reps.push(m);
            }
        }
    }
    reps
}

pub fn random_scalar(f: FieldSpec, rng: &mut ChaCha8Rng) -> Scalar {
    match f {
        FieldSpec::Prime(p) => f.from_i64(rng.gen_range(0..p as i64)),
        FieldSpec::Rationals => f.from_i64(rng.gen_range(-2..=2)),
    }
}

pub fn random_matrix(f: FieldSpec, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat {
    let data = (0..rows * cols).map(|_| random_scalar(f, rng)).collect();
    Mat::from_vec(f, rows, cols, data)
}

pub fn random_invertible(f: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Mat {
    loop {
        let m = random_matrix(f, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random graded module with support inside `[0, width)` and at most `per` dimensions per
/// vertex and degree. Relations hold automatically when `width` is below the shortest
/// relation degree, so callers pick `width` accordingly.
pub fn random_graded(alg: &Arc<GradedAlgebra>, width: i64, per: usize, rng: &mut ChaCha8Rng) -> GradedModule {
    let f = alg.field();
    loop {
        let spaces: Vec<BTreeMap<i64, usize>> = (0..alg.num_vertices())
            .map(|_| {
                (0..width)
                    .map(|n| (n, rng.gen_range(0..=per)))
                    .filter(|&(_, d)| d > 0)
                    .collect()
            })
            .collect();
        if spaces.iter().all(BTreeMap::is_empty) {
            continue;
        }
        let mut blocks = BTreeMap::new();
        for (ai, a) in alg.arrows().iter().enumerate() {
            for (&n, &sd) in &spaces[a.source] {
                if let Some(&td) = spaces[a.target].get(&(n + a.degree)) {
                    blocks.insert((ai, n), random_matrix(f, td, sd, rng));
                }
            }
        }
        if let Ok(g) = GradedModule::from_blocks(alg.clone(), &spaces, &blocks) {
            return g;
        }
    }
}

/// Conjugates a module by random invertible per-vertex base changes.
pub fn conjugate(m: &Module, rng: &mut ChaCha8Rng) -> Module {
    let p: Vec<Mat> = m.dims().iter().map(|&d| random_invertible(m.field(), d, rng)).collect();
    m.base_change(&p).expect("invertible base change")
}
