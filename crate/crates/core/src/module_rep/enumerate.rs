use std::collections::BTreeMap;
use std::sync::Arc;

use super::decompose::{end_ring, iso_indecomposable, Representation};
use super::module::{GradedModule, Module};
use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Mat, Scalar};

/// Largest total dimension accepted by the enumeration oracles.
pub const MAX_ENUM_DIM: usize = 6;
/// Largest number of raw matrix tuples tried for a single dimension vector.
pub const MAX_TUPLES: u64 = 1 << 21;

fn prime_of(alg: &GradedAlgebra) -> Result<u32> {
    match alg.field() {
        FieldSpec::Prime(p) => Ok(p),
        FieldSpec::Rationals => Err(Error::UnsupportedField(
            "enumeration needs a finite field".into(),
        )),
    }
}

fn tuple_count(p: u32, entries: usize, what: &str) -> Result<u64> {
    let mut total: u64 = 1;
    for _ in 0..entries {
        total = total.saturating_mul(p as u64);
        if total > MAX_TUPLES {
            return Err(Error::BoundExceeded(format!(
                "{what}: {p}^{entries} matrix tuples exceed the limit of {MAX_TUPLES}"
            )));
        }
    }
    Ok(total)
}

/// Calls `visit` with every assignment of field elements to `slots` positions.
fn odometer(field: FieldSpec, p: u32, slots: usize, mut visit: impl FnMut(&[Scalar]) -> Result<()>) -> Result<()> {
    let elems: Vec<Scalar> = (0..p as i64).map(|v| field.from_i64(v)).collect();
    let mut digits = vec![0usize; slots];
    loop {
        let vals: Vec<Scalar> = digits.iter().map(|&d| elems[d].clone()).collect();
        visit(&vals)?;
        let mut i = 0;
        loop {
            if i == slots {
                return Ok(());
            }
            digits[i] += 1;
            if digits[i] < p as usize {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn compositions(parts: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; parts];
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for d in 0..=left {
            cur[i] = d;
            rec(i + 1, left - d, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_total, &mut cur, &mut out);
    out.retain(|c| c.iter().sum::<usize>() > 0);
    out.sort_by_key(|c| (c.iter().sum::<usize>(), c.clone()));
    out
}

/// Adds `cand` to `reps` unless it is decomposable or isomorphic to a known representative.
fn consider<T: Representation>(cand: T, reps: &mut Vec<T>) -> Result<()> {
    for r in reps.iter() {
        if iso_indecomposable(r, &cand)?.is_some() {
            return Ok(());
        }
    }
    let end = end_ring(&cand)?;
    if end.local {
        reps.push(cand);
    }
    Ok(())
}

/// Indecomposable modules of total dimension ≤ `max_total_dim`, one per isomorphism class.
pub fn enumerate_modules(alg: &Arc<GradedAlgebra>, max_total_dim: usize) -> Result<Vec<Module>> {
    let p = prime_of(alg)?;
    if max_total_dim > MAX_ENUM_DIM {
        return Err(Error::BoundExceeded(format!(
            "total dimension {max_total_dim} exceeds {MAX_ENUM_DIM}"
        )));
    }
    let f = alg.field();
    let arrows = alg.arrows().to_vec();
    let mut reps: Vec<Module> = Vec::new();
    for dims in compositions(alg.num_vertices(), max_total_dim) {
        let shapes: Vec<(usize, usize)> = arrows.iter().map(|a| (dims[a.target], dims[a.source])).collect();
        let slots: usize = shapes.iter().map(|(r, c)| r * c).sum();
        tuple_count(p, slots, &format!("dimension vector {dims:?}"))?;
        odometer(f, p, slots, |vals| {
            let mut action = Vec::with_capacity(shapes.len());
            let mut k = 0;
            for &(r, c) in &shapes {
                action.push(Mat::from_vec(f, r, c, vals[k..k + r * c].to_vec()));
                k += r * c;
            }
            let m = Module::new_unchecked(alg.clone(), dims.clone(), action)?;
            if m.check_relations().is_ok() {
                consider(m, &mut reps)?;
            }
            Ok(())
        })?;
    }
    Ok(reps)
}

/// Graded indecomposables up to shift and the largest graded length among them.
#[derive(Debug, Clone)]
pub struct GradedEnumeration {
    pub classes: Vec<GradedModule>,
    pub max_graded_length: i64,
}

/// Graded indecomposables with graded length ≤ `max_graded_length` and total dimension
/// ≤ `max_total_dim`, normalized to start in degree 0.
pub fn enumerate_graded(
    alg: &Arc<GradedAlgebra>,
    max_graded_length: usize,
    max_total_dim: usize,
) -> Result<GradedEnumeration> {
    let p = prime_of(alg)?;
    if max_total_dim > MAX_ENUM_DIM {
        return Err(Error::BoundExceeded(format!(
            "total dimension {max_total_dim} exceeds {MAX_ENUM_DIM}"
        )));
    }
    if max_graded_length == 0 {
        return Ok(GradedEnumeration {
            classes: vec![],
            max_graded_length: 0,
        });
    }
    let f = alg.field();
    let nv = alg.num_vertices();
    let g = max_graded_length;
    let arrows = alg.arrows().to_vec();
    let mut reps: Vec<GradedModule> = Vec::new();
    for slots_dims in compositions(nv * g, max_total_dim) {
        // slot index v * g + n holds dim M_{v,n}
        if (0..nv).all(|v| slots_dims[v * g] == 0) {
            continue;
        }
        let spaces: Vec<BTreeMap<i64, usize>> = (0..nv)
            .map(|v| {
                (0..g)
                    .filter(|&n| slots_dims[v * g + n] > 0)
                    .map(|n| (n as i64, slots_dims[v * g + n]))
                    .collect()
            })
            .collect();
        let mut keys = Vec::new();
        for (ai, a) in arrows.iter().enumerate() {
            for (&n, &sd) in &spaces[a.source] {
                if let Some(&td) = spaces[a.target].get(&(n + a.degree)) {
                    keys.push(((ai, n), (td, sd)));
                }
            }
        }
        let slots: usize = keys.iter().map(|(_, (r, c))| r * c).sum();
        tuple_count(p, slots, &format!("graded dimensions {spaces:?}"))?;
        odometer(f, p, slots, |vals| {
            let mut blocks = BTreeMap::new();
            let mut k = 0;
            for &(key, (r, c)) in &keys {
                blocks.insert(key, Mat::from_vec(f, r, c, vals[k..k + r * c].to_vec()));
                k += r * c;
            }
            match GradedModule::from_blocks(alg.clone(), &spaces, &blocks) {
                Ok(m) => consider(m, &mut reps),
                Err(Error::RelationViolated(_)) => Ok(()),
                Err(e) => Err(e),
            }
        })?;
    }
    let max_graded_length = reps.iter().map(GradedModule::graded_length).max().unwrap_or(0);
    Ok(GradedEnumeration {
        classes: reps,
        max_graded_length,
    })
}
