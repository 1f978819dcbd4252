//! Positive-primitive formulas, pp-types and purity of embeddings.

use std::sync::Arc;

use crate::algebra::{Element, GradedAlgebra};
use crate::error::{Error, Result};
use crate::exactla::{Mat, Scalar};
use crate::homalg::minimal_presentation_ungraded;
use crate::module_rep::{hom, Module, ModuleMap};

/// `φ(x̄): ∃ȳ (x̄ A = ȳ B)` with `A` of shape `n × c` and `B` of shape `k × c` over the algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct PpFormula {
    algebra: Arc<GradedAlgebra>,
    a: Vec<Vec<Element>>,
    b: Vec<Vec<Element>>,
    cols: usize,
}

impl PpFormula {
    pub fn new(algebra: Arc<GradedAlgebra>, a: Vec<Vec<Element>>, b: Vec<Vec<Element>>) -> Result<Self> {
        let cols = a.first().or(b.first()).map_or(0, Vec::len);
        let dim = algebra.dim();
        for row in a.iter().chain(&b) {
            if row.len() != cols {
                return Err(Error::ShapeMismatch("pp-formula matrices need equal column counts".into()));
            }
            if row.iter().any(|e| e.len() != dim) {
                return Err(Error::ShapeMismatch("entry is not an algebra element".into()));
            }
        }
        Ok(PpFormula { algebra, a, b, cols })
    }

    /// Entries given as algebra expressions such as `"x*x"` or `"0"`.
    pub fn parse(algebra: Arc<GradedAlgebra>, a: &[&[&str]], b: &[&[&str]]) -> Result<Self> {
        let conv = |rows: &[&[&str]]| -> Result<Vec<Vec<Element>>> {
            rows.iter()
                .map(|r| r.iter().map(|t| algebra.parse_element(t)).collect())
                .collect()
        };
        let (a, b) = (conv(a)?, conv(b)?);
        PpFormula::new(algebra, a, b)
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn free_vars(&self) -> usize {
        self.a.len()
    }

    pub fn bound_vars(&self) -> usize {
        self.b.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn a(&self) -> &[Vec<Element>] {
        &self.a
    }

    pub fn b(&self) -> &[Vec<Element>] {
        &self.b
    }

    /// `φ ∧ ψ` on the same free variables, with disjoint bound variables.
    pub fn and(&self, other: &PpFormula) -> Result<PpFormula> {
        if self.free_vars() != other.free_vars() {
            return Err(Error::ShapeMismatch("conjunction needs equal free variables".into()));
        }
        let zero = self.algebra.zero_element();
        let a = self
            .a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| x.iter().chain(y).cloned().collect())
            .collect();
        let mut b: Vec<Vec<Element>> = self
            .b
            .iter()
            .map(|r| r.iter().cloned().chain(std::iter::repeat(zero.clone()).take(other.cols)).collect())
            .collect();
        b.extend(
            other
                .b
                .iter()
                .map(|r| std::iter::repeat(zero.clone()).take(self.cols).chain(r.iter().cloned()).collect()),
        );
        PpFormula::new(self.algebra.clone(), a, b)
    }
}

/// Whether `ȳ B = m̄ A` has a solution in `M`; tuple entries are global vectors.
pub fn pp_eval(phi: &PpFormula, m: &Module, tuple: &[Vec<Scalar>]) -> Result<bool> {
    if tuple.len() != phi.free_vars() {
        return Err(Error::ShapeMismatch(format!(
            "formula has {} free variables, tuple has {} entries",
            phi.free_vars(),
            tuple.len()
        )));
    }
    if **m.algebra() != *phi.algebra {
        return Err(Error::AlgebraMismatch);
    }
    let f = m.field();
    let n = m.total_dim();
    if tuple.iter().any(|x| x.len() != n) {
        return Err(Error::ShapeMismatch("tuple entry is not an element of M".into()));
    }
    let k = phi.bound_vars();
    let mut sys = Mat::zeros(f, phi.cols * n, k * n);
    let mut rhs = Mat::zeros(f, phi.cols * n, 1);
    for j in 0..phi.cols {
        let mut target = vec![f.zero(); n];
        for (i, x) in tuple.iter().enumerate() {
            for (t, v) in target.iter_mut().zip(m.element_action(&phi.a[i][j]).mul_vec(x)) {
                *t = &*t + &v;
            }
        }
        for (r, t) in target.into_iter().enumerate() {
            rhs.set(j * n + r, 0, t);
        }
        for l in 0..k {
            sys.put_block(j * n, l * n, &m.element_action(&phi.b[l][j]));
        }
    }
    Ok(sys.solve(&rhs)?.is_some())
}

/// A homomorphism `f: M -> N` with `f(m̄) = n̄`, if one exists.
pub fn pp_type_leq(m: &Module, mt: &[Vec<Scalar>], n: &Module, nt: &[Vec<Scalar>]) -> Result<Option<ModuleMap>> {
    m.same_algebra(n)?;
    if mt.len() != nt.len() {
        return Err(Error::ShapeMismatch("tuples of different lengths".into()));
    }
    let f = m.field();
    let space = hom(m, n)?;
    let globals: Vec<Mat> = space.basis.iter().map(ModuleMap::global).collect();
    let rows = nt.len() * n.total_dim();
    let mut sys = Mat::zeros(f, rows, globals.len());
    let mut rhs = Mat::zeros(f, rows, 1);
    for (j, (x, y)) in mt.iter().zip(nt).enumerate() {
        for (i, g) in globals.iter().enumerate() {
            for (r, v) in g.mul_vec(x).into_iter().enumerate() {
                sys.set(j * n.total_dim() + r, i, v);
            }
        }
        for (r, v) in y.iter().enumerate() {
            rhs.set(j * n.total_dim() + r, 0, v.clone());
        }
    }
    Ok(sys.solve(&rhs)?.map(|(c, _)| space.combination(&c.col(0))))
}

/// A formula generating the pp-type of `m̄` in `M`:
/// `∃ȳ (x_i = Σ_g y_g c_{g,i} ∧ Σ_g y_g r_{g,h} = 0 ∧ y_g (1 - e_{v_g}) = 0)`
/// from a minimal presentation with relations `r` and lifts `c`.
pub fn pp_generator(m: &Module, tuple: &[Vec<Scalar>]) -> Result<PpFormula> {
    let alg = m.algebra().clone();
    let pres = minimal_presentation_ungraded(m)?;
    let gens = pres.p0.generators().to_vec();
    let rel = pres.relation_matrix();
    let lifts: Vec<Vec<Element>> = tuple.iter().map(|x| pres.lift(m, x)).collect();
    let zero = alg.zero_element();
    let nvars = tuple.len();
    let nrel = pres.p1.generators().len();
    let cols = nvars + nrel + gens.len();
    let mut a = vec![vec![zero.clone(); cols]; nvars];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = alg.one();
    }
    let mut b = vec![vec![zero.clone(); cols]; gens.len()];
    for (g, row) in b.iter_mut().enumerate() {
        for i in 0..nvars {
            row[i] = lifts[i][g].clone();
        }
        for h in 0..nrel {
            row[nvars + h] = rel[g][h].clone();
        }
        let mut off = alg.one();
        let e = alg.idempotent_index(gens[g].0);
        off[e] = &off[e] - &alg.field().one();
        row[nvars + nrel + g] = off;
    }
    PpFormula::new(alg, a, b)
}

/// Both purity tests for an embedding `ι: M -> N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PurityCheck {
    /// `ι` admits a retraction.
    pub split: bool,
    /// `pp^N(ι m̄) ⊆ pp^M(m̄)` for a generating tuple `m̄` of `M`.
    pub pp_preserved: bool,
}

impl PurityCheck {
    pub fn agree(&self) -> bool {
        self.split == self.pp_preserved
    }
}

pub fn purity(iota: &ModuleMap, m: &Module, n: &Module) -> Result<PurityCheck> {
    m.same_algebra(n)?;
    if !iota.is_homomorphism(m, n) {
        return Err(Error::InvalidArgument("map is not a homomorphism".into()));
    }
    if iota.rank() != m.total_dim() {
        return Err(Error::InvalidArgument("map is not injective".into()));
    }
    let split = crate::module_rep::retraction(iota, m, n)?.is_some();
    let pres = minimal_presentation_ungraded(m)?;
    let gens: Vec<Vec<Scalar>> = (0..pres.p0.generators().len())
        .map(|g| {
            let v = pres.p0.generators()[g].0;
            let local = pres.cover.blocks[v].mul_vec(&pres.p0.generator_vector(g));
            embed(m, v, &local)
        })
        .collect();
    let g = iota.global();
    let images: Vec<Vec<Scalar>> = gens.iter().map(|x| g.mul_vec(x)).collect();
    let psi = pp_generator(n, &images)?;
    let pp_preserved = pp_eval(&psi, m, &gens)?;
    Ok(PurityCheck { split, pp_preserved })
}

/// Whether the embedding splits; equivalently whether it preserves pp-types.
pub fn is_pure(iota: &ModuleMap, m: &Module, n: &Module) -> Result<bool> {
    Ok(purity(iota, m, n)?.split)
}

/// A vector at vertex `v` as a global vector.
pub fn embed(m: &Module, v: usize, x: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![m.field().zero(); m.total_dim()];
    for (i, val) in m.vertex_range(v).zip(x) {
        out[i] = val.clone();
    }
    out
}
