use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::{Arc, OnceLock};

use crate::algebra::{Element, GradedAlgebra};
use crate::error::{Error, Result};
use super::hom::ModuleMap;
use crate::exactla::{FieldSpec, Mat, Scalar};

/// A finite-dimensional right module: one vector space per vertex and, for every arrow
/// `a: v -> w`, a matrix `rho(a)` of shape `dim(w) x dim(v)` acting on column vectors.
#[derive(Debug, Clone)]
pub struct Module {
    algebra: Arc<GradedAlgebra>,
    dims: Vec<usize>,
    action: Vec<Mat>,
    path_cache: OnceLock<Vec<Mat>>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.dims == other.dims && self.action == other.action
    }
}

impl Module {
    /// Validates shapes and relations.
    pub fn new(algebra: Arc<GradedAlgebra>, dims: Vec<usize>, action: Vec<Mat>) -> Result<Self> {
        let m = Module::new_unchecked(algebra, dims, action)?;
        m.check_relations()?;
        Ok(m)
    }

    /// Validates shapes only.
    pub(crate) fn new_unchecked(
        algebra: Arc<GradedAlgebra>,
        dims: Vec<usize>,
        action: Vec<Mat>,
    ) -> Result<Self> {
        if dims.len() != algebra.num_vertices() {
            return Err(Error::ShapeMismatch(format!(
                "{} vertex dimensions for {} vertices",
                dims.len(),
                algebra.num_vertices()
            )));
        }
        if action.len() != algebra.arrows().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} action matrices for {} arrows",
                action.len(),
                algebra.arrows().len()
            )));
        }
        for (arrow, m) in algebra.arrows().iter().zip(&action) {
            if m.shape() != (dims[arrow.target], dims[arrow.source]) {
                return Err(Error::ShapeMismatch(format!(
                    "arrow `{}` needs a {}x{} matrix, got {}x{}",
                    arrow.name,
                    dims[arrow.target],
                    dims[arrow.source],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != algebra.field() {
                return Err(Error::ShapeMismatch(format!(
                    "arrow `{}` matrix is over the wrong field",
                    arrow.name
                )));
            }
        }
        Ok(Module {
            algebra,
            dims,
            action,
            path_cache: OnceLock::new(),
        })
    }

    pub fn zero(algebra: Arc<GradedAlgebra>) -> Self {
        let f = algebra.field();
        let dims = vec![0; algebra.num_vertices()];
        let action = algebra.arrows().iter().map(|_| Mat::zeros(f, 0, 0)).collect();
        Module::new_unchecked(algebra, dims, action).unwrap()
    }

    /// The vertex simple `S_v`.
    pub fn simple(algebra: Arc<GradedAlgebra>, v: usize) -> Self {
        let f = algebra.field();
        let mut dims = vec![0; algebra.num_vertices()];
        dims[v] = 1;
        let action = algebra
            .arrows()
            .iter()
            .map(|a| Mat::zeros(f, dims[a.target], dims[a.source]))
            .collect();
        Module::new_unchecked(algebra, dims, action).unwrap()
    }

    pub fn check_relations(&self) -> Result<()> {
        let f = self.field();
        for (idx, rel) in self.algebra.relations().iter().enumerate() {
            let Some((_, p0)) = rel.terms.first() else {
                continue;
            };
            let pres = self.algebra.presentation();
            let (s, t) = (pres.path_source(p0), pres.path_target(p0));
            let mut acc = Mat::zeros(f, self.dims[t], self.dims[s]);
            for (c, path) in &rel.terms {
                acc = acc.add(&self.word_action(path).scale(c));
            }
            if !acc.is_zero() {
                return Err(Error::RelationViolated(idx));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn action(&self, arrow: usize) -> &Mat {
        &self.action[arrow]
    }

    pub fn actions(&self) -> &[Mat] {
        &self.action
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut o = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for d in &self.dims {
            o.push(acc);
            acc += d;
        }
        o
    }

    pub fn vertex_range(&self, v: usize) -> Range<usize> {
        let start: usize = self.dims[..v].iter().sum();
        start..start + self.dims[v]
    }

    /// `rho(a_k) ... rho(a_1)` for the path `a_1 * ... * a_k`.
    pub fn word_action(&self, word: &[usize]) -> Mat {
        let arrows = self.algebra.arrows();
        let src = arrows[word[0]].source;
        let mut m = Mat::identity(self.field(), self.dims[src]);
        for &a in word {
            m = self.action[a].mul(&m);
        }
        m
    }

    /// Block action of each basis path (`dim(target) x dim(source)`).
    pub fn path_actions(&self) -> &[Mat] {
        self.path_cache.get_or_init(|| {
            self.algebra
                .basis()
                .iter()
                .map(|b| {
                    if b.is_trivial() {
                        Mat::identity(self.field(), self.dims[b.source])
                    } else {
                        self.word_action(&b.arrows)
                    }
                })
                .collect()
        })
    }

    /// The action of an algebra element on the whole space, as an `n x n` matrix
    /// sending the column vector `m` to `m * x`.
    pub fn element_action(&self, x: &[Scalar]) -> Mat {
        let n = self.total_dim();
        let offs = self.offsets();
        let mut out = Mat::zeros(self.field(), n, n);
        let paths = self.path_actions();
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let b = &self.algebra.basis()[i];
            let block = &paths[i];
            let (r0, c0) = (offs[b.target], offs[b.source]);
            for r in 0..block.rows() {
                for col in 0..block.cols() {
                    let v = block.get(r, col);
                    if v.is_zero() {
                        continue;
                    }
                    let cur = out.get(r0 + r, c0 + col).clone();
                    out.set(r0 + r, c0 + col, &cur + &(c * v));
                }
            }
        }
        out
    }

    /// Global action of the basis path with index `i`.
    pub fn basis_path_action(&self, i: usize) -> Mat {
        self.element_action(&self.algebra.basis_element(i))
    }

    pub fn act(&self, m: &[Scalar], x: &Element) -> Vec<Scalar> {
        self.element_action(x).mul_vec(m)
    }

    pub fn direct_sum(&self, other: &Module) -> Result<Module> {
        self.same_algebra(other)?;
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Module::new_unchecked(self.algebra.clone(), dims, action)
    }

    pub fn same_algebra(&self, other: &Module) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// New basis given by the columns of `p[v]` in each vertex space.
    pub fn base_change(&self, p: &[Mat]) -> Result<Module> {
        let mut inv = Vec::with_capacity(p.len());
        for (v, pv) in p.iter().enumerate() {
            if pv.shape() != (self.dims[v], self.dims[v]) {
                return Err(Error::ShapeMismatch(format!("base change at vertex {v}")));
            }
            inv.push(
                pv.inverse()
                    .ok_or_else(|| Error::InvalidArgument(format!("singular base change at vertex {v}")))?,
            );
        }
        let action = self
            .algebra
            .arrows()
            .iter()
            .zip(&self.action)
            .map(|(a, m)| inv[a.target].mul(m).mul(&p[a.source]))
            .collect();
        Module::new_unchecked(self.algebra.clone(), self.dims.clone(), action)
    }

    /// The submodule spanned by the columns of `basis[v]` (must be closed under the action).
    pub fn submodule(&self, basis: &[Mat]) -> Result<Module> {
        let action = self
            .algebra
            .arrows()
            .iter()
            .zip(&self.action)
            .map(|(a, m)| {
                let image = m.mul(&basis[a.source]);
                match basis[a.target].solve(&image)? {
                    Some((x, _)) => Ok(x),
                    None => Err(Error::InvalidArgument(format!(
                        "subspace is not closed under arrow `{}`",
                        a.name
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let dims = basis.iter().map(Mat::cols).collect();
        Module::new_unchecked(self.algebra.clone(), dims, action)
    }

    /// Quotient by the submodule spanned by `sub[v]`; returns the quotient, the chosen
    /// complement sections `s[v]` (columns in `M`), and projections `pi[v]` with
    /// `pi[v] * s[v] = I` and `pi[v] * sub[v] = 0`.
    pub fn quotient(&self, sub: &[Mat]) -> Result<(Module, Vec<Mat>, Vec<Mat>)> {
        let f = self.field();
        let mut sections = Vec::new();
        let mut projections = Vec::new();
        for (v, s) in sub.iter().enumerate() {
            let s = if s.cols() == 0 {
                Mat::zeros(f, self.dims[v], 0)
            } else {
                s.column_space()
            };
            let c = s.complement_basis();
            let full = s.hstack(&c);
            let inv = full.inverse().expect("complement completes a basis");
            projections.push(inv.block(s.cols(), 0, c.cols(), self.dims[v]));
            sections.push(c);
        }
        let action = self
            .algebra
            .arrows()
            .iter()
            .zip(&self.action)
            .map(|(a, m)| projections[a.target].mul(m).mul(&sections[a.source]))
            .collect();
        let dims = sections.iter().map(Mat::cols).collect();
        let q = Module::new_unchecked(self.algebra.clone(), dims, action)?;
        Ok((q, sections, projections))
    }

    /// Whether the columns of `basis[v]` span a submodule.
    pub fn is_submodule(&self, basis: &[Mat]) -> bool {
        self.submodule(basis).is_ok()
    }

    /// Per-vertex bases of `M * span(paths)`, the subspace reached by the given basis paths.
    pub fn span_of_paths(&self, paths: &[usize]) -> Vec<Mat> {
        let f = self.field();
        let actions = self.path_actions();
        let mut cols: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); self.dims.len()];
        for &i in paths {
            let b = &self.algebra.basis()[i];
            cols[b.target].extend(actions[i].columns());
        }
        cols.into_iter()
            .enumerate()
            .map(|(v, c)| {
                let m = Mat::from_cols(f, self.dims[v], &c);
                if m.cols() == 0 {
                    m
                } else {
                    m.column_space()
                }
            })
            .collect()
    }

    /// `M * R_{>=t}`.
    pub fn degree_filtration(&self, t: i64) -> Vec<Mat> {
        self.span_of_paths(&self.algebra.degree_at_least(t))
    }

    /// `max { j : M * R_j != 0 }`; `None` for the zero module.
    pub fn reach(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let d = self.algebra.max_degree();
        (0..=d.max(0))
            .rev()
            .find(|&j| {
                self.span_of_paths(&self.algebra.homogeneous_component(j))
                    .iter()
                    .any(|m| m.cols() > 0)
            })
    }

    /// Splits a global vector into per-vertex pieces.
    pub fn split_vector(&self, x: &[Scalar]) -> Vec<Vec<Scalar>> {
        (0..self.dims.len())
            .map(|v| x[self.vertex_range(v)].to_vec())
            .collect()
    }
}

/// A graded module: an underlying [`Module`] together with a degree for every basis vector.
/// Within each vertex the basis is sorted by degree, and every action matrix is homogeneous:
/// `rho(a)` maps degree `n` into degree `n + deg(a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedModule {
    module: Module,
    degrees: Vec<Vec<i64>>,
}

impl GradedModule {
    pub fn new(module: Module, degrees: Vec<Vec<i64>>) -> Result<Self> {
        if degrees.len() != module.dims().len()
            || degrees.iter().zip(module.dims()).any(|(d, &n)| d.len() != n)
        {
            return Err(Error::ShapeMismatch("degree labels do not match dimensions".into()));
        }
        if degrees.iter().any(|d| d.windows(2).any(|w| w[0] > w[1])) {
            return Err(Error::InvalidArgument("degree labels must be sorted per vertex".into()));
        }
        let g = GradedModule { module, degrees };
        g.check_homogeneous()?;
        Ok(g)
    }

    /// Builds from per-vertex `degree -> dim` maps and homogeneous blocks keyed by
    /// `(arrow, source degree)`. Missing blocks are zero.
    pub fn from_blocks(
        algebra: Arc<GradedAlgebra>,
        spaces: &[BTreeMap<i64, usize>],
        blocks: &BTreeMap<(usize, i64), Mat>,
    ) -> Result<Self> {
        let f = algebra.field();
        if spaces.len() != algebra.num_vertices() {
            return Err(Error::ShapeMismatch("one space map per vertex required".into()));
        }
        let degrees: Vec<Vec<i64>> = spaces
            .iter()
            .map(|m| m.iter().flat_map(|(&d, &n)| std::iter::repeat_n(d, n)).collect())
            .collect();
        let dims: Vec<usize> = degrees.iter().map(Vec::len).collect();
        let offset_of = |v: usize, deg: i64| -> usize {
            spaces[v].range(..deg).map(|(_, n)| n).sum()
        };
        for (&(arrow, n), _) in blocks.iter() {
            if arrow >= algebra.arrows().len() {
                return Err(Error::ShapeMismatch(format!("no arrow with index {arrow}")));
            }
            let a = &algebra.arrows()[arrow];
            if !spaces[a.source].contains_key(&n) {
                return Err(Error::InhomogeneousBlock {
                    arrow: a.name.clone(),
                    detail: format!("source vertex has no degree {n} piece"),
                });
            }
        }
        let mut action = Vec::new();
        for (ai, a) in algebra.arrows().iter().enumerate() {
            let mut m = Mat::zeros(f, dims[a.target], dims[a.source]);
            for (&n, &src_dim) in &spaces[a.source] {
                let Some(block) = blocks.get(&(ai, n)) else {
                    continue;
                };
                let tgt_deg = n + a.degree;
                let tgt_dim = spaces[a.target].get(&tgt_deg).copied().unwrap_or(0);
                if block.shape() != (tgt_dim, src_dim) {
                    if tgt_dim == 0 && !block.is_zero() {
                        return Err(Error::InhomogeneousBlock {
                            arrow: a.name.clone(),
                            detail: format!(
                                "block at degree {n} must land in degree {tgt_deg}, which is empty"
                            ),
                        });
                    }
                    if tgt_dim == 0 {
                        continue;
                    }
                    return Err(Error::ShapeMismatch(format!(
                        "block {}.{n} must be {tgt_dim}x{src_dim}, got {}x{}",
                        a.name,
                        block.rows(),
                        block.cols()
                    )));
                }
                m.put_block(offset_of(a.target, tgt_deg), offset_of(a.source, n), block);
            }
            action.push(m);
        }
        let module = Module::new(algebra, dims, action)?;
        GradedModule::new(module, degrees)
    }

    /// The graded simple at vertex `v` in degree `n`.
    pub fn simple(algebra: Arc<GradedAlgebra>, v: usize, n: i64) -> Self {
        let m = Module::simple(algebra, v);
        let mut degrees = vec![vec![]; m.dims().len()];
        degrees[v] = vec![n];
        GradedModule { module: m, degrees }
    }

    pub fn zero(algebra: Arc<GradedAlgebra>) -> Self {
        let m = Module::zero(algebra);
        let degrees = vec![vec![]; m.dims().len()];
        GradedModule { module: m, degrees }
    }

    pub fn check_homogeneous(&self) -> Result<()> {
        let alg = self.module.algebra();
        for (ai, a) in alg.arrows().iter().enumerate() {
            let m = self.module.action(ai);
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    if m.get(r, c).is_zero() {
                        continue;
                    }
                    let (ds, dt) = (self.degrees[a.source][c], self.degrees[a.target][r]);
                    if dt != ds + a.degree {
                        return Err(Error::InhomogeneousBlock {
                            arrow: a.name.clone(),
                            detail: format!(
                                "maps degree {ds} to degree {dt}, expected {}",
                                ds + a.degree
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn into_module(self) -> Module {
        self.module
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        self.module.algebra()
    }

    pub fn field(&self) -> FieldSpec {
        self.module.field()
    }

    pub fn degrees(&self) -> &[Vec<i64>] {
        &self.degrees
    }

    pub fn total_dim(&self) -> usize {
        self.module.total_dim()
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }

    /// Degree of every global basis vector.
    pub fn global_degrees(&self) -> Vec<i64> {
        self.degrees.iter().flatten().copied().collect()
    }

    /// `(min, max)` of the nonzero degrees.
    pub fn support(&self) -> Option<(i64, i64)> {
        let g = self.global_degrees();
        Some((*g.iter().min()?, *g.iter().max()?))
    }

    /// Graded length; zero for the zero module.
    pub fn graded_length(&self) -> i64 {
        self.support().map_or(0, |(lo, hi)| hi - lo + 1)
    }

    pub fn dim_at(&self, v: usize, n: i64) -> usize {
        self.degrees[v].iter().filter(|&&d| d == n).count()
    }

    /// Total dimension in each degree.
    pub fn degree_dims(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for d in self.global_degrees() {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }

    /// `M[i]`: content of degree `n` moves to degree `n - i`.
    pub fn shift(&self, i: i64) -> GradedModule {
        GradedModule {
            module: self.module.clone(),
            degrees: self
                .degrees
                .iter()
                .map(|d| d.iter().map(|x| x - i).collect())
                .collect(),
        }
    }

    /// Shifted so that the lowest degree is 0.
    pub fn normalized(&self) -> GradedModule {
        match self.support() {
            Some((lo, _)) => self.shift(lo),
            None => self.clone(),
        }
    }

    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule> {
        Ok(self.direct_sum_with_maps(other)?.0)
    }

    /// The direct sum together with the inclusions and projections of both summands.
    /// Bases are interleaved so that each vertex stays sorted by degree.
    pub fn direct_sum_with_maps(
        &self,
        other: &GradedModule,
    ) -> Result<(GradedModule, [ModuleMap; 2], [ModuleMap; 2])> {
        let sum = self.module.direct_sum(&other.module)?;
        let f = self.field();
        let mut perms = Vec::new();
        let mut degrees = Vec::new();
        for v in 0..self.degrees.len() {
            let mut labelled: Vec<(i64, usize)> = self.degrees[v]
                .iter()
                .chain(&other.degrees[v])
                .copied()
                .enumerate()
                .map(|(i, d)| (d, i))
                .collect();
            labelled.sort();
            degrees.push(labelled.iter().map(|x| x.0).collect::<Vec<_>>());
            perms.push(labelled.iter().map(|x| x.1).collect::<Vec<_>>());
        }
        let p: Vec<Mat> = perms
            .iter()
            .map(|perm| {
                let n = perm.len();
                let mut m = Mat::zeros(f, n, n);
                for (new, &old) in perm.iter().enumerate() {
                    m.set(old, new, f.one());
                }
                m
            })
            .collect();
        let module = sum.base_change(&p)?;
        // new coordinates = P^T * old coordinates
        let mut incl = [Vec::new(), Vec::new()];
        let mut proj = [Vec::new(), Vec::new()];
        for v in 0..self.degrees.len() {
            let (a, b) = (self.module.dims()[v], other.module.dims()[v]);
            let pt = p[v].transpose();
            incl[0].push(pt.select_cols(&(0..a).collect::<Vec<_>>()));
            incl[1].push(pt.select_cols(&(a..a + b).collect::<Vec<_>>()));
            proj[0].push(p[v].select_rows(&(0..a).collect::<Vec<_>>()));
            proj[1].push(p[v].select_rows(&(a..a + b).collect::<Vec<_>>()));
        }
        let [i0, i1] = incl;
        let [p0, p1] = proj;
        Ok((
            GradedModule { module, degrees },
            [ModuleMap { blocks: i0 }, ModuleMap { blocks: i1 }],
            [ModuleMap { blocks: p0 }, ModuleMap { blocks: p1 }],
        ))
    }

    /// Index ranges (within each vertex) of the homogeneous pieces, keyed by degree.
    pub fn vertex_degree_ranges(&self, v: usize) -> Vec<(i64, Range<usize>)> {
        let mut out: Vec<(i64, Range<usize>)> = Vec::new();
        for (i, &d) in self.degrees[v].iter().enumerate() {
            match out.last_mut() {
                Some((deg, r)) if *deg == d => r.end = i + 1,
                _ => out.push((d, i..i + 1)),
            }
        }
        out
    }

    /// Global index ranges of all `(vertex, degree)` pieces.
    pub fn global_blocks(&self) -> Vec<Range<usize>> {
        let offs = self.module.offsets();
        let mut out = Vec::new();
        for v in 0..self.degrees.len() {
            for (_, r) in self.vertex_degree_ranges(v) {
                out.push(offs[v] + r.start..offs[v] + r.end);
            }
        }
        out
    }

    /// Graded submodule spanned by the columns of `basis[v]`, each homogeneous of degree
    /// `labels[v][j]`.
    pub fn graded_submodule(&self, basis: &[Mat], labels: &[Vec<i64>]) -> Result<GradedModule> {
        let mut sorted_basis = Vec::new();
        let mut sorted_labels = Vec::new();
        for (v, (b, l)) in basis.iter().zip(labels).enumerate() {
            for (j, &deg) in l.iter().enumerate() {
                for (i, &d) in self.degrees[v].iter().enumerate() {
                    if d != deg && !b.get(i, j).is_zero() {
                        return Err(Error::InvalidArgument(
                            "submodule basis vector is not homogeneous".into(),
                        ));
                    }
                }
            }
            let mut order: Vec<usize> = (0..l.len()).collect();
            order.sort_by_key(|&j| l[j]);
            sorted_basis.push(b.select_cols(&order));
            sorted_labels.push(order.iter().map(|&j| l[j]).collect::<Vec<_>>());
        }
        let module = self.module.submodule(&sorted_basis)?;
        Ok(GradedModule {
            module,
            degrees: sorted_labels,
        })
    }
}

/// Per-vertex ranges to treat as independent blocks: vertices for ungraded modules,
/// `(vertex, degree)` pieces for graded ones.
pub(crate) fn blocks_of(module: &Module, degrees: Option<&[Vec<i64>]>) -> Vec<(usize, Range<usize>)> {
    let offs = module.offsets();
    match degrees {
        None => (0..module.dims().len())
            .map(|v| (v, offs[v]..offs[v] + module.dims()[v]))
            .collect(),
        Some(deg) => {
            let mut out = Vec::new();
            for (v, labels) in deg.iter().enumerate() {
                let mut i = 0;
                while i < labels.len() {
                    let mut j = i;
                    while j < labels.len() && labels[j] == labels[i] {
                        j += 1;
                    }
                    out.push((v, offs[v] + i..offs[v] + j));
                    i = j;
                }
            }
            out
        }
    }
}

/// Scalars of a column vector, convenience for tests and callers.
pub fn vector(field: FieldSpec, entries: &[i64]) -> Vec<Scalar> {
    entries.iter().map(|&v| field.from_i64(v)).collect()
}
