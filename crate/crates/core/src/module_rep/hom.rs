use super::module::{GradedModule, Module};
use crate::error::Result;
use crate::exactla::{FieldSpec, Mat, Scalar};

/// A module homomorphism given by one matrix per vertex (`dim N_v x dim M_v`).
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleMap {
    pub blocks: Vec<Mat>,
}

impl ModuleMap {
    pub fn identity(m: &Module) -> Self {
        ModuleMap {
            blocks: m.dims().iter().map(|&d| Mat::identity(m.field(), d)).collect(),
        }
    }

    pub fn zero(source: &Module, target: &Module) -> Self {
        ModuleMap {
            blocks: source
                .dims()
                .iter()
                .zip(target.dims())
                .map(|(&s, &t)| Mat::zeros(source.field(), t, s))
                .collect(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.blocks[0].field()
    }

    pub fn source_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Mat::cols).collect()
    }

    pub fn target_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Mat::rows).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> ModuleMap {
        ModuleMap {
            blocks: self.blocks.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Mat::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(Mat::is_identity)
    }

    pub fn is_invertible(&self) -> bool {
        self.blocks.iter().all(Mat::is_invertible)
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        Some(ModuleMap {
            blocks: self.blocks.iter().map(Mat::inverse).collect::<Option<Vec<_>>>()?,
        })
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(Mat::rank).sum()
    }

    /// Block-diagonal matrix on the total spaces.
    pub fn global(&self) -> Mat {
        let f = self.field();
        let rows: usize = self.blocks.iter().map(Mat::rows).sum();
        let cols: usize = self.blocks.iter().map(Mat::cols).sum();
        let mut out = Mat::zeros(f, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in &self.blocks {
            out.put_block(r, c, b);
            r += b.rows();
            c += b.cols();
        }
        out
    }

    /// Inverse of [`ModuleMap::global`] for block-diagonal matrices.
    pub fn from_global(g: &Mat, source_dims: &[usize], target_dims: &[usize]) -> ModuleMap {
        let (mut r, mut c) = (0, 0);
        let mut blocks = Vec::new();
        for (&s, &t) in source_dims.iter().zip(target_dims) {
            blocks.push(g.block(r, c, t, s));
            r += t;
            c += s;
        }
        ModuleMap { blocks }
    }

    /// Checks `f_w rho_M(a) = rho_N(a) f_v` for every arrow.
    pub fn is_homomorphism(&self, source: &Module, target: &Module) -> bool {
        source.algebra().arrows().iter().enumerate().all(|(i, a)| {
            self.blocks[a.target].mul(source.action(i))
                == target.action(i).mul(&self.blocks[a.source])
        })
    }

    pub fn kernel(&self) -> Vec<Mat> {
        self.blocks.iter().map(Mat::kernel).collect()
    }

    pub fn image(&self) -> Vec<Mat> {
        self.blocks
            .iter()
            .map(|b| {
                if b.cols() == 0 {
                    Mat::zeros(b.field(), b.rows(), 0)
                } else {
                    b.column_space()
                }
            })
            .collect()
    }
}

/// A basis of homomorphisms between two modules.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub field: FieldSpec,
    pub source_dims: Vec<usize>,
    pub target_dims: Vec<usize>,
    pub basis: Vec<ModuleMap>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `Σ c_i f_i`.
    pub fn combination(&self, coeffs: &[Scalar]) -> ModuleMap {
        let mut out = ModuleMap {
            blocks: self
                .source_dims
                .iter()
                .zip(&self.target_dims)
                .map(|(&s, &t)| Mat::zeros(self.field, t, s))
                .collect(),
        };
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&b.scale(c));
            }
        }
        out
    }
}

/// Solves the intertwining system with unknowns restricted by `allowed(v, row, col)`.
fn solve_hom(m: &Module, n: &Module, allowed: impl Fn(usize, usize, usize) -> bool) -> Result<HomSpace> {
    m.same_algebra(n)?;
    let f = m.field();
    let nv = m.dims().len();
    // unknown index for each allowed entry
    let mut index = Vec::with_capacity(nv);
    let mut count = 0usize;
    for v in 0..nv {
        let mut idx = vec![vec![None; m.dims()[v]]; n.dims()[v]];
        for (r, row) in idx.iter_mut().enumerate() {
            for (c, slot) in row.iter_mut().enumerate() {
                if allowed(v, r, c) {
                    *slot = Some(count);
                    count += 1;
                }
            }
        }
        index.push(idx);
    }
    let mut equations: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for (ai, a) in m.algebra().arrows().iter().enumerate() {
        let (v, w) = (a.source, a.target);
        let rm = m.action(ai);
        let rn = n.action(ai);
        // (f_w rho_M(a) - rho_N(a) f_v)[r][c] = 0
        for r in 0..n.dims()[w] {
            for c in 0..m.dims()[v] {
                let mut eq = Vec::new();
                for s in 0..m.dims()[w] {
                    if let Some(u) = index[w][r][s] {
                        let coef = rm.get(s, c);
                        if !coef.is_zero() {
                            eq.push((u, coef.clone()));
                        }
                    }
                }
                for t in 0..n.dims()[v] {
                    if let Some(u) = index[v][t][c] {
                        let coef = rn.get(r, t);
                        if !coef.is_zero() {
                            eq.push((u, -coef.clone()));
                        }
                    }
                }
                if !eq.is_empty() {
                    equations.push(eq);
                }
            }
        }
    }
    let mut sys = Mat::zeros(f, equations.len(), count);
    for (i, eq) in equations.iter().enumerate() {
        for (u, c) in eq {
            let cur = sys.get(i, *u).clone();
            sys.set(i, *u, &cur + c);
        }
    }
    let kernel = sys.kernel();
    let basis = (0..kernel.cols())
        .map(|k| ModuleMap {
            blocks: (0..nv)
                .map(|v| {
                    let mut b = Mat::zeros(f, n.dims()[v], m.dims()[v]);
                    for (r, row) in index[v].iter().enumerate() {
                        for (c, slot) in row.iter().enumerate() {
                            if let Some(u) = slot {
                                b.set(r, c, kernel.get(*u, k).clone());
                            }
                        }
                    }
                    b
                })
                .collect(),
        })
        .collect();
    Ok(HomSpace {
        field: f,
        source_dims: m.dims().to_vec(),
        target_dims: n.dims().to_vec(),
        basis,
    })
}

/// All module homomorphisms `M -> N`.
pub fn hom(m: &Module, n: &Module) -> Result<HomSpace> {
    solve_hom(m, n, |_, _, _| true)
}

/// Homogeneous maps of degree `k`: `M_i -> N_{i+k}`. Degree 0 gives the morphisms of the
/// graded category; degree `k` maps are degree-0 maps `M -> N[k]`.
pub fn hom_graded(m: &GradedModule, n: &GradedModule, k: i64) -> Result<HomSpace> {
    let (dm, dn) = (m.degrees(), n.degrees());
    solve_hom(m.module(), n.module(), |v, r, c| dn[v][r] == dm[v][c] + k)
}

/// The degrees `k` for which a degree-`k` map `M -> N` can be nonzero.
pub fn possible_degrees(m: &GradedModule, n: &GradedModule) -> Vec<i64> {
    let mut ks: Vec<i64> = Vec::new();
    for (dm, dn) in m.degrees().iter().zip(n.degrees()) {
        for &a in dm {
            for &b in dn {
                ks.push(b - a);
            }
        }
    }
    ks.sort();
    ks.dedup();
    ks
}

/// Finds `h = Σ c_i basis_i` with `compose(h) = goal`, where `compose` is linear in `h`.
pub fn solve_in_span(
    space: &HomSpace,
    goal: &ModuleMap,
    compose: impl Fn(&ModuleMap) -> ModuleMap,
) -> Option<ModuleMap> {
    let target = goal.global().flatten();
    if space.dim() == 0 {
        return target.iter().all(Scalar::is_zero).then(|| space.combination(&[]));
    }
    let cols: Vec<Vec<Scalar>> = space.basis.iter().map(|b| compose(b).global().flatten()).collect();
    let sys = Mat::from_cols(space.field, target.len(), &cols);
    let c = sys.solve_vec(&target)?;
    Some(space.combination(&c))
}

/// A homomorphism `r` with `r ∘ f = id` when `f: M -> N` is a split monomorphism.
pub fn retraction(f: &ModuleMap, m: &Module, n: &Module) -> Result<Option<ModuleMap>> {
    let space = hom(n, m)?;
    Ok(solve_in_span(&space, &ModuleMap::identity(m), |r| r.compose(f)))
}

/// A homomorphism `s` with `f ∘ s = id` when `f: M -> N` is a split epimorphism.
pub fn section(f: &ModuleMap, m: &Module, n: &Module) -> Result<Option<ModuleMap>> {
    let space = hom(n, m)?;
    Ok(solve_in_span(&space, &ModuleMap::identity(n), |s| f.compose(s)))
}
