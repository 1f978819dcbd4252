use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::endo::{EndRing, MatrixAlgebra, Split};
use super::hom::{hom, hom_graded, HomSpace, ModuleMap};
use super::module::{blocks_of, GradedModule, Module};
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Mat, Scalar};

pub const DEFAULT_SEED: u64 = 0x6772_6164;

/// Common interface of [`Module`] and [`GradedModule`] for decomposition and isomorphism
/// testing. For graded modules all maps are homogeneous of degree zero.
pub trait Representation: Clone + std::fmt::Debug {
    fn module(&self) -> &Module;
    fn labels(&self) -> Option<&[Vec<i64>]>;
    fn homs(&self, other: &Self) -> Result<HomSpace>;
    /// The submodule spanned by per-vertex columns, each with the given degree label.
    fn restrict(&self, basis: &[Mat], labels: &[Vec<i64>]) -> Result<Self>;
    /// Cheap invariants that isomorphic objects share.
    fn signature(&self) -> Vec<i64>;
}

impl Representation for Module {
    fn module(&self) -> &Module {
        self
    }
    fn labels(&self) -> Option<&[Vec<i64>]> {
        None
    }
    fn homs(&self, other: &Self) -> Result<HomSpace> {
        hom(self, other)
    }
    fn restrict(&self, basis: &[Mat], _labels: &[Vec<i64>]) -> Result<Self> {
        self.submodule(basis)
    }
    fn signature(&self) -> Vec<i64> {
        self.dims().iter().map(|&d| d as i64).collect()
    }
}

impl Representation for GradedModule {
    fn module(&self) -> &Module {
        GradedModule::module(self)
    }
    fn labels(&self) -> Option<&[Vec<i64>]> {
        Some(self.degrees())
    }
    fn homs(&self, other: &Self) -> Result<HomSpace> {
        hom_graded(self, other, 0)
    }
    fn restrict(&self, basis: &[Mat], labels: &[Vec<i64>]) -> Result<Self> {
        self.graded_submodule(basis, labels)
    }
    fn signature(&self) -> Vec<i64> {
        self.degrees().iter().flat_map(|d| d.iter().copied().chain([i64::MIN])).collect()
    }
}

/// The endomorphism ring (degree-zero endomorphisms for graded modules).
pub fn end_ring<T: Representation>(m: &T) -> Result<EndRing> {
    Ok(EndRing::from_space(m.homs(m)?, DEFAULT_SEED))
}

/// One indecomposable summand with maps realizing it inside the module.
#[derive(Debug, Clone)]
pub struct Summand<T> {
    pub module: T,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
    /// Index into [`DecompositionReport::classes`].
    pub class: usize,
    pub certified: bool,
}

#[derive(Debug, Clone)]
pub struct DecompositionReport<T> {
    pub summands: Vec<Summand<T>>,
    /// Iso-class representatives with multiplicities.
    pub classes: Vec<(T, usize)>,
}

impl<T: Representation> DecompositionReport<T> {
    pub fn num_summands(&self) -> usize {
        self.summands.len()
    }

    pub fn is_indecomposable(&self) -> bool {
        self.summands.len() == 1
    }

    /// Whether every locality claim is backed by an exact argument.
    pub fn certified(&self) -> bool {
        self.summands.iter().all(|s| s.certified)
    }

    /// `proj_i ∘ incl_j = δ_ij` and `Σ incl_i ∘ proj_i = id`.
    pub fn verify(&self, m: &T) -> bool {
        let mm = m.module();
        let mut total = ModuleMap::zero(mm, mm);
        for (i, si) in self.summands.iter().enumerate() {
            if !si.inclusion.is_homomorphism(si.module.module(), mm)
                || !si.projection.is_homomorphism(mm, si.module.module())
            {
                return false;
            }
            for (j, sj) in self.summands.iter().enumerate() {
                let c = si.projection.compose(&sj.inclusion);
                if (i == j && !c.is_identity()) || (i != j && !c.is_zero()) {
                    return false;
                }
            }
            total = total.add(&si.inclusion.compose(&si.projection));
        }
        total.is_identity()
    }
}

struct Piece<T> {
    module: T,
    inclusion: ModuleMap,
    projection: ModuleMap,
    certified: bool,
}

pub fn decompose<T: Representation>(m: &T) -> Result<DecompositionReport<T>> {
    decompose_seeded(m, DEFAULT_SEED)
}

/// Krull–Schmidt decomposition by Fitting splitting along endomorphisms whose minimal
/// polynomial has coprime factors.
pub fn decompose_seeded<T: Representation>(m: &T, seed: u64) -> Result<DecompositionReport<T>> {
    let mut pieces = Vec::new();
    split_rec(m, ModuleMap::identity(m.module()), ModuleMap::identity(m.module()), seed, &mut pieces)?;
    let mut classes: Vec<(T, usize)> = Vec::new();
    let mut summands = Vec::new();
    for p in pieces {
        let mut class = None;
        for (ci, (rep, count)) in classes.iter_mut().enumerate() {
            if iso_indecomposable(rep, &p.module)?.is_some() {
                *count += 1;
                class = Some(ci);
                break;
            }
        }
        let class = class.unwrap_or_else(|| {
            classes.push((p.module.clone(), 1));
            classes.len() - 1
        });
        summands.push(Summand {
            module: p.module,
            inclusion: p.inclusion,
            projection: p.projection,
            class,
            certified: p.certified,
        });
    }
    Ok(DecompositionReport { summands, classes })
}

fn split_rec<T: Representation>(
    m: &T,
    incl: ModuleMap,
    proj: ModuleMap,
    seed: u64,
    out: &mut Vec<Piece<T>>,
) -> Result<()> {
    let module = m.module();
    if module.is_zero() {
        return Ok(());
    }
    let space = m.homs(m)?;
    let alg = MatrixAlgebra::from_hom(&space);
    let rad = alg.radical();
    let (x, g, h) = match alg.find_split(&rad, seed) {
        Split::Local { certified } => {
            out.push(Piece {
                module: m.clone(),
                inclusion: incl,
                projection: proj,
                certified,
            });
            return Ok(());
        }
        Split::Element { x, g, h } => (x, g, h),
    };
    let blocks = blocks_of(module, m.labels());
    let f = module.field();
    let mut parts = Vec::new();
    for poly in [&g, &h] {
        let px = poly.eval_mat(&x);
        let mut basis: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); module.dims().len()];
        let mut labels: Vec<Vec<i64>> = vec![Vec::new(); module.dims().len()];
        for (v, range) in &blocks {
            let idx: Vec<usize> = range.clone().collect();
            let sub = px.select_rows(&idx).select_cols(&idx);
            let start = range.start - module.vertex_range(*v).start;
            let deg = m.labels().map_or(0, |l| l[*v][start]);
            for col in sub.kernel().columns() {
                let mut full = vec![f.zero(); module.dims()[*v]];
                for (i, c) in col.into_iter().enumerate() {
                    full[start + i] = c;
                }
                basis[*v].push(full);
                labels[*v].push(deg);
            }
        }
        let mats: Vec<Mat> = basis
            .iter()
            .enumerate()
            .map(|(v, cols)| Mat::from_cols(f, module.dims()[v], cols))
            .collect();
        parts.push((mats, labels));
    }
    // projections from the inverse of [K_g | K_h] at each vertex
    let mut proj_parts: Vec<Vec<Mat>> = vec![Vec::new(), Vec::new()];
    for v in 0..module.dims().len() {
        let (a, b) = (&parts[0].0[v], &parts[1].0[v]);
        let inv = a
            .hstack(b)
            .inverse()
            .ok_or_else(|| Error::InvalidArgument("Fitting pieces do not span".into()))?;
        proj_parts[0].push(inv.block(0, 0, a.cols(), module.dims()[v]));
        proj_parts[1].push(inv.block(a.cols(), 0, b.cols(), module.dims()[v]));
    }
    for (k, (mats, labels)) in parts.into_iter().enumerate() {
        let piece = m.restrict(&mats, &labels)?;
        let i = ModuleMap { blocks: mats };
        let p = ModuleMap {
            blocks: proj_parts[k].clone(),
        };
        split_rec(
            &piece,
            incl.compose(&i),
            p.compose(&proj),
            seed.wrapping_add(1),
            out,
        )?;
    }
    Ok(())
}

/// Isomorphism of two modules known to be indecomposable: some basis element of
/// `Hom(M, N)` is invertible exactly when `M ≅ N`, because the non-isomorphisms form the
/// proper subspace `φ ∘ rad End(M)`.
pub fn iso_indecomposable<T: Representation>(m: &T, n: &T) -> Result<Option<ModuleMap>> {
    if m.signature() != n.signature() {
        return Ok(None);
    }
    let space = m.homs(n)?;
    Ok(space.basis.into_iter().find(ModuleMap::is_invertible))
}

/// An isomorphism `M -> N` if one exists.
pub fn is_isomorphic<T: Representation>(m: &T, n: &T) -> Result<Option<ModuleMap>> {
    m.module().same_algebra(n.module())?;
    if m.signature() != n.signature() {
        return Ok(None);
    }
    if m.module().is_zero() {
        return Ok(Some(ModuleMap::identity(m.module())));
    }
    let space = m.homs(n)?;
    if space.dim() == 0 {
        return Ok(None);
    }
    if let Some(f) = space.basis.iter().find(|f| f.is_invertible()) {
        return Ok(Some(f.clone()));
    }
    let field = m.module().field();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for _ in 0..16 {
        let coeffs = random_coeffs(field, space.dim(), &mut rng);
        let f = space.combination(&coeffs);
        if f.is_invertible() {
            return Ok(Some(f));
        }
    }
    // exact fallback: match indecomposable summands
    let dm = decompose(m)?;
    let dn = decompose(n)?;
    if dm.summands.len() != dn.summands.len() {
        return Ok(None);
    }
    let mut used = vec![false; dn.summands.len()];
    let mut total = ModuleMap::zero(m.module(), n.module());
    for sm in &dm.summands {
        let mut found = false;
        for (j, sn) in dn.summands.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(phi) = iso_indecomposable(&sm.module, &sn.module)? {
                used[j] = true;
                found = true;
                total = total.add(&sn.inclusion.compose(&phi).compose(&sm.projection));
                break;
            }
        }
        if !found {
            return Ok(None);
        }
    }
    debug_assert!(total.is_invertible() && total.is_homomorphism(m.module(), n.module()));
    Ok(Some(total))
}

pub(crate) fn random_coeffs(field: FieldSpec, k: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..k)
        .map(|_| match field {
            FieldSpec::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
            FieldSpec::Rationals => field.from_i64(rng.gen_range(-5..=5)),
        })
        .collect()
}
