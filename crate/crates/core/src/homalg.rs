//! Graded projective covers, syzygies, minimal presentations and the transpose.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;
use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::exactla::{Mat, Scalar};
use crate::gradability::{decide, Budget, GradabilityVerdict};
use crate::module_rep::{blocks_of, GradedModule, Module, ModuleMap};

/// `⊕ e_v R[-s]`, one summand per generator `(v, s)`.
#[derive(Debug, Clone)]
pub struct GradedProjective {
    generators: Vec<(usize, i64)>,
    /// Per vertex: `(generator, basis path)` for each basis vector, sorted by degree.
    layout: Vec<Vec<(usize, usize)>>,
    module: GradedModule,
}

impl GradedProjective {
    pub fn new(alg: &Arc<GradedAlgebra>, generators: Vec<(usize, i64)>) -> Result<Self> {
        let f = alg.field();
        let nv = alg.num_vertices();
        let basis = alg.basis();
        let mut layout: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        for (g, &(v, _)) in generators.iter().enumerate() {
            for (p, b) in basis.iter().enumerate() {
                if b.source == v {
                    layout[b.target].push((g, p));
                }
            }
        }
        let degree = |g: usize, p: usize| basis[p].degree + generators[g].1;
        for l in &mut layout {
            l.sort_by_key(|&(g, p)| (degree(g, p), g, p));
        }
        let position: Vec<HashMap<(usize, usize), usize>> = layout
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, &k)| (k, i)).collect())
            .collect();
        let mut action = Vec::new();
        for (ai, a) in alg.arrows().iter().enumerate() {
            let arrow = alg.arrow_element(ai);
            let mut m = Mat::zeros(f, layout[a.target].len(), layout[a.source].len());
            for (col, &(g, p)) in layout[a.source].iter().enumerate() {
                let prod = alg.mul(&alg.basis_element(p), &arrow);
                for (q, c) in prod.iter().enumerate() {
                    if !c.is_zero() {
                        m.set(position[a.target][&(g, q)], col, c.clone());
                    }
                }
            }
            action.push(m);
        }
        let dims = layout.iter().map(Vec::len).collect();
        let degrees = layout
            .iter()
            .map(|l| l.iter().map(|&(g, p)| degree(g, p)).collect())
            .collect();
        let module = GradedModule::new(Module::new(alg.clone(), dims, action)?, degrees)?;
        Ok(GradedProjective {
            generators,
            layout,
            module,
        })
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn generators(&self) -> &[(usize, i64)] {
        &self.generators
    }

    /// Summands `(vertex, shift, multiplicity)`.
    pub fn summands(&self) -> Vec<(usize, i64, usize)> {
        let mut count: BTreeMap<(usize, i64), usize> = BTreeMap::new();
        for &g in &self.generators {
            *count.entry(g).or_default() += 1;
        }
        count.into_iter().map(|((v, s), m)| (v, s, m)).collect()
    }

    /// The generator `g` as a vector at its vertex.
    pub fn generator_vector(&self, g: usize) -> Vec<Scalar> {
        let alg = self.module.algebra();
        let v = self.generators[g].0;
        let e = alg.idempotent_index(v);
        let mut x = vec![alg.field().zero(); self.layout[v].len()];
        let i = self.layout[v].iter().position(|&k| k == (g, e)).expect("generator present");
        x[i] = alg.field().one();
        x
    }

    /// The map sending generator `g` to `images[g]` (a vector at its vertex in `target`).
    pub fn map_to(&self, target: &Module, images: &[Vec<Scalar>]) -> ModuleMap {
        let f = target.field();
        let paths = target.path_actions();
        let blocks = self
            .layout
            .iter()
            .enumerate()
            .map(|(w, l)| {
                let cols: Vec<Vec<Scalar>> = l.iter().map(|&(g, p)| paths[p].mul_vec(&images[g])).collect();
                Mat::from_cols(f, target.dims()[w], &cols)
            })
            .collect();
        ModuleMap { blocks }
    }

    /// Coefficients of a vector at vertex `w` as algebra elements, one per generator.
    pub(crate) fn components(&self, w: usize, x: &[Scalar]) -> Vec<Vec<Scalar>> {
        let alg = self.module.algebra();
        let mut out = vec![alg.zero_element(); self.generators.len()];
        for (i, &(g, p)) in self.layout[w].iter().enumerate() {
            out[g][p] = x[i].clone();
        }
        out
    }
}

/// Blocks of [`blocks_of`] with ranges local to each vertex space.
fn local_blocks(m: &Module, degrees: Option<&[Vec<i64>]>) -> Vec<(usize, Range<usize>)> {
    let offs = m.offsets();
    blocks_of(m, degrees)
        .into_iter()
        .map(|(v, r)| (v, r.start - offs[v]..r.end - offs[v]))
        .collect()
}

/// Minimal generators `(vertex, degree, vector)` from a basis of the top `M / MJ`.
fn top_generators(m: &Module, degrees: Option<&[Vec<i64>]>) -> Vec<(usize, i64, Vec<Scalar>)> {
    let f = m.field();
    let rad = m.span_of_paths(&m.algebra().radical_basis());
    let mut current = rad;
    let mut out = Vec::new();
    for (v, range) in local_blocks(m, degrees) {
        let deg = degrees.map_or(0, |d| d[v][range.start]);
        for j in range {
            let mut e = vec![f.zero(); m.dims()[v]];
            e[j] = f.one();
            let cand = current[v].hstack(&Mat::from_cols(f, m.dims()[v], &[e.clone()]));
            if cand.rank() > current[v].rank() {
                current[v] = cand;
                out.push((v, deg, e));
            }
        }
    }
    out
}

fn cover_of(m: &Module, degrees: Option<&[Vec<i64>]>) -> Result<(GradedProjective, ModuleMap)> {
    let gens = top_generators(m, degrees);
    let p = GradedProjective::new(m.algebra(), gens.iter().map(|(v, s, _)| (*v, *s)).collect())?;
    let images: Vec<Vec<Scalar>> = gens.into_iter().map(|(_, _, x)| x).collect();
    let cover = p.map_to(m, &images);
    Ok((p, cover))
}

/// Kernel of `map: P -> M`, with homogeneous basis vectors when `graded`.
fn kernel_of(map: &ModuleMap, p: &GradedModule, graded: bool) -> (Vec<Mat>, Vec<Vec<i64>>) {
    let f = p.field();
    let dims = p.module().dims();
    let mut cols: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); dims.len()];
    let mut labels: Vec<Vec<i64>> = vec![Vec::new(); dims.len()];
    let degrees = graded.then(|| p.degrees());
    for (v, range) in local_blocks(p.module(), degrees) {
        let idx: Vec<usize> = range.clone().collect();
        let k = map.blocks[v].select_cols(&idx).kernel();
        for c in k.columns() {
            let mut x = vec![f.zero(); dims[v]];
            for (i, val) in range.clone().zip(c) {
                x[i] = val;
            }
            cols[v].push(x);
            labels[v].push(p.degrees()[v][range.start]);
        }
    }
    let basis = cols.iter().enumerate().map(|(v, c)| Mat::from_cols(f, dims[v], c)).collect();
    (basis, labels)
}

/// `P₀ -> M` with `P₀` matching the top of `M` degree-wise.
pub fn projective_cover(m: &GradedModule) -> Result<(GradedProjective, ModuleMap)> {
    if m.is_zero() {
        return Err(Error::ZeroModule);
    }
    cover_of(m.module(), Some(m.degrees()))
}

/// The first syzygy `ΩM = ker(P₀ -> M)`.
pub fn syzygy(m: &GradedModule) -> Result<GradedModule> {
    let (p, cover) = projective_cover(m)?;
    let (basis, labels) = kernel_of(&cover, p.module(), true);
    p.module().graded_submodule(&basis, &labels)
}

/// `ΩM ⊆ [a - d, b + d]` for `M` concentrated in `[a, b]`.
pub fn syzygy_window_holds(m: &GradedModule) -> Result<bool> {
    let omega = syzygy(m)?;
    let (Some((a, b)), Some((lo, hi))) = (m.support(), omega.support()) else {
        return Ok(true);
    };
    let d = m.algebra().max_degree();
    Ok(a - d <= lo && hi <= b + d)
}

/// `P₁ -f-> P₀ -cover-> M -> 0`.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub p0: GradedProjective,
    pub p1: GradedProjective,
    pub cover: ModuleMap,
    pub f: ModuleMap,
}

impl Presentation {
    /// `r[g][h]`: the component on generator `g` of `P₀` of the image of generator `h` of `P₁`,
    /// so that `f(h) = Σ_g g · r[g][h]`.
    pub fn relation_matrix(&self) -> Vec<Vec<Vec<Scalar>>> {
        let alg = self.p0.module().algebra();
        let mut r = vec![vec![alg.zero_element(); self.p1.generators().len()]; self.p0.generators().len()];
        for (h, &(u, _)) in self.p1.generators().iter().enumerate() {
            let img = self.f.blocks[u].mul_vec(&self.p1.generator_vector(h));
            for (g, c) in self.p0.components(u, &img).into_iter().enumerate() {
                r[g][h] = c;
            }
        }
        r
    }

    /// Coefficients `c_g` with `x = cover(Σ_g g · c_g)` for a global vector `x` of `M`.
    pub fn lift(&self, m: &Module, x: &[Scalar]) -> Vec<Vec<Scalar>> {
        let alg = m.algebra();
        let parts = m.split_vector(x);
        let mut out = vec![alg.zero_element(); self.p0.generators().len()];
        for (w, xw) in parts.iter().enumerate() {
            let z = self.cover.blocks[w].solve_vec(xw).expect("cover is onto");
            for (g, c) in self.p0.components(w, &z).into_iter().enumerate() {
                for (o, v) in out[g].iter_mut().zip(c) {
                    *o = &*o + &v;
                }
            }
        }
        out
    }

    /// Whether the image of `f` lies in `P₀ J`.
    pub fn is_minimal(&self) -> bool {
        let p0 = self.p0.module().module();
        let rad = p0.span_of_paths(&p0.algebra().radical_basis());
        self.f
            .blocks
            .iter()
            .zip(&rad)
            .all(|(img, r)| r.hstack(img).rank() == r.rank())
    }

    pub fn is_exact(&self, m: &Module) -> bool {
        let onto = self.cover.blocks.iter().zip(m.dims()).all(|(c, &d)| c.rank() == d);
        let zero = self.cover.compose(&self.f).is_zero();
        let p0 = self.p0.module().module();
        let kernel_dim: usize = self
            .cover
            .blocks
            .iter()
            .zip(p0.dims())
            .map(|(c, &d)| d - c.rank())
            .sum();
        onto && zero && self.f.rank() == kernel_dim
    }
}

fn presentation_of(m: &Module, degrees: Option<&[Vec<i64>]>) -> Result<Presentation> {
    let (p0, cover) = cover_of(m, degrees)?;
    let graded = degrees.is_some();
    let (basis, labels) = kernel_of(&cover, p0.module(), graded);
    let omega = p0.module().module().submodule(&basis)?;
    let omega_degrees = if graded {
        Some(p0.module().graded_submodule(&basis, &labels)?)
    } else {
        None
    };
    // graded_submodule reorders columns by degree; keep the same basis for the inclusion
    let (k_basis, omega) = match &omega_degrees {
        Some(g) => {
            let sorted: Vec<Mat> = basis
                .iter()
                .zip(&labels)
                .map(|(b, l)| {
                    let mut order: Vec<usize> = (0..l.len()).collect();
                    order.sort_by_key(|&j| l[j]);
                    b.select_cols(&order)
                })
                .collect();
            (sorted, g.module().clone())
        }
        None => (basis, omega),
    };
    let (p1, c1) = cover_of(&omega, omega_degrees.as_ref().map(|g| g.degrees()))?;
    let inclusion = ModuleMap { blocks: k_basis };
    let f = inclusion.compose(&c1);
    Ok(Presentation { p0, p1, cover, f })
}

pub fn minimal_presentation(m: &GradedModule) -> Result<Presentation> {
    presentation_of(m.module(), Some(m.degrees()))
}

pub fn minimal_presentation_ungraded(m: &Module) -> Result<Presentation> {
    presentation_of(m, None)
}

/// `coker(f*: P₀* -> P₁*)` over the opposite algebra, using `(e_v R[-s])* = e_v R^op[s]`.
fn transpose_of(m: &Module, degrees: Option<&[Vec<i64>]>) -> Result<(Module, Vec<Vec<i64>>)> {
    let alg = m.algebra();
    let op = alg.opposite()?;
    let pres = presentation_of(m, degrees)?;
    let dual = |p: &GradedProjective| -> Result<GradedProjective> {
        GradedProjective::new(&op, p.generators().iter().map(|&(v, s)| (v, -s)).collect())
    };
    let p0d = dual(&pres.p0)?;
    let p1d = dual(&pres.p1)?;
    let r = pres.relation_matrix();
    let target = p1d.module().module();
    let mut images = Vec::new();
    for (g, &(v, _)) in pres.p0.generators().iter().enumerate() {
        // f*(g*) has h-component op(r[g][h]) at vertex v of P₁*
        let mut x = vec![alg.field().zero(); target.dims()[v]];
        for (h, rgh) in r[g].iter().enumerate() {
            let elem = alg.to_opposite(&op, rgh);
            let gen = p1d.generator_vector(h);
            // op(r) lies in e_u R^op e_v, so only paths u -> v contribute
            for (pa, c) in target.path_actions().iter().zip(&elem) {
                if c.is_zero() {
                    continue;
                }
                for (a, b) in x.iter_mut().zip(pa.mul_vec(&gen)) {
                    *a = &*a + &(c * &b);
                }
            }
        }
        images.push(x);
    }
    let fstar = p0d.map_to(target, &images);
    let sub: Vec<Mat> = fstar.blocks.iter().map(|b| b.column_space()).collect();
    let (q, sections, _) = target.quotient(&sub)?;
    let labels = sections
        .iter()
        .enumerate()
        .map(|(v, s)| {
            s.columns()
                .iter()
                .map(|c| {
                    let i = c.iter().position(|x| !x.is_zero()).expect("standard section");
                    p1d.module().degrees()[v][i]
                })
                .collect()
        })
        .collect();
    Ok((q, labels))
}

/// The transpose of an ungraded module, over the opposite algebra.
pub fn transpose(m: &Module) -> Result<Module> {
    Ok(transpose_of(m, None)?.0)
}

/// The graded transpose.
pub fn transpose_graded(m: &GradedModule) -> Result<GradedModule> {
    let (q, labels) = transpose_of(m.module(), Some(m.degrees()))?;
    GradedModule::new(q, labels)
}

/// `(gr.l.(Tr N), gr.l. N + 4d)`.
pub fn transpose_bound(m: &GradedModule) -> Result<(i64, i64)> {
    let tr = transpose_graded(m)?;
    Ok((tr.graded_length(), m.graded_length() + 4 * m.algebra().max_degree()))
}

/// Verdicts for `M` and `Tr M`.
#[derive(Debug, Clone)]
pub struct TransferReport {
    pub module: GradabilityVerdict,
    pub transpose: GradabilityVerdict,
}

impl TransferReport {
    /// False only when one side is Gradable and the other Ungradable.
    pub fn consistent(&self) -> bool {
        !(self.module.is_gradable() && self.transpose.is_ungradable()
            || self.module.is_ungradable() && self.transpose.is_gradable())
    }

    pub fn agree(&self) -> bool {
        self.module.label() == self.transpose.label()
    }
}

pub fn tr_gradability_transfer(m: &Module, budget: Budget) -> Result<TransferReport> {
    let tr = transpose(m)?;
    Ok(TransferReport {
        module: decide(m, budget)?,
        transpose: decide(&tr, budget)?,
    })
}
