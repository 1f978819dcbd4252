//! Push-down, shift, windowed pull-ups, the co-unit on windows, and the split-epi transfer.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactla::Mat;
use crate::module_rep::{GradedModule, Module, ModuleMap};

/// Largest window width `b - a` accepted by [`pullup_window`].
pub const WINDOW_CAP: i64 = 512;

/// Forgets the grading.
pub fn push_down(m: &GradedModule) -> Module {
    m.module().clone()
}

/// `M[i]`: degree `n` content moves to degree `n - i`.
pub fn shift(m: &GradedModule, i: i64) -> GradedModule {
    m.shift(i)
}

fn require_positive(m: &Module) -> Result<()> {
    if m.algebra().is_positively_graded() {
        Ok(())
    } else {
        Err(Error::NotPositivelyGraded)
    }
}

fn check_window(a: i64, b: i64) -> Result<()> {
    if a > b {
        return Err(Error::InvalidArgument(format!("empty window [{a},{b}]")));
    }
    if b - a > WINDOW_CAP {
        return Err(Error::BoundExceeded(format!(
            "window width {} exceeds {WINDOW_CAP}",
            b - a
        )));
    }
    Ok(())
}

/// The degrees `[lo, hi]` of a graded module over a positively graded algebra; degrees
/// above `hi` form a submodule of the part in degrees `≥ lo`, so this is a subquotient.
pub fn truncate(m: &GradedModule, lo: i64, hi: i64) -> Result<GradedModule> {
    require_positive(m.module())?;
    let module = m.module();
    let keep: Vec<Vec<usize>> = m
        .degrees()
        .iter()
        .map(|d| (0..d.len()).filter(|&i| d[i] >= lo && d[i] <= hi).collect())
        .collect();
    let action = module
        .algebra()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| module.action(ai).select_rows(&keep[a.target]).select_cols(&keep[a.source]))
        .collect();
    let dims = keep.iter().map(Vec::len).collect();
    let degrees = keep
        .iter()
        .zip(m.degrees())
        .map(|(k, d)| k.iter().map(|&i| d[i]).collect())
        .collect();
    let q = Module::new(module.algebra().clone(), dims, action)?;
    GradedModule::new(q, degrees)
}

/// `⊕_i M[i]` restricted to degrees `[a, b]`.
pub fn window_of_pq(m: &GradedModule, a: i64, b: i64) -> Result<GradedModule> {
    require_positive(m.module())?;
    check_window(a, b)?;
    let Some((lo, hi)) = m.support() else {
        return Ok(GradedModule::zero(m.algebra().clone()));
    };
    let mut acc = GradedModule::zero(m.algebra().clone());
    for i in (lo - b)..=(hi - a) {
        acc = acc.direct_sum(&truncate(&m.shift(i), a, b)?)?;
    }
    Ok(acc)
}

/// Degree pieces of a windowed pull-up, stored per vertex.
#[derive(Debug, Clone)]
struct Piece {
    /// `s[v]`: columns in `N_v` lifting the basis of the piece.
    sections: Vec<Mat>,
    /// `pi[v]`: `N_v -> piece_v`.
    projections: Vec<Mat>,
}

/// `P_[a,b](N)`: the quotient of the pull-up by the part generated in degrees `< a`, cut
/// off above `b`. The degree-`n` piece is `N / N R_{≥ n-a+1}`.
#[derive(Debug, Clone)]
pub struct PullupWindow {
    base: Module,
    a: i64,
    b: i64,
    graded: GradedModule,
    pieces: Vec<Piece>,
}

pub fn pullup_window(n: &Module, a: i64, b: i64) -> Result<PullupWindow> {
    require_positive(n)?;
    check_window(a, b)?;
    let nv = n.dims().len();
    let mut pieces = Vec::new();
    for deg in a..=b {
        let sub = n.degree_filtration(deg - a + 1);
        let (_, sections, projections) = n.quotient(&sub)?;
        pieces.push(Piece {
            sections,
            projections,
        });
    }
    let piece_dim = |p: &Piece, v: usize| p.sections[v].cols();
    let spaces: Vec<BTreeMap<i64, usize>> = (0..nv)
        .map(|v| {
            pieces
                .iter()
                .enumerate()
                .filter(|(_, p)| piece_dim(p, v) > 0)
                .map(|(i, p)| (a + i as i64, piece_dim(p, v)))
                .collect()
        })
        .collect();
    let mut blocks = BTreeMap::new();
    for (ai, arrow) in n.algebra().arrows().iter().enumerate() {
        for (i, p) in pieces.iter().enumerate() {
            let deg = a + i as i64;
            let tgt = deg + arrow.degree;
            if tgt > b || piece_dim(p, arrow.source) == 0 {
                continue;
            }
            let q = &pieces[(tgt - a) as usize];
            if piece_dim(q, arrow.target) == 0 {
                continue;
            }
            let block = q.projections[arrow.target]
                .mul(n.action(ai))
                .mul(&p.sections[arrow.source]);
            blocks.insert((ai, deg), block);
        }
    }
    let graded = GradedModule::from_blocks(n.algebra().clone(), &spaces, &blocks)?;
    Ok(PullupWindow {
        base: n.clone(),
        a,
        b,
        graded,
        pieces,
    })
}

impl PullupWindow {
    pub fn base(&self) -> &Module {
        &self.base
    }

    pub fn window(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    pub fn module(&self) -> &GradedModule {
        &self.graded
    }

    /// Per-vertex dimensions of the degree-`n` piece.
    pub fn piece_dims(&self, n: i64) -> Vec<usize> {
        match self.piece(n) {
            Some(p) => p.sections.iter().map(Mat::cols).collect(),
            None => vec![0; self.base.dims().len()],
        }
    }

    fn piece(&self, n: i64) -> Option<&Piece> {
        (self.a..=self.b)
            .contains(&n)
            .then(|| &self.pieces[(n - self.a) as usize])
    }

    /// Row offset of the degree-`n` piece inside the vertex-`v` space of the window.
    fn offset(&self, n: i64, v: usize) -> usize {
        (self.a..n).map(|t| self.piece_dims(t)[v]).sum()
    }

    /// Degrees `[a + r, b - r]` with `r = reach(N)`: there every piece equals `N` and the
    /// co-unit is a module map on graded submodules.
    pub fn faithful_range(&self) -> (i64, i64) {
        let r = self.base.reach().unwrap_or(0);
        (self.a + r, self.b - r)
    }

    /// `δ` on each vertex: `W_v -> N_v`, `Σ n_i e_i ↦ Σ n_i` through the piece sections.
    pub fn delta(&self) -> Vec<Mat> {
        (0..self.base.dims().len())
            .map(|v| {
                let mut m = Mat::zeros(self.base.field(), self.base.dims()[v], 0);
                for p in &self.pieces {
                    m = m.hstack(&p.sections[v]);
                }
                m
            })
            .collect()
    }

    /// `N_v -> W_v`, `x ↦ x e_n` (projected into the degree-`n` piece).
    pub fn embed_at(&self, n: i64, v: usize) -> Mat {
        let total = self.graded.module().dims()[v];
        let mut m = Mat::zeros(self.base.field(), total, self.base.dims()[v]);
        if let Some(p) = self.piece(n) {
            m.put_block(self.offset(n, v), 0, &p.projections[v]);
        }
        m
    }
}

/// The co-unit restricted to a graded submodule of a window.
#[derive(Debug, Clone)]
pub struct CounitData {
    /// `δ|: qM -> N`.
    pub map: ModuleMap,
    pub is_homomorphism: bool,
    pub is_split_epi: bool,
}

fn check_homogeneous(map: &ModuleMap, src: &GradedModule, tgt: &GradedModule) -> Result<()> {
    for (v, b) in map.blocks.iter().enumerate() {
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                if !b.get(r, c).is_zero() && tgt.degrees()[v][r] != src.degrees()[v][c] {
                    return Err(Error::InvalidArgument("inclusion is not homogeneous".into()));
                }
            }
        }
    }
    if !map.is_homomorphism(src.module(), tgt.module()) {
        return Err(Error::InvalidArgument("inclusion is not a module map".into()));
    }
    Ok(())
}

/// `δ| = δ ∘ incl` for a graded module embedded into the window.
pub fn counit_restriction(w: &PullupWindow, m: &GradedModule, inclusion: &ModuleMap) -> Result<CounitData> {
    check_homogeneous(inclusion, m, w.module())?;
    let delta = w.delta();
    let map = ModuleMap {
        blocks: delta.iter().zip(&inclusion.blocks).map(|(d, i)| d.mul(i)).collect(),
    };
    let is_homomorphism = map.is_homomorphism(m.module(), w.base());
    let is_split_epi = is_homomorphism
        && crate::module_rep::section(&map, m.module(), w.base())?.is_some();
    Ok(CounitData {
        map,
        is_homomorphism,
        is_split_epi,
    })
}

/// `qM` as a direct summand of `N`: `retraction ∘ embedding = id_{qM}`.
#[derive(Debug, Clone)]
pub struct SplitWitness {
    pub embedding: ModuleMap,
    pub retraction: ModuleMap,
    /// The unit `f = Σ_k g σ^k i` of `End(qM)`.
    pub unit: ModuleMap,
}

impl SplitWitness {
    pub fn verify(&self, m: &Module, n: &Module) -> bool {
        self.embedding.is_homomorphism(m, n)
            && self.retraction.is_homomorphism(n, m)
            && self.retraction.compose(&self.embedding).is_identity()
    }
}

/// Given `M` as a graded summand of the window (`projection ∘ inclusion = id`), builds
/// `f = Σ_k f_k` with `f_k = g σ^k i` and `h(n) = Σ_k g(n e_k)`; then `h ∘ δ i = f` and
/// `f^{-1} h` retracts `δ i`.
pub fn split_transfer(
    n: &Module,
    w: &PullupWindow,
    m: &GradedModule,
    inclusion: &ModuleMap,
    projection: &ModuleMap,
) -> Result<Option<SplitWitness>> {
    if w.base() != n {
        return Err(Error::InvalidArgument("window is not built on this module".into()));
    }
    let Some((lo, hi)) = m.support() else {
        return Ok(None);
    };
    let r = n.reach().unwrap_or(0);
    let (a, b) = w.window();
    let available = (lo - a).min(b - hi);
    if available < r {
        return Err(Error::InsufficientMargin {
            required: r,
            available,
        });
    }
    check_homogeneous(inclusion, m, w.module())?;
    if !projection.is_homomorphism(w.module().module(), m.module())
        || !projection.compose(inclusion).is_identity()
    {
        return Ok(None);
    }
    let nv = n.dims().len();
    let delta = w.delta();
    let embedding = ModuleMap {
        blocks: (0..nv).map(|v| delta[v].mul(&inclusion.blocks[v])).collect(),
    };
    let h = ModuleMap {
        blocks: (0..nv)
            .map(|v| {
                let mut acc = Mat::zeros(n.field(), m.module().dims()[v], n.dims()[v]);
                for k in lo..=hi {
                    acc = acc.add(&projection.blocks[v].mul(&w.embed_at(k, v)));
                }
                acc
            })
            .collect(),
    };
    let unit = h.compose(&embedding);
    let Some(inv) = unit.inverse() else {
        return Ok(None);
    };
    let witness = SplitWitness {
        embedding,
        retraction: inv.compose(&h),
        unit,
    };
    Ok(witness.verify(m.module(), n).then_some(witness))
}

/// The evident copy of a graded module `M` (with `qM = N`) inside the window: degree `n`
/// of `M` goes to `M_n e_n`. Returns `(inclusion, projection)`.
pub fn shift_copy(w: &PullupWindow, m: &GradedModule) -> Result<(ModuleMap, ModuleMap)> {
    if m.module() != w.base() {
        return Err(Error::InvalidArgument("M must push down to the window base".into()));
    }
    let f = m.field();
    let nv = m.module().dims().len();
    let mut incl = Vec::new();
    let mut proj = Vec::new();
    for v in 0..nv {
        let dim_w = w.module().module().dims()[v];
        let dim_m = m.module().dims()[v];
        let mut i = Mat::zeros(f, dim_w, dim_m);
        let mut p = Mat::zeros(f, dim_m, dim_w);
        for (j, &deg) in m.degrees()[v].iter().enumerate() {
            let piece = w
                .piece(deg)
                .ok_or_else(|| Error::InvalidArgument(format!("degree {deg} is outside the window")))?;
            if piece.sections[v].cols() != dim_m {
                return Err(Error::InsufficientMargin {
                    required: w.base().reach().unwrap_or(0),
                    available: deg - w.window().0,
                });
            }
            let off = w.offset(deg, v);
            // piece coordinates of the basis vector e_j of N_v
            let mut e = vec![f.zero(); dim_m];
            e[j] = f.one();
            let coords = piece.projections[v].mul_vec(&e);
            for (r, c) in coords.into_iter().enumerate() {
                i.set(off + r, j, c);
            }
            // projection: read the j-th coordinate of the lift of the degree-deg piece
            let lift_row = piece.sections[v].row(j);
            for (c, x) in lift_row.into_iter().enumerate() {
                p.set(j, off + c, x);
            }
        }
        incl.push(i);
        proj.push(p);
    }
    Ok((ModuleMap { blocks: incl }, ModuleMap { blocks: proj }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::*;
    use crate::exactla::FieldSpec;
    use crate::module_rep::{hom, hom_graded, is_isomorphic};

    const GF3: FieldSpec = FieldSpec::Prime(3);

    #[test]
    fn push_down_examples() {
        let r = truncated_polynomial(GF3, 3);
        let s = GradedModule::simple(r.clone(), 0, 5);
        assert_eq!(push_down(&s), Module::simple(r.clone(), 0));
        let m = graded_cyclic_module(&r, 2, 0);
        assert_eq!(push_down(&m), cyclic_module(&r, 2));
        assert_eq!(push_down(&shift(&m, 1)), push_down(&m));
        assert_eq!(shift(&m, 7).graded_length(), m.graded_length());
        assert_eq!(shift(&m, 0), m);
        assert_eq!(shift(&GradedModule::simple(r, 0, 0), 1).support(), Some((-1, -1)));
    }

    #[test]
    fn pullup_examples() {
        let r = truncated_polynomial(GF3, 3);
        let k = cyclic_module(&r, 1);
        let w = pullup_window(&k, 0, 2).unwrap();
        assert_eq!(w.module().degree_dims(), BTreeMap::from([(0, 1), (1, 1), (2, 1)]));
        assert!(w.module().module().action(0).is_zero());
        let n = cyclic_module(&r, 2);
        let w = pullup_window(&n, 0, 1).unwrap();
        assert_eq!(w.module().degree_dims(), BTreeMap::from([(0, 1), (1, 2)]));
        assert_eq!(w.module().module().action(0).rank(), 1);
        let top = pullup_window(&n, 4, 4).unwrap();
        assert_eq!(top.module().degree_dims(), BTreeMap::from([(4, 1)]));
        assert!(matches!(pullup_window(&n, 0, 99999), Err(Error::BoundExceeded(_))));
    }

    #[test]
    fn pullup_rejects_negative_degrees() {
        let alg = crate::GradedAlgebra::build(
            crate::QuiverPresentation::new(GF3)
                .with_vertex("1")
                .with_vertex("2")
                .with_arrow("a", "1", "2", -1),
        )
        .unwrap();
        let s = Module::simple(alg, 0);
        assert_eq!(pullup_window(&s, 0, 1).unwrap_err(), Error::NotPositivelyGraded);
    }

    #[test]
    fn window_of_pq_examples() {
        let r = truncated_polynomial(GF3, 3);
        let m = graded_cyclic_module(&r, 2, 0);
        let w = window_of_pq(&m, -1, 1).unwrap();
        assert_eq!(w.degree_dims(), BTreeMap::from([(-1, 2), (0, 2), (1, 2)]));
        let s = GradedModule::simple(r.clone(), 0, 0);
        assert_eq!(window_of_pq(&s, 0, 0).unwrap().total_dim(), 1);
        assert!(window_of_pq(&GradedModule::zero(r), 0, 3).unwrap().is_zero());
    }

    #[test]
    fn sigma_invariance() {
        let r = truncated_polynomial(GF3, 3);
        let n = cyclic_module(&r, 2).direct_sum(&cyclic_module(&r, 3)).unwrap();
        let w = pullup_window(&n, 0, 4).unwrap();
        let w1 = pullup_window(&n, 1, 5).unwrap();
        assert_eq!(w.module(), &w1.module().shift(1));
        assert!(is_isomorphic(w.module(), &w1.module().shift(1)).unwrap().is_some());
    }

    #[test]
    fn counit_on_shift_copy_splits() {
        let r = truncated_polynomial(GF3, 3);
        let m = graded_cyclic_module(&r, 2, 3);
        let n = push_down(&m);
        let w = pullup_window(&n, 0, 7).unwrap();
        let (i, p) = shift_copy(&w, &m).unwrap();
        assert!(p.compose(&i).is_identity());
        let c = counit_restriction(&w, &m, &i).unwrap();
        assert!(c.is_homomorphism && c.is_split_epi);
        let zero = GradedModule::zero(r);
        let zi = ModuleMap::zero(zero.module(), w.module().module());
        assert!(counit_restriction(&w, &zero, &zi).unwrap().map.is_zero());
    }

    #[test]
    fn split_transfer_examples() {
        let r = truncated_polynomial(GF3, 3);
        let m = graded_cyclic_module(&r, 3, 3);
        let n = push_down(&m);
        let w = pullup_window(&n, 0, 8).unwrap();
        let (i, p) = shift_copy(&w, &m).unwrap();
        let wit = split_transfer(&n, &w, &m, &i, &p).unwrap().unwrap();
        assert!(wit.verify(m.module(), &n));
        // support [3,5] needs margin 2 on both sides of [1, 6]
        let narrow = pullup_window(&n, 2, 6).unwrap();
        assert!(matches!(shift_copy(&narrow, &m), Err(Error::InsufficientMargin { .. })));
        assert_eq!(
            split_transfer(&n, &narrow, &m, &i, &p).unwrap_err(),
            Error::InsufficientMargin {
                required: 2,
                available: 1
            }
        );
    }

    #[test]
    fn split_transfer_for_simple_in_middle_degree() {
        let r = truncated_polynomial(GF3, 3);
        let k = cyclic_module(&r, 1);
        let w = pullup_window(&k, 0, 2).unwrap();
        let m = GradedModule::simple(r, 0, 1);
        let (i, p) = shift_copy(&w, &m).unwrap();
        let wit = split_transfer(&k, &w, &m, &i, &p).unwrap().unwrap();
        assert!(wit.verify(m.module(), &k));
    }

    #[test]
    fn adjunction_dimension_count() {
        let r = truncated_polynomial(GF3, 3);
        let m = graded_cyclic_module(&r, 2, 3);
        for n in [cyclic_module(&r, 1), cyclic_module(&r, 2), cyclic_module(&r, 3)] {
            let w = pullup_window(&n, 0, 8).unwrap();
            assert_eq!(
                hom(m.module(), &n).unwrap().dim(),
                hom_graded(&m, w.module(), 0).unwrap().dim()
            );
        }
    }
}
