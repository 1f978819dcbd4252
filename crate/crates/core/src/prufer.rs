//! The Prüfer tower `Y[1] ⊂ Y[2] ⊂ ...` of a module over a positively graded algebra.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactla::{Mat, Scalar};
use crate::module_rep::{decompose, iso_indecomposable, GradedModule, Module, ModuleMap};

/// A subquotient `num / den` of one vertex space, with lifts of a basis.
#[derive(Debug, Clone)]
struct SubQuotient {
    den: Mat,
    sections: Mat,
}

impl SubQuotient {
    fn new(num: &Mat, den: &Mat) -> Self {
        let mut current = den.clone();
        let mut rank = den.cols();
        let mut chosen = Vec::new();
        for c in num.columns() {
            let cand = current.hstack(&Mat::from_cols(num.field(), num.rows(), &[c.clone()]));
            if cand.rank() > rank {
                rank += 1;
                current = cand;
                chosen.push(c);
            }
        }
        SubQuotient {
            den: den.clone(),
            sections: Mat::from_cols(num.field(), num.rows(), &chosen),
        }
    }

    fn dim(&self) -> usize {
        self.sections.cols()
    }

    /// Quotient coordinates of `x` (which must lie in `num`).
    fn coords(&self, x: &[Scalar]) -> Vec<Scalar> {
        let full = self.den.hstack(&self.sections);
        let y = full.solve_vec(x).expect("vector lies in the numerator");
        y[self.den.cols()..].to_vec()
    }

    /// Matrix of `x ↦ coords(m x)` on the sections of `from`.
    fn induced(&self, m: &Mat, from: &SubQuotient) -> Mat {
        let cols: Vec<Vec<Scalar>> = from
            .sections
            .columns()
            .iter()
            .map(|s| self.coords(&m.mul_vec(s)))
            .collect();
        Mat::from_cols(m.field(), self.dim(), &cols)
    }
}

/// Data for the Prüfer construction on `N`: the chain `C_t = N R_{≥t}`.
#[derive(Debug, Clone)]
pub struct PruferTower {
    base: Module,
    /// `chain[t]` for `t = 0, ..., len-1`; the last entry is zero.
    chain: Vec<Vec<Mat>>,
}

/// One tower member with its pieces.
#[derive(Debug, Clone)]
struct Member {
    graded: GradedModule,
    /// degree -> per-vertex subquotient
    pieces: BTreeMap<i64, Vec<SubQuotient>>,
}

pub fn build_tower(n: &Module) -> Result<PruferTower> {
    if !n.algebra().is_positively_graded() {
        return Err(Error::NotPositivelyGraded);
    }
    if n.is_zero() {
        return Err(Error::ZeroModule);
    }
    let mut chain = Vec::new();
    let mut t = 0;
    loop {
        let c = n.degree_filtration(t);
        let zero = c.iter().all(|m| m.cols() == 0);
        chain.push(c);
        if zero {
            break;
        }
        t += 1;
    }
    Ok(PruferTower {
        base: n.clone(),
        chain,
    })
}

impl PruferTower {
    pub fn base(&self) -> &Module {
        &self.base
    }

    /// `C_t`; `C_t = N` for `t ≤ 0`.
    pub fn chain(&self, t: i64) -> &[Mat] {
        let i = t.max(0) as usize;
        &self.chain[i.min(self.chain.len() - 1)]
    }

    /// Number of nonzero terms of the chain.
    pub fn chain_length(&self) -> usize {
        self.chain.len() - 1
    }

    /// Per-vertex dimensions of `(P_N)_j = N / C_{j+1}`.
    pub fn prufer_piece_dims(&self, j: i64) -> Vec<usize> {
        if j < 0 {
            return vec![0; self.base.dims().len()];
        }
        let c = self.chain(j + 1);
        self.base.dims().iter().zip(c).map(|(d, m)| d - m.cols()).collect()
    }

    fn member_data(&self, n: usize) -> Result<Member> {
        if n < 1 {
            return Err(Error::InvalidArgument("tower members start at n = 1".into()));
        }
        let nv = self.base.dims().len();
        let top = n as i64 - 1 + self.chain_length() as i64;
        let mut pieces = BTreeMap::new();
        for j in 0..=top {
            let num = self.chain((j - n as i64 + 1).max(0));
            let den = self.chain(j + 1);
            let sq: Vec<SubQuotient> = (0..nv).map(|v| SubQuotient::new(&num[v], &den[v])).collect();
            if sq.iter().any(|s| s.dim() > 0) {
                pieces.insert(j, sq);
            }
        }
        let spaces: Vec<BTreeMap<i64, usize>> = (0..nv)
            .map(|v| {
                pieces
                    .iter()
                    .filter(|(_, p)| p[v].dim() > 0)
                    .map(|(&j, p)| (j, p[v].dim()))
                    .collect()
            })
            .collect();
        let mut blocks = BTreeMap::new();
        for (ai, a) in self.base.algebra().arrows().iter().enumerate() {
            for (&j, p) in &pieces {
                let Some(q) = pieces.get(&(j + a.degree)) else {
                    continue;
                };
                if p[a.source].dim() == 0 || q[a.target].dim() == 0 {
                    continue;
                }
                blocks.insert((ai, j), q[a.target].induced(self.base.action(ai), &p[a.source]));
            }
        }
        let graded = GradedModule::from_blocks(self.base.algebra().clone(), &spaces, &blocks)?;
        Ok(Member { graded, pieces })
    }

    /// `Y[n] = ker φ^n`; its degree-`j` piece is `C_{max(0, j-n+1)} / C_{j+1}`.
    pub fn member(&self, n: usize) -> Result<GradedModule> {
        Ok(self.member_data(n)?.graded)
    }

    /// The map induced by the identity of `N` from piece `j` of `src` to piece `j + shift`
    /// of `tgt`, assembled over all degrees (ungraded map of the underlying modules).
    fn natural_map(&self, src: &Member, tgt: &Member, shift: i64) -> ModuleMap {
        let f = self.base.field();
        let nv = self.base.dims().len();
        let src_dims = src.graded.module().dims();
        let tgt_dims = tgt.graded.module().dims();
        let mut blocks: Vec<Mat> = (0..nv).map(|v| Mat::zeros(f, tgt_dims[v], src_dims[v])).collect();
        let offsets = |mem: &Member, v: usize| -> BTreeMap<i64, usize> {
            let mut acc = 0;
            let mut out = BTreeMap::new();
            for (&j, p) in &mem.pieces {
                out.insert(j, acc);
                acc += p[v].dim();
            }
            out
        };
        for (v, block) in blocks.iter_mut().enumerate() {
            let so = offsets(src, v);
            let to = offsets(tgt, v);
            let id = Mat::identity(f, self.base.dims()[v]);
            for (&j, p) in &src.pieces {
                let Some(q) = tgt.pieces.get(&(j + shift)) else {
                    continue;
                };
                if p[v].dim() == 0 || q[v].dim() == 0 {
                    continue;
                }
                let m = q[v].induced(&id, &p[v]);
                block.put_block(to[&(j + shift)], so[&j], &m);
            }
        }
        ModuleMap { blocks }
    }

    /// `Y[n] ⊂ Y[m]` for `n ≤ m`.
    pub fn inclusion(&self, n: usize, m: usize) -> Result<ModuleMap> {
        Ok(self.natural_map(&self.member_data(n)?, &self.member_data(m)?, 0))
    }

    /// `φ^k: Y[m] -> Y[m-k]` (lowers degrees by `k`).
    pub fn phi_power(&self, m: usize, k: usize) -> Result<ModuleMap> {
        let target = if m > k { m - k } else { m };
        let src = self.member_data(m)?;
        let tgt = self.member_data(target)?;
        if m <= k {
            return Ok(ModuleMap::zero(src.graded.module(), tgt.graded.module()));
        }
        Ok(self.natural_map(&src, &tgt, -(k as i64)))
    }

    /// `φ` as an endomorphism of `Y[n]`.
    pub fn phi_on(&self, n: usize) -> Result<ModuleMap> {
        let y = self.member_data(n)?;
        Ok(self.natural_map(&y, &y, -1))
    }

    /// Exactness of `0 -> Y[1] -> Y[n+1] -φ-> Y[n] -> 0` and
    /// `0 -> Y[n] -> Y[n+1] -φ^n-> Y[1] -> 0`.
    pub fn check_exactness(&self, n: usize) -> Result<bool> {
        let y1 = self.member(1)?;
        let yn = self.member(n)?;
        let yn1 = self.member(n + 1)?;
        let seq = |i: &ModuleMap, p: &ModuleMap, a: &GradedModule, b: &GradedModule, c: &GradedModule| {
            i.is_homomorphism(a.module(), b.module())
                && p.is_homomorphism(b.module(), c.module())
                && i.rank() == a.total_dim()
                && p.rank() == c.total_dim()
                && p.compose(i).is_zero()
                && a.total_dim() + c.total_dim() == b.total_dim()
        };
        let first = seq(&self.inclusion(1, n + 1)?, &self.phi_power(n + 1, 1)?, &y1, &yn1, &yn);
        let second = seq(&self.inclusion(n, n + 1)?, &self.phi_power(n + 1, n)?, &yn, &yn1, &y1);
        Ok(first && second)
    }
}

pub fn tower_member(t: &PruferTower, n: usize) -> Result<GradedModule> {
    t.member(n)
}

/// One step of a finite-type scan.
#[derive(Debug, Clone)]
pub struct TowerStep {
    pub n: usize,
    /// Graded indecomposable summands of `Y[n]`.
    pub summands: Vec<GradedModule>,
    /// Registry indices of the summands' push-downs.
    pub classes: Vec<usize>,
    pub new_classes: usize,
}

#[derive(Debug, Clone)]
pub struct TowerReport {
    pub bound: usize,
    pub steps: Vec<TowerStep>,
    /// Pairwise non-isomorphic ungraded indecomposables met so far.
    pub registry: Vec<Module>,
    /// Graded representative of each registry class.
    pub graded_registry: Vec<GradedModule>,
    /// `n ↦` registry size after `Y[n]`.
    pub growth: Vec<usize>,
    pub stabilized: bool,
    /// Last step that introduced a class, when stabilized.
    pub stabilized_at: Option<usize>,
}

/// Decomposes `Y[1..=bound]` and flags stabilization when the last `d + 1` steps add no
/// new ungraded class.
pub fn finite_type_scan(t: &PruferTower, bound: usize) -> Result<TowerReport> {
    let d = t.base.algebra().max_degree().max(0) as usize;
    if bound < d + 2 {
        return Err(Error::InvalidArgument(format!("bound must be at least d + 2 = {}", d + 2)));
    }
    let mut registry: Vec<Module> = Vec::new();
    let mut graded_registry: Vec<GradedModule> = Vec::new();
    let mut steps = Vec::new();
    let mut growth = Vec::new();
    for n in 1..=bound {
        let y = t.member(n)?;
        let report = decompose(&y)?;
        let mut classes = Vec::new();
        let mut new_classes = 0;
        let mut summands = Vec::new();
        for s in report.summands {
            let q = s.module.module().clone();
            let mut idx = None;
            for (i, r) in registry.iter().enumerate() {
                if iso_indecomposable(r, &q)?.is_some() {
                    idx = Some(i);
                    break;
                }
            }
            let idx = idx.unwrap_or_else(|| {
                registry.push(q);
                graded_registry.push(s.module.normalized());
                new_classes += 1;
                registry.len() - 1
            });
            classes.push(idx);
            summands.push(s.module);
        }
        steps.push(TowerStep {
            n,
            summands,
            classes,
            new_classes,
        });
        growth.push(registry.len());
    }
    let tail = &steps[steps.len() - (d + 1)..];
    let stabilized = tail.iter().all(|s| s.new_classes == 0);
    let stabilized_at = stabilized.then(|| {
        steps
            .iter()
            .rev()
            .find(|s| s.new_classes > 0)
            .map_or(1, |s| s.n)
    });
    Ok(TowerReport {
        bound,
        steps,
        registry,
        graded_registry,
        growth,
        stabilized,
        stabilized_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::*;
    use crate::exactla::FieldSpec;

    const GF3: FieldSpec = FieldSpec::Prime(3);

    #[test]
    fn first_member_of_dual_numbers() {
        let r = truncated_polynomial(GF3, 3);
        let n = cyclic_module(&r, 2);
        let t = build_tower(&n).unwrap();
        let y1 = t.member(1).unwrap();
        assert_eq!(y1.degree_dims(), BTreeMap::from([(0, 1), (1, 1)]));
        assert!(!y1.module().action(0).is_zero());
        assert!(crate::module_rep::is_isomorphic(&y1, &graded_cyclic_module(&r, 2, 0))
            .unwrap()
            .is_some());
    }

    #[test]
    fn simple_gives_semisimple_tower() {
        let r = truncated_polynomial(GF3, 3);
        let t = build_tower(&cyclic_module(&r, 1)).unwrap();
        let y3 = t.member(3).unwrap();
        assert_eq!(y3.degree_dims(), BTreeMap::from([(0, 1), (1, 1), (2, 1)]));
        assert!(y3.module().action(0).is_zero());
        let rep = finite_type_scan(&t, 4).unwrap();
        assert!(rep.stabilized);
        assert_eq!((rep.stabilized_at, rep.registry.len()), (Some(1), 1));
    }

    #[test]
    fn errors() {
        let r = truncated_polynomial(GF3, 3);
        assert_eq!(build_tower(&Module::zero(r.clone())).unwrap_err(), Error::ZeroModule);
        let t = build_tower(&cyclic_module(&r, 2)).unwrap();
        assert!(t.member(0).is_err());
    }

    #[test]
    fn exactness_length_and_nilpotency() {
        let r = truncated_polynomial(GF3, 3);
        let n = cyclic_module(&r, 2).direct_sum(&cyclic_module(&r, 3)).unwrap();
        let t = build_tower(&n).unwrap();
        let l1 = t.member(1).unwrap().total_dim();
        for k in 1..=4 {
            assert!(t.check_exactness(k).unwrap());
            assert_eq!(t.member(k).unwrap().total_dim(), k * l1);
            let phi = t.phi_on(k).unwrap();
            let mut p = ModuleMap::identity(t.member(k).unwrap().module());
            for _ in 0..k {
                p = phi.compose(&p);
            }
            assert!(p.is_zero());
        }
    }

    #[test]
    fn dual_numbers_tower_stabilizes() {
        let r = truncated_polynomial(GF3, 3);
        let t = build_tower(&cyclic_module(&r, 2)).unwrap();
        let rep = finite_type_scan(&t, 6).unwrap();
        assert!(rep.stabilized);
        assert_eq!(rep.registry.len(), 1);
    }

    #[test]
    fn kronecker_band_tower_grows() {
        let k = kronecker(GF3);
        let t = build_tower(&kronecker_band(&k, 1)).unwrap();
        let y = t.member(3).unwrap();
        assert_eq!(y.module().dims(), &[3, 3]);
        let rep = finite_type_scan(&t, 4).unwrap();
        assert!(!rep.stabilized);
        assert_eq!(rep.growth, vec![1, 2, 3, 4]);
    }
}
