//! Deciding whether a module is gradable, with certificates.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactla::{integer_diagonalizable, minimal_polynomial, rational_roots, FieldSpec, Mat, Scalar};
use crate::module_rep::{decompose, hom, iso_indecomposable, is_isomorphic, GradedModule, Module, ModuleMap};
use crate::prufer::build_tower;

/// Solutions of `D_w ρ(a) - ρ(a) D_v = deg(a) ρ(a)`: a particular solution plus `End(N)`.
#[derive(Debug, Clone)]
pub struct DerivationSystem {
    pub particular: ModuleMap,
    pub end_basis: Vec<ModuleMap>,
}

/// `None` when the system is infeasible, which proves `N` ungradable.
pub fn derivation_solve(n: &Module) -> Result<Option<DerivationSystem>> {
    if n.field() != FieldSpec::Rationals {
        return Err(Error::UnsupportedField("the derivation test runs over Q".into()));
    }
    let f = n.field();
    let dims = n.dims();
    let nv = dims.len();
    let mut offset = Vec::with_capacity(nv);
    let mut count = 0;
    for &d in dims {
        offset.push(count);
        count += d * d;
    }
    let unknown = |v: usize, r: usize, c: usize| offset[v] + r * dims[v] + c;
    let mut rows: Vec<(Vec<(usize, Scalar)>, Scalar)> = Vec::new();
    for (ai, a) in n.algebra().arrows().iter().enumerate() {
        let (v, w) = (a.source, a.target);
        let rho = n.action(ai);
        let deg = f.from_i64(a.degree);
        for r in 0..dims[w] {
            for c in 0..dims[v] {
                let mut eq = Vec::new();
                for s in 0..dims[w] {
                    let x = rho.get(s, c);
                    if !x.is_zero() {
                        eq.push((unknown(w, r, s), x.clone()));
                    }
                }
                for t in 0..dims[v] {
                    let x = rho.get(r, t);
                    if !x.is_zero() {
                        eq.push((unknown(v, t, c), -x.clone()));
                    }
                }
                rows.push((eq, &deg * rho.get(r, c)));
            }
        }
    }
    let mut sys = Mat::zeros(f, rows.len(), count);
    let mut rhs = Mat::zeros(f, rows.len(), 1);
    for (i, (eq, b)) in rows.iter().enumerate() {
        for (u, x) in eq {
            let cur = sys.get(i, *u).clone();
            sys.set(i, *u, &cur + x);
        }
        rhs.set(i, 0, b.clone());
    }
    let Some((x, _)) = sys.solve(&rhs)? else {
        return Ok(None);
    };
    let blocks = (0..nv)
        .map(|v| {
            let mut b = Mat::zeros(f, dims[v], dims[v]);
            for r in 0..dims[v] {
                for c in 0..dims[v] {
                    b.set(r, c, x.get(unknown(v, r, c), 0).clone());
                }
            }
            b
        })
        .collect();
    Ok(Some(DerivationSystem {
        particular: ModuleMap { blocks },
        end_basis: hom(n, n)?.basis,
    }))
}

/// A graded module together with an isomorphism from its push-down to the input module.
#[derive(Debug, Clone)]
pub struct GradingCertificate {
    pub graded: GradedModule,
    /// `q(graded) -> N`.
    pub iso: ModuleMap,
}

impl GradingCertificate {
    pub fn verify(&self, n: &Module) -> bool {
        self.graded.check_homogeneous().is_ok()
            && self.graded.module().check_relations().is_ok()
            && self.iso.is_invertible()
            && self.iso.is_homomorphism(self.graded.module(), n)
    }
}

fn solves(n: &Module, d: &ModuleMap) -> bool {
    let f = n.field();
    n.algebra().arrows().iter().enumerate().all(|(ai, a)| {
        let rho = n.action(ai);
        d.blocks[a.target].mul(rho).sub(&rho.mul(&d.blocks[a.source])) == rho.scale(&f.from_i64(a.degree))
    })
}

/// The eigenspace grading of an integer-diagonalizable solution.
fn grading_from(n: &Module, d: &ModuleMap) -> Result<Option<GradingCertificate>> {
    let mut bases = Vec::new();
    let mut labels = Vec::new();
    for b in &d.blocks {
        match integer_diagonalizable(b)? {
            Some((eig, basis)) => {
                labels.push(eig);
                bases.push(basis);
            }
            None => return Ok(None),
        }
    }
    let min = labels.iter().flatten().copied().min().unwrap_or(0);
    let labels: Vec<Vec<i64>> = labels.into_iter().map(|l| l.into_iter().map(|x| x - min).collect()).collect();
    let moved = n.base_change(&bases)?;
    let Ok(graded) = GradedModule::new(moved, labels) else {
        return Ok(None);
    };
    Ok(Some(GradingCertificate {
        graded,
        iso: ModuleMap { blocks: bases },
    }))
}

/// Jordan–Chevalley semisimple part of each block, when all eigenvalues are rational.
fn semisimple_part(d: &ModuleMap) -> Result<Option<ModuleMap>> {
    let mut blocks = Vec::new();
    for b in &d.blocks {
        let f = b.field();
        let n = b.rows();
        if n == 0 {
            blocks.push(b.clone());
            continue;
        }
        let m = minimal_polynomial(b)?;
        let roots = rational_roots(&m)?;
        let mut cols = Vec::new();
        let mut values = Vec::new();
        for r in &roots {
            let shifted = b.sub(&Mat::identity(f, n).scale(&Scalar::Q(r.clone())));
            for c in shifted.pow(n as u64).kernel().columns() {
                cols.push(c);
                values.push(Scalar::Q(r.clone()));
            }
        }
        if cols.len() != n {
            return Ok(None);
        }
        let p = Mat::from_cols(f, n, &cols);
        let mut diag = Mat::zeros(f, n, n);
        for (i, v) in values.into_iter().enumerate() {
            diag.set(i, i, v);
        }
        let inv = p.inverse().expect("generalized eigenvectors form a basis");
        blocks.push(p.mul(&diag).mul(&inv));
    }
    Ok(Some(ModuleMap { blocks }))
}

/// Upper bound on candidates tried by [`extract_grading`].
pub const EXTRACT_CANDIDATES: usize = 4000;

/// Searches `D₀ + span(End)` for an integer-diagonalizable solution: `D₀`, its semisimple
/// part, then `D₀ + Σ c_i z_i` with small integer coefficients.
pub fn extract_grading(n: &Module, sys: &DerivationSystem) -> Result<Option<GradingCertificate>> {
    let f = n.field();
    let try_candidate = |d: &ModuleMap| -> Result<Option<GradingCertificate>> {
        if let Some(c) = grading_from(n, d)? {
            return Ok(Some(c));
        }
        if let Some(s) = semisimple_part(d)? {
            if solves(n, &s) {
                return grading_from(n, &s);
            }
        }
        Ok(None)
    };
    if let Some(c) = try_candidate(&sys.particular)? {
        return Ok(Some(c));
    }
    let k = sys.end_basis.len();
    let coeffs: [i64; 6] = [1, -1, 2, -2, 3, -3];
    let mut tried = 0;
    for support in 1..=k.min(3) {
        for idx in subsets(k, support) {
            let mut choice = vec![0usize; support];
            loop {
                let mut d = sys.particular.clone();
                for (slot, &i) in idx.iter().enumerate() {
                    d = d.add(&sys.end_basis[i].scale(&f.from_i64(coeffs[choice[slot]])));
                }
                if let Some(c) = try_candidate(&d)? {
                    return Ok(Some(c));
                }
                tried += 1;
                if tried >= EXTRACT_CANDIDATES {
                    return Ok(None);
                }
                if !advance(&mut choice, |_| coeffs.len()) {
                    break;
                }
            }
        }
    }
    Ok(None)
}

/// Increasing `size`-subsets of `0..k`.
fn subsets(k: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    if size > k {
        return vec![];
    }
    let mut out = Vec::new();
    for last in size - 1..k {
        for mut s in subsets(last, size - 1) {
            s.push(last);
            out.push(s);
        }
    }
    out
}

/// Odometer step with digit `i` below `base(i)`; false after wrapping around.
fn advance(digits: &mut [usize], base: impl Fn(usize) -> usize) -> bool {
    for (i, d) in digits.iter_mut().enumerate() {
        *d += 1;
        if *d < base(i) {
            return true;
        }
        *d = 0;
    }
    false
}

/// Searches the graded indecomposable summands of `Y[1..=bound]` for one whose push-down
/// is isomorphic to `N`.
pub fn prufer_certificate(n: &Module, bound: usize) -> Result<Option<GradingCertificate>> {
    let tower = build_tower(n)?;
    for k in 1..=bound {
        let y = tower.member(k)?;
        for s in decompose(&y)?.summands {
            if s.module.module().dims() != n.dims() {
                continue;
            }
            if let Some(iso) = iso_indecomposable(s.module.module(), n)? {
                return Ok(Some(GradingCertificate {
                    graded: s.module.normalized(),
                    iso,
                }));
            }
        }
    }
    Ok(None)
}

/// Limits of the exhaustive oracle.
pub const ORACLE_MAX_DIM: usize = 5;
pub const ORACLE_MAX_PRIME: u32 = 3;

#[derive(Debug, Clone)]
pub enum OracleVerdict {
    Gradable(GradingCertificate),
    /// Every grading within the searched degree range was tried.
    Ungradable { candidates: u64 },
}

fn path_ranks(m: &Module) -> Vec<usize> {
    m.path_actions().iter().map(Mat::rank).collect()
}

/// Distributions of `total` into `slots` parts.
fn splits(total: usize, slots: usize) -> Vec<Vec<usize>> {
    if slots == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in splits(total - first, slots - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Exact gradability test over a small prime field by trying every grading with degrees
/// in `[0, dim(N) * d]`, pruned by ranks of arrow and path actions.
pub fn exhaustive_oracle(n: &Module) -> Result<OracleVerdict> {
    let p = match n.field() {
        FieldSpec::Prime(p) if p <= ORACLE_MAX_PRIME => p,
        other => {
            return Err(Error::BoundExceeded(format!(
                "exhaustive oracle needs GF(p) with p ≤ {ORACLE_MAX_PRIME}, got {other}"
            )))
        }
    };
    if n.total_dim() > ORACLE_MAX_DIM {
        return Err(Error::BoundExceeded(format!(
            "exhaustive oracle is limited to total dimension {ORACLE_MAX_DIM}"
        )));
    }
    let alg = n.algebra().clone();
    let f = n.field();
    let d = alg.arrows().iter().map(|a| a.degree.abs()).max().unwrap_or(0) as usize;
    let width = n.total_dim().saturating_sub(1) * d + 1;
    let target_ranks = path_ranks(n);
    let arrow_ranks: Vec<usize> = n.actions().iter().map(Mat::rank).collect();
    let per_vertex: Vec<Vec<Vec<usize>>> = n.dims().iter().map(|&dv| splits(dv, width)).collect();
    let mut candidates = 0u64;
    let mut choice = vec![0usize; per_vertex.len()];
    let elems: Vec<Scalar> = (0..p as i64).map(|v| f.from_i64(v)).collect();
    loop {
        let dist: Vec<&Vec<usize>> = choice.iter().enumerate().map(|(v, &i)| &per_vertex[v][i]).collect();
        let min_ok = dist.iter().any(|dv| dv.first().copied().unwrap_or(0) > 0) || n.is_zero();
        if min_ok {
            let spaces: Vec<BTreeMap<i64, usize>> = dist
                .iter()
                .map(|dv| {
                    dv.iter()
                        .enumerate()
                        .filter(|(_, &c)| c > 0)
                        .map(|(i, &c)| (i as i64, c))
                        .collect()
                })
                .collect();
            // candidate block tuples per arrow with the right rank
            let mut per_arrow: Vec<Vec<Vec<((usize, i64), Mat)>>> = Vec::new();
            let mut feasible = true;
            for (ai, a) in alg.arrows().iter().enumerate() {
                let keys: Vec<(i64, usize, usize)> = spaces[a.source]
                    .iter()
                    .filter_map(|(&deg, &sd)| spaces[a.target].get(&(deg + a.degree)).map(|&td| (deg, td, sd)))
                    .collect();
                let slots: usize = keys.iter().map(|(_, r, c)| r * c).sum();
                if (p as f64).powi(slots as i32) > 1e7 {
                    return Err(Error::BoundExceeded("oracle search space too large".into()));
                }
                let mut options = Vec::new();
                let mut digits = vec![0usize; slots];
                loop {
                    let mut blocks = Vec::new();
                    let mut k = 0;
                    for &(deg, r, c) in &keys {
                        let vals: Vec<Scalar> = digits[k..k + r * c].iter().map(|&x| elems[x].clone()).collect();
                        blocks.push(((ai, deg), Mat::from_vec(f, r, c, vals)));
                        k += r * c;
                    }
                    let rank: usize = blocks.iter().map(|(_, m)| m.rank()).sum();
                    if rank == arrow_ranks[ai] {
                        options.push(blocks);
                    }
                    if !advance(&mut digits, |_| p as usize) {
                        break;
                    }
                }
                if options.is_empty() {
                    feasible = false;
                    break;
                }
                per_arrow.push(options);
            }
            if feasible {
                let mut pick = vec![0usize; per_arrow.len()];
                loop {
                    candidates += 1;
                    let blocks: BTreeMap<(usize, i64), Mat> = pick
                        .iter()
                        .enumerate()
                        .flat_map(|(ai, &i)| per_arrow[ai][i].iter().cloned())
                        .collect();
                    if let Ok(g) = GradedModule::from_blocks(alg.clone(), &spaces, &blocks) {
                        if path_ranks(g.module()) == target_ranks {
                            if let Some(iso) = is_isomorphic(g.module(), n)? {
                                return Ok(OracleVerdict::Gradable(GradingCertificate { graded: g, iso }));
                            }
                        }
                    }
                    if !advance(&mut pick, |s| per_arrow[s].len()) {
                        break;
                    }
                }
            }
        }
        if !advance(&mut choice, |v| per_vertex[v].len()) {
            break;
        }
    }
    Ok(OracleVerdict::Ungradable { candidates })
}

/// Budgets for [`decide`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub prufer_bound: usize,
    pub oracle_max_dim: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            prufer_bound: 8,
            oracle_max_dim: ORACLE_MAX_DIM,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UngradableWitness {
    DerivationInfeasible { summand: usize },
    ExhaustiveSearch { summand: usize, candidates: u64 },
}

#[derive(Debug, Clone)]
pub enum GradabilityVerdict {
    Gradable(GradingCertificate),
    Ungradable(UngradableWitness),
    Unknown(String),
}

impl GradabilityVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            GradabilityVerdict::Gradable(_) => "Gradable",
            GradabilityVerdict::Ungradable(_) => "Ungradable",
            GradabilityVerdict::Unknown(_) => "Unknown",
        }
    }

    pub fn is_gradable(&self) -> bool {
        matches!(self, GradabilityVerdict::Gradable(_))
    }

    pub fn is_ungradable(&self) -> bool {
        matches!(self, GradabilityVerdict::Ungradable(_))
    }
}

impl fmt::Display for GradabilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

enum SummandVerdict {
    Gradable(GradingCertificate),
    Ungradable(UngradableWitness),
    Unknown(String),
}

fn decide_indecomposable(n: &Module, index: usize, budget: Budget) -> Result<SummandVerdict> {
    let mut tried = Vec::new();
    if n.field() == FieldSpec::Rationals {
        match derivation_solve(n)? {
            None => {
                return Ok(SummandVerdict::Ungradable(UngradableWitness::DerivationInfeasible {
                    summand: index,
                }))
            }
            Some(sys) => {
                if let Some(c) = extract_grading(n, &sys)? {
                    return Ok(SummandVerdict::Gradable(c));
                }
                tried.push(format!("grading extraction ({EXTRACT_CANDIDATES} candidates)"));
            }
        }
    }
    if n.algebra().is_positively_graded() {
        if let Some(c) = prufer_certificate(n, budget.prufer_bound)? {
            return Ok(SummandVerdict::Gradable(c));
        }
        tried.push(format!("Prüfer tower up to Y[{}]", budget.prufer_bound));
    }
    if let FieldSpec::Prime(p) = n.field() {
        if p <= ORACLE_MAX_PRIME && n.total_dim() <= budget.oracle_max_dim.min(ORACLE_MAX_DIM) {
            match exhaustive_oracle(n) {
                Ok(OracleVerdict::Gradable(c)) => return Ok(SummandVerdict::Gradable(c)),
                Ok(OracleVerdict::Ungradable { candidates }) => {
                    return Ok(SummandVerdict::Ungradable(UngradableWitness::ExhaustiveSearch {
                        summand: index,
                        candidates,
                    }))
                }
                Err(Error::BoundExceeded(msg)) => tried.push(format!("oracle: {msg}")),
                Err(e) => return Err(e),
            }
        } else {
            tried.push(format!(
                "oracle not applicable (dim {}, p = {p}; limits dim ≤ {}, p ≤ {ORACLE_MAX_PRIME})",
                n.total_dim(),
                budget.oracle_max_dim.min(ORACLE_MAX_DIM)
            ));
        }
    }
    Ok(SummandVerdict::Unknown(format!(
        "summand {index} (dims {:?}): {}",
        n.dims(),
        tried.join("; ")
    )))
}

/// Decomposes `N` and decides each indecomposable summand; `N` is gradable iff all are.
pub fn decide(n: &Module, budget: Budget) -> Result<GradabilityVerdict> {
    if n.is_zero() {
        return Ok(GradabilityVerdict::Gradable(GradingCertificate {
            graded: GradedModule::zero(n.algebra().clone()),
            iso: ModuleMap::identity(n),
        }));
    }
    let report = decompose(n)?;
    let mut certs = Vec::new();
    let mut unknown = Vec::new();
    for (i, s) in report.summands.iter().enumerate() {
        match decide_indecomposable(&s.module, i, budget)? {
            SummandVerdict::Gradable(c) => certs.push((c, s.inclusion.clone())),
            SummandVerdict::Ungradable(w) => return Ok(GradabilityVerdict::Ungradable(w)),
            SummandVerdict::Unknown(msg) => unknown.push(msg),
        }
    }
    if !unknown.is_empty() {
        return Ok(GradabilityVerdict::Unknown(unknown.join(" | ")));
    }
    // assemble ⊕ certificates with iso Σ incl_i ∘ φ_i ∘ proj_i
    let mut iter = certs.into_iter();
    let (first, incl0) = iter.next().expect("nonzero module has a summand");
    let mut graded = first.graded;
    let mut iso = incl0.compose(&first.iso);
    for (c, incl) in iter {
        let (sum, _, [p0, p1]) = graded.direct_sum_with_maps(&c.graded)?;
        iso = iso.compose(&p0).add(&incl.compose(&c.iso).compose(&p1));
        graded = sum;
    }
    let cert = GradingCertificate { graded, iso };
    debug_assert!(cert.verify(n));
    Ok(GradabilityVerdict::Gradable(cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::*;

    const Q: FieldSpec = FieldSpec::Rationals;
    const GF2: FieldSpec = FieldSpec::Prime(2);

    #[test]
    fn derivation_examples() {
        let k = kronecker(Q);
        assert!(derivation_solve(&kronecker_band(&k, 1)).unwrap().is_none());
        let r = truncated_polynomial(Q, 3);
        let m = graded_cyclic_module(&r, 2, 0);
        let sys = derivation_solve(m.module()).unwrap().unwrap();
        assert!(solves(m.module(), &sys.particular));
        let s = Module::simple(r.clone(), 0);
        let sys = derivation_solve(&s).unwrap().unwrap();
        assert!(sys.particular.is_zero());
        assert!(derivation_solve(&cyclic_module(&truncated_polynomial(GF2, 2), 1)).is_err());
    }

    #[test]
    fn extract_examples() {
        let r = truncated_polynomial(Q, 3);
        let n = cyclic_module(&r, 3);
        let sys = derivation_solve(&n).unwrap().unwrap();
        let c = extract_grading(&n, &sys).unwrap().unwrap();
        assert!(c.verify(&n));
        assert_eq!(c.graded.graded_length(), 3);
        let two = cyclic_module(&r, 2).direct_sum(&cyclic_module(&r, 2)).unwrap();
        let sys = derivation_solve(&two).unwrap().unwrap();
        let c = extract_grading(&two, &sys).unwrap().unwrap();
        assert!(c.verify(&two));
    }

    #[test]
    fn extract_from_eigenspaces() {
        let r = truncated_polynomial(Q, 3);
        let n = cyclic_module(&r, 2).direct_sum(&cyclic_module(&r, 2)).unwrap();
        let d = ModuleMap {
            blocks: vec![Mat::from_i64(Q, &[&[0, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1]])],
        };
        assert!(solves(&n, &d));
        let c = grading_from(&n, &d).unwrap().unwrap();
        assert_eq!(c.graded.degree_dims(), BTreeMap::from([(0, 2), (1, 2)]));
    }

    #[test]
    fn prufer_certificate_examples() {
        let r = truncated_polynomial(FieldSpec::Prime(3), 3);
        let n = cyclic_module(&r, 2);
        let c = prufer_certificate(&n, 3).unwrap().unwrap();
        assert!(c.verify(&n));
        assert_eq!(c.graded.support(), Some((0, 1)));
        let s = cyclic_module(&r, 1);
        assert!(prufer_certificate(&s, 1).unwrap().unwrap().verify(&s));
        let k = kronecker(GF2);
        assert!(prufer_certificate(&kronecker_band(&k, 1), 8).unwrap().is_none());
    }

    #[test]
    fn oracle_examples() {
        let k = kronecker(GF2);
        assert!(matches!(
            exhaustive_oracle(&kronecker_band(&k, 1)).unwrap(),
            OracleVerdict::Ungradable { .. }
        ));
        assert!(matches!(
            exhaustive_oracle(&Module::simple(k.clone(), 1)).unwrap(),
            OracleVerdict::Gradable(_)
        ));
        let p = kronecker_preinjective(&k);
        match exhaustive_oracle(&p).unwrap() {
            OracleVerdict::Gradable(c) => assert!(c.verify(&p)),
            _ => panic!("expected gradable"),
        }
    }

    #[test]
    fn decide_examples() {
        let r = truncated_polynomial(FieldSpec::Prime(3), 3);
        let n = cyclic_module(&r, 1).direct_sum(&cyclic_module(&r, 2)).unwrap();
        match decide(&n, Budget::default()).unwrap() {
            GradabilityVerdict::Gradable(c) => {
                assert!(c.verify(&n));
                assert_eq!(decompose(&c.graded).unwrap().num_summands(), 2);
            }
            v => panic!("unexpected {v}"),
        }
        let k = kronecker(GF2);
        let n = kronecker_band(&k, 1).direct_sum(&Module::simple(k.clone(), 0)).unwrap();
        assert!(decide(&n, Budget::default()).unwrap().is_ungradable());
        let k5 = kronecker(FieldSpec::Prime(5));
        let big = kronecker_band(&k5, 1).direct_sum(&kronecker_band(&k5, 2)).unwrap();
        let budget = Budget {
            prufer_bound: 2,
            oracle_max_dim: 5,
        };
        assert!(matches!(decide(&big, budget).unwrap(), GradabilityVerdict::Unknown(_)));
    }

    #[test]
    fn decide_over_rationals_uses_derivations() {
        let k = kronecker(Q);
        assert!(matches!(
            decide(&kronecker_band(&k, 1), Budget::default()).unwrap(),
            GradabilityVerdict::Ungradable(UngradableWitness::DerivationInfeasible { .. })
        ));
        let p = kronecker_preinjective(&k);
        assert!(decide(&p, Budget::default()).unwrap().is_gradable());
    }
}
