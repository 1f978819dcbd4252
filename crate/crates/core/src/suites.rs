//! Named verification suites over the built-in corpus.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::GradedAlgebra;
use crate::corpus::{algebras, kronecker, kronecker_band, linear_quiver, truncated_polynomial};
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Mat, Scalar};
use crate::functors::{counit_restriction, pullup_window, shift_copy, split_transfer, truncate, window_of_pq};
use crate::gradability::{decide, Budget, GradabilityVerdict};
use crate::homalg::{minimal_presentation_ungraded, syzygy, transpose, transpose_bound, transpose_graded};
use crate::io::{algebra_to_toml, graded_module_to_toml, module_to_toml};
use crate::module_rep::{
    end_ring, enumerate_graded, enumerate_modules, hom, iso_indecomposable, is_isomorphic, GradedModule, Module,
    ModuleMap,
};
use crate::pplogic::{pp_eval, pp_generator, pp_type_leq, purity};
use crate::prufer::{build_tower, finite_type_scan};

pub const SUITES: [&str; 10] = [
    "cf-indecomposable",
    "shift-iso",
    "pullup-shift",
    "counit-split",
    "syzygy-window",
    "transpose-bound",
    "tr-transfer",
    "prufer-equiv",
    "pp-purity",
    "f-conditions",
];

/// A failing input, serialized as corpus files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub description: String,
    pub algebra_toml: String,
    /// Refers to its algebra as `algebra.toml`.
    pub module_toml: String,
}

impl Counterexample {
    fn plain(description: String, m: &Module) -> Self {
        Counterexample {
            description,
            algebra_toml: algebra_to_toml(m.algebra().presentation()),
            module_toml: module_to_toml(m, "algebra.toml"),
        }
    }

    fn graded(description: String, m: &GradedModule) -> Self {
        Counterexample {
            description,
            algebra_toml: algebra_to_toml(m.algebra().presentation()),
            module_toml: graded_module_to_toml(m, "algebra.toml"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub skipped: usize,
    pub notes: Vec<String>,
    pub failures: Vec<Counterexample>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            checked: 0,
            skipped: 0,
            notes: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, fail: impl FnOnce() -> Counterexample) {
        self.checked += 1;
        if !ok {
            self.failures.push(fail());
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} checks, {} skipped, {} failures)",
            self.name,
            if self.passed() { "pass" } else { "FAIL" },
            self.checked,
            self.skipped,
            self.failures.len()
        )?;
        for n in &self.notes {
            write!(f, "\n  {n}")?;
        }
        Ok(())
    }
}

/// The CLI command that re-runs the failing check on a counterexample file.
pub fn suite_command(name: &str) -> Option<&'static str> {
    Some(match name {
        "cf-indecomposable" | "shift-iso" => "decompose",
        "pullup-shift" => "pullup",
        "counit-split" | "tr-transfer" | "prufer-equiv" | "f-conditions" => "gradable",
        "syzygy-window" => "syzygy",
        "transpose-bound" => "transpose",
        "pp-purity" => "check",
        _ => return None,
    })
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    match name {
        "cf-indecomposable" => cf_indecomposable(),
        "shift-iso" => shift_iso(),
        "pullup-shift" => pullup_shift(),
        "counit-split" => counit_split(),
        "syzygy-window" => syzygy_window(),
        "transpose-bound" => transpose_bound_suite(seed),
        "tr-transfer" => tr_transfer(),
        "prufer-equiv" => prufer_equiv(),
        "pp-purity" => pp_purity(seed),
        "f-conditions" => f_conditions(),
        other => Err(Error::InvalidArgument(format!(
            "unknown suite `{other}`; available: {}",
            SUITES.join(", ")
        ))),
    }
}

/// Graded indecomposables over GF(2) of total dimension ≤ 4, per corpus algebra.
pub fn small_graded_indecomposables() -> Result<Vec<(&'static str, Vec<GradedModule>)>> {
    algebras(FieldSpec::Prime(2))
        .into_iter()
        .map(|(name, alg)| Ok((name, enumerate_graded(&alg, 4, 4)?.classes)))
        .collect()
}

fn cf_indecomposable() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("cf-indecomposable");
    for (name, classes) in small_graded_indecomposables()? {
        for m in &classes {
            let e = end_ring(m.module())?;
            rep.check(e.local, || {
                Counterexample::graded(format!("{name}: push-down of a graded indecomposable splits"), m)
            });
        }
    }
    Ok(rep)
}

fn shift_iso() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("shift-iso");
    for (name, classes) in small_graded_indecomposables()? {
        for (i, m) in classes.iter().enumerate() {
            for n in &classes[i + 1..] {
                if m.module().dims() != n.module().dims() {
                    continue;
                }
                // distinct shift classes must have non-isomorphic push-downs
                let iso = iso_indecomposable(m.module(), n.module())?;
                rep.check(iso.is_none(), || {
                    Counterexample::graded(format!("{name}: two shift classes push down to isomorphic modules"), n)
                });
            }
            for i in [-2, 1, 3] {
                let s = m.shift(i);
                let ok = iso_indecomposable(s.module(), m.module())?.is_some()
                    && iso_indecomposable(&s.normalized(), m)?.is_some();
                rep.check(ok, || Counterexample::graded(format!("{name}: shift by {i} changes the class"), m));
            }
        }
    }
    Ok(rep)
}

fn pullup_shift() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("pullup-shift");
    for (name, classes) in small_graded_indecomposables()? {
        for m in &classes {
            let (lo, hi) = m.support().expect("nonzero class");
            let r = m.module().reach().unwrap_or(0);
            let (a, b) = (lo - 2 * r - 2, hi + 2 * r + 2);
            let w = pullup_window(m.module(), a, b)?;
            let pq = window_of_pq(m, a, b)?;
            let (fa, fb) = w.faithful_range();
            let dims_ok = (fa..=fb).all(|n| {
                let expected: Vec<usize> = (0..m.module().dims().len()).map(|v| pq.dim_at(v, n)).collect();
                w.piece_dims(n) == expected
            });
            let iso_ok = dims_ok && {
                let left = truncate(w.module(), fa, fb)?;
                let right = truncate(&pq, fa, fb)?;
                is_isomorphic(&left, &right)?.is_some()
            };
            rep.check(iso_ok, || {
                Counterexample::graded(format!("{name}: window [{a},{b}] differs from pq on [{fa},{fb}]"), m)
            });
        }
    }
    Ok(rep)
}

fn counit_split() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("counit-split");
    for (name, classes) in small_graded_indecomposables()? {
        for m in &classes {
            let (lo, hi) = m.support().expect("nonzero class");
            let r = m.module().reach().unwrap_or(0);
            let w = pullup_window(m.module(), lo - r, hi + r)?;
            let (incl, proj) = shift_copy(&w, m)?;
            let c = counit_restriction(&w, m, &incl)?;
            let witness = split_transfer(m.module(), &w, m, &incl, &proj)?;
            let ok = c.is_split_epi && witness.is_some_and(|x| x.verify(m.module(), m.module()));
            rep.check(ok, || Counterexample::graded(format!("{name}: co-unit does not split"), m));
        }
    }
    Ok(rep)
}

/// Graded indecomposables together with shifted pairwise sums.
fn syzygy_inputs(classes: &[GradedModule]) -> Result<Vec<GradedModule>> {
    let mut out = classes.to_vec();
    for (i, m) in classes.iter().enumerate() {
        for n in &classes[i..] {
            for s in [0, -1, -2] {
                out.push(m.direct_sum(&n.shift(s))?);
            }
        }
    }
    Ok(out)
}

fn syzygy_window() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("syzygy-window");
    for (name, classes) in small_graded_indecomposables()? {
        let d = classes.first().map_or(0, |m| m.algebra().max_degree());
        for m in syzygy_inputs(&classes)? {
            let omega = syzygy(&m)?;
            let (a, b) = m.support().expect("nonzero");
            let ok = omega.support().is_none_or(|(lo, hi)| a - d <= lo && hi <= b + d);
            rep.check(ok, || {
                Counterexample::graded(
                    format!("{name}: ΩM has support {:?}, outside [{}, {}]", omega.support(), a - d, b + d),
                    &m,
                )
            });
        }
    }
    Ok(rep)
}

/// Random graded modules: sums of one to three graded indecomposables with shifts in `[-2, 2]`.
pub fn random_graded_modules(classes: &[GradedModule], count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<GradedModule>> {
    let mut out = Vec::new();
    if classes.is_empty() {
        return Ok(out);
    }
    for _ in 0..count {
        let parts = rng.gen_range(1..=3);
        let mut acc = classes[rng.gen_range(0..classes.len())].shift(rng.gen_range(-2..=2));
        for _ in 1..parts {
            let next = classes[rng.gen_range(0..classes.len())].shift(rng.gen_range(-2..=2));
            acc = acc.direct_sum(&next)?;
        }
        out.push(acc);
    }
    Ok(out)
}

fn transpose_bound_suite(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("transpose-bound");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (name, alg) in algebras(FieldSpec::Prime(3)) {
        let classes = enumerate_graded(&alg, 3, 3)?.classes;
        for m in random_graded_modules(&classes, 20, &mut rng)? {
            let (grl, bound) = transpose_bound(&m)?;
            rep.check(grl <= bound, || {
                Counterexample::graded(format!("{name}: gr.l.(Tr N) = {grl} exceeds {bound}"), &m)
            });
        }
    }
    Ok(rep)
}

/// Whether `M` is projective, i.e. its minimal presentation has no relations.
pub fn is_projective(m: &Module) -> Result<bool> {
    Ok(minimal_presentation_ungraded(m)?.p1.generators().is_empty())
}

fn tr_transfer() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("tr-transfer");
    let budget = Budget::default();
    let mut decided = 0;
    for (name, alg) in algebras(FieldSpec::Prime(2)) {
        for m in enumerate_modules(&alg, 3)? {
            if is_projective(&m)? {
                continue;
            }
            let tr = transpose(&m)?;
            let trtr = transpose(&tr)?;
            rep.check(is_isomorphic(&trtr, &m)?.is_some(), || {
                Counterexample::plain(format!("{name}: Tr Tr M is not isomorphic to M"), &m)
            });
            let (a, b) = (decide(&m, budget)?, decide(&tr, budget)?);
            if matches!(a, GradabilityVerdict::Unknown(_)) || matches!(b, GradabilityVerdict::Unknown(_)) {
                rep.skipped += 1;
                continue;
            }
            decided += 1;
            rep.check(a.label() == b.label(), || {
                Counterexample::plain(format!("{name}: M is {a} but Tr M is {b}"), &m)
            });
        }
        for g in enumerate_graded(&alg, 3, 3)?.classes {
            let left = transpose_graded(&g)?;
            let right = transpose(g.module())?;
            rep.check(is_isomorphic(left.module(), &right)?.is_some(), || {
                Counterexample::graded(format!("{name}: q Tr M differs from Tr q M"), &g)
            });
        }
    }
    rep.notes.push(format!("{decided} modules with decided verdicts on both sides"));
    Ok(rep)
}

/// Modules for the tower comparison: indecomposables of dimension ≤ 3 over each corpus algebra.
fn prufer_inputs() -> Result<Vec<(&'static str, Module)>> {
    let mut out = Vec::new();
    for (name, alg) in algebras(FieldSpec::Prime(3)) {
        let dim = if name == "kronecker" { 2 } else { 3 };
        for m in enumerate_modules(&alg, dim)? {
            out.push((name, m));
        }
    }
    Ok(out)
}

fn prufer_equiv() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("prufer-equiv");
    let budget = Budget::default();
    let (mut gradable, mut ungradable) = (0, 0);
    for (name, m) in prufer_inputs()? {
        let verdict = decide(&m, budget)?;
        let scan = finite_type_scan(&build_tower(&m)?, budget.prufer_bound)?;
        match verdict {
            GradabilityVerdict::Gradable(_) => {
                gradable += 1;
                rep.check(scan.stabilized, || {
                    Counterexample::plain(format!("{name}: gradable but the tower grows {:?}", scan.growth), &m)
                });
            }
            GradabilityVerdict::Ungradable(_) => {
                ungradable += 1;
                rep.check(!scan.stabilized, || {
                    Counterexample::plain(format!("{name}: ungradable but the tower stabilized"), &m)
                });
            }
            GradabilityVerdict::Unknown(_) => rep.skipped += 1,
        }
    }
    rep.notes.push(format!("{gradable} gradable, {ungradable} ungradable"));
    Ok(rep)
}

/// Per-vertex bases of the submodule generated by the given global vectors.
pub fn generated_submodule(m: &Module, elems: &[Vec<Scalar>]) -> Vec<Mat> {
    let f = m.field();
    let paths = m.path_actions();
    let mut cols: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); m.dims().len()];
    for x in elems {
        let parts = m.split_vector(x);
        for (p, b) in m.algebra().basis().iter().enumerate() {
            cols[b.target].push(paths[p].mul_vec(&parts[b.source]));
        }
    }
    cols.iter()
        .enumerate()
        .map(|(v, c)| {
            let mat = Mat::from_cols(f, m.dims()[v], c);
            if mat.cols() == 0 || mat.rank() == 0 {
                Mat::zeros(f, m.dims()[v], 0)
            } else {
                mat.column_space()
            }
        })
        .collect()
}

pub fn random_vector(m: &Module, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let f = m.field();
    let p = f.characteristic().max(2) as i64;
    (0..m.total_dim()).map(|_| f.from_i64(rng.gen_range(0..p))).collect()
}

/// A random submodule embedding `M ⊆ N` with `N` a sum of up to two indecomposables.
pub fn random_embedding(classes: &[Module], rng: &mut ChaCha8Rng) -> Result<(Module, Module, ModuleMap)> {
    let mut n = classes[rng.gen_range(0..classes.len())].clone();
    if rng.gen_bool(0.5) {
        n = n.direct_sum(&classes[rng.gen_range(0..classes.len())])?;
    }
    let k = rng.gen_range(1..=2);
    let elems: Vec<Vec<Scalar>> = (0..k).map(|_| random_vector(&n, rng)).collect();
    let basis = generated_submodule(&n, &elems);
    let m = n.submodule(&basis)?;
    Ok((m, n, ModuleMap { blocks: basis }))
}

fn pp_purity(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("pp-purity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (name, alg) in algebras(FieldSpec::Prime(3)) {
        let classes = enumerate_modules(&alg, 3)?;
        for _ in 0..100 {
            let (m, n, iota) = random_embedding(&classes, &mut rng)?;
            let c = purity(&iota, &m, &n)?;
            rep.check(c.agree(), || {
                Counterexample::plain(format!("{name}: purity routes disagree (split = {})", c.split), &n)
            });
        }
    }
    for (name, alg) in algebras(FieldSpec::Prime(2)) {
        let small: Vec<Module> = enumerate_modules(&alg, 4)?;
        for m in &small {
            for _ in 0..2 {
                let tuple = vec![random_vector(m, &mut rng)];
                let phi = pp_generator(m, &tuple)?;
                for n in &small {
                    let image = vec![random_vector(n, &mut rng)];
                    let by_formula = pp_eval(&phi, n, &image)?;
                    let by_hom = pp_type_leq(m, &tuple, n, &image)?.is_some();
                    rep.check(by_formula == by_hom, || {
                        Counterexample::plain(format!("{name}: generator formula disagrees with Hom"), m)
                    });
                    if let Some(f) = hom(m, n)?.basis.first() {
                        let pushed = vec![f.global().mul_vec(&tuple[0])];
                        rep.check(pp_eval(&phi, n, &pushed)?, || {
                            Counterexample::plain(format!("{name}: pp-type not preserved by a map"), m)
                        });
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Findings for one representation-finite algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTypeSummary {
    pub ungraded_classes: usize,
    pub gradable: usize,
    pub graded_shift_classes: usize,
    pub max_graded_length: i64,
}

/// Enumerates ungraded and graded indecomposables of dimension ≤ `dim` and decides each.
pub fn finite_type_summary(alg: &Arc<GradedAlgebra>, dim: usize, max_grl: usize) -> Result<(FiniteTypeSummary, Vec<Module>)> {
    let ungraded = enumerate_modules(alg, dim)?;
    let mut gradable = 0;
    let mut bad = Vec::new();
    for m in &ungraded {
        match decide(m, Budget::default())? {
            GradabilityVerdict::Gradable(c) if c.verify(m) => gradable += 1,
            _ => bad.push(m.clone()),
        }
    }
    let graded = enumerate_graded(alg, max_grl, dim)?;
    Ok((
        FiniteTypeSummary {
            ungraded_classes: ungraded.len(),
            gradable,
            graded_shift_classes: graded.classes.len(),
            max_graded_length: graded.max_graded_length,
        },
        bad,
    ))
}

fn f_conditions() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("f-conditions");
    let f = FieldSpec::Prime(3);
    let cases: Vec<(&str, Arc<GradedAlgebra>, usize)> = vec![
        ("k[x]/(x^2)", truncated_polynomial(f, 2), 3),
        ("k[x]/(x^3)", truncated_polynomial(f, 3), 3),
        ("A2", linear_quiver(f, 2, 1), 3),
        ("A3", linear_quiver(f, 3, 1), 3),
    ];
    for (name, alg, dim) in cases {
        let (s, bad) = finite_type_summary(&alg, dim, dim)?;
        for m in &bad {
            rep.check(false, || Counterexample::plain(format!("{name}: no grading certificate"), m));
        }
        rep.checked += s.gradable;
        rep.check(s.graded_shift_classes == s.ungraded_classes, || Counterexample {
            description: format!(
                "{name}: {} graded shift classes for {} ungraded classes",
                s.graded_shift_classes, s.ungraded_classes
            ),
            algebra_toml: algebra_to_toml(alg.presentation()),
            module_toml: String::new(),
        });
        rep.notes.push(format!(
            "{name}: {} ungraded classes, {} gradable, {} shift classes, max gr.l. {}",
            s.ungraded_classes, s.gradable, s.graded_shift_classes, s.max_graded_length
        ));
    }
    Ok(rep)
}

/// The ungradable Kronecker module with both arrows acting by 1.
pub fn kronecker_r1(field: FieldSpec) -> Module {
    kronecker_band(&kronecker(field), 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_lists_names() {
        let e = run_suite("nope", 0).unwrap_err().to_string();
        assert!(e.contains("f-conditions") && e.contains("pp-purity"));
    }

    #[test]
    fn generated_submodule_is_closed() {
        let r = truncated_polynomial(FieldSpec::Prime(3), 3);
        let m = crate::corpus::cyclic_module(&r, 3);
        let x = crate::module_rep::vector(FieldSpec::Prime(3), &[0, 1, 0]);
        let b = generated_submodule(&m, &[x]);
        assert_eq!(b[0].cols(), 2);
        assert!(m.is_submodule(&b));
    }
}
