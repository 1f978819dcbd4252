use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use gradalib::algebra::GradedAlgebra;
use gradalib::functors::pullup_window;
use gradalib::gradability::{decide, Budget, GradabilityVerdict, UngradableWitness};
use gradalib::homalg::{minimal_presentation_ungraded, syzygy, transpose, transpose_graded};
use gradalib::io::{
    algebra_to_toml, graded_module_to_toml, is_algebra_document, load_algebra, load_module, module_to_toml,
    parse_algebra, AnyModule, ModuleData,
};
use gradalib::module_rep::{decompose_seeded, enumerate_graded, enumerate_modules, hom, hom_graded};
use gradalib::pplogic::{pp_eval, pp_generator, pp_type_leq, PpFormula};
use gradalib::prufer::{build_tower, finite_type_scan};
use gradalib::suites::{run_suite, suite_command, SuiteReport, SUITES};
use gradalib::{Error, GradedModule, Module, Result, Scalar};
use serde_json::{json, Value};

use crate::report::{Outcome, Report};
use crate::{Command, PpCommand};

pub fn run(cmd: &Command, seed: u64) -> Result<Report> {
    let mut r = Report::new(cmd.name(), seed);
    match cmd {
        Command::Check { file } => check(&mut r, file)?,
        Command::Decompose { module } => decompose_cmd(&mut r, module, seed)?,
        Command::Hom { m, n, degree } => hom_cmd(&mut r, m, n, *degree)?,
        Command::Gradable {
            module,
            budget,
            oracle_max_dim,
            expect,
            cert_out,
        } => {
            let budget = Budget {
                prufer_bound: *budget,
                oracle_max_dim: *oracle_max_dim,
            };
            gradable(&mut r, module, budget, expect.as_deref(), cert_out.as_deref())?
        }
        Command::Pullup { module, window } => pullup(&mut r, module, window)?,
        Command::Prufer { module, bound } => prufer(&mut r, module, *bound)?,
        Command::Syzygy { module, out } => syzygy_cmd(&mut r, module, out.as_deref())?,
        Command::Transpose { module, out } => transpose_cmd(&mut r, module, out.as_deref())?,
        Command::Pp { op } => pp(&mut r, op)?,
        Command::Enumerate {
            algebra,
            max_dim,
            graded,
            max_grl,
            out,
        } => enumerate(&mut r, algebra, *max_dim, *graded, *max_grl, out.as_deref())?,
        Command::Verify { suite, all, out } => verify(&mut r, suite.as_deref(), *all, out, seed)?,
    }
    Ok(r)
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn load(r: &mut Report, path: &Path) -> Result<ModuleData> {
    let data = load_module(path)?;
    r.input(path);
    r.input(&data.algebra_path);
    Ok(data)
}

fn absolute(path: &Path) -> String {
    fs::canonicalize(path).unwrap_or_else(|_| path.to_path_buf()).display().to_string()
}

/// Writes a module together with a copy of its algebra into `dir`.
fn write_bundle(dir: &Path, alg: &GradedAlgebra, module_toml: impl FnOnce(&str) -> String) -> Result<PathBuf> {
    write_file(&dir.join("algebra.toml"), &algebra_to_toml(alg.presentation()))?;
    let path = dir.join("module.toml");
    write_file(&path, &module_toml("algebra.toml"))?;
    Ok(path)
}

fn dims_text(m: &Module) -> String {
    format!("{:?}", m.dims())
}

fn graded_json(g: &GradedModule) -> Value {
    json!({
        "dims": g.module().dims(),
        "support": g.support(),
        "graded_length": g.graded_length(),
        "degree_dims": g.degree_dims().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
    })
}

fn check(r: &mut Report, file: &Path) -> Result<()> {
    let text = fs::read_to_string(file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
    if is_algebra_document(&text) {
        let pres = parse_algebra(&text, &file.display().to_string())?;
        let alg = GradedAlgebra::build(pres)?;
        r.input(file);
        let basis: Vec<String> = (0..alg.dim()).map(|i| alg.basis_name(i)).collect();
        r.set("kind", json!("algebra"));
        r.set("field", json!(alg.field().to_string()));
        r.set("vertices", json!(alg.num_vertices()));
        r.set("arrows", json!(alg.arrows().len()));
        r.set("dim", json!(alg.dim()));
        r.set("basis", json!(basis));
        r.set("max_degree", json!(alg.max_degree()));
        r.set("positively_graded", json!(alg.is_positively_graded()));
        r.line(format!(
            "algebra over {}: {} vertices, {} arrows, dimension {}",
            alg.field(),
            alg.num_vertices(),
            alg.arrows().len(),
            alg.dim()
        ));
        r.line(format!("basis: {}", basis.join(", ")));
    } else {
        let data = load(r, file)?;
        let m = data.module.module();
        r.set("kind", json!("module"));
        r.set("dims", json!(m.dims()));
        r.set("total_dim", json!(m.total_dim()));
        r.set("graded", json!(data.module.graded().is_some()));
        r.line(format!("module with dimension vector {}", dims_text(m)));
        if let Some(g) = data.module.graded() {
            r.set("grading", graded_json(g));
            r.line(format!("graded, support {:?}, graded length {}", g.support(), g.graded_length()));
        }
    }
    Ok(())
}

fn decompose_cmd(r: &mut Report, path: &Path, seed: u64) -> Result<()> {
    let data = load(r, path)?;
    let (summands, ok, certified): (Vec<Value>, bool, bool) = match &data.module {
        AnyModule::Graded(g) => {
            let d = decompose_seeded(g, seed)?;
            let s = d.summands.iter().map(|s| graded_json(&s.module)).collect();
            (s, d.verify(g), d.certified())
        }
        AnyModule::Plain(m) => {
            let d = decompose_seeded(m, seed)?;
            let s = d.summands.iter().map(|s| json!({ "dims": s.module.dims() })).collect();
            (s, d.verify(m), d.certified())
        }
    };
    r.line(format!("{} indecomposable summand(s)", summands.len()));
    for (i, s) in summands.iter().enumerate() {
        r.line(format!("  {i}: dims {}", s["dims"]));
    }
    if !certified {
        r.line("locality of some summand rests on a heuristic search");
    }
    if !ok {
        r.line("decomposition maps do not verify");
        r.escalate(Outcome::Violation);
    }
    r.set("summands", json!(summands));
    r.set("indecomposable", json!(summands.len() == 1));
    r.set("certified", json!(certified));
    r.set("verified", json!(ok));
    Ok(())
}

fn hom_cmd(r: &mut Report, m: &Path, n: &Path, degree: Option<i64>) -> Result<()> {
    let (a, b) = (load(r, m)?, load(r, n)?);
    let space = match (degree, a.module.graded(), b.module.graded()) {
        (Some(k), Some(x), Some(y)) => hom_graded(x, y, k)?,
        (Some(_), _, _) => return Err(Error::InvalidArgument("--degree needs two graded modules".into())),
        _ => hom(a.module.module(), b.module.module())?,
    };
    r.set("dim", json!(space.dim()));
    r.set("degree", json!(degree));
    r.line(match degree {
        Some(k) => format!("dim Hom_{k}(M, N) = {}", space.dim()),
        None => format!("dim Hom(M, N) = {}", space.dim()),
    });
    Ok(())
}

fn witness_text(w: &UngradableWitness) -> String {
    match w {
        UngradableWitness::DerivationInfeasible { summand } => {
            format!("derivation system infeasible on summand {summand}")
        }
        UngradableWitness::ExhaustiveSearch { summand, candidates } => {
            format!("exhaustive search on summand {summand}: {candidates} rank-compatible gradings, none isomorphic")
        }
    }
}

fn gradable(r: &mut Report, path: &Path, budget: Budget, expect: Option<&str>, cert_out: Option<&Path>) -> Result<()> {
    let data = load(r, path)?;
    r.budget = json!({ "prufer_bound": budget.prufer_bound, "oracle_max_dim": budget.oracle_max_dim });
    let m = data.module.module();
    let verdict = decide(m, budget)?;
    r.set("verdict", json!(verdict.label()));
    r.line(verdict.label());
    match &verdict {
        GradabilityVerdict::Gradable(cert) => {
            let ok = cert.verify(m);
            r.set("certificate_verified", json!(ok));
            r.set("certificate", graded_json(&cert.graded));
            let name = data.algebra_path.file_name().map_or("algebra.toml".into(), |f| f.to_string_lossy().into_owned());
            r.certificates.insert("grading".into(), graded_module_to_toml(&cert.graded, &name));
            r.line(format!("certificate support {:?}, verified: {ok}", cert.graded.support()));
            if !ok {
                r.escalate(Outcome::Violation);
            }
            if let Some(out) = cert_out {
                write_file(out, &graded_module_to_toml(&cert.graded, &absolute(&data.algebra_path)))?;
            }
        }
        GradabilityVerdict::Ungradable(w) => {
            r.set("witness", json!(witness_text(w)));
            r.line(witness_text(w));
        }
        GradabilityVerdict::Unknown(why) => {
            r.set("reason", json!(why));
            r.line(format!("budget exhausted: {why}"));
            r.escalate(Outcome::BudgetExhausted);
        }
    }
    if let Some(e) = expect {
        let matches = match e {
            "gradable" => verdict.is_gradable(),
            _ => verdict.is_ungradable(),
        };
        r.set("expected", json!(e));
        if !matches && !matches!(verdict, GradabilityVerdict::Unknown(_)) {
            r.line(format!("expected {e}"));
            r.escalate(Outcome::Violation);
        }
    }
    Ok(())
}

fn parse_window(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::InvalidArgument(format!("window `{s}` is not of the form a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    Ok((a, b))
}

fn pullup(r: &mut Report, path: &Path, window: &str) -> Result<()> {
    let (a, b) = parse_window(window)?;
    let data = load(r, path)?;
    let w = pullup_window(data.module.module(), a, b)?;
    let (fa, fb) = w.faithful_range();
    let pieces: serde_json::Map<String, Value> = (a..=b).map(|n| (n.to_string(), json!(w.piece_dims(n)))).collect();
    r.set("window", json!([a, b]));
    r.set("faithful_range", json!([fa, fb]));
    r.set("piece_dims", Value::Object(pieces));
    r.set("total_dim", json!(w.module().total_dim()));
    r.line(format!("window [{a}, {b}], faithful on [{fa}, {fb}], total dimension {}", w.module().total_dim()));
    for n in a..=b {
        r.line(format!("  degree {n}: {:?}", w.piece_dims(n)));
    }
    Ok(())
}

fn prufer(r: &mut Report, path: &Path, bound: usize) -> Result<()> {
    let data = load(r, path)?;
    r.budget = json!({ "prufer_bound": bound });
    let tower = build_tower(data.module.module())?;
    let scan = finite_type_scan(&tower, bound)?;
    let registry: Vec<Value> = scan.registry.iter().map(|m| json!(m.dims())).collect();
    r.set("growth", json!(scan.growth));
    r.set("stabilized", json!(scan.stabilized));
    r.set("stabilized_at", json!(scan.stabilized_at));
    r.set("classes", json!(registry));
    r.line(format!("classes after Y[1..{bound}]: {:?}", scan.growth));
    r.line(if scan.stabilized {
        format!("stabilized at Y[{}]", scan.stabilized_at.unwrap_or(0))
    } else {
        "no stabilization within the bound".into()
    });
    Ok(())
}

fn syzygy_cmd(r: &mut Report, path: &Path, out: Option<&Path>) -> Result<()> {
    let data = load(r, path)?;
    match &data.module {
        AnyModule::Graded(g) => {
            let omega = syzygy(g)?;
            let d = g.algebra().max_degree();
            let (a, b) = g.support().ok_or(Error::ZeroModule)?;
            let holds = omega.support().is_none_or(|(lo, hi)| a - d <= lo && hi <= b + d);
            r.set("syzygy", graded_json(&omega));
            r.set("window", json!([a - d, b + d]));
            r.set("window_holds", json!(holds));
            r.line(format!(
                "syzygy dims {}, support {:?}, window [{}, {}]",
                dims_text(omega.module()),
                omega.support(),
                a - d,
                b + d
            ));
            if !holds {
                r.line("syzygy leaves the window");
                r.escalate(Outcome::Violation);
            }
            if let Some(o) = out {
                write_file(o, &graded_module_to_toml(&omega, &absolute(&data.algebra_path)))?;
            }
        }
        AnyModule::Plain(m) => {
            let pres = minimal_presentation_ungraded(m)?;
            let p0 = pres.p0.module().module();
            let omega = p0.submodule(&pres.cover.kernel())?;
            r.set("syzygy", json!({ "dims": omega.dims() }));
            r.line(format!("syzygy dims {}", dims_text(&omega)));
            if let Some(o) = out {
                write_file(o, &module_to_toml(&omega, &absolute(&data.algebra_path)))?;
            }
        }
    }
    Ok(())
}

fn transpose_cmd(r: &mut Report, path: &Path, out: Option<&Path>) -> Result<()> {
    let data = load(r, path)?;
    match &data.module {
        AnyModule::Graded(g) => {
            let tr = transpose_graded(g)?;
            let bound = g.graded_length() + 4 * g.algebra().max_degree();
            let holds = tr.graded_length() <= bound;
            r.set("transpose", graded_json(&tr));
            r.set("bound", json!(bound));
            r.set("bound_holds", json!(holds));
            r.line(format!(
                "Tr M over the opposite algebra: dims {}, graded length {} (bound {bound})",
                dims_text(tr.module()),
                tr.graded_length()
            ));
            if !holds {
                r.escalate(Outcome::Violation);
            }
            if let Some(dir) = out {
                write_bundle(dir, tr.algebra(), |a| graded_module_to_toml(&tr, a))?;
            }
        }
        AnyModule::Plain(m) => {
            let tr = transpose(m)?;
            r.set("transpose", json!({ "dims": tr.dims() }));
            r.line(format!("Tr M over the opposite algebra: dims {}", dims_text(&tr)));
            if let Some(dir) = out {
                write_bundle(dir, tr.algebra(), |a| module_to_toml(&tr, a))?;
            }
        }
    }
    Ok(())
}

fn rows(s: &str) -> Vec<Vec<String>> {
    s.split(';')
        .map(str::trim)
        .filter(|row| !row.is_empty())
        .map(|row| row.split(',').map(|e| e.trim().to_string()).collect())
        .collect()
}

fn parse_tuple(m: &Module, s: &str) -> Result<Vec<Vec<Scalar>>> {
    let f = m.field();
    rows(s)
        .into_iter()
        .map(|row| {
            if row.len() != m.total_dim() {
                return Err(Error::ShapeMismatch(format!(
                    "tuple entry has {} coordinates, module has dimension {}",
                    row.len(),
                    m.total_dim()
                )));
            }
            row.iter().map(|e| f.parse_scalar(e)).collect()
        })
        .collect()
}

fn formula_text(phi: &PpFormula) -> Vec<String> {
    let alg = phi.algebra();
    let render = |m: &[Vec<Vec<Scalar>>]| -> String {
        m.iter()
            .map(|row| row.iter().map(|e| alg.element_text(e)).collect::<Vec<_>>().join(", "))
            .collect::<Vec<_>>()
            .join("; ")
    };
    vec![render(phi.a()), render(phi.b())]
}

fn pp(r: &mut Report, op: &PpCommand) -> Result<()> {
    match op {
        PpCommand::Eval { module, a, b, tuple } => {
            let data = load(r, module)?;
            let m = data.module.module();
            let (ra, rb) = (rows(a), rows(b));
            let ra: Vec<Vec<&str>> = ra.iter().map(|x| x.iter().map(String::as_str).collect()).collect();
            let rb: Vec<Vec<&str>> = rb.iter().map(|x| x.iter().map(String::as_str).collect()).collect();
            let ra: Vec<&[&str]> = ra.iter().map(Vec::as_slice).collect();
            let rb: Vec<&[&str]> = rb.iter().map(Vec::as_slice).collect();
            let phi = PpFormula::parse(data.algebra.clone(), &ra, &rb)?;
            let t = parse_tuple(m, tuple)?;
            let holds = pp_eval(&phi, m, &t)?;
            r.set("holds", json!(holds));
            r.line(if holds { "satisfied" } else { "not satisfied" });
        }
        PpCommand::Leq {
            m,
            tuple,
            n,
            target_tuple,
        } => {
            let (a, b) = (load(r, m)?, load(r, n)?);
            let (ma, nb) = (a.module.module(), b.module.module());
            let (x, y) = (parse_tuple(ma, tuple)?, parse_tuple(nb, target_tuple)?);
            let f = pp_type_leq(ma, &x, nb, &y)?;
            r.set("holds", json!(f.is_some()));
            r.line(if f.is_some() {
                "pp^M(m) ⊆ pp^N(n): a map sends m to n"
            } else {
                "pp^M(m) ⊄ pp^N(n): no map sends m to n"
            });
            if let Some(f) = f {
                let g = f.global();
                let mat: Vec<Vec<String>> =
                    (0..g.rows()).map(|i| g.row(i).iter().map(Scalar::to_text).collect()).collect();
                r.set("map", json!(mat));
            }
        }
        PpCommand::Generator { module, tuple } => {
            let data = load(r, module)?;
            let m = data.module.module();
            let t = parse_tuple(m, tuple)?;
            let phi = pp_generator(m, &t)?;
            let [a, b]: [String; 2] = formula_text(&phi).try_into().expect("two matrices");
            r.set("a", json!(a));
            r.set("b", json!(b));
            r.set("bound_vars", json!(phi.bound_vars()));
            r.line(format!("A = [{a}]"));
            r.line(format!("B = [{b}]"));
        }
    }
    Ok(())
}

fn enumerate(
    r: &mut Report,
    path: &Path,
    max_dim: usize,
    graded: bool,
    max_grl: Option<usize>,
    out: Option<&Path>,
) -> Result<()> {
    let alg: Arc<GradedAlgebra> = load_algebra(path)?;
    r.input(path);
    r.budget = json!({ "max_dim": max_dim, "max_grl": max_grl });
    if graded {
        let e = enumerate_graded(&alg, max_grl.unwrap_or(max_dim), max_dim)?;
        r.set("classes", json!(e.classes.iter().map(graded_json).collect::<Vec<_>>()));
        r.set("count", json!(e.classes.len()));
        r.set("max_graded_length", json!(e.max_graded_length));
        r.line(format!(
            "{} graded indecomposables up to shift, max graded length {}",
            e.classes.len(),
            e.max_graded_length
        ));
        for (i, g) in e.classes.iter().enumerate() {
            r.line(format!("  {i}: dims {}, support {:?}", dims_text(g.module()), g.support()));
            if let Some(dir) = out {
                write_bundle(&dir.join(i.to_string()), &alg, |a| graded_module_to_toml(g, a))?;
            }
        }
    } else {
        let ms = enumerate_modules(&alg, max_dim)?;
        r.set("classes", json!(ms.iter().map(|m| json!({ "dims": m.dims() })).collect::<Vec<_>>()));
        r.set("count", json!(ms.len()));
        r.line(format!("{} indecomposables", ms.len()));
        for (i, m) in ms.iter().enumerate() {
            r.line(format!("  {i}: dims {}", dims_text(m)));
            if let Some(dir) = out {
                write_bundle(&dir.join(i.to_string()), &alg, |a| module_to_toml(m, a))?;
            }
        }
    }
    Ok(())
}

fn dump_failures(rep: &SuiteReport, out: &Path) -> Result<Vec<String>> {
    let mut paths = Vec::new();
    for (i, c) in rep.failures.iter().enumerate() {
        let dir = out.join(&rep.name).join(i.to_string());
        write_file(&dir.join("algebra.toml"), &c.algebra_toml)?;
        let mut notes = format!("{}\n", c.description);
        if !c.module_toml.is_empty() {
            write_file(&dir.join("module.toml"), &c.module_toml)?;
            if let Some(cmd) = suite_command(&rep.name) {
                notes.push_str(&format!("reproduce: gradalib {cmd} module.toml\n"));
            }
        }
        write_file(&dir.join("description.txt"), &notes)?;
        paths.push(dir.display().to_string());
    }
    Ok(paths)
}

fn verify(r: &mut Report, suite: Option<&str>, all: bool, out: &Path, seed: u64) -> Result<()> {
    let names: Vec<&str> = if all { SUITES.to_vec() } else { suite.into_iter().collect() };
    let mut results = serde_json::Map::new();
    for name in names {
        let rep = run_suite(name, seed)?;
        r.line(rep.to_string());
        let dumped = dump_failures(&rep, out)?;
        if !rep.passed() {
            r.escalate(Outcome::Violation);
            for (c, p) in rep.failures.iter().zip(&dumped) {
                r.line(format!("  counterexample {p}: {}", c.description));
            }
        }
        results.insert(
            name.to_string(),
            json!({
                "passed": rep.passed(),
                "checked": rep.checked,
                "skipped": rep.skipped,
                "notes": rep.notes,
                "failures": rep.failures.iter().map(|c| c.description.clone()).collect::<Vec<_>>(),
            }),
        );
    }
    r.set("suites", Value::Object(results));
    Ok(())
}
