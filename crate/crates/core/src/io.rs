//! TOML algebra and module files.
//!
//! ```toml
//! field = "GF(3)"
//! [quiver]
//! vertices = ["1", "2"]
//! arrows = [{ name = "a", from = "1", to = "2", degree = 0 }]
//! relations = []
//! ```
//!
//! Module files name their algebra by a path relative to the module file. Ungraded actions
//! are `arrow = [[..], ..]` matrices of shape `dim(target) × dim(source)`; graded ones are
//! per-degree blocks `"arrow.n"` from source degree `n`. Missing actions are zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use toml::{Spanned, Value};

use crate::algebra::{GradedAlgebra, QuiverPresentation, Relation};
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Mat, Scalar};
use crate::module_rep::{GradedModule, Module};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDoc {
    field: Spanned<String>,
    quiver: QuiverDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverDoc {
    vertices: Vec<Spanned<String>>,
    #[serde(default)]
    arrows: Vec<Spanned<ArrowDoc>>,
    #[serde(default)]
    relations: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowDoc {
    name: String,
    from: String,
    to: String,
    degree: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleDoc {
    algebra: Spanned<String>,
    #[serde(default)]
    graded: bool,
    #[serde(default)]
    spaces: BTreeMap<Spanned<String>, Spanned<Value>>,
    #[serde(default)]
    action: BTreeMap<Spanned<String>, Spanned<Value>>,
}

/// 1-based line and column of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

struct Source<'a> {
    origin: &'a str,
    text: &'a str,
}

impl Source<'_> {
    fn error(&self, span: Option<Range<usize>>, msg: impl std::fmt::Display) -> Error {
        let (line, col) = line_col(self.text, span.map_or(0, |s| s.start));
        Error::Parse(format!("{}:{line}:{col}: {msg}", self.origin))
    }

    fn parse<T: serde::de::DeserializeOwned>(&self) -> Result<T> {
        toml::from_str(self.text).map_err(|e| self.error(e.span(), e.message().trim()))
    }
}

/// Parses an algebra file; `origin` labels diagnostics.
pub fn parse_algebra(text: &str, origin: &str) -> Result<QuiverPresentation> {
    let src = Source { origin, text };
    let doc: AlgebraDoc = src.parse()?;
    let field = FieldSpec::parse(doc.field.get_ref()).map_err(|e| src.error(Some(doc.field.span()), e))?;
    let mut pres = QuiverPresentation::new(field);
    for v in &doc.quiver.vertices {
        if pres.vertex_index(v.get_ref()).is_ok() {
            return Err(src.error(Some(v.span()), format!("duplicate vertex `{}`", v.get_ref())));
        }
        pres = pres.with_vertex(v.get_ref());
    }
    for a in &doc.quiver.arrows {
        let d = a.get_ref();
        if pres.arrow_index(&d.name).is_ok() {
            return Err(src.error(Some(a.span()), format!("duplicate arrow `{}`", d.name)));
        }
        pres.add_arrow(&d.name, &d.from, &d.to, d.degree)
            .map_err(|e| src.error(Some(a.span()), e))?;
    }
    for r in &doc.quiver.relations {
        pres.add_relation(r.get_ref()).map_err(|e| src.error(Some(r.span()), e))?;
    }
    pres.validate().map_err(|e| match e {
        Error::InhomogeneousRelation { index, .. } | Error::NonParallelRelation { index } => {
            src.error(Some(doc.quiver.relations[index].span()), e)
        }
        other => src.error(None, other),
    })?;
    Ok(pres)
}

pub fn load_algebra(path: &Path) -> Result<Arc<GradedAlgebra>> {
    let text = read(path)?;
    let pres = parse_algebra(&text, &path.display().to_string())?;
    GradedAlgebra::build(pres)
}

/// Whether a document is an algebra file (has a `[quiver]` table) rather than a module file.
pub fn is_algebra_document(text: &str) -> bool {
    text.parse::<toml::Table>().is_ok_and(|t| t.contains_key("quiver"))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A module read from a file, graded or not.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyModule {
    Plain(Module),
    Graded(GradedModule),
}

impl AnyModule {
    pub fn module(&self) -> &Module {
        match self {
            AnyModule::Plain(m) => m,
            AnyModule::Graded(g) => g.module(),
        }
    }

    pub fn graded(&self) -> Option<&GradedModule> {
        match self {
            AnyModule::Graded(g) => Some(g),
            AnyModule::Plain(_) => None,
        }
    }
}

/// A module file together with its resolved algebra.
#[derive(Debug, Clone)]
pub struct ModuleData {
    pub algebra_path: PathBuf,
    pub algebra: Arc<GradedAlgebra>,
    pub module: AnyModule,
}

/// The `algebra = ...` entry of a module file.
pub fn module_algebra_path(text: &str, origin: &str) -> Result<String> {
    let src = Source { origin, text };
    let doc: ModuleDoc = src.parse()?;
    Ok(doc.algebra.into_inner())
}

fn scalar(src: &Source, field: FieldSpec, v: &Value, span: Range<usize>) -> Result<Scalar> {
    match (v, field) {
        (Value::Integer(i), _) => Ok(field.from_i64(*i)),
        (Value::String(s), FieldSpec::Rationals) => field.parse_scalar(s).map_err(|e| src.error(Some(span), e)),
        (Value::String(s), FieldSpec::Prime(_)) => Err(src.error(
            Some(span),
            format!("entry `{s}`: use integers over a prime field"),
        )),
        _ => Err(src.error(Some(span), "matrix entries must be integers or \"a/b\" strings")),
    }
}

fn matrix(src: &Source, field: FieldSpec, v: &Value, span: Range<usize>, rows: usize, cols: usize) -> Result<Mat> {
    let bad = |msg: String| src.error(Some(span.clone()), msg);
    let Value::Array(rs) = v else {
        return Err(bad("expected a matrix (array of rows)".into()));
    };
    if rs.len() != rows && !(rows == 0 && rs.is_empty()) {
        return Err(bad(format!("expected {rows} rows, found {}", rs.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, r) in rs.iter().enumerate() {
        let Value::Array(entries) = r else {
            return Err(bad(format!("row {} is not an array", i + 1)));
        };
        if entries.len() != cols {
            return Err(bad(format!("row {} has {} entries, expected {cols}", i + 1, entries.len())));
        }
        for e in entries {
            data.push(scalar(src, field, e, span.clone())?);
        }
    }
    Ok(Mat::from_vec(field, rows, cols, data))
}

fn count(src: &Source, v: &Value, span: Range<usize>) -> Result<usize> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        _ => Err(src.error(Some(span), "dimension must be a non-negative integer")),
    }
}

/// Parses a module file over a known algebra.
pub fn parse_module(text: &str, origin: &str, alg: &Arc<GradedAlgebra>) -> Result<AnyModule> {
    let src = Source { origin, text };
    let doc: ModuleDoc = src.parse()?;
    let pres = alg.presentation();
    let f = alg.field();
    let nv = alg.num_vertices();
    let vertex = |k: &Spanned<String>| {
        pres.vertex_index(k.get_ref()).map_err(|e| src.error(Some(k.span()), e))
    };
    if !doc.graded {
        let mut dims = vec![0; nv];
        for (k, v) in &doc.spaces {
            dims[vertex(k)?] = count(&src, v.get_ref(), v.span())?;
        }
        let mut action: Vec<Mat> = alg
            .arrows()
            .iter()
            .map(|a| Mat::zeros(f, dims[a.target], dims[a.source]))
            .collect();
        for (k, v) in &doc.action {
            let ai = pres.arrow_index(k.get_ref()).map_err(|e| src.error(Some(k.span()), e))?;
            let a = &alg.arrows()[ai];
            action[ai] = matrix(&src, f, v.get_ref(), v.span(), dims[a.target], dims[a.source])?;
        }
        let m = Module::new(alg.clone(), dims, action).map_err(|e| src.error(None, e))?;
        return Ok(AnyModule::Plain(m));
    }
    let mut spaces: Vec<BTreeMap<i64, usize>> = vec![BTreeMap::new(); nv];
    for (k, v) in &doc.spaces {
        let vi = vertex(k)?;
        let Value::Table(t) = v.get_ref() else {
            return Err(src.error(Some(v.span()), "graded spaces map degrees to dimensions"));
        };
        for (deg, dim) in t {
            let n: i64 = deg
                .parse()
                .map_err(|_| src.error(Some(v.span()), format!("degree key `{deg}` is not an integer")))?;
            let d = count(&src, dim, v.span())?;
            if d > 0 {
                spaces[vi].insert(n, d);
            }
        }
    }
    let mut blocks: BTreeMap<(usize, i64), Mat> = BTreeMap::new();
    let mut add_block = |name: &str, deg: &str, v: &Value, span: Range<usize>| -> Result<()> {
        let ai = pres.arrow_index(name).map_err(|e| src.error(Some(span.clone()), e))?;
        let n: i64 = deg
            .parse()
            .map_err(|_| src.error(Some(span.clone()), format!("block degree `{deg}` is not an integer")))?;
        let a = &alg.arrows()[ai];
        let rows = spaces[a.target].get(&(n + a.degree)).copied().unwrap_or(0);
        let cols = spaces[a.source].get(&n).copied().unwrap_or(0);
        blocks.insert((ai, n), matrix(&src, f, v, span, rows, cols)?);
        Ok(())
    };
    for (k, v) in &doc.action {
        match (k.get_ref().rsplit_once('.'), v.get_ref()) {
            (Some((name, deg)), value) => add_block(name, deg, value, v.span())?,
            (None, Value::Table(t)) => {
                for (deg, value) in t {
                    add_block(k.get_ref(), deg, value, v.span())?;
                }
            }
            (None, _) => {
                return Err(src.error(Some(k.span()), "graded actions are given as `arrow.n` blocks"));
            }
        }
    }
    let g = GradedModule::from_blocks(alg.clone(), &spaces, &blocks).map_err(|e| src.error(None, e))?;
    Ok(AnyModule::Graded(g))
}

/// Reads a module file and the algebra file it names.
pub fn load_module(path: &Path) -> Result<ModuleData> {
    let text = read(path)?;
    let origin = path.display().to_string();
    let rel = module_algebra_path(&text, &origin)?;
    let algebra_path = path.parent().unwrap_or(Path::new(".")).join(rel);
    let algebra = load_algebra(&algebra_path)?;
    let module = parse_module(&text, &origin, &algebra)?;
    Ok(ModuleData {
        algebra_path,
        algebra,
        module,
    })
}

fn quote(s: &str) -> String {
    Value::String(s.to_string()).to_string()
}

fn entry_text(x: &Scalar) -> String {
    match x.field() {
        FieldSpec::Prime(_) => x.to_text(),
        FieldSpec::Rationals => quote(&x.to_text()),
    }
}

fn matrix_text(m: &Mat) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let e: Vec<String> = m.row(r).iter().map(entry_text).collect();
            format!("[{}]", e.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn relation_text(pres: &QuiverPresentation, rel: &Relation) -> String {
    let mut out = String::new();
    for (i, (c, path)) in rel.terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -c.clone() } else { c.clone() };
        let sign = match (i, neg) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        };
        let coeff = if abs.is_one() { String::new() } else { format!("{}*", abs.to_text()) };
        let _ = write!(out, "{sign}{coeff}{}", pres.path_text(path));
    }
    out
}

pub fn algebra_to_toml(pres: &QuiverPresentation) -> String {
    let mut out = format!("field = {}\n\n[quiver]\n", quote(&pres.field.to_string()));
    let vs: Vec<String> = pres.vertices.iter().map(|v| quote(v)).collect();
    let _ = writeln!(out, "vertices = [{}]", vs.join(", "));
    let arrows: Vec<String> = pres
        .arrows
        .iter()
        .map(|a| {
            format!(
                "  {{ name = {}, from = {}, to = {}, degree = {} }},\n",
                quote(&a.name),
                quote(&pres.vertices[a.source]),
                quote(&pres.vertices[a.target]),
                a.degree
            )
        })
        .collect();
    let _ = writeln!(out, "arrows = [\n{}]", arrows.concat());
    let rels: Vec<String> = pres.relations.iter().map(|r| quote(&relation_text(pres, r))).collect();
    let _ = writeln!(out, "relations = [{}]", rels.join(", "));
    out
}

pub fn module_to_toml(m: &Module, algebra_path: &str) -> String {
    let pres = m.algebra().presentation();
    let mut out = format!("algebra = {}\ngraded = false\n\n[spaces]\n", quote(algebra_path));
    for (v, d) in m.dims().iter().enumerate() {
        let _ = writeln!(out, "{} = {d}", quote(&pres.vertices[v]));
    }
    out.push_str("\n[action]\n");
    for (a, arrow) in pres.arrows.iter().enumerate() {
        let _ = writeln!(out, "{} = {}", quote(&arrow.name), matrix_text(m.action(a)));
    }
    out
}

pub fn graded_module_to_toml(g: &GradedModule, algebra_path: &str) -> String {
    let m = g.module();
    let pres = m.algebra().presentation();
    let mut out = format!("algebra = {}\ngraded = true\n\n[spaces]\n", quote(algebra_path));
    for v in 0..m.dims().len() {
        let parts: Vec<String> = g
            .vertex_degree_ranges(v)
            .iter()
            .map(|(n, r)| format!("{} = {}", quote(&n.to_string()), r.len()))
            .collect();
        let _ = writeln!(out, "{} = {{ {} }}", quote(&pres.vertices[v]), parts.join(", "));
    }
    out.push_str("\n[action]\n");
    for (a, arrow) in pres.arrows.iter().enumerate() {
        let targets = g.vertex_degree_ranges(arrow.target);
        for (n, src) in g.vertex_degree_ranges(arrow.source) {
            let Some((_, tgt)) = targets.iter().find(|(t, _)| *t == n + arrow.degree) else {
                continue;
            };
            let block = m.action(a).block(tgt.start, src.start, tgt.len(), src.len());
            let _ = writeln!(out, "{} = {}", quote(&format!("{}.{n}", arrow.name)), matrix_text(&block));
        }
    }
    out
}
