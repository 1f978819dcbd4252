//! Finite-dimensional graded algebras given by quivers with homogeneous relations.
//!
//! Paths compose left to right: for arrows `a: v -> w` and `b: w -> u` the path `a*b` runs from
//! `v` to `u`, and a right module acts by `m * (a*b) = (m * a) * b`.

mod groebner;
mod presentation;

use std::collections::HashMap;
use std::sync::Arc;

pub use groebner::{GroebnerBasis, Word};
pub use presentation::{Arrow, QuiverPresentation, Relation};

use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Mat, Scalar};
use groebner::PathPoly;

/// Longest path considered during completion and basis enumeration.
pub const PATH_LENGTH_CAP: usize = 30;

/// A residue path in the normal-word basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisPath {
    pub source: usize,
    pub target: usize,
    pub degree: i64,
    /// Arrow indices; empty for the vertex idempotent.
    pub arrows: Vec<usize>,
}

impl BasisPath {
    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// Algebra elements are coefficient vectors over [`GradedAlgebra::basis`].
pub type Element = Vec<Scalar>;

#[derive(Debug, Clone)]
pub struct GradedAlgebra {
    presentation: QuiverPresentation,
    groebner: GroebnerBasis,
    basis: Vec<BasisPath>,
    index: HashMap<(usize, Vec<usize>), usize>,
    /// `products[i][j]`: sparse coordinates of `basis[i] * basis[j]`.
    products: Vec<Vec<Vec<(usize, Scalar)>>>,
    max_abs_degree: i64,
    nilpotency_index: usize,
}

impl PartialEq for GradedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.presentation == other.presentation
    }
}

impl Eq for GradedAlgebra {}

impl GradedAlgebra {
    pub fn build(presentation: QuiverPresentation) -> Result<Arc<Self>> {
        presentation.validate()?;
        let groebner = groebner::complete(&presentation, PATH_LENGTH_CAP)?;
        let field = presentation.field;

        let mut basis: Vec<BasisPath> = (0..presentation.vertices.len())
            .map(|v| BasisPath {
                source: v,
                target: v,
                degree: 0,
                arrows: vec![],
            })
            .collect();
        let mut frontier: Vec<usize> = (0..basis.len()).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &bi in &frontier {
                let b = basis[bi].clone();
                for (ai, arrow) in presentation.arrows.iter().enumerate() {
                    if arrow.source != b.target {
                        continue;
                    }
                    let mut word = b.arrows.clone();
                    word.push(ai);
                    if groebner.is_reducible(&word) {
                        continue;
                    }
                    if word.len() > PATH_LENGTH_CAP {
                        return Err(Error::InfiniteDimensional(PATH_LENGTH_CAP));
                    }
                    next.push(basis.len());
                    basis.push(BasisPath {
                        source: b.source,
                        target: arrow.target,
                        degree: b.degree + arrow.degree,
                        arrows: word,
                    });
                }
            }
            frontier = next;
        }
        let index: HashMap<(usize, Vec<usize>), usize> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| ((b.source, b.arrows.clone()), i))
            .collect();

        let mut alg = GradedAlgebra {
            presentation,
            groebner,
            max_abs_degree: basis.iter().map(|b| b.degree.abs()).max().unwrap_or(0),
            basis,
            index,
            products: Vec::new(),
            nilpotency_index: 0,
        };
        let n = alg.basis.len();
        let mut products = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let (bi, bj) = (&alg.basis[i], &alg.basis[j]);
                if bi.target != bj.source {
                    continue;
                }
                let mut word = bi.arrows.clone();
                word.extend_from_slice(&bj.arrows);
                let coords = alg.word_coordinates(bi.source, &word);
                products[i][j] = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
            }
        }
        alg.products = products;
        alg.nilpotency_index = alg.compute_nilpotency(field)?;
        Ok(Arc::new(alg))
    }

    fn compute_nilpotency(&self, field: FieldSpec) -> Result<usize> {
        // J^k is spanned by the images of paths of length >= k; its dimension must reach 0.
        let radical: Vec<Element> = self
            .radical_basis()
            .into_iter()
            .map(|i| self.basis_element(i))
            .collect();
        let mut power = radical.clone();
        let mut k = 1;
        while !power.is_empty() {
            if k > self.dim() + 1 {
                return Err(Error::InvalidArgument(
                    "arrow ideal is not nilpotent; only basic algebras are supported".into(),
                ));
            }
            let mut products = Vec::new();
            for x in &power {
                for r in &radical {
                    let p = self.mul(x, r);
                    if p.iter().any(|c| !c.is_zero()) {
                        products.push(p);
                    }
                }
            }
            power = if products.is_empty() {
                vec![]
            } else {
                Mat::from_cols(field, self.dim(), &products)
                    .column_space()
                    .columns()
            };
            k += 1;
        }
        Ok(k)
    }

    fn word_coordinates(&self, source: usize, word: &[usize]) -> Element {
        let field = self.field();
        let mut out = vec![field.zero(); self.basis.len()];
        if word.is_empty() {
            out[self.index[&(source, vec![])]] = field.one();
            return out;
        }
        let poly = PathPoly::from([(Word(word.to_vec()), field.one())]);
        for (w, c) in self.groebner.reduce(&poly) {
            let src = self.presentation.path_source(&w.0);
            out[self.index[&(src, w.0)]] = c;
        }
        out
    }

    pub fn presentation(&self) -> &QuiverPresentation {
        &self.presentation
    }

    pub fn field(&self) -> FieldSpec {
        self.presentation.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisPath] {
        &self.basis
    }

    pub fn num_vertices(&self) -> usize {
        self.presentation.vertices.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.presentation.arrows
    }

    pub fn relations(&self) -> &[Relation] {
        &self.presentation.relations
    }

    /// `d = max{|n| : R_n != 0}`.
    pub fn max_degree(&self) -> i64 {
        self.max_abs_degree
    }

    /// Least `k` with `J^k = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.nilpotency_index
    }

    pub fn is_positively_graded(&self) -> bool {
        self.basis.iter().all(|b| b.degree >= 0)
    }

    pub fn groebner_basis(&self) -> &GroebnerBasis {
        &self.groebner
    }

    pub fn idempotent_index(&self, v: usize) -> usize {
        self.index[&(v, vec![])]
    }

    pub fn basis_index(&self, source: usize, arrows: &[usize]) -> Option<usize> {
        self.index.get(&(source, arrows.to_vec())).copied()
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut e = vec![self.field().zero(); self.dim()];
        e[i] = self.field().one();
        e
    }

    pub fn zero_element(&self) -> Element {
        vec![self.field().zero(); self.dim()]
    }

    pub fn one(&self) -> Element {
        let mut e = self.zero_element();
        for v in 0..self.num_vertices() {
            e[self.idempotent_index(v)] = self.field().one();
        }
        e
    }

    /// Normal form of an arbitrary path, given by arrow indices.
    pub fn path_element(&self, arrows: &[usize]) -> Element {
        assert!(!arrows.is_empty());
        self.word_coordinates(self.presentation.path_source(arrows), arrows)
    }

    pub fn arrow_element(&self, a: usize) -> Element {
        self.path_element(&[a])
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.products[i][j]
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Element {
        let mut out = self.zero_element();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.products[i][j] {
                    out[*k] = &out[*k] + &(&ab * c);
                }
            }
        }
        out
    }

    /// Parses a combination such as `"x*x - 2*x"` or `"1"`/`"e:v"` style idempotents.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let field = self.field();
        let mut total = self.zero_element();
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        // Split into signed terms first so that scalars and idempotents can be handled here.
        let mut terms = Vec::new();
        let mut current = String::new();
        let mut sign = 1i64;
        for (i, ch) in t.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !current.trim().is_empty() {
                terms.push((sign, current.trim().to_string()));
                current.clear();
                sign = if ch == '-' { -1 } else { 1 };
            } else if (ch == '+' || ch == '-') && current.trim().is_empty() {
                sign = if ch == '-' { -sign } else { sign };
            } else {
                current.push(ch);
            }
        }
        if !current.trim().is_empty() {
            terms.push((sign, current.trim().to_string()));
        }
        for (sign, term) in terms {
            let mut coeff = field.from_i64(sign);
            let mut factor_elem: Option<Element> = None;
            for factor in term.split('*').map(str::trim) {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in `{text}`")));
                }
                let piece = if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff = &coeff * &field.parse_scalar(factor)?;
                    continue;
                } else if let Some(v) = factor.strip_prefix("e_") {
                    let vi = self.presentation.vertex_index(v)?;
                    self.basis_element(self.idempotent_index(vi))
                } else {
                    self.arrow_element(self.presentation.arrow_index(factor)?)
                };
                factor_elem = Some(match factor_elem {
                    None => piece,
                    Some(prev) => self.mul(&prev, &piece),
                });
            }
            let elem = factor_elem.unwrap_or_else(|| self.one());
            for (k, c) in elem.iter().enumerate() {
                total[k] = &total[k] + &(&coeff * c);
            }
        }
        Ok(total)
    }

    /// Indices of basis paths of degree `n`.
    pub fn homogeneous_component(&self, n: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree == n).collect()
    }

    /// Indices of basis paths of degree at least `t`.
    pub fn degree_at_least(&self, t: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree >= t).collect()
    }

    /// Basis of the Jacobson radical: all non-trivial residue paths.
    pub fn radical_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.basis[i].is_trivial()).collect()
    }

    pub fn opposite(&self) -> Result<Arc<GradedAlgebra>> {
        GradedAlgebra::build(self.presentation.opposite())
    }

    /// The image of an element under the anti-isomorphism onto `op` (path reversal).
    pub fn to_opposite(&self, op: &GradedAlgebra, x: &[Scalar]) -> Element {
        let mut out = op.zero_element();
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let b = &self.basis[i];
            let img = if b.is_trivial() {
                op.basis_element(op.idempotent_index(b.source))
            } else {
                let rev: Vec<usize> = b.arrows.iter().rev().copied().collect();
                op.path_element(&rev)
            };
            for (k, v) in img.iter().enumerate() {
                out[k] = &out[k] + &(c * v);
            }
        }
        out
    }

    /// Human-readable name of a basis path.
    /// Text accepted by [`GradedAlgebra::parse_element`].
    pub fn element_text(&self, x: &[Scalar]) -> String {
        let mut out = String::new();
        for (i, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            out.push_str(match (out.is_empty(), neg) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            });
            if !abs.is_one() {
                out.push_str(&abs.to_text());
                out.push('*');
            }
            out.push_str(&self.basis_name(i));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn basis_name(&self, i: usize) -> String {
        let b = &self.basis[i];
        if b.is_trivial() {
            format!("e_{}", self.presentation.vertices[b.source])
        } else {
            self.presentation.path_text(&b.arrows)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn truncated_poly(field: FieldSpec, n: usize) -> Arc<GradedAlgebra> {
        let rel = vec!["x"; n].join("*");
        GradedAlgebra::build(
            QuiverPresentation::new(field)
                .with_vertex("1")
                .with_arrow("x", "1", "1", 1)
                .with_relation(&rel),
        )
        .unwrap()
    }

    fn kronecker(field: FieldSpec) -> Arc<GradedAlgebra> {
        GradedAlgebra::build(
            QuiverPresentation::new(field)
                .with_vertex("1")
                .with_vertex("2")
                .with_arrow("a", "1", "2", 0)
                .with_arrow("b", "1", "2", 1),
        )
        .unwrap()
    }

    #[test]
    fn truncated_polynomial_basis() {
        let a = truncated_poly(FieldSpec::Prime(3), 3);
        assert_eq!(a.dim(), 3);
        let names: Vec<String> = (0..3).map(|i| a.basis_name(i)).collect();
        assert_eq!(names, vec!["e_1", "x", "x*x"]);
        assert_eq!(a.max_degree(), 2);
        assert_eq!(a.homogeneous_component(2), vec![2]);
        assert!(a.homogeneous_component(3).is_empty());
        assert_eq!(a.nilpotency_index(), 3);
    }

    #[test]
    fn kronecker_basis() {
        let a = kronecker(FieldSpec::Prime(2));
        assert_eq!(a.dim(), 4);
        assert_eq!(a.max_degree(), 1);
        let deg0: Vec<String> = a.homogeneous_component(0).iter().map(|&i| a.basis_name(i)).collect();
        assert_eq!(deg0, vec!["e_1", "e_2", "a"]);
    }

    #[test]
    fn commuting_loops_accepted() {
        let alg = GradedAlgebra::build(
            QuiverPresentation::new(FieldSpec::Rationals)
                .with_vertex("1")
                .with_arrow("a", "1", "1", 0)
                .with_arrow("b", "1", "1", 1)
                .with_relation("a*b - b*a")
                .with_relation("a*a")
                .with_relation("b*b"),
        )
        .unwrap();
        // k[a,b]/(a^2, b^2): 1, a, b, ab
        assert_eq!(alg.dim(), 4);
    }

    #[test]
    fn inhomogeneous_rejected() {
        let r = GradedAlgebra::build(
            QuiverPresentation::new(FieldSpec::Rationals)
                .with_vertex("1")
                .with_arrow("a", "1", "1", 0)
                .with_arrow("b", "1", "1", 1)
                .with_relation("a - b"),
        );
        assert!(matches!(r, Err(Error::InhomogeneousRelation { .. })));
    }

    #[test]
    fn infinite_dimensional_rejected() {
        let r = GradedAlgebra::build(
            QuiverPresentation::new(FieldSpec::Rationals)
                .with_vertex("1")
                .with_arrow("x", "1", "1", 1),
        );
        assert_eq!(r.unwrap_err(), Error::InfiniteDimensional(PATH_LENGTH_CAP));
    }

    #[test]
    fn opposite_of_kronecker_reverses() {
        let a = kronecker(FieldSpec::Prime(2));
        let op = a.opposite().unwrap();
        assert_eq!(op.arrows()[0].source, 1);
        assert_eq!(op.arrows()[0].target, 0);
        assert_eq!(op.arrows()[1].degree, 1);
        let opop = op.opposite().unwrap();
        assert_eq!(*opop, *a);
    }

    #[test]
    fn opposite_reverses_relations() {
        let p = QuiverPresentation::new(FieldSpec::Rationals)
            .with_vertex("1")
            .with_vertex("2")
            .with_vertex("3")
            .with_arrow("a", "1", "2", 0)
            .with_arrow("b", "2", "3", 0)
            .with_relation("a*b");
        let alg = GradedAlgebra::build(p).unwrap();
        let op = alg.opposite().unwrap();
        assert_eq!(op.relations()[0].terms[0].1, vec![1, 0]);
        assert_eq!(op.dim(), alg.dim());
    }

    #[test]
    fn parse_elements() {
        let a = truncated_poly(FieldSpec::Rationals, 3);
        let e = a.parse_element("x*x - 2*x + 1").unwrap();
        assert_eq!(
            e,
            vec![
                FieldSpec::Rationals.from_i64(1),
                FieldSpec::Rationals.from_i64(-2),
                FieldSpec::Rationals.from_i64(1)
            ]
        );
        assert!(a.parse_element("y").is_err());
    }
}
