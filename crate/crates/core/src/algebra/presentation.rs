use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i64,
}

/// A formal linear combination of non-trivial paths; each path is a list of arrow indices
/// composed left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub terms: Vec<(Scalar, Vec<usize>)>,
}

/// Quiver with integer arrow degrees and relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuiverPresentation {
    pub field: FieldSpec,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
}

impl QuiverPresentation {
    pub fn new(field: FieldSpec) -> Self {
        QuiverPresentation {
            field,
            vertices: Vec::new(),
            arrows: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn with_vertex(mut self, name: &str) -> Self {
        self.vertices.push(name.to_string());
        self
    }

    /// Adds an arrow between named vertices. Panics on unknown names; use
    /// [`QuiverPresentation::add_arrow`] for fallible construction.
    pub fn with_arrow(mut self, name: &str, from: &str, to: &str, degree: i64) -> Self {
        self.add_arrow(name, from, to, degree).expect("known vertices");
        self
    }

    /// Adds a relation written as in corpus files, e.g. `"a*b - 2*c*d"`. Panics on parse errors.
    pub fn with_relation(mut self, text: &str) -> Self {
        self.add_relation(text).expect("valid relation");
        self
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn add_arrow(&mut self, name: &str, from: &str, to: &str, degree: i64) -> Result<()> {
        let source = self.vertex_index(from)?;
        let target = self.vertex_index(to)?;
        if self.arrows.iter().any(|a| a.name == name) {
            return Err(Error::InvalidArgument(format!("duplicate arrow `{name}`")));
        }
        self.arrows.push(Arrow {
            name: name.to_string(),
            source,
            target,
            degree,
        });
        Ok(())
    }

    pub fn add_relation(&mut self, text: &str) -> Result<()> {
        let rel = self.parse_combination(text)?;
        self.relations.push(rel);
        Ok(())
    }

    /// Parses `±`-combinations of `*`-composed arrow names with integer or `a/b` coefficients.
    pub fn parse_combination(&self, text: &str) -> Result<Relation> {
        let mut terms: Vec<(Scalar, Vec<usize>)> = Vec::new();
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(Error::Parse("empty relation".into()));
        }
        let mut sign = 1i64;
        let mut first = true;
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix('+') {
                sign = 1;
                rest = r.trim_start();
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r.trim_start();
            } else if !first {
                return Err(Error::Parse(format!("expected `+` or `-` in `{text}`")));
            }
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = rest[..end].trim();
            rest = rest[end..].trim_start();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in `{text}`")));
            }
            let mut coeff = self.field.from_i64(sign);
            let mut path = Vec::new();
            for factor in term.split('*').map(str::trim) {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in `{text}`")));
                }
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff = &coeff * &self.field.parse_scalar(factor)?;
                } else {
                    path.push(self.arrow_index(factor)?);
                }
            }
            if path.is_empty() {
                return Err(Error::Parse(format!(
                    "term `{term}` has no arrows (trivial paths are not allowed in relations)"
                )));
            }
            for w in path.windows(2) {
                if self.arrows[w[0]].target != self.arrows[w[1]].source {
                    return Err(Error::Parse(format!(
                        "`{}*{}` is not a path",
                        self.arrows[w[0]].name, self.arrows[w[1]].name
                    )));
                }
            }
            if let Some(t) = terms.iter_mut().find(|(_, p)| *p == path) {
                t.0 = &t.0 + &coeff;
            } else {
                terms.push((coeff, path));
            }
        }
        terms.retain(|(c, _)| !c.is_zero());
        Ok(Relation { terms })
    }

    pub fn path_degree(&self, path: &[usize]) -> i64 {
        path.iter().map(|&a| self.arrows[a].degree).sum()
    }

    pub fn path_source(&self, path: &[usize]) -> usize {
        self.arrows[path[0]].source
    }

    pub fn path_target(&self, path: &[usize]) -> usize {
        self.arrows[*path.last().unwrap()].target
    }

    /// Checks parallelism and homogeneity of every relation.
    pub fn validate(&self) -> Result<()> {
        for (index, rel) in self.relations.iter().enumerate() {
            let Some((_, first)) = rel.terms.first() else {
                continue;
            };
            let (s, t, d) = (
                self.path_source(first),
                self.path_target(first),
                self.path_degree(first),
            );
            for (_, p) in &rel.terms {
                if self.path_source(p) != s || self.path_target(p) != t {
                    return Err(Error::NonParallelRelation { index });
                }
                let dp = self.path_degree(p);
                if dp != d {
                    return Err(Error::InhomogeneousRelation {
                        index,
                        detail: format!("{} has degree {d}, {} has degree {dp}", self.path_text(first), self.path_text(p)),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn path_text(&self, path: &[usize]) -> String {
        path.iter()
            .map(|&a| self.arrows[a].name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Arrows reversed, degrees kept, relation paths reversed.
    pub fn opposite(&self) -> QuiverPresentation {
        QuiverPresentation {
            field: self.field,
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    name: a.name.clone(),
                    source: a.target,
                    target: a.source,
                    degree: a.degree,
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| Relation {
                    terms: r
                        .terms
                        .iter()
                        .map(|(c, p)| (c.clone(), p.iter().rev().copied().collect()))
                        .collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_loops() -> QuiverPresentation {
        QuiverPresentation::new(FieldSpec::Rationals)
            .with_vertex("1")
            .with_arrow("a", "1", "1", 0)
            .with_arrow("b", "1", "1", 1)
    }

    #[test]
    fn parse_combination_terms() {
        let p = two_loops();
        let r = p.parse_combination("a*b - b*a + 1/2*a*a*b").unwrap();
        assert_eq!(r.terms.len(), 3);
        assert_eq!(r.terms[1].0, FieldSpec::Rationals.from_i64(-1));
        assert_eq!(r.terms[2].1, vec![0, 0, 1]);
        assert!(p.parse_combination("a*c").is_err());
        assert!(p.parse_combination("").is_err());
        assert!(p.parse_combination("3").is_err());
    }

    #[test]
    fn homogeneity_check() {
        let ok = two_loops().with_relation("a*b - b*a");
        assert!(ok.validate().is_ok());
        let bad = two_loops().with_relation("a - b");
        assert!(matches!(
            bad.validate(),
            Err(Error::InhomogeneousRelation { index: 0, .. })
        ));
    }

    #[test]
    fn non_parallel_rejected() {
        let p = QuiverPresentation::new(FieldSpec::Rationals)
            .with_vertex("1")
            .with_vertex("2")
            .with_arrow("a", "1", "2", 0)
            .with_arrow("b", "2", "1", 0)
            .with_relation("a*b - b*a");
        assert_eq!(p.validate(), Err(Error::NonParallelRelation { index: 0 }));
    }
}
