//! Noncommutative Gröbner completion in the path algebra under deglex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::presentation::QuiverPresentation;
use crate::error::{Error, Result};
use crate::exactla::{FieldSpec, Scalar};

/// A non-trivial path, ordered by length then lexicographically by arrow index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<usize>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type PathPoly = BTreeMap<Word, Scalar>;

pub(crate) fn leading(p: &PathPoly) -> Option<(&Word, &Scalar)> {
    p.iter().next_back()
}

fn add_scaled(target: &mut PathPoly, coeff: &Scalar, prefix: &[usize], p: &PathPoly, suffix: &[usize]) {
    for (w, c) in p {
        let mut word = Vec::with_capacity(prefix.len() + w.0.len() + suffix.len());
        word.extend_from_slice(prefix);
        word.extend_from_slice(&w.0);
        word.extend_from_slice(suffix);
        let key = Word(word);
        let v = coeff * c;
        match target.get_mut(&key) {
            Some(old) => {
                *old = &*old + &v;
                if old.is_zero() {
                    target.remove(&key);
                }
            }
            None => {
                if !v.is_zero() {
                    target.insert(key, v);
                }
            }
        }
    }
}

fn find_subword(hay: &[usize], needle: &[usize]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| &hay[i..i + needle.len()] == needle)
}

/// A reduced set of monic polynomials with distinct leading words.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub(crate) field: FieldSpec,
    pub(crate) elements: Vec<PathPoly>,
}

impl GroebnerBasis {
    pub fn leading_words(&self) -> impl Iterator<Item = &Word> {
        self.elements.iter().map(|g| leading(g).unwrap().0)
    }

    /// Full reduction to normal form.
    pub fn reduce(&self, p: &PathPoly) -> PathPoly {
        let mut p = p.clone();
        let mut done = PathPoly::new();
        let neg_one = -self.field.one();
        while let Some((w, c)) = p.pop_last() {
            let hit = self.elements.iter().find_map(|g| {
                let lw = leading(g).unwrap().0;
                find_subword(&w.0, &lw.0).map(|i| (g, i, lw.0.len()))
            });
            match hit {
                Some((g, i, len)) => {
                    // w = u * lm(g) * v; subtract c * u g v (its leading term cancels w)
                    let prefix = &w.0[..i];
                    let suffix = &w.0[i + len..];
                    let mut rest = g.clone();
                    rest.pop_last();
                    add_scaled(&mut p, &(&c * &neg_one), prefix, &rest, suffix);
                }
                None => {
                    done.insert(w, c);
                }
            }
        }
        done
    }

    /// Whether some leading word occurs inside `word`.
    pub fn is_reducible(&self, word: &[usize]) -> bool {
        self.leading_words().any(|lw| find_subword(word, &lw.0).is_some())
    }
}

fn make_monic(p: &mut PathPoly) {
    if let Some((_, c)) = leading(p) {
        let inv = c.inv();
        for v in p.values_mut() {
            *v = &*v * &inv;
        }
    }
}

fn max_len(p: &PathPoly) -> usize {
    leading(p).map_or(0, |(w, _)| w.0.len())
}

/// Buchberger-style completion. Fails when a word longer than `cap` appears.
pub fn complete(pres: &QuiverPresentation, cap: usize) -> Result<GroebnerBasis> {
    let field = pres.field;
    let mut basis = GroebnerBasis {
        field,
        elements: Vec::new(),
    };
    let mut queue: Vec<PathPoly> = pres
        .relations
        .iter()
        .map(|r| {
            let mut p = PathPoly::new();
            for (c, w) in &r.terms {
                add_scaled(&mut p, c, &[], &BTreeMap::from([(Word(w.clone()), field.one())]), &[]);
            }
            p
        })
        .collect();
    let mut processed_pairs: std::collections::HashSet<(usize, usize, usize)> = Default::default();
    loop {
        while let Some(p) = queue.pop() {
            let mut r = basis.reduce(&p);
            if r.is_empty() {
                continue;
            }
            if max_len(&r) > cap {
                return Err(Error::InfiniteDimensional(cap));
            }
            make_monic(&mut r);
            // Re-reduce existing elements against the new one.
            let new_basis = GroebnerBasis {
                field,
                elements: vec![r.clone()],
            };
            let mut kept = Vec::new();
            for g in basis.elements.drain(..) {
                let lw = leading(&g).unwrap().0.clone();
                if new_basis.is_reducible(&lw.0) {
                    queue.push(g);
                } else {
                    kept.push(g);
                }
            }
            kept.push(r);
            basis.elements = kept;
            processed_pairs.clear();
        }
        // tail-reduce
        for i in 0..basis.elements.len() {
            let g = basis.elements[i].clone();
            let (lw, lc) = {
                let (w, c) = leading(&g).unwrap();
                (w.clone(), c.clone())
            };
            let mut tail = g.clone();
            tail.pop_last();
            let others = GroebnerBasis {
                field,
                elements: basis
                    .elements
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, e)| e.clone())
                    .collect(),
            };
            let mut reduced = others.reduce(&tail);
            reduced.insert(lw, lc);
            basis.elements[i] = reduced;
        }
        // S-polynomials from overlaps: lm(g1) = u w, lm(g2) = w v.
        let mut found = false;
        let n = basis.elements.len();
        for i in 0..n {
            for j in 0..n {
                let a = leading(&basis.elements[i]).unwrap().0 .0.clone();
                let b = leading(&basis.elements[j]).unwrap().0 .0.clone();
                for k in 1..a.len().min(b.len()) {
                    if i == j && k == a.len() {
                        continue;
                    }
                    if a[a.len() - k..] != b[..k] {
                        continue;
                    }
                    if !processed_pairs.insert((i, j, k)) {
                        continue;
                    }
                    let u = &a[..a.len() - k];
                    let v = &b[k..];
                    if u.len() + b.len() > cap {
                        return Err(Error::InfiniteDimensional(cap));
                    }
                    let mut s = PathPoly::new();
                    add_scaled(&mut s, &field.one(), &[], &basis.elements[i], v);
                    add_scaled(&mut s, &(-field.one()), u, &basis.elements[j], &[]);
                    let r = basis.reduce(&s);
                    if !r.is_empty() {
                        queue.push(r);
                        found = true;
                    }
                }
            }
        }
        if !found {
            return Ok(basis);
        }
    }
}
