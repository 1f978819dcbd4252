use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hom::{HomSpace, ModuleMap};
use crate::exactla::{coprime_split, minimal_polynomial, FieldSpec, Mat, Poly, Scalar};

/// A subalgebra of `M_n(k)` given by a linearly independent basis that is closed under
/// multiplication and contains the identity.
#[derive(Debug, Clone)]
pub(crate) struct MatrixAlgebra {
    field: FieldSpec,
    n: usize,
    basis: Vec<Mat>,
    pivots: Vec<usize>,
    pivot_inverse: Mat,
}

/// Outcome of the search for a non-trivial idempotent.
#[derive(Debug, Clone)]
pub(crate) enum Split {
    Local { certified: bool },
    /// An element whose minimal polynomial factors as `g * h` with coprime factors.
    Element { x: Mat, g: Poly, h: Poly },
}

impl MatrixAlgebra {
    pub fn new(field: FieldSpec, n: usize, basis: Vec<Mat>) -> Self {
        let k = basis.len();
        let flat: Vec<Vec<Scalar>> = basis.iter().map(Mat::flatten).collect();
        let pivots = if k == 0 {
            vec![]
        } else {
            // independent rows of the (n^2 x k) coordinate matrix
            let bt = Mat::from_cols(field, n * n, &flat).transpose();
            bt.rref().1
        };
        debug_assert_eq!(pivots.len(), k, "basis must be independent");
        let square = Mat::from_cols(field, n * n, &flat).select_rows(&pivots);
        let pivot_inverse = square.inverse().unwrap_or_else(|| Mat::zeros(field, 0, 0));
        MatrixAlgebra {
            field,
            n,
            basis,
            pivots,
            pivot_inverse,
        }
    }

    pub fn from_hom(space: &HomSpace) -> Self {
        let n: usize = space.source_dims.iter().sum();
        let basis = space.basis.iter().map(ModuleMap::global).collect();
        MatrixAlgebra::new(space.field, n, basis)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an element known to lie in the algebra.
    pub fn coords(&self, x: &Mat) -> Vec<Scalar> {
        let flat = x.flatten();
        let v: Vec<Scalar> = self.pivots.iter().map(|&i| flat[i].clone()).collect();
        self.pivot_inverse.mul_vec(&v)
    }

    pub fn element(&self, coords: &[Scalar]) -> Mat {
        let mut out = Mat::zeros(self.field, self.n, self.n);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&b.scale(c));
            }
        }
        out
    }

    /// `structure[i][j]` are the coordinates of `b_i * b_j` (matrix product).
    pub fn structure_constants(&self) -> Vec<Vec<Vec<Scalar>>> {
        self.basis
            .iter()
            .map(|a| self.basis.iter().map(|b| self.coords(&a.mul(b))).collect())
            .collect()
    }

    /// Coordinates of a basis of the Jacobson radical.
    pub fn radical(&self) -> Vec<Vec<Scalar>> {
        let k = self.dim();
        if k == 0 {
            return vec![];
        }
        match self.field {
            FieldSpec::Rationals => {
                let mut gram = Mat::zeros(self.field, k, k);
                for i in 0..k {
                    for j in 0..k {
                        gram.set(i, j, self.basis[i].mul(&self.basis[j]).trace());
                    }
                }
                gram.kernel().columns()
            }
            FieldSpec::Prime(p) => self.radical_char_p(p as u64),
        }
    }

    fn radical_char_p(&self, p: u64) -> Vec<Vec<Scalar>> {
        let k = self.dim();
        let mut current: Vec<Vec<Scalar>> = (0..k)
            .map(|i| {
                let mut e = vec![self.field.zero(); k];
                e[i] = self.field.one();
                e
            })
            .collect();
        let mut l = 0u32;
        while p.pow(l + 1) <= self.n as u64 {
            l += 1;
        }
        for i in 0..=l {
            if current.is_empty() {
                break;
            }
            let elems: Vec<Mat> = current.iter().map(|c| self.element(c)).collect();
            let mut g = Mat::zeros(self.field, elems.len(), k);
            for (s, x) in elems.iter().enumerate() {
                for (j, y) in self.basis.iter().enumerate() {
                    g.set(s, j, self.field.from_i64(trace_functional(&x.mul(y), p, i) as i64));
                }
            }
            let ker = g.transpose().kernel();
            current = ker
                .columns()
                .iter()
                .map(|c| {
                    let mut acc = vec![self.field.zero(); k];
                    for (cs, v) in c.iter().zip(&current) {
                        if cs.is_zero() {
                            continue;
                        }
                        for (a, b) in acc.iter_mut().zip(v) {
                            *a = &*a + &(cs * b);
                        }
                    }
                    acc
                })
                .collect();
        }
        current
    }

    /// Decides locality or returns a splitting element. `rad` are radical coordinates.
    pub fn find_split(&self, rad: &[Vec<Scalar>], seed: u64) -> Split {
        let k = self.dim();
        let f = self.field;
        if k == 0 || k - rad.len() <= 1 {
            return Split::Local { certified: true };
        }
        let try_element = |x: &Mat| -> Option<Split> {
            let m = minimal_polynomial(x).ok()?;
            let (g, h) = coprime_split(&m)?;
            Some(Split::Element { x: x.clone(), g, h })
        };
        for b in &self.basis {
            if let Some(s) = try_element(b) {
                return s;
            }
        }
        // Complement of rad inside the coordinate space.
        let rad_mat = Mat::from_cols(f, k, rad);
        let comp_cols = if rad.is_empty() {
            Mat::identity(f, k)
        } else {
            rad_mat.complement_basis()
        };
        let comp: Vec<usize> = (0..comp_cols.cols())
            .map(|j| (0..k).find(|&i| !comp_cols.get(i, j).is_zero()).unwrap())
            .collect();
        let full = if rad.is_empty() {
            comp_cols.clone()
        } else {
            rad_mat.hstack(&comp_cols)
        };
        let full_inv = full.inverse().expect("complement completes a basis");
        let r = rad.len();
        let quotient_part = |x: &Mat| -> Vec<Scalar> {
            let y = full_inv.mul_vec(&self.coords(x));
            y[r..].to_vec()
        };
        let cs: Vec<&Mat> = comp.iter().map(|&i| &self.basis[i]).collect();
        let commutative = cs.iter().enumerate().all(|(i, a)| {
            cs[i + 1..]
                .iter()
                .all(|b| quotient_part(&a.mul(b).sub(&b.mul(a))).iter().all(Scalar::is_zero))
        });
        if let (true, FieldSpec::Prime(p)) = (commutative, f) {
            let q = cs.len();
            let mut frob = Mat::zeros(f, q, q);
            for (j, c) in cs.iter().enumerate() {
                let v = quotient_part(&c.pow(p as u64));
                for (i, x) in v.into_iter().enumerate() {
                    let val = if i == j { &x - &f.one() } else { x };
                    frob.set(i, j, val);
                }
            }
            let fixed = frob.kernel();
            if fixed.cols() <= 1 {
                return Split::Local { certified: true };
            }
            let one = quotient_part(&Mat::identity(f, self.n));
            let one_m = Mat::from_cols(f, q, &[one]);
            for u in fixed.columns() {
                if one_m.hstack(&Mat::from_cols(f, q, &[u.clone()])).rank() < 2 {
                    continue;
                }
                let mut x = Mat::zeros(f, self.n, self.n);
                for (c, b) in u.iter().zip(&cs) {
                    x = x.add(&b.scale(c));
                }
                if let Some(s) = try_element(&x) {
                    return s;
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trials = 400;
        for _ in 0..trials {
            let coeffs: Vec<Scalar> = (0..k)
                .map(|_| match f {
                    FieldSpec::Prime(p) => f.from_i64(rng.gen_range(0..p as i64)),
                    FieldSpec::Rationals => f.from_i64(rng.gen_range(-3..=3)),
                })
                .collect();
            if let Some(s) = try_element(&self.element(&coeffs)) {
                return s;
            }
        }
        Split::Local { certified: false }
    }
}

/// `(Tr(Z^(p^i)) mod p^(i+1)) / p^i` for the integer lift `Z` of `z`.
fn trace_functional(z: &Mat, p: u64, i: u32) -> u64 {
    let modulus = p.pow(i + 1);
    let n = z.rows();
    let lift: Vec<u64> = z
        .entries()
        .iter()
        .map(|s| s.to_integer().unwrap() as u64 % modulus)
        .collect();
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n * n];
        for r in 0..n {
            for t in 0..n {
                let x = a[r * n + t];
                if x == 0 {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] = (out[r * n + c] + x * b[t * n + c]) % modulus;
                }
            }
        }
        out
    };
    let mut e = p.pow(i);
    let mut result: Vec<u64> = (0..n * n).map(|j| u64::from(j % (n + 1) == 0)).collect();
    let mut base = lift;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    let tr = (0..n).map(|j| result[j * n + j]).sum::<u64>() % modulus;
    let scale = p.pow(i);
    debug_assert_eq!(tr % scale, 0);
    (tr / scale) % p
}

/// `End(M)` as an abstract algebra: structure constants on a basis of endomorphisms,
/// a radical basis (coordinates), and the locality flag.
#[derive(Debug, Clone)]
pub struct EndRing {
    pub basis: Vec<ModuleMap>,
    /// `structure[i][j]` = coordinates of `basis[i] ∘ basis[j]`.
    pub structure: Vec<Vec<Vec<Scalar>>>,
    pub radical: Vec<Vec<Scalar>>,
    pub local: bool,
    /// False when locality over Q rests on an unsuccessful splitting search.
    pub certified: bool,
}

impl EndRing {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn radical_dim(&self) -> usize {
        self.radical.len()
    }

    pub(crate) fn from_space(space: HomSpace, seed: u64) -> EndRing {
        let alg = MatrixAlgebra::from_hom(&space);
        let structure = alg.structure_constants();
        let radical = alg.radical();
        let (local, certified) = match alg.find_split(&radical, seed) {
            Split::Local { certified } => (true, certified),
            Split::Element { .. } => (false, true),
        };
        EndRing {
            basis: space.basis,
            structure,
            radical,
            local,
            certified,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_of_dual_numbers_mod_two() {
        let f = FieldSpec::Prime(2);
        let one = Mat::identity(f, 2);
        let x = Mat::from_i64(f, &[&[0, 0], &[1, 0]]);
        let a = MatrixAlgebra::new(f, 2, vec![one, x]);
        let rad = a.radical();
        assert_eq!(rad, vec![vec![f.zero(), f.one()]]);
        assert!(matches!(a.find_split(&rad, 0), Split::Local { certified: true }));
    }

    #[test]
    fn full_matrix_ring_is_semisimple_and_splits() {
        for f in [FieldSpec::Prime(2), FieldSpec::Prime(3), FieldSpec::Rationals] {
            let mut basis = Vec::new();
            for i in 0..2 {
                for j in 0..2 {
                    let mut m = Mat::zeros(f, 2, 2);
                    m.set(i, j, f.one());
                    basis.push(m);
                }
            }
            let a = MatrixAlgebra::new(f, 2, basis);
            assert!(a.radical().is_empty());
            assert!(matches!(a.find_split(&[], 1), Split::Element { .. }));
        }
    }

    #[test]
    fn field_extension_is_local() {
        // F_4 inside M_2(F_2): span{1, c} with c the companion matrix of t^2 + t + 1
        let f = FieldSpec::Prime(2);
        let c = Mat::from_i64(f, &[&[0, 1], &[1, 1]]);
        let a = MatrixAlgebra::new(f, 2, vec![Mat::identity(f, 2), c]);
        let rad = a.radical();
        assert!(rad.is_empty());
        assert!(matches!(a.find_split(&rad, 0), Split::Local { certified: true }));
    }

    #[test]
    fn radical_in_characteristic_three_with_large_n() {
        // k[x]/(x^4) acting on itself over GF(3): n = 4 > p, radical = span{x, x^2, x^3}
        let f = FieldSpec::Prime(3);
        let mut x = Mat::zeros(f, 4, 4);
        for i in 0..3 {
            x.set(i + 1, i, f.one());
        }
        let basis = vec![Mat::identity(f, 4), x.clone(), x.pow(2), x.pow(3)];
        let a = MatrixAlgebra::new(f, 4, basis);
        let rad = a.radical();
        assert_eq!(rad.len(), 3);
        for r in &rad {
            assert!(r[0].is_zero());
        }
    }
}
