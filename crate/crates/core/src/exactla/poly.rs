use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use super::field::{FieldSpec, Scalar};
use super::mat::Mat;
use crate::error::{Error, Result};

/// A univariate polynomial, coefficients from low to high degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_i64(field: FieldSpec, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: FieldSpec) -> Self {
        Poly { field, coeffs: vec![] }
    }

    pub fn one(field: FieldSpec) -> Self {
        Poly::new(field, vec![field.one()])
    }

    /// `t - c`
    pub fn linear(c: &Scalar) -> Self {
        let f = c.field();
        Poly::new(f, vec![-c, f.one()])
    }

    pub fn x(field: FieldSpec) -> Self {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv();
        Poly::new(self.field, self.coeffs.iter().map(|c| c * &inv).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
            .collect();
        Poly::new(self.field, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z))
            .collect();
        Poly::new(self.field, c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, c)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut r = Poly::one(self.field);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.deg();
        if self.coeffs.len() <= dd {
            return (Poly::zero(self.field), self.clone());
        }
        let inv = divisor.leading().inv();
        let mut quot = vec![self.field.zero(); self.coeffs.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = &rem[i] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = &rem[idx] - &(&c * d);
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero());
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a * &self.field.from_i64(i as i64))
            .collect();
        Poly::new(self.field, c)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Evaluates at a square matrix (Horner).
    pub fn eval_mat(&self, a: &Mat) -> Mat {
        let n = a.rows();
        let mut acc = Mat::zeros(self.field, n, n);
        let id = Mat::identity(self.field, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a).add(&id.scale(c));
        }
        acc
    }

    fn pow_mod_big(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut result = Poly::one(self.field);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mul(&result).rem(m);
            if e.bit(i) {
                result = result.mul(&base).rem(m);
            }
        }
        result
    }
}

/// Monic polynomial of least degree annihilating `a`.
pub fn minimal_polynomial(a: &Mat) -> Result<Poly> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let field = a.field();
    let n = a.rows();
    let mut powers: Vec<Vec<Scalar>> = vec![Mat::identity(field, n).flatten()];
    let mut current = Mat::identity(field, n);
    loop {
        current = current.mul(a);
        let target = current.flatten();
        let basis = Mat::from_cols(field, n * n, &powers);
        if let Some(coords) = basis.solve_vec(&target) {
            let mut c: Vec<Scalar> = coords.iter().map(|x| -x).collect();
            c.push(field.one());
            return Ok(Poly::new(field, c));
        }
        powers.push(target);
    }
}

/// Square-free decomposition: pairs `(g_i, i)` with `f = lc * prod g_i^i`, each `g_i` square-free
/// and pairwise coprime. Works in characteristic 0 and over prime fields.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let f = f.monic();
    if f.deg() == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if c.deg() > 0 {
        // only reachable in characteristic p: c is a p-th power
        let p = field.characteristic() as usize;
        assert!(p > 0);
        let root = Poly::new(field, c.coeffs.iter().step_by(p).cloned().collect());
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p));
        }
        out.sort_by_key(|(_, m)| *m);
    }
    out
}

fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let p = BigUint::from(field.characteristic());
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = Poly::x(field);
    let mut h = x.clone();
    let mut i = 1;
    while rest.deg() >= 2 * i {
        h = h.pow_mod_big(&p, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.deg() > 0 {
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = f.deg();
    if n == d {
        out.push(f.monic());
        return;
    }
    let field = f.field();
    let p = field.characteristic() as u64;
    loop {
        let a = Poly::new(
            field,
            (0..n).map(|_| field.from_i64(rng.gen_range(0..p) as i64)).collect(),
        );
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            a.pow_mod_big(&e, f).sub(&Poly::one(field))
        };
        let g = f.gcd(&b);
        if g.deg() > 0 && g.deg() < n {
            let other = f.exact_div(&g);
            equal_degree(&g, d, rng, out);
            equal_degree(&other, d, rng, out);
            return;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities, over a prime field.
pub fn factor_prime_field(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    if !f.field().is_finite() {
        return Err(Error::UnsupportedField("factorization needs a prime field".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for (g, mult) in squarefree_decomposition(f) {
        for (h, d) in distinct_degree(&g) {
            let mut parts = Vec::new();
            equal_degree(&h, d, &mut rng, &mut parts);
            out.extend(parts.into_iter().map(|q| (q, mult)));
        }
    }
    out.sort_by(|a, b| (a.0.deg(), a.1).cmp(&(b.0.deg(), b.1)));
    Ok(out)
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 {
        return Some(vec![]);
    }
    let mut ds = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            ds.push(BigInt::from(d));
            if d * d != n {
                ds.push(BigInt::from(n / d));
            }
        }
        d += 1;
        if d > 2_000_000 {
            return None;
        }
    }
    Some(ds)
}

/// Distinct rational roots of a polynomial over Q (rational root theorem).
pub fn rational_roots(f: &Poly) -> Result<Vec<BigRational>> {
    if f.field() != FieldSpec::Rationals {
        return Err(Error::UnsupportedField("rational roots need Q".into()));
    }
    let mut roots = Vec::new();
    let mut f = f.monic();
    if f.is_zero() {
        return Ok(roots);
    }
    if f.coeffs[0].is_zero() {
        roots.push(BigRational::zero());
        while !f.is_zero() && f.coeffs[0].is_zero() {
            f = Poly::new(f.field, f.coeffs[1..].to_vec());
        }
    }
    if f.deg() == 0 {
        return Ok(roots);
    }
    let lcm = f
        .coeffs
        .iter()
        .map(|c| c.as_rational().unwrap().denom().clone())
        .fold(BigInt::one(), |a, b| a.lcm(&b));
    let ints: Vec<BigInt> = f
        .coeffs
        .iter()
        .map(|c| (c.as_rational().unwrap() * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let (Some(num), Some(den)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
        return Ok(roots);
    };
    let mut cands: Vec<BigRational> = Vec::new();
    for a in &num {
        for b in &den {
            for s in [BigInt::one(), -BigInt::one()] {
                let r = BigRational::new(a * &s, b.clone());
                if !cands.contains(&r) {
                    cands.push(r);
                }
            }
        }
    }
    cands.sort();
    for r in cands {
        if f.eval(&Scalar::Q(r.clone())).is_zero() {
            roots.push(r);
        }
    }
    roots.sort();
    Ok(roots)
}

/// A non-trivial factorization `f = g * h` into coprime monic factors, when one is found.
/// Over prime fields this uses the full factorization; over Q square-free decomposition plus
/// rational-root extraction.
pub fn coprime_split(f: &Poly) -> Option<(Poly, Poly)> {
    let f = f.monic();
    if f.deg() < 2 {
        return None;
    }
    if f.field().is_finite() {
        let factors = factor_prime_field(&f).ok()?;
        if factors.len() < 2 {
            return None;
        }
        let (q, m) = &factors[0];
        let g = q.pow(*m);
        let h = f.exact_div(&g);
        return Some((g, h));
    }
    let parts = squarefree_decomposition(&f);
    if parts.len() >= 2 {
        let (q, m) = &parts[0];
        let g = q.pow(*m);
        return Some((g.clone(), f.exact_div(&g)));
    }
    let roots = rational_roots(&f).ok()?;
    if let Some(r) = roots.first() {
        let lin = Poly::linear(&Scalar::Q(r.clone()));
        let mut g = Poly::one(f.field);
        let mut rest = f.clone();
        loop {
            let (q, rem) = rest.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            g = g.mul(&lin);
            rest = q;
        }
        if rest.deg() > 0 {
            return Some((g, rest));
        }
    }
    None
}

/// Some((eigenvalues with multiplicity, eigenbasis)) when `a` is diagonalizable over Q with
/// integer eigenvalues. Eigenbasis columns are grouped by ascending eigenvalue.
pub fn integer_diagonalizable(a: &Mat) -> Result<Option<(Vec<i64>, Mat)>> {
    if a.field() != FieldSpec::Rationals {
        return Err(Error::UnsupportedField(
            "integer diagonalizability is defined over Q".into(),
        ));
    }
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let field = a.field();
    if n == 0 {
        return Ok(Some((vec![], Mat::zeros(field, 0, 0))));
    }
    let m = minimal_polynomial(a)?;
    let roots = rational_roots(&m)?;
    if roots.len() != m.deg() || roots.iter().any(|r| !r.is_integer()) {
        return Ok(None);
    }
    let mut eigenvalues = Vec::new();
    let mut cols = Vec::new();
    for r in &roots {
        let Some(v) = r.to_integer().to_i64() else {
            return Ok(None);
        };
        let shifted = a.sub(&Mat::identity(field, n).scale(&field.from_i64(v)));
        let k = shifted.kernel();
        for c in k.columns() {
            eigenvalues.push(v);
            cols.push(c);
        }
    }
    Ok(Some((eigenvalues, Mat::from_cols(field, n, &cols))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn minpoly_examples() {
        let id = Mat::identity(q(), 2);
        assert_eq!(minimal_polynomial(&id).unwrap(), Poly::from_i64(q(), &[-1, 1]));
        let jordan = Mat::from_i64(q(), &[&[0, 1], &[0, 0]]);
        assert_eq!(minimal_polynomial(&jordan).unwrap(), Poly::from_i64(q(), &[0, 0, 1]));
        let diag = Mat::from_i64(q(), &[&[0, 0], &[0, 1]]);
        assert_eq!(minimal_polynomial(&diag).unwrap(), Poly::from_i64(q(), &[0, -1, 1]));
        assert!(matches!(
            minimal_polynomial(&Mat::zeros(q(), 1, 2)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn factor_over_gf2() {
        let f = FieldSpec::Prime(2);
        // (x+1)^2 (x^2+x+1)
        let p = Poly::from_i64(f, &[1, 1]).pow(2).mul(&Poly::from_i64(f, &[1, 1, 1]));
        let fac = factor_prime_field(&p).unwrap();
        assert_eq!(
            fac,
            vec![(Poly::from_i64(f, &[1, 1]), 2), (Poly::from_i64(f, &[1, 1, 1]), 1)]
        );
    }

    #[test]
    fn factor_over_gf3_splits_equal_degree() {
        let f = FieldSpec::Prime(3);
        // x^2 - 1 = (x-1)(x+1), x^4 - 1 has x^2+1 irreducible too
        let p = Poly::from_i64(f, &[-1, 0, 0, 0, 1]);
        let fac = factor_prime_field(&p).unwrap();
        let prod = fac
            .iter()
            .fold(Poly::one(f), |acc, (g, m)| acc.mul(&g.pow(*m)));
        assert_eq!(prod, p);
        assert_eq!(fac.len(), 3);
    }

    #[test]
    fn p_th_power_squarefree() {
        let f = FieldSpec::Prime(2);
        // x^2 + 1 = (x+1)^2 in char 2
        let p = Poly::from_i64(f, &[1, 0, 1]);
        assert_eq!(squarefree_decomposition(&p), vec![(Poly::from_i64(f, &[1, 1]), 2)]);
    }

    #[test]
    fn integer_diag_examples() {
        let d = Mat::from_i64(q(), &[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let (ev, basis) = integer_diagonalizable(&d).unwrap().unwrap();
        assert_eq!(ev, vec![0, 1, 1]);
        assert_eq!(basis.rank(), 3);
        let j = Mat::from_i64(q(), &[&[0, 1], &[0, 0]]);
        assert_eq!(integer_diagonalizable(&j).unwrap(), None);
        let half = Mat::from_rows(q(), vec![vec![q().from_ratio(1, 2).unwrap()]]).unwrap();
        assert_eq!(integer_diagonalizable(&half).unwrap(), None);
        let gf = Mat::identity(FieldSpec::Prime(3), 1);
        assert!(matches!(integer_diagonalizable(&gf), Err(Error::UnsupportedField(_))));
    }

    #[test]
    fn coprime_split_over_q() {
        // t^2 - t
        let p = Poly::from_i64(q(), &[0, -1, 1]);
        let (g, h) = coprime_split(&p).unwrap();
        assert_eq!(g.mul(&h), p);
        assert!(g.gcd(&h).is_one());
        assert!(coprime_split(&Poly::from_i64(q(), &[0, 0, 1])).is_none());
        // irreducible t^2 - 2 stays whole
        assert!(coprime_split(&Poly::from_i64(q(), &[-2, 0, 1])).is_none());
    }
}
