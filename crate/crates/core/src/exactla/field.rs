use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Prime(u32),
    Rationals,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    /// Parses `"Q"` or `"GF(p)"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(inner) = s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            let p: u64 = inner
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad field `{s}`")))?;
            return FieldSpec::prime(p);
        }
        Err(Error::Parse(format!("unknown field `{s}` (expected \"Q\" or \"GF(p)\")")))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rationals => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            FieldSpec::Prime(p) => Scalar::Fp {
                v: v.rem_euclid(p as i64) as u32,
                p,
            },
            FieldSpec::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        match *self {
            FieldSpec::Prime(_) => {
                let d = self.from_i64(den);
                if d.is_zero() {
                    return Err(Error::InvalidArgument(format!(
                        "denominator {den} vanishes in {self}"
                    )));
                }
                Ok(self.from_i64(num) * d.inv())
            }
            FieldSpec::Rationals => Ok(Scalar::Q(BigRational::new(num.into(), den.into()))),
        }
    }

    /// Parses an integer or `a/b` literal.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad scalar `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                self.from_ratio(n, d)
            }
            None => Ok(self.from_i64(s.parse().map_err(|_| bad())?)),
        }
    }

    /// All field elements, for finite fields only.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match *self {
            FieldSpec::Prime(p) => Some((0..p as i64).map(|v| self.from_i64(v)).collect()),
            FieldSpec::Rationals => None,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Rationals => write!(f, "Q"),
        }
    }
}

/// A field element. Residues are kept in `[0, p)`; rationals in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Fp { v: u32, p: u32 },
    Q(BigRational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Fp { p, .. } => FieldSpec::Prime(*p),
            Scalar::Q(_) => FieldSpec::Rationals,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Fp { v, p } => {
                // Fermat
                let mut result: u64 = 1;
                let mut base = *v as u64;
                let m = *p as u64;
                let mut e = m - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        result = result * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                Scalar::Fp { v: result as u32, p: *p }
            }
            Scalar::Q(q) => Scalar::Q(q.recip()),
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut result = self.field().one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Some(n) when the element is an integer (for finite fields: the residue).
    pub fn to_integer(&self) -> Option<i64> {
        match self {
            Scalar::Fp { v, .. } => Some(*v as i64),
            Scalar::Q(q) if q.is_integer() => q.to_integer().to_i64(),
            Scalar::Q(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            Scalar::Fp { .. } => None,
        }
    }

    /// A compact text form: residues as integers, rationals as `a` or `a/b`.
    pub fn to_text(&self) -> String {
        match self {
            Scalar::Fp { v, .. } => v.to_string(),
            Scalar::Q(q) if q.is_integer() => q.numer().to_string(),
            Scalar::Q(q) => format!("{}/{}", q.numer(), q.denom()),
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Q(q) if q.is_negative())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between elements of different fields")
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u64 + *b as u64) % *p as u64) as u32,
                p: *p,
            },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => mismatch(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32,
                p: *p,
            },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            _ => mismatch(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u64 * *b as u64) % *p as u64) as u32,
                p: *p,
            },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => mismatch(),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Fp { v, p } => Scalar::Fp {
                v: (*p - *v) % *p,
                p: *p,
            },
            Scalar::Q(q) => Scalar::Q(-q),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fields() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("GF(3)").unwrap(), FieldSpec::Prime(3));
        assert_eq!(FieldSpec::parse("GF(4)"), Err(Error::NotPrime(4)));
        assert!(FieldSpec::parse("R").is_err());
        assert_eq!(FieldSpec::prime(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn residues_are_canonical() {
        let f = FieldSpec::Prime(5);
        assert_eq!(f.from_i64(-1), Scalar::Fp { v: 4, p: 5 });
        let two = f.from_i64(2);
        assert_eq!(&two * &two.inv(), f.one());
        assert_eq!(f.parse_scalar("1/2").unwrap(), f.from_i64(3));
    }

    #[test]
    fn rationals_lowest_terms() {
        let q = FieldSpec::Rationals;
        let a = q.parse_scalar("2/4").unwrap();
        assert_eq!(a.to_text(), "1/2");
        assert_eq!(q.parse_scalar("-6/-3").unwrap().to_text(), "2");
        assert_eq!((&a + &a), q.one());
    }
}
