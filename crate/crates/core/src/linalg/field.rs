//! Exact scalars over ℚ and GF(p).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Prime { p: u64 },
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        let f = FieldSpec::Prime { p };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldSpec::Rational => Ok(()),
            FieldSpec::Prime { p } => {
                if is_prime(p) {
                    Ok(())
                } else {
                    Err(Error::InvalidField(format!("{p} is not prime")))
                }
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime { p } => p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match *self {
            FieldSpec::Rational => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime { p } => Scalar::Mod { v: 0, p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            FieldSpec::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime { p } => {
                let v = (n as i128).rem_euclid(p as i128) as u64;
                Scalar::Mod { v, p }
            }
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match *self {
            FieldSpec::Rational => Ok(Scalar::Rat(q.clone())),
            FieldSpec::Prime { p } => {
                let modulus = BigInt::from(p);
                let num = q.numer().mod_floor(&modulus).to_u64().unwrap_or(0);
                let den = q.denom().mod_floor(&modulus).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(Error::Parse(format!("{q} has denominator divisible by {p}")));
                }
                Ok(Scalar::Mod { v: num, p } / Scalar::Mod { v: den, p })
            }
        }
    }

    /// Parses `"3"`, `"-2/5"` and similar literals.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let q = match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
                let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                BigRational::new(n, d)
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
                BigRational::from_integer(n)
            }
        };
        self.from_rational(&q)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime { p } => write!(f, "GF({p})"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept gcd-normalized by `BigRational`;
/// residues are kept in `0..p`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Mod { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rational,
            Scalar::Mod { p, .. } => FieldSpec::Prime { p: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_one(),
            Scalar::Mod { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Rat(q) => Scalar::Rat(q.recip()),
            Scalar::Mod { v, p } => Scalar::Mod { v: pow_mod(*v, *p - 2, *p), p: *p },
        }
    }

    /// Integer value when the scalar is an integer that fits in `i64`
    /// (for residues, the symmetric representative).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rat(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Rat(_) => None,
            Scalar::Mod { v, p } => {
                let v = *v as i64;
                let p = *p as i64;
                Some(if v > p / 2 { v - p } else { v })
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => write!(f, "{q}"),
            Scalar::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

fn same_prime(a: u64, b: u64) -> u64 {
    assert_eq!(a, b, "mixed prime fields");
    a
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Mod { v: ((*a as u128 + *b as u128) % p as u128) as u64, p }
            }
            _ => panic!("mixed fields"),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Mod { v: ((*a as u128 + p as u128 - *b as u128) % p as u128) as u64, p }
            }
            _ => panic!("mixed fields"),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Mod { v: ((*a as u128 * *b as u128) % p as u128) as u64, p }
            }
            _ => panic!("mixed fields"),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { v, p } => Scalar::Mod { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => *a += b,
            (s, r) => *s = &*s + r,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => *a -= b,
            (s, r) => *s = &*s - r,
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(FieldSpec::prime(7).is_ok());
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert_eq!(FieldSpec::prime(3).unwrap().characteristic(), 3);
        assert_eq!(FieldSpec::Rational.characteristic(), 0);
    }

    #[test]
    fn modular_arithmetic() {
        let f = FieldSpec::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(&a + &b, f.from_i64(1));
        assert_eq!(&a - &b, f.from_i64(5));
        assert_eq!(&a * &b, f.from_i64(1));
        assert_eq!(a.inv(), b);
        assert_eq!(-&a, f.from_i64(4));
        assert_eq!(f.from_i64(-1).to_i64(), Some(-1));
        // 2 is a primitive cube root of unity mod 7
        let two = f.from_i64(2);
        assert!((&(&two * &two) * &two).is_one());
    }

    #[test]
    fn parse_rationals() {
        let q = FieldSpec::Rational;
        assert_eq!(q.parse("3/2").unwrap().to_string(), "3/2");
        assert_eq!(q.parse("-4/6").unwrap().to_string(), "-2/3");
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(3));
        assert!(f.parse("1/5").is_err());
        assert!(q.parse("x").is_err());
    }
}
