//! Exact scalars over the prime fields GF(2), GF(3), GF(5), GF(7), the field
//! GF(4) = GF(2)[t]/(t² + t + 1), and the rationals.
//!
//! Finite field elements are stored by their index in the fixed enumeration
//! order `0, 1, …, p−1` (for GF(4): `0, 1, t, t+1`, i.e. the 2-bit pair
//! `b1·t + b0`). That index doubles as the canonical byte encoding used by
//! [`GroupSet`](crate::groups::GroupSet).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Prime(u8),
    Gf4,
    Rational,
}

impl FieldSpec {
    pub const SUPPORTED_PRIMES: [u8; 4] = [2, 3, 5, 7];

    pub fn prime(p: u8) -> Result<Self> {
        if Self::SUPPORTED_PRIMES.contains(&p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::UnknownField(format!("GF({p})")))
        }
    }

    pub fn enumerable(self) -> bool {
        !matches!(self, FieldSpec::Rational)
    }

    /// Number of elements, `None` for ℚ.
    pub fn order(self) -> Option<usize> {
        match self {
            FieldSpec::Prime(p) => Some(p as usize),
            FieldSpec::Gf4 => Some(4),
            FieldSpec::Rational => None,
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            FieldSpec::Prime(p) => p as u32,
            FieldSpec::Gf4 => 2,
            FieldSpec::Rational => 0,
        }
    }

    pub(crate) fn require_enumerable(self) -> Result<usize> {
        self.order().ok_or(Error::NotEnumerable(self))
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::rational(BigRational::zero()),
            _ => Scalar::small(self, 0),
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::rational(BigRational::one()),
            _ => Scalar::small(self, 1),
        }
    }

    /// Image of an integer under the canonical ring map ℤ → F.
    pub fn from_int(self, value: i64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::small(self, value.rem_euclid(p as i64) as u8),
            FieldSpec::Gf4 => Scalar::small(self, value.rem_euclid(2) as u8),
            FieldSpec::Rational => Scalar::rational(BigRational::from_integer(value.into())),
        }
    }

    /// Element with the given enumeration index.
    pub fn from_index(self, index: u8) -> Result<Scalar> {
        let q = self.require_enumerable()?;
        if (index as usize) < q {
            Ok(Scalar::small(self, index))
        } else {
            Err(Error::Parse(format!("index {index} out of range for {self}")))
        }
    }

    /// All elements in the fixed enumeration order.
    pub fn elements(self) -> Result<Vec<Scalar>> {
        let q = self.require_enumerable()?;
        Ok((0..q as u8).map(|i| Scalar::small(self, i)).collect())
    }

    /// Non-zero elements in enumeration order.
    pub fn units(self) -> Result<Vec<Scalar>> {
        Ok(self.elements()?.into_iter().skip(1).collect())
    }

    /// Parses `"3"`, `"-1"`, `"t+1"`, `"-3/4"` and the like into an element.
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match self {
            FieldSpec::Prime(_) => s
                .parse::<i64>()
                .map(|v| self.from_int(v))
                .map_err(|_| Error::Parse(format!("`{s}` is not an element of {self}"))),
            FieldSpec::Gf4 => {
                let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
                let index = match compact.as_str() {
                    "0" => 0,
                    "1" => 1,
                    "t" | "2" => 2,
                    "t+1" | "1+t" | "3" => 3,
                    _ => return Err(Error::Parse(format!("`{s}` is not an element of GF(4)"))),
                };
                Ok(Scalar::small(self, index))
            }
            FieldSpec::Rational => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let num: BigInt = num.parse().map_err(|_| Error::Parse(format!("`{s}` is not a rational number")))?;
                let den: BigInt = den.parse().map_err(|_| Error::Parse(format!("`{s}` is not a rational number")))?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::rational(BigRational::new(num, den)))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Gf4 => write!(f, "GF(4)"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "GF(2)" => Ok(FieldSpec::Prime(2)),
            "GF(3)" => Ok(FieldSpec::Prime(3)),
            "GF(4)" => Ok(FieldSpec::Gf4),
            "GF(5)" => Ok(FieldSpec::Prime(5)),
            "GF(7)" => Ok(FieldSpec::Prime(7)),
            "Q" => Ok(FieldSpec::Rational),
            _ => Err(Error::UnknownField(s.to_string())),
        }
    }
}

/// Finite-field kernels on raw element indices.
pub(crate) mod small {
    #[inline]
    pub fn add(q: u8, a: u8, b: u8) -> u8 {
        if q == 4 {
            a ^ b
        } else {
            ((a as u16 + b as u16) % q as u16) as u8
        }
    }

    #[inline]
    pub fn neg(q: u8, a: u8) -> u8 {
        if q == 4 || a == 0 {
            a
        } else {
            q - a
        }
    }

    #[inline]
    pub fn mul(q: u8, a: u8, b: u8) -> u8 {
        if q == 4 {
            let (a1, a0) = (a >> 1, a & 1);
            let (b1, b0) = (b >> 1, b & 1);
            // t² = t + 1
            let hi = (a1 & b1) ^ (a1 & b0) ^ (a0 & b1);
            let lo = (a1 & b1) ^ (a0 & b0);
            (hi << 1) | lo
        } else {
            ((a as u16 * b as u16) % q as u16) as u8
        }
    }

    pub fn inv(q: u8, a: u8) -> Option<u8> {
        if a == 0 {
            return None;
        }
        (1..q).find(|&b| mul(q, a, b) == 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value {
    Small(u8),
    Rational(Box<BigRational>),
}

/// An exact field element tagged with its field.
///
/// Mixing fields in arithmetic is a programming error and panics; the public
/// linear-algebra entry points validate fields before computing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: FieldSpec,
    value: Value,
}

impl Scalar {
    fn small(field: FieldSpec, index: u8) -> Self {
        Scalar { field, value: Value::Small(index) }
    }

    pub fn rational(value: BigRational) -> Self {
        Scalar { field: FieldSpec::Rational, value: Value::Rational(Box::new(value)) }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Enumeration index for finite-field elements.
    pub fn index(&self) -> Option<u8> {
        match self.value {
            Value::Small(i) => Some(i),
            Value::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(r) => Some(r),
            Value::Small(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Small(i) => *i == 0,
            Value::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Small(i) => *i == 1,
            Value::Rational(r) => r.is_one(),
        }
    }

    fn q(&self) -> u8 {
        match self.field {
            FieldSpec::Prime(p) => p,
            FieldSpec::Gf4 => 4,
            FieldSpec::Rational => 0,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match &self.value {
            Value::Small(a) => {
                small::inv(self.q(), *a).map(|b| Scalar::small(self.field, b)).ok_or(Error::DivisionByZero)
            }
            Value::Rational(r) => {
                if r.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::rational(r.recip()))
                }
            }
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.inv()?)
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    fn check_field(&self, rhs: &Scalar) {
        assert_eq!(self.field, rhs.field, "arithmetic across fields ({} vs {})", self.field, rhs.field);
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field.cmp(&other.field).then_with(|| match (&self.value, &other.value) {
            (Value::Small(a), Value::Small(b)) => a.cmp(b),
            (Value::Rational(a), Value::Rational(b)) => a.cmp(b),
            (Value::Small(_), Value::Rational(_)) => Ordering::Less,
            (Value::Rational(_), Value::Small(_)) => Ordering::Greater,
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.value, self.field) {
            (Value::Small(i), FieldSpec::Gf4) => f.write_str(["0", "1", "t", "t+1"][*i as usize]),
            (Value::Small(i), _) => write!(f, "{i}"),
            (Value::Rational(r), _) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl Scalar {
    pub(crate) fn is_minus_one(&self) -> bool {
        (self + &self.field.one()).is_zero()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.check_field(rhs);
        match (&self.value, &rhs.value) {
            (Value::Small(a), Value::Small(b)) => Scalar::small(self.field, small::add(self.q(), *a, *b)),
            (Value::Rational(a), Value::Rational(b)) => Scalar::rational(a.as_ref() + b.as_ref()),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.check_field(rhs);
        match (&self.value, &rhs.value) {
            (Value::Small(a), Value::Small(b)) => Scalar::small(self.field, small::mul(self.q(), *a, *b)),
            (Value::Rational(a), Value::Rational(b)) => Scalar::rational(a.as_ref() * b.as_ref()),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match &self.value {
            Value::Small(a) => Scalar::small(self.field, small::neg(self.q(), *a)),
            Value::Rational(r) => Scalar::rational(-r.as_ref().clone()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_make_examples() {
        let gf3: FieldSpec = "GF(3)".parse().unwrap();
        assert_eq!(gf3, FieldSpec::Prime(3));
        assert!(gf3.enumerable());
        assert_eq!(gf3.elements().unwrap().len(), 3);

        let gf4: FieldSpec = "GF(4)".parse().unwrap();
        let names: Vec<String> = gf4.elements().unwrap().iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["0", "1", "t", "t+1"]);
        let t = gf4.from_index(2).unwrap();
        assert_eq!(&t * &t, gf4.from_index(3).unwrap());

        let q: FieldSpec = "Q".parse().unwrap();
        assert!(!q.enumerable());
        assert!(matches!(q.elements(), Err(Error::NotEnumerable(_))));

        assert!(matches!("GF(9)".parse::<FieldSpec>(), Err(Error::UnknownField(_))));
    }

    #[test]
    fn every_finite_field_satisfies_field_axioms() {
        for spec in ["GF(2)", "GF(3)", "GF(4)", "GF(5)", "GF(7)"] {
            let f: FieldSpec = spec.parse().unwrap();
            let els = f.elements().unwrap();
            for a in &els {
                assert!((a + &(-a)).is_zero());
                if !a.is_zero() {
                    assert!((a * &a.inv().unwrap()).is_one(), "{spec} {a}");
                }
                for b in &els {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for c in &els {
                        assert_eq!(a * &(b + c), &(a * b) + &(a * c));
                        assert_eq!(&(a * b) * c, a * &(b * c));
                    }
                }
            }
            assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
        }
    }

    #[test]
    fn parse_and_display() {
        let q = FieldSpec::Rational;
        assert_eq!(q.parse_scalar("-6/8").unwrap().to_string(), "-3/4");
        assert_eq!(q.parse_scalar("4/2").unwrap().to_string(), "2");
        assert_eq!(q.parse_scalar("1/0"), Err(Error::DivisionByZero));
        let gf3 = FieldSpec::Prime(3);
        assert_eq!(gf3.parse_scalar("-1").unwrap(), gf3.from_int(2));
        assert_eq!(FieldSpec::Gf4.parse_scalar("t + 1").unwrap().index(), Some(3));
    }
}
