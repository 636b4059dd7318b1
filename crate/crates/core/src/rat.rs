//! Exact rational scalars and vectors.
//!
//! `Rat` wraps an arbitrary-precision rational that is always reduced with a
//! positive denominator. All geometry in this crate runs on these; there is no
//! floating point anywhere.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number. Serializes as `"p/q"` (or `"p"` when `q = 1`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p / q`; panics on `q = 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRatError(pub String);

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseRatError(s.to_owned());
        match s.split_once('/') {
            None => {
                let p: BigInt = s.trim().parse().map_err(|_| bad())?;
                Ok(Rat(BigRational::from_integer(p)))
            }
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Rat(BigRational::new(p, q)))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

/// A point (or direction) with exact rational coordinates.
pub type RVec = Vec<Rat>;

/// Builds an `RVec` from integer coordinates.
pub fn ivec(coords: &[i64]) -> RVec {
    coords.iter().map(|&c| Rat::from_int(c)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len(), "dot length mismatch");
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += &(x * y);
    }
    acc
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> RVec {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// An affine functional `x ↦ linear · x + constant`, evaluated exactly.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineFunctional {
    pub linear: Vec<Rat>,
    pub constant: Rat,
}

impl AffineFunctional {
    pub fn new(linear: Vec<Rat>, constant: Rat) -> Self {
        AffineFunctional { linear, constant }
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        dot(&self.linear, point) + &self.constant
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        AffineFunctional {
            linear: self.linear.iter().map(|c| c * factor).collect(),
            constant: &self.constant * factor,
        }
    }

    pub fn negate(&self) -> Self {
        AffineFunctional {
            linear: self.linear.iter().map(|c| -c).collect(),
            constant: -&self.constant,
        }
    }

    /// Canonical representative of the positive-scalar class: the first
    /// nonzero coefficient of `(linear, constant)` is scaled to `±1`,
    /// preserving its sign.
    pub fn normalized(&self) -> Self {
        let pivot = self
            .linear
            .iter()
            .chain(std::iter::once(&self.constant))
            .find(|c| !c.is_zero());
        match pivot {
            None => self.clone(),
            Some(p) => self.scale(&p.abs().recip()),
        }
    }
}

impl fmt::Debug for AffineFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?} | {:?}]", self.linear, self.constant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_round_trip() {
        for s in ["3", "-7", "24/25", "-24/25", "0"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("6/4".parse::<Rat>().unwrap(), Rat::ratio(3, 2));
        assert_eq!("3/-2".parse::<Rat>().unwrap(), Rat::ratio(-3, 2));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn normalization_is_canonical() {
        // a/b == c/d iff cross products are equal
        assert_eq!(Rat::ratio(2, 4), Rat::ratio(-1, -2));
        assert_eq!(Rat::ratio(-2, 4), Rat::ratio(1, -2));
        assert!(Rat::ratio(-1, 2).is_negative());
    }

    #[test]
    fn functional_eval() {
        let f = AffineFunctional::new(ivec(&[-1, 0, -49]), Rat::from_int(147));
        assert_eq!(f.eval(&ivec(&[147, 5, 0])), Rat::zero());
        assert_eq!(f.eval(&ivec(&[200, 0, 0])), Rat::from_int(-53));
    }

    #[test]
    fn functional_normalized_keys_equal_classes() {
        let f = AffineFunctional::new(ivec(&[0, 2, -4]), Rat::from_int(6));
        let g = AffineFunctional::new(ivec(&[0, 3, -6]), Rat::from_int(9));
        assert_eq!(f.normalized(), g.normalized());
        let h = g.negate();
        assert_ne!(f.normalized(), h.normalized());
    }
}
