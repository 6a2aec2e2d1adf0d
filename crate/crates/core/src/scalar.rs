//! Exact coefficients: rationals in characteristic zero, residues mod an odd prime otherwise.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ground-field characteristic. `Prime(2)` is never constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Characteristic {
    Zero,
    Prime(u32),
}

impl Characteristic {
    /// Parses the CLI-style value: 0 for rationals, otherwise an odd prime.
    pub fn from_u32(p: u32) -> Result<Self> {
        match p {
            0 => Ok(Characteristic::Zero),
            2 => Err(Error::usage("characteristic 2 is not supported")),
            p if is_prime(p) => Ok(Characteristic::Prime(p)),
            p => Err(Error::usage(format!("{p} is not a prime"))),
        }
    }

    pub fn as_u32(self) -> u32 {
        match self {
            Characteristic::Zero => 0,
            Characteristic::Prime(p) => p,
        }
    }

    /// `true` when `v` vanishes in this characteristic.
    pub fn divides(self, v: i64) -> bool {
        match self {
            Characteristic::Zero => v == 0,
            Characteristic::Prime(p) => v.rem_euclid(p as i64) == 0,
        }
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u32())
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element. In characteristic zero small integers stay unboxed and
/// everything else is a normalized `BigRational` that is not an `i64` integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(i64),
    Rat(Box<BigRational>),
    Mod { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn zero(ch: Characteristic) -> Self {
        Self::from_i64(0, ch)
    }

    pub fn one(ch: Characteristic) -> Self {
        Self::from_i64(1, ch)
    }

    pub fn from_i64(v: i64, ch: Characteristic) -> Self {
        match ch {
            Characteristic::Zero => Scalar::Int(v),
            Characteristic::Prime(p) => Scalar::Mod {
                value: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(v: &BigInt, ch: Characteristic) -> Self {
        match ch {
            Characteristic::Zero => Self::from_rational(BigRational::from_integer(v.clone())),
            Characteristic::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Mod { value: r.to_u32().expect("residue fits"), modulus: p }
            }
        }
    }

    /// Reduces a rational into the given characteristic; fails when the
    /// denominator is divisible by p.
    pub fn from_rational_in(r: &BigRational, ch: Characteristic) -> Result<Self> {
        match ch {
            Characteristic::Zero => Ok(Self::from_rational(r.clone())),
            Characteristic::Prime(_) => {
                let num = Self::from_bigint(r.numer(), ch);
                let den = Self::from_bigint(r.denom(), ch);
                if den.is_zero() {
                    return Err(Error::usage(format!("{r} has no image mod {}", ch)));
                }
                Ok(num.div(&den))
            }
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i64() {
                return Scalar::Int(v);
            }
        }
        Scalar::Rat(Box::new(r))
    }

    pub fn characteristic(&self) -> Characteristic {
        match self {
            Scalar::Mod { modulus, .. } => Characteristic::Prime(*modulus),
            _ => Characteristic::Zero,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => *v == 0,
            Scalar::Rat(_) => false,
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(v) => *v == 1,
            Scalar::Rat(_) => false,
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    /// Rational value in characteristic zero.
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Int(v) => BigRational::from_integer(BigInt::from(*v)),
            Scalar::Rat(r) => (**r).clone(),
            Scalar::Mod { value, .. } => BigRational::from_integer(BigInt::from(*value)),
        }
    }

    /// Integer value when the scalar is a characteristic-zero integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Int(v) => Some(BigInt::from(*v)),
            Scalar::Rat(_) => None,
            Scalar::Mod { .. } => None,
        }
    }

    /// Integer lift used by the ℤ-form reduction: residues map to `0..p`.
    pub fn lift(&self) -> Scalar {
        match self {
            Scalar::Mod { value, .. } => Scalar::Int(*value as i64),
            other => other.clone(),
        }
    }

    fn mod_parts(a: &Scalar, b: &Scalar) -> (u64, u64, u64) {
        match (a, b) {
            (Scalar::Mod { value: x, modulus: p }, Scalar::Mod { value: y, modulus: q }) => {
                assert_eq!(p, q, "mixed moduli");
                (*x as u64, *y as u64, *p as u64)
            }
            _ => panic!("mixed characteristics in scalar arithmetic"),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => match a.checked_add(*b) {
                Some(v) => Scalar::Int(v),
                None => Self::from_rational(self.to_rational() + other.to_rational()),
            },
            (Scalar::Mod { .. }, _) | (_, Scalar::Mod { .. }) => {
                let (x, y, p) = Self::mod_parts(self, other);
                Scalar::Mod { value: ((x + y) % p) as u32, modulus: p as u32 }
            }
            _ => Self::from_rational(self.to_rational() + other.to_rational()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => match a.checked_neg() {
                Some(v) => Scalar::Int(v),
                None => Self::from_rational(-self.to_rational()),
            },
            Scalar::Rat(r) => Scalar::Rat(Box::new(-(**r).clone())),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => match a.checked_mul(*b) {
                Some(v) => Scalar::Int(v),
                None => Self::from_rational(self.to_rational() * other.to_rational()),
            },
            (Scalar::Mod { .. }, _) | (_, Scalar::Mod { .. }) => {
                let (x, y, p) = Self::mod_parts(self, other);
                Scalar::Mod { value: ((x * y) % p) as u32, modulus: p as u32 }
            }
            _ => Self::from_rational(self.to_rational() * other.to_rational()),
        }
    }

    pub fn mul_i64(&self, k: i64) -> Scalar {
        self.mul(&Scalar::from_i64(k, self.characteristic()))
    }

    /// Field inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Mod { value, modulus } => {
                let p = *modulus as u64;
                let mut result = 1u64;
                let mut base = *value as u64;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        result = result * base % p;
                    }
                    base = base * base % p;
                    e >>= 1;
                }
                Scalar::Mod { value: result as u32, modulus: *modulus }
            }
            _ => Self::from_rational(self.to_rational().recip()),
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        if let (Scalar::Int(a), Scalar::Int(b)) = (self, other) {
            if *b != 0 && a % b == 0 {
                if let Some(v) = a.checked_div(*b) {
                    return Scalar::Int(v);
                }
            }
        }
        self.mul(&other.inv())
    }

    /// Sign used when rendering; residues are always shown as nonnegative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Int(v) => *v < 0,
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }

    pub fn abs_string(&self) -> String {
        match self {
            Scalar::Int(v) => v.unsigned_abs().to_string(),
            Scalar::Rat(r) => r.abs().to_string(),
            Scalar::Mod { value, .. } => value.to_string(),
        }
    }

    /// Total order used only to make outputs deterministic.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

/// n! as an exact scalar of characteristic zero.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_two_is_rejected() {
        assert!(Characteristic::from_u32(2).is_err());
        assert!(Characteristic::from_u32(9).is_err());
        assert_eq!(Characteristic::from_u32(5).unwrap(), Characteristic::Prime(5));
        assert_eq!(Characteristic::from_u32(0).unwrap(), Characteristic::Zero);
    }

    #[test]
    fn int_overflow_promotes_to_big() {
        let a = Scalar::Int(i64::MAX);
        let b = a.add(&Scalar::Int(1));
        assert!(matches!(b, Scalar::Rat(_)));
        assert_eq!(b.sub(&Scalar::Int(1)), Scalar::Int(i64::MAX));
        let c = a.mul(&Scalar::Int(2)).div(&Scalar::Int(2));
        assert_eq!(c, Scalar::Int(i64::MAX));
    }

    #[test]
    fn rationals_normalize() {
        let half = Scalar::Int(1).div(&Scalar::Int(2));
        assert_eq!(half.to_string(), "1/2");
        assert_eq!(half.add(&half), Scalar::Int(1));
        assert_eq!(Scalar::Int(-3).div(&Scalar::Int(6)).to_string(), "-1/2");
    }

    #[test]
    fn modular_inverse() {
        let ch = Characteristic::Prime(7);
        for v in 1..7 {
            let s = Scalar::from_i64(v, ch);
            assert!(s.mul(&s.inv()).is_one());
        }
        assert_eq!(Scalar::from_i64(-1, ch), Scalar::Mod { value: 6, modulus: 7 });
    }
}
