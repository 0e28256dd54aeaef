//! Exact scalar fields: arbitrary-precision rationals and prime fields.
//!
//! A [`Field`] is a small context value (zero-sized for ℚ, the modulus for
//! 𝔽_p) that performs arithmetic on its element type. Matrices carry their
//! field, so a prime field chosen at runtime needs no global state.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("modulus {p} must be below 2^31")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = u64::from(p);
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `Q` for the rationals and `Fp:P` for the prime field of order `P`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let Some(p) = s.strip_prefix("Fp:") else {
            return Err(Error::InvalidField(format!("expected `Q` or `Fp:P`, got `{s}`")));
        };
        let p: u32 = p.parse().map_err(|_| Error::InvalidField(format!("bad modulus in `{s}`")))?;
        FieldSpec::prime(p)
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FieldSpec> for String {
    fn from(spec: FieldSpec) -> String {
        spec.to_string()
    }
}

/// Arithmetic context for an exact field.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// `acc -= factor * x`, the inner step of elimination.
    fn sub_mul_assign(&self, acc: &mut Self::Elem, factor: &Self::Elem, x: &Self::Elem) {
        *acc = self.sub(acc, &self.mul(factor, x));
    }

    fn parse(&self, s: &str) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;

    /// A uniformly chosen small element: integers in `-2..=2` for ℚ, any residue for 𝔽_p.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
}

/// The rationals with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn sub_mul_assign(&self, acc: &mut BigRational, factor: &BigRational, x: &BigRational) {
        if factor.is_zero() || x.is_zero() {
            return;
        }
        *acc -= factor * x;
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        let err = |why: &str| Error::ParseScalar(s.to_string(), why.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err("numerator is not an integer"))?;
        let den: BigInt = den.parse().map_err(|_| err("denominator is not an integer"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    }

    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.random_range(-2..=2))
    }
}

/// The prime field 𝔽_p, residues stored canonically in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        FieldSpec::prime(p)?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn reduce(&self, v: u64) -> u32 {
        (v % u64::from(self.p)) as u32
    }

    fn pow(&self, mut base: u32, mut exp: u32) -> u32 {
        let mut acc = 1u32 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.reduce(u64::from(acc) * u64::from(base));
            }
            base = self.reduce(u64::from(base) * u64::from(base));
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(i64::from(self.p)) as u32
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.reduce(u64::from(*a) + u64::from(*b))
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.reduce(u64::from(*a) + u64::from(self.p) - u64::from(*b))
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.reduce(u64::from(*a) * u64::from(*b))
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }

    fn parse(&self, s: &str) -> Result<u32> {
        let v: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::ParseScalar(s.to_string(), "expected an integer".into()))?;
        Ok(self.from_i64(v))
    }

    fn format(&self, a: &u32) -> String {
        a.to_string()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(0..self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("Fp:5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert!("Fp:4".parse::<FieldSpec>().is_err());
        assert!("Fp:1".parse::<FieldSpec>().is_err());
        assert!("Fp:2147483659".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(2147483647).to_string(), "Fp:2147483647");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.mul(&3, &4), 2);
        assert_eq!(f.sub(&1, &3), 3);
        assert_eq!(f.neg(&2), 3);
        assert_eq!(f.from_i64(-7), 3);
        for a in 1..5 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        let big = PrimeField::new(2147483647).unwrap();
        let a = 2147483646;
        assert_eq!(big.mul(&a, &big.inv(&a)), 1);
    }

    #[test]
    fn rational_parse_and_format() {
        let q = Rationals;
        let half = q.parse("-2/4").unwrap();
        assert_eq!(q.format(&half), "-1/2");
        assert_eq!(q.format(&q.parse(" 3 ").unwrap()), "3");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
    }
}
