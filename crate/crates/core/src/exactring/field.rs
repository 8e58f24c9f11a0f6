use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::ring::{CoefficientRing, Scalar};
use crate::error::{Error, Result};

/// Arithmetic of an exact field. Elements are plain values; the field object
/// carries any runtime parameter (the prime).
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_scalar(&self, x: &Scalar) -> Self::Elem;
    fn to_scalar(&self, x: &Self::Elem) -> Scalar;
    fn ring(&self) -> CoefficientRing;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_scalar(&BigRational::from_integer(BigInt::from(n)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(super::ring::is_prime(p), "{p} is not prime");
        PrimeField { p }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(!(*a).is_multiple_of(self.p), "inverse of zero");
        // Fermat
        let mut result = 1u64;
        let mut base = *a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }
    fn is_zero(&self, a: &u64) -> bool {
        (*a).is_multiple_of(self.p)
    }
    fn from_scalar(&self, x: &Scalar) -> u64 {
        let p = BigInt::from(self.p);
        let n = x.numer().mod_floor(&p).to_u64().unwrap();
        let d = x.denom().mod_floor(&p).to_u64().unwrap();
        assert!(d != 0, "denominator of {x} vanishes mod {}", self.p);
        self.mul(&n, &self.inv(&d))
    }
    fn to_scalar(&self, x: &u64) -> Scalar {
        BigRational::from_integer(BigInt::from(*x))
    }
    fn ring(&self) -> CoefficientRing {
        CoefficientRing::PrimeField(self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
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
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_scalar(&self, x: &Scalar) -> BigRational {
        x.clone()
    }
    fn to_scalar(&self, x: &BigRational) -> Scalar {
        x.clone()
    }
    fn ring(&self) -> CoefficientRing {
        CoefficientRing::Rationals
    }
}

/// Runtime choice of field, used to dispatch generic linear algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
}

impl FieldKind {
    pub fn of(ring: &CoefficientRing) -> Result<FieldKind> {
        match ring {
            CoefficientRing::Rationals => Ok(FieldKind::Rationals),
            CoefficientRing::PrimeField(p) => Ok(FieldKind::Prime(*p)),
            other => Err(Error::UnsupportedRing(format!("{other} is not a field"))),
        }
    }
}

/// Run `$body` with `$f` bound to the concrete field selected by `$kind`.
#[macro_export]
macro_rules! with_field {
    ($kind:expr, $f:ident => $body:expr) => {
        match $kind {
            $crate::exactring::field::FieldKind::Rationals => {
                let $f = $crate::exactring::field::RationalField;
                $body
            }
            $crate::exactring::field::FieldKind::Prime(p) => {
                let $f = $crate::exactring::field::PrimeField::new(p);
                $body
            }
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::ring::ratio;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), 5);
        assert_eq!(f.from_scalar(&ratio(1, 2)), 4);
        assert_eq!(f.from_scalar(&ratio(-1, 1)), 6);
    }
}
