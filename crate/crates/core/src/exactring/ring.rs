use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact scalar used for every structure constant and matrix entry.
///
/// The coefficient ring decides how a scalar is interpreted: prime-field
/// scalars are kept reduced in `[0, p)`, cyclic-ring scalars are carried as
/// integer lifts, localized-integer scalars may only have denominators made of
/// inverted primes.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, )]
pub enum CoefficientRing {
    Rationals,
    Integers,
    PrimeField(u64),
    CyclicRing(u64),
    LocalizedIntegers(BTreeSet<u64>),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl CoefficientRing {
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Parse(format!("F{p}: {p} is not prime")));
        }
        Ok(CoefficientRing::PrimeField(p))
    }

    pub fn cyclic(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Parse(format!("Z/{m}: modulus must be at least 2")));
        }
        if is_prime(m) {
            return Ok(CoefficientRing::PrimeField(m));
        }
        Ok(CoefficientRing::CyclicRing(m))
    }

    pub fn localized(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        if let Some(bad) = set.iter().find(|p| !is_prime(**p)) {
            return Err(Error::Parse(format!("Z[1/..]: {bad} is not prime")));
        }
        if set.is_empty() {
            return Ok(CoefficientRing::Integers);
        }
        Ok(CoefficientRing::LocalizedIntegers(set))
    }

    pub fn is_field(&self) -> bool {
        matches!(self, CoefficientRing::Rationals | CoefficientRing::PrimeField(_))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientRing::PrimeField(p) | CoefficientRing::CyclicRing(p) => *p,
            _ => 0,
        }
    }

    /// True when the ring contains the rationals.
    pub fn is_q_algebra(&self) -> bool {
        matches!(self, CoefficientRing::Rationals)
    }

    /// Whether the positive integer `n` is a unit of the ring.
    pub fn is_invertible_integer(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        match self {
            CoefficientRing::Rationals => true,
            CoefficientRing::Integers => n == 1,
            CoefficientRing::PrimeField(p) => !n.is_multiple_of(*p),
            CoefficientRing::CyclicRing(m) => n.gcd(m) == 1,
            CoefficientRing::LocalizedIntegers(s) => prime_factors(n).iter().all(|q| s.contains(q)),
        }
    }

    /// Smallest prime factor of `n` that is not invertible.
    pub fn non_invertible_prime(&self, n: u64) -> Option<u64> {
        prime_factors(n).into_iter().find(|p| !self.is_invertible_integer(*p))
    }

    /// Canonical representative of `x`. Fails when a denominator is not a unit.
    pub fn try_normalize(&self, x: &Scalar) -> Result<Scalar> {
        match self {
            CoefficientRing::Rationals => Ok(x.clone()),
            CoefficientRing::Integers => {
                if x.is_integer() {
                    Ok(x.clone())
                } else {
                    Err(Error::Precondition(format!("{x} is not an integer")))
                }
            }
            CoefficientRing::LocalizedIntegers(s) => {
                let den = x.denom().to_u64().unwrap_or(0);
                if den == 0 || !prime_factors(den).iter().all(|q| s.contains(q)) {
                    return Err(Error::Precondition(format!("{x} has a denominator outside the inverted primes")));
                }
                Ok(x.clone())
            }
            CoefficientRing::PrimeField(p) => {
                let p_big = BigInt::from(*p);
                let den = x.denom().mod_floor(&p_big);
                if den.is_zero() {
                    return Err(Error::Precondition(format!("{x} has a denominator divisible by {p}")));
                }
                let inv = mod_inverse(&den, &p_big).expect("unit");
                let v = (x.numer() * inv).mod_floor(&p_big);
                Ok(BigRational::from_integer(v))
            }
            CoefficientRing::CyclicRing(m) => {
                // integer lifts are kept as they are; reduction happens on comparison
                if x.is_integer() {
                    Ok(x.clone())
                } else {
                    let m_big = BigInt::from(*m);
                    let den = x.denom().mod_floor(&m_big);
                    let inv = mod_inverse(&den, &m_big)
                        .ok_or_else(|| Error::Precondition(format!("{x} has a denominator not prime to {m}")))?;
                    Ok(BigRational::from_integer((x.numer() * inv).mod_floor(&m_big)))
                }
            }
        }
    }

    pub fn normalize(&self, x: &Scalar) -> Scalar {
        self.try_normalize(x).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        match self {
            CoefficientRing::CyclicRing(m) => {
                if x.is_integer() {
                    x.numer().mod_floor(&BigInt::from(*m)).is_zero()
                } else {
                    self.normalize(x).is_zero()
                }
            }
            CoefficientRing::PrimeField(_) => self.normalize(x).is_zero(),
            _ => x.is_zero(),
        }
    }

    pub fn eq(&self, a: &Scalar, b: &Scalar) -> bool {
        self.is_zero(&(a - b))
    }

    /// Strip every unit factor from a nonzero integer invariant.
    pub fn strip_units(&self, d: &BigInt) -> BigInt {
        match self {
            CoefficientRing::LocalizedIntegers(s) => {
                let mut v = d.abs();
                for p in s {
                    let pb = BigInt::from(*p);
                    while !v.is_zero() && (&v % &pb).is_zero() {
                        v /= &pb;
                    }
                }
                v
            }
            CoefficientRing::CyclicRing(m) => d.abs().gcd(&BigInt::from(*m)),
            CoefficientRing::PrimeField(p) => {
                if (d % BigInt::from(*p)).is_zero() {
                    BigInt::from(*p)
                } else {
                    BigInt::one()
                }
            }
            CoefficientRing::Rationals => {
                if d.is_zero() {
                    BigInt::zero()
                } else {
                    BigInt::one()
                }
            }
            CoefficientRing::Integers => d.abs(),
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else if (-&e.gcd).is_one() {
        Some((-e.x).mod_floor(m))
    } else {
        None
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Rationals => write!(f, "Q"),
            CoefficientRing::Integers => write!(f, "Z"),
            CoefficientRing::PrimeField(p) => write!(f, "F{p}"),
            CoefficientRing::CyclicRing(m) => write!(f, "Z/{m}"),
            CoefficientRing::LocalizedIntegers(s) => {
                let parts: Vec<String> = s.iter().map(|p| format!("1/{p}")).collect();
                write!(f, "Z[{}]", parts.join(","))
            }
        }
    }
}

impl Serialize for CoefficientRing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CoefficientRing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for CoefficientRing {
    type Err = Error;

    /// Accepts `Q`, `Z`, `F<p>`, `Z/<m>` and `Z[1/a,1/b]` (`Z[1/6]` inverts 2 and 3).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(format!("unrecognized ring '{t}'"));
        match t {
            "Q" | "QQ" => return Ok(CoefficientRing::Rationals),
            "Z" | "ZZ" => return Ok(CoefficientRing::Integers),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix('F') {
            let p: u64 = rest.parse().map_err(|_| bad())?;
            return CoefficientRing::prime_field(p);
        }
        if let Some(rest) = t.strip_prefix("Z/") {
            let m: u64 = rest.parse().map_err(|_| bad())?;
            return CoefficientRing::cyclic(m);
        }
        if let Some(rest) = t.strip_prefix("Z[").and_then(|r| r.strip_suffix(']')) {
            let mut primes = BTreeSet::new();
            for part in rest.split(',') {
                let den = part.trim().strip_prefix("1/").ok_or_else(bad)?;
                let n: u64 = den.parse().map_err(|_| bad())?;
                if n < 2 {
                    return Err(bad());
                }
                primes.extend(prime_factors(n));
            }
            return CoefficientRing::localized(primes);
        }
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rings() {
        assert_eq!("Q".parse::<CoefficientRing>().unwrap(), CoefficientRing::Rationals);
        assert_eq!("F2".parse::<CoefficientRing>().unwrap(), CoefficientRing::PrimeField(2));
        assert_eq!("Z/4".parse::<CoefficientRing>().unwrap(), CoefficientRing::CyclicRing(4));
        assert_eq!("Z/3".parse::<CoefficientRing>().unwrap(), CoefficientRing::PrimeField(3));
        let z6 = "Z[1/6]".parse::<CoefficientRing>().unwrap();
        assert_eq!(z6, CoefficientRing::LocalizedIntegers([2, 3].into_iter().collect()));
        assert!("F4".parse::<CoefficientRing>().is_err());
        assert!("R".parse::<CoefficientRing>().is_err());
    }

    #[test]
    fn empty_localization_is_integers() {
        assert_eq!(CoefficientRing::localized([]).unwrap(), CoefficientRing::Integers);
    }

    #[test]
    fn normalization() {
        let f3 = CoefficientRing::PrimeField(3);
        assert_eq!(f3.normalize(&ratio(1, 2)), int(2));
        assert!(f3.try_normalize(&ratio(1, 3)).is_err());
        let z2 = CoefficientRing::localized([2]).unwrap();
        assert!(z2.try_normalize(&ratio(1, 4)).is_ok());
        assert!(z2.try_normalize(&ratio(1, 3)).is_err());
        assert_eq!(z2.strip_units(&BigInt::from(12)), BigInt::from(3));
        assert!(CoefficientRing::CyclicRing(4).is_zero(&int(8)));
    }
}
