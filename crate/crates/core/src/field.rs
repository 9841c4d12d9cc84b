//! Scalar rings used by the elimination and curve code.
//!
//! Rings are passed around as context values (`Rationals`, `PrimeField`,
//! `LaurentRing<F>`), so a prime chosen at runtime never leaks into the
//! element type.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

/// An integral domain with exact division.
pub trait Domain: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// `a / b` when `b` divides `a`, `None` otherwise (including `b = 0`).
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    /// Inverse of a unit, `None` for non-units.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// A random element used to form generic combinations.
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Smaller is a cheaper pivot. Elimination prefers low weights.
    fn pivot_weight(&self, _a: &Self::Elem) -> u64 {
        0
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `a^e` for a signed exponent; negative powers need `a` to be a unit.
    fn pow_signed(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            let inv = self.unit_inverse(a)?;
            Some(self.pow(&inv, e.unsigned_abs()))
        }
    }
}

/// A field: every nonzero element is a unit.
pub trait Field: Domain {
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.unit_inverse(a)
    }

    /// Canonical rational representative (`0..p` for prime fields).
    fn to_rational(&self, a: &Self::Elem) -> BigRational;

    /// `None` when the denominator vanishes in the field.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;

    /// Product of univariate coefficient vectors.
    fn convolve(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.mul(x, y);
                out[i + j] = self.add(&out[i + j], &t);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
}

/// Runtime description of a base field, as named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

impl BaseField {
    pub fn validate(self) -> Result<Self, FieldError> {
        if let BaseField::Prime(p) = self {
            PrimeField::new(p)?;
        }
        Ok(self)
    }
}

/// The field of rational numbers with arbitrary-precision entries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Domain for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
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
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn div_exact(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        if b.is_zero() {
            None
        } else {
            Some(a / b)
        }
    }
    fn unit_inverse(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        let v = (rng.next_u32() % 2001) as i64 - 1000;
        BigRational::from_integer(BigInt::from(v))
    }
    fn pivot_weight(&self, a: &BigRational) -> u64 {
        a.numer().bits() + a.denom().bits()
    }
}

impl Field for Rationals {
    fn characteristic(&self) -> u64 {
        0
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
}

/// The prime field `F_p` for `p < 2^32`; elements are residues in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Domain for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        n.mod_floor(&p).to_u64().expect("residue fits in u64")
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn div_exact(&self, a: &u64, b: &u64) -> Option<u64> {
        Some(self.mul(a, &self.unit_inverse(b)?))
    }
    fn unit_inverse(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        rng.next_u64() % self.p
    }
}

impl Field for PrimeField {
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        self.div_exact(&num, &den)
    }
    fn convolve(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        // residues are < 2^32, so each product is < 2^64 and a u128 lane never overflows
        let mut acc = vec![0u128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += (x * y) as u128;
            }
        }
        let p = self.p as u128;
        acc.into_iter().map(|v| (v % p) as u64).collect()
    }
}

/// Generalized binomial coefficient `C(n, k)` for any integer `n`.
pub fn binomial(n: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
        assert_eq!(f.inv(&0), None);
        // 3t * 5t^-1 over F_7 collapses to 15 = 1
        assert_eq!(f.mul(&3, &5), 1);
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(PrimeField::new(1), Err(FieldError::NotPrime(1)));
        assert_eq!(PrimeField::new(15), Err(FieldError::NotPrime(15)));
        assert!(PrimeField::new(32003).is_ok());
        assert!(BaseField::Prime(4).validate().is_err());
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-2, 2), BigInt::from(3));
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }

    #[test]
    fn fast_convolution_matches_generic() {
        let f = PrimeField::new(32003).unwrap();
        let a = [1u64, 32002, 7, 0, 12345];
        let b = [31999u64, 3, 0, 2];
        let mut slow = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                slow[i + j] = f.add(&slow[i + j], &f.mul(x, y));
            }
        }
        assert_eq!(f.convolve(&a, &b), slow);
    }

    #[test]
    fn rational_from_fraction_in_prime_field() {
        let f = PrimeField::new(5).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half), Some(3));
        let bad = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert_eq!(f.from_rational(&bad), None);
    }
}
