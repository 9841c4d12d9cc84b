//! Laurent polynomials in `t` over a base field: the computable part of the
//! valuation field of Puiseux series.
//!
//! The valuation follows the max convention `val(sum c_a t^a) = -min a`, so
//! `val(t) = -1` and `val(t^-3 + t^2) = 3`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::RngCore;

use crate::field::{Domain, Field};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("element is not a unit of the Laurent ring")]
    NotAUnit,
    #[error("substituting t = 0 into an element with negative exponents")]
    PoleAtZero,
}

/// `sum_i coeffs[i] t^(low + i)`; the zero element has no coefficients.
///
/// Both ends of `coeffs` are nonzero, so equal values have equal representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Laurent<E> {
    low: i64,
    coeffs: Vec<E>,
}

impl<E> Laurent<E> {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `-(least exponent)`, or `None` for zero (the tropical `-inf`).
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(-self.low)
        }
    }

    pub fn min_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    pub fn max_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// Number of coefficient slots between the extreme exponents.
    pub fn span(&self) -> usize {
        self.coeffs.len()
    }
}

/// Laurent polynomials `F[t, 1/t]` over the field `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentRing<F> {
    base: F,
}

impl<F: Field> LaurentRing<F> {
    pub fn new(base: F) -> Self {
        LaurentRing { base }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    fn normalize(&self, low: i64, mut coeffs: Vec<F::Elem>) -> Laurent<F::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| self.base.is_zero(c)).count();
        if lead == coeffs.len() {
            return Laurent { low: 0, coeffs: Vec::new() };
        }
        coeffs.drain(..lead);
        Laurent { low: low + lead as i64, coeffs }
    }

    pub fn constant(&self, c: F::Elem) -> Laurent<F::Elem> {
        self.normalize(0, vec![c])
    }

    pub fn monomial(&self, c: F::Elem, exponent: i64) -> Laurent<F::Elem> {
        self.normalize(exponent, vec![c])
    }

    /// `t^exponent`.
    pub fn t_pow(&self, exponent: i64) -> Laurent<F::Elem> {
        self.monomial(self.base.one(), exponent)
    }

    /// Builds an element from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I>(&self, terms: I) -> Laurent<F::Elem>
    where
        I: IntoIterator<Item = (i64, F::Elem)>,
    {
        let terms: Vec<(i64, F::Elem)> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return self.zero();
        };
        let hi = terms.iter().map(|t| t.0).max().expect("non-empty");
        let mut coeffs = vec![self.base.zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = self.base.add(slot, &c);
        }
        self.normalize(lo, coeffs)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms<'a>(&'a self, x: &'a Laurent<F::Elem>) -> impl Iterator<Item = (i64, &'a F::Elem)> + 'a {
        x.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.base.is_zero(c))
            .map(move |(i, c)| (x.low + i as i64, c))
    }

    pub fn coefficient(&self, x: &Laurent<F::Elem>, exponent: i64) -> F::Elem {
        let i = exponent - x.low;
        if i < 0 || i as usize >= x.coeffs.len() {
            self.base.zero()
        } else {
            x.coeffs[i as usize].clone()
        }
    }

    /// Substitutes `t = a`.
    pub fn specialize(&self, x: &Laurent<F::Elem>, a: &F::Elem) -> Result<F::Elem, ScalarError> {
        if x.is_zero() {
            return Ok(self.base.zero());
        }
        if self.base.is_zero(a) {
            if x.low < 0 {
                return Err(ScalarError::PoleAtZero);
            }
            return Ok(self.coefficient(x, 0));
        }
        // Horner in the coefficient window, then shift by a^low
        let mut acc = self.base.zero();
        for c in x.coeffs.iter().rev() {
            acc = self.base.add(&self.base.mul(&acc, a), c);
        }
        let shift = self.base.pow_signed(a, x.low).ok_or(ScalarError::NotAUnit)?;
        Ok(self.base.mul(&acc, &shift))
    }

    pub fn try_inverse(&self, x: &Laurent<F::Elem>) -> Result<Laurent<F::Elem>, ScalarError> {
        self.unit_inverse(x).ok_or(ScalarError::NotAUnit)
    }

    /// Quotient of polynomials given low-to-high with nonzero ends; `None`
    /// when the remainder is nonzero.
    fn poly_div(&self, num: &[F::Elem], den: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = &self.base;
        if num.len() < den.len() {
            return None;
        }
        let m = den.len() - 1;
        let lead_inv = f.inv(&den[m])?;
        let mut rem = num.to_vec();
        let mut q = vec![f.zero(); num.len() - m];
        for k in (0..q.len()).rev() {
            let c = f.mul(&rem[k + m], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, d) in den.iter().enumerate() {
                let t = f.mul(&c, d);
                rem[k + j] = f.sub(&rem[k + j], &t);
            }
            q[k] = c;
        }
        rem.iter().all(|r| f.is_zero(r)).then_some(q)
    }
}

impl<F: Field> Domain for LaurentRing<F> {
    type Elem = Laurent<F::Elem>;

    fn zero(&self) -> Self::Elem {
        Laurent { low: 0, coeffs: Vec::new() }
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        self.constant(self.base.from_bigint(n))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let lo = a.low.min(b.low);
        let hi = a.max_exponent().unwrap().max(b.max_exponent().unwrap());
        let mut coeffs = vec![self.base.zero(); (hi - lo + 1) as usize];
        for (i, c) in a.coeffs.iter().enumerate() {
            coeffs[(a.low - lo) as usize + i] = c.clone();
        }
        for (i, c) in b.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(b.low - lo) as usize + i];
            *slot = self.base.add(slot, c);
        }
        self.normalize(lo, coeffs)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Laurent { low: a.low, coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let coeffs = self.base.convolve(&a.coeffs, &b.coeffs);
        self.normalize(a.low + b.low, coeffs)
    }

    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        if b.is_zero() {
            return None;
        }
        if a.is_zero() {
            return Some(self.zero());
        }
        // b = t^lb B with B(0) != 0, and B | t^k A iff B | A
        let q = self.poly_div(&a.coeffs, &b.coeffs)?;
        Some(self.normalize(a.low - b.low, q))
    }

    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.coeffs.len() != 1 {
            return None;
        }
        Some(Laurent { low: -a.low, coeffs: vec![self.base.inv(&a.coeffs[0])?] })
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem {
        self.constant(self.base.sample(rng))
    }

    fn pivot_weight(&self, a: &Self::Elem) -> u64 {
        a.coeffs.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn valuations() {
        let r = LaurentRing::new(Rationals);
        let x = r.from_terms([(-3, q(1)), (2, q(1))]);
        assert_eq!(x.valuation(), Some(3));
        assert_eq!(r.zero().valuation(), None);
        assert_eq!(r.monomial(q(5), 1).valuation(), Some(-1));
    }

    #[test]
    fn ring_arithmetic() {
        let r = LaurentRing::new(Rationals);
        let a = r.from_terms([(0, q(1)), (1, q(1))]);
        let b = r.from_terms([(0, q(1)), (1, q(-1))]);
        assert_eq!(r.mul(&a, &b), r.from_terms([(0, q(1)), (2, q(-1))]));
        assert!(r.add(&a, &r.neg(&a)).is_zero());

        let f = LaurentRing::new(PrimeField::new(7).unwrap());
        let x = f.monomial(3, 1);
        let y = f.monomial(5, -1);
        assert_eq!(f.mul(&x, &y), f.one());
    }

    #[test]
    fn inversion_only_for_monomials() {
        let r = LaurentRing::new(Rationals);
        let m = r.monomial(q(2), -4);
        let inv = r.try_inverse(&m).unwrap();
        assert_eq!(r.mul(&m, &inv), r.one());
        let nm = r.from_terms([(0, q(1)), (1, q(1))]);
        assert_eq!(r.try_inverse(&nm), Err(ScalarError::NotAUnit));
    }

    #[test]
    fn exact_division() {
        let r = LaurentRing::new(Rationals);
        let a = r.from_terms([(-2, q(1)), (-1, q(1))]);
        let b = r.from_terms([(3, q(1)), (4, q(-1))]);
        let prod = r.mul(&a, &b);
        assert_eq!(r.div_exact(&prod, &b), Some(a.clone()));
        assert_eq!(r.div_exact(&prod, &a), Some(b));
        let c = r.from_terms([(0, q(1)), (1, q(2))]);
        assert_eq!(r.div_exact(&a, &c), None);
    }

    #[test]
    fn specialization() {
        let r = LaurentRing::new(Rationals);
        let x = r.from_terms([(-1, q(1)), (0, q(1))]);
        assert_eq!(r.specialize(&x, &q(2)).unwrap(), BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(r.specialize(&x, &q(0)), Err(ScalarError::PoleAtZero));
        assert_eq!(r.specialize(&r.zero(), &q(0)).unwrap(), q(0));

        let f = LaurentRing::new(PrimeField::new(5).unwrap());
        assert_eq!(f.specialize(&f.t_pow(2), &3).unwrap(), 4);
    }

    fn laurent_strategy() -> impl Strategy<Value = Vec<(i64, i64)>> {
        proptest::collection::vec((-4i64..5, -6i64..7), 0..5)
    }

    proptest! {
        #[test]
        fn valuation_is_multiplicative_and_max_like(a in laurent_strategy(), b in laurent_strategy()) {
            let r = LaurentRing::new(Rationals);
            let x = r.from_terms(a.into_iter().map(|(e, c)| (e, q(c))));
            let y = r.from_terms(b.into_iter().map(|(e, c)| (e, q(c))));
            if let (Some(vx), Some(vy)) = (x.valuation(), y.valuation()) {
                prop_assert_eq!(r.mul(&x, &y).valuation(), Some(vx + vy));
                let s = r.add(&x, &y);
                if let Some(vs) = s.valuation() {
                    prop_assert!(vs <= vx.max(vy));
                }
                if vx != vy {
                    prop_assert_eq!(s.valuation(), Some(vx.max(vy)));
                }
            }
        }

        #[test]
        fn specialization_is_a_ring_map(a in laurent_strategy(), b in laurent_strategy(), t in 1u64..31) {
            let f = PrimeField::new(31).unwrap();
            let r = LaurentRing::new(f);
            let x = r.from_terms(a.into_iter().map(|(e, c)| (e, f.reduce_i64(c))));
            let y = r.from_terms(b.into_iter().map(|(e, c)| (e, f.reduce_i64(c))));
            let sx = r.specialize(&x, &t).unwrap();
            let sy = r.specialize(&y, &t).unwrap();
            prop_assert_eq!(r.specialize(&r.mul(&x, &y), &t).unwrap(), f.mul(&sx, &sy));
            prop_assert_eq!(r.specialize(&r.add(&x, &y), &t).unwrap(), f.add(&sx, &sy));
        }
    }
}
