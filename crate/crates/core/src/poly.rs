//! Sparse bivariate (Laurent) polynomials `sum c_ij x^i y^j` over a domain.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::field::Domain;
use crate::lattice::{convex_hull, LatticePoint, LatticePolygon};

/// Exponent vector to nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<E> {
    terms: BTreeMap<LatticePoint, E>,
}

impl<E: Clone + PartialEq> Polynomial<E> {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn from_terms<D, I>(ring: &D, terms: I) -> Self
    where
        D: Domain<Elem = E>,
        I: IntoIterator<Item = (LatticePoint, E)>,
    {
        let mut out = Polynomial::zero();
        for (p, c) in terms {
            out.add_term(ring, p, &c);
        }
        out
    }

    /// Coefficient vector aligned with `support`.
    pub fn from_coefficients<D: Domain<Elem = E>>(ring: &D, support: &[LatticePoint], coeffs: &[E]) -> Self {
        Self::from_terms(ring, support.iter().copied().zip(coeffs.iter().cloned()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &E)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: LatticePoint) -> Option<&E> {
        self.terms.get(&p)
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn newton_polygon(&self) -> Option<LatticePolygon> {
        convex_hull(&self.support())
    }

    pub fn add_term<D: Domain<Elem = E>>(&mut self, ring: &D, p: LatticePoint, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&p) {
            Some(old) => {
                let s = ring.add(old, c);
                if ring.is_zero(&s) {
                    self.terms.remove(&p);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(p, c.clone());
            }
        }
    }

    pub fn add<D: Domain<Elem = E>>(&self, ring: &D, other: &Self) -> Self {
        let mut out = self.clone();
        for (&p, c) in &other.terms {
            out.add_term(ring, p, c);
        }
        out
    }

    pub fn mul<D: Domain<Elem = E>>(&self, ring: &D, other: &Self) -> Self {
        let mut out = Polynomial::zero();
        for (&p, a) in &self.terms {
            for (&q, b) in &other.terms {
                out.add_term(ring, p + q, &ring.mul(a, b));
            }
        }
        out
    }

    pub fn scale<D: Domain<Elem = E>>(&self, ring: &D, c: &E) -> Self {
        Self::from_terms(ring, self.terms.iter().map(|(&p, a)| (p, ring.mul(a, c))))
    }

    pub fn pow<D: Domain<Elem = E>>(&self, ring: &D, e: u32) -> Self {
        let mut acc = Self::from_terms(ring, [(LatticePoint::new(0, 0), ring.one())]);
        for _ in 0..e {
            acc = acc.mul(ring, self);
        }
        acc
    }

    /// Multiplies by the monomial `x^v.x y^v.y`.
    pub fn shift(&self, v: LatticePoint) -> Self {
        Polynomial { terms: self.terms.iter().map(|(&p, c)| (p + v, c.clone())).collect() }
    }

    /// Evaluates at `(a, b)`; negative exponents need units.
    pub fn evaluate<D: Domain<Elem = E>>(&self, ring: &D, a: &E, b: &E) -> Option<E> {
        let mut acc = ring.zero();
        for (p, c) in &self.terms {
            let xa = ring.pow_signed(a, p.x)?;
            let yb = ring.pow_signed(b, p.y)?;
            acc = ring.add(&acc, &ring.mul(c, &ring.mul(&xa, &yb)));
        }
        Some(acc)
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coefficients<D, G>(&self, target: &D, mut f: G) -> Polynomial<D::Elem>
    where
        D: Domain,
        G: FnMut(&E) -> D::Elem,
    {
        Polynomial::from_terms(target, self.terms.iter().map(|(&p, c)| (p, f(c))))
    }
}
