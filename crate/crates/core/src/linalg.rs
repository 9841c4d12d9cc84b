//! Dense matrices over a domain and fraction-free Gauss-Jordan elimination.
//!
//! Every intermediate entry is a minor of the input, so elimination never
//! leaves the ring: this is what lets the multiplicity systems over `F[t, 1/t]`
//! be reduced without rational functions.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::Domain;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: Vec<Vec<E>>,
    cols: usize,
}

impl<E: Clone> Matrix<E> {
    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows, cols }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix { rows: vec![vec![value; cols]; rows], cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<E>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.rows[i][j] = v;
    }

    pub fn transpose(&self) -> Matrix<E> {
        let rows = (0..self.cols).map(|j| self.rows.iter().map(|r| r[j].clone()).collect()).collect();
        Matrix { rows, cols: self.rows.len() }
    }

    pub fn map<T: Clone>(&self, mut f: impl FnMut(&E) -> T) -> Matrix<T> {
        Matrix { rows: self.rows.iter().map(|r| r.iter().map(&mut f).collect()).collect(), cols: self.cols }
    }

    pub fn try_map<T: Clone, X>(&self, mut f: impl FnMut(&E) -> Result<T, X>) -> Result<Matrix<T>, X> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            rows.push(r.iter().map(&mut f).collect::<Result<Vec<T>, X>>()?);
        }
        Ok(Matrix { rows, cols: self.cols })
    }

    pub fn mul_vector<D: Domain<Elem = E>>(&self, ring: &D, v: &[E]) -> Vec<E> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b))))
            .collect()
    }
}

/// Result of fraction-free Gauss-Jordan elimination.
///
/// The first `rank` rows of `reduced` are the pivot rows; every pivot entry
/// equals `pivot_minor`, which is (up to sign) the determinant of the input
/// restricted to `pivot_rows` x `pivot_cols`.
#[derive(Debug, Clone)]
pub struct Echelon<E> {
    pub reduced: Vec<Vec<E>>,
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
    pub pivot_minor: E,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

pub fn row_reduce<D: Domain>(ring: &D, m: &Matrix<D::Elem>) -> Echelon<D::Elem> {
    let nrows = m.nrows();
    let ncols = m.ncols();
    let mut a = m.rows.clone();
    let mut order: Vec<usize> = (0..nrows).collect();
    let mut prev = ring.one();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows)
            .filter(|&i| !ring.is_zero(&a[i][c]))
            .min_by_key(|&i| (ring.pivot_weight(&a[i][c]), i))
        else {
            continue;
        };
        a.swap(r, piv);
        order.swap(r, piv);
        let pivot = a[r][c].clone();
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = core::mem::replace(&mut row[c], ring.zero());
            for j in 0..ncols {
                if j == c {
                    continue;
                }
                let scaled = ring.mul(&pivot, &row[j]);
                let t = if ring.is_zero(&factor) || ring.is_zero(&pivot_row[j]) {
                    scaled
                } else {
                    ring.sub(&scaled, &ring.mul(&factor, &pivot_row[j]))
                };
                row[j] = ring.div_exact(&t, &prev).expect("fraction-free step divides exactly");
            }
        }
        prev = pivot;
        pivot_cols.push(c);
        r += 1;
    }
    Echelon { reduced: a, pivot_rows: order[..r].to_vec(), pivot_cols, pivot_minor: prev }
}

pub fn rank<D: Domain>(ring: &D, m: &Matrix<D::Elem>) -> usize {
    row_reduce(ring, m).rank()
}

/// Kernel basis over the fraction field with entries kept in the ring: one
/// vector per free column, scaled by the pivot minor (or normalized when the
/// minor is a unit).
pub fn kernel_basis<D: Domain>(ring: &D, m: &Matrix<D::Elem>, ech: &Echelon<D::Elem>) -> Vec<Vec<D::Elem>> {
    let ncols = m.ncols();
    let mut is_pivot = vec![false; ncols];
    for &c in &ech.pivot_cols {
        is_pivot[c] = true;
    }
    let unit = ring.unit_inverse(&ech.pivot_minor);
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|&j| !is_pivot[j]) {
        let mut v = vec![ring.zero(); ncols];
        v[f] = ech.pivot_minor.clone();
        for (i, &pc) in ech.pivot_cols.iter().enumerate() {
            v[pc] = ring.neg(&ech.reduced[i][f]);
        }
        if let Some(inv) = &unit {
            for x in v.iter_mut() {
                *x = ring.mul(x, inv);
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, PrimeField, Rationals};
    use crate::puiseux::LaurentRing;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn int_matrix(rows: &[&[i64]]) -> Matrix<BigRational> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect(), cols)
    }

    /// Rank by ordinary Gaussian elimination with field inverses.
    fn naive_rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
        let mut a: Vec<Vec<F::Elem>> = m.rows().to_vec();
        let mut r = 0;
        for c in 0..m.ncols() {
            let Some(p) = (r..a.len()).find(|&i| !f.is_zero(&a[i][c])) else { continue };
            a.swap(r, p);
            let inv = f.inv(&a[r][c]).unwrap();
            for i in 0..a.len() {
                if i != r && !f.is_zero(&a[i][c]) {
                    let k = f.mul(&a[i][c], &inv);
                    for j in 0..m.ncols() {
                        let t = f.mul(&k, &a[r][j]);
                        a[i][j] = f.sub(&a[i][j], &t);
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn det(m: &[Vec<BigRational>]) -> BigRational {
        // cofactor expansion along the first row
        if m.is_empty() {
            return q(1);
        }
        let n = m.len();
        let mut total = q(0);
        for j in 0..n {
            let minor: Vec<Vec<BigRational>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect()).collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn rank_and_kernel_small() {
        let m = int_matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ech = row_reduce(&Rationals, &m);
        assert_eq!(ech.rank(), 2);
        let ker = kernel_basis(&Rationals, &m, &ech);
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vector(&Rationals, &ker[0]).iter().all(|v| *v == q(0)));
    }

    #[test]
    fn empty_system() {
        let m: Matrix<BigRational> = Matrix::from_rows(vec![], 4);
        let ech = row_reduce(&Rationals, &m);
        assert_eq!(ech.rank(), 0);
        assert_eq!(kernel_basis(&Rationals, &m, &ech).len(), 4);
    }

    #[test]
    fn laurent_kernel_stays_polynomial() {
        let f = PrimeField::new(32003).unwrap();
        let r = LaurentRing::new(f);
        let t = r.t_pow(1);
        let one = r.one();
        let m = Matrix::from_rows(
            vec![vec![t.clone(), one.clone(), r.t_pow(-2)], vec![one.clone(), r.add(&t, &one), r.t_pow(3)]],
            3,
        );
        let ech = row_reduce(&r, &m);
        assert_eq!(ech.rank(), 2);
        let ker = kernel_basis(&r, &m, &ech);
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vector(&r, &ker[0]).iter().all(|v| v.is_zero()));
    }

    proptest! {
        #[test]
        fn fraction_free_matches_naive(
            entries in proptest::collection::vec(-3i64..4, 20),
            rows in 1usize..5,
        ) {
            let cols = 20 / rows.max(1);
            let cols = cols.min(5);
            let data: Vec<Vec<BigRational>> = (0..rows).map(|i| (0..cols).map(|j| q(entries[i * cols + j])).collect()).collect();
            let m = Matrix::from_rows(data, cols);
            let ech = row_reduce(&Rationals, &m);
            prop_assert_eq!(ech.rank(), naive_rank(&Rationals, &m));
            for v in kernel_basis(&Rationals, &m, &ech) {
                prop_assert!(m.mul_vector(&Rationals, &v).iter().all(|x| *x == q(0)));
            }
            // pivot minor is the determinant of the pivot submatrix up to sign
            let sub: Vec<Vec<BigRational>> = ech.pivot_rows.iter()
                .map(|&i| ech.pivot_cols.iter().map(|&j| m.get(i, j).clone()).collect())
                .collect();
            let d = det(&sub);
            prop_assert!(d == ech.pivot_minor || d == -ech.pivot_minor.clone());
        }

        #[test]
        fn laurent_elimination_is_exact(
            entries in proptest::collection::vec(proptest::collection::vec((-2i64..3, 0u64..5), 0..3), 12),
            a in 1u64..5,
        ) {
            let f = PrimeField::new(5).unwrap();
            let r = LaurentRing::new(f);
            let data: Vec<Vec<_>> = (0..3)
                .map(|i| (0..4).map(|j| r.from_terms(entries[i * 4 + j].iter().copied())).collect())
                .collect();
            let m = Matrix::from_rows(data, 4);
            let ech = row_reduce(&r, &m);
            for v in kernel_basis(&r, &m, &ech) {
                prop_assert!(m.mul_vector(&r, &v).iter().all(|x| x.is_zero()));
            }
            let special = m.map(|x| r.specialize(x, &a).unwrap());
            prop_assert!(naive_rank(&f, &special) <= ech.rank());
        }

        #[test]
        fn prime_field_rank_matches_naive(entries in proptest::collection::vec(0u64..7, 24)) {
            let f = PrimeField::new(7).unwrap();
            let data: Vec<Vec<u64>> = (0..4).map(|i| entries[i * 6..(i + 1) * 6].to_vec()).collect();
            let m = Matrix::from_rows(data, 6);
            prop_assert_eq!(rank(&f, &m), naive_rank(&f, &m));
        }
    }
}
