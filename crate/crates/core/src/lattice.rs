//! Integer vectors over the fixed ordered basis and sublattices given by their
//! Hermite normal form.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::hermite_rows;

/// Integer coordinates over the ordered basis `(alpha_1..alpha_n, a, b)`
/// (or just the simple roots for a finite system).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(dim: usize) -> Self {
        LatticeVector(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        assert_eq!(self.dim(), other.dim());
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        assert_eq!(self.dim(), other.dim());
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> LatticeVector {
        self.scale(-1)
    }

    /// Of `{v, -v}`, the one whose first non-zero coordinate is positive.
    pub fn canonical(&self) -> LatticeVector {
        match self.0.iter().find(|&&x| x != 0) {
            Some(&x) if x < 0 => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.0.iter().find(|&&x| x != 0).is_none_or(|&x| x > 0)
    }

    /// First `n` coordinates, i.e. the image in the finite quotient.
    pub fn truncate(&self, n: usize) -> LatticeVector {
        LatticeVector(self.0[..n].to_vec())
    }

    /// Appends radical coordinates `(l, k)` to a finite vector.
    pub fn extend(&self, l: i64, k: i64) -> LatticeVector {
        let mut v = self.0.clone();
        v.push(l);
        v.push(k);
        LatticeVector(v)
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

/// A sublattice of `Z^dim` in canonical Hermite normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn full(dim: usize) -> Lattice {
        let basis = (0..dim)
            .map(|i| (0..dim).map(|j| BigInt::from(i64::from(i == j))).collect())
            .collect();
        Lattice { dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Basis rows as `i64`; panics if an entry does not fit.
    pub fn basis_i64(&self) -> Vec<Vec<i64>> {
        self.basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_i64().expect("HNF entry fits in i64"))
                    .collect()
            })
            .collect()
    }

    /// Index in `Z^dim` when of full rank: the product of the pivots.
    pub fn index(&self) -> Option<BigInt> {
        if self.rank() != self.dim {
            return None;
        }
        let mut p = BigInt::from(1);
        for (i, row) in self.basis.iter().enumerate() {
            p *= &row[i];
        }
        Some(p)
    }

    pub fn is_full(&self) -> bool {
        self.index() == Some(BigInt::from(1))
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        assert_eq!(v.dim(), self.dim);
        let mut rest: Vec<BigInt> = v.0.iter().map(|&x| BigInt::from(x)).collect();
        for row in &self.basis {
            let piv = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("HNF rows are non-zero");
            if rest[piv].is_zero() {
                continue;
            }
            if !(&rest[piv] % &row[piv]).is_zero() {
                return false;
            }
            let q = &rest[piv] / &row[piv];
            for j in piv..self.dim {
                rest[j] -= &q * &row[j];
            }
        }
        rest.iter().all(|x| x.is_zero())
    }
}

/// Hermite-normal-form basis of the integer span of `vs`.
pub fn hnf_span(vs: &[LatticeVector]) -> Lattice {
    assert!(!vs.is_empty(), "hnf_span needs at least one vector");
    let dim = vs[0].dim();
    let rows: Vec<Vec<i64>> = vs.iter().map(|v| v.0.clone()).collect();
    Lattice {
        dim,
        basis: hermite_rows(&rows, dim),
    }
}

pub fn lattice_equal(l1: &Lattice, l2: &Lattice) -> bool {
    l1.dim == l2.dim && l1.basis == l2.basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector(x.to_vec())
    }

    #[test]
    fn standard_basis_spans_everything() {
        let l = hnf_span(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(l.rank(), 3);
        assert!(lattice_equal(&l, &Lattice::full(3)));
    }

    #[test]
    fn span_of_two_e1() {
        let l = hnf_span(&[v(&[2, 0])]);
        assert_eq!(l.rank(), 1);
        assert_eq!(l.basis_i64(), vec![vec![2, 0]]);
        assert!(l.contains(&v(&[4, 0])));
        assert!(!l.contains(&v(&[1, 0])));
    }

    #[test]
    fn shear_spans_same_lattice() {
        let a = hnf_span(&[v(&[1, 0]), v(&[0, 1])]);
        let b = hnf_span(&[v(&[1, 1]), v(&[0, 1])]);
        assert!(lattice_equal(&a, &b));
    }

    #[test]
    fn canonical_sign() {
        assert_eq!(v(&[0, -1, 2]).canonical(), v(&[0, 1, -2]));
        assert!(v(&[0, 3, -1]).is_canonical());
    }
}
