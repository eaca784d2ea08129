//! Integral lattices given by Gram matrices, rational sublattices of their
//! rational span, short-vector enumeration and the catalog of named lattices.

mod catalog;
pub mod enumerate;
mod sublattice;

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::foundation::{vfrom_int, IntMatrix, RatMatrix};

pub use catalog::{builtin, d_vectors, parse_builtin, BUILTIN_HELP};
pub use sublattice::RationalSublattice;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is degenerate (determinant 0)")]
    Degenerate,
    #[error("lattice is not positive definite")]
    NotPositiveDefinite,
    #[error("generators do not span a full-rank lattice")]
    NotFullRank,
    #[error("unknown lattice name {0:?}")]
    UnknownName(String),
    #[error("rank out of range for {0}")]
    BadRank(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    Positive,
    Negative,
    Indefinite,
}

/// A non-degenerate integral lattice in a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    name: Option<String>,
    gram: IntMatrix,
    even: bool,
    definiteness: Definiteness,
    det: BigInt,
}

/// A lattice vector with its norm ⟨v,v⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorWithNorm {
    pub coords: Vec<BigInt>,
    pub norm: BigRational,
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        let det = gram.det();
        if det.is_zero() {
            return Err(LatticeError::Degenerate);
        }
        let n = gram.rows();
        let even = (0..n).all(|i| gram.get(i, i).is_even());
        let minors: Vec<BigInt> = (1..=n)
            .map(|k| IntMatrix::from_fn(k, k, |i, j| gram.get(i, j).clone()).det())
            .collect();
        let definiteness = if minors.iter().all(Signed::is_positive) {
            Definiteness::Positive
        } else if minors.iter().enumerate().all(|(k, m)| if k % 2 == 0 { m.is_negative() } else { m.is_positive() }) {
            Definiteness::Negative
        } else {
            Definiteness::Indefinite
        };
        Ok(Lattice { name: None, gram, even, definiteness, det })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn gram_rat(&self) -> RatMatrix {
        self.gram.to_rat()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn definiteness(&self) -> Definiteness {
        self.definiteness
    }

    pub fn is_positive_definite(&self) -> bool {
        self.definiteness == Definiteness::Positive
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// |det gram|, the order of the discriminant group.
    pub fn disc(&self) -> BigInt {
        self.det.abs()
    }

    /// The lattice itself inside its rational span.
    pub fn as_sublattice(&self) -> RationalSublattice {
        RationalSublattice::standard(self.gram_rat())
    }

    /// Λ^∨ with basis gram⁻¹ in the coordinates of Λ.
    pub fn dual(&self) -> RationalSublattice {
        let inv = self.gram_rat().inverse().expect("non-degenerate");
        RationalSublattice::from_generators(self.gram_rat(), &inv.to_cols()).expect("full rank")
    }

    /// ⟨x,y⟩ for rational coordinate vectors.
    pub fn form(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        self.gram_rat().form_q(x, y)
    }

    pub fn norm_int(&self, x: &[BigInt]) -> BigInt {
        self.gram.form(x, x)
    }

    /// All nonzero vectors with ⟨v,v⟩ ≤ max_norm, sorted lexicographically.
    pub fn short_vectors(&self, max_norm: &BigRational) -> Result<Vec<VectorWithNorm>, LatticeError> {
        let zero = vfrom_int(&alloc::vec![BigInt::zero(); self.rank()]);
        let pts = enumerate::points_in_ellipsoid(&self.gram_rat(), &zero, max_norm)
            .ok_or(LatticeError::NotPositiveDefinite)?;
        Ok(pts
            .into_iter()
            .filter(|(_, n)| !n.is_zero())
            .map(|(coords, norm)| VectorWithNorm { coords, norm })
            .collect())
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let mut l = Lattice::new(self.gram.block_diag(&other.gram)).expect("direct sum is non-degenerate");
        if let (Some(a), Some(b)) = (&self.name, &other.name) {
            l.name = Some(alloc::format!("{a}+{b}"));
        }
        l
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::rat;

    fn lat(rows: &[Vec<i64>]) -> Result<Lattice, LatticeError> {
        Lattice::new(IntMatrix::from_i64(rows))
    }

    #[test]
    fn classification() {
        let a1 = lat(&[vec![2]]).unwrap();
        assert!(a1.is_even() && a1.is_positive_definite());
        let u = lat(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(u.is_even());
        assert_eq!(u.definiteness(), Definiteness::Indefinite);
        let z2 = lat(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(!z2.is_even() && z2.is_positive_definite());
        assert_eq!(lat(&[vec![-2]]).unwrap().definiteness(), Definiteness::Negative);
    }

    #[test]
    fn validation() {
        assert_eq!(lat(&[vec![2, 1], vec![0, 2]]), Err(LatticeError::NotSymmetric));
        assert_eq!(lat(&[vec![1, 1], vec![1, 1]]), Err(LatticeError::Degenerate));
    }

    #[test]
    fn dual_of_a1() {
        let a1 = lat(&[vec![2]]).unwrap();
        let d = a1.dual();
        assert_eq!(d.basis_vectors(), vec![vec![rat(1, 2)]]);
        assert_eq!(d.gram().get(0, 0), &rat(1, 2));
    }

    #[test]
    fn dual_of_unimodular_is_itself() {
        let z3 = lat(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(z3.dual(), z3.as_sublattice());
    }

    #[test]
    fn short_vectors_of_a1() {
        let a1 = lat(&[vec![2]]).unwrap();
        let v = a1.short_vectors(&rat(2, 1)).unwrap();
        let coords: Vec<_> = v.iter().map(|w| w.coords.clone()).collect();
        assert_eq!(coords, vec![vec![BigInt::from(-1)], vec![BigInt::from(1)]]);
        assert!(v.iter().all(|w| w.norm == rat(2, 1)));
    }

    #[test]
    fn direct_sum_disc() {
        let a1 = lat(&[vec![2]]).unwrap();
        let s = a1.direct_sum(&a1);
        assert_eq!(s.gram(), &IntMatrix::from_i64(&[vec![2, 0], vec![0, 2]]));
        assert_eq!(s.disc(), BigInt::from(4));
        let empty = lat(&[]).unwrap();
        assert_eq!(a1.direct_sum(&empty).gram(), a1.gram());
    }

    #[test]
    fn indefinite_enumeration_rejected() {
        let u = lat(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(u.short_vectors(&rat(2, 1)), Err(LatticeError::NotPositiveDefinite));
    }
}
