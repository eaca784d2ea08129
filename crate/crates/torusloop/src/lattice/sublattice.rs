use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::One;

use crate::foundation::{common_denominator, hnf_basis, vis_integral, BigInt, RatMatrix, RatVec};

use super::LatticeError;

/// A full-rank lattice inside a fixed rational inner-product space.
///
/// The basis (stored as columns) is the Hermite-normalised basis of the row
/// lattice spanned by the generators, so equal lattices compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSublattice {
    ambient_gram: RatMatrix,
    basis: RatMatrix,
    basis_inv: RatMatrix,
}

impl RationalSublattice {
    pub fn from_generators(ambient_gram: RatMatrix, gens: &[RatVec]) -> Result<Self, LatticeError> {
        let n = ambient_gram.rows();
        if gens.is_empty() {
            return if n == 0 { Ok(Self::standard(ambient_gram)) } else { Err(LatticeError::NotFullRank) };
        }
        let (d, m) = RatMatrix::from_rows(gens).clear_denominators();
        let h = hnf_basis(&m);
        if h.rows() != n {
            return Err(LatticeError::NotFullRank);
        }
        let inv_d = BigRational::new(One::one(), d);
        let basis = h.to_rat().scale(&inv_d).transpose();
        let basis_inv = basis.inverse().expect("full rank basis");
        Ok(RationalSublattice { ambient_gram, basis, basis_inv })
    }

    /// The lattice of integer coordinate vectors.
    pub fn standard(ambient_gram: RatMatrix) -> Self {
        let n = ambient_gram.rows();
        RationalSublattice { ambient_gram, basis: RatMatrix::identity(n), basis_inv: RatMatrix::identity(n) }
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_gram(&self) -> &RatMatrix {
        &self.ambient_gram
    }

    /// Basis matrix; columns are the generators in ambient coordinates.
    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<RatVec> {
        self.basis.to_cols()
    }

    /// Coordinates of an ambient vector with respect to the basis.
    pub fn coords(&self, v: &[BigRational]) -> RatVec {
        self.basis_inv.mul_vec(v)
    }

    pub fn from_coords(&self, c: &[BigRational]) -> RatVec {
        self.basis.mul_vec(c)
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        vis_integral(&self.coords(v))
    }

    pub fn contains_lattice(&self, other: &RationalSublattice) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// Gram matrix of the basis under the ambient form.
    pub fn gram(&self) -> RatMatrix {
        self.basis.transpose().mul(&self.ambient_gram).mul(&self.basis)
    }

    /// Smallest lattice containing both.
    pub fn sum(&self, other: &RationalSublattice) -> RationalSublattice {
        let mut gens = self.basis_vectors();
        gens.extend(other.basis_vectors());
        RationalSublattice::from_generators(self.ambient_gram.clone(), &gens).expect("sum of full-rank lattices")
    }

    /// Coordinate-wise dual `{y : yᵀx ∈ ℤ for all x}`, independent of the form.
    fn coordinate_dual(&self) -> RationalSublattice {
        let gens = self.basis_inv.to_rows();
        RationalSublattice::from_generators(self.ambient_gram.clone(), &gens).expect("dual is full rank")
    }

    /// Intersection, computed as the dual of the sum of duals.
    pub fn intersection(&self, other: &RationalSublattice) -> RationalSublattice {
        self.coordinate_dual().sum(&other.coordinate_dual()).coordinate_dual()
    }

    /// Dual lattice with respect to the ambient form.
    pub fn dual(&self) -> RationalSublattice {
        let g_inv = self.ambient_gram.inverse().expect("non-degenerate ambient form");
        let gens = g_inv.mul(&self.basis_inv.transpose()).to_cols();
        RationalSublattice::from_generators(self.ambient_gram.clone(), &gens).expect("dual is full rank")
    }

    /// Smallest positive integer n with n·self ⊆ other, if any.
    pub fn exponent_in(&self, other: &RationalSublattice) -> BigInt {
        let m = other.basis_inv.mul(&self.basis);
        common_denominator(m.to_rows().iter().flatten())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{rat, vfrom_i64};

    #[test]
    fn intersection_and_sum_in_rank_one() {
        let g = RatMatrix::from_rows(&[vec![rat(72, 1)]]);
        let a = RationalSublattice::from_generators(g.clone(), &[vec![rat(1, 2)]]).unwrap();
        let b = RationalSublattice::from_generators(g.clone(), &[vec![rat(1, 3)]]).unwrap();
        assert_eq!(a.intersection(&b).basis_vectors(), vec![vfrom_i64(&[1])]);
        assert_eq!(a.sum(&b).basis_vectors(), vec![vec![rat(1, 6)]]);
        assert_eq!(a.sum(&b).gram(), RatMatrix::from_rows(&[vec![rat(2, 1)]]));
    }

    #[test]
    fn dual_of_dual() {
        let g = RatMatrix::from_rows(&[vfrom_i64(&[2, -1]), vfrom_i64(&[-1, 2])]);
        let l = RationalSublattice::standard(g);
        assert_eq!(l.dual().dual(), l);
        assert!(l.dual().contains_lattice(&l));
    }
}
