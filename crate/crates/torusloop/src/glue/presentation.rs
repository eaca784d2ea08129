use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::foundation::{int_rat, smith_normal_form, vfrom_int, IntMatrix, RatMatrix, RatVec};
use crate::lattice::RationalSublattice;

use super::GlueError;

/// A finite quotient A/B ≅ ⊕ ℤ/d_i of two full-rank lattices B ⊆ A,
/// with generator lifts in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianPresentation {
    invariant_factors: Vec<BigInt>,
    generator_lifts: Vec<RatVec>,
    /// Rows map an ambient vector of A to its coordinates on the generators.
    coord_map: RatMatrix,
    sub: RationalSublattice,
}

impl FiniteAbelianPresentation {
    pub fn quotient(a: &RationalSublattice, b: &RationalSublattice) -> Result<Self, GlueError> {
        if !a.contains_lattice(b) {
            return Err(GlueError::NotContained);
        }
        let m: IntMatrix = RatMatrix::from_cols(&b.basis_vectors().iter().map(|v| a.coords(v)).collect::<Vec<_>>())
            .to_int()
            .expect("B ⊆ A");
        let (d, u, _) = smith_normal_form(&m);
        let u_rat = u.to_rat();
        let adapted = a.basis().mul(&u_rat.inverse().expect("unimodular"));
        let to_adapted = u_rat.mul(&a.basis().inverse().expect("full rank"));
        let mut invariant_factors = Vec::new();
        let mut generator_lifts = Vec::new();
        let mut rows = Vec::new();
        for i in 0..d.rows() {
            let di = d.get(i, i);
            if !di.is_one() {
                invariant_factors.push(di.clone());
                generator_lifts.push(adapted.col(i));
                rows.push(to_adapted.row(i).to_vec());
            }
        }
        let n = a.rank();
        let coord_map = if rows.is_empty() { RatMatrix::zeros(0, n) } else { RatMatrix::from_rows(&rows) };
        Ok(FiniteAbelianPresentation { invariant_factors, generator_lifts, coord_map, sub: b.clone() })
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn generator_lifts(&self) -> &[RatVec] {
        &self.generator_lifts
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Least common multiple of the invariant factors.
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors.iter().fold(BigInt::one(), |a, d| a.lcm(d))
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn sublattice(&self) -> &RationalSublattice {
        &self.sub
    }

    /// Reduces coordinates into 0 ≤ x_i < d_i.
    pub fn normalize(&self, x: &[BigInt]) -> Vec<BigInt> {
        x.iter().zip(&self.invariant_factors).map(|(a, d)| a.mod_floor(d)).collect()
    }

    /// Class of an ambient vector of A; errors if the vector is not in A.
    pub fn element_coords(&self, v: &[BigRational]) -> Result<Vec<BigInt>, GlueError> {
        let c = self.coord_map.mul_vec(v);
        let c: Option<Vec<BigInt>> = c.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect();
        Ok(self.normalize(&c.ok_or(GlueError::NotContained)?))
    }

    /// Canonical representative of v + B: coordinates on the basis of B in [0, 1).
    pub fn reduce(&self, v: &[BigRational]) -> RatVec {
        let c: RatVec = self.sub.coords(v).iter().map(|x| x - x.floor()).collect();
        self.sub.from_coords(&c)
    }

    /// Canonical lift of a class given by generator coordinates.
    pub fn lift(&self, x: &[BigInt]) -> RatVec {
        let n = self.coord_map.cols();
        let mut v = vfrom_int(&alloc::vec![BigInt::zero(); n]);
        for (xi, g) in x.iter().zip(&self.generator_lifts) {
            if !xi.is_zero() {
                let c = int_rat(xi);
                for (vj, gj) in v.iter_mut().zip(g) {
                    *vj += &c * gj;
                }
            }
        }
        self.reduce(&v)
    }

    /// All elements in mixed-radix order (first coordinate slowest).
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let radices: Vec<u64> = self.invariant_factors.iter().map(|d| d.to_u64().expect("small group")).collect();
        let mut out = alloc::vec![Vec::new()];
        for &r in &radices {
            let mut next = Vec::with_capacity(out.len() * r as usize);
            for prefix in &out {
                for k in 0..r {
                    let mut p: Vec<BigInt> = prefix.clone();
                    p.push(BigInt::from(k));
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.normalize(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::rat;

    #[test]
    fn rank_one_quotients() {
        let g = RatMatrix::from_rows(&[alloc::vec![rat(72, 1)]]);
        let gamma = RationalSublattice::standard(g.clone());
        let dual = RationalSublattice::from_generators(g.clone(), &[alloc::vec![rat(1, 72)]]).unwrap();
        let sum = RationalSublattice::from_generators(g, &[alloc::vec![rat(1, 6)]]).unwrap();
        let q = FiniteAbelianPresentation::quotient(&dual, &sum).unwrap();
        assert_eq!(q.invariant_factors(), &[BigInt::from(12)]);
        assert!(FiniteAbelianPresentation::quotient(&gamma, &gamma).unwrap().is_trivial());
        assert_eq!(FiniteAbelianPresentation::quotient(&gamma, &dual), Err(GlueError::NotContained));
    }

    #[test]
    fn lifts_are_canonical() {
        let g = RatMatrix::from_rows(&[alloc::vec![rat(2, 1)]]);
        let l = RationalSublattice::standard(g.clone());
        let d = RationalSublattice::from_generators(g, &[alloc::vec![rat(1, 2)]]).unwrap();
        let q = FiniteAbelianPresentation::quotient(&d, &l).unwrap();
        assert_eq!(q.lift(&[BigInt::from(1)]), alloc::vec![rat(1, 2)]);
        assert_eq!(q.lift(&[BigInt::from(3)]), alloc::vec![rat(1, 2)]);
        assert_eq!(q.element_coords(&[rat(3, 2)]).unwrap(), alloc::vec![BigInt::from(1)]);
    }
}
