use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use crate::foundation::{int_rat, vto_int, Angle, RatMatrix};
use crate::lattice::RationalSublattice;

use super::SpanError;

/// A bi-additive ℚ/ℤ-valued function on a lattice, given by its values on a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiadditiveCocycle {
    basis: RationalSublattice,
    table: Vec<Vec<Angle>>,
}

impl BiadditiveCocycle {
    /// The cocycle with ε(f_i,f_j) = comm(f_i,f_j) for i < j and 0 otherwise; its
    /// commutator ε(λ,μ) − ε(μ,λ) is `comm` whenever `comm` is bi-additive and alternating.
    pub fn from_commutator(basis: RationalSublattice, comm: impl Fn(&[BigRational], &[BigRational]) -> Angle) -> Self {
        let f = basis.basis_vectors();
        let n = f.len();
        let table = (0..n)
            .map(|i| (0..n).map(|j| if i < j { comm(&f[i], &f[j]) } else { Angle::zero() }).collect())
            .collect();
        BiadditiveCocycle { basis, table }
    }

    /// The standard choice on an integral lattice with commutator (−1)^⟨λ,μ⟩.
    pub fn for_even_lattice(lattice: RationalSublattice) -> Self {
        let g = lattice.ambient_gram().clone();
        Self::from_commutator(lattice, |a, b| Angle::new(g.form_q(a, b) / BigRational::from_integer(2.into())))
    }

    /// Graded variant with commutator (−1)^{⟨λ,μ⟩ + ⟨λ,λ⟩⟨μ,μ⟩}.
    pub fn for_odd_lattice(lattice: RationalSublattice) -> Self {
        let g = lattice.ambient_gram().clone();
        Self::from_commutator(lattice, |a, b| {
            let v = g.form_q(a, b) + g.form_q(a, a) * g.form_q(b, b);
            Angle::new(v / BigRational::from_integer(2.into()))
        })
    }

    pub fn lattice(&self) -> &RationalSublattice {
        &self.basis
    }

    pub fn table(&self) -> &[Vec<Angle>] {
        &self.table
    }

    pub fn eval(&self, a: &[BigRational], b: &[BigRational]) -> Result<Angle, SpanError> {
        let ca = vto_int(&self.basis.coords(a)).ok_or(SpanError::NotInSumLattice)?;
        let cb = vto_int(&self.basis.coords(b)).ok_or(SpanError::NotInSumLattice)?;
        let mut acc = BigRational::zero();
        for (i, x) in ca.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in cb.iter().enumerate() {
                let t = &self.table[i][j];
                if !y.is_zero() && !t.is_zero() {
                    acc += int_rat(&(x * y)) * t.value();
                }
            }
        }
        Ok(Angle::new(acc))
    }

    pub fn commutator(&self, a: &[BigRational], b: &[BigRational]) -> Result<Angle, SpanError> {
        Ok(self.eval(a, b)? - self.eval(b, a)?)
    }

    /// Pulls back along a linear map sending integer coordinates of `target` into this lattice.
    pub fn pullback(&self, map: &RatMatrix, target: RationalSublattice) -> Self {
        let f: Vec<_> = target.basis_vectors().iter().map(|v| map.mul_vec(v)).collect();
        let table = f
            .iter()
            .map(|a| f.iter().map(|b| self.eval(a, b).expect("map lands in the lattice")).collect())
            .collect();
        BiadditiveCocycle { basis: target, table }
    }
}
