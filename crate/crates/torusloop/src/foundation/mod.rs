//! Exact arithmetic substrate: big rationals, dense integer and rational
//! matrices, Hermite and Smith normal forms, integer linear systems, and the
//! circle group ℚ/ℤ.

mod angle;
mod fastq;
mod matrix;
mod normal_form;

use alloc::vec::Vec;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use angle::Angle;
pub use fastq::{qadd, qdiv, qdot, qfloor, qmul, qsub};
pub use matrix::{common_denominator, IntMatrix, Matrix, RatMatrix};
pub use normal_form::{
    echelon_rank, hermite_normal_form, hnf_basis, integer_kernel, invariant_factors, smith_normal_form,
    solve_diophantine,
};

use num_traits::{One, Zero};

/// A rational vector in some fixed coordinate system.
pub type RatVec = Vec<BigRational>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

pub fn zero_vec(n: usize) -> RatVec {
    alloc::vec![BigRational::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> RatVec {
    let mut v = zero_vec(n);
    v[i] = BigRational::one();
    v
}

pub fn vadd(a: &[BigRational], b: &[BigRational]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| qadd(x, y)).collect()
}

pub fn vsub(a: &[BigRational], b: &[BigRational]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| qsub(x, y)).collect()
}

pub fn vneg(a: &[BigRational]) -> RatVec {
    a.iter().map(|x| -x).collect()
}

pub fn vscale(c: &BigRational, a: &[BigRational]) -> RatVec {
    a.iter().map(|x| qmul(c, x)).collect()
}

pub fn vis_zero(a: &[BigRational]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn vis_integral(a: &[BigRational]) -> bool {
    a.iter().all(|x| x.is_integer())
}

pub fn vto_int(a: &[BigRational]) -> Option<Vec<BigInt>> {
    a.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

pub fn vfrom_int(a: &[BigInt]) -> RatVec {
    a.iter().map(int_rat).collect()
}

pub fn vfrom_i64(a: &[i64]) -> RatVec {
    a.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

/// Integer matrix times rational vector.
pub fn int_mul_vec(m: &IntMatrix, v: &[BigRational]) -> RatVec {
    m.to_rat().mul_vec(v)
}
