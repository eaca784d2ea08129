//! Truncated q-series with exponents on a grid (1/m)ℤ: inverse eta powers,
//! theta series of lattice cosets and the characters built from them.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::foundation::rat;
use crate::lattice::enumerate::points_in_ellipsoid;
use crate::lattice::{Lattice, RationalSublattice};
use crate::span::SpanDerived;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("lattice is not even")]
    NotEven,
    #[error("vector is not in the dual lattice")]
    NotInDual,
    #[error("exponent denominator too large")]
    DenominatorTooLarge,
}

/// Σ_k coeffs[k]·q^{(start+k)/denom}, known exactly up to the last stored exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracSeries {
    denom: u64,
    start: i64,
    coeffs: Vec<BigInt>,
}

impl FracSeries {
    pub fn new(denom: u64, start: i64, coeffs: Vec<BigInt>) -> Self {
        assert!(denom >= 1, "denominator must be positive");
        FracSeries { denom, start, coeffs }
    }

    /// The constant 1, known up to q^order.
    pub fn one(order: u64) -> Self {
        let mut coeffs = alloc::vec![BigInt::zero(); order as usize + 1];
        coeffs[0] = 1.into();
        FracSeries::new(1, 0, coeffs)
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn exponent(&self, k: usize) -> BigRational {
        BigRational::new((self.start + k as i64).into(), self.denom.into())
    }

    /// Largest exponent with a known coefficient.
    pub fn top(&self) -> Option<BigRational> {
        self.coeffs.len().checked_sub(1).map(|k| self.exponent(k))
    }

    /// Same series on the finer grid (1/(denom·f))ℤ.
    pub fn rescale(&self, f: u64) -> Self {
        if f == 1 || self.coeffs.is_empty() {
            return FracSeries { denom: self.denom * f, start: self.start * f as i64, coeffs: self.coeffs.clone() };
        }
        let mut coeffs = alloc::vec![BigInt::zero(); (self.coeffs.len() - 1) * f as usize + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * f as usize] = c.clone();
        }
        FracSeries { denom: self.denom * f, start: self.start * f as i64, coeffs }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let m = self.denom.lcm(&other.denom);
        (self.rescale(m / self.denom), other.rescale(m / other.denom))
    }

    /// Product, truncated to the range where both factors are known.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let len = a.coeffs.len().min(b.coeffs.len());
        let mut coeffs = alloc::vec![BigInt::zero(); len];
        for (i, x) in a.coeffs.iter().take(len).enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().take(len - i).enumerate() {
                coeffs[i + j] += x * y;
            }
        }
        FracSeries { denom: a.denom, start: a.start + b.start, coeffs }
    }

    /// Sum, truncated to the range where both summands are known.
    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let start = a.start.min(b.start);
        let end = (a.start + a.coeffs.len() as i64).min(b.start + b.coeffs.len() as i64);
        let len = (end - start).max(0) as usize;
        let mut coeffs = alloc::vec![BigInt::zero(); len];
        for s in [&a, &b] {
            for (k, c) in s.coeffs.iter().enumerate() {
                let idx = s.start + k as i64 - start;
                if (idx as usize) < len {
                    coeffs[idx as usize] += c;
                }
            }
        }
        FracSeries { denom: a.denom, start, coeffs }
    }

    /// Multiplication by q^e.
    pub fn shift(&self, e: &BigRational) -> Self {
        let d = e.denom().to_u64().expect("small denominator");
        let m = self.denom.lcm(&d);
        let mut s = self.rescale(m / self.denom);
        s.start += (e.numer() * BigInt::from(m / d)).to_i64().expect("small exponent");
        s
    }

    /// Coefficient of q^e; `None` beyond the known range.
    pub fn coeff_at(&self, e: &BigRational) -> Option<BigInt> {
        let scaled = e * BigRational::from_integer(self.denom.into()) - BigRational::from_integer(self.start.into());
        if let Some(top) = self.top() {
            if e > &top {
                return None;
            }
        } else {
            return None;
        }
        if !scaled.is_integer() || scaled.is_negative() {
            return Some(BigInt::zero());
        }
        Some(self.coeffs[scaled.to_integer().to_usize().expect("in range")].clone())
    }

    /// Drops everything above exponent e.
    pub fn truncate(&self, e: &BigRational) -> Self {
        let mut s = self.clone();
        while let Some(top) = s.top() {
            if &top <= e {
                break;
            }
            s.coeffs.pop();
        }
        s
    }

    /// Nonzero terms as (exponent, coefficient).
    pub fn terms(&self) -> Vec<(BigRational, BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (self.exponent(k), c.clone())).collect()
    }

    /// Strips leading zeros and coarsens the grid to the smallest denominator
    /// carrying all nonzero terms and the truncation point.
    pub fn normalize(&self) -> Self {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        let Some(lead) = lead else {
            return self.clone();
        };
        let start = self.start + lead as i64;
        let coeffs = &self.coeffs[lead..];
        let last = coeffs.len() as i64 - 1;
        let mut g = self.denom as i64;
        g = g.gcd(&start);
        g = g.gcd(&last);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                g = g.gcd(&(k as i64));
            }
        }
        let g = g.max(1);
        FracSeries {
            denom: self.denom / g as u64,
            start: start / g,
            coeffs: coeffs.iter().step_by(g as usize).cloned().collect(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

/// ∏_{j≥1} (1 − q^j)^{−d} up to q^order.
pub fn eta_inverse_power(d: u32, order: u64) -> FracSeries {
    let k = order as usize;
    let mut c = alloc::vec![BigInt::zero(); k + 1];
    c[0] = 1.into();
    for _ in 0..d {
        for j in 1..=k {
            for n in j..=k {
                let prev = c[n - j].clone();
                c[n] += prev;
            }
        }
    }
    FracSeries::new(1, 0, c)
}

/// Σ_{λ ∈ t + S} q^{⟨λ,λ⟩/2} up to q^max_exp.
pub fn theta_series(s: &RationalSublattice, translate: &[BigRational], max_exp: &BigRational) -> Result<FracSeries, SeriesError> {
    let gram = s.gram();
    let t = s.coords(translate);
    let bound = max_exp * rat(2, 1);
    let pts = points_in_ellipsoid(&gram, &t, &bound).ok_or(SeriesError::NotPositiveDefinite)?;
    let half = rat(1, 2);
    let exps: Vec<BigRational> = pts.iter().map(|(_, n)| n * &half).collect();
    let mut denom = BigInt::from(1);
    for e in &exps {
        denom = denom.lcm(e.denom());
    }
    let denom = denom.to_u64().ok_or(SeriesError::DenominatorTooLarge)?;
    let len = (max_exp * BigRational::from_integer(denom.into())).floor().to_integer();
    let len = len.to_usize().ok_or(SeriesError::DenominatorTooLarge)? + 1;
    let mut coeffs = alloc::vec![BigInt::zero(); len];
    for e in exps {
        let k = (e * BigRational::from_integer(denom.into())).to_integer().to_usize().expect("in range");
        coeffs[k] += 1;
    }
    Ok(FracSeries::new(denom, 0, coeffs))
}

/// θ_{l+Λ}·η^{−rank} including the q^{−rank/24} prefactor, up to q^{order − rank/24}.
pub fn character_unicoloured(l: &Lattice, weight: &[BigRational], order: u64) -> Result<FracSeries, SeriesError> {
    if !l.is_even() {
        return Err(SeriesError::NotEven);
    }
    if !l.is_positive_definite() {
        return Err(SeriesError::NotPositiveDefinite);
    }
    if !l.dual().contains(weight) {
        return Err(SeriesError::NotInDual);
    }
    coset_character(&l.as_sublattice(), weight, l.rank(), order)
}

/// θ_{l+(Λw−Λb)}·η^{−rank} including the q^{−rank/24} prefactor.
pub fn character_bicoloured(span: &SpanDerived, weight: &[BigRational], order: u64) -> Result<FracSeries, SeriesError> {
    let s = span.span();
    if !(s.gamma.is_positive_definite() && s.white.is_positive_definite() && s.black.is_positive_definite()) {
        return Err(SeriesError::NotPositiveDefinite);
    }
    if !span.dual_gamma().contains(weight) {
        return Err(SeriesError::NotInDual);
    }
    coset_character(span.sum(), weight, span.rank(), order)
}

/// θ_{t+S}·η^{−rank}·q^{−rank/24}, the energy-shifted character of one coset.
pub fn coset_character(s: &RationalSublattice, t: &[BigRational], rank: usize, order: u64) -> Result<FracSeries, SeriesError> {
    let theta = theta_series(s, t, &BigRational::from_integer(order.into()))?;
    let eta = eta_inverse_power(rank as u32, order);
    Ok(theta.mul(&eta).shift(&rat(-(rank as i64), 24)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{vfrom_i64, IntMatrix};
    use crate::lattice::parse_builtin;
    use crate::span::builtin_span;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta_inverse_power(1, 5).coeffs(), ints(&[1, 1, 2, 3, 5, 7]).as_slice());
        assert_eq!(eta_inverse_power(0, 4).coeffs(), ints(&[1, 0, 0, 0, 0]).as_slice());
        assert_eq!(eta_inverse_power(8, 2).coeffs(), ints(&[1, 8, 44]).as_slice());
    }

    #[test]
    fn theta_a1() {
        let a1 = parse_builtin("A1").unwrap();
        let th = theta_series(&a1.as_sublattice(), &vfrom_i64(&[0]), &rat(9, 1)).unwrap();
        let expect: Vec<_> = [(0, 1), (1, 2), (4, 2), (9, 2)].iter().map(|&(e, c)| (rat(e, 1), BigInt::from(c))).collect();
        assert_eq!(th.terms(), expect);
        let half = theta_series(&a1.as_sublattice(), &[rat(1, 2)], &rat(3, 1)).unwrap();
        let expect: Vec<_> = [(1, 2), (9, 2)].iter().map(|&(e, c)| (rat(e, 4), BigInt::from(c))).collect();
        assert_eq!(half.terms(), expect);
    }

    #[test]
    fn theta_e8_roots() {
        let e8 = parse_builtin("E8").unwrap();
        let th = theta_series(&e8.as_sublattice(), &vfrom_i64(&[0; 8]), &rat(1, 1)).unwrap();
        assert_eq!(th.coeff_at(&rat(1, 1)), Some(BigInt::from(240)));
    }

    #[test]
    fn e8_character() {
        let e8 = parse_builtin("E8").unwrap();
        let ch = character_unicoloured(&e8, &vfrom_i64(&[0; 8]), 2).unwrap().normalize();
        assert_eq!((ch.denom(), ch.start()), (3, -1));
        assert_eq!(ch.coeffs(), ints(&[1, 0, 0, 248, 0, 0, 4124]).as_slice());
    }

    #[test]
    fn a1_character_head() {
        let a1 = parse_builtin("A1").unwrap();
        let ch = character_unicoloured(&a1, &[rat(0, 1)], 1).unwrap();
        assert_eq!(ch.coeff_at(&rat(-1, 24)), Some(BigInt::from(1)));
        assert_eq!(ch.coeff_at(&rat(23, 24)), Some(BigInt::from(3)));
        assert_eq!(ch.coeff_at(&rat(47, 24)), None);
    }

    #[test]
    fn bicoloured_characters() {
        let r = builtin_span("rank1-72").unwrap().derive();
        let ch = character_bicoloured(&r, &[rat(0, 1)], 1).unwrap();
        assert_eq!(ch.coeff_at(&rat(-1, 24)), Some(BigInt::from(1)));
        assert_eq!(ch.coeff_at(&rat(23, 24)), Some(BigInt::from(3)));
        let id = builtin_span("identity:A2").unwrap().derive();
        let a2 = parse_builtin("A2").unwrap();
        let w = [rat(1, 3), rat(2, 3)];
        assert_eq!(character_bicoloured(&id, &w, 3).unwrap(), character_unicoloured(&a2, &w, 3).unwrap());
    }

    #[test]
    fn errors() {
        let z = Lattice::new(IntMatrix::from_i64(&[alloc::vec![1]])).unwrap();
        assert_eq!(character_unicoloured(&z, &[rat(0, 1)], 1), Err(SeriesError::NotEven));
        let a1 = parse_builtin("A1").unwrap();
        assert_eq!(character_unicoloured(&a1, &[rat(1, 3)], 1), Err(SeriesError::NotInDual));
        let u = parse_builtin("U").unwrap();
        assert_eq!(character_unicoloured(&u, &vfrom_i64(&[0, 0]), 1), Err(SeriesError::NotPositiveDefinite));
    }

    #[test]
    fn algebra() {
        let a = FracSeries::new(2, -1, ints(&[1, 2, 3]));
        let b = FracSeries::new(3, 0, ints(&[1, 1]));
        let p = a.mul(&b);
        assert_eq!(p.denom(), 6);
        assert_eq!(p.start(), -3);
        assert_eq!(p.coeff_at(&rat(-1, 2)), Some(BigInt::from(1)));
        assert_eq!(p.coeff_at(&rat(-1, 6)), Some(BigInt::from(1)));
        let s = a.add(&a);
        assert_eq!(s.coeffs(), ints(&[2, 4, 6]).as_slice());
        assert_eq!(a.shift(&rat(1, 2)).start(), 0);
        assert_eq!(a.rescale(3).normalize(), a);
    }
}
