use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// An element of ℚ/ℤ, stored as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle(BigRational);

impl Angle {
    pub fn new(r: BigRational) -> Self {
        let f = r.floor();
        Angle(r - f)
    }

    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    pub fn half() -> Self {
        Angle::frac(1, 2)
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Angle::new(BigRational::new(n.into(), d.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Order of the element in ℚ/ℤ.
    pub fn order(&self) -> BigInt {
        self.0.denom().clone()
    }

    pub fn times(&self, k: &BigInt) -> Self {
        Angle::new(&self.0 * BigRational::from_integer(k.clone()))
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({})", self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<BigRational> for Angle {
    fn from(r: BigRational) -> Self {
        Angle::new(r)
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, o: Angle) -> Angle {
        Angle::new(self.0 + o.0)
    }
}

impl Add<&Angle> for &Angle {
    type Output = Angle;
    fn add(self, o: &Angle) -> Angle {
        Angle::new(&self.0 + &o.0)
    }
}

impl AddAssign for Angle {
    fn add_assign(&mut self, o: Angle) {
        *self = Angle::new(&self.0 + o.0);
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, o: Angle) -> Angle {
        Angle::new(self.0 - o.0)
    }
}

impl Sub<&Angle> for &Angle {
    type Output = Angle;
    fn sub(self, o: &Angle) -> Angle {
        Angle::new(&self.0 - &o.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::new(-self.0)
    }
}

impl Neg for &Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::new(-self.0.clone())
    }
}

impl Sum for Angle {
    fn sum<I: Iterator<Item = Angle>>(it: I) -> Angle {
        it.fold(Angle::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_mod_one() {
        assert_eq!(Angle::frac(-2, 3), Angle::frac(1, 3));
        assert_eq!(Angle::frac(5, 2), Angle::half());
        assert!(Angle::frac(7, 1).is_zero());
        assert_eq!(Angle::frac(3, 4).order(), BigInt::from(4));
    }

    #[test]
    fn order_kills() {
        let a = Angle::frac(5, 12);
        assert!(a.times(&a.order()).is_zero());
    }
}
