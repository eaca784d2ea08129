//! Rational arithmetic with a machine-integer path for small operands.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

fn small(x: &BigRational) -> Option<(i128, i128)> {
    Some((x.numer().to_i64()? as i128, x.denom().to_i64()? as i128))
}

/// n/d in lowest terms; d ≠ 0.
fn reduced(n: i128, d: i128) -> BigRational {
    let g = n.gcd(&d);
    let (n, d) = if d < 0 { (-n / g, -d / g) } else { (n / g, d / g) };
    BigRational::new_raw(BigInt::from(n), BigInt::from(d))
}

pub fn qadd(a: &BigRational, b: &BigRational) -> BigRational {
    match (small(a), small(b)) {
        (Some((an, ad)), Some((bn, bd))) if ad == bd => reduced(an + bn, ad),
        (Some((an, ad)), Some((bn, bd))) => match (an * bd).checked_add(bn * ad).zip(ad.checked_mul(bd)) {
            Some((n, d)) => reduced(n, d),
            None => a + b,
        },
        _ => a + b,
    }
}

pub fn qsub(a: &BigRational, b: &BigRational) -> BigRational {
    match (small(a), small(b)) {
        (Some((an, ad)), Some((bn, bd))) if ad == bd => reduced(an - bn, ad),
        (Some((an, ad)), Some((bn, bd))) => match (an * bd).checked_sub(bn * ad).zip(ad.checked_mul(bd)) {
            Some((n, d)) => reduced(n, d),
            None => a - b,
        },
        _ => a - b,
    }
}

pub fn qmul(a: &BigRational, b: &BigRational) -> BigRational {
    match (small(a), small(b)) {
        (Some((an, ad)), Some((bn, bd))) => reduced(an * bn, ad * bd),
        _ => a * b,
    }
}

/// a / b; panics if b = 0.
pub fn qdiv(a: &BigRational, b: &BigRational) -> BigRational {
    assert!(!b.is_zero(), "division by zero");
    match (small(a), small(b)) {
        (Some((an, ad)), Some((bn, bd))) => reduced(an * bd, ad * bn),
        _ => a / b,
    }
}

pub fn qfloor(a: &BigRational) -> BigRational {
    match small(a) {
        Some((n, d)) => BigRational::from_integer(BigInt::from(n.div_euclid(d))),
        None => a.floor(),
    }
}

/// Σ a_i·b_i.
pub fn qdot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| if x.is_zero() || y.is_zero() { acc } else { qadd(&acc, &qmul(x, y)) })
}
