//! Exact Fincke–Pohst enumeration of lattice points in a translated ellipsoid.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::foundation::RatMatrix;

/// Upper-triangular square completion of a positive definite form:
/// `Q(y) = Σ_i d_i (y_i + Σ_{j>i} u_ij y_j)²`. Returns `None` unless positive definite.
fn completion(q: &RatMatrix) -> Option<(Vec<BigRational>, RatMatrix)> {
    let n = q.rows();
    let mut a = q.clone();
    for i in 0..n {
        if !a.get(i, i).is_positive() {
            return None;
        }
        for j in i + 1..n {
            let v = a.get(i, j) / a.get(i, i);
            a.set(j, i, a.get(i, j).clone());
            a.set(i, j, v);
        }
        for k in i + 1..n {
            for l in k..n {
                let v = a.get(k, l) - a.get(k, i) * a.get(i, l);
                a.set(k, l, v);
            }
        }
    }
    let d = (0..n).map(|i| a.get(i, i).clone()).collect();
    Some((d, a))
}

pub fn is_positive_definite(q: &RatMatrix) -> bool {
    completion(q).is_some()
}

/// All integer `x` with `(x + t)ᵀ Q (x + t) ≤ bound`, with their values,
/// sorted lexicographically by `x`. Returns `None` if `Q` is not positive definite.
pub fn points_in_ellipsoid(
    q: &RatMatrix,
    t: &[BigRational],
    bound: &BigRational,
) -> Option<Vec<(Vec<BigInt>, BigRational)>> {
    let n = q.rows();
    let (d, u) = completion(q)?;
    let mut out = Vec::new();
    if bound.is_negative() {
        return Some(out);
    }
    let mut x = alloc::vec![BigInt::zero(); n];
    let mut y = alloc::vec![BigRational::zero(); n];
    recurse(n, &d, &u, t, bound.clone(), &mut x, &mut y, &mut out);
    for (xv, val) in out.iter_mut() {
        let yv: Vec<BigRational> = xv.iter().zip(t).map(|(a, b)| BigRational::from_integer(a.clone()) + b).collect();
        *val = q.form(&yv, &yv);
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Some(out)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    level: usize,
    d: &[BigRational],
    u: &RatMatrix,
    t: &[BigRational],
    remaining: BigRational,
    x: &mut Vec<BigInt>,
    y: &mut Vec<BigRational>,
    out: &mut Vec<(Vec<BigInt>, BigRational)>,
) {
    if level == 0 {
        out.push((x.clone(), BigRational::zero()));
        return;
    }
    let i = level - 1;
    let mut c = BigRational::zero();
    for j in i + 1..d.len() {
        c -= u.get(i, j) * &y[j];
    }
    // need d_i (x_i + t_i - c)² ≤ remaining
    let centre = &c - &t[i];
    let radius_sq = &remaining / &d[i];
    let r: BigInt = radius_sq.floor().to_integer().sqrt() + 1;
    let lo = centre.floor().to_integer() - &r;
    let hi = centre.ceil().to_integer() + &r;
    let mut xi = lo;
    while xi <= hi {
        let yi = BigRational::from_integer(xi.clone()) + &t[i];
        let dev = &yi - &c;
        let used = &d[i] * &dev * &dev;
        if used <= remaining {
            x[i] = xi.clone();
            y[i] = yi;
            recurse(i, d, u, t, &remaining - used, x, y, out);
        }
        xi += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{rat, vfrom_i64};

    #[test]
    fn a1_points() {
        let q = RatMatrix::from_rows(&[vfrom_i64(&[2])]);
        let pts = points_in_ellipsoid(&q, &[rat(0, 1)], &rat(18, 1)).unwrap();
        assert_eq!(pts.len(), 7);
        let pts = points_in_ellipsoid(&q, &[rat(1, 2)], &rat(1, 2)).unwrap();
        assert_eq!(pts.len(), 2);
    }

    #[test]
    fn indefinite_rejected() {
        let q = RatMatrix::from_rows(&[vfrom_i64(&[0, 1]), vfrom_i64(&[1, 0])]);
        assert!(points_in_ellipsoid(&q, &[rat(0, 1), rat(0, 1)], &rat(2, 1)).is_none());
    }
}
