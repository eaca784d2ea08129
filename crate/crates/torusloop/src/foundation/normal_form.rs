use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

fn row_combine(m: &mut IntMatrix, r: usize, i: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
    // (row_r, row_i) <- (s·row_r + t·row_i, u·row_r + v·row_i)
    for j in 0..m.cols() {
        let a = m.get(r, j).clone();
        let b = m.get(i, j).clone();
        m.set(r, j, s * &a + t * &b);
        m.set(i, j, u * &a + v * &b);
    }
}

fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    // row_dst -= q·row_src
    if q.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let v = m.get(dst, j) - q * m.get(src, j);
        m.set(dst, j, v);
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let v = m.get(i, dst) - q * m.get(i, src);
        m.set(i, dst, v);
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols() {
        let v = -m.get(r, j).clone();
        m.set(r, j, v);
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `H = U·M`, `U` unimodular,
/// `H` in echelon form with positive pivots and entries above each pivot in `[0, pivot)`.
/// Zero rows of `H` are at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut r = 0;
    for c in 0..h.cols() {
        if r == h.rows() {
            break;
        }
        for i in r + 1..h.rows() {
            if h.get(i, c).is_zero() {
                continue;
            }
            let a = h.get(r, c).clone();
            let b = h.get(i, c).clone();
            let e = a.extended_gcd(&b);
            let (ua, vb) = (-(&b / &e.gcd), &a / &e.gcd);
            row_combine(&mut h, r, i, &e.x, &e.y, &ua, &vb);
            row_combine(&mut u, r, i, &e.x, &e.y, &ua, &vb);
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        let p = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&p);
            row_axpy(&mut h, i, r, &q);
            row_axpy(&mut u, i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Number of nonzero rows of a row-echelon matrix.
pub fn echelon_rank(h: &IntMatrix) -> usize {
    (0..h.rows()).take_while(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row lattice.
pub fn hnf_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(m);
    let r = echelon_rank(&h);
    IntMatrix::from_rows(&h.to_rows()[..r])
}

/// Smith normal form: returns `(D, U, V)` with `D = U·M·V` diagonal, nonnegative,
/// and `d_1 | d_2 | …`.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (d, u, v);
            };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let p = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = d.get(i, t).div_floor(&p);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = d.get(t, j).div_floor(&p);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    row_axpy(&mut d, t, i, &-BigInt::one());
                    row_axpy(&mut u, t, i, &-BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    (d, u, v)
}

/// Diagonal of a Smith form, truncated to the nonzero entries.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (d, _, _) = smith_normal_form(m);
    (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
}

/// Basis (as rows) of the integer kernel `{x : A·x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let (d, _, v) = smith_normal_form(a);
    let r = (0..d.rows().min(d.cols())).filter(|&i| !d.get(i, i).is_zero()).count();
    let cols: Vec<Vec<BigInt>> = (r..a.cols()).map(|j| v.col(j)).collect();
    if cols.is_empty() {
        return IntMatrix::zeros(0, a.cols());
    }
    hnf_basis(&IntMatrix::from_rows(&cols))
}

/// Solves `A·x = b` over the integers.
///
/// The answer is canonical: it is reduced modulo the kernel lattice against the
/// kernel's Hermite basis, so it does not depend on how the solution was found.
pub fn solve_diophantine(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length");
    let (d, u, v) = smith_normal_form(a);
    let c = u.mul_vec(b);
    let n = a.cols();
    let mut y = alloc::vec![BigInt::zero(); n];
    for (i, ci) in c.iter().enumerate() {
        let di = if i < d.cols() { d.get(i, i).clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else {
            let (q, r) = ci.div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    let mut x = v.mul_vec(&y);
    let ker = integer_kernel(a);
    for k in 0..ker.rows() {
        let row = ker.row(k);
        let p = row.iter().position(|e| !e.is_zero()).expect("echelon row");
        let q = x[p].div_floor(&row[p]);
        if !q.is_zero() {
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi -= &q * ri;
            }
        }
    }
    Some(x)
}
