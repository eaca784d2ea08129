use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use crate::foundation::{integer_kernel, rat, vfrom_i64, IntMatrix, RatMatrix, RatVec};

use super::{Lattice, LatticeError, RationalSublattice};

pub const BUILTIN_HELP: &str = "A<n> (n>=1), D<n> (n>=3), E6, E7, E8, U, Z<n> (odd, identity form); join with '+' for direct sums";

fn euclid(x: &[BigRational], y: &[BigRational]) -> BigRational {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn gram_of(vectors: &[RatVec]) -> IntMatrix {
    let g = RatMatrix::from_fn(vectors.len(), vectors.len(), |i, j| euclid(&vectors[i], &vectors[j]));
    g.to_int().expect("integral catalog lattice")
}

fn eps(n: usize, i: usize) -> RatVec {
    let mut v = vfrom_i64(&alloc::vec![0; n]);
    v[i] = rat(1, 1);
    v
}

/// A_n basis ε_i − ε_{i+1} in ℤ^{n+1}.
fn a_vectors(n: usize) -> Vec<RatVec> {
    (0..n)
        .map(|i| {
            let mut v = eps(n + 1, i);
            v[i + 1] = rat(-1, 1);
            v
        })
        .collect()
}

/// D_n basis: the A_{n−1} basis of ℤ^n together with ε_1 + ε_2, in ε-coordinates.
pub fn d_vectors(n: usize) -> Vec<RatVec> {
    let mut vs = a_vectors(n - 1);
    let mut e12 = eps(n, 0);
    e12[1] = rat(1, 1);
    vs.push(e12);
    vs
}

/// E_8 = D_8 + ℤ·½(1,…,1), re-based by Hermite normal form.
fn e8_vectors() -> Vec<RatVec> {
    let mut gens = d_vectors(8);
    gens.push(alloc::vec![rat(1, 2); 8]);
    let euclid8 = RatMatrix::identity(8);
    RationalSublattice::from_generators(euclid8, &gens).expect("full rank").basis_vectors()
}

/// Orthogonal complement in E_8 of the given vectors, re-based by Hermite normal form.
fn e8_complement(of: &[RatVec]) -> Vec<RatVec> {
    let basis = e8_vectors();
    let a = RatMatrix::from_fn(of.len(), 8, |i, j| euclid(&of[i], &basis[j]));
    let k = integer_kernel(&a.to_int().expect("E8 is integral"));
    (0..k.rows())
        .map(|r| {
            let mut v = vfrom_i64(&[0; 8]);
            for (c, b) in k.row(r).iter().zip(&basis) {
                if !c.is_zero() {
                    let c = BigRational::from_integer(c.clone());
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi += &c * bi;
                    }
                }
            }
            v
        })
        .collect()
}

fn root(i: usize, j: usize) -> RatVec {
    let mut v = eps(8, i);
    v[j] = rat(-1, 1);
    v
}

/// A catalog lattice by family and rank.
pub fn builtin(family: &str, n: Option<usize>) -> Result<Lattice, LatticeError> {
    let bad = || LatticeError::BadRank(family.to_string());
    let (gram, name) = match family {
        "A" => {
            let n = n.filter(|&n| n >= 1).ok_or_else(bad)?;
            (gram_of(&a_vectors(n)), format!("A{n}"))
        }
        "D" => {
            let n = n.filter(|&n| n >= 3).ok_or_else(bad)?;
            (gram_of(&d_vectors(n)), format!("D{n}"))
        }
        "Z" => {
            let n = n.filter(|&n| n >= 1).ok_or_else(bad)?;
            (IntMatrix::identity(n), format!("Z{n}"))
        }
        "E" => match n {
            Some(8) => (gram_of(&e8_vectors()), "E8".into()),
            Some(7) => (gram_of(&e8_complement(&[root(0, 1)])), "E7".into()),
            Some(6) => (gram_of(&e8_complement(&[root(0, 1), root(1, 2)])), "E6".into()),
            _ => return Err(bad()),
        },
        "U" => {
            if n.is_some() {
                return Err(bad());
            }
            (IntMatrix::from_i64(&[alloc::vec![0, 1], alloc::vec![1, 0]]), "U".into())
        }
        _ => return Err(LatticeError::UnknownName(family.to_string())),
    };
    Ok(Lattice::new(gram)?.named(name))
}

/// Parses names such as `A2`, `D_8`, `E8`, `U`, `Z2` and sums `A2+A2`.
pub fn parse_builtin(name: &str) -> Result<Lattice, LatticeError> {
    let mut acc: Option<Lattice> = None;
    for part in name.split('+') {
        let part = part.trim();
        let family: String = part.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
        let rest = part[family.len()..].trim_start_matches('_');
        let n = if rest.is_empty() {
            None
        } else {
            Some(rest.parse::<usize>().map_err(|_| LatticeError::UnknownName(part.to_string()))?)
        };
        let l = builtin(&family, n)?;
        acc = Some(match acc {
            None => l,
            Some(a) => a.direct_sum(&l),
        });
    }
    acc.ok_or_else(|| LatticeError::UnknownName(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::BigInt;

    #[test]
    fn a2_gram() {
        let a2 = parse_builtin("A2").unwrap();
        assert_eq!(a2.gram(), &IntMatrix::from_i64(&[alloc::vec![2, -1], alloc::vec![-1, 2]]));
        assert_eq!(a2.disc(), BigInt::from(3));
    }

    #[test]
    fn exceptional_discriminants() {
        for (name, disc) in [("E6", 3), ("E7", 2), ("E8", 1)] {
            let l = parse_builtin(name).unwrap();
            assert!(l.is_even() && l.is_positive_definite(), "{name}");
            assert_eq!(l.disc(), BigInt::from(disc), "{name}");
        }
        assert_eq!(parse_builtin("E6").unwrap().rank(), 6);
        assert_eq!(parse_builtin("E7").unwrap().rank(), 7);
    }

    #[test]
    fn hyperbolic_plane() {
        assert_eq!(parse_builtin("U").unwrap().gram(), &IntMatrix::from_i64(&[alloc::vec![0, 1], alloc::vec![1, 0]]));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_builtin("Q3"), Err(LatticeError::UnknownName(_))));
        assert!(matches!(parse_builtin("D2"), Err(LatticeError::BadRank(_))));
        assert!(matches!(parse_builtin("A0"), Err(LatticeError::BadRank(_))));
        assert!(matches!(parse_builtin("E9"), Err(LatticeError::BadRank(_))));
    }

    #[test]
    fn d8_disc() {
        assert_eq!(parse_builtin("D8").unwrap().disc(), BigInt::from(4));
        assert_eq!(parse_builtin("A2+A2").unwrap().disc(), BigInt::from(9));
    }
}
