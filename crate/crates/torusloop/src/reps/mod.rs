//! Labels of irreducible positive energy representations, their isomorphism
//! test, conjugation shifts and character data.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::foundation::{int_mul_vec, rat, vfrom_int, vsub, IntMatrix, RatVec};
use crate::glue::FiniteAbelianPresentation;
use crate::lattice::enumerate::points_in_ellipsoid;
use crate::lattice::{Lattice, RationalSublattice};
use crate::series::{coset_character, eta_inverse_power, FracSeries, SeriesError};
use crate::span::{finite_quotient, SpanDerived};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepsError {
    #[error("lattice is not even")]
    NotEven,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("labels belong to different settings")]
    Mismatch,
    #[error("vector is not in the lattice")]
    NotInLattice,
    #[error("weight is not in the dual lattice")]
    NotInDual,
    #[error("character has the wrong number of coordinates")]
    BadCharacter,
    #[error("matrix is not an isometry")]
    NotIsometry,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Unicoloured,
    Bicoloured,
}

/// A weight l with rotation cover m; bicoloured labels also carry a character χ
/// of (Λw∩Λb)/Γ, given by coordinates c_i with χ(x) = Σ c_i x_i / d_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Label {
    pub chi: Option<Vec<BigInt>>,
    pub l: RatVec,
    pub m: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionTerm {
    pub lambda: RatVec,
    pub label: Label,
    pub head: FracSeries,
}

/// Least m ≥ min with m·norm ∈ 2ℤ.
pub fn rotation_cover(norm: &BigRational, min: u64) -> u64 {
    let two_q = norm.denom() * BigInt::from(2);
    let step = (&two_q / two_q.gcd(norm.numer())).to_u64().expect("small denominator");
    step * min.div_ceil(step).max(1)
}

/// The data the classification depends on: the lattice of windings S, its
/// dual lattice of weights and the least admissible rotation cover.
#[derive(Clone, Debug)]
pub struct LabelSpace {
    kind: Kind,
    windings: RationalSublattice,
    weights: FiniteAbelianPresentation,
    characters: Option<FiniteAbelianPresentation>,
    min_cover: u64,
    gram: IntMatrix,
}

impl LabelSpace {
    pub fn unicoloured(l: &Lattice) -> Result<Self, RepsError> {
        if !l.is_even() {
            return Err(RepsError::NotEven);
        }
        if !l.is_positive_definite() {
            return Err(RepsError::NotPositiveDefinite);
        }
        let windings = l.as_sublattice();
        let weights = finite_quotient(&l.dual(), &windings).expect("Λ ⊆ Λ^∨");
        Ok(LabelSpace { kind: Kind::Unicoloured, windings, weights, characters: None, min_cover: 1, gram: l.gram().clone() })
    }

    pub fn bicoloured(d: &SpanDerived) -> Result<Self, RepsError> {
        let s = d.span();
        if !(s.gamma.is_positive_definite() && s.white.is_positive_definite() && s.black.is_positive_definite()) {
            return Err(RepsError::NotPositiveDefinite);
        }
        Ok(LabelSpace {
            kind: Kind::Bicoloured,
            windings: d.sum().clone(),
            weights: d.dual_quotient(),
            characters: Some(d.intersection_quotient()),
            min_cover: d.level().to_u64().expect("small level"),
            gram: s.gamma.gram().clone(),
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.windings.rank()
    }

    /// Λ or Λw−Λb.
    pub fn windings(&self) -> &RationalSublattice {
        &self.windings
    }

    /// Λ^∨/Λ or Γ^∨/(Λw−Λb).
    pub fn weight_group(&self) -> &FiniteAbelianPresentation {
        &self.weights
    }

    /// (Λw∩Λb)/Γ, whose dual indexes χ.
    pub fn character_group(&self) -> Option<&FiniteAbelianPresentation> {
        self.characters.as_ref()
    }

    pub fn min_cover(&self) -> u64 {
        self.min_cover
    }

    pub fn norm(&self, l: &[BigRational]) -> BigRational {
        self.windings.ambient_gram().form(l, l)
    }

    pub fn label(&self, chi: Option<Vec<BigInt>>, l: RatVec) -> Result<Label, RepsError> {
        if l.len() != self.rank() {
            return Err(RepsError::Mismatch);
        }
        if self.weights.element_coords(&l).is_err() {
            return Err(RepsError::NotInDual);
        }
        let chi = match (&self.characters, chi) {
            (None, None) => None,
            (Some(g), Some(c)) if c.len() == g.invariant_factors().len() => Some(g.normalize(&c)),
            (Some(_), Some(_)) => return Err(RepsError::BadCharacter),
            _ => return Err(RepsError::Mismatch),
        };
        let m = rotation_cover(&self.norm(&l), self.min_cover);
        Ok(Label { chi, l, m })
    }

    /// One label per isomorphism class, with canonical weight lifts.
    pub fn classify(&self) -> Vec<Label> {
        let chis: Vec<Option<Vec<BigInt>>> = match &self.characters {
            None => alloc::vec![None],
            Some(g) => g.elements().into_iter().map(Some).collect(),
        };
        let mut out = Vec::new();
        for chi in chis {
            for x in self.weights.elements() {
                out.push(self.label(chi.clone(), self.weights.lift(&x)).expect("canonical lift"));
            }
        }
        out
    }

    fn check(&self, a: &Label) -> Result<(), RepsError> {
        let chi_ok = match (&self.characters, &a.chi) {
            (None, None) => true,
            (Some(g), Some(c)) => c.len() == g.invariant_factors().len(),
            _ => false,
        };
        if !chi_ok || a.l.len() != self.rank() {
            return Err(RepsError::Mismatch);
        }
        Ok(())
    }

    pub fn isomorphic(&self, a: &Label, b: &Label) -> Result<bool, RepsError> {
        self.check(a)?;
        self.check(b)?;
        let same_chi = match (&self.characters, &a.chi, &b.chi) {
            (Some(g), Some(x), Some(y)) => g.normalize(x) == g.normalize(y),
            _ => true,
        };
        Ok(same_chi && self.windings.contains(&vsub(&a.l, &b.l)))
    }

    /// The label of the summand over the coset of λ: l ↦ l − λ.
    pub fn conjugate_shift(&self, a: &Label, lambda: &[BigRational]) -> Result<Label, RepsError> {
        self.check(a)?;
        if lambda.len() != self.rank() {
            return Err(RepsError::Mismatch);
        }
        if !self.windings.contains(lambda) {
            return Err(RepsError::NotInLattice);
        }
        self.label(a.chi.clone(), vsub(&a.l, lambda))
    }

    /// All λ with ⟨l−λ,l−λ⟩/2 ≤ max_norm, each with the head q^{⟨l−λ,l−λ⟩/2}·η^{−rank}
    /// known up to q^{max_norm − rank/24}.
    pub fn restriction(&self, a: &Label, max_norm: &BigRational) -> Result<Vec<RestrictionTerm>, RepsError> {
        self.check(a)?;
        let c = self.windings.coords(&a.l);
        let bound = max_norm * rat(2, 1);
        let pts = points_in_ellipsoid(&self.windings.gram(), &c.iter().map(|x| -x).collect::<Vec<_>>(), &bound)
            .ok_or(RepsError::NotPositiveDefinite)?;
        let top = max_norm - self.energy_shift();
        let mut out = Vec::new();
        for (x, _) in pts {
            let lambda = self.windings.from_coords(&vfrom_int(&x));
            let label = self.conjugate_shift(a, &lambda)?;
            let e = self.norm(&label.l) / BigInt::from(2) - self.energy_shift();
            let head = head_series(&e, self.rank(), &top);
            out.push(RestrictionTerm { lambda, label, head });
        }
        Ok(out)
    }

    fn energy_shift(&self) -> BigRational {
        rat(self.rank() as i64, 24)
    }

    /// θ_{l+S}·η^{−rank}·q^{−rank/24}, independent of χ.
    pub fn character(&self, a: &Label, order: u64) -> Result<FracSeries, RepsError> {
        self.check(a)?;
        Ok(coset_character(&self.windings, &a.l, self.rank(), order)?)
    }

    /// l ↦ g·l for an isometry g of the unicoloured lattice.
    pub fn act_automorphism(&self, a: &Label, g: &IntMatrix) -> Result<Label, RepsError> {
        self.check(a)?;
        let n = self.rank();
        if self.kind != Kind::Unicoloured
            || g.rows() != n
            || g.cols() != n
            || g.transpose().mul(&self.gram).mul(g) != self.gram
        {
            return Err(RepsError::NotIsometry);
        }
        self.label(None, int_mul_vec(g, &a.l))
    }
}

/// q^e·∏(1−q^j)^{−rank}, known up to exponent top on a grid containing e and top.
fn head_series(e: &BigRational, rank: usize, top: &BigRational) -> FracSeries {
    let d = e.denom().lcm(top.denom());
    let scale = BigRational::from_integer(d.clone());
    let start = (e * &scale).to_integer().to_i64().expect("small exponent");
    let span = ((top - e) * &scale).to_integer().to_i64().expect("small exponent");
    let d = d.to_u64().expect("small denominator");
    if span < 0 {
        return FracSeries::new(d, start, Vec::new());
    }
    let eta = eta_inverse_power(rank as u32, span as u64 / d);
    let coeffs = (0..=span as u64)
        .map(|k| if k % d == 0 { eta.coeffs()[(k / d) as usize].clone() } else { BigInt::zero() })
        .collect();
    FracSeries::new(d, start, coeffs)
}

/// Σ of the heads; agrees with the full character up to the common truncation.
pub fn sum_heads(terms: &[RestrictionTerm]) -> Option<FracSeries> {
    terms.iter().map(|t| t.head.clone()).reduce(|a, b| a.add(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::parse_builtin;
    use crate::span::builtin_span;

    fn uni(name: &str) -> LabelSpace {
        LabelSpace::unicoloured(&parse_builtin(name).unwrap()).unwrap()
    }

    fn bi(name: &str) -> LabelSpace {
        LabelSpace::bicoloured(&builtin_span(name).unwrap().derive()).unwrap()
    }

    #[test]
    fn covers() {
        assert_eq!(rotation_cover(&rat(1, 2), 1), 4);
        assert_eq!(rotation_cover(&rat(0, 1), 1), 1);
        assert_eq!(rotation_cover(&rat(0, 1), 6), 6);
        assert_eq!(rotation_cover(&rat(2, 3), 1), 3);
        assert_eq!(rotation_cover(&rat(1, 72), 6), 144);
        assert_eq!(rotation_cover(&rat(2, 1), 5), 5);
    }

    #[test]
    fn unicoloured_counts() {
        let a1 = uni("A1").classify();
        assert_eq!(a1.len(), 2);
        let nz = a1.iter().find(|l| l.l != alloc::vec![rat(0, 1)]).unwrap();
        assert_eq!(uni("A1").norm(&nz.l), rat(1, 2));
        assert_eq!(nz.m, 4);
        assert_eq!(uni("A2").classify().len(), 3);
        let e8 = uni("E8").classify();
        assert_eq!(e8.len(), 1);
        assert_eq!(e8[0].m, 1);
        assert!(e8[0].l.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn bicoloured_counts() {
        assert_eq!(bi("rank1-72").classify().len(), 12);
        assert_eq!(bi("d8pair").classify().len(), 1);
        assert_eq!(bi("identity:A2").classify().len(), 3);
        let r = bi("rank1-72");
        assert!(r.classify().iter().all(|l| l.m >= 6));
        // l = g/12 has ⟨l,l⟩ = 1/2, so m = 8 is not a multiple of the level
        assert_eq!(r.label(Some(alloc::vec![]), alloc::vec![rat(1, 12)]).unwrap().m, 8);
    }

    #[test]
    fn isomorphism_and_shift() {
        let s = uni("A1");
        let a = s.label(None, alloc::vec![rat(1, 2)]).unwrap();
        let b = s.label(None, alloc::vec![rat(3, 2)]).unwrap();
        assert!(s.isomorphic(&a, &a).unwrap() && s.isomorphic(&a, &b).unwrap());
        let zero = s.label(None, alloc::vec![rat(0, 1)]).unwrap();
        let shifted = s.conjugate_shift(&zero, &[rat(1, 1)]).unwrap();
        assert_eq!(s.norm(&shifted.l), rat(2, 1));
        assert!(s.isomorphic(&zero, &shifted).unwrap());
        assert_eq!(s.conjugate_shift(&zero, &[rat(1, 2)]), Err(RepsError::NotInLattice));
        assert_eq!(s.conjugate_shift(&a, &[rat(0, 1)]).unwrap(), a);
        let h = LabelSpace::bicoloured(
            &crate::span::LatticeSpan::new(
                Lattice::new(IntMatrix::from_i64(&[alloc::vec![8]])).unwrap(),
                Lattice::new(IntMatrix::from_i64(&[alloc::vec![2]])).unwrap(),
                Lattice::new(IntMatrix::from_i64(&[alloc::vec![2]])).unwrap(),
                IntMatrix::from_i64(&[alloc::vec![2]]),
                IntMatrix::from_i64(&[alloc::vec![2]]),
            )
            .unwrap()
            .derive(),
        )
        .unwrap();
        let x = h.label(Some(alloc::vec![BigInt::from(0)]), alloc::vec![rat(0, 1)]).unwrap();
        let y = h.label(Some(alloc::vec![BigInt::from(1)]), alloc::vec![rat(0, 1)]).unwrap();
        assert!(!h.isomorphic(&x, &y).unwrap());
        assert_eq!(s.isomorphic(&a, &x), Err(RepsError::Mismatch));
    }

    #[test]
    fn restriction_examples() {
        let e8 = uni("E8");
        let zero = e8.classify().remove(0);
        let terms = e8.restriction(&zero, &rat(1, 1)).unwrap();
        assert_eq!(terms.len(), 241);
        let sum = sum_heads(&terms).unwrap();
        assert_eq!(sum.coeff_at(&rat(-1, 3)), Some(BigInt::from(1)));
        assert_eq!(sum.coeff_at(&rat(2, 3)), Some(BigInt::from(248)));
        let a1 = uni("A1");
        let half = a1.label(None, alloc::vec![rat(1, 2)]).unwrap();
        let terms = a1.restriction(&half, &rat(1, 4)).unwrap();
        // l and l − e have the same norm 1/2
        let lambdas: Vec<_> = terms.iter().map(|t| t.lambda[0].clone()).collect();
        assert_eq!(lambdas, alloc::vec![rat(0, 1), rat(1, 1)]);
        for t in &terms {
            assert_eq!(t.head.terms(), alloc::vec![(rat(5, 24), BigInt::from(1))]);
        }
        assert!(a1.restriction(&half, &rat(1, 8)).unwrap().is_empty());
    }

    #[test]
    fn heads_sum_to_character() {
        for (s, order) in [(uni("A2"), 3u64), (uni("D4"), 2), (bi("rank1-72"), 3), (bi("d8pair"), 1)] {
            for label in s.classify() {
                let sum = sum_heads(&s.restriction(&label, &BigRational::from_integer(order.into())).unwrap()).unwrap();
                let ch = s.character(&label, order).unwrap();
                let top = sum.top().unwrap().min(ch.top().unwrap());
                assert_eq!(sum.truncate(&top).terms(), ch.truncate(&top).terms());
            }
        }
    }

    #[test]
    fn automorphism_permutes_labels() {
        let s = uni("A2");
        let g = IntMatrix::from_i64(&[alloc::vec![0, 1], alloc::vec![1, 0]]);
        for a in s.classify() {
            let b = s.act_automorphism(&a, &g).unwrap();
            assert_eq!(s.norm(&a.l), s.norm(&b.l));
        }
        let bad = IntMatrix::from_i64(&[alloc::vec![1, 1], alloc::vec![0, 1]]);
        assert_eq!(s.act_automorphism(&s.classify()[0], &bad), Err(RepsError::NotIsometry));
    }
}
