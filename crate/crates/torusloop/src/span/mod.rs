//! Spans Λw ← Γ → Λb of even lattices of equal rank, the sublattices
//! Λw∩Λb and Λw−Λb of 𝔥 = Γ⊗ℚ, and the commutator map b with its cocycle ε.

mod cocycle;

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::foundation::{
    int_mul_vec, rat, solve_diophantine, vfrom_int, vscale, vsub, vto_int, Angle, IntMatrix,
    RatMatrix, RatVec,
};
use crate::glue::{overlattice_from_isotropic, DiscSubgroup, DiscriminantForm, FiniteAbelianPresentation};
use crate::lattice::{d_vectors, parse_builtin, Lattice, LatticeError, RationalSublattice};

pub use cocycle::BiadditiveCocycle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanError {
    #[error("embedding of Γ into the {0} lattice does not preserve the form")]
    NotIsometry(&'static str),
    #[error("span lattices and embeddings must have equal rank")]
    RankMismatch,
    #[error("span lattices must be even")]
    NotEven,
    #[error("vector is not in Λw−Λb")]
    NotInSumLattice,
    #[error("sublattice is not contained in the lattice")]
    NotContained,
    #[error("unknown span {0:?}")]
    UnknownSpan(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colour {
    White,
    Black,
}

/// Two form-preserving embeddings of Γ into Λw and Λb.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSpan {
    pub gamma: Lattice,
    pub white: Lattice,
    pub black: Lattice,
    /// Columns are the images of the Γ-basis in the Λw-basis.
    pub embed_w: IntMatrix,
    pub embed_b: IntMatrix,
}

impl LatticeSpan {
    pub fn new(
        gamma: Lattice,
        white: Lattice,
        black: Lattice,
        embed_w: IntMatrix,
        embed_b: IntMatrix,
    ) -> Result<Self, SpanError> {
        let n = gamma.rank();
        let square = |m: &IntMatrix| m.rows() == n && m.cols() == n;
        if white.rank() != n || black.rank() != n || !square(&embed_w) || !square(&embed_b) {
            return Err(SpanError::RankMismatch);
        }
        if !(gamma.is_even() && white.is_even() && black.is_even()) {
            return Err(SpanError::NotEven);
        }
        if &embed_w.transpose().mul(white.gram()).mul(&embed_w) != gamma.gram() {
            return Err(SpanError::NotIsometry("white"));
        }
        if &embed_b.transpose().mul(black.gram()).mul(&embed_b) != gamma.gram() {
            return Err(SpanError::NotIsometry("black"));
        }
        Ok(LatticeSpan { gamma, white, black, embed_w, embed_b })
    }

    pub fn identity(l: Lattice) -> Result<Self, SpanError> {
        let id = IntMatrix::identity(l.rank());
        Self::new(l.clone(), l.clone(), l, id.clone(), id)
    }

    pub fn rank(&self) -> usize {
        self.gamma.rank()
    }

    pub fn lattice(&self, c: Colour) -> &Lattice {
        match c {
            Colour::White => &self.white,
            Colour::Black => &self.black,
        }
    }

    pub fn embedding(&self, c: Colour) -> &IntMatrix {
        match c {
            Colour::White => &self.embed_w,
            Colour::Black => &self.embed_b,
        }
    }

    pub fn derive(&self) -> SpanDerived {
        SpanDerived::new(self.clone())
    }
}

pub const BUILTIN_SPANS_HELP: &str = "identity:<lattice>, rank1-72, d8pair";

/// Named spans: `identity:<lattice>`, `rank1-72` and `d8pair`.
pub fn builtin_span(name: &str) -> Result<LatticeSpan, SpanError> {
    if let Some(l) = name.strip_prefix("identity:") {
        return LatticeSpan::identity(parse_builtin(l)?);
    }
    match name {
        "rank1-72" => {
            let one = |x: i64| IntMatrix::from_i64(&[alloc::vec![x]]);
            LatticeSpan::new(
                Lattice::new(one(72))?,
                Lattice::new(one(18))?,
                Lattice::new(one(8))?,
                one(2),
                one(3),
            )
        }
        "d8pair" => d8pair(),
        _ => Err(SpanError::UnknownSpan(name.to_string())),
    }
}

/// Γ = D8 glued to E8-type overlattices by the classes of ½(1,…,1) and ½(3,1,…,1).
fn d8pair() -> Result<LatticeSpan, SpanError> {
    let d8 = parse_builtin("D8")?;
    let form = DiscriminantForm::new(&d8);
    let to_d8 = RatMatrix::from_cols(&d_vectors(8)).inverse().expect("basis");
    let mut l1 = alloc::vec![rat(1, 2); 8];
    let l1_coords = to_d8.mul_vec(&l1);
    l1[0] += rat(1, 1);
    let l12_coords = to_d8.mul_vec(&l1);
    let glue = |v: &[BigRational]| -> Result<(Lattice, IntMatrix), SpanError> {
        let c = form.group().element_coords(v).map_err(|_| SpanError::NotContained)?;
        let u = DiscSubgroup::generated_by(form.group().invariant_factors(), &[c]);
        let o = overlattice_from_isotropic(&form, &u).map_err(|_| SpanError::NotEven)?;
        Ok((o.lattice.clone(), o.embedding()))
    };
    let (w, ew) = glue(&l1_coords)?;
    let (b, eb) = glue(&l12_coords)?;
    LatticeSpan::new(d8, w.named("D8+l1"), b.named("D8+l1+l2"), ew, eb)
}

/// Derived sublattices of 𝔥, all in Γ-coordinates with ambient form G_Γ.
#[derive(Clone, Debug)]
pub struct SpanDerived {
    span: LatticeSpan,
    gamma: RationalSublattice,
    pre_w: RationalSublattice,
    pre_b: RationalSublattice,
    intersection: RationalSublattice,
    sum: RationalSublattice,
    dual_gamma: RationalSublattice,
    level: BigInt,
    /// Λw- and Λb-coordinates to 𝔥.
    from_w: RatMatrix,
    from_b: RatMatrix,
    /// D·[from_w | −from_b] for the decomposition system.
    decompose_system: IntMatrix,
    decompose_scale: BigInt,
    eps: BiadditiveCocycle,
}

impl SpanDerived {
    fn new(span: LatticeSpan) -> Self {
        let g = span.gamma.gram_rat();
        let gamma = RationalSublattice::standard(g.clone());
        let from_w = span.embed_w.to_rat().inverse().expect("equal rank");
        let from_b = span.embed_b.to_rat().inverse().expect("equal rank");
        let pre_w = RationalSublattice::from_generators(g.clone(), &from_w.to_cols()).expect("full rank");
        let pre_b = RationalSublattice::from_generators(g.clone(), &from_b.to_cols()).expect("full rank");
        let intersection = pre_w.intersection(&pre_b);
        let sum = pre_w.sum(&pre_b);
        let dual_gamma = gamma.dual();
        let level = sum.exponent_in(&gamma);
        let sys = from_w.hstack(&from_b.scale(&rat(-1, 1)));
        let (decompose_scale, decompose_system) = sys.clear_denominators();
        let mut d = SpanDerived {
            span,
            gamma,
            pre_w,
            pre_b,
            intersection,
            sum: sum.clone(),
            dual_gamma,
            level,
            from_w,
            from_b,
            decompose_system,
            decompose_scale,
            eps: BiadditiveCocycle::from_commutator(sum.clone(), |_, _| Angle::zero()),
        };
        let eps = BiadditiveCocycle::from_commutator(sum, |a, b| d.commutator_b(a, b).expect("basis of the sum"));
        d.eps = eps;
        d
    }

    pub fn span(&self) -> &LatticeSpan {
        &self.span
    }

    pub fn rank(&self) -> usize {
        self.span.rank()
    }

    pub fn gram(&self) -> &RatMatrix {
        self.gamma.ambient_gram()
    }

    pub fn gamma(&self) -> &RationalSublattice {
        &self.gamma
    }

    pub fn pre(&self, c: Colour) -> &RationalSublattice {
        match c {
            Colour::White => &self.pre_w,
            Colour::Black => &self.pre_b,
        }
    }

    pub fn pre_w(&self) -> &RationalSublattice {
        &self.pre_w
    }

    pub fn pre_b(&self) -> &RationalSublattice {
        &self.pre_b
    }

    pub fn intersection(&self) -> &RationalSublattice {
        &self.intersection
    }

    pub fn sum(&self) -> &RationalSublattice {
        &self.sum
    }

    pub fn dual_gamma(&self) -> &RationalSublattice {
        &self.dual_gamma
    }

    pub fn level(&self) -> &BigInt {
        &self.level
    }

    pub fn form(&self, a: &[BigRational], b: &[BigRational]) -> BigRational {
        self.gram().form_q(a, b)
    }

    /// 𝔥-coordinates of a Λw- or Λb-coordinate vector.
    pub fn from_colour(&self, c: Colour, v: &[BigRational]) -> RatVec {
        match c {
            Colour::White => self.from_w.mul_vec(v),
            Colour::Black => self.from_b.mul_vec(v),
        }
    }

    /// Λw- or Λb-coordinates of an 𝔥-vector.
    pub fn to_colour(&self, c: Colour, v: &[BigRational]) -> RatVec {
        int_mul_vec(self.span.embedding(c), v)
    }

    /// (Λw∩Λb)/Γ.
    pub fn intersection_quotient(&self) -> FiniteAbelianPresentation {
        finite_quotient(&self.intersection, &self.gamma).expect("Γ ⊆ Λw∩Λb")
    }

    /// Γ^∨/(Λw−Λb).
    pub fn dual_quotient(&self) -> FiniteAbelianPresentation {
        finite_quotient(&self.dual_gamma, &self.sum).expect("Λw−Λb ⊆ Γ^∨")
    }

    /// A decomposition λ = λw − λb with λw ∈ Λw, λb ∈ Λb, in 𝔥-coordinates.
    pub fn decompose(&self, l: &[BigRational]) -> Result<(RatVec, RatVec), SpanError> {
        let rhs = vto_int(&vscale(&BigRational::from_integer(self.decompose_scale.clone()), l))
            .ok_or(SpanError::NotInSumLattice)?;
        let z = solve_diophantine(&self.decompose_system, &rhs).ok_or(SpanError::NotInSumLattice)?;
        let n = self.rank();
        let lw = self.from_w.mul_vec(&vfrom_int(&z[..n]));
        let lb = self.from_b.mul_vec(&vfrom_int(&z[n..]));
        Ok((lw, lb))
    }

    /// b₀(λ,μ) = ½⟨μ,λ⟩ + ⟨μ,λb⟩ for a given black part λb of λ.
    pub fn commutator_with(&self, l: &[BigRational], lb: &[BigRational], m: &[BigRational]) -> Angle {
        Angle::new(self.form(m, l) / BigRational::from_integer(2.into()) + self.form(m, lb))
    }

    pub fn commutator_b(&self, l: &[BigRational], m: &[BigRational]) -> Result<Angle, SpanError> {
        if !self.sum.contains(m) {
            return Err(SpanError::NotInSumLattice);
        }
        let (_, lb) = self.decompose(l)?;
        Ok(self.commutator_with(l, &lb, m))
    }

    pub fn eps(&self) -> &BiadditiveCocycle {
        &self.eps
    }

    pub fn epsilon(&self, l: &[BigRational], m: &[BigRational]) -> Result<Angle, SpanError> {
        self.eps.eval(l, m)
    }

    /// ε restricted to Λw or Λb, as a cocycle on that lattice in its own coordinates.
    pub fn restricted_eps(&self, c: Colour) -> BiadditiveCocycle {
        let target = RationalSublattice::standard(self.span.lattice(c).gram_rat());
        let map = match c {
            Colour::White => &self.from_w,
            Colour::Black => &self.from_b,
        };
        self.eps.pullback(map, target)
    }

    /// ε restricted to Γ, in Γ-coordinates.
    pub fn gamma_eps(&self) -> BiadditiveCocycle {
        let n = self.rank();
        self.eps.pullback(&RatMatrix::identity(n), self.gamma.clone())
    }

    /// Canonical representative of the class of (a, c) ∈ Λw ⊕ Λb modulo the diagonal Γ,
    /// with a, c given in 𝔥-coordinates: a is reduced into [0,1)^n.
    pub fn reduce_pair(&self, a: &[BigRational], c: &[BigRational]) -> (RatVec, RatVec) {
        let shift: RatVec = a.iter().map(|x| x.floor()).collect();
        (vsub(a, &shift), vsub(c, &shift))
    }
}

pub fn finite_quotient(a: &RationalSublattice, b: &RationalSublattice) -> Result<FiniteAbelianPresentation, SpanError> {
    FiniteAbelianPresentation::quotient(a, b).map_err(|_| SpanError::NotContained)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{unit_vec, vadd, vfrom_i64};
    use num_traits::One;

    #[test]
    fn validation() {
        let one = |x: i64| IntMatrix::from_i64(&[alloc::vec![x]]);
        let l = |x: i64| Lattice::new(one(x)).unwrap();
        assert!(LatticeSpan::new(l(72), l(18), l(8), one(2), one(3)).is_ok());
        assert_eq!(LatticeSpan::new(l(72), l(18), l(8), one(1), one(3)), Err(SpanError::NotIsometry("white")));
        assert_eq!(LatticeSpan::new(l(9), l(1), l(1), one(3), one(3)), Err(SpanError::NotEven));
        let a2 = parse_builtin("A2").unwrap();
        assert_eq!(LatticeSpan::new(a2.clone(), a2, l(2), one(1), one(1)), Err(SpanError::RankMismatch));
    }

    #[test]
    fn identity_span() {
        let d = builtin_span("identity:A1").unwrap().derive();
        assert_eq!(d.intersection(), d.gamma());
        assert_eq!(d.sum(), d.gamma());
        assert_eq!(d.level(), &BigInt::one());
        assert!(d.intersection_quotient().is_trivial());
        // Γ^∨/(Λw−Λb) is the discriminant group itself.
        assert_eq!(d.dual_quotient().invariant_factors(), &[BigInt::from(2)]);
        let e = vfrom_i64(&[1]);
        assert!(d.epsilon(&e, &e).unwrap().is_zero());
        assert!(d.eps().commutator(&e, &e).unwrap().is_zero());
    }

    #[test]
    fn rank_one_72() {
        let d = builtin_span("rank1-72").unwrap().derive();
        assert_eq!(d.intersection(), d.gamma());
        assert_eq!(d.sum().basis_vectors(), alloc::vec![alloc::vec![rat(1, 6)]]);
        assert_eq!(d.sum().gram(), RatMatrix::from_rows(&[alloc::vec![rat(2, 1)]]));
        assert_eq!(d.level(), &BigInt::from(6));
        assert_eq!(d.dual_quotient().invariant_factors(), &[BigInt::from(12)]);
        assert!(d.intersection_quotient().is_trivial());
    }

    fn d8_vectors() -> (SpanDerived, RatVec, RatVec) {
        let d = builtin_span("d8pair").unwrap().derive();
        let to_d8 = RatMatrix::from_cols(&d_vectors(8)).inverse().unwrap();
        let l1 = to_d8.mul_vec(&alloc::vec![rat(1, 2); 8]);
        let l2 = to_d8.mul_vec(&unit_vec(8, 0));
        (d, l1, l2)
    }

    #[test]
    fn d8pair_derived() {
        let (d, l1, l2) = d8_vectors();
        assert_eq!(d.intersection(), d.gamma());
        assert_eq!(d.sum(), d.dual_gamma());
        assert_eq!(d.level(), &BigInt::from(2));
        assert!(d.span().white.disc().is_one() && d.span().black.disc().is_one());
        assert!(d.pre_w().contains(&l1) && !d.pre_w().contains(&l2));
        assert!(d.pre_b().contains(&vadd(&l1, &l2)));
    }

    #[test]
    fn d8pair_commutator() {
        let (d, l1, l2) = d8_vectors();
        // l1 ∈ Λw so λb = 0: b(l1,l2) = ½⟨l2,l1⟩ = 1/4.
        assert_eq!(d.commutator_b(&l1, &l2).unwrap(), Angle::frac(1, 4));
        // l2 = l1 − (l1 − l2) has λb = l1 − l2, giving 1/4 + 3/2.
        assert_eq!(d.commutator_b(&l2, &l1).unwrap(), Angle::frac(3, 4));
        assert_eq!(d.eps().commutator(&l1, &l2).unwrap(), Angle::frac(1, 4));
        assert_eq!(d.commutator_b(&l2, &l2).unwrap(), Angle::zero());
    }

    #[test]
    fn outside_sum_is_rejected() {
        let d = builtin_span("rank1-72").unwrap().derive();
        let x = alloc::vec![rat(1, 12)];
        assert_eq!(d.commutator_b(&x, &alloc::vec![rat(1, 6)]), Err(SpanError::NotInSumLattice));
        assert_eq!(d.commutator_b(&alloc::vec![rat(1, 6)], &x), Err(SpanError::NotInSumLattice));
        assert_eq!(d.epsilon(&x, &x), Err(SpanError::NotInSumLattice));
    }

    #[test]
    fn restricted_eps_agrees() {
        let (d, _, _) = d8_vectors();
        let w = d.restricted_eps(Colour::White);
        for i in 0..8 {
            for j in 0..8 {
                let (a, b) = (unit_vec(8, i), unit_vec(8, j));
                let ha = d.from_colour(Colour::White, &a);
                let hb = d.from_colour(Colour::White, &b);
                assert_eq!(w.eval(&a, &b).unwrap(), d.epsilon(&ha, &hb).unwrap());
            }
        }
    }

    #[test]
    fn unknown_span() {
        assert!(matches!(builtin_span("nope"), Err(SpanError::UnknownSpan(_))));
        assert!(matches!(builtin_span("identity:Z1"), Err(SpanError::NotEven)));
    }
}
