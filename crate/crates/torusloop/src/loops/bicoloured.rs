use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::foundation::{rat, vfrom_int, vis_integral, vsub, vto_int, zero_vec, Angle, RatMatrix, RatVec};
use crate::span::{Colour, LatticeSpan, SpanDerived};

use super::path::PLPath;
use super::reparam::PLReparam;
use super::support::{Arc, CircleSet};
use super::unicoloured::PLLoop;
use super::{ExtensionElement, LoopError};

/// A bicoloured loop as a glued lift: a path in 𝔥 on [0,1] (black on [0,1/2],
/// white on [1/2,1]) and a lift `mq` of its value at q = 0 ≡ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicolouredLoop {
    lift: PLPath,
    mq: RatVec,
}

impl BicolouredLoop {
    pub fn lift(&self) -> &PLPath {
        &self.lift
    }

    pub fn mq(&self) -> &RatVec {
        &self.mq
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Embedding {
    /// Bi: LH → L(Tw,H,Tb).
    H,
    White,
    Black,
}

/// The bicoloured loop group of a span with its cocycle.
#[derive(Clone, Debug)]
pub struct BicolouredGroup {
    derived: SpanDerived,
}

fn half() -> BigRational {
    rat(1, 2)
}

impl BicolouredGroup {
    pub fn new(span: &LatticeSpan) -> Self {
        Self::from_derived(span.derive())
    }

    pub fn from_derived(derived: SpanDerived) -> Self {
        BicolouredGroup { derived }
    }

    pub fn derived(&self) -> &SpanDerived {
        &self.derived
    }

    pub fn rank(&self) -> usize {
        self.derived.rank()
    }

    fn gram(&self) -> &RatMatrix {
        self.derived.gram()
    }

    pub fn make_loop(&self, lift: PLPath, mq: RatVec) -> Result<BicolouredLoop, LoopError> {
        if lift.dim() != self.rank() || mq.len() != self.rank() {
            return Err(LoopError::Mismatch);
        }
        if !self.derived.sum().contains(&lift.delta()) {
            return Err(LoopError::WindingNotInSum);
        }
        if !self.derived.pre_w().contains(&vsub(&mq, lift.end()))
            || !self.derived.pre_b().contains(&vsub(&mq, lift.start()))
        {
            return Err(LoopError::EndpointMismatch);
        }
        Ok(BicolouredLoop { lift, mq })
    }

    pub fn identity(&self) -> BicolouredLoop {
        let z = zero_vec(self.rank());
        BicolouredLoop { lift: PLPath::constant(z.clone()), mq: z }
    }

    /// The loop with trivial path and value ν ∈ Λw∩Λb at q.
    pub fn kernel_loop(&self, nu: RatVec) -> Result<BicolouredLoop, LoopError> {
        self.make_loop(PLPath::constant(zero_vec(self.rank())), nu)
    }

    fn check(&self, g: &BicolouredLoop) -> Result<(), LoopError> {
        if g.lift.dim() == self.rank() {
            Ok(())
        } else {
            Err(LoopError::Mismatch)
        }
    }

    pub fn add(&self, g: &BicolouredLoop, h: &BicolouredLoop) -> BicolouredLoop {
        BicolouredLoop { lift: g.lift.add(&h.lift), mq: g.mq.iter().zip(&h.mq).map(|(a, b)| a + b).collect() }
    }

    pub fn neg(&self, g: &BicolouredLoop) -> BicolouredLoop {
        BicolouredLoop { lift: g.lift.neg(), mq: g.mq.iter().map(|a| -a).collect() }
    }

    pub fn loops_equal(&self, g: &BicolouredLoop, h: &BicolouredLoop) -> bool {
        self.pth_equal(&g.lift, &h.lift) && vis_integral(&vsub(&g.mq, &h.mq))
    }

    /// Pth(γ), as a lift of a path in H.
    pub fn pth<'a>(&self, g: &'a BicolouredLoop) -> &'a PLPath {
        &g.lift
    }

    /// Equality of paths in H = 𝔥/Γ.
    pub fn pth_equal(&self, a: &PLPath, b: &PLPath) -> bool {
        a.constant_difference(b).is_some_and(|c| vis_integral(&c))
    }

    /// Δ′ = lift(1) − lift(0) ∈ Λw−Λb.
    pub fn delta_prime(&self, g: &BicolouredLoop) -> RatVec {
        g.lift.delta()
    }

    /// Canonical representative of the class of (λw, λb) in (Λw⊕Λb)/Γ, in colour coordinates.
    pub fn class_of(&self, lw: &[BigInt], lb: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        let a = self.derived.from_colour(Colour::White, &vfrom_int(lw));
        let c = self.derived.from_colour(Colour::Black, &vfrom_int(lb));
        self.class_of_h(&a, &c)
    }

    fn class_of_h(&self, a: &[BigRational], c: &[BigRational]) -> (Vec<BigInt>, Vec<BigInt>) {
        let (a, c) = self.derived.reduce_pair(a, c);
        let w = vto_int(&self.derived.to_colour(Colour::White, &a)).expect("white lattice vector");
        let b = vto_int(&self.derived.to_colour(Colour::Black, &c)).expect("black lattice vector");
        (w, b)
    }

    /// Δγ = [lift(1) − mq, lift(0) − mq].
    pub fn delta_class(&self, g: &BicolouredLoop) -> (Vec<BigInt>, Vec<BigInt>) {
        self.class_of_h(&vsub(g.lift.end(), &g.mq), &vsub(g.lift.start(), &g.mq))
    }

    /// The bottom row map (λw, λb) ↦ (ℝπw)⁻¹λw − (ℝπb)⁻¹λb.
    pub fn class_to_sum(&self, lw: &[BigInt], lb: &[BigInt]) -> RatVec {
        vsub(
            &self.derived.from_colour(Colour::White, &vfrom_int(lw)),
            &self.derived.from_colour(Colour::Black, &vfrom_int(lb)),
        )
    }

    /// The straight segment from (ℝπb)⁻¹λb to (ℝπw)⁻¹λw with mq = 0, for the canonical representative.
    pub fn standard_loop(&self, lw: &[BigInt], lb: &[BigInt]) -> BicolouredLoop {
        let a = self.derived.from_colour(Colour::White, &vfrom_int(lw));
        let c = self.derived.from_colour(Colour::Black, &vfrom_int(lb));
        let (a, c) = self.derived.reduce_pair(&a, &c);
        BicolouredLoop { lift: PLPath::segment(c, a), mq: zero_vec(self.rank()) }
    }

    /// Bi for `H` (γ over Γ), the white inclusion (γ over Λw supported in [1/2,1]) and
    /// the black inclusion (γ over Λb supported in [0,1/2]).
    pub fn embed(&self, which: Embedding, g: &PLLoop) -> Result<BicolouredLoop, LoopError> {
        if g.lift().dim() != self.rank() {
            return Err(LoopError::Mismatch);
        }
        let colour = match which {
            Embedding::H => {
                let lift = g.lift().clone();
                let mq = lift.start().clone();
                return self.make_loop(lift, mq);
            }
            Embedding::White => Colour::White,
            Embedding::Black => Colour::Black,
        };
        let half_arc = match colour {
            Colour::White => Arc::new(half(), BigRational::one()),
            Colour::Black => Arc::new(BigRational::zero(), half()),
        };
        if !g.support().within(&half_arc) {
            return Err(LoopError::SupportViolation);
        }
        let mid = g.lift().eval(&half());
        let lift = g.lift().map_values(|v| self.derived.from_colour(colour, &vsub(v, &mid)));
        self.make_loop(lift, zero_vec(self.rank()))
    }

    /// S′(ξ,η) = ½∫⟨ξ′,η⟩ + ½⟨Δ′ξ, η(0)⟩ on 𝔥.
    pub fn bilinear_s(&self, xi: &PLPath, eta: &PLPath) -> BigRational {
        (PLPath::pairing_integral(self.gram(), xi, eta) + self.gram().form_q(&xi.delta(), eta.start())) * half()
    }

    pub fn epsilon(&self, a: &[BigRational], b: &[BigRational]) -> Angle {
        self.derived.epsilon(a, b).expect("windings lie in Λw−Λb")
    }

    pub fn cocycle(&self, g: &BicolouredLoop, h: &BicolouredLoop) -> Result<Angle, LoopError> {
        self.check(g)?;
        self.check(h)?;
        let e = self.epsilon(&g.lift.delta(), &h.lift.delta());
        Ok(e + Angle::new(self.bilinear_s(&g.lift, &h.lift)))
    }

    /// The cocycle from white and black lifts separately: lifts ξ̂+μ, η̂+ν (μ, ν ∈ Γ)
    /// projected to Λw⊗ℚ on [1/2,1] and Λb⊗ℚ on [0,1/2] and paired with their own forms.
    pub fn cocycle_bicoloured_fashion(
        &self,
        g: &BicolouredLoop,
        h: &BicolouredLoop,
        mu: &[BigInt],
        nu: &[BigInt],
    ) -> Angle {
        let span = self.derived.span();
        let xi = g.lift.add_const(&vfrom_int(mu));
        let eta = h.lift.add_const(&vfrom_int(nu));
        let ew = span.embedding(Colour::White).to_rat();
        let eb = span.embedding(Colour::Black).to_rat();
        let (gw, gb) = (span.lattice(Colour::White).gram_rat(), span.lattice(Colour::Black).gram_rat());
        let (xw, ew_) = (xi.map_linear(&ew), eta.map_linear(&ew));
        let (xb, eb_) = (xi.map_linear(&eb), eta.map_linear(&eb));
        let (zero, p, one) = (BigRational::zero(), half(), BigRational::one());
        let white = PLPath::pairing_integral_on(&gw, &xw, &ew_, &p, &one);
        let black = PLPath::pairing_integral_on(&gb, &xb, &eb_, &zero, &p);
        let at_q = self.derived.from_colour(Colour::Black, eb_.start());
        let s = (white + black + self.gram().form_q(&g.lift.delta(), &at_q)) * half();
        self.epsilon(&g.lift.delta(), &h.lift.delta()) + Angle::new(s)
    }

    pub fn unit(&self) -> ExtensionElement<BicolouredLoop> {
        ExtensionElement::new(self.identity(), Angle::zero())
    }

    pub fn multiply(
        &self,
        a: &ExtensionElement<BicolouredLoop>,
        b: &ExtensionElement<BicolouredLoop>,
    ) -> Result<ExtensionElement<BicolouredLoop>, LoopError> {
        let c = self.cocycle(&a.base, &b.base)?;
        Ok(ExtensionElement::new(self.add(&a.base, &b.base), &(&a.phase + &b.phase) + &c))
    }

    pub fn inverse(&self, a: &ExtensionElement<BicolouredLoop>) -> ExtensionElement<BicolouredLoop> {
        let n = self.neg(&a.base);
        let c = self.cocycle(&a.base, &n).expect("same group");
        ExtensionElement::new(n, -(&a.phase + &c))
    }

    pub fn elements_equal(&self, a: &ExtensionElement<BicolouredLoop>, b: &ExtensionElement<BicolouredLoop>) -> bool {
        a.phase == b.phase && self.loops_equal(&a.base, &b.base)
    }

    pub fn commutator(&self, g: &BicolouredLoop, h: &BicolouredLoop) -> Result<Angle, LoopError> {
        Ok(self.cocycle(g, h)? - self.cocycle(h, g)?)
    }

    /// b(Δ′γ,Δ′ρ) + ∫⟨ξ′,η⟩ − ½⟨Δ′ρ,Δ′γ⟩ − ⟨Δ′ρ, ξ(0)⟩.
    pub fn commutator_closed_form(&self, g: &BicolouredLoop, h: &BicolouredLoop) -> Result<Angle, LoopError> {
        let (dg, dh) = (g.lift.delta(), h.lift.delta());
        let b = self.derived.commutator_b(&dg, &dh)?;
        let s = PLPath::pairing_integral(self.gram(), &g.lift, &h.lift)
            - self.gram().form_q(&dh, &dg) * half()
            - self.gram().form_q(&dh, g.lift.start());
        Ok(b + Angle::new(s))
    }

    /// supp γw ∪ supp γb, from the projections of the lift.
    pub fn support(&self, g: &BicolouredLoop) -> CircleSet {
        let p = half();
        let lift = g.lift.refine(&[p.clone()]);
        CircleSet::from_pieces(
            lift.pieces()
                .filter(|(t0, _, a, b)| {
                    let pre = if **t0 < p { self.derived.pre_b() } else { self.derived.pre_w() };
                    a != b || !pre.contains(a)
                })
                .map(|(t0, t1, _, _)| (t0.clone(), t1.clone())),
        )
    }

    pub fn supports_separated(&self, g: &BicolouredLoop, h: &BicolouredLoop) -> bool {
        self.support(g).bicoloured_separated(&self.support(h))
    }

    fn check_cover(&self, phi: &PLReparam) -> Result<(), LoopError> {
        if (BigInt::from(phi.cover()) % self.derived.level()).is_zero() {
            Ok(())
        } else {
            Err(LoopError::PeriodMismatch)
        }
    }

    /// φ*γ: the lift precomposed with Φ⁻¹, mq′ = mq − lift(0) + (φ*lift)(0).
    pub fn reparam_loop(&self, phi: &PLReparam, g: &BicolouredLoop) -> Result<BicolouredLoop, LoopError> {
        self.check_cover(phi)?;
        let lift = g.lift.reparametrized(phi);
        let mq = vsub(&g.mq, &vsub(g.lift.start(), lift.start()));
        Ok(BicolouredLoop { lift, mq })
    }

    /// d′(φ,γ) = ½⟨Ξ(Φ⁻¹(0)) − Ξ(0), Δ′γ⟩.
    pub fn reparam_d(&self, phi: &PLReparam, g: &BicolouredLoop) -> Result<Angle, LoopError> {
        self.check_cover(phi)?;
        let x = phi.inverse_eval(&BigRational::zero());
        let diff = vsub(&g.lift.eval_ext(&x), g.lift.start());
        Ok(Angle::new(self.gram().form_q(&diff, &g.lift.delta()) * half()))
    }

    pub fn act_reparam(
        &self,
        phi: &PLReparam,
        a: &ExtensionElement<BicolouredLoop>,
    ) -> Result<ExtensionElement<BicolouredLoop>, LoopError> {
        let d = self.reparam_d(phi, &a.base)?;
        Ok(ExtensionElement::new(self.reparam_loop(phi, &a.base)?, &a.phase + &d))
    }
}
