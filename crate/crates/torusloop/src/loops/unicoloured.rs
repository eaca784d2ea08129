use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::foundation::{
    rat, vfrom_int, vis_integral, vscale, vsub, vto_int, Angle, IntMatrix, RatMatrix, RatVec,
};
use crate::lattice::{Lattice, RationalSublattice};
use crate::span::BiadditiveCocycle;

use super::path::PLPath;
use super::reparam::PLReparam;
use super::support::CircleSet;
use super::{ExtensionElement, LoopError};

/// A loop in T = 𝔱/Λ given by a PL lift in Λ-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLLoop {
    lift: PLPath,
}

impl PLLoop {
    pub fn lift(&self) -> &PLPath {
        &self.lift
    }

    /// Closure of the set where the loop is not the identity of T.
    pub fn support(&self) -> CircleSet {
        CircleSet::from_pieces(
            self.lift
                .pieces()
                .filter(|(_, _, a, b)| a != b || !vis_integral(a))
                .map(|(t0, t1, _, _)| (t0.clone(), t1.clone())),
        )
    }
}

/// LT ≅ T ⊕ V𝔱 ⊕ Λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Representative in [0,1)^n.
    pub torus: RatVec,
    pub v: PLPath,
    pub winding: Vec<BigInt>,
}

/// The loop group of the torus of a lattice together with its cocycle data.
#[derive(Clone, Debug)]
pub struct LoopGroup {
    lattice: Lattice,
    gram: RatMatrix,
    eps: BiadditiveCocycle,
}

fn half() -> BigRational {
    rat(1, 2)
}

impl LoopGroup {
    /// ε with commutator ½⟨λ,μ⟩, or ½(⟨λ,μ⟩ + ⟨λ,λ⟩⟨μ,μ⟩) for odd lattices.
    pub fn new(lattice: Lattice) -> Self {
        let std = RationalSublattice::standard(lattice.gram_rat());
        let eps = if lattice.is_even() {
            BiadditiveCocycle::for_even_lattice(std)
        } else {
            BiadditiveCocycle::for_odd_lattice(std)
        };
        Self::with_cocycle(lattice, eps)
    }

    /// `eps` must be given on the standard basis of the lattice.
    pub fn with_cocycle(lattice: Lattice, eps: BiadditiveCocycle) -> Self {
        let gram = lattice.gram_rat();
        LoopGroup { lattice, gram, eps }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn eps(&self) -> &BiadditiveCocycle {
        &self.eps
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn make_loop(&self, lift: PLPath) -> Result<PLLoop, LoopError> {
        if lift.dim() != self.rank() {
            return Err(LoopError::Mismatch);
        }
        if !vis_integral(&lift.delta()) {
            return Err(LoopError::WindingNotIntegral);
        }
        Ok(PLLoop { lift })
    }

    pub fn identity(&self) -> PLLoop {
        PLLoop { lift: PLPath::constant(vfrom_int(&alloc::vec![BigInt::zero(); self.rank()])) }
    }

    /// γ_λ: θ ↦ θλ.
    pub fn gamma_lambda(&self, l: &[BigInt]) -> PLLoop {
        PLLoop { lift: PLPath::linear(vfrom_int(l)) }
    }

    /// θ ↦ exp(x), a constant loop.
    pub fn constant(&self, x: RatVec) -> PLLoop {
        PLLoop { lift: PLPath::constant(x) }
    }

    fn check(&self, g: &PLLoop) -> Result<(), LoopError> {
        if g.lift.dim() == self.rank() {
            Ok(())
        } else {
            Err(LoopError::Mismatch)
        }
    }

    pub fn winding(&self, g: &PLLoop) -> Vec<BigInt> {
        vto_int(&g.lift.delta()).expect("integral winding")
    }

    pub fn add(&self, g: &PLLoop, h: &PLLoop) -> PLLoop {
        PLLoop { lift: g.lift.add(&h.lift) }
    }

    pub fn neg(&self, g: &PLLoop) -> PLLoop {
        PLLoop { lift: g.lift.neg() }
    }

    /// Equal as maps S¹ → T: the lifts differ by a constant lattice vector.
    pub fn loops_equal(&self, g: &PLLoop, h: &PLLoop) -> bool {
        g.lift.constant_difference(&h.lift).is_some_and(|c| vis_integral(&c))
    }

    pub fn decompose(&self, g: &PLLoop) -> Decomposition {
        let d = g.lift.delta();
        let corrected = g.lift.sub(&PLPath::linear(d.clone()));
        let mean = corrected.integral();
        let torus: RatVec = mean.iter().map(|x| x - x.floor()).collect();
        Decomposition { torus, v: corrected.add_const(&vscale(&-BigRational::one(), &mean)), winding: self.winding(g) }
    }

    pub fn recompose(&self, d: &Decomposition) -> PLLoop {
        let lin = PLPath::linear(vfrom_int(&d.winding));
        PLLoop { lift: d.v.add(&lin).add_const(&d.torus) }
    }

    /// S(ξ,η) = ½∫⟨ξ′,η⟩ + ½⟨Δξ, η(0)⟩.
    pub fn bilinear_s(&self, xi: &PLPath, eta: &PLPath) -> BigRational {
        (PLPath::pairing_integral(&self.gram, xi, eta) + self.gram.form_q(&xi.delta(), eta.start())) * half()
    }

    pub fn epsilon(&self, a: &[BigInt], b: &[BigInt]) -> Angle {
        self.eps.eval(&vfrom_int(a), &vfrom_int(b)).expect("lattice vectors")
    }

    pub fn cocycle(&self, g: &PLLoop, h: &PLLoop) -> Result<Angle, LoopError> {
        self.check(g)?;
        self.check(h)?;
        let e = self.epsilon(&self.winding(g), &self.winding(h));
        Ok(e + Angle::new(self.bilinear_s(&g.lift, &h.lift)))
    }

    pub fn unit(&self) -> ExtensionElement<PLLoop> {
        ExtensionElement::new(self.identity(), Angle::zero())
    }

    pub fn multiply(
        &self,
        a: &ExtensionElement<PLLoop>,
        b: &ExtensionElement<PLLoop>,
    ) -> Result<ExtensionElement<PLLoop>, LoopError> {
        let c = self.cocycle(&a.base, &b.base)?;
        Ok(ExtensionElement::new(self.add(&a.base, &b.base), &(&a.phase + &b.phase) + &c))
    }

    pub fn inverse(&self, a: &ExtensionElement<PLLoop>) -> ExtensionElement<PLLoop> {
        let n = self.neg(&a.base);
        let c = self.cocycle(&a.base, &n).expect("same group");
        ExtensionElement::new(n, -(&a.phase + &c))
    }

    pub fn elements_equal(&self, a: &ExtensionElement<PLLoop>, b: &ExtensionElement<PLLoop>) -> bool {
        a.phase == b.phase && self.loops_equal(&a.base, &b.base)
    }

    /// c(γ,ρ) − c(ρ,γ).
    pub fn commutator(&self, g: &PLLoop, h: &PLLoop) -> Result<Angle, LoopError> {
        Ok(self.cocycle(g, h)? - self.cocycle(h, g)?)
    }

    /// ε-commutator + ∫⟨ξ′,η⟩ − ½⟨Δρ,Δγ⟩ − ⟨Δρ, ξ(0)⟩.
    pub fn commutator_closed_form(&self, g: &PLLoop, h: &PLLoop) -> Angle {
        let (dg, dh) = (g.lift.delta(), h.lift.delta());
        let e = self.eps.commutator(&dg, &dh).expect("lattice vectors");
        let s = PLPath::pairing_integral(&self.gram, &g.lift, &h.lift)
            - self.gram.form_q(&dh, &dg) * half()
            - self.gram.form_q(&dh, g.lift.start());
        e + Angle::new(s)
    }

    pub fn support(&self, g: &PLLoop) -> CircleSet {
        g.support()
    }

    pub fn supports_separated(&self, g: &PLLoop, h: &PLLoop) -> bool {
        self.support(g).separated(&self.support(h))
    }

    /// ⟨Δγ,Δγ⟩ mod 2.
    pub fn parity(&self, g: &PLLoop) -> u8 {
        let d = g.lift.delta();
        let n = self.gram.form_q(&d, &d).to_integer();
        if (n % BigInt::from(2)).is_zero() {
            0
        } else {
            1
        }
    }

    /// φ*γ = γ∘φ⁻¹.
    pub fn reparam_loop(&self, phi: &PLReparam, g: &PLLoop) -> PLLoop {
        PLLoop { lift: g.lift.reparametrized(phi) }
    }

    /// d(φ,γ) = ½⟨Ξ(Φ⁻¹(0)) − Ξ(0), Δγ⟩.
    pub fn reparam_d(&self, phi: &PLReparam, g: &PLLoop) -> Angle {
        let x = phi.inverse_eval(&BigRational::zero());
        let diff = vsub(&g.lift.eval_ext(&x), g.lift.start());
        Angle::new(self.gram.form_q(&diff, &g.lift.delta()) * half())
    }

    pub fn act_reparam(&self, phi: &PLReparam, a: &ExtensionElement<PLLoop>) -> ExtensionElement<PLLoop> {
        let d = self.reparam_d(phi, &a.base);
        ExtensionElement::new(self.reparam_loop(phi, &a.base), &a.phase + &d)
    }

    /// For Φ and γ supported in complementary intervals: whether φ·(γ,0) keeps the loop, and its phase.
    pub fn local_triviality(&self, phi: &PLReparam, g: &PLLoop) -> Result<(bool, Angle), LoopError> {
        if !phi.support().separated(&self.support(g)) {
            return Err(LoopError::SupportOverlap);
        }
        let moved = self.act_reparam(phi, &ExtensionElement::new(g.clone(), Angle::zero()));
        Ok((self.loops_equal(&moved.base, g), moved.phase))
    }

    pub fn solve_coboundary(&self, g: &IntMatrix) -> Result<Coboundary, LoopError> {
        let n = self.rank();
        if g.rows() != n || g.cols() != n || g.transpose().mul(self.lattice.gram()).mul(g) != *self.lattice.gram() {
            return Err(LoopError::NotIsometry);
        }
        let basis: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        let r = basis
            .iter()
            .map(|a| basis.iter().map(|b| self.aut_ratio(g, a, b)).collect())
            .collect();
        Ok(Coboundary { g: g.clone(), r })
    }

    /// r(λ,μ) = ε(gλ,gμ) − ε(λ,μ).
    pub fn aut_ratio(&self, g: &IntMatrix, a: &[BigInt], b: &[BigInt]) -> Angle {
        self.epsilon(&g.mul_vec(a), &g.mul_vec(b)) - self.epsilon(a, b)
    }

    pub fn aut_loop(&self, g: &IntMatrix, l: &PLLoop) -> PLLoop {
        PLLoop { lift: l.lift.map_linear(&g.to_rat()) }
    }

    /// (g,e)·(γ,z) = (g_*γ, z + e(Δγ)).
    pub fn aut_action(&self, cob: &Coboundary, a: &ExtensionElement<PLLoop>) -> ExtensionElement<PLLoop> {
        let e = cob.e(&self.winding(&a.base));
        ExtensionElement::new(self.aut_loop(&cob.g, &a.base), &a.phase + &e)
    }
}

/// A lattice isometry g with a 1-cochain e whose coboundary is the cocycle ratio r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coboundary {
    g: IntMatrix,
    r: Vec<Vec<Angle>>,
}

impl Coboundary {
    pub fn matrix(&self) -> &IntMatrix {
        &self.g
    }

    /// r on the standard basis.
    pub fn ratio_table(&self) -> &[Vec<Angle>] {
        &self.r
    }

    pub fn ratio(&self, a: &[BigInt], b: &[BigInt]) -> Angle {
        let mut acc = Angle::zero();
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                acc += self.r[i][j].times(&(x * y));
            }
        }
        acc
    }

    /// e(λ) = Σ C(λ_i,2) r_ii + Σ_{i<j} λ_iλ_j r_ij.
    pub fn e(&self, l: &[BigInt]) -> Angle {
        let two = BigInt::from(2);
        let mut acc = Angle::zero();
        for i in 0..l.len() {
            let c2 = &l[i] * (&l[i] - BigInt::one()) / &two;
            acc += self.r[i][i].times(&c2);
            for j in i + 1..l.len() {
                acc += self.r[i][j].times(&(&l[i] * &l[j]));
            }
        }
        acc
    }

    /// e(λ+μ) − e(λ) − e(μ).
    pub fn delta_e(&self, a: &[BigInt], b: &[BigInt]) -> Angle {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.e(&s) - self.e(a) - self.e(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::vfrom_i64;
    use crate::lattice::parse_builtin;

    fn a1() -> LoopGroup {
        LoopGroup::new(parse_builtin("A1").unwrap())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    /// A lift on [0,1] through the given (t, value) points, in one coordinate.
    fn pl(points: &[((i64, i64), (i64, i64))]) -> PLPath {
        PLPath::new(
            points.iter().map(|(t, _)| rat(t.0, t.1)).collect(),
            points.iter().map(|(_, v)| alloc::vec![rat(v.0, v.1)]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn winding_and_validation() {
        let g = a1();
        assert_eq!(g.winding(&g.gamma_lambda(&ints(&[1]))), ints(&[1]));
        assert_eq!(g.winding(&g.constant(alloc::vec![rat(1, 3)])), ints(&[0]));
        assert_eq!(g.make_loop(PLPath::linear(alloc::vec![rat(1, 2)])), Err(LoopError::WindingNotIntegral));
    }

    #[test]
    fn decomposition() {
        let g = a1();
        let c = g.decompose(&g.constant(alloc::vec![rat(7, 3)]));
        assert_eq!(c.torus, alloc::vec![rat(1, 3)]);
        assert!(c.v.is_constant() && c.v.start()[0].is_zero());
        let l = g.gamma_lambda(&ints(&[1]));
        let d = g.decompose(&l);
        // γ_λ − γ_λ is the identity, so both the torus and V𝔱 parts vanish
        assert_eq!((d.torus.clone(), d.winding.clone()), (alloc::vec![rat(0, 1)], ints(&[1])));
        assert!(d.v.is_constant() && d.v.start()[0].is_zero());
        let rho = g.make_loop(PLPath::new(
            alloc::vec![rat(0, 1), rat(1, 4), rat(1, 1)],
            alloc::vec![alloc::vec![rat(3, 2)], alloc::vec![rat(1, 1)], alloc::vec![rat(7, 2)]],
        ).unwrap()).unwrap();
        let e = g.decompose(&rho);
        assert_eq!(e.v.integral(), alloc::vec![rat(0, 1)]);
        assert!(g.loops_equal(&g.recompose(&e), &rho));
        assert!(g.loops_equal(&g.recompose(&d), &l));
    }

    #[test]
    fn bilinear_examples() {
        let g = a1();
        let e = PLPath::linear(vfrom_i64(&[1]));
        assert_eq!(g.bilinear_s(&e, &PLPath::constant(alloc::vec![rat(1, 4)])), rat(1, 2));
        assert_eq!(g.bilinear_s(&e, &PLPath::constant(alloc::vec![rat(-1, 3)])), rat(-2, 3));
        let c = PLPath::constant(alloc::vec![rat(1, 5)]);
        assert!(g.bilinear_s(&c, &c).is_zero());
        let lam = g.gamma_lambda(&ints(&[1]));
        assert_eq!(g.cocycle(&lam, &g.constant(alloc::vec![rat(-1, 3)])).unwrap(), Angle::frac(1, 3));
    }

    #[test]
    fn commutators() {
        let g = a1();
        let lam = g.gamma_lambda(&ints(&[1]));
        let rho = g.make_loop(pl(&[((0, 1), (1, 5)), ((1, 3), (2, 3)), ((1, 1), (1, 5))])).unwrap();
        // −⟨λ, ∫η⟩ with ∫η = 1/3·(1/5+2/3)/2 + 2/3·(2/3+1/5)/2 = 13/30
        let expect = Angle::new(-rat(2, 1) * rat(13, 30));
        assert_eq!(g.commutator(&rho, &lam).unwrap(), expect);
        assert_eq!(g.commutator_closed_form(&rho, &lam), expect);
        assert_eq!(g.commutator_closed_form(&lam, &rho), -expect);
    }

    #[test]
    fn graded_commutation() {
        let z = LoopGroup::new(parse_builtin("Z1").unwrap());
        let odd1 = z.make_loop(pl(&[((0, 1), (0, 1)), ((1, 8), (0, 1)), ((3, 8), (1, 1)), ((1, 1), (1, 1))])).unwrap();
        let odd2 = z.make_loop(pl(&[((0, 1), (0, 1)), ((1, 2), (0, 1)), ((5, 8), (1, 3)), ((3, 4), (1, 1)), ((1, 1), (1, 1))])).unwrap();
        let even = z.make_loop(pl(&[((0, 1), (0, 1)), ((1, 2), (0, 1)), ((3, 4), (2, 1)), ((1, 1), (2, 1))])).unwrap();
        assert!(z.supports_separated(&odd1, &odd2));
        assert_eq!((z.parity(&odd1), z.parity(&even)), (1, 0));
        assert_eq!(z.commutator(&odd1, &odd2).unwrap(), Angle::half());
        assert_eq!(z.commutator(&odd1, &even).unwrap(), Angle::zero());
        assert_eq!(z.commutator_closed_form(&odd1, &odd2), Angle::half());
    }

    #[test]
    fn reparametrization() {
        let g = a1();
        let lam = g.gamma_lambda(&ints(&[1]));
        assert_eq!(g.reparam_d(&PLReparam::rotation(rat(1, 2), 1), &lam), Angle::half());
        assert!(g.reparam_d(&PLReparam::identity(1), &lam).is_zero());
        let rho = g.make_loop(pl(&[((0, 1), (1, 5)), ((1, 3), (2, 3)), ((1, 1), (1, 5))])).unwrap();
        assert!(g.reparam_d(&PLReparam::rotation(rat(1, 3), 1), &rho).is_zero());
        let moved = g.reparam_loop(&PLReparam::rotation(rat(1, 3), 1), &rho);
        assert_eq!(moved.lift().eval(&rat(2, 3)), alloc::vec![rat(2, 3)]);
    }

    #[test]
    fn local_triviality() {
        let g = a1();
        let bump = PLReparam::new(
            alloc::vec![rat(0, 1), rat(1, 8), rat(1, 4), rat(1, 1)],
            alloc::vec![rat(0, 1), rat(3, 16), rat(1, 4), rat(1, 1)],
            1,
        )
        .unwrap();
        let loc = g.make_loop(pl(&[((0, 1), (0, 1)), ((1, 2), (0, 1)), ((5, 8), (1, 3)), ((3, 4), (1, 1)), ((1, 1), (1, 1))])).unwrap();
        assert_eq!(g.local_triviality(&bump, &loc), Ok((true, Angle::zero())));
        let around_q = PLReparam::on_window(
            alloc::vec![rat(-1, 8), rat(0, 1), rat(1, 8), rat(7, 8)],
            alloc::vec![rat(-1, 8), rat(1, 16), rat(1, 8), rat(7, 8)],
            1,
        )
        .unwrap();
        assert_eq!(g.local_triviality(&around_q, &loc), Ok((true, Angle::zero())));
        assert_eq!(g.local_triviality(&bump, &g.gamma_lambda(&ints(&[1]))), Err(LoopError::SupportOverlap));
    }

    #[test]
    fn automorphisms() {
        let g = a1();
        assert_eq!(g.solve_coboundary(&IntMatrix::from_i64(&[alloc::vec![2]])), Err(LoopError::NotIsometry));
        let cob = g.solve_coboundary(&IntMatrix::from_i64(&[alloc::vec![-1]])).unwrap();
        for a in -3..4 {
            for b in -3..4 {
                let (a, b) = (ints(&[a]), ints(&[b]));
                assert_eq!(cob.delta_e(&a, &b), cob.ratio(&a, &b));
            }
        }
        let id = g.solve_coboundary(&IntMatrix::identity(1)).unwrap();
        assert!(id.e(&ints(&[5])).is_zero());
    }
}
