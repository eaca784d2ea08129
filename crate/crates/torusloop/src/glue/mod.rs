//! Discriminant groups, their bilinear and quadratic forms, isotropic
//! subgroups and the overlattices they glue.

mod presentation;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::foundation::{hnf_basis, unit_vec, Angle, IntMatrix, RatMatrix, RatVec};
use crate::lattice::{Lattice, RationalSublattice};

pub use presentation::FiniteAbelianPresentation;

/// Default bound on |D| for subgroup enumeration.
pub const ENUMERATION_BOUND: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlueError {
    #[error("discriminant group of order {0} exceeds the enumeration bound")]
    TooLarge(BigInt),
    #[error("quadratic form requested on an odd lattice")]
    NotEven,
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("sublattice is not contained in the lattice")]
    NotContained,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// The ℚ/ℤ-valued bilinear form b.
    B,
    /// The ℚ/2ℤ-valued quadratic form q (even lattices only).
    Q,
}

/// A subgroup of a finite abelian presentation ⊕ ℤ/d_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscSubgroup {
    pub generators: Vec<Vec<BigInt>>,
    pub order: BigInt,
    /// Hermite basis of the preimage of the subgroup in ℤ^r; a canonical key.
    pub key: IntMatrix,
}

impl DiscSubgroup {
    /// The subgroup generated by `gens` inside ⊕ ℤ/d_i.
    pub fn generated_by(factors: &[BigInt], gens: &[Vec<BigInt>]) -> Self {
        let r = factors.len();
        let mut rows: Vec<Vec<BigInt>> = gens.to_vec();
        for (i, d) in factors.iter().enumerate() {
            let mut e = alloc::vec![BigInt::zero(); r];
            e[i] = d.clone();
            rows.push(e);
        }
        let key = if r == 0 { IntMatrix::zeros(0, 0) } else { hnf_basis(&IntMatrix::from_rows(&rows)) };
        let total: BigInt = factors.iter().product();
        let index = if r == 0 { BigInt::from(1) } else { key.det() };
        let order = total / index;
        let generators = key
            .to_rows()
            .into_iter()
            .map(|row| row.iter().zip(factors).map(|(x, d)| x.mod_floor(d)).collect::<Vec<_>>())
            .filter(|row| row.iter().any(|x| !x.is_zero()))
            .collect();
        DiscSubgroup { generators, order, key }
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

/// The discriminant group Λ^∨/Λ of a lattice with its forms.
#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    lattice: Lattice,
    group: FiniteAbelianPresentation,
}

pub fn discriminant_group(l: &Lattice) -> FiniteAbelianPresentation {
    FiniteAbelianPresentation::quotient(&l.dual(), &l.as_sublattice()).expect("Λ ⊆ Λ^∨")
}

impl DiscriminantForm {
    pub fn new(l: &Lattice) -> Self {
        DiscriminantForm { lattice: l.clone(), group: discriminant_group(l) }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn group(&self) -> &FiniteAbelianPresentation {
        &self.group
    }

    /// b(x,y) = ⟨lift x, lift y⟩ mod ℤ.
    pub fn b(&self, x: &[BigInt], y: &[BigInt]) -> Angle {
        Angle::new(self.lattice.form(&self.group.lift(x), &self.group.lift(y)))
    }

    /// q(x) = ⟨lift x, lift x⟩ mod 2ℤ, as a representative in [0, 2).
    pub fn q(&self, x: &[BigInt]) -> Result<BigRational, GlueError> {
        if !self.lattice.is_even() {
            return Err(GlueError::NotEven);
        }
        let l = self.group.lift(x);
        Ok(mod_two(&self.lattice.form(&l, &l)))
    }

    /// Both forms at once; q is absent for odd lattices.
    pub fn eval(&self, x: &[BigInt], y: &[BigInt]) -> (Angle, Option<BigRational>) {
        let q = (x == y && self.lattice.is_even()).then(|| self.q(x).expect("even"));
        (self.b(x, y), q)
    }

    fn vanishes(&self, kind: FormKind, x: &[BigInt]) -> bool {
        match kind {
            FormKind::B => self.b(x, x).is_zero(),
            FormKind::Q => self.q(x).expect("checked even").is_zero(),
        }
    }

    /// Is the subgroup isotropic for the chosen form?
    pub fn is_isotropic(&self, u: &DiscSubgroup, kind: FormKind) -> bool {
        let g = &u.generators;
        g.iter().all(|x| self.vanishes(kind, x))
            && (0..g.len()).all(|i| (0..i).all(|j| self.b(&g[i], &g[j]).is_zero()))
    }

    /// U^⊥ = {x : b(x,u) = 0 for all u ∈ U}, as a list of elements.
    pub fn orthogonal(&self, u: &DiscSubgroup) -> Vec<Vec<BigInt>> {
        self.group.elements().into_iter().filter(|x| u.generators.iter().all(|g| self.b(x, g).is_zero())).collect()
    }

    /// All isotropic subgroups (including the trivial one), ordered by order then key.
    pub fn isotropic_subgroups(&self, kind: FormKind) -> Result<Vec<DiscSubgroup>, GlueError> {
        if kind == FormKind::Q && !self.lattice.is_even() {
            return Err(GlueError::NotEven);
        }
        let order = self.group.order();
        if order > BigInt::from(ENUMERATION_BOUND) {
            return Err(GlueError::TooLarge(order));
        }
        let factors = self.group.invariant_factors().to_vec();
        let candidates: Vec<Vec<BigInt>> =
            self.group.elements().into_iter().filter(|x| self.vanishes(kind, x)).collect();
        let trivial = DiscSubgroup::generated_by(&factors, &[]);
        let mut seen: BTreeSet<Vec<Vec<BigInt>>> = BTreeSet::new();
        seen.insert(trivial.key.to_rows());
        let mut found = alloc::vec![trivial];
        let mut frontier = 0;
        while frontier < found.len() {
            let s = found[frontier].clone();
            frontier += 1;
            for x in &candidates {
                if !s.generators.iter().all(|g| self.b(x, g).is_zero()) {
                    continue;
                }
                let mut gens = s.generators.clone();
                gens.push(x.clone());
                let t = DiscSubgroup::generated_by(&factors, &gens);
                if t.order != s.order && seen.insert(t.key.to_rows()) {
                    found.push(t);
                }
            }
        }
        found.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.key.to_rows().cmp(&b.key.to_rows())));
        Ok(found)
    }

    /// The subgroup Λ'/Λ of an intermediate lattice Λ ⊆ Λ' ⊆ Λ^∨.
    pub fn subgroup_of(&self, over: &RationalSublattice) -> Result<DiscSubgroup, GlueError> {
        let gens: Result<Vec<_>, _> = over.basis_vectors().iter().map(|v| self.group.element_coords(v)).collect();
        Ok(DiscSubgroup::generated_by(self.group.invariant_factors(), &gens?))
    }
}

/// Representative of a rational number mod 2ℤ in [0, 2).
pub fn mod_two(x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(2.into());
    x - (x / &two).floor() * two
}

/// An overlattice together with its basis in the coordinates of the original lattice.
#[derive(Clone, Debug)]
pub struct Overlattice {
    pub lattice: Lattice,
    /// Columns are the new basis vectors in old coordinates.
    pub basis: RatMatrix,
}

impl Overlattice {
    /// Coordinates of the old basis in the new basis (an integer matrix).
    pub fn embedding(&self) -> IntMatrix {
        self.basis.inverse().expect("full rank").to_int().expect("old lattice is a sublattice")
    }
}

/// Λ_U = Λ + lifts(U), re-based by Hermite normal form.
pub fn overlattice_from_isotropic(form: &DiscriminantForm, u: &DiscSubgroup) -> Result<Overlattice, GlueError> {
    if !form.is_isotropic(u, FormKind::B) {
        return Err(GlueError::NotIsotropic);
    }
    let l = form.lattice();
    let n = l.rank();
    let mut gens: Vec<RatVec> = (0..n).map(|i| unit_vec(n, i)).collect();
    gens.extend(u.generators.iter().map(|g| form.group().lift(g)));
    let s = RationalSublattice::from_generators(l.gram_rat(), &gens).expect("contains Λ");
    let gram = s.gram().to_int().expect("b-isotropic gives an integral form");
    let mut lattice = Lattice::new(gram).expect("overlattice is non-degenerate");
    if let Some(name) = l.name() {
        lattice = lattice.named(alloc::format!("{name}+U{}", u.order));
    }
    Ok(Overlattice { lattice, basis: s.basis().clone() })
}
