//! Truncated bosonic Fock space over the Fourier modes of loops in 𝔱,
//! coherent vectors and the Weyl representation of the Heisenberg group.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;
use thiserror::Error;
use torusloop::foundation::RatMatrix;

pub type C = Complex64;

const I: C = C::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("Fock vectors have different degree caps or dimensions")]
    DegreeCapMismatch,
    #[error("mode data must have length {0}")]
    BadDim(usize),
    #[error("modes must be nonzero integers")]
    BadMode,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
}

/// A positive definite real form on ℂ^d, extended complex-bilinearly.
#[derive(Clone, Debug, PartialEq)]
pub struct Gram(Vec<Vec<f64>>);

impl Gram {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, FockError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(FockError::BadDim(n));
        }
        // Cholesky as the definiteness test
        let mut l = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let s: f64 = rows[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
                if i == j {
                    if s <= 0.0 {
                        return Err(FockError::NotPositiveDefinite);
                    }
                    l[i][i] = s.sqrt();
                } else {
                    l[i][j] = s / l[j][j];
                }
            }
        }
        Ok(Gram(rows))
    }

    pub fn from_rational(g: &RatMatrix) -> Result<Self, FockError> {
        let rows = (0..g.rows())
            .map(|i| (0..g.cols()).map(|j| g.get(i, j).to_f64().expect("finite")).collect())
            .collect();
        Gram::new(rows)
    }

    pub fn identity(d: usize) -> Self {
        Gram((0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn pair(&self, x: &[C], y: &[C]) -> C {
        let mut s = C::new(0.0, 0.0);
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                s += xi * yj * self.0[i][j];
            }
        }
        s
    }
}

/// A real loop Σ_k ξ_k e^{2πikθ} with ξ_{−k} = conj(ξ_k) and no zero mode.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierLoop {
    dim: usize,
    modes: BTreeMap<i64, Vec<C>>,
}

fn conj(v: &[C]) -> Vec<C> {
    v.iter().map(|z| z.conj()).collect()
}

impl FourierLoop {
    pub fn zero(dim: usize) -> Self {
        FourierLoop { dim, modes: BTreeMap::new() }
    }

    /// From the modes k > 0; the negative modes are their conjugates.
    pub fn from_positive(dim: usize, pos: &[(i64, Vec<C>)]) -> Result<Self, FockError> {
        let mut modes = BTreeMap::new();
        for (k, v) in pos {
            if *k <= 0 {
                return Err(FockError::BadMode);
            }
            if v.len() != dim {
                return Err(FockError::BadDim(dim));
            }
            modes.insert(-k, conj(v));
            modes.insert(*k, v.clone());
        }
        Ok(FourierLoop { dim, modes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> &BTreeMap<i64, Vec<C>> {
        &self.modes
    }

    pub fn mode(&self, k: i64) -> Vec<C> {
        self.modes.get(&k).cloned().unwrap_or_else(|| vec![C::new(0.0, 0.0); self.dim])
    }

    fn map(&self, f: impl Fn(i64, &C) -> C) -> Self {
        let modes = self.modes.iter().map(|(k, v)| (*k, v.iter().map(|z| f(*k, z)).collect())).collect();
        FourierLoop { dim: self.dim, modes }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut modes = self.modes.clone();
        for (k, v) in &other.modes {
            let e = modes.entry(*k).or_insert_with(|| vec![C::new(0.0, 0.0); self.dim]);
            for (a, b) in e.iter_mut().zip(v) {
                *a += b;
            }
        }
        FourierLoop { dim: self.dim, modes }
    }

    pub fn neg(&self) -> Self {
        self.map(|_, z| -z)
    }

    pub fn scale(&self, t: f64) -> Self {
        self.map(|_, z| z * t)
    }

    /// Mode k times sgn(k)·i.
    pub fn apply_j(&self) -> Self {
        self.map(|k, z| z * I * (k.signum() as f64))
    }

    /// Complex scalar multiplication in V_J: (a + bi)·ξ = aξ + bJξ.
    pub fn cmul(&self, c: C) -> Self {
        self.map(|k, z| z * C::new(c.re, c.im * k.signum() as f64))
    }

    /// ξ(θ − t): mode k times e^{−2πikt}.
    pub fn rotate(&self, t: f64) -> Self {
        self.map(|k, z| z * C::from_polar(1.0, -2.0 * PI * k as f64 * t))
    }

    /// Largest |difference| over all stored modes.
    pub fn distance(&self, other: &Self) -> f64 {
        let d = self.add(&other.neg());
        d.modes.values().flat_map(|v| v.iter().map(|z| z.norm())).fold(0.0, f64::max)
    }
}

/// πi Σ_k k⟨a_k, b_{−k}⟩ on arbitrary (possibly non-real) mode data.
pub fn s_form(gram: &Gram, a: &BTreeMap<i64, Vec<C>>, b: &BTreeMap<i64, Vec<C>>) -> C {
    let mut s = C::new(0.0, 0.0);
    for (k, v) in a {
        if let Some(w) = b.get(&-k) {
            s += gram.pair(v, w) * (*k as f64);
        }
    }
    s * PI * I
}

pub fn fourier_s(xi: &FourierLoop, eta: &FourierLoop, gram: &Gram) -> C {
    s_form(gram, &xi.modes, &eta.modes)
}

/// ⟨ξ,η⟩_J = 2π(S(ξ,Jη) − iS(ξ,η)), linear in ξ.
pub fn inner_j(xi: &FourierLoop, eta: &FourierLoop, gram: &Gram) -> C {
    (fourier_s(xi, &eta.apply_j(), gram) - I * fourier_s(xi, eta, gram)) * (2.0 * PI)
}

/// An orthonormal basis (for ⟨·,·⟩_J) of the span of some loops.
#[derive(Clone, Debug)]
pub struct ProbeBasis {
    gram: Gram,
    basis: Vec<FourierLoop>,
}

impl ProbeBasis {
    pub fn new(gram: Gram, loops: &[FourierLoop]) -> Self {
        let mut basis: Vec<FourierLoop> = Vec::new();
        for v in loops {
            let mut w = v.clone();
            for b in &basis {
                let c = inner_j(&w, b, &gram);
                w = w.add(&b.cmul(c).neg());
            }
            let n = inner_j(&w, &w, &gram).re.sqrt();
            if n > 1e-9 * (1.0 + inner_j(v, v, &gram).re.sqrt()) {
                basis.push(w.scale(1.0 / n));
            }
        }
        ProbeBasis { gram, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn gram(&self) -> &Gram {
        &self.gram
    }

    /// c with ξ = Σ c_i b_i.
    pub fn coords(&self, xi: &FourierLoop) -> Vec<C> {
        self.basis.iter().map(|b| inner_j(xi, b, &self.gram)).collect()
    }
}

/// Monomials are keyed by the weakly decreasing list of basis indices.
pub type Monomial = Vec<usize>;

/// Truncated symmetric algebra over an orthonormal basis of size dim.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    dim: usize,
    cap: usize,
    comps: BTreeMap<Monomial, C>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// α! for the exponent vector of a monomial.
fn multiplicity_factorial(m: &Monomial) -> f64 {
    let mut out = 1.0;
    let mut run = 0;
    for (i, x) in m.iter().enumerate() {
        run = if i > 0 && m[i - 1] == *x { run + 1 } else { 1 };
        out *= run as f64;
    }
    out
}

/// All weakly decreasing index lists of length ≤ cap over 0..dim, by degree.
fn monomials(dim: usize, cap: usize) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Monomial> = vec![Vec::new()];
    for _ in 0..cap {
        let mut next = Vec::new();
        for m in &layer {
            let top = m.last().map_or(dim, |x| x + 1);
            for i in 0..top {
                let mut n = m.clone();
                n.push(i);
                next.push(n);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl FockVector {
    pub fn zero(dim: usize, cap: usize) -> Self {
        FockVector { dim, cap, comps: BTreeMap::new() }
    }

    pub fn vacuum(dim: usize, cap: usize) -> Self {
        let mut v = FockVector::zero(dim, cap);
        v.comps.insert(Vec::new(), C::new(1.0, 0.0));
        v
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &BTreeMap<Monomial, C> {
        &self.comps
    }

    pub fn add_scaled(&mut self, c: C, other: &FockVector) {
        for (m, a) in &other.comps {
            *self.comps.entry(m.clone()).or_insert(C::new(0.0, 0.0)) += c * a;
        }
    }

    /// The product v_1⋯v_k of vectors given by basis coordinates.
    pub fn product(dim: usize, cap: usize, vs: &[Vec<C>]) -> Self {
        let mut cur: BTreeMap<Monomial, C> = BTreeMap::from([(Vec::new(), C::new(1.0, 0.0))]);
        for v in vs {
            let mut next = BTreeMap::new();
            for (m, a) in &cur {
                for (i, c) in v.iter().enumerate() {
                    if c.norm() == 0.0 {
                        continue;
                    }
                    let mut n = m.clone();
                    let pos = n.iter().position(|x| *x < i).unwrap_or(n.len());
                    n.insert(pos, i);
                    *next.entry(n).or_insert(C::new(0.0, 0.0)) += a * c;
                }
            }
            cur = next;
        }
        let comps = if vs.len() <= cap { cur } else { BTreeMap::new() };
        FockVector { dim, cap, comps }
    }
}

/// Σ_α u_α conj(v_α) α!, the permanent inner product in monomial form.
pub fn fock_inner(u: &FockVector, v: &FockVector) -> Result<C, FockError> {
    if u.cap != v.cap || u.dim != v.dim {
        return Err(FockError::DegreeCapMismatch);
    }
    Ok(u.comps
        .iter()
        .filter_map(|(m, a)| v.comps.get(m).map(|b| a * b.conj() * multiplicity_factorial(m)))
        .sum())
}

/// ⟨v_1⋯v_k, w_1⋯w_k⟩ = Σ_σ Π ⟨v_i, w_σ(i)⟩ for orthonormal coordinates.
pub fn permanent_inner(vs: &[Vec<C>], ws: &[Vec<C>]) -> C {
    if vs.len() != ws.len() {
        return C::new(0.0, 0.0);
    }
    let dot = |a: &Vec<C>, b: &Vec<C>| a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<C>();
    let k = vs.len();
    let m: Vec<Vec<C>> = vs.iter().map(|v| ws.iter().map(|w| dot(v, w)).collect()).collect();
    // Ryser's formula
    let mut total = C::new(0.0, 0.0);
    for s in 1u32..(1 << k) {
        let mut prod = C::new(1.0, 0.0);
        for row in &m {
            prod *= (0..k).filter(|j| s & (1 << j) != 0).map(|j| row[j]).sum::<C>();
        }
        let sign = if (k as u32 - s.count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
        total += prod * sign;
    }
    total
}

/// e^ξ = Σ_α c^α/α! e^α up to degree cap.
pub fn coherent(c: &[C], cap: usize) -> FockVector {
    let dim = c.len();
    let mut comps = BTreeMap::new();
    for m in monomials(dim, cap) {
        let a: C = m.iter().map(|i| c[*i]).product::<C>() / multiplicity_factorial(&m);
        comps.insert(m, a);
    }
    FockVector { dim, cap, comps }
}

/// exp(Σ c_i conj(d_i)).
pub fn coherent_inner(c: &[C], d: &[C]) -> C {
    c.iter().zip(d).map(|(x, y)| x * y.conj()).sum::<C>().exp()
}

/// |x|^{K+1}·e^{|x|}/(K+1)!, the tail of the exponential series past degree K.
pub fn tail_bound(x: f64, cap: usize) -> f64 {
    x.abs().powi(cap as i32 + 1) * x.abs().exp() / factorial(cap + 1)
}

/// A finite combination Σ a_j e^{κ_j} of coherent vectors.
#[derive(Clone, Debug)]
pub struct Coherents {
    pub terms: Vec<(C, FourierLoop)>,
}

impl Coherents {
    pub fn single(kappa: FourierLoop) -> Self {
        Coherents { terms: vec![(C::new(1.0, 0.0), kappa)] }
    }

    pub fn to_fock(&self, basis: &ProbeBasis, cap: usize) -> FockVector {
        let mut v = FockVector::zero(basis.dim(), cap);
        for (a, k) in &self.terms {
            v.add_scaled(*a, &coherent(&basis.coords(k), cap));
        }
        v
    }

    /// The rotation R(φ_t) acting on each coherent vector.
    pub fn rotate(&self, t: f64) -> Self {
        Coherents { terms: self.terms.iter().map(|(a, k)| (*a, k.rotate(t))).collect() }
    }

    pub fn loops(&self) -> impl Iterator<Item = &FourierLoop> {
        self.terms.iter().map(|(_, k)| k)
    }
}

/// W(ξ,z)e^κ = z·e^{−½⟨ξ,ξ⟩−⟨κ,ξ⟩}·e^{κ+ξ}, extended linearly.
pub fn weyl_apply(xi: &FourierLoop, z: C, v: &Coherents, gram: &Gram) -> Coherents {
    let half = inner_j(xi, xi, gram) * 0.5;
    let terms = v
        .terms
        .iter()
        .map(|(a, k)| (a * z * (-half - inner_j(k, xi, gram)).exp(), k.add(xi)))
        .collect();
    Coherents { terms }
}

/// (ξ,z)·(η,w) = (ξ+η, z·w·e^{−2πiS(ξ,η)}).
pub fn heisenberg_multiply(a: &(FourierLoop, C), b: &(FourierLoop, C), gram: &Gram) -> (FourierLoop, C) {
    let phase = (-2.0 * PI * I * fourier_s(&a.0, &b.0, gram)).exp();
    (a.0.add(&b.0), a.1 * b.1 * phase)
}

/// Number of Fock basis monomials of energy k ≤ order in d colours: multisets of
/// (mode ≥ 1, colour) with total mode k.
pub fn energy_dims(d: usize, order: usize) -> Vec<u64> {
    fn walk(d: usize, order: usize, max_slot: usize, energy: usize, counts: &mut [u64]) {
        counts[energy] += 1;
        for slot in 0..max_slot {
            let e = energy + slot / d + 1;
            if e <= order {
                walk(d, order, slot + 1, e, counts);
            }
        }
    }
    let mut counts = vec![0; order + 1];
    walk(d, order, d * order, 0, &mut counts);
    counts
}

/// A random real loop with modes 1..=modes and ‖ξ‖_J = norm.
pub fn random_loop<R: Rng + ?Sized>(rng: &mut R, gram: &Gram, modes: i64, norm: f64) -> FourierLoop {
    let d = gram.dim();
    let pos: Vec<(i64, Vec<C>)> = (1..=modes)
        .map(|k| (k, (0..d).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()))
        .collect();
    let xi = FourierLoop::from_positive(d, &pos).expect("positive modes");
    let n = inner_j(&xi, &xi, gram).re.sqrt();
    xi.scale(norm / n)
}
