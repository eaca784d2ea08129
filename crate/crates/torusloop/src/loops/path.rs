use alloc::vec::Vec;

use num_rational::BigRational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::foundation::{int_rat, qadd, qdiv, qfloor, qmul, qsub, rat, vadd, vis_zero, vneg, vscale, vsub, zero_vec, RatMatrix, RatVec};

use super::reparam::PLReparam;
use super::LoopError;

/// Rows of `vs` over one common denominator: vs = rows / d.
fn common_denominator<'a>(vs: impl Iterator<Item = &'a BigRational> + Clone) -> Option<(i128, Vec<i128>)> {
    let mut d: i128 = 1;
    for x in vs.clone() {
        let q = x.denom().to_i128()?;
        d = d.checked_mul(q / d.gcd(&q))?;
    }
    let nums = vs.map(|x| x.numer().to_i128()?.checked_mul(d / x.denom().to_i128()?)).collect::<Option<_>>()?;
    Some((d, nums))
}

/// Σ_i ⟨x_{i+1} − x_i, ½(y_i + y_{i+1})⟩ over the given pieces in machine integers; None on overflow.
fn pairing_fast(gram: &RatMatrix, x: &[RatVec], y: &[RatVec], pieces: &[usize]) -> Option<BigRational> {
    let n = gram.rows();
    let (dg, g) = common_denominator((0..n).flat_map(|i| (0..n).map(move |j| gram.get(i, j))))?;
    let (dx, xs) = common_denominator(x.iter().flatten())?;
    let (dy, ys) = common_denominator(y.iter().flatten())?;
    let mut acc: i128 = 0;
    for &i in pieces {
        for r in 0..n {
            let dxr = xs[(i + 1) * n + r].checked_sub(xs[i * n + r])?;
            if dxr == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for c in 0..n {
                let m = ys[i * n + c].checked_add(ys[(i + 1) * n + c])?;
                row = row.checked_add(g[r * n + c].checked_mul(m)?)?;
            }
            acc = acc.checked_add(dxr.checked_mul(row)?)?;
        }
    }
    let den = BigInt::from(dg) * BigInt::from(dx) * BigInt::from(dy) * BigInt::from(2);
    Some(BigRational::new(BigInt::from(acc), den))
}

fn pairing_exact(gram: &RatMatrix, x: &[RatVec], y: &[RatVec], pieces: &[usize]) -> BigRational {
    let half = rat(1, 2);
    let mut acc = BigRational::zero();
    for &i in pieces {
        let dx = vsub(&x[i + 1], &x[i]);
        if vis_zero(&dx) {
            continue;
        }
        let mid = vscale(&half, &vadd(&y[i], &y[i + 1]));
        acc += gram.form_q(&dx, &mid);
    }
    acc
}

/// A continuous piecewise-linear map [0,1] → ℚ^n, affine between consecutive breakpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLPath {
    breakpoints: Vec<BigRational>,
    values: Vec<RatVec>,
}

impl PLPath {
    pub fn new(breakpoints: Vec<BigRational>, values: Vec<RatVec>) -> Result<Self, LoopError> {
        if breakpoints.len() < 2 || breakpoints.len() != values.len() {
            return Err(LoopError::BadPath("need matching breakpoints and values, at least two"));
        }
        if !breakpoints[0].is_zero() || !breakpoints.last().unwrap().is_one() {
            return Err(LoopError::BadPath("breakpoints must run from 0 to 1"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LoopError::BadPath("breakpoints must be strictly increasing"));
        }
        let n = values[0].len();
        if values.iter().any(|v| v.len() != n) {
            return Err(LoopError::BadPath("values must have equal dimension"));
        }
        Ok(PLPath { breakpoints, values })
    }

    pub fn constant(v: RatVec) -> Self {
        PLPath { breakpoints: alloc::vec![BigRational::zero(), BigRational::one()], values: alloc::vec![v.clone(), v] }
    }

    /// θ ↦ θ·v.
    pub fn linear(v: RatVec) -> Self {
        PLPath { breakpoints: alloc::vec![BigRational::zero(), BigRational::one()], values: alloc::vec![zero_vec(v.len()), v] }
    }

    /// θ ↦ a + θ·(b − a).
    pub fn segment(a: RatVec, b: RatVec) -> Self {
        PLPath { breakpoints: alloc::vec![BigRational::zero(), BigRational::one()], values: alloc::vec![a, b] }
    }

    pub fn dim(&self) -> usize {
        self.values[0].len()
    }

    pub fn breakpoints(&self) -> &[BigRational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[RatVec] {
        &self.values
    }

    pub fn start(&self) -> &RatVec {
        &self.values[0]
    }

    pub fn end(&self) -> &RatVec {
        self.values.last().unwrap()
    }

    /// ξ(1) − ξ(0).
    pub fn delta(&self) -> RatVec {
        vsub(self.end(), self.start())
    }

    /// Pieces as (t₀, t₁, ξ(t₀), ξ(t₁)).
    pub fn pieces(&self) -> impl Iterator<Item = (&BigRational, &BigRational, &RatVec, &RatVec)> {
        (0..self.breakpoints.len() - 1).map(move |i| {
            (&self.breakpoints[i], &self.breakpoints[i + 1], &self.values[i], &self.values[i + 1])
        })
    }

    /// ξ(t) for t ∈ [0,1].
    pub fn eval(&self, t: &BigRational) -> RatVec {
        let i = match self.breakpoints.binary_search(t) {
            Ok(i) => return self.values[i].clone(),
            Err(i) => i,
        };
        assert!(i > 0 && i < self.breakpoints.len(), "parameter outside [0,1]");
        self.interpolate(i - 1, t)
    }

    /// ξ(t) for t inside piece i.
    fn interpolate(&self, i: usize, t: &BigRational) -> RatVec {
        let (t0, t1) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
        let s = qdiv(&qsub(t, t0), &qsub(t1, t0));
        let (v0, v1) = (&self.values[i], &self.values[i + 1]);
        v0.iter().zip(v1).map(|(a, b)| qadd(a, &qmul(&s, &qsub(b, a)))).collect()
    }

    /// Quasi-periodic extension Ξ(t + k) = ξ(t) + k·Δ to all of ℝ.
    pub fn eval_ext(&self, t: &BigRational) -> RatVec {
        let k = qfloor(t);
        let v = self.eval(&qsub(t, &k));
        vadd(&v, &vscale(&k, &self.delta()))
    }

    /// The same function with additional breakpoints.
    pub fn refine(&self, extra: &[BigRational]) -> PLPath {
        let one = BigRational::one();
        let mut ts: Vec<&BigRational> = extra.iter().filter(|t| t.is_positive() && **t < one).collect();
        if !ts.windows(2).all(|w| w[0] < w[1]) {
            ts.sort();
            ts.dedup();
        }
        let last = self.breakpoints.len() - 1;
        let mut bps = Vec::with_capacity(last + 1 + ts.len());
        let mut values = Vec::with_capacity(last + 1 + ts.len());
        let mut j = 0;
        for i in 0..last {
            bps.push(self.breakpoints[i].clone());
            values.push(self.values[i].clone());
            while j < ts.len() && *ts[j] <= self.breakpoints[i] {
                j += 1;
            }
            while j < ts.len() && *ts[j] < self.breakpoints[i + 1] {
                bps.push(ts[j].clone());
                values.push(self.interpolate(i, ts[j]));
                j += 1;
            }
        }
        bps.push(self.breakpoints[last].clone());
        values.push(self.values[last].clone());
        PLPath { breakpoints: bps, values }
    }

    fn common(&self, other: &PLPath) -> (PLPath, PLPath) {
        (self.refine(&other.breakpoints), other.refine(&self.breakpoints))
    }

    pub fn zip_with(&self, other: &PLPath, f: impl Fn(&RatVec, &RatVec) -> RatVec) -> PLPath {
        let (a, b) = self.common(other);
        let values = a.values.iter().zip(&b.values).map(|(x, y)| f(x, y)).collect();
        PLPath { breakpoints: a.breakpoints, values }.simplified()
    }

    pub fn add(&self, other: &PLPath) -> PLPath {
        self.zip_with(other, |x, y| vadd(x, y))
    }

    pub fn sub(&self, other: &PLPath) -> PLPath {
        self.zip_with(other, |x, y| vsub(x, y))
    }

    pub fn neg(&self) -> PLPath {
        self.map_values(|v| vneg(v))
    }

    pub fn add_const(&self, c: &[BigRational]) -> PLPath {
        self.map_values(|v| vadd(v, c))
    }

    pub fn map_values(&self, f: impl Fn(&RatVec) -> RatVec) -> PLPath {
        PLPath { breakpoints: self.breakpoints.clone(), values: self.values.iter().map(f).collect() }
    }

    /// Pointwise image under a linear map.
    pub fn map_linear(&self, m: &RatMatrix) -> PLPath {
        self.map_values(|v| m.mul_vec_q(v))
    }

    /// Drops breakpoints at which the path does not bend.
    pub fn simplified(&self) -> PLPath {
        let mut bps = alloc::vec![self.breakpoints[0].clone()];
        let mut vals = alloc::vec![self.values[0].clone()];
        // merging collinear pieces keeps their common slope, so per-piece slopes suffice
        let slopes: Vec<RatVec> = self
            .pieces()
            .map(|(t0, t1, v0, v1)| vscale(&qdiv(&BigRational::one(), &qsub(t1, t0)), &vsub(v1, v0)))
            .collect();
        for i in 1..self.breakpoints.len() - 1 {
            if slopes[i - 1] != slopes[i] {
                bps.push(self.breakpoints[i].clone());
                vals.push(self.values[i].clone());
            }
        }
        bps.push(self.breakpoints.last().unwrap().clone());
        vals.push(self.end().clone());
        PLPath { breakpoints: bps, values: vals }
    }

    /// Equality as functions on [0,1].
    pub fn same_function(&self, other: &PLPath) -> bool {
        let (a, b) = self.common(other);
        a.values == b.values
    }

    /// If ξ − η is constant, that constant.
    pub fn constant_difference(&self, other: &PLPath) -> Option<RatVec> {
        let d = self.sub(other);
        let c = d.start().clone();
        d.values.iter().all(|v| *v == c).then_some(c)
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|v| v == self.start())
    }

    /// ∫₀¹ ξ(θ) dθ.
    pub fn integral(&self) -> RatVec {
        let mut acc = zero_vec(self.dim());
        let half = rat(1, 2);
        for (t0, t1, v0, v1) in self.pieces() {
            let w = (t1 - t0) * &half;
            acc = vadd(&acc, &vscale(&w, &vadd(v0, v1)));
        }
        acc
    }

    /// ∫_a^b ⟨ξ′(θ), η(θ)⟩ dθ for a form given by its Gram matrix.
    pub fn pairing_integral_on(gram: &RatMatrix, xi: &PLPath, eta: &PLPath, a: &BigRational, b: &BigRational) -> BigRational {
        let (x, y) = xi.common(eta);
        let (x, y) = (x.refine(&[a.clone(), b.clone()]), y.refine(&[a.clone(), b.clone()]));
        let pieces: Vec<usize> =
            (0..x.breakpoints.len() - 1).filter(|&i| &x.breakpoints[i] >= a && &x.breakpoints[i + 1] <= b).collect();
        pairing_fast(gram, &x.values, &y.values, &pieces).unwrap_or_else(|| pairing_exact(gram, &x.values, &y.values, &pieces))
    }

    /// ∫₀¹ ⟨ξ′(θ), η(θ)⟩ dθ.
    pub fn pairing_integral(gram: &RatMatrix, xi: &PLPath, eta: &PLPath) -> BigRational {
        Self::pairing_integral_on(gram, xi, eta, &BigRational::zero(), &BigRational::one())
    }

    /// Restriction of Ξ∘Φ⁻¹ to [0,1], with Ξ the quasi-periodic extension.
    pub fn reparametrized(&self, phi: &PLReparam) -> PLPath {
        let mut ts: Vec<BigRational> = alloc::vec![BigRational::zero(), BigRational::one()];
        let sources: Vec<BigRational> = self.breakpoints.iter().chain(phi.knots_x()).cloned().collect();
        // Φ(s + k) ∈ [0,1] for source points s ∈ [0,1] and integers k
        let lo = phi.inverse_eval(&BigRational::zero()).floor() - BigRational::one();
        let hi = phi.inverse_eval(&BigRational::one()).ceil() + BigRational::one();
        let mut k = lo;
        while k <= hi {
            for s in &sources {
                let y = phi.eval(&qadd(s, &k));
                if y > BigRational::zero() && y < BigRational::one() {
                    ts.push(y);
                }
            }
            k += BigRational::one();
        }
        ts.sort();
        ts.dedup();
        let values = ts.iter().map(|t| self.eval_ext(&phi.inverse_eval(t))).collect();
        PLPath { breakpoints: ts, values }.simplified()
    }

    /// Lattice-translate by an integer multiple of a vector.
    pub fn shifted_by(&self, k: i64, v: &[BigRational]) -> PLPath {
        self.add_const(&vscale(&int_rat(&k.into()), v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::Matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_path(r: &mut ChaCha8Rng, n: usize, big: bool) -> PLPath {
        let k = r.gen_range(2..6);
        let mut ts: Vec<BigRational> = (1..k).map(|_| rat(r.gen_range(1..12), 12)).collect();
        ts.push(BigRational::zero());
        ts.push(BigRational::one());
        ts.sort();
        ts.dedup();
        let scale = BigRational::from_integer(if big { BigInt::from(1) << 100 } else { BigInt::from(1) });
        let vals = ts.iter().map(|_| (0..n).map(|_| rat(r.gen_range(-30..30), r.gen_range(1..13)) * &scale).collect()).collect();
        PLPath::new(ts, vals).unwrap()
    }

    #[test]
    fn integer_pairing_matches_rational_pairing() {
        let mut r = ChaCha8Rng::seed_from_u64(4);
        let gram: RatMatrix = Matrix::from_fn(3, 3, |i, j| rat(if i == j { 4 } else { -1 }, if i + j == 1 { 2 } else { 1 }));
        for big in [false, true] {
            for _ in 0..50 {
                let (x, y) = random_path(&mut r, 3, big).common(&random_path(&mut r, 3, big));
                let pieces: Vec<usize> = (0..x.breakpoints.len() - 1).collect();
                let exact = pairing_exact(&gram, &x.values, &y.values, &pieces);
                match pairing_fast(&gram, &x.values, &y.values, &pieces) {
                    Some(v) => assert_eq!(v, exact),
                    None => assert!(big),
                }
                assert_eq!(PLPath::pairing_integral(&gram, &x, &y), exact);
            }
        }
    }
}
