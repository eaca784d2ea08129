use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::foundation::{qadd, qdiv, qfloor, qmul, qsub};

use super::support::CircleSet;
use super::LoopError;

/// A PL lift Φ: ℝ → ℝ of an orientation preserving homeomorphism of the circle,
/// Φ(θ+1) = Φ(θ)+1, given by knots (x_i, Φ(x_i)) with x running from 0 to 1.
/// `cover` is the n of the n-fold cover: Φ and Φ+n are the same element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLReparam {
    xs: Vec<BigRational>,
    ys: Vec<BigRational>,
    cover: u64,
}

fn interpolate(xs: &[BigRational], ys: &[BigRational], t: &BigRational) -> BigRational {
    let i = match xs.binary_search(t) {
        Ok(i) => return ys[i].clone(),
        Err(i) => i,
    };
    let s = qdiv(&qsub(t, &xs[i - 1]), &qsub(&xs[i], &xs[i - 1]));
    qadd(&ys[i - 1], &qmul(&s, &qsub(&ys[i], &ys[i - 1])))
}

impl PLReparam {
    pub fn new(xs: Vec<BigRational>, ys: Vec<BigRational>, cover: u64) -> Result<Self, LoopError> {
        if xs.len() < 2 || xs.len() != ys.len() || cover == 0 {
            return Err(LoopError::BadReparam("need matching knots and a positive cover"));
        }
        if !xs[0].is_zero() || !xs.last().unwrap().is_one() {
            return Err(LoopError::BadReparam("knots must run from 0 to 1"));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) || ys.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LoopError::BadReparam("knots must be strictly increasing"));
        }
        if *ys.last().unwrap() != &ys[0] + BigRational::one() {
            return Err(LoopError::BadReparam("Φ(1) must equal Φ(0) + 1"));
        }
        Ok(PLReparam { xs, ys, cover })
    }

    /// Knots on an arbitrary window [x₀, x₀+1].
    pub fn on_window(xs: Vec<BigRational>, ys: Vec<BigRational>, cover: u64) -> Result<Self, LoopError> {
        if xs.len() < 2 || xs.len() != ys.len() || *xs.last().unwrap() != &xs[0] + BigRational::one() {
            return Err(LoopError::BadReparam("window knots must span one period"));
        }
        let raw = |t: &BigRational| {
            let k = (t - &xs[0]).floor();
            interpolate(&xs, &ys, &(t - &k)) + k
        };
        let mut pts: Vec<BigRational> = xs.iter().map(|x| x - x.floor()).collect();
        pts.push(BigRational::zero());
        pts.push(BigRational::one());
        pts.sort();
        pts.dedup();
        let vals = pts.iter().map(raw).collect();
        Self::new(pts, vals, cover)
    }

    fn from_function(points: Vec<BigRational>, f: impl Fn(&BigRational) -> BigRational, cover: u64) -> Self {
        let mut pts: Vec<BigRational> =
            points.into_iter().filter(|t| *t >= BigRational::zero() && *t <= BigRational::one()).collect();
        pts.push(BigRational::zero());
        pts.push(BigRational::one());
        pts.sort();
        pts.dedup();
        let ys = pts.iter().map(f).collect();
        PLReparam { xs: pts, ys, cover }.simplified()
    }

    fn simplified(self) -> Self {
        let (xs, ys) = (&self.xs, &self.ys);
        let mut kx = alloc::vec![xs[0].clone()];
        let mut ky = alloc::vec![ys[0].clone()];
        for i in 1..xs.len() - 1 {
            let a = qdiv(&qsub(&ys[i], ky.last().unwrap()), &qsub(&xs[i], kx.last().unwrap()));
            let b = qdiv(&qsub(&ys[i + 1], &ys[i]), &qsub(&xs[i + 1], &xs[i]));
            if a != b {
                kx.push(xs[i].clone());
                ky.push(ys[i].clone());
            }
        }
        kx.push(xs.last().unwrap().clone());
        ky.push(ys.last().unwrap().clone());
        PLReparam { xs: kx, ys: ky, cover: self.cover }
    }

    pub fn identity(cover: u64) -> Self {
        Self::rotation(BigRational::zero(), cover)
    }

    /// θ ↦ θ + t.
    pub fn rotation(t: BigRational, cover: u64) -> Self {
        PLReparam {
            xs: alloc::vec![BigRational::zero(), BigRational::one()],
            ys: alloc::vec![t.clone(), t + BigRational::one()],
            cover,
        }
    }

    pub fn cover(&self) -> u64 {
        self.cover
    }

    pub fn with_cover(mut self, cover: u64) -> Self {
        self.cover = cover;
        self
    }

    pub fn knots_x(&self) -> &[BigRational] {
        &self.xs
    }

    pub fn knots_y(&self) -> &[BigRational] {
        &self.ys
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let k = qfloor(t);
        qadd(&interpolate(&self.xs, &self.ys, &qsub(t, &k)), &k)
    }

    pub fn inverse_eval(&self, y: &BigRational) -> BigRational {
        let k = qfloor(&qsub(y, &self.ys[0]));
        qadd(&interpolate(&self.ys, &self.xs, &qsub(y, &k)), &k)
    }

    /// Candidate knots of Φ⁻¹ in [0,1].
    fn image_points(&self, sources: &[BigRational]) -> Vec<BigRational> {
        let lo = self.inverse_eval(&BigRational::zero()).floor() - BigRational::one();
        let hi = self.inverse_eval(&BigRational::one()).ceil() + BigRational::one();
        let mut out = Vec::new();
        let mut k = lo;
        while k <= hi {
            out.extend(sources.iter().map(|s| self.eval(&qadd(s, &k))));
            k += BigRational::one();
        }
        out
    }

    pub fn inverse(&self) -> Self {
        let pts = self.image_points(&self.xs);
        Self::from_function(pts, |y| self.inverse_eval(y), self.cover)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &PLReparam) -> Result<Self, LoopError> {
        if self.cover != other.cover {
            return Err(LoopError::Mismatch);
        }
        let inv = other.inverse();
        let mut pts: Vec<BigRational> = other.xs.clone();
        pts.extend(inv.image_points(&self.xs));
        Ok(Self::from_function(pts, |t| self.eval(&other.eval(t)), self.cover))
    }

    /// Φ + k.
    pub fn translated(&self, k: i64) -> Self {
        let k = BigRational::from_integer(k.into());
        PLReparam { xs: self.xs.clone(), ys: self.ys.iter().map(|y| y + &k).collect(), cover: self.cover }
    }

    /// Equality in the n-fold cover: Φ − Ψ is a constant multiple of n.
    pub fn same_element(&self, other: &PLReparam) -> bool {
        if self.cover != other.cover {
            return false;
        }
        let mut pts = self.xs.clone();
        pts.extend(other.xs.iter().cloned());
        let d = self.eval(&BigRational::zero()) - other.eval(&BigRational::zero());
        let n = BigRational::from_integer(self.cover.into());
        (&d / &n).is_integer() && pts.iter().all(|t| self.eval(t) - other.eval(t) == d)
    }

    /// Closure of the set where the induced circle map moves points.
    pub fn support(&self) -> CircleSet {
        let shift = |i: usize| &self.ys[i] - &self.xs[i];
        let fixed = |i: usize| shift(i).is_integer() && shift(i) == shift(i + 1);
        CircleSet::from_pieces(
            (0..self.xs.len() - 1).filter(|&i| !fixed(i)).map(|i| (self.xs[i].clone(), self.xs[i + 1].clone())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::rat;

    fn bump() -> PLReparam {
        PLReparam::new(
            alloc::vec![rat(0, 1), rat(1, 8), rat(1, 4), rat(1, 1)],
            alloc::vec![rat(0, 1), rat(3, 16), rat(1, 4), rat(1, 1)],
            1,
        )
        .unwrap()
    }

    #[test]
    fn inverse_and_compose() {
        let phi = bump().compose(&PLReparam::rotation(rat(1, 3), 1)).unwrap();
        let id = phi.compose(&phi.inverse()).unwrap();
        assert!(id.same_element(&PLReparam::identity(1)));
        for t in [rat(-3, 2), rat(0, 1), rat(1, 5), rat(7, 3)] {
            assert_eq!(phi.inverse_eval(&phi.eval(&t)), t);
        }
    }

    #[test]
    fn window_normalisation() {
        let w = PLReparam::on_window(
            alloc::vec![rat(-1, 8), rat(0, 1), rat(1, 8), rat(7, 8)],
            alloc::vec![rat(-1, 8), rat(1, 16), rat(1, 8), rat(7, 8)],
            1,
        )
        .unwrap();
        assert_eq!(w.eval(&rat(0, 1)), rat(1, 16));
        assert_eq!(w.eval(&rat(3, 4)), rat(3, 4));
        assert_eq!(w.eval(&rat(15, 16)), rat(31, 32));
        let s = w.support();
        assert_eq!(s.arcs().len(), 1);
        assert!(s.contains(&rat(0, 1)) && !s.contains(&rat(1, 2)));
    }

    #[test]
    fn supports() {
        assert!(PLReparam::identity(1).support().is_empty());
        assert!(PLReparam::rotation(rat(2, 1), 1).support().is_empty());
        assert!(PLReparam::rotation(rat(1, 2), 1).support().contains(&rat(1, 3)));
        let s = bump().support();
        assert_eq!(s.arcs().len(), 1);
        assert_eq!((s.arcs()[0].start.clone(), s.arcs()[0].end.clone()), (rat(0, 1), rat(1, 4)));
    }

    #[test]
    fn cover_classes() {
        let phi = bump().with_cover(3);
        assert!(phi.same_element(&phi.translated(3)));
        assert!(!phi.same_element(&phi.translated(1)));
    }
}
