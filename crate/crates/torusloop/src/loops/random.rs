//! Seeded random loops, arcs and reparametrizations with small rational data:
//! at most 8 breakpoints, denominators up to 12, windings with entries in [−3,3].

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::foundation::{rat, vadd, vfrom_int, vsub, RatVec};
use crate::lattice::RationalSublattice;

use super::bicoloured::{BicolouredGroup, BicolouredLoop};
use super::path::PLPath;
use super::reparam::PLReparam;
use super::support::Arc;
use super::unicoloured::{LoopGroup, PLLoop};

pub const MAX_DENOM: i64 = 12;
pub const MAX_WINDING: i64 = 3;

pub fn rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> BigRational {
    let d = rng.gen_range(1..=MAX_DENOM);
    rat(rng.gen_range(-bound * d..=bound * d), d)
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> RatVec {
    (0..n).map(|_| rational(rng, bound)).collect()
}

pub fn int_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> Vec<BigInt> {
    (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()
}

pub fn lattice_vector<R: Rng + ?Sized>(rng: &mut R, l: &RationalSublattice, bound: i64) -> RatVec {
    l.from_coords(&vfrom_int(&int_vector(rng, l.rank(), bound)))
}

/// Up to `max` distinct sorted points strictly inside (lo, hi).
pub fn times<R: Rng + ?Sized>(rng: &mut R, lo: &BigRational, hi: &BigRational, max: usize) -> Vec<BigRational> {
    let k = rng.gen_range(0..=max);
    let mut out: Vec<BigRational> = (0..k)
        .map(|_| {
            let d = rng.gen_range(2..=MAX_DENOM);
            let j = rng.gen_range(1..d);
            lo + (hi - lo) * rat(j, d)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn path(points: Vec<(BigRational, RatVec)>) -> PLPath {
    let (t, v): (Vec<_>, Vec<_>) = points.into_iter().unzip();
    PLPath::new(t, v).expect("increasing breakpoints").simplified()
}

/// A path from `start` to `end` with random interior values.
pub fn path_between<R: Rng + ?Sized>(rng: &mut R, start: RatVec, end: RatVec) -> PLPath {
    let n = start.len();
    let mut pts = alloc::vec![(BigRational::zero(), start)];
    for t in times(rng, &BigRational::zero(), &BigRational::one(), 6) {
        pts.push((t, vector(rng, n, 2)));
    }
    pts.push((BigRational::one(), end));
    path(pts)
}

pub fn unicoloured<R: Rng + ?Sized>(rng: &mut R, group: &LoopGroup) -> PLLoop {
    let n = group.rank();
    let start = vector(rng, n, 2);
    let end = vadd(&start, &vfrom_int(&int_vector(rng, n, MAX_WINDING)));
    group.make_loop(path_between(rng, start, end)).expect("integral winding")
}

/// A closed arc with endpoints k/24 (k ≠ 0, 12), so that it never ends at q or p.
pub fn arc<R: Rng + ?Sized>(rng: &mut R) -> Arc {
    let pick = |rng: &mut R| loop {
        let k = rng.gen_range(1..24);
        if k != 12 {
            break k;
        }
    };
    let (a, b) = loop {
        let (a, b) = (pick(rng), pick(rng));
        if a != b {
            break (a, b);
        }
    };
    Arc::new(rat(a, 24), rat(b, 24))
}

/// Two disjoint arcs; with `bicoloured`, each is a bicoloured interval.
pub fn disjoint_arcs<R: Rng + ?Sized>(rng: &mut R, bicoloured: bool) -> (Arc, Arc) {
    loop {
        let mut ks: Vec<i64> = Vec::new();
        while ks.len() < 4 {
            let k = rng.gen_range(1..24);
            if k != 12 && !ks.contains(&k) {
                ks.push(k);
            }
        }
        ks.sort();
        let x: Vec<BigRational> = ks.iter().map(|k| rat(*k, 24)).collect();
        let (i, j) = if rng.gen_bool(0.5) {
            (Arc::new(x[0].clone(), x[1].clone()), Arc::new(x[2].clone(), x[3].clone()))
        } else {
            (Arc::new(x[1].clone(), x[2].clone()), Arc::new(x[3].clone(), x[0].clone()))
        };
        let (i, j) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
        if !bicoloured || i.is_bicoloured_interval() && j.is_bicoloured_interval() {
            return (i, j);
        }
    }
}

/// Interior sample points of an arc, split at 0 when it wraps.
fn arc_pieces<R: Rng + ?Sized>(rng: &mut R, a: &Arc, n: usize) -> (Vec<(BigRational, RatVec)>, Vec<(BigRational, RatVec)>) {
    let (zero, one) = (BigRational::zero(), BigRational::one());
    if a.wraps() {
        let head = times(rng, &zero, &a.end, 3).into_iter().map(|t| (t, vector(rng, n, 2))).collect();
        let tail = times(rng, &a.start, &one, 3).into_iter().map(|t| (t, vector(rng, n, 2))).collect();
        (head, tail)
    } else {
        let mid = times(rng, &a.start, &a.end, 6).into_iter().map(|t| (t, vector(rng, n, 2))).collect();
        (mid, Vec::new())
    }
}

/// A loop whose lift is a constant lattice vector outside the arc, in Λ-coordinates.
pub fn unicoloured_in_arc<R: Rng + ?Sized>(rng: &mut R, group: &LoopGroup, a: &Arc) -> PLLoop {
    let n = group.rank();
    let (zero, one) = (BigRational::zero(), BigRational::one());
    let (first, second) = arc_pieces(rng, a, n);
    let mut pts = Vec::new();
    if a.wraps() {
        let start = vector(rng, n, 2);
        let c = vfrom_int(&int_vector(rng, n, 2));
        let end = vadd(&start, &vfrom_int(&int_vector(rng, n, MAX_WINDING)));
        pts.push((zero, start));
        pts.extend(first);
        pts.push((a.end.clone(), c.clone()));
        pts.push((a.start.clone(), c));
        pts.extend(second);
        pts.push((one, end));
    } else {
        let c0 = vfrom_int(&int_vector(rng, n, 2));
        let c1 = vadd(&c0, &vfrom_int(&int_vector(rng, n, MAX_WINDING)));
        pts.push((zero, c0.clone()));
        pts.push((a.start.clone(), c0));
        pts.extend(first);
        pts.push((a.end.clone(), c1.clone()));
        pts.push((one, c1));
    }
    group.make_loop(path(pts)).expect("integral winding")
}

pub fn bicoloured<R: Rng + ?Sized>(rng: &mut R, group: &BicolouredGroup) -> BicolouredLoop {
    let d = group.derived();
    let mq = vector(rng, group.rank(), 2);
    let start = vsub(&mq, &lattice_vector(rng, d.pre_b(), 2));
    let end = vsub(&mq, &lattice_vector(rng, d.pre_w(), 2));
    group.make_loop(path_between(rng, start, end), mq).expect("glued lift")
}

/// A bicoloured loop whose white and black projections are trivial outside a bicoloured interval.
pub fn bicoloured_in_arc<R: Rng + ?Sized>(rng: &mut R, group: &BicolouredGroup, a: &Arc) -> BicolouredLoop {
    let d = group.derived();
    let n = group.rank();
    let (zero, one, p) = (BigRational::zero(), BigRational::one(), rat(1, 2));
    let (first, second) = arc_pieces(rng, a, n);
    let mut pts = Vec::new();
    let mq;
    if a.wraps() {
        // the constant part [b, a] contains p, so it must lie in both preimages
        mq = vector(rng, n, 2);
        let nu = lattice_vector(rng, d.intersection(), 2);
        pts.push((zero, vsub(&mq, &lattice_vector(rng, d.pre_b(), 2))));
        pts.extend(first);
        pts.push((a.end.clone(), nu.clone()));
        pts.push((a.start.clone(), nu));
        pts.extend(second);
        pts.push((one, vsub(&mq, &lattice_vector(rng, d.pre_w(), 2))));
    } else {
        mq = lattice_vector(rng, d.intersection(), 2);
        let before = if a.start <= p { d.pre_b() } else { d.intersection() };
        let after = if a.end >= p { d.pre_w() } else { d.intersection() };
        let nu0 = lattice_vector(rng, before, 2);
        let nu1 = lattice_vector(rng, after, 2);
        pts.push((zero, nu0.clone()));
        pts.push((a.start.clone(), nu0));
        pts.extend(first);
        pts.push((a.end.clone(), nu1.clone()));
        pts.push((one, nu1));
    }
    group.make_loop(path(pts), mq).expect("glued lift")
}

/// A class in (Λw⊕Λb)/Γ given by colour-coordinate representatives.
pub fn class<R: Rng + ?Sized>(rng: &mut R, group: &BicolouredGroup) -> (Vec<BigInt>, Vec<BigInt>) {
    let n = group.rank();
    (int_vector(rng, n, 3), int_vector(rng, n, 3))
}

fn increasing<R: Rng + ?Sized>(rng: &mut R, lo: &BigRational, hi: &BigRational, k: usize) -> Vec<BigRational> {
    let w: Vec<i64> = (0..=k).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = w.iter().sum();
    let mut acc = 0;
    w[..k]
        .iter()
        .map(|x| {
            acc += x;
            lo + (hi - lo) * rat(acc, total)
        })
        .collect()
}

pub fn reparam<R: Rng + ?Sized>(rng: &mut R, cover: u64) -> PLReparam {
    let (zero, one) = (BigRational::zero(), BigRational::one());
    let mut xs = alloc::vec![zero.clone()];
    xs.extend(times(rng, &zero, &one, 6));
    xs.push(one.clone());
    let y0 = rational(rng, 1);
    let y1 = &y0 + &one;
    let mut ys = alloc::vec![y0.clone()];
    ys.extend(increasing(rng, &y0, &y1, xs.len() - 2));
    ys.push(y1);
    PLReparam::new(xs, ys, cover).expect("increasing knots")
}

/// A reparametrization equal to the identity outside the arc.
pub fn reparam_in_arc<R: Rng + ?Sized>(rng: &mut R, a: &Arc, cover: u64) -> PLReparam {
    let one = BigRational::one();
    let lo = a.start.clone();
    let hi = if a.wraps() { &a.end + &one } else { a.end.clone() };
    let k = rng.gen_range(1..=3);
    let inner_x = increasing(rng, &lo, &hi, k);
    let inner_y = increasing(rng, &lo, &hi, k);
    let mut xs = alloc::vec![lo.clone()];
    let mut ys = alloc::vec![lo.clone()];
    xs.extend(inner_x);
    ys.extend(inner_y);
    xs.push(hi.clone());
    ys.push(hi);
    xs.push(&lo + &one);
    ys.push(&lo + &one);
    PLReparam::on_window(xs, ys, cover).expect("increasing knots")
}
