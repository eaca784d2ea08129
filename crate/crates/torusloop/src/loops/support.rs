use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::foundation::rat;

/// A closed arc of the circle ℝ/ℤ from `start` to `end` in the positive direction.
/// `start > end` means the arc passes through 0; (0, 1) is the whole circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub start: BigRational,
    pub end: BigRational,
}

fn unit_rep(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl Arc {
    pub fn new(start: BigRational, end: BigRational) -> Self {
        Arc { start, end }
    }

    pub fn is_full(&self) -> bool {
        self.start.is_zero() && self.end.is_one()
    }

    pub fn wraps(&self) -> bool {
        self.start > self.end
    }

    pub fn length(&self) -> BigRational {
        if self.is_full() {
            return BigRational::one();
        }
        let l = &self.end - &self.start;
        if l < BigRational::zero() {
            l + BigRational::one()
        } else {
            l
        }
    }

    /// Position of a point counted from `start`, in [0,1).
    fn offset(&self, x: &BigRational) -> BigRational {
        unit_rep(&(x - &self.start))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.is_full() || self.offset(x) <= self.length()
    }

    pub fn contains_arc(&self, other: &Arc) -> bool {
        if self.is_full() {
            return true;
        }
        if other.is_full() {
            return false;
        }
        self.offset(&other.start) + other.length() <= self.length()
    }

    pub fn meets(&self, other: &Arc) -> bool {
        self.contains(&other.start) || other.contains(&self.start)
    }

    /// An arc that contains neither both of q = 0 and p = 1/2, nor one of them as an endpoint.
    pub fn is_bicoloured_interval(&self) -> bool {
        let (q, p) = (BigRational::zero(), rat(1, 2));
        if self.is_full() || self.contains(&q) && self.contains(&p) {
            return false;
        }
        let ends = [unit_rep(&self.start), unit_rep(&self.end)];
        !ends.contains(&q) && !ends.contains(&p)
    }
}

/// A finite union of closed arcs; supports of loops and reparametrizations.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CircleSet {
    arcs: Vec<Arc>,
}

impl CircleSet {
    pub fn empty() -> Self {
        CircleSet { arcs: Vec::new() }
    }

    /// The closure of a union of pieces [t₀,t₁] ⊆ [0,1], given in increasing order.
    pub fn from_pieces(pieces: impl IntoIterator<Item = (BigRational, BigRational)>) -> Self {
        let mut merged: Vec<(BigRational, BigRational)> = Vec::new();
        for (a, b) in pieces {
            match merged.last_mut() {
                Some(last) if last.1 >= a => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        if merged.len() >= 2 && merged[0].0.is_zero() && merged.last().unwrap().1.is_one() {
            let first = merged.remove(0);
            let last = merged.last_mut().unwrap();
            last.1 = first.1;
        }
        CircleSet { arcs: merged.into_iter().map(|(a, b)| Arc::new(a, b)).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.arcs.iter().any(|a| a.contains(x))
    }

    pub fn within(&self, arc: &Arc) -> bool {
        self.arcs.iter().all(|a| arc.contains_arc(a))
    }

    pub fn meets(&self, other: &CircleSet) -> bool {
        self.arcs.iter().any(|a| other.arcs.iter().any(|b| a.meets(b)))
    }

    /// Smallest arcs I ⊇ self and J ⊇ other with I ∩ J = ∅, if they exist.
    pub fn separating_arcs(&self, other: &CircleSet) -> Option<(Arc, Arc)> {
        if self.is_empty() || other.is_empty() || self.meets(other) {
            return None;
        }
        let mut all: Vec<(bool, &Arc)> =
            self.arcs.iter().map(|a| (true, a)).chain(other.arcs.iter().map(|a| (false, a))).collect();
        all.sort_by(|x, y| unit_rep(&x.1.start).cmp(&unit_rep(&y.1.start)));
        let m = all.len();
        let changes = (0..m).filter(|&i| all[i].0 != all[(i + 1) % m].0).count();
        if changes > 2 {
            return None;
        }
        let hull = |label: bool| {
            let first = (0..m).find(|&i| all[i].0 == label && all[(i + m - 1) % m].0 != label).unwrap();
            let mut last = first;
            while all[(last + 1) % m].0 == label {
                last = (last + 1) % m;
            }
            Arc::new(all[first].1.start.clone(), all[last].1.end.clone())
        };
        Some((hull(true), hull(false)))
    }

    /// Whether the two sets lie in disjoint intervals of the circle.
    pub fn separated(&self, other: &CircleSet) -> bool {
        self.is_empty() || other.is_empty() || self.separating_arcs(other).is_some()
    }

    /// Whether the two sets lie in disjoint bicoloured intervals.
    pub fn bicoloured_separated(&self, other: &CircleSet) -> bool {
        if self.is_empty() || other.is_empty() {
            return true;
        }
        match self.separating_arcs(other) {
            Some((i, j)) => fits_bicoloured(&i) && fits_bicoloured(&j),
            None => false,
        }
    }
}

/// The hull can be widened into the surrounding gap, so p or q on its boundary is allowed.
fn fits_bicoloured(a: &Arc) -> bool {
    let (q, p) = (BigRational::zero(), rat(1, 2));
    !(a.contains(&q) && a.contains(&p))
}
