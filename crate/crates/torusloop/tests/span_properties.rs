use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torusloop::foundation::{integer_kernel, vadd, vfrom_int, vsub, IntMatrix, RatVec};
use torusloop::lattice::{Lattice, RationalSublattice};
use torusloop::loops::random;
use torusloop::span::{builtin_span, finite_quotient, Colour, LatticeSpan, SpanDerived};

fn spans() -> Vec<(&'static str, SpanDerived)> {
    let one = |x: i64| IntMatrix::from_i64(&[vec![x]]);
    let l = |x: i64| Lattice::new(one(x)).unwrap();
    let halves = LatticeSpan::new(l(8), l(2), l(2), one(2), one(2)).unwrap();
    let mut out: Vec<(&'static str, SpanDerived)> = ["rank1-72", "d8pair", "identity:A2", "identity:D4"]
        .into_iter()
        .map(|n| (n, builtin_span(n).unwrap().derive()))
        .collect();
    out.push(("halves", halves.derive()));
    out
}

fn sum_vector(d: &SpanDerived, r: &mut ChaCha8Rng) -> RatVec {
    random::lattice_vector(r, d.sum(), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn commutator_is_independent_of_decomposition(seed: u64) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for (name, d) in spans() {
            for _ in 0..5 {
                let (l, m) = (sum_vector(&d, &mut r), sum_vector(&d, &mut r));
                let b = d.commutator_b(&l, &m).unwrap();
                let (lw, lb) = d.decompose(&l).unwrap();
                prop_assert_eq!(vsub(&lw, &lb), l.clone());
                prop_assert!(d.pre_w().contains(&lw) && d.pre_b().contains(&lb));
                for _ in 0..5 {
                    let nu = random::lattice_vector(&mut r, d.intersection(), 3);
                    prop_assert_eq!(d.commutator_with(&l, &vadd(&lb, &nu), &m), b.clone(), "{}", name);
                }
            }
        }
    }

    #[test]
    fn commutator_is_alternating_with_bounded_order(seed: u64) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for (name, d) in spans() {
            let index = finite_quotient(d.sum(), d.intersection()).unwrap().order();
            for _ in 0..5 {
                let (l, m) = (sum_vector(&d, &mut r), sum_vector(&d, &mut r));
                let b = d.commutator_b(&l, &m).unwrap();
                prop_assert!(d.commutator_b(&l, &l).unwrap().is_zero(), "{}", name);
                prop_assert!((b.clone() + d.commutator_b(&m, &l).unwrap()).is_zero(), "{}", name);
                prop_assert!((BigInt::from(2) * &index % b.order()).is_zero(), "{}", name);
            }
        }
    }

    #[test]
    fn epsilon_is_biadditive_with_commutator_b(seed: u64) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for (name, d) in spans() {
            for _ in 0..5 {
                let (a, a2, m) = (sum_vector(&d, &mut r), sum_vector(&d, &mut r), sum_vector(&d, &mut r));
                let e = |x: &[_], y: &[_]| d.epsilon(x, y).unwrap();
                prop_assert_eq!(e(&vadd(&a, &a2), &m), e(&a, &m) + e(&a2, &m), "{}", name);
                prop_assert_eq!(e(&m, &vadd(&a, &a2)), e(&m, &a) + e(&m, &a2), "{}", name);
                prop_assert_eq!(e(&a, &m) - e(&m, &a), d.commutator_b(&a, &m).unwrap(), "{}", name);
            }
        }
    }
}

#[test]
fn bottom_row_is_exact() {
    for (name, d) in spans() {
        let n = d.rank();
        // integer kernel of (λw, λb) ↦ (ℝπw)⁻¹λw − (ℝπb)⁻¹λb on Λw ⊕ Λb
        let cols: Vec<Vec<BigInt>> = (0..2 * n)
            .map(|j| {
                let unit: RatVec = (0..n).map(|i| if i == j % n { 1.into() } else { 0.into() }).map(|x: BigInt| x.into()).collect();
                let v = if j < n { d.from_colour(Colour::White, &unit) } else { d.from_colour(Colour::Black, &unit) };
                let sign = if j < n { 1 } else { -1 };
                v.iter().map(|x| (x * BigInt::from(sign) * BigInt::from(720720)).to_integer()).collect()
            })
            .collect();
        let kernel = integer_kernel(&IntMatrix::from_cols(&cols));
        let images: Vec<RatVec> = kernel
            .to_rows()
            .iter()
            .map(|k| d.from_colour(Colour::White, &vfrom_int(&k[..n])))
            .collect();
        let image = RationalSublattice::from_generators(d.gram().clone(), &images).unwrap();
        assert_eq!(image, *d.intersection(), "{name}");
        for v in &images {
            let (w, b) = (d.to_colour(Colour::White, v), d.to_colour(Colour::Black, v));
            let back = vsub(&d.from_colour(Colour::White, &w), &d.from_colour(Colour::Black, &b));
            assert!(back.iter().all(|x| x.is_zero()));
        }
    }
}
