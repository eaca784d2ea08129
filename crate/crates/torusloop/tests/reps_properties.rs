use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torusloop::foundation::{rat, IntMatrix};
use torusloop::lattice::{parse_builtin, Lattice};
use torusloop::loops::random;
use torusloop::reps::{rotation_cover, Label, LabelSpace};
use torusloop::span::{builtin_span, LatticeSpan};

const LATTICES: [&str; 8] = ["A1", "A2", "A3", "D4", "D5", "E6", "E7", "E8"];

fn halves() -> LabelSpace {
    let one = |x: i64| IntMatrix::from_i64(&[vec![x]]);
    let l = |x: i64| Lattice::new(one(x)).unwrap();
    let s = LatticeSpan::new(l(8), l(2), l(2), one(2), one(2)).unwrap();
    LabelSpace::bicoloured(&s.derive()).unwrap()
}

fn spaces() -> Vec<(String, LabelSpace)> {
    let mut out: Vec<(String, LabelSpace)> = LATTICES
        .iter()
        .map(|n| (n.to_string(), LabelSpace::unicoloured(&parse_builtin(n).unwrap()).unwrap()))
        .collect();
    for n in ["rank1-72", "d8pair", "identity:A2", "identity:D4"] {
        out.push((n.to_string(), LabelSpace::bicoloured(&builtin_span(n).unwrap().derive()).unwrap()));
    }
    out.push(("halves".to_string(), halves()));
    out
}

fn random_label<R: Rng>(r: &mut R, s: &LabelSpace) -> Label {
    let g = s.weight_group();
    let x: Vec<BigInt> = g.invariant_factors().iter().map(|_| BigInt::from(r.gen_range(0..24))).collect();
    let lambda = random::lattice_vector(r, s.windings(), 2);
    let l: Vec<_> = g.lift(&x).iter().zip(&lambda).map(|(a, b)| a + b).collect();
    let chi = s
        .character_group()
        .map(|c| c.invariant_factors().iter().map(|_| BigInt::from(r.gen_range(0..4))).collect());
    s.label(chi, l).unwrap()
}

#[test]
fn unicoloured_count_is_discriminant() {
    for n in LATTICES.iter().chain(&["A2+A2", "A8", "D8"]) {
        let l = parse_builtin(n).unwrap();
        let s = LabelSpace::unicoloured(&l).unwrap();
        assert_eq!(BigInt::from(s.classify().len()), l.det().abs(), "{n}");
    }
}

#[test]
fn bicoloured_count_is_product_of_quotients() {
    for (name, s) in spaces() {
        if let Some(c) = s.character_group() {
            assert_eq!(BigInt::from(s.classify().len()), c.order() * s.weight_group().order(), "{name}");
        }
    }
}

#[test]
fn classification_is_exhaustive_and_irredundant() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for (name, s) in spaces() {
        let reps = s.classify();
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                assert!(!s.isomorphic(a, b).unwrap(), "{name}");
            }
        }
        for _ in 0..50 {
            let x = random_label(&mut r, &s);
            assert_eq!(reps.iter().filter(|a| s.isomorphic(a, &x).unwrap()).count(), 1, "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn isomorphism_is_an_equivalence(seed: u64) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for (name, s) in spaces() {
            let labels: Vec<Label> = (0..50).map(|_| random_label(&mut r, &s)).collect();
            for a in &labels {
                prop_assert!(s.isomorphic(a, a).unwrap());
            }
            for (a, b) in labels.iter().zip(labels.iter().skip(1)) {
                prop_assert_eq!(s.isomorphic(a, b).unwrap(), s.isomorphic(b, a).unwrap(), "{}", name);
            }
            for w in labels.windows(3) {
                if s.isomorphic(&w[0], &w[1]).unwrap() && s.isomorphic(&w[1], &w[2]).unwrap() {
                    prop_assert!(s.isomorphic(&w[0], &w[2]).unwrap(), "{}", name);
                }
            }
        }
    }

    #[test]
    fn covers_are_minimal(seed: u64) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for (name, s) in spaces() {
            for _ in 0..20 {
                let a = random_label(&mut r, &s);
                let norm = s.norm(&a.l);
                let even = |m: u64| (&norm * BigInt::from(m) / BigInt::from(2)).is_integer();
                prop_assert!(a.m >= s.min_cover() && even(a.m), "{}", name);
                prop_assert!(a.m == 1 || a.m - 1 < s.min_cover() || !even(a.m - 1), "{}", name);
                prop_assert_eq!(rotation_cover(&norm, s.min_cover()), a.m);
            }
        }
    }

    #[test]
    fn conjugate_shift_stays_in_class(seed: u64) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for (name, s) in spaces() {
            for _ in 0..10 {
                let a = random_label(&mut r, &s);
                let lambda = random::lattice_vector(&mut r, s.windings(), 3);
                let b = s.conjugate_shift(&a, &lambda).unwrap();
                prop_assert!(s.isomorphic(&a, &b).unwrap(), "{}", name);
                if s.rank() <= 4 {
                    prop_assert_eq!(s.character(&a, 2).unwrap(), s.character(&b, 2).unwrap());
                }
            }
        }
    }
}

#[test]
fn bicoloured_character_ignores_chi() {
    let s = halves();
    assert_eq!(s.character_group().unwrap().order(), BigInt::from(2));
    let labels = s.classify();
    assert_eq!(labels.len(), 8);
    for a in &labels {
        for b in &labels {
            if a.l == b.l {
                assert_eq!(s.character(a, 4).unwrap(), s.character(b, 4).unwrap());
            }
        }
    }
}

#[test]
fn restriction_heads_reproduce_characters() {
    for (name, s) in spaces() {
        let order: u64 = if s.rank() > 6 { 1 } else { 3 };
        for a in s.classify() {
            let terms = s.restriction(&a, &rat(order as i64, 1)).unwrap();
            for t in &terms {
                assert!(s.norm(&t.label.l) <= rat(2 * order as i64, 1));
            }
            let sum = torusloop::reps::sum_heads(&terms).unwrap();
            let ch = s.character(&a, order).unwrap();
            let top = sum.top().unwrap().min(ch.top().unwrap());
            assert_eq!(top, rat(order as i64, 1) - rat(s.rank() as i64, 24), "{name}");
            assert_eq!(sum.truncate(&top).terms(), ch.truncate(&top).terms(), "{name}");
        }
    }
}
