use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use torusloop::foundation::{rat, vfrom_i64};
use torusloop::lattice::{parse_builtin, Lattice};
use torusloop::series::{character_unicoloured, eta_inverse_power, theta_series};

/// Number of multisets of coloured parts (j, c), 1 ≤ j, c < colours, summing to n.
fn coloured_partitions(n: usize, colours: usize) -> u64 {
    fn go(n: usize, item: usize, items: &[usize]) -> u64 {
        if n == 0 {
            return 1;
        }
        if item == items.len() {
            return 0;
        }
        let part = items[item];
        let mut total = 0;
        let mut used = 0;
        while used <= n {
            total += go(n - used, item + 1, items);
            used += part;
        }
        total
    }
    let items: Vec<usize> = (1..=n).flat_map(|j| std::iter::repeat(j).take(colours)).collect();
    go(n, 0, &items)
}

/// Euler's pentagonal recurrence p(n) = Σ_k (−1)^{k+1} (p(n − k(3k−1)/2) + p(n − k(3k+1)/2)).
fn pentagonal(order: usize) -> Vec<i64> {
    let mut p = vec![0i64; order + 1];
    p[0] = 1;
    for n in 1..=order {
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            p[n] += sign * p[n - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= n {
                p[n] += sign * p[n - g2];
            }
            k += 1;
        }
    }
    p
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Truncated product of the binomial series (1 − q^j)^{−d} = Σ_m C(m+d−1, d−1) q^{jm}.
fn eta_by_products(d: u64, order: usize) -> Vec<u64> {
    let mut acc = vec![0u64; order + 1];
    acc[0] = 1;
    if d == 0 {
        return acc;
    }
    for j in 1..=order {
        let mut factor = vec![0u64; order + 1];
        for m in 0..=order / j {
            factor[j * m] = binomial(m as u64 + d - 1, d - 1);
        }
        let mut next = vec![0u64; order + 1];
        for (a, x) in acc.iter().enumerate() {
            for (b, y) in factor.iter().enumerate().take(order + 1 - a) {
                next[a + b] += x * y;
            }
        }
        acc = next;
    }
    acc
}

/// Counts lattice points of l + Λ by norm with a plain box search; the box
/// half-width per coordinate comes from |x_i|² ≤ ⟨v,v⟩·(G⁻¹)_ii.
fn theta_by_box(l: &Lattice, shift: &[BigRational], max_exp: i64) -> Vec<(BigRational, u64)> {
    let n = l.rank();
    let g = l.gram_rat();
    let inv = g.inverse().unwrap();
    let radius: Vec<i64> = (0..n)
        .map(|i| {
            let r2 = inv.get(i, i) * rat(2 * max_exp, 1);
            let r = (r2.to_integer().to_string().parse::<f64>().unwrap() + 1.0).sqrt().ceil() as i64;
            r + 2
        })
        .collect();
    let den: i64 = shift.iter().map(|s| s.denom().to_string().parse::<i64>().unwrap()).fold(1, num_integer::lcm);
    let num: Vec<i64> = shift.iter().map(|s| (s * rat(den, 1)).to_integer().to_string().parse().unwrap()).collect();
    let gi: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| l.gram().get(i, j).to_string().parse().unwrap()).collect()).collect();
    let mut counts = std::collections::BTreeMap::new();
    let mut x: Vec<i64> = radius.iter().map(|r| -r).collect();
    loop {
        let v: Vec<i64> = x.iter().zip(&num).map(|(a, s)| a * den + s).collect();
        let mut q = 0i64;
        for i in 0..n {
            for j in 0..n {
                q += v[i] * gi[i][j] * v[j];
            }
        }
        let e = rat(q, 2 * den * den);
        if e <= rat(max_exp, 1) {
            *counts.entry(e).or_insert(0u64) += 1;
        }
        let mut i = 0;
        while i < n {
            x[i] += 1;
            if x[i] <= radius[i] {
                break;
            }
            x[i] = -radius[i];
            i += 1;
        }
        if i == n {
            break;
        }
    }
    counts.into_iter().collect()
}

/// θ_{E8} up to q² from the coordinate model ℤ^8 ∪ (ℤ+½)^8 with even coordinate sum.
fn e8_theta_by_coordinates() -> [u64; 3] {
    let mut out = [0u64; 3];
    // doubled coordinates: all even or all odd, |y_i| ≤ 4, Σ y_i ≡ 0 mod 4, ⟨v,v⟩ = Σ y_i²/4
    let mut y = [-4i64; 8];
    loop {
        let parity = y[0].rem_euclid(2);
        if y.iter().all(|v| v.rem_euclid(2) == parity) && y.iter().sum::<i64>().rem_euclid(4) == 0 {
            let q: i64 = y.iter().map(|v| v * v).sum();
            if q % 8 == 0 && q / 8 <= 2 {
                out[(q / 8) as usize] += 1;
            }
        }
        let mut i = 0;
        while i < 8 {
            y[i] += 1;
            if y[i] <= 4 {
                break;
            }
            y[i] = -4;
            i += 1;
        }
        if i == 8 {
            break;
        }
    }
    out
}

#[test]
fn eta_matches_coloured_partitions() {
    for d in 0..=4u32 {
        let s = eta_inverse_power(d, 12);
        for n in 0..=12 {
            assert_eq!(s.coeffs()[n], BigInt::from(coloured_partitions(n, d as usize)), "d={d} n={n}");
        }
    }
}

#[test]
fn eta_matches_pentagonal_and_products() {
    let p = pentagonal(30);
    let s = eta_inverse_power(1, 30);
    for n in 0..=30 {
        assert_eq!(s.coeffs()[n], BigInt::from(p[n]));
    }
    for d in 0..=8u64 {
        let s = eta_inverse_power(d as u32, 10);
        let o = eta_by_products(d, 10);
        for n in 0..=10 {
            assert_eq!(s.coeffs()[n], BigInt::from(o[n]), "d={d} n={n}");
        }
    }
}

#[test]
fn theta_matches_box_search() {
    let cases: Vec<(&str, Vec<BigRational>)> = vec![
        ("A1", vec![rat(0, 1)]),
        ("A1", vec![rat(1, 2)]),
        ("A2", vec![rat(1, 3), rat(2, 3)]),
        ("D4", vec![rat(1, 2), rat(0, 1), rat(1, 2), rat(0, 1)]),
        ("A1+A1", vec![rat(1, 2), rat(0, 1)]),
    ];
    for (name, shift) in cases {
        let l = parse_builtin(name).unwrap();
        let th = theta_series(&l.as_sublattice(), &shift, &rat(3, 1)).unwrap();
        let oracle = theta_by_box(&l, &shift, 3);
        let got: Vec<(BigRational, u64)> =
            th.terms().into_iter().map(|(e, c)| (e, u64::try_from(c).unwrap())).collect();
        assert_eq!(got, oracle, "{name}");
    }
}

#[test]
fn e8_character_by_brute_force() {
    let e8 = parse_builtin("E8").unwrap();
    let ch = character_unicoloured(&e8, &vfrom_i64(&[0; 8]), 2).unwrap();
    // θ_{E8} = 1 + 240q + 2160q² from the box search; η^{−8} = 1 + 8q + 44q².
    let th = e8_theta_by_coordinates();
    assert_eq!(th, [1, 240, 2160]);
    let eta = eta_by_products(8, 2);
    let expect = [th[0] * eta[0], th[0] * eta[1] + th[1] * eta[0], th[0] * eta[2] + th[1] * eta[1] + th[2] * eta[0]];
    assert_eq!(expect, [1, 248, 4124]);
    for (k, e) in expect.iter().enumerate() {
        assert_eq!(ch.coeff_at(&(rat(k as i64, 1) - rat(1, 3))), Some(BigInt::from(*e)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn theta_depends_only_on_coset(k in 0usize..3, a in -2i64..3, b in -2i64..3) {
        let a2 = parse_builtin("A2").unwrap();
        let dual = a2.dual().basis_vectors();
        let l: Vec<BigRational> = dual[k % 2].iter().map(|x| x * rat(k as i64, 1)).collect();
        let moved = vec![&l[0] + rat(a, 1), &l[1] + rat(b, 1)];
        let s = a2.as_sublattice();
        prop_assert_eq!(theta_series(&s, &l, &rat(4, 1)).unwrap(), theta_series(&s, &moved, &rat(4, 1)).unwrap());
    }

    #[test]
    fn characters_are_nonnegative(name in prop::sample::select(vec!["A1", "A2", "D4", "A1+A1"]), order in 0u64..4) {
        let l = parse_builtin(name).unwrap();
        for v in l.dual().basis_vectors() {
            prop_assert!(character_unicoloured(&l, &v, order).unwrap().is_nonnegative());
        }
    }
}
