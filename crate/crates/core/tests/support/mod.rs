//! Brute-force oracles shared by the integration suites. Nothing here calls
//! into the library's own number theory.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

pub fn euclid(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

pub fn brute_units(n: i64) -> Vec<i64> {
    (1..n).filter(|&m| euclid(m, n) == 1).collect()
}

pub fn brute_is_prime(n: i64) -> bool {
    n >= 2 && (2..n).all(|d| n % d != 0)
}

/// Orbits of `{1..n-1}` under multiplication by units, by repeated closure.
pub fn brute_orbit_closure(n: i64) -> Vec<Vec<i64>> {
    let units = brute_units(n);
    let mut assigned = BTreeSet::new();
    let mut orbits = Vec::new();
    for start in 1..n {
        if assigned.contains(&start) {
            continue;
        }
        let mut orbit = BTreeSet::from([start]);
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            for &m in &units {
                let y = (x * m) % n;
                if orbit.insert(y) {
                    frontier.push(y);
                }
            }
        }
        assigned.extend(orbit.iter().copied());
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

/// Riemann-Hurwitz genus computed from scratch.
pub fn brute_genus(n: i64, s: i64, u: &[i64]) -> i64 {
    let ram: i64 = u.iter().map(|&x| n - euclid(n, x)).sum();
    n * (s - 1) + 1 + ram / 2
}

/// Validity as a connected cyclic cover, checked independently.
pub fn brute_valid(n: i64, s: i64, u: &[i64]) -> bool {
    if n < 2 || s < 0 || u.iter().any(|&x| x < 1 || x >= n) {
        return false;
    }
    if u.iter().sum::<i64>() % n != 0 {
        return false;
    }
    s > 0 || u.iter().fold(n, |g, &x| euclid(g, x)) == 1
}

fn for_each_tuple(n: i64, r: usize, f: &mut impl FnMut(&[i64])) {
    let mut cur = vec![1i64; r];
    loop {
        f(&cur);
        let mut k = r;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if cur[k] < n - 1 {
                cur[k] += 1;
                break;
            }
            cur[k] = 1;
        }
    }
}

/// Canonical class representatives of `(n, s, r)` with genus `<= g_max`,
/// from all ordered tuples deduplicated by sorting and unit orbits.
pub fn brute_canonical_classes(n: i64, s: i64, r: usize, g_max: i64) -> Vec<Vec<i64>> {
    let mut sorted = BTreeSet::new();
    for_each_tuple(n, r, &mut |t: &[i64]| {
        if brute_valid(n, s, t) && brute_genus(n, s, t) <= g_max {
            let mut v = t.to_vec();
            v.sort();
            sorted.insert(v);
        }
    });
    let units = brute_units(n);
    let mut class_of: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
    for v in &sorted {
        let rep = units
            .iter()
            .map(|&m| {
                let mut w: Vec<i64> = v.iter().map(|&x| (x * m) % n).collect();
                w.sort();
                w
            })
            .min()
            .unwrap();
        class_of.insert(v.clone(), rep);
    }
    let reps: BTreeSet<Vec<i64>> = class_of.into_values().collect();
    reps.into_iter().collect()
}

/// Random valid raw datum with `n <= n_max`, `r <= r_max`, `s <= s_max`.
pub fn random_raw(rng: &mut impl Rng, n_max: i64, r_max: usize, s_max: i64) -> (i64, i64, Vec<i64>) {
    loop {
        let n = rng.gen_range(2..=n_max);
        let s = rng.gen_range(0..=s_max);
        let r = rng.gen_range(0..=r_max);
        let mut u: Vec<i64> = (0..r.saturating_sub(1)).map(|_| rng.gen_range(1..n)).collect();
        if r > 0 {
            let last = (-(u.iter().sum::<i64>())).rem_euclid(n);
            if last == 0 {
                continue;
            }
            u.push(last);
        }
        if brute_valid(n, s, &u) {
            return (n, s, u);
        }
    }
}

/// Fractional part `<a/n>` as a numerator over `n`.
pub fn frac_num(a: i64, n: i64) -> i64 {
    a.rem_euclid(n)
}
