//! Brute-force oracles for the test suite. Deliberately slow and written
//! without the library's helpers.
#![allow(dead_code)]

use std::collections::HashMap;

/// Reduced forms of discriminant `d`, enumerated by `B` first, then `A`.
pub fn oracle_class_count(d: i64) -> usize {
    assert!(d < 0);
    let n = -d;
    let mut count = 0;
    let mut b: i64 = -n;
    while b <= n {
        if (b * b - d) % 4 == 0 {
            let ac = (b * b - d) / 4;
            let mut a = b.abs().max(1);
            while a * a <= ac {
                if ac % a == 0 {
                    let c = ac / a;
                    let boundary = b.abs() == a || a == c;
                    if b.abs() <= a && a <= c && (!boundary || b >= 0) {
                        count += 1;
                    }
                }
                a += 1;
            }
        }
        b += 1;
    }
    count
}

/// `#E(F_p)` for `y² = x³ + ax + b` by a double loop, infinity included.
pub fn oracle_point_count(a: i64, b: i64, p: i64) -> i64 {
    assert!(p <= 2000);
    let mut n = 1;
    for x in 0..p {
        let rhs = (x * x % p * x % p + a.rem_euclid(p) * x + b.rem_euclid(p)) % p;
        for y in 0..p {
            if y * y % p == rhs {
                n += 1;
            }
        }
    }
    n
}

type Form = (i64, i64, i64);

fn apply(f: Form, m: [i64; 4]) -> Form {
    // Q(αx + βy, γx + δy)
    let (a, b, c) = f;
    let [al, be, ga, de] = m;
    (
        a * al * al + b * al * ga + c * ga * ga,
        2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de,
        a * be * be + b * be * de + c * de * de,
    )
}

/// Components of the graph on forms of discriminant `d` with `0 < A, C ≤ radius`,
/// joined by `Γ₀(p)` matrices with entries in `[−p, p]`, that contain a form with
/// `max(A, C) ≤ p²(|D| + 1)/4`. Every `Γ₀(p)`-class has such a form.
pub fn oracle_gamma0_orbits(d: i64, p: i64, radius: i64) -> usize {
    let mut forms: Vec<Form> = Vec::new();
    for a in 1..=radius {
        for c in 1..=radius {
            let bb = d + 4 * a * c;
            if bb < 0 {
                continue;
            }
            let s = (bb as f64).sqrt().round() as i64;
            if s * s == bb {
                forms.push((a, s, c));
                if s != 0 {
                    forms.push((a, -s, c));
                }
            }
        }
    }
    let index: HashMap<Form, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut mats = Vec::new();
    for al in -p..=p {
        for be in -p..=p {
            for ga in (-p..=p).filter(|g| g % p == 0) {
                for de in -p..=p {
                    if al * de - be * ga == 1 {
                        mats.push([al, be, ga, de]);
                    }
                }
            }
        }
    }
    let mut parent: Vec<usize> = (0..forms.len()).collect();
    fn root(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            i = parent[i];
        }
        i
    }
    for (i, f) in forms.iter().enumerate() {
        for m in &mats {
            if let Some(&j) = index.get(&apply(*f, *m)) {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let core = p * p * (-d + 1) / 4;
    let mut roots: Vec<usize> = forms
        .iter()
        .enumerate()
        .filter(|(_, f)| f.0.max(f.2) <= core)
        .map(|(i, _)| root(&mut parent, i))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

#[test]
fn oracle_examples() {
    assert_eq!(oracle_class_count(-7), 1);
    assert_eq!(oracle_class_count(-20), 2);
    assert_eq!(oracle_class_count(-163), 1);
    assert_eq!(oracle_point_count(1, 1, 5), 9);
    assert_eq!(oracle_point_count(-1, 0, 5), 8);
    for (d, p) in [(-7, 2), (-4, 2)] {
        let n = oracle_gamma0_orbits(d, p, 50);
        assert!((1..=3).contains(&n));
        assert_eq!(n, oracle_gamma0_orbits(d, p, 100));
    }
}
