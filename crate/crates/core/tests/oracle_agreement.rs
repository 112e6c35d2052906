mod oracle;

use onan_core::arith::{is_fundamental, Discriminant};
use onan_core::lfun::{count_points, CurveSpec};
use onan_core::qforms::{class_number, class_representatives, gamma0_class_number};
use proptest::prelude::*;

use oracle::{oracle_class_count, oracle_gamma0_orbits, oracle_point_count};

#[test]
fn class_numbers_match_oracle() {
    for d in (-3000i64..=-3).filter(|&d| d % 4 == 0 || d.rem_euclid(4) == 1) {
        let disc = Discriminant::new(d).unwrap();
        assert_eq!(class_representatives(disc).len(), oracle_class_count(d), "D = {d}");
        if is_fundamental(d) {
            assert_eq!(class_number(disc).unwrap(), oracle_class_count(d));
        }
    }
}

#[test]
fn gamma0_class_numbers_match_oracle() {
    for (d, p) in [(-3, 2), (-3, 3), (-4, 2), (-4, 3), (-7, 2), (-7, 3), (-8, 3), (-15, 2), (-20, 3), (-23, 5)] {
        let exact = gamma0_class_number(Discriminant::new(d).unwrap(), p as u64).unwrap();
        let small = oracle_gamma0_orbits(d, p, 50);
        let large = oracle_gamma0_orbits(d, p, 100);
        assert_eq!(small, large, "oracle unstable at ({d}, {p})");
        assert_eq!(exact, large, "D = {d}, p = {p}");
    }
}

#[test]
fn gamma0_examples() {
    let h = |d, p| gamma0_class_number(Discriminant::new(d).unwrap(), p).unwrap();
    assert_eq!(h(-7, 2), 3);
    assert_eq!(h(-4, 2), 2);
    assert_eq!(h(-3, 3), 2);
}

const PRIMES: [u64; 20] = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 101, 199, 211, 307, 401, 409, 419, 457, 487, 499];

proptest! {
    #[test]
    fn point_counts_match_oracle(a in -1000i64..1000, b in -1000i64..1000, i in 0usize..PRIMES.len()) {
        prop_assume!(4 * a * a * a + 27 * b * b != 0);
        let p = PRIMES[i];
        let e = CurveSpec::from_i64(a, b, 1).unwrap();
        let ap = count_points(&e, p).unwrap();
        prop_assert_eq!(p as i64 + 1 - ap, oracle_point_count(a, b, p as i64));
    }
}
