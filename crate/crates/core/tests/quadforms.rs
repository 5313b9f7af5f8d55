use dihedral_core::arith::{is_fundamental_discriminant, kronecker_i128};
use dihedral_core::quadforms::{
    class_group, reduced_forms_definite, ClassGroupOptions, ClassTable, QuadraticForm,
};
use proptest::prelude::*;

fn fundamental(range: std::ops::RangeInclusive<i64>) -> Vec<i64> {
    range.filter(|&d| is_fundamental_discriminant(d)).collect()
}

/// Dirichlet's formula `h = -(w / 2|d|) * sum_{a<|d|} chi(a) a` for `d < 0`.
fn analytic_class_number(d: i64) -> i64 {
    let n = -d;
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let sum: i64 = (1..n).map(|a| kronecker_i128(d as i128, a as i128) as i64 * a).sum();
    assert_eq!((-w * sum) % (2 * n), 0);
    -w * sum / (2 * n)
}

fn distinct_prime_factors(mut n: u64) -> u32 {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            count += 1;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    count + u32::from(n > 1)
}

#[test]
fn imaginary_class_numbers_match_analytic_formula() {
    for d in fundamental(-10_000..=-3) {
        let g = class_group(d, &ClassGroupOptions::default()).unwrap();
        let h = g.class_number() as i64;
        assert_eq!(h, analytic_class_number(d), "d = {d}");
        assert_eq!(h as usize, reduced_forms_definite(d).len(), "d = {d}");
    }
}

#[test]
fn genus_theory_two_rank() {
    let narrow = ClassGroupOptions { narrow: true, extended: false };
    for d in fundamental(-5000..=5000) {
        let g = class_group(d, &narrow).unwrap();
        let t = distinct_prime_factors(d.unsigned_abs());
        assert_eq!(g.p_rank(2) as u32, t - 1, "d = {d}");
    }
}

#[test]
fn narrow_doubles_when_a_prime_3_mod_4_divides_d() {
    let narrow = ClassGroupOptions { narrow: true, extended: false };
    for d in fundamental(5..=5000) {
        let has_3_mod_4 = (3..=d as u64)
            .filter(|p| d as u64 % p == 0 && p % 4 == 3)
            .any(|p| (2..p).all(|q| p % q != 0));
        let h = class_group(d, &ClassGroupOptions::default()).unwrap().class_number();
        let hp = class_group(d, &narrow).unwrap().class_number();
        assert!(hp == h || hp == 2 * h, "d = {d}");
        if has_3_mod_4 {
            assert_eq!(hp, 2 * h, "d = {d}");
        }
    }
}

#[test]
fn odd_p_rank_matches_brute_force_torsion() {
    let narrow = ClassGroupOptions { narrow: true, extended: false };
    for d in fundamental(-10_000..=10_000) {
        let table = ClassTable::new(d).unwrap();
        let ordinary = class_group(d, &ClassGroupOptions::default()).unwrap();
        let nar = class_group(d, &narrow).unwrap();
        for p in [3u64, 5, 7] {
            let torsion = (0..table.len()).filter(|&x| table.pow(x, p) == table.identity()).count();
            let mut rank = 0;
            let mut t = torsion;
            while t > 1 {
                assert_eq!(t as u64 % p, 0);
                t /= p as usize;
                rank += 1;
            }
            assert_eq!(ordinary.p_rank(p), rank, "d = {d}, p = {p}");
            assert_eq!(nar.p_rank(p), rank, "d = {d}, p = {p}");
        }
    }
}

fn random_form(d: i64, seed: u64) -> QuadraticForm {
    let table = ClassTable::new(d).unwrap();
    table.rep((seed % table.len() as u64) as usize)
}

/// Apply `x -> x + k y` then `(x, y) -> (-y, x)` to move away from the
/// reduced representative without leaving the class.
fn scramble(f: QuadraticForm, k: i64) -> QuadraticForm {
    let (a, b, c) = (f.a, f.b, f.c);
    let (a, b, c) = (a, b + 2 * a * k, a * k * k + b * k + c);
    QuadraticForm::new(c, -b, a)
}

const DISCS: [i64; 8] = [-3299, -4027, -103, -420, -97583, 229, 1596, 8789];

proptest! {
    #[test]
    fn composition_is_associative_and_commutative(i in 0usize..8, x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
        let d = DISCS[i];
        let (f, g, h) = (random_form(d, x), random_form(d, y), random_form(d, z));
        let t = ClassTable::new(d).unwrap();
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(t.class_of(&fg), t.class_of(&g.compose(&f).unwrap()));
        let left = fg.compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(t.class_of(&left), t.class_of(&right));
        let one = QuadraticForm::principal(d);
        prop_assert_eq!(t.class_of(&f.compose(&one).unwrap()), t.class_of(&f));
        prop_assert_eq!(t.class_of(&f.compose(&f.inverse()).unwrap()), t.identity());
    }

    #[test]
    fn reduction_is_a_class_invariant(i in 0usize..8, x in any::<u64>(), k in -50i64..50) {
        let d = DISCS[i];
        let f = random_form(d, x);
        let g = scramble(f, k);
        prop_assume!(d > 0 || g.a > 0);
        let t = ClassTable::new(d).unwrap();
        let r = g.reduce().unwrap();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduce().unwrap(), r);
        prop_assert_eq!(t.class_of(&r), t.class_of(&f));
        if d < 0 {
            prop_assert_eq!(r, f.reduce().unwrap());
        }
    }
}
