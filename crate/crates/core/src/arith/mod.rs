//! Exact integer arithmetic: Kronecker symbols, primality, budgeted
//! factorization and squarefree tests.
//!
//! Everything here is a pure function of its arguments. Budgets are explicit
//! parameters ([`Effort`]) so that a partial answer is reproducible.

mod factor;
pub mod poly;

pub use factor::{factorize, is_prime, is_prime_u64, is_squarefree, Effort, Factorization, Status};
pub use poly::IntPolynomial;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("zero input is not allowed here")]
    Zero,
    #[error("polynomial degree {0} outside the supported range")]
    Degree(usize),
}

/// Tri-state answer for tests that may run out of budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

/// Kronecker symbol `(a|n)` on arbitrary-precision integers.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    if let (Some(a), Some(n)) = (a.to_i128(), n.to_i128()) {
        return kronecker_i128(a, n);
    }
    // Binary algorithm on big integers.
    let mut a = a.clone();
    let mut n = n.clone();
    if n.is_zero() {
        return if a.abs() == BigInt::from(1) { 1 } else { 0 };
    }
    if a.is_even() && n.is_even() {
        return 0;
    }
    let mut result = 1i8;
    let tz = n.trailing_zeros().unwrap_or(0);
    n >>= tz;
    if tz % 2 == 1 {
        let r8 = a.mod_floor(&BigInt::from(8)).to_u8().unwrap();
        if r8 == 3 || r8 == 5 {
            result = -result;
        }
    }
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    a = a.mod_floor(&n);
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let r8 = n.mod_floor(&BigInt::from(8)).to_u8().unwrap();
        if tz % 2 == 1 && (r8 == 3 || r8 == 5) {
            result = -result;
        }
        if a.mod_floor(&BigInt::from(4)) == BigInt::from(3)
            && n.mod_floor(&BigInt::from(4)) == BigInt::from(3)
        {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    if n == BigInt::from(1) {
        result
    } else {
        0
    }
}

/// Kronecker symbol `(a|n)` for machine integers.
pub fn kronecker_i128(a: i128, n: i128) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut result = 1i8;
    let mut n = n;
    let tz = n.trailing_zeros();
    n >>= tz;
    if tz % 2 == 1 {
        let r8 = a.rem_euclid(8);
        if r8 == 3 || r8 == 5 {
            result = -result;
        }
    }
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // n is odd and positive: Jacobi symbol.
    let mut n = n as u128;
    let mut a = a.rem_euclid(n as i128) as u128;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Floor square root of a non-negative big integer, `None` for negative input.
pub fn isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        None
    } else {
        Some(n.sqrt())
    }
}

/// Exact square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    let r = isqrt(n)?;
    (&r * &r == *n).then_some(r)
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// p-adic valuation of a positive integer.
pub fn valuation(mut n: u128, p: u128) -> u32 {
    debug_assert!(p >= 2);
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn mod_pow(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub(crate) fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if let Some(p) = a.checked_mul(b) {
        return p % m;
    }
    // Double-and-add fallback for moduli above 2^64.
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Squarefree kernel sign-preserving: `n = kernel * s^2` with `kernel` squarefree.
pub fn squarefree_kernel(n: i64) -> i64 {
    assert!(n != 0);
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut kernel = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            kernel *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    kernel *= m;
    sign * kernel as i64
}

/// Fundamental discriminant of `Q(sqrt(n))` for a non-square `n`.
pub fn fundamental_discriminant(n: i64) -> i64 {
    let k = squarefree_kernel(n);
    if k.rem_euclid(4) == 1 {
        k
    } else {
        4 * k
    }
}

/// Whether `d` is the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let r = d.rem_euclid(4);
    if r == 1 {
        return squarefree_kernel(d) == d;
    }
    if r != 0 {
        return false;
    }
    let m = d / 4;
    let mr = m.rem_euclid(4);
    (mr == 2 || mr == 3) && squarefree_kernel(m) == m
}

#[cfg(test)]
pub(crate) fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_brute(a: i64, p: i64) -> i8 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| (x * x) % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(&big(5), &big(1)), 1);
        // -23 mod 7 = 5, a non-residue mod 7.
        assert_eq!(kronecker(&big(-23), &big(7)), legendre_brute(-23, 7));
        assert_eq!(kronecker(&big(-23), &big(7)), -1);
        assert_eq!(kronecker(&big(-103), &big(3)), legendre_brute(-103, 3));
        assert_eq!(kronecker(&big(-103), &big(3)), -1);
    }

    #[test]
    fn kronecker_conventions() {
        // (a|2) from a mod 8
        assert_eq!(kronecker_i128(1, 2), 1);
        assert_eq!(kronecker_i128(3, 2), -1);
        assert_eq!(kronecker_i128(5, 2), -1);
        assert_eq!(kronecker_i128(7, 2), 1);
        assert_eq!(kronecker_i128(4, 2), 0);
        // (a|-1) is the sign of a
        assert_eq!(kronecker_i128(-5, -1), -1);
        assert_eq!(kronecker_i128(5, -1), 1);
        assert_eq!(kronecker_i128(2, 0), 0);
        assert_eq!(kronecker_i128(-1, 0), 1);
    }

    #[test]
    fn kronecker_matches_legendre_for_small_primes() {
        for p in [3i64, 5, 7, 11, 13, 97] {
            for a in -200..200 {
                assert_eq!(kronecker_i128(a as i128, p as i128), legendre_brute(a, p), "({a}|{p})");
            }
        }
    }

    #[test]
    fn big_and_small_paths_agree() {
        let a: BigInt = "123456789012345678901234567890123".parse().unwrap();
        let n: BigInt = "98765432109876543210987654321097".parse().unwrap();
        let small = |x: &BigInt, m: i128| x.mod_floor(&BigInt::from(m)).to_i128().unwrap();
        // multiplicativity in the top argument against a reduced copy
        assert_eq!(kronecker(&a, &BigInt::from(101)), kronecker_i128(small(&a, 101), 101));
        let k = kronecker(&a, &n);
        assert!(k == 0 || k == 1 || k == -1);
        assert_eq!(kronecker(&(&a * &a), &n).abs(), k.abs());
    }

    #[test]
    fn fundamental_discriminants() {
        assert!(is_fundamental_discriminant(-3));
        assert!(is_fundamental_discriminant(-4));
        assert!(is_fundamental_discriminant(-103));
        assert!(is_fundamental_discriminant(229));
        assert!(is_fundamental_discriminant(12));
        assert!(!is_fundamental_discriminant(-12));
        assert!(!is_fundamental_discriminant(-27));
        assert!(!is_fundamental_discriminant(1));
        assert_eq!(fundamental_discriminant(-3 * 79), -948);
        assert_eq!(fundamental_discriminant(-3 * 5), -15);
        assert_eq!(fundamental_discriminant(79), 316);
        assert_eq!(fundamental_discriminant(-9), -4);
    }
}
