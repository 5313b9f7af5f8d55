//! Class groups of quadratic fields from binary quadratic forms.
//!
//! A form `(a, b, c)` stands for `a x^2 + b x y + c y^2` of discriminant
//! `D = b^2 - 4ac`. Conventions, which class counting depends on:
//!
//! * `D < 0` (positive definite forms only): `(a, b, c)` is reduced when
//!   `|b| <= a <= c`, and `b >= 0` whenever `|b| = a` or `a = c`. Each
//!   class contains exactly one reduced form.
//! * `D > 0`: `(a, b, c)` is reduced when `0 < b < sqrt(D)` and
//!   `sqrt(D) - b < 2|a| < sqrt(D) + b`. All comparisons are done exactly with
//!   `s = floor(sqrt(D))`, using that `sqrt(D)` is irrational. The reduction
//!   operator is `rho(a, b, c) = (c, r, (r^2 - D) / 4c)` with `r ≡ -b (mod 2c)`
//!   taken in `(-|c|, |c|]` when `|c| > sqrt(D)` and in
//!   `(sqrt(D) - 2|c|, sqrt(D))` otherwise. Reduced forms fall into `rho`
//!   cycles, and two reduced forms are properly equivalent iff they share a
//!   cycle, so cycles are the narrow classes.
//!
//! The ordinary class group of a real field is the narrow group modulo the
//! class of `(-1, b0, -c0)`, the negated principal form.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::abgroup::{factor_u64, AbelianGroupStructure};
use crate::arith::{ext_gcd, is_fundamental_discriminant, is_prime_u64, isqrt_u128, kronecker_i128};

/// Largest `|D|` accepted by default.
pub const DEFAULT_BOUND: i64 = 10_000_000;
/// Largest `|D|` accepted with [`ClassGroupOptions::extended`]; slow near the top.
pub const EXTENDED_BOUND: i64 = 4_000_000_000;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("form ({0}, {1}, {2}) is not primitive")]
    Imprimitive(i64, i64, i64),
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(i64),
    #[error("discriminant {0} is not 0 or 1 mod 4")]
    InvalidDiscriminant(i64),
    #[error("discriminants differ: {0} vs {1}")]
    DiscMismatch(i64, i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("|{disc}| exceeds the enumeration bound {bound}; use the extended bound")]
    BoundExceeded { disc: i64, bound: i64 },
    #[error("positive definite forms only for negative discriminants, got a = {0}")]
    NotPositive(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        let d = (self.b as i128).pow(2) - 4 * self.a as i128 * self.c as i128;
        i64::try_from(d).expect("discriminant overflows i64")
    }

    pub fn is_primitive(&self) -> bool {
        gcd3(self.a, self.b, self.c) == 1
    }

    /// Principal form `(1, b0, c0)` with `b0 ∈ {0, 1}` matching `d mod 4`.
    pub fn principal(d: i64) -> Self {
        let b = d.rem_euclid(2);
        QuadraticForm::new(1, b, (b * b - d) / 4)
    }

    /// Inverse class `(a, -b, c)`.
    pub fn inverse(&self) -> Self {
        QuadraticForm::new(self.a, -self.b, self.c)
    }

    pub fn is_reduced(&self) -> bool {
        let d = self.disc();
        if d < 0 {
            let (a, b, c) = (self.a, self.b, self.c);
            b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
        } else {
            let s = isqrt_u128(d as u128) as i64;
            indefinite_reduced(self.a as i128, self.b as i128, s as i128)
        }
    }

    /// Reduced representative: the unique one for `D < 0`, one on the
    /// cycle of the class for `D > 0`.
    pub fn reduce(&self) -> Result<QuadraticForm, QuadError> {
        let d = self.disc();
        self.check(d)?;
        Ok(self.reduce_unchecked(d))
    }

    fn check(&self, d: i64) -> Result<(), QuadError> {
        if !self.is_primitive() {
            return Err(QuadError::Imprimitive(self.a, self.b, self.c));
        }
        if d >= 0 && is_square(d) {
            return Err(QuadError::SquareDiscriminant(d));
        }
        if d < 0 && self.a <= 0 {
            return Err(QuadError::NotPositive(self.a));
        }
        Ok(())
    }

    fn reduce_unchecked(&self, d: i64) -> QuadraticForm {
        let f = (self.a as i128, self.b as i128, self.c as i128);
        let (a, b, c) = if d < 0 {
            reduce_definite(f)
        } else {
            reduce_indefinite(f, d as i128)
        };
        QuadraticForm::new(a as i64, b as i64, c as i64)
    }

    /// Composition of classes, returned reduced.
    pub fn compose(&self, other: &QuadraticForm) -> Result<QuadraticForm, QuadError> {
        let (d1, d2) = (self.disc(), other.disc());
        if d1 != d2 {
            return Err(QuadError::DiscMismatch(d1, d2));
        }
        self.check(d1)?;
        other.check(d2)?;
        Ok(compose_unchecked(self, other, d1))
    }

    /// `f^n` for `n >= 0`, reduced.
    pub fn pow(&self, mut n: u64) -> Result<QuadraticForm, QuadError> {
        let d = self.disc();
        self.check(d)?;
        let mut acc = QuadraticForm::principal(d).reduce_unchecked(d);
        let mut base = self.reduce_unchecked(d);
        while n > 0 {
            if n & 1 == 1 {
                acc = compose_unchecked(&acc, &base, d);
            }
            base = compose_unchecked(&base, &base, d);
            n >>= 1;
        }
        Ok(acc)
    }
}

impl std::fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    let g = crate::lattice::gcd(a as i128, b as i128);
    crate::lattice::gcd(g, c as i128) as i64
}

fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = isqrt_u128(n as u128);
        r * r == n as u128
    }
}

type Triple = (i128, i128, i128);

/// Move `b` into `(-a, a]` by `x -> x + k y`.
fn normalize_definite((a, b, c): Triple) -> Triple {
    let k = (a - b).div_euclid(2 * a);
    (a, b + 2 * a * k, a * k * k + b * k + c)
}

fn reduce_definite(f: Triple) -> Triple {
    let (mut a, mut b, mut c) = normalize_definite(f);
    while a > c {
        (a, b, c) = normalize_definite((c, -b, a));
    }
    if a == c && b < 0 {
        b = -b;
    }
    (a, b, c)
}

fn indefinite_reduced(a: i128, b: i128, s: i128) -> bool {
    let a = a.abs();
    b > 0 && b <= s && 2 * a - b <= s && 2 * a + b > s
}

fn rho((_, b, c): Triple, d: i128, s: i128) -> Triple {
    let m = 2 * c.abs();
    let mut r = (-b).rem_euclid(m);
    if c.abs() > s {
        // r in (-|c|, |c|]
        if r > c.abs() {
            r -= m;
        }
    } else {
        // r in (sqrt(D) - 2|c|, sqrt(D)): the largest r ≡ -b with r <= s
        r += (s - r).div_euclid(m) * m;
    }
    (c, r, (r * r - d) / (4 * c))
}

fn reduce_indefinite(f: Triple, d: i128) -> Triple {
    let s = isqrt_u128(d as u128) as i128;
    let mut f = f;
    while !indefinite_reduced(f.0, f.1, s) {
        f = rho(f, d, s);
    }
    f
}

/// Replace an indefinite form by a properly equivalent one with `a > 0`.
fn positive_leading(f: &QuadraticForm, d: i64) -> Triple {
    let t = (f.a as i128, f.b as i128, f.c as i128);
    if t.0 > 0 {
        return t;
    }
    let d = d as i128;
    let g = reduce_indefinite(t, d);
    if g.0 > 0 {
        return g;
    }
    // a reduced form has ac < 0, so one more step flips the sign
    rho(g, d, isqrt_u128(d as u128) as i128)
}

/// Dirichlet composition (gcd form) followed by reduction.
fn compose_unchecked(f: &QuadraticForm, g: &QuadraticForm, d: i64) -> QuadraticForm {
    let (f1, f2) = if d < 0 {
        (
            (f.a as i128, f.b as i128, f.c as i128),
            (g.a as i128, g.b as i128, g.c as i128),
        )
    } else {
        (positive_leading(f, d), positive_leading(g, d))
    };
    let (mut f1, mut f2) = (f1, f2);
    if f1.0 > f2.0 {
        std::mem::swap(&mut f1, &mut f2);
    }
    let (a1, b1, _) = f1;
    let (a2, b2, c2) = f2;
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (dd, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let (g, u, _) = ext_gcd(a2, a1);
        (g, u)
    };
    let (d1, x2, y2) = if s % dd == 0 {
        (dd, 0, -1)
    } else {
        let (g, x, y) = ext_gcd(s, dd);
        (g, x, -y)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (b3 * b3 - d as i128) / (4 * a3);
    debug_assert_eq!(b3 * b3 - 4 * a3 * c3, d as i128);
    let t = if d < 0 {
        reduce_definite((a3, b3, c3))
    } else {
        reduce_indefinite((a3, b3, c3), d as i128)
    };
    QuadraticForm::new(t.0 as i64, t.1 as i64, t.2 as i64)
}

/// All reduced primitive forms of discriminant `d < 0`, sorted.
pub fn reduced_forms_definite(d: i64) -> Vec<QuadraticForm> {
    assert!(d < 0 && d.rem_euclid(4) <= 1);
    let n = -d;
    let amax = isqrt_u128((n / 3) as u128) as i64;
    let mut out = Vec::new();
    for a in 1..=amax {
        let four_a = 4 * a;
        // b ≡ d (mod 2), |b| <= a
        let start = if (a + d).rem_euclid(2) == 0 { -a } else { -a + 1 };
        let mut b = start;
        while b <= a {
            let num = b * b - d;
            if num % four_a == 0 {
                let c = num / four_a;
                let boundary = b.abs() == a || a == c;
                if c >= a && !(boundary && b < 0) && gcd3(a, b, c) == 1 {
                    out.push(QuadraticForm::new(a, b, c));
                }
            }
            b += 2;
        }
    }
    out
}

/// All reduced primitive forms of discriminant `d > 0` (non-square).
pub fn reduced_forms_indefinite(d: i64) -> Vec<QuadraticForm> {
    assert!(d > 0 && !is_square(d));
    let s = isqrt_u128(d as u128) as i64;
    let mut out = Vec::new();
    let mut b = if (s - d).rem_euclid(2) == 0 { s } else { s - 1 };
    while b > 0 {
        let n = (d - b * b) / 4;
        let lo = ((s + 1 - b) + 1).div_euclid(2).max(1);
        let hi = (s + b).div_euclid(2);
        for a in lo..=hi {
            if n % a == 0 {
                let c = n / a;
                for (aa, cc) in [(a, -c), (-a, c)] {
                    if gcd3(aa, b, cc) == 1 {
                        out.push(QuadraticForm::new(aa, b, cc));
                    }
                }
            }
        }
        b -= 2;
    }
    out.sort();
    out
}

/// Options for [`class_group`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupOptions {
    /// Narrow class group for `d > 0` (ignored for `d < 0`).
    pub narrow: bool,
    /// Raise the bound from [`DEFAULT_BOUND`] to [`EXTENDED_BOUND`].
    pub extended: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormClassGroup {
    pub disc: i64,
    pub narrow: bool,
    pub structure: AbelianGroupStructure,
    /// Generators of the group with their orders.
    pub generators: Vec<(QuadraticForm, u64)>,
}

impl FormClassGroup {
    pub fn class_number(&self) -> u128 {
        self.structure.order()
    }

    pub fn p_rank(&self, p: u64) -> usize {
        self.structure.p_rank(p)
    }
}

/// All classes of one discriminant with multiplication by table lookup.
#[derive(Debug, Clone)]
pub struct ClassTable {
    disc: i64,
    reps: Vec<QuadraticForm>,
    index: HashMap<QuadraticForm, usize>,
    identity: usize,
}

impl ClassTable {
    /// Enumerate all (narrow, for `d > 0`) classes of discriminant `d`,
    /// without checking that `d` is fundamental.
    pub fn new(d: i64) -> Result<ClassTable, QuadError> {
        if d.rem_euclid(4) > 1 {
            return Err(QuadError::InvalidDiscriminant(d));
        }
        if d >= 0 && is_square(d) {
            return Err(QuadError::SquareDiscriminant(d));
        }
        let mut index = HashMap::new();
        let mut reps = Vec::new();
        if d < 0 {
            for (i, f) in reduced_forms_definite(d).into_iter().enumerate() {
                index.insert(f, i);
                reps.push(f);
            }
        } else {
            let (dd, s) = (d as i128, isqrt_u128(d as u128) as i128);
            for f in reduced_forms_indefinite(d) {
                if index.contains_key(&f) {
                    continue;
                }
                let id = reps.len();
                let mut g = (f.a as i128, f.b as i128, f.c as i128);
                let mut rep = None;
                loop {
                    let form = QuadraticForm::new(g.0 as i64, g.1 as i64, g.2 as i64);
                    if index.insert(form, id).is_some() {
                        break;
                    }
                    if rep.is_none() && form.a > 0 {
                        rep = Some(form);
                    }
                    g = rho(g, dd, s);
                }
                reps.push(rep.expect("cycle without positive leading coefficient"));
            }
        }
        let identity = index[&QuadraticForm::principal(d).reduce_unchecked(d)];
        Ok(ClassTable {
            disc: d,
            reps,
            index,
            identity,
        })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Representative of class `i` (positive leading coefficient).
    pub fn rep(&self, i: usize) -> QuadraticForm {
        self.reps[i]
    }

    pub fn class_of(&self, f: &QuadraticForm) -> usize {
        self.index[&f.reduce_unchecked(self.disc)]
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let f = compose_unchecked(&self.reps[i], &self.reps[j], self.disc);
        self.index[&f]
    }

    pub fn pow(&self, i: usize, mut n: u64) -> usize {
        let (mut acc, mut base) = (self.identity, i);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// Class of the negated principal form; identity for `d < 0`.
    pub fn minus_one_class(&self) -> usize {
        if self.disc < 0 {
            return self.identity;
        }
        let p = QuadraticForm::principal(self.disc);
        self.class_of(&QuadraticForm::new(-p.a, p.b, -p.c))
    }

    /// Structure of the group modulo the subgroup `{1, j}` (`j` of order ≤ 2).
    fn structure_mod(&self, j: usize) -> AbelianGroupStructure {
        let in_j = |x: usize| x == self.identity || x == j;
        let jsize = if j == self.identity { 1 } else { 2 };
        let h = (self.len() / jsize) as u64;
        let mut exps_all = Vec::new();
        for (l, v) in factor_u64(h) {
            let target = l.pow(v) as usize;
            let mut powers: Vec<usize> = (0..self.len()).collect();
            let mut logs = vec![0u32];
            loop {
                powers = powers.iter().map(|&x| self.pow(x, l)).collect();
                let count = powers.iter().filter(|&&x| in_j(x)).count() / jsize;
                logs.push(ilog(count as u64, l));
                if count == target {
                    break;
                }
            }
            // factors of order >= l^k number logs[k] - logs[k-1]
            let kmax = logs.len() - 1;
            let mut exps = Vec::new();
            for k in 1..=kmax {
                let at_least_k = logs[k] - logs[k - 1];
                let at_least_next = if k < kmax { logs[k + 1] - logs[k] } else { 0 };
                for _ in 0..at_least_k - at_least_next {
                    exps.push(l.pow(k as u32));
                }
            }
            exps_all.extend(exps);
        }
        AbelianGroupStructure::from_cyclic_orders(&exps_all)
    }

    /// Generators from prime forms of the smallest primes, saturated until
    /// they span the group modulo `{1, j}`.
    fn generators_mod(&self, j: usize) -> Vec<(QuadraticForm, u64)> {
        let mut member = vec![false; self.len()];
        let mut elems = vec![self.identity];
        member[self.identity] = true;
        if j != self.identity {
            member[j] = true;
            elems.push(j);
        }
        let mut gens = Vec::new();
        let mut candidates = prime_form_classes(self).into_iter().chain(0..self.len());
        while elems.len() < self.len() {
            let g = candidates.next().expect("classes exhausted before saturation");
            if member[g] {
                continue;
            }
            // smallest t with g^t in the current subgroup
            let mut t = 1u64;
            let mut gt = g;
            while !member[gt] {
                gt = self.mul(gt, g);
                t += 1;
            }
            let mut new_elems = Vec::with_capacity(elems.len() * t as usize);
            let mut gk = self.identity;
            for _ in 0..t {
                for &s in &elems {
                    new_elems.push(self.mul(s, gk));
                }
                gk = self.mul(gk, g);
            }
            for &x in &new_elems {
                member[x] = true;
            }
            elems = new_elems;
            gens.push((self.reps[g], self.order_mod(g, j)));
        }
        gens
    }

    fn order_mod(&self, g: usize, j: usize) -> u64 {
        let mut x = g;
        let mut k = 1;
        while x != self.identity && x != j {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }
}

fn ilog(mut n: u64, l: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        debug_assert_eq!(n % l, 0);
        n /= l;
        k += 1;
    }
    k
}

/// Classes of prime forms `(p, b, c)` for primes `p` not inert, ascending.
fn prime_form_classes(t: &ClassTable) -> Vec<usize> {
    let d = t.disc;
    let limit = 2000u64.min(4 * (d.unsigned_abs() + 16));
    let mut out = Vec::new();
    for p in 2..limit {
        if !is_prime_u64(p) || kronecker_i128(d as i128, p as i128) == -1 {
            continue;
        }
        let p = p as i64;
        if let Some(b) = (0..2 * p).find(|&b| (b * b - d).rem_euclid(4 * p) == 0) {
            let f = QuadraticForm::new(p, b, (b * b - d) / (4 * p));
            if f.is_primitive() {
                out.push(t.class_of(&f));
            }
        }
    }
    out
}

fn check_bound(d: i64, opts: &ClassGroupOptions) -> Result<(), QuadError> {
    let bound = if opts.extended { EXTENDED_BOUND } else { DEFAULT_BOUND };
    if d.unsigned_abs() > bound as u64 {
        return Err(QuadError::BoundExceeded { disc: d, bound });
    }
    Ok(())
}

/// Class group of the quadratic field of fundamental discriminant `d`.
pub fn class_group(d: i64, opts: &ClassGroupOptions) -> Result<FormClassGroup, QuadError> {
    if !is_fundamental_discriminant(d) {
        return Err(QuadError::NotFundamental(d));
    }
    class_group_of_order(d, opts)
}

/// Class group of the order of discriminant `d` (not necessarily maximal).
pub fn class_group_of_order(d: i64, opts: &ClassGroupOptions) -> Result<FormClassGroup, QuadError> {
    check_bound(d, opts)?;
    let table = ClassTable::new(d)?;
    let narrow = d > 0 && opts.narrow;
    let j = if d > 0 && !opts.narrow {
        table.minus_one_class()
    } else {
        table.identity()
    };
    Ok(FormClassGroup {
        disc: d,
        narrow,
        structure: table.structure_mod(j),
        generators: table.generators_mod(j),
    })
}

/// p-rank of the class group; the same for narrow and ordinary groups when
/// `p` is odd.
pub fn p_rank(d: i64, p: u64) -> Result<usize, QuadError> {
    Ok(class_group(d, &ClassGroupOptions::default())?.p_rank(p))
}

/// [`class_group`] over many discriminants, in input order.
pub fn class_groups(ds: &[i64], opts: &ClassGroupOptions) -> Vec<Result<FormClassGroup, QuadError>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        ds.par_iter().map(|&d| class_group(d, opts)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ds.iter().map(|&d| class_group(d, opts)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cg(d: i64) -> AbelianGroupStructure {
        class_group(d, &ClassGroupOptions::default()).unwrap().structure
    }

    fn narrow(d: i64) -> AbelianGroupStructure {
        let opts = ClassGroupOptions { narrow: true, extended: false };
        class_group(d, &opts).unwrap().structure
    }

    fn s(text: &str) -> AbelianGroupStructure {
        text.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        let f = QuadraticForm::new(1, 1, 1);
        assert_eq!(f.reduce().unwrap(), f);
        let g = QuadraticForm::new(2, 1, 3).reduce().unwrap();
        assert_eq!(g, QuadraticForm::new(2, 1, 3));
        // (2,1,3) moved by x -> x + 3y is still in the same class
        let moved = QuadraticForm::new(2, 13, 24);
        assert_eq!(moved.disc(), -23);
        assert_eq!(moved.reduce().unwrap(), g);
        let h = QuadraticForm::new(1, 15, -1).reduce().unwrap();
        assert_eq!(h.disc(), 229);
        assert!(h.is_reduced());
        assert!(h.b > 0 && h.b * h.b < 229);
    }

    #[test]
    fn reduce_rejects_bad_input() {
        assert!(matches!(QuadraticForm::new(2, 2, 2).reduce(), Err(QuadError::Imprimitive(..))));
        assert!(matches!(
            QuadraticForm::new(1, 3, 2).reduce(),
            Err(QuadError::SquareDiscriminant(1))
        ));
    }

    #[test]
    fn reduced_forms_of_minus_23() {
        let forms = reduced_forms_definite(-23);
        assert_eq!(
            forms,
            vec![QuadraticForm::new(1, 1, 6), QuadraticForm::new(2, -1, 3), QuadraticForm::new(2, 1, 3)]
        );
    }

    #[test]
    fn compose_examples() {
        let f = QuadraticForm::new(2, 1, 3);
        let g = QuadraticForm::new(2, -1, 3);
        let one = QuadraticForm::new(1, 1, 6);
        assert_eq!(one.compose(&g).unwrap(), g);
        assert_eq!(f.compose(&g).unwrap(), one);
        assert_eq!(f.compose(&f).unwrap(), g);
        assert!(matches!(
            f.compose(&QuadraticForm::new(1, 1, 1)),
            Err(QuadError::DiscMismatch(-23, -3))
        ));
    }

    #[test]
    fn class_group_examples() {
        assert_eq!(cg(-103), s("5"));
        assert_eq!(cg(-23), s("3"));
        assert_eq!(cg(-4), s("1"));
        assert_eq!(cg(-3), s("1"));
        assert_eq!(cg(-84), s("2,2"));
        assert_eq!(cg(-420), s("2,2,2"));
        assert_eq!(cg(-3299), s("9,3"));
        assert_eq!(cg(-4027), s("3,3"));
        assert_eq!(cg(-97583).p_part(3), s("3,3"));
    }

    #[test]
    fn real_class_groups() {
        assert_eq!(cg(5), s("1"));
        assert_eq!(cg(12), s("1"));
        assert_eq!(narrow(12), s("2"));
        assert_eq!(cg(40), s("2"));
        assert_eq!(narrow(40), s("2"));
        assert_eq!(cg(60), s("2"));
        assert_eq!(narrow(60), s("2,2"));
        assert_eq!(cg(229), s("3"));
        assert_eq!(cg(316), s("3"));
        assert_eq!(cg(401), s("5"));
    }

    #[test]
    fn p_rank_examples() {
        assert_eq!(p_rank(-23, 3).unwrap(), 1);
        assert_eq!(p_rank(-4, 3).unwrap(), 0);
        assert_eq!(p_rank(-97583, 3).unwrap(), 2);
    }

    #[test]
    fn errors() {
        assert_eq!(p_rank(-12, 3), Err(QuadError::NotFundamental(-12)));
        let big = -1_721_475_527;
        assert!(matches!(
            class_group(big, &ClassGroupOptions::default()),
            Err(QuadError::BoundExceeded { .. })
        ));
        assert!(matches!(ClassTable::new(6), Err(QuadError::InvalidDiscriminant(6))));
    }

    #[test]
    fn non_maximal_order() {
        // the order of conductor 2 in Z[(1+sqrt(-3))/2] has class number 1
        let g = class_group_of_order(-12, &ClassGroupOptions::default()).unwrap();
        assert_eq!(g.structure, s("1"));
        let g = class_group_of_order(-36, &ClassGroupOptions::default()).unwrap();
        assert_eq!(g.structure, s("2"));
    }

    #[test]
    fn generators_span_with_stated_orders() {
        for d in [-3299i64, -4027, -420, -103, 229, 60] {
            let opts = ClassGroupOptions { narrow: true, extended: false };
            let g = class_group(d, &opts).unwrap();
            let prod: u128 = g.generators.iter().map(|&(_, o)| o as u128).product();
            assert!(prod >= g.class_number(), "d={d}");
            for (f, o) in &g.generators {
                assert_eq!(f.disc(), d);
                let e = f.pow(*o).unwrap();
                let t = ClassTable::new(d).unwrap();
                assert_eq!(t.class_of(&e), t.identity());
            }
        }
    }
}
