//! Cubic fields of bounded discriminant from integral binary cubic forms.
//!
//! `F = a x^3 + b x^2 y + c x y^2 + d y^3`, with `GL2(Z)` acting by
//! substitution `F∘γ (x, y) = F(p x + q y, r x + s y)` for `γ = [[p, q], [r, s]]`.
//! Together with `F ~ -F` (the action of `-I`), classes of irreducible forms
//! whose ring is maximal correspond to cubic fields (Davenport–Heilbronn).
//!
//! Reduced representatives:
//!
//! * `disc > 0`: the Hessian `H = (P, Q, R)` is positive definite and the
//!   form is reduced when `0 <= Q <= P <= R` and `a > 0`. Several forms of a
//!   class can share the reduced Hessian (they differ by an automorph of
//!   `H`), so each class is canonicalized to the lexicographically smallest
//!   `(a, b, c, d)` among them.
//! * `disc < 0`: let `τ` be the root of `F(x, 1)` in the upper half plane.
//!   The form is reduced when `a > 0` and `τ` lies in the interior of the
//!   `PGL2(Z)` fundamental domain, `0 < Re τ < 1/2`, `|τ| > 1`. In
//!   coefficients: `ad - bc > 0`, `F(-(a + b), a) < 0`, and
//!   `F(-d, a) < 0` if `d > 0`, `F(-d, a) > 0` if `d < 0`. For irreducible
//!   `F`, `τ` is never on the boundary, so the reduced form is unique.
//!
//! Enumeration bounds (with `X` the discriminant bound):
//!
//! * `disc > 0`: `3 disc = 4PR - Q^2 >= 3P^2` gives `P <= sqrt X`;
//!   `4P^3 = G0^2 + 27 disc a^2` gives `a^2 <= 4 sqrt(X) / 27`. Writing
//!   `H(x, 1)` as `(a^2 / 2) Σ (θi - θj)^2 (x - θk)^2` over the real roots,
//!   `-Q / 2P ∈ [-1/2, 0]` is a weighted mean of the roots and
//!   `|b| <= 3a/2 + 3 sqrt(2P)`. Then `c` follows from `P`, and `d` from
//!   `0 <= Q <= P`.
//! * `disc < 0`: `|disc| = 4 a^4 |θ - τ|^4 (Im τ)^2` with `Im τ >= sqrt(3)/2`
//!   gives `a^4 <= 16 X / 27`, `|θ - τ| <= T = (X / 3a^4)^(1/4)` and
//!   `Im τ <= (X / 4a^4)^(1/6)`, which bound `b` and `c`; `d` ranges over the
//!   interval where the discriminant, a concave quadratic in `d`, is `>= -X`.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::arith::isqrt_u128;

/// Largest discriminant bound accepted by [`enumerate_fields`].
pub const DEFAULT_MAX_BOUND: i64 = 1_000_000;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CubicError {
    #[error("bound {bound} exceeds the configured maximum {max}")]
    BoundExceeded { bound: i64, max: i64 },
    #[error("{n} fields of discriminant {disc}: 2n + 1 is not a power of 3")]
    NotPowerOfThree { disc: i64, n: usize },
    #[error("discriminant must be non-zero")]
    ZeroDiscriminant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryCubicForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

pub type Gl2 = [[i64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Positive,
}

impl BinaryCubicForm {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        BinaryCubicForm { a, b, c, d }
    }

    fn wide(&self) -> [i128; 4] {
        [self.a as i128, self.b as i128, self.c as i128, self.d as i128]
    }

    pub fn disc(&self) -> i128 {
        let [a, b, c, d] = self.wide();
        18 * a * b * c * d + b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d
    }

    /// Hessian covariant `(P, Q, R) = (b^2 - 3ac, bc - 9ad, c^2 - 3bd)`.
    pub fn hessian(&self) -> (i128, i128, i128) {
        let [a, b, c, d] = self.wide();
        (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        let [a, b, c, d] = self.wide();
        a * x * x * x + b * x * x * y + c * x * y * y + d * y * y * y
    }

    pub fn negate(&self) -> Self {
        BinaryCubicForm::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// `F(p x + q y, r x + s y)`.
    pub fn transform(&self, g: &Gl2) -> Self {
        let [a, b, c, d] = self.wide();
        let [[p, q], [r, s]] = g.map(|row| row.map(i128::from));
        // expand each monomial x'^i y'^(3-i) with x' = p x + q y, y' = r x + s y
        let lin = |u: i128, v: i128| [u, v];
        let mul = |f: &[i128], l: [i128; 2]| -> Vec<i128> {
            let mut out = vec![0i128; f.len() + 1];
            for (i, &t) in f.iter().enumerate() {
                out[i] += t * l[0];
                out[i + 1] += t * l[1];
            }
            out
        };
        let xp = lin(p, q);
        let yp = lin(r, s);
        let terms = [
            (a, mul(&mul(&[p, q], xp), xp)),
            (b, mul(&mul(&[p, q], xp), yp)),
            (c, mul(&mul(&[p, q], yp), yp)),
            (d, mul(&mul(&[r, s], yp), yp)),
        ];
        let mut out = [0i128; 4];
        for (coef, poly) in terms {
            for (i, t) in poly.iter().enumerate() {
                out[i] += coef * t;
            }
        }
        let n = |x: i128| i64::try_from(x).expect("cubic form coefficient overflow");
        BinaryCubicForm::new(n(out[0]), n(out[1]), n(out[2]), n(out[3]))
    }

    /// No linear factor over the rationals.
    pub fn is_irreducible(&self) -> bool {
        let (a, d) = (self.a, self.d);
        if a == 0 || d == 0 {
            return false;
        }
        // a root x/y in lowest terms has x | d and y | a
        let dx = divisors(d.unsigned_abs());
        for y in divisors(a.unsigned_abs()) {
            for &x in &dx {
                for sx in [x as i128, -(x as i128)] {
                    if self.eval(sx, y as i128) == 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Whether the associated cubic ring is maximal at `p`.
    ///
    /// Non-maximal iff `F ≡ 0 (mod p)`, or `F` has a multiple root mod `p`
    /// which, once moved to `[1 : 0]`, leaves `p^2 | a`.
    pub fn is_maximal_at(&self, p: u64) -> bool {
        let pi = p as i128;
        let w = self.wide();
        if w.iter().all(|x| x.rem_euclid(pi) == 0) {
            return false;
        }
        let Some((alpha, beta)) = self.multiple_root_mod(p) else {
            return true;
        };
        // γ with first column (alpha, beta) and determinant 1
        let g: Gl2 = if beta == 0 { [[1, 0], [0, 1]] } else { [[alpha, -1], [1, 0]] };
        let moved = self.transform(&g);
        (moved.a as i128).rem_euclid(pi * pi) != 0
    }

    fn multiple_root_mod(&self, p: u64) -> Option<(i64, i64)> {
        let pi = p as i128;
        let [a, b, c, d] = self.wide();
        let vanishes = |x: i128, y: i128| {
            let f = self.eval(x, y);
            let fx = 3 * a * x * x + 2 * b * x * y + c * y * y;
            let fy = b * x * x + 2 * c * x * y + 3 * d * y * y;
            [f, fx, fy].iter().all(|v| v.rem_euclid(pi) == 0)
        };
        if vanishes(1, 0) {
            return Some((1, 0));
        }
        (0..p as i64).find(|&r| vanishes(r as i128, 1)).map(|r| (r, 1))
    }

    /// Maximal at every prime whose square divides the discriminant.
    pub fn is_maximal(&self) -> bool {
        let disc = self.disc();
        if disc == 0 {
            return false;
        }
        square_divisor_primes(disc.unsigned_abs()).into_iter().all(|p| self.is_maximal_at(p))
    }

    /// Reduced representative of the class (see module docs); `None` for
    /// zero discriminant. For `disc < 0` the form must be irreducible.
    pub fn reduce(&self) -> Option<BinaryCubicForm> {
        let disc = self.disc();
        if disc > 0 {
            Some(self.reduce_positive())
        } else if disc < 0 {
            self.reduce_negative()
        } else {
            None
        }
    }

    fn reduce_positive(&self) -> BinaryCubicForm {
        let mut f = *self;
        loop {
            let (p, q, r) = f.hessian();
            if q.abs() > p {
                // x -> x + n y moves Q to Q + 2Pn
                let n = -(q + p).div_euclid(2 * p);
                f = f.transform(&[[1, n as i64], [0, 1]]);
            } else if p > r {
                f = f.transform(&[[0, -1], [1, 0]]);
            } else {
                break;
            }
        }
        if f.hessian().1 < 0 {
            f = f.transform(&[[1, 0], [0, -1]]);
        }
        if f.a < 0 {
            f = f.negate();
        }
        canonical_positive(&f)
    }

    fn reduce_negative(&self) -> Option<BinaryCubicForm> {
        if !self.is_irreducible() {
            return None;
        }
        let mut f = *self;
        for _ in 0..10_000 {
            if f.a < 0 {
                f = f.negate();
            }
            let u = complex_root_re(&f);
            let (a, b) = (f.a as i128, f.b as i128);
            if u.abs() > 2.0 {
                f = f.transform(&[[1, u.round() as i64], [0, 1]]);
            } else if f.eval(-(a + b), a) > 0 {
                // Re τ > 1/2
                f = f.transform(&[[1, 1], [0, 1]]);
            } else if f.eval(a - b, a) < 0 {
                // Re τ < -1/2
                f = f.transform(&[[1, -1], [0, 1]]);
            } else if !outside_unit_circle(&f) {
                f = f.transform(&[[0, -1], [1, 0]]);
            } else {
                if (f.a as i128) * (f.d as i128) - (f.b as i128) * (f.c as i128) < 0 {
                    f = f.transform(&[[-1, 0], [0, 1]]);
                    if f.a < 0 {
                        f = f.negate();
                    }
                }
                debug_assert!(is_reduced_negative(&f));
                return Some(f);
            }
        }
        None
    }
}

impl std::fmt::Display for BinaryCubicForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// `|τ| > 1` for the upper root `τ`, given `a > 0`.
fn outside_unit_circle(f: &BinaryCubicForm) -> bool {
    let (a, d) = (f.a as i128, f.d as i128);
    let v = f.eval(-d, a);
    if d > 0 {
        v < 0
    } else {
        v > 0
    }
}

fn is_reduced_negative(f: &BinaryCubicForm) -> bool {
    let [a, b, c, d] = f.wide();
    a > 0 && a * d - b * c > 0 && f.eval(-(a + b), a) < 0 && d != 0 && outside_unit_circle(f)
}

/// Real part of the non-real roots of `F(x, 1)` (disc < 0), approximately.
fn complex_root_re(f: &BinaryCubicForm) -> f64 {
    let [a, b, c, d] = [f.a, f.b, f.c, f.d].map(|x| x as f64);
    let g = |x: f64| ((a * x + b) * x + c) * x + d;
    let bound = 1.0 + [b, c, d].iter().map(|v| (v / a).abs()).fold(0.0, f64::max);
    // a > 0: g(-bound) < 0 < g(bound)
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    (-b / a - theta) / 2.0
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn square_divisor_primes(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e >= 2 {
                out.push(p as u64);
            }
        }
        p += 1;
    }
    out
}

/// `GL2(Z)` automorphs of a reduced positive definite form, brute force:
/// automorphs of a reduced form have entries in `{-1, 0, 1}`.
fn automorphs(h: (i128, i128, i128)) -> Vec<Gl2> {
    let (p, q, r) = h;
    let mut out = Vec::new();
    let vals = [-1i64, 0, 1];
    for &g00 in &vals {
        for &g01 in &vals {
            for &g10 in &vals {
                for &g11 in &vals {
                    let det = g00 * g11 - g01 * g10;
                    if det.abs() != 1 {
                        continue;
                    }
                    let (x0, x1, y0, y1) = (g00 as i128, g01 as i128, g10 as i128, g11 as i128);
                    let h_at = |x: i128, y: i128| p * x * x + q * x * y + r * y * y;
                    // image of the form under x -> x0 x + x1 y, y -> y0 x + y1 y
                    let np = h_at(x0, y0);
                    let nr = h_at(x1, y1);
                    let nq = h_at(x0 + x1, y0 + y1) - np - nr;
                    if (np, nq, nr) == (p, q, r) {
                        out.push([[g00, g01], [g10, g11]]);
                    }
                }
            }
        }
    }
    out
}

/// Smallest `(a, b, c, d)` with `a > 0` among the images of `f` under the
/// automorphs of its (reduced) Hessian.
fn canonical_positive(f: &BinaryCubicForm) -> BinaryCubicForm {
    let mut best = *f;
    for g in automorphs(f.hessian()) {
        let mut t = f.transform(&g);
        if t.a < 0 {
            t = t.negate();
        }
        if t < best {
            best = t;
        }
    }
    best
}

fn hessian_reduced(h: (i128, i128, i128)) -> bool {
    let (p, q, r) = h;
    0 <= q && q <= p && p <= r
}

/// Count of cubic fields of one discriminant, with one reduced form each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldCount {
    pub disc: i64,
    pub n_fields: usize,
    pub forms: Vec<BinaryCubicForm>,
}

fn check_bound(bound: i64) -> Result<(), CubicError> {
    if bound > DEFAULT_MAX_BOUND {
        return Err(CubicError::BoundExceeded {
            bound,
            max: DEFAULT_MAX_BOUND,
        });
    }
    Ok(())
}

/// Reduced irreducible maximal forms with leading coefficient `a` and
/// `0 < disc <= x`.
fn positive_forms_with_a(a: i64, x: i64, only: Option<i64>) -> Vec<BinaryCubicForm> {
    let sx = isqrt_u128(x as u128) as i64;
    let bmax = (1.5 * a as f64 + 3.0 * (2.0 * sx as f64).sqrt()).ceil() as i64 + 1;
    let mut seen = HashSet::new();
    for b in -bmax..=bmax {
        // P = b^2 - 3ac in [1, sx]
        let clo = (b * b - sx).div_euclid(3 * a) + i64::from((b * b - sx).rem_euclid(3 * a) != 0);
        let chi = (b * b - 1).div_euclid(3 * a);
        for c in clo..=chi {
            let p = b * b - 3 * a * c;
            // Q = bc - 9ad in [0, P]
            let dlo = (b * c - p).div_euclid(9 * a) + i64::from((b * c - p).rem_euclid(9 * a) != 0);
            let dhi = (b * c).div_euclid(9 * a);
            for d in dlo..=dhi {
                let f = BinaryCubicForm::new(a, b, c, d);
                let disc = f.disc();
                if disc <= 0 || disc > x as i128 || only.is_some_and(|o| o as i128 != disc) {
                    continue;
                }
                if !hessian_reduced(f.hessian()) || !f.is_irreducible() || !f.is_maximal() {
                    continue;
                }
                seen.insert(canonical_positive(&f));
            }
        }
    }
    seen.into_iter().collect()
}

fn negative_forms_with_a(a: i64, x: i64, only: Option<i64>) -> Vec<BinaryCubicForm> {
    let (af, xf) = (a as f64, x as f64);
    let t = (xf / (3.0 * af.powi(4))).powf(0.25);
    let vmax = (xf / (4.0 * af.powi(4))).powf(1.0 / 6.0);
    let blo = (-af * (t + 1.5)).floor() as i64 - 1;
    let bhi = (af * t).ceil() as i64 + 1;
    let clo = (-af * (t + 0.5)).floor() as i64 - 1;
    let chi = (af * (t + 0.75 + vmax * vmax)).ceil() as i64 + 1;
    let (a2, x2) = (a as i128, x as i128);
    let mut out = Vec::new();
    for b in blo..=bhi {
        for c in clo..=chi {
            let (b2, c2) = (b as i128, c as i128);
            // disc(d) = -27 a^2 d^2 + B d + C
            let bb = 18 * a2 * b2 * c2 - 4 * b2 * b2 * b2;
            let cc = b2 * b2 * c2 * c2 - 4 * a2 * c2 * c2 * c2;
            let (dlo, dhi) = match only {
                Some(o) => {
                    // exact roots of -27 a^2 d^2 + B d + (C - o) = 0
                    let delta = bb * bb + 108 * a2 * a2 * (cc - o as i128);
                    if delta < 0 {
                        continue;
                    }
                    let r = isqrt_u128(delta as u128) as i128;
                    if r * r != delta {
                        continue;
                    }
                    let den = 54 * a2 * a2;
                    let mut ds = Vec::new();
                    for num in [bb - r, bb + r] {
                        if num % den == 0 {
                            ds.push((num / den) as i64);
                        }
                    }
                    for d in ds {
                        push_negative(&mut out, a, b, c, d, x2, only);
                    }
                    continue;
                }
                None => {
                    let delta = bb * bb + 108 * a2 * a2 * (cc + x2);
                    if delta < 0 {
                        continue;
                    }
                    let r = isqrt_u128(delta as u128) as i128 + 1;
                    let den = 54 * a2 * a2;
                    ((bb - r).div_euclid(den) as i64, (bb + r).div_euclid(den) as i64 + 1)
                }
            };
            for d in dlo..=dhi {
                push_negative(&mut out, a, b, c, d, x2, only);
            }
        }
    }
    out
}

fn push_negative(out: &mut Vec<BinaryCubicForm>, a: i64, b: i64, c: i64, d: i64, x: i128, only: Option<i64>) {
    let f = BinaryCubicForm::new(a, b, c, d);
    let disc = f.disc();
    if disc >= 0 || disc < -x || only.is_some_and(|o| o as i128 != disc) {
        return;
    }
    if is_reduced_negative(&f) && f.is_irreducible() && f.is_maximal() && !out.contains(&f) {
        out.push(f);
    }
}

fn collect(
    bound: i64,
    sign: Sign,
    only: Option<i64>,
) -> BTreeMap<i64, Vec<BinaryCubicForm>> {
    let amax = match sign {
        Sign::Positive => {
            let sx = isqrt_u128(bound as u128) as f64;
            (4.0 * sx / 27.0).sqrt().floor() as i64
        }
        Sign::Negative => (16.0 * bound as f64 / 27.0).powf(0.25).floor() as i64,
    };
    let job = |a: i64| match sign {
        Sign::Positive => positive_forms_with_a(a, bound, only),
        Sign::Negative => negative_forms_with_a(a, bound, only),
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<Vec<BinaryCubicForm>> = {
        use rayon::prelude::*;
        (1..=amax).into_par_iter().map(job).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Vec<BinaryCubicForm>> = (1..=amax).map(job).collect();
    let mut by_disc: BTreeMap<i64, Vec<BinaryCubicForm>> = BTreeMap::new();
    for f in parts.into_iter().flatten() {
        by_disc.entry(f.disc() as i64).or_default().push(f);
    }
    for forms in by_disc.values_mut() {
        forms.sort();
    }
    by_disc
}

/// Cubic fields with `0 < ±disc <= bound`, one entry per discriminant that
/// has at least one field, ordered by `|disc|`.
pub fn enumerate_fields(bound: i64, sign: Sign) -> Result<Vec<FieldCount>, CubicError> {
    check_bound(bound)?;
    let mut out: Vec<FieldCount> = collect(bound, sign, None)
        .into_iter()
        .map(|(disc, forms)| FieldCount {
            disc,
            n_fields: forms.len(),
            forms,
        })
        .collect();
    out.sort_by_key(|f| f.disc.abs());
    Ok(out)
}

/// Cubic fields of exactly one discriminant.
pub fn fields_of_disc(disc: i64) -> Result<FieldCount, CubicError> {
    if disc == 0 {
        return Err(CubicError::ZeroDiscriminant);
    }
    check_bound(disc.abs())?;
    let sign = if disc > 0 { Sign::Positive } else { Sign::Negative };
    let forms = collect(disc.abs(), sign, Some(disc)).remove(&disc).unwrap_or_default();
    Ok(FieldCount {
        disc,
        n_fields: forms.len(),
        forms,
    })
}

/// 3-rank of the class group of discriminant `d` from the field count,
/// `n = (3^r - 1) / 2`.
pub fn r3_from_count(d: i64) -> Result<u32, CubicError> {
    r3_from_n(d, fields_of_disc(d)?.n_fields)
}

pub fn r3_from_n(d: i64, n: usize) -> Result<u32, CubicError> {
    let mut m = 2 * n + 1;
    let mut r = 0;
    while m % 3 == 0 {
        m /= 3;
        r += 1;
    }
    if m != 1 {
        return Err(CubicError::NotPowerOfThree { disc: d, n });
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hessian_examples() {
        assert_eq!(BinaryCubicForm::new(1, 0, -1, 0).hessian(), (3, 0, 1));
        // Q = bc - 9ad = -9 * 1 * (-1)
        assert_eq!(BinaryCubicForm::new(1, 0, 0, -1).hessian(), (0, 9, 0));
    }

    #[test]
    fn disc_and_transform() {
        let f = BinaryCubicForm::new(1, 0, -1, -1);
        assert_eq!(f.disc(), -23);
        let g = f.transform(&[[2, 1], [1, 1]]);
        assert_eq!(g.disc(), -23);
        assert_eq!(g.reduce().unwrap().reduce(), g.reduce());
    }

    #[test]
    fn irreducibility() {
        assert!(BinaryCubicForm::new(1, 0, -1, -1).is_irreducible());
        assert!(!BinaryCubicForm::new(1, 0, 0, -1).is_irreducible());
        assert!(!BinaryCubicForm::new(2, 1, 0, 0).is_irreducible());
        // 2x^3 - x^2 y - y^3 has the root x/y = 1
        assert!(!BinaryCubicForm::new(2, -1, 0, -1).is_irreducible());
    }

    #[test]
    fn maximality() {
        // x^3 - 2 y^3: disc -108, the maximal order of Q(2^(1/3))
        let f = BinaryCubicForm::new(1, 0, 0, -2);
        assert_eq!(f.disc(), -108);
        assert!(f.is_maximal());
        // x^3 - 8 y^3 ... reducible; x^3 - 12 y^3 is Z[12^(1/3)], not maximal at 2
        let g = BinaryCubicForm::new(1, 0, 0, -12);
        assert!(!g.is_maximal_at(2));
        // 2 x^3 + ... with F ≡ 0 mod 2
        assert!(!BinaryCubicForm::new(2, 2, 4, 6).is_maximal_at(2));
    }

    #[test]
    fn small_field_counts() {
        assert_eq!(fields_of_disc(-23).unwrap().n_fields, 1);
        assert_eq!(fields_of_disc(-4).unwrap().n_fields, 0);
        assert_eq!(fields_of_disc(5).unwrap().n_fields, 0);
        assert_eq!(fields_of_disc(49).unwrap().n_fields, 1);
        assert_eq!(fields_of_disc(-108).unwrap().n_fields, 1);
        let neg = enumerate_fields(25, Sign::Negative).unwrap();
        assert_eq!(neg.len(), 1);
        assert_eq!(neg[0].disc, -23);
        assert_eq!(neg[0].n_fields, 1);
    }

    #[test]
    fn r3_examples() {
        assert_eq!(r3_from_count(-23).unwrap(), 1);
        assert_eq!(r3_from_count(5).unwrap(), 0);
        assert_eq!(r3_from_count(-4).unwrap(), 0);
        assert_eq!(r3_from_count(-3299).unwrap(), 2);
        assert!(r3_from_n(-1, 2).is_err());
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(
            enumerate_fields(2_000_000, Sign::Positive),
            Err(CubicError::BoundExceeded { .. })
        ));
    }
}
