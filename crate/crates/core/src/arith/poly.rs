//! Dense integer polynomials, resultants and discriminants.
//!
//! The resultant goes through the subresultant pseudo-remainder sequence, so
//! every intermediate value is an exact integer. The discriminant uses
//! `disc(f) = (-1)^(n(n-1)/2) / lc(f) * Res(f, f')`, which gives
//! `disc(x^2 + bx + c) = b^2 - 4c`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{factorize, ArithError, Decision, Effort};

/// Coefficients in ascending degree. Trailing zeros are always trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Homogenized value `sum c_i n^i m^(deg-i)`, which has the sign of
    /// `f(n/m)` when `m > 0`.
    pub fn eval_homogeneous(&self, n: &BigInt, m: &BigInt) -> BigInt {
        let deg = match self.degree() {
            Some(d) => d,
            None => return BigInt::zero(),
        };
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * num_traits::pow(n.clone(), i) * num_traits::pow(m.clone(), deg - i);
        }
        acc
    }

    fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(c)
    }

    fn exact_div_scalar(&self, k: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % k).is_zero());
                    c / k
                })
                .collect(),
        )
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
    fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("division by zero polynomial");
        let lb = b.leading();
        let mut r = self.clone();
        let mut e = (self.degree().unwrap_or(0) + 1).saturating_sub(db);
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading();
            r = r.scale(&lb).sub(&b.scale(&lr).shift(dr - db));
            e -= 1;
        }
        r.scale(&num_traits::pow(lb, e))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Resultant via the subresultant PRS.
pub fn resultant(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign = BigInt::one();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            sign = -sign;
        }
    }
    // Remove contents; they contribute powers to the result.
    let ca = a.content();
    let cb = b.content();
    let da = a.degree().unwrap();
    let db = b.degree().unwrap();
    a = a.exact_div_scalar(&ca);
    b = b.exact_div_scalar(&cb);
    let t = num_traits::pow(ca, db) * num_traits::pow(cb, da);

    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        if r.is_zero() {
            return BigInt::zero();
        }
        let divisor = &g * num_traits::pow(h.clone(), delta);
        b = r.exact_div_scalar(&divisor);
        g = a.leading();
        // h = g^delta / h^(delta - 1)
        h = if delta == 0 {
            h.clone()
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
        if b.degree() == Some(0) {
            let da = a.degree().unwrap();
            // h = lc(b)^deg(a) / h^(deg(a) - 1)
            let lb = b.leading();
            let hh = if da == 0 {
                h.clone()
            } else {
                num_traits::pow(lb, da) / num_traits::pow(h.clone(), da - 1)
            };
            return sign * t * hh;
        }
    }
}

/// Polynomial discriminant with the standard normalization.
pub fn poly_discriminant(f: &IntPolynomial) -> Result<BigInt, ArithError> {
    let n = f.degree().unwrap_or(0);
    if f.is_zero() || n < 2 {
        return Err(ArithError::Degree(n));
    }
    let res = resultant(f, &f.derivative());
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    let lc = f.leading();
    debug_assert!((&res % &lc).is_zero());
    Ok(BigInt::from(sign) * res / lc)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let f = factorize(&n, Effort::default()).expect("non-zero");
    let mut divs = vec![BigInt::one()];
    let mut primes = f.factors.clone();
    if !f.is_complete() {
        // fall back to treating the cofactor as a prime; it only widens the
        // candidate set, candidates are verified by evaluation
        primes.push((f.cofactor.clone(), 1));
    }
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs
}

/// Whether `f` has a rational root (rational root test).
pub fn has_rational_root(f: &IntPolynomial) -> bool {
    if f.coeff(0).is_zero() {
        return true;
    }
    let lead = f.leading();
    let tail = f.coeff(0);
    let nums = divisors(&tail);
    let dens = divisors(&lead);
    for n in &nums {
        for d in &dens {
            if n.gcd(d) != BigInt::one() {
                continue;
            }
            for s in [n.clone(), -n.clone()] {
                if f.eval_homogeneous(&s, d).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// Result of the irreducibility check, with the prime that certified it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Irreducibility {
    pub decision: Decision,
    pub witness_prime: Option<u64>,
}

const WITNESS_PRIME_BOUND: u64 = 200;

/// Irreducibility over the rationals for degrees 1 to 5.
///
/// Degrees up to 3 are decided by the rational root test. For degrees 4 and 5
/// the answer is `yes` when some prime `p <= 200` not dividing the leading
/// coefficient gives an irreducible reduction, `no` when a rational root
/// exists and `unknown` otherwise. The primitive part is used.
pub fn is_irreducible(f: &IntPolynomial) -> Result<Irreducibility, ArithError> {
    let deg = f.degree().unwrap_or(0);
    if f.is_zero() || !(1..=5).contains(&deg) {
        return Err(ArithError::Degree(deg));
    }
    let f = f.exact_div_scalar(&f.content());
    if deg == 1 {
        return Ok(Irreducibility {
            decision: Decision::Yes,
            witness_prime: None,
        });
    }
    if has_rational_root(&f) {
        return Ok(Irreducibility {
            decision: Decision::No,
            witness_prime: None,
        });
    }
    if deg <= 3 {
        return Ok(Irreducibility {
            decision: Decision::Yes,
            witness_prime: None,
        });
    }
    let lead = f.leading();
    for p in (2..=WITNESS_PRIME_BOUND).filter(|&p| super::is_prime_u64(p)) {
        if (&lead % p).is_zero() {
            continue;
        }
        let reduced: Vec<u64> = f
            .coeffs()
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap())
            .collect();
        if irreducible_mod_p(&reduced, p) {
            return Ok(Irreducibility {
                decision: Decision::Yes,
                witness_prime: Some(p),
            });
        }
    }
    Ok(Irreducibility {
        decision: Decision::Unknown,
        witness_prime: None,
    })
}

/// For degree at most 5 over F_p: irreducible iff no factor of degree 1 or 2.
fn irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    debug_assert!(deg <= 5 && f[deg] % p != 0);
    let eval = |x: u64| f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p);
    if (0..p).any(|x| eval(x) == 0) {
        return false;
    }
    if deg <= 3 {
        return true;
    }
    // Divisibility by each monic quadratic x^2 + u x + v.
    for u in 0..p {
        for v in 0..p {
            if rem_by_monic_quadratic(f, u, v, p) == (0, 0) {
                return false;
            }
        }
    }
    true
}

fn rem_by_monic_quadratic(f: &[u64], u: u64, v: u64, p: u64) -> (u64, u64) {
    let mut r: Vec<u64> = f.to_vec();
    let mut i = r.len() - 1;
    while i >= 2 {
        let c = r[i];
        if c != 0 {
            r[i] = 0;
            r[i - 1] = (r[i - 1] + p * p - c * u % p) % p;
            r[i - 2] = (r[i - 2] + p * p - c * v % p) % p;
        }
        i -= 1;
    }
    (r[0], r[1])
}
