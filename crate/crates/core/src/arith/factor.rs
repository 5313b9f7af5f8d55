use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{mod_pow, mul_mod, ArithError, Decision};

/// Work limits for [`factorize`] and [`is_squarefree`].
///
/// Trial division runs over all candidates up to `trial_limit`; afterwards
/// each composite cofactor gets at most `rho_iterations` steps of Brent's
/// variant of Pollard rho (spread over a fixed number of seeded restarts).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Effort {
    pub trial_limit: u64,
    pub rho_iterations: u64,
}

impl Default for Effort {
    fn default() -> Self {
        Effort {
            trial_limit: 1_000_000,
            rho_iterations: 2_000_000,
        }
    }
}

impl Effort {
    pub fn tiny() -> Self {
        Effort {
            trial_limit: 100,
            rho_iterations: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Complete,
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Prime factors in increasing order with their exponents.
    pub factors: Vec<(BigInt, u32)>,
    /// Unfactored part of `|n|`; `1` when the factorization is complete.
    pub cofactor: BigInt,
    pub status: Status,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }

    /// Product of all prime powers and the cofactor.
    pub fn reassemble(&self) -> BigInt {
        self.factors
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }
}

const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const MR_RANDOM_ROUNDS: usize = 24;
const MR_SEED: u64 = 0x5eed_cafe;

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_U64 {
        if n % p == 0 {
            return n == p;
        }
    }
    let n128 = n as u128;
    let mut d = n128 - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for &a in &MR_BASES_U64 {
        let mut x = mod_pow(a as u128, d, n128);
        if x == 1 || x == n128 - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n128);
            if x == n128 - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality test: deterministic below 2^64, Miller-Rabin with the fixed
/// bases plus seeded random bases above.
pub fn is_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let n = n.magnitude();
    for &p in &MR_BASES_U64 {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut rng = ChaCha8Rng::seed_from_u64(MR_SEED);
    let fixed = MR_BASES_U64.iter().map(|&b| BigUint::from(b));
    let random: Vec<BigUint> = (0..MR_RANDOM_ROUNDS)
        .map(|_| BigUint::from(rng.gen_range(2u64..u64::MAX)) % (n - 3u32) + 2u32)
        .collect();
    'witness: for a in fixed.chain(random) {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factor `|n|` within the given effort budget.
pub fn factorize(n: &BigInt, effort: Effort) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let mut rest = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();

    let push = |p: BigInt, e: u32, factors: &mut Vec<(BigInt, u32)>| {
        if let Some(slot) = factors.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += e;
        } else {
            factors.push((p, e));
        }
    };

    // Trial division.
    let mut p = 2u64;
    while p <= effort.trial_limit {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            push(pb, e, &mut factors);
        }
        p += if p == 2 { 1 } else { 2 };
    }

    let mut leftover = BigInt::one();
    if !rest.is_one() {
        let trial_done = {
            let pb = BigInt::from(p);
            &pb * &pb > rest
        };
        if trial_done || is_prime(&rest) {
            push(rest, 1, &mut factors);
        } else {
            // Split composites with rho until primes or budget exhaustion.
            let mut stack = vec![rest];
            let mut rng = ChaCha8Rng::seed_from_u64(MR_SEED);
            while let Some(m) = stack.pop() {
                if m.is_one() {
                    continue;
                }
                if is_prime(&m) {
                    push(m, 1, &mut factors);
                    continue;
                }
                if let Some(r) = perfect_power_root(&m) {
                    // m = r^k: recurse on r, k copies
                    let mut k = 0;
                    let mut t = m.clone();
                    while (&t % &r).is_zero() {
                        t /= &r;
                        k += 1;
                    }
                    for _ in 0..k {
                        stack.push(r.clone());
                    }
                    continue;
                }
                match brent_rho(&m, effort.rho_iterations, &mut rng) {
                    Some(f) => {
                        let g = &m / &f;
                        stack.push(f);
                        stack.push(g);
                    }
                    None => leftover *= m,
                }
            }
        }
    }

    factors.sort();
    let status = if leftover.is_one() {
        Status::Complete
    } else {
        Status::Partial
    };
    Ok(Factorization {
        factors,
        cofactor: leftover,
        status,
    })
}

/// `yes`/`no` when decidable within the budget; `unknown` otherwise.
pub fn is_squarefree(n: &BigInt, effort: Effort) -> Result<Decision, ArithError> {
    let f = factorize(n, effort)?;
    if f.factors.iter().any(|(_, e)| *e > 1) {
        return Ok(Decision::No);
    }
    if f.is_complete() {
        return Ok(Decision::Yes);
    }
    // A partial cofactor could still be a perfect square (or share a factor
    // with itself in a way rho did not reveal): only squares are cheap to detect.
    if super::exact_sqrt(&f.cofactor).is_some() {
        return Ok(Decision::No);
    }
    Ok(Decision::Unknown)
}

fn perfect_power_root(m: &BigInt) -> Option<BigInt> {
    let bits = m.bits();
    for k in 2..=bits as u32 {
        let r = m.nth_root(k);
        if r <= BigInt::one() {
            break;
        }
        if num_traits::pow(r.clone(), k as usize) == *m {
            return Some(r);
        }
    }
    None
}

/// Brent's cycle-finding variant of Pollard rho with seeded restarts.
fn brent_rho(n: &BigInt, budget: u64, rng: &mut ChaCha8Rng) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let restarts = 8u64;
    let per_try = (budget / restarts).max(1);
    for _ in 0..restarts {
        let c = BigInt::from(rng.gen_range(1u64..1_000_000)) % n;
        let y0 = BigInt::from(rng.gen_range(2u64..1_000_000)) % n;
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut y, mut r, mut q) = (y0, 1u64, BigInt::one());
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 64u64;
        let mut steps = 0u64;
        while g.is_one() && steps < per_try {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
                steps += m;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}
