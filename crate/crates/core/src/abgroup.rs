//! Finite abelian groups in invariant-factor form.
//!
//! Storage is the divisibility chain `n_1 | n_2 | ... | n_k` (ascending, all
//! `n_i >= 2`); the trivial group is the empty chain. Rendering uses the
//! descending notation common in class-group tables, e.g. `300,20,4,4`, and
//! [`AbelianGroupStructure::render_prime_powers`] gives `3^2,3`-style output.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ParseGroupError {
    #[error("empty group description")]
    Empty,
    #[error("token {0:?} is not a positive integer")]
    BadToken(String),
    #[error("cyclic factor of order {0} is not allowed (orders must be >= 1)")]
    NonPositive(i64),
    #[error("group order overflows")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct AbelianGroupStructure {
    invariant_factors: Vec<u64>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders(&[n])
    }

    /// Canonical form of a product of cyclic groups of the given orders.
    /// Orders equal to 1 are ignored; 0 is not accepted.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &n in orders {
            assert!(n > 0, "cyclic order must be positive");
            for (p, e) in factor_u64(n) {
                by_prime.entry(p).or_default().push(p.pow(e));
            }
        }
        Self::from_prime_powers(by_prime)
    }

    fn from_prime_powers(mut by_prime: BTreeMap<u64, Vec<u64>>) -> Self {
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        // The largest invariant factor collects the largest prime power of
        // every prime, and so on down.
        let mut factors = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in powers.iter().enumerate() {
                factors[i] = factors[i].checked_mul(*q).expect("group order overflow");
            }
        }
        factors.reverse();
        AbelianGroupStructure {
            invariant_factors: factors,
        }
    }

    /// Invariant factors, each dividing the next.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> u128 {
        self.invariant_factors.iter().map(|&n| n as u128).product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    /// Sylow p-subgroup.
    pub fn p_part(&self, p: u64) -> Self {
        let factors: Vec<u64> = self
            .invariant_factors
            .iter()
            .map(|&n| p.pow(valuation_u64(n, p)))
            .filter(|&q| q > 1)
            .collect();
        AbelianGroupStructure {
            invariant_factors: factors,
        }
    }

    /// Number of invariant factors divisible by `p`.
    pub fn p_rank(&self, p: u64) -> usize {
        self.invariant_factors.iter().filter(|&&n| n % p == 0).count()
    }

    /// Exponents `e_i` with the p-part equal to `prod Z/p^e_i`, descending.
    pub fn p_exponents(&self, p: u64) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .invariant_factors
            .iter()
            .map(|&n| valuation_u64(n, p))
            .filter(|&e| e > 0)
            .collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// `prod (Z/p^e)` over the given exponents (zeros ignored).
    pub fn from_p_exponents(p: u64, exps: &[u32]) -> Self {
        let orders: Vec<u64> = exps.iter().filter(|&&e| e > 0).map(|&e| p.pow(e)).collect();
        Self::from_cyclic_orders(&orders)
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self == other
    }

    pub fn direct_product(&self, other: &Self) -> Self {
        let mut orders = self.invariant_factors.clone();
        orders.extend_from_slice(&other.invariant_factors);
        Self::from_cyclic_orders(&orders)
    }

    /// Primes dividing the order.
    pub fn primes(&self) -> Vec<u64> {
        match self.invariant_factors.last() {
            Some(&n) => factor_u64(n).into_iter().map(|(p, _)| p).collect(),
            None => vec![],
        }
    }

    /// `3^2,3` style rendering of the elementary divisors, grouped by prime.
    pub fn render_prime_powers(&self) -> String {
        if self.is_trivial() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for p in self.primes() {
            for e in self.p_exponents(p) {
                parts.push(if e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                });
            }
        }
        parts.join(",")
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .rev()
            .map(u64::to_string)
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parse a comma-separated list of cyclic orders, e.g. `300,20,4,4`,
/// `(3^2,3)` or `1`. Surrounding parentheses and whitespace are ignored;
/// tokens may be written as `p^k`.
pub fn parse(text: &str) -> Result<AbelianGroupStructure, ParseGroupError> {
    let t = text.trim();
    let t = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(t)
        .trim();
    if t.is_empty() {
        return Err(ParseGroupError::Empty);
    }
    let mut orders = Vec::new();
    for tok in t.split(',') {
        let tok = tok.trim();
        let value = match tok.split_once('^') {
            Some((base, exp)) => {
                let b = parse_int(base)?;
                let e: u32 = exp
                    .trim()
                    .parse()
                    .map_err(|_| ParseGroupError::BadToken(tok.to_string()))?;
                if b <= 0 {
                    return Err(ParseGroupError::NonPositive(b));
                }
                (b as u64).checked_pow(e).ok_or(ParseGroupError::Overflow)?
            }
            None => {
                let v = parse_int(tok)?;
                if v <= 0 {
                    return Err(ParseGroupError::NonPositive(v));
                }
                v as u64
            }
        };
        orders.push(value);
    }
    let order_ok = orders
        .iter()
        .try_fold(1u128, |acc, &n| acc.checked_mul(n as u128))
        .is_some_and(|o| o <= u64::MAX as u128);
    if !order_ok {
        return Err(ParseGroupError::Overflow);
    }
    Ok(AbelianGroupStructure::from_cyclic_orders(&orders))
}

fn parse_int(tok: &str) -> Result<i64, ParseGroupError> {
    tok.trim()
        .parse::<i64>()
        .map_err(|_| ParseGroupError::BadToken(tok.trim().to_string()))
}

impl FromStr for AbelianGroupStructure {
    type Err = ParseGroupError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl From<AbelianGroupStructure> for String {
    fn from(g: AbelianGroupStructure) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for AbelianGroupStructure {
    type Error = ParseGroupError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        parse(&s)
    }
}

pub(crate) fn valuation_u64(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Trial-division factorization of a machine integer.
pub(crate) fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(s: &str) -> AbelianGroupStructure {
        parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(g("3,3").invariant_factors(), &[3, 3]);
        assert!(g("1").is_trivial());
        assert!(g("(1)").is_trivial());
        assert_eq!(g("15,5").invariant_factors(), &[5, 15]);
        assert_eq!(g("(3^2,3)").invariant_factors(), &[3, 9]);
        assert_eq!(g("300,20,4,4").invariant_factors(), &[4, 4, 20, 300]);
        assert_eq!(g("6,2").invariant_factors(), &[2, 6]);
        assert_eq!(g("2,3").invariant_factors(), &[6]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse("3,x"), Err(ParseGroupError::BadToken(_))));
        assert_eq!(parse("0,3"), Err(ParseGroupError::NonPositive(0)));
        assert_eq!(parse("-3"), Err(ParseGroupError::NonPositive(-3)));
        assert_eq!(parse("  "), Err(ParseGroupError::Empty));
    }

    #[test]
    fn p_parts() {
        assert_eq!(g("15,5").p_part(3), g("3"));
        assert_eq!(g("300,20,4,4").p_part(5), g("25,5"));
        assert_eq!(g("300,20,4,4").p_part(5).invariant_factors(), &[5, 25]);
        assert!(AbelianGroupStructure::trivial().p_part(7).is_trivial());
        assert_eq!(g("300,20,4,4").p_part(2), g("4,4,4,4"));
    }

    #[test]
    fn p_ranks() {
        assert_eq!(g("3,3").p_rank(3), 2);
        assert_eq!(g("15,5").p_rank(5), 2);
        assert_eq!(AbelianGroupStructure::trivial().p_rank(3), 0);
        assert_eq!(g("270,3,3,3,3").p_rank(3), 5);
    }

    #[test]
    fn products() {
        assert!(g("3,3").is_isomorphic(&g("3,3")));
        assert_eq!(g("4,4").direct_product(&g("4,4")), g("4,4,4,4"));
        let t = AbelianGroupStructure::trivial();
        assert_eq!(t.direct_product(&g("20,20")), g("20,20"));
    }

    #[test]
    fn render() {
        assert_eq!(g("300,20,4,4").to_string(), "300,20,4,4");
        assert_eq!(g("9,3").render_prime_powers(), "3^2,3");
        assert_eq!(g("15,5").render_prime_powers(), "3,5,5");
        assert_eq!(AbelianGroupStructure::trivial().to_string(), "1");
    }

    /// Count of elements killed by `n`, computed by brute force over the
    /// product of cyclic groups.
    fn brute_kernel_count(orders: &[u64], n: u64) -> u64 {
        orders.iter().map(|&m| (0..m).filter(|x| (x * n) % m == 0).count() as u64).product()
    }

    fn small_orders() -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(1u64..60, 0..5)
    }

    proptest! {
        #[test]
        fn render_parse_roundtrip(orders in small_orders()) {
            let grp = AbelianGroupStructure::from_cyclic_orders(&orders);
            prop_assert_eq!(parse(&grp.to_string()).unwrap(), grp.clone());
            prop_assert_eq!(parse(&grp.render_prime_powers()).unwrap(), grp);
        }

        #[test]
        fn canonical_form_invariants(orders in small_orders()) {
            let grp = AbelianGroupStructure::from_cyclic_orders(&orders);
            let inv = grp.invariant_factors();
            prop_assert!(inv.windows(2).all(|w| w[1] % w[0] == 0));
            prop_assert!(inv.iter().all(|&n| n >= 2));
            prop_assert_eq!(grp.order(), orders.iter().map(|&n| n as u128).product::<u128>());
        }

        #[test]
        fn p_rank_counts_p_torsion(orders in small_orders(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let grp = AbelianGroupStructure::from_cyclic_orders(&orders);
            let torsion = brute_kernel_count(&orders, p);
            prop_assert_eq!(p.pow(grp.p_rank(p) as u32), torsion);
            prop_assert_eq!(grp.p_rank(p), grp.p_part(p).p_rank(p));
        }

        #[test]
        fn product_laws(a in small_orders(), b in small_orders(), p in prop::sample::select(vec![2u64, 3, 5])) {
            let ga = AbelianGroupStructure::from_cyclic_orders(&a);
            let gb = AbelianGroupStructure::from_cyclic_orders(&b);
            let prod = ga.direct_product(&gb);
            prop_assert_eq!(prod.order(), ga.order() * gb.order());
            prop_assert_eq!(prod.p_part(p), ga.p_part(p).direct_product(&gb.p_part(p)));
            prop_assert_eq!(prod.clone(), gb.direct_product(&ga));
        }
    }
}
