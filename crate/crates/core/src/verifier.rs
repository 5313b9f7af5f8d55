//! Checks over dihedral instances `L/F` of degree `2p` with `L/k` unramified.
//!
//! A row records the class groups of `k`, `K` and optionally `L`, the unit
//! ranks of `F` and `k`, and optionally the unit index exponent `e`
//! (`p^e = (E_F : N E_K)`) and the capitulation exponent `rho`.
//!
//! Theorem checks return [`Verdict::Pass`] or [`Verdict::Fail`]; a failure
//! always carries the violated relation with the numbers substituted.
//! Conjectural statements are reported as [`Verdict::ConjectureConsistent`]
//! or [`Verdict::ConjectureViolated`] and never count as failures.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgroup::AbelianGroupStructure;
use crate::arith::poly::poly_discriminant;
use crate::arith::{exact_sqrt, fundamental_discriminant, is_fundamental_discriminant, is_prime_u64, squarefree_kernel, IntPolynomial};
use crate::cubicforms;
use crate::galmod::gras_predicted;
use crate::quadforms::{self, ClassGroupOptions};

pub const HEADER: [&str; 14] = [
    "p", "label", "base_field", "d", "poly_K", "cl_k", "cl_K", "cl_L", "h_F", "lambda_F", "lambda_k", "e", "rho", "case",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    ConjectureConsistent,
    ConjectureViolated,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ConjectureConsistent => "conjecture-consistent",
            Verdict::ConjectureViolated => "conjecture-violated",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub verdict: Verdict,
    pub detail: String,
}

impl CheckResult {
    fn new(verdict: Verdict, detail: impl Into<String>) -> Self {
        CheckResult { verdict, detail: detail.into() }
    }
    fn pass(detail: impl Into<String>) -> Self {
        Self::new(Verdict::Pass, detail)
    }
    fn fail(detail: impl Into<String>) -> Self {
        Self::new(Verdict::Fail, detail)
    }
    fn na(detail: impl Into<String>) -> Self {
        Self::new(Verdict::NotApplicable, detail)
    }
    fn theorem(ok: bool, detail: impl Into<String>) -> Self {
        Self::new(if ok { Verdict::Pass } else { Verdict::Fail }, detail)
    }
    fn conjecture(ok: bool, detail: impl Into<String>) -> Self {
        let v = if ok { Verdict::ConjectureConsistent } else { Verdict::ConjectureViolated };
        Self::new(v, detail)
    }
}

/// The base field `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum BaseField {
    Rationals,
    /// `Q(sqrt m)` with squarefree `m < 0`.
    ImagQuad(i64),
    /// `Q(sqrt m)` with squarefree `m > 1`.
    RealQuad(i64),
}

impl BaseField {
    pub fn unit_rank(self) -> u32 {
        match self {
            BaseField::Rationals | BaseField::ImagQuad(_) => 0,
            BaseField::RealQuad(_) => 1,
        }
    }

    fn radicand(self) -> Option<i64> {
        match self {
            BaseField::Rationals => None,
            BaseField::ImagQuad(m) | BaseField::RealQuad(m) => Some(m),
        }
    }

    pub fn contains_zeta(self, p: u64) -> bool {
        p == 3 && self == BaseField::ImagQuad(-3)
    }

    /// `e` when `E_F/E_F^p` is trivial, so that `(E_F : N E_K) = 1`.
    pub fn default_e(self, p: u64) -> Option<u32> {
        match self {
            BaseField::Rationals => Some(0),
            BaseField::ImagQuad(_) if !self.contains_zeta(p) => Some(0),
            _ => None,
        }
    }

    /// Largest possible `e`: the `p`-rank of `E_F/E_F^p`.
    pub fn max_e(self, p: u64) -> u32 {
        self.unit_rank() + u32::from(self.contains_zeta(p))
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "Q"),
            BaseField::ImagQuad(m) => write!(f, "imagquad({m})"),
            BaseField::RealQuad(m) => write!(f, "realquad({m})"),
        }
    }
}

impl FromStr for BaseField {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        if t == "Q" {
            return Ok(BaseField::Rationals);
        }
        let inner = |prefix: &str| {
            t.strip_prefix(prefix)
                .and_then(|r| r.strip_suffix(')'))
                .map(|r| r.trim().parse::<i64>().map_err(|_| format!("bad radicand in {t:?}")))
        };
        let bad = || format!("unknown base field {t:?} (expected Q, imagquad(m) or realquad(m))");
        if let Some(m) = inner("imagquad(") {
            let m = m?;
            if m >= 0 || squarefree_kernel(m) != m {
                return Err(format!("imagquad radicand {m} must be negative and squarefree"));
            }
            return Ok(BaseField::ImagQuad(m));
        }
        if let Some(m) = inner("realquad(") {
            let m = m?;
            if m <= 1 || squarefree_kernel(m) != m {
                return Err(format!("realquad radicand {m} must be > 1 and squarefree"));
            }
            return Ok(BaseField::RealQuad(m));
        }
        Err(bad())
    }
}

impl From<BaseField> for String {
    fn from(b: BaseField) -> String {
        b.to_string()
    }
}

impl TryFrom<String> for BaseField {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

/// Whether the class `c` of order `p` in `N Cl_p(L)` capitulates in `L`
/// (case A) or not (case B), for `Cl_p(k) = (p,p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DihedralInstance {
    pub p: u64,
    pub label: String,
    pub base_field: BaseField,
    pub d: Option<i64>,
    /// Ascending coefficients of a defining polynomial of `K`.
    pub poly_k: Option<Vec<i64>>,
    pub cl_k: AbelianGroupStructure,
    #[serde(rename = "cl_K")]
    pub cl_big_k: AbelianGroupStructure,
    #[serde(rename = "cl_L")]
    pub cl_l: Option<AbelianGroupStructure>,
    pub h_f: u64,
    pub lambda_f: u32,
    pub lambda_k: u32,
    pub e: Option<u32>,
    pub rho: Option<u32>,
    pub case: Option<Case>,
}

impl DihedralInstance {
    /// A minimal instance over `Q` with `k` imaginary.
    pub fn over_q(p: u64, label: &str, cl_k: &str, cl_big_k: &str, cl_l: Option<&str>) -> Self {
        DihedralInstance {
            p,
            label: label.to_string(),
            base_field: BaseField::Rationals,
            d: None,
            poly_k: None,
            cl_k: cl_k.parse().expect("cl_k"),
            cl_big_k: cl_big_k.parse().expect("cl_K"),
            cl_l: cl_l.map(|s| s.parse().expect("cl_L")),
            h_f: 1,
            lambda_f: 0,
            lambda_k: 0,
            e: None,
            rho: None,
            case: None,
        }
    }

    pub fn r_k(&self) -> usize {
        self.cl_k.p_rank(self.p)
    }

    pub fn r_big_k(&self) -> usize {
        self.cl_big_k.p_rank(self.p)
    }

    /// `e` from the row, or the default of the base field.
    pub fn effective_e(&self) -> Option<u32> {
        self.e.or_else(|| self.base_field.default_e(self.p))
    }

    fn e_source(&self) -> &'static str {
        match (self.e, self.base_field.default_e(self.p)) {
            (Some(_), _) => "dataset",
            (None, Some(_)) => "base-field default",
            (None, None) => "unknown",
        }
    }

    /// Whether `k` contains a primitive `p`-th root of unity.
    pub fn k_contains_zeta(&self) -> bool {
        if self.p != 3 {
            return false;
        }
        let Some(d) = self.d else {
            return self.base_field.contains_zeta(3);
        };
        let d = squarefree_kernel(d);
        match self.base_field.radicand() {
            None => d == -3,
            Some(m) => m == -3 || d == -3 || squarefree_kernel(m.saturating_mul(d)) == -3,
        }
    }

    /// Largest `rho` allowed by `p^rho = p (E_k : N E_L)`.
    pub fn max_rho(&self) -> u32 {
        1 + self.lambda_k + u32::from(self.k_contains_zeta())
    }
}

fn vp(g: &AbelianGroupStructure, p: u64) -> u32 {
    g.p_exponents(p).iter().sum()
}

fn p_power(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Quantities determined by the class numbers alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derived {
    /// `1 + lambda(k) - lambda(F)`.
    pub a: i64,
    /// `p^a h_L h_F^2 / (h_k h_K^2)` in lowest terms.
    pub q: Option<String>,
    pub q_integral: Option<bool>,
    pub mu: Option<u32>,
    pub rho_minus_e: Option<i64>,
    pub e: Option<u32>,
    pub e_source: String,
    pub rho: Option<i64>,
}

/// `(numerator, denominator)` of `p^a h_L h_F^2 / (h_k h_K^2)`.
fn unit_index(inst: &DihedralInstance, cl_l: &AbelianGroupStructure, a: i64) -> (BigInt, BigInt) {
    let p = inst.p;
    let mut num = BigInt::from(cl_l.order()) * BigInt::from(inst.h_f).pow(2);
    let mut den = BigInt::from(inst.cl_k.order()) * BigInt::from(inst.cl_big_k.order()).pow(2);
    if a >= 0 {
        num *= p_power(p, a as u32);
    } else {
        den *= p_power(p, (-a) as u32);
    }
    let g = num.gcd(&den);
    (num / &g, den / g)
}

pub fn derive_parameters(inst: &DihedralInstance) -> Derived {
    let p = inst.p;
    let a = 1 + inst.lambda_k as i64 - inst.lambda_f as i64;
    let e = inst.effective_e();
    let mut out = Derived {
        a,
        q: None,
        q_integral: None,
        mu: None,
        rho_minus_e: None,
        e,
        e_source: inst.e_source().to_string(),
        rho: None,
    };
    if let Some(cl_l) = &inst.cl_l {
        let (num, den) = unit_index(inst, cl_l, a);
        out.q = Some(if den.is_one() { num.to_string() } else { format!("{num}/{den}") });
        out.q_integral = Some(den.is_one());
        let mu = vp(cl_l, p);
        let rme = 2 * vp(&inst.cl_big_k, p) as i64 + vp(&inst.cl_k, p) as i64 - mu as i64;
        out.mu = Some(mu);
        out.rho_minus_e = Some(rme);
        out.rho = e.map(|e| rme + e as i64);
    }
    out
}

/// Hypotheses of the setting: `p` odd prime, `p` not dividing `h_F`, and
/// `p | h_k` (there is an unramified cyclic degree-`p` extension of `k`).
pub fn check_hypotheses(inst: &DihedralInstance) -> CheckResult {
    let p = inst.p;
    if inst.h_f % p == 0 {
        return CheckResult::fail(format!("p = {p} divides h_F = {}", inst.h_f));
    }
    if inst.r_k() == 0 {
        return CheckResult::fail(format!("r_{p}(k) = 0 but L/k is unramified of degree {p}"));
    }
    if inst.lambda_f != inst.base_field.unit_rank() {
        return CheckResult::fail(format!(
            "lambda_F = {} but {} has unit rank {}",
            inst.lambda_f,
            inst.base_field,
            inst.base_field.unit_rank()
        ));
    }
    CheckResult::pass(format!("{p} does not divide h_F = {}, r_{p}(k) = {}", inst.h_f, inst.r_k()))
}

/// `q` is a positive integral power of `p`.
pub fn check_class_number_formula(inst: &DihedralInstance) -> CheckResult {
    let Some(cl_l) = &inst.cl_l else {
        return CheckResult::na("cl_L not given");
    };
    let p = inst.p;
    let a = 1 + inst.lambda_k as i64 - inst.lambda_f as i64;
    let (num, den) = unit_index(inst, cl_l, a);
    let expr = format!(
        "q = {p}^{a} * {} * {}^2 / ({} * {}^2)",
        cl_l.order(),
        inst.h_f,
        inst.cl_k.order(),
        inst.cl_big_k.order()
    );
    if !den.is_one() {
        return CheckResult::fail(format!("{expr} = {num}/{den} is not an integer"));
    }
    let mut rest = num.clone();
    let pb = BigInt::from(p);
    while rest.is_multiple_of(&pb) && !rest.is_zero() {
        rest /= &pb;
    }
    CheckResult::theorem(rest.is_one(), format!("{expr} = {num}{}", if rest.is_one() { "" } else { ", not a power of p" }))
}

/// `rho = rho_minus_e + e` with `e + 1 <= rho <= 1 + dim E_k/E_k^p` and
/// `rho <= v_p(h_k)`.
pub fn check_capitulation(inst: &DihedralInstance) -> CheckResult {
    let Some(cl_l) = &inst.cl_l else {
        return CheckResult::na("cl_L not given");
    };
    let p = inst.p;
    let mu = vp(cl_l, p) as i64;
    let (vk, vkk) = (vp(&inst.cl_k, p) as i64, vp(&inst.cl_big_k, p) as i64);
    let rme = 2 * vkk + vk - mu;
    let formula = format!("rho - e = 2*{vkk} + {vk} - {mu} = {rme}");
    if rme < 1 {
        return CheckResult::fail(format!("{formula}, but rho >= e + 1"));
    }
    let upper = (inst.max_rho() as i64).min(vk);
    let admissible = |rho: i64| rho >= 1 && rho <= upper && inst.rho.map_or(true, |r| r as i64 == rho);
    match inst.effective_e() {
        Some(e) => {
            let rho = rme + e as i64;
            if let Some(r) = inst.rho {
                if r as i64 != rho {
                    return CheckResult::fail(format!("{formula}, so rho = {rho} with e = {e}, but the row gives rho = {r}"));
                }
            }
            CheckResult::theorem(
                admissible(rho),
                format!("{formula}, rho = {rho} with e = {e}; need 1 <= rho <= {upper}"),
            )
        }
        None => {
            let max_e = inst.base_field.max_e(p);
            let ok: Vec<u32> = (0..=max_e).filter(|&e| admissible(rme + e as i64)).collect();
            if ok.is_empty() {
                CheckResult::fail(format!("{formula}; no e in [0, {max_e}] gives 1 <= rho <= {upper}"))
            } else {
                CheckResult::na(format!("{formula}; e unknown, admissible e in {}", range_text(&ok)))
            }
        }
    }
}

fn range_text(es: &[u32]) -> String {
    match es {
        [] => "{}".to_string(),
        [x] => format!("[{x}, {x}]"),
        _ => format!("[{}, {}]", es[0], es[es.len() - 1]),
    }
}

/// `r_p(k) - 1 - e <= r_p(K)`.
pub fn check_lower_bound(inst: &DihedralInstance) -> CheckResult {
    let p = inst.p;
    let (rk, rkk) = (inst.r_k() as i64, inst.r_big_k() as i64);
    match inst.effective_e() {
        Some(e) => CheckResult::theorem(
            rk - 1 - e as i64 <= rkk,
            format!("r_{p}(k) - 1 - e = {rk} - 1 - {e} = {} <= r_{p}(K) = {rkk}", rk - 1 - e as i64),
        ),
        None => {
            let max_e = inst.base_field.max_e(p);
            let ok: Vec<u32> = (0..=max_e).filter(|&e| rk - 1 - e as i64 <= rkk).collect();
            if ok.is_empty() {
                CheckResult::fail(format!(
                    "r_{p}(k) - 1 - e = {rk} - 1 - e > r_{p}(K) = {rkk} for every e in [0, {max_e}]"
                ))
            } else {
                CheckResult::na(format!("e unknown; {rk} - 1 - e <= {rkk} holds for e in {}", range_text(&ok)))
            }
        }
    }
}

fn is_pp(g: &AbelianGroupStructure, p: u64) -> bool {
    g.p_exponents(p) == [1, 1]
}

/// `r_p(K) <= (p-1)/2 (r_p(k) - 1)`; a theorem when `p = 3`, when
/// `r_p(k) = 1`, or when `Cl_p(k) = (p,p)`.
pub fn check_upper_bound(inst: &DihedralInstance) -> CheckResult {
    let p = inst.p;
    let (rk, rkk) = (inst.r_k() as i64, inst.r_big_k() as i64);
    let bound = (p as i64 - 1) / 2 * (rk - 1);
    let text = format!("r_{p}(K) = {rkk} <= ({p}-1)/2 * ({rk} - 1) = {bound}");
    let proven = p == 3 || rk == 1 || is_pp(&inst.cl_k, p);
    if proven {
        CheckResult::theorem(rkk <= bound, text)
    } else {
        CheckResult::conjecture(rkk <= bound, text)
    }
}

/// `r_3(K) = r_3(k) - 1` for `F = Q`, `p = 3`, reported as a conjecture.
pub fn check_callahan(inst: &DihedralInstance) -> CheckResult {
    if inst.p != 3 || inst.base_field != BaseField::Rationals {
        return CheckResult::na("only for p = 3 over Q");
    }
    let (rk, rkk) = (inst.r_k() as i64, inst.r_big_k() as i64);
    CheckResult::conjecture(rkk == rk - 1, format!("r_3(K) = {rkk}, r_3(k) - 1 = {}", rk - 1))
}

/// Structure of `Cl_p(K)` for `Cl_p(k) = (p,p)` from `mu`, `rho` and `e`.
pub fn predicted_cl_big_k(p: u64, mu: u32, rho: u32, e: u32) -> Option<AbelianGroupStructure> {
    if mu < 1 {
        return None;
    }
    let pm1 = p as u32 - 1;
    let (a, b) = ((mu - 1) / pm1, (mu - 1) % pm1);
    let (hi, lo) = if rho == e + 1 && rho <= 2 {
        if b % 2 == 1 {
            return None;
        }
        (b / 2, (pm1 - b) / 2)
    } else if (rho, e) == (2, 0) {
        if b % 2 == 0 {
            return None;
        }
        ((b + 1) / 2, (pm1 - 1 - b) / 2)
    } else {
        return None;
    };
    let mut exps = vec![a + 1; hi as usize];
    exps.extend(std::iter::repeat(a).take(lo as usize));
    Some(AbelianGroupStructure::from_p_exponents(p, &exps))
}

/// Structure of `Cl_p(L)` for `Cl_p(k) = (p,p)`: `(case A, case B)`.
pub fn predicted_cl_l(p: u64, mu: u32) -> (Option<AbelianGroupStructure>, Option<AbelianGroupStructure>) {
    (gras_predicted(p, mu, true), gras_predicted(p, mu, false))
}

/// The class number relation, the `Cl_p(L)` table and the `Cl_p(K)` formula
/// when `Cl_p(k) = (p,p)`.
pub fn check_pp_structure(inst: &DihedralInstance) -> (CheckResult, Option<String>) {
    let p = inst.p;
    if !is_pp(&inst.cl_k, p) {
        return (CheckResult::na(format!("Cl_{p}(k) = {} is not ({p},{p})", inst.cl_k.p_part(p))), None);
    }
    let Some(cl_l) = &inst.cl_l else {
        return (CheckResult::na("cl_L not given"), None);
    };
    let mu = vp(cl_l, p);
    let rme = 2 * vp(&inst.cl_big_k, p) as i64 + 2 - mu as i64;
    let e = match (inst.effective_e(), inst.rho) {
        (Some(e), _) => e as i64,
        (None, Some(r)) => r as i64 - rme,
        (None, None) => return (CheckResult::na(format!("mu = {mu}; neither e nor rho known")), None),
    };
    let rho = rme + e;
    let mut notes = vec![format!("mu = {mu}, rho = {rho}, e = {e}")];
    if mu < 2 {
        return (CheckResult::fail(format!("h_{p}(L) = {p}^{mu}, but mu >= 2")), None);
    }
    if (mu as i64 - rho - e).rem_euclid(2) != 0 {
        return (CheckResult::fail(format!("mu = {mu} is not congruent to rho + e = {} mod 2", rho + e)), None);
    }
    if !matches!((rho, e), (1, 0) | (2, 1) | (2, 0)) {
        return (
            CheckResult::fail(format!("(rho, e) = ({rho}, {e}) is none of (1,0), (2,1), (2,0)")),
            None,
        );
    }

    let lp = cl_l.p_part(p);
    let (ca, cb) = predicted_cl_l(p, mu);
    let fits_a = ca.as_ref() == Some(&lp);
    let fits_b = cb.as_ref() == Some(&lp);
    let show = |g: &Option<AbelianGroupStructure>| g.as_ref().map_or("none".to_string(), |g| g.to_string());
    let inferred = if mu > p as u32 {
        "indistinguishable"
    } else if fits_a && fits_b {
        "indistinguishable"
    } else if fits_a {
        "A"
    } else if fits_b {
        "B"
    } else {
        "none"
    };
    let table_ok = match inst.case {
        Some(Case::A) => fits_a,
        Some(Case::B) => fits_b,
        None => fits_a || fits_b,
    };
    if !table_ok {
        let given = inst.case.map_or(String::new(), |c| format!(" (row says case {c:?})"));
        return (
            CheckResult::fail(format!(
                "Cl_{p}(L) = {lp} with mu = {mu}{given}; table predicts case A {} or case B {}",
                show(&ca),
                show(&cb)
            )),
            Some(inferred.to_string()),
        );
    }
    notes.push(format!("Cl_{p}(L) = {lp} fits case {inferred}"));

    let kp = inst.cl_big_k.p_part(p);
    let predicted = predicted_cl_big_k(p, mu, rho as u32, e as u32);
    let pm1 = p as u32 - 1;
    let (a, b) = ((mu - 1) / pm1, (mu - 1) % pm1);
    if predicted.as_ref() != Some(&kp) {
        return (
            CheckResult::fail(format!(
                "mu - 1 = {a}*({p}-1) + {b}, (rho, e) = ({rho}, {e}) predicts Cl_{p}(K) = {}, found {kp}",
                show(&predicted)
            )),
            Some(inferred.to_string()),
        );
    }
    notes.push(format!("Cl_{p}(K) = {kp} from mu - 1 = {a}*({p}-1) + {b}"));
    (CheckResult::pass(notes.join("; ")), Some(inferred.to_string()))
}

/// `Cl_l(L) = Cl_l(k) x Cl_l(K)^2` for every prime `l != p`.
pub fn check_prime_to_p(inst: &DihedralInstance) -> CheckResult {
    let Some(cl_l) = &inst.cl_l else {
        return CheckResult::na("cl_L not given");
    };
    let mut primes: Vec<u64> = cl_l
        .primes()
        .into_iter()
        .chain(inst.cl_k.primes())
        .chain(inst.cl_big_k.primes())
        .filter(|&l| l != inst.p)
        .collect();
    primes.sort_unstable();
    primes.dedup();
    let mut notes = Vec::new();
    for l in primes {
        if inst.h_f % l == 0 {
            notes.push(format!("l = {l} skipped (divides h_F)"));
            continue;
        }
        let lhs = cl_l.p_part(l);
        let kk = inst.cl_big_k.p_part(l);
        let rhs = inst.cl_k.p_part(l).direct_product(&kk).direct_product(&kk);
        if lhs != rhs {
            return CheckResult::fail(format!(
                "l = {l}: Cl_l(L) = {lhs} but Cl_l(k) x Cl_l(K)^2 = {} x ({kk})^2 = {rhs}",
                inst.cl_k.p_part(l)
            ));
        }
        notes.push(format!("l = {l}: {lhs}"));
    }
    if notes.is_empty() {
        notes.push("no prime l != p divides the class numbers".to_string());
    }
    CheckResult::pass(notes.join("; "))
}

/// `Cl(k)` against the class group computed from binary quadratic forms,
/// for `F = Q` and `|d|` within the default bound. Only the `p`-part is
/// compared when the row records a `p`-group.
pub fn check_quadratic_class_group(inst: &DihedralInstance) -> CheckResult {
    let Some(d) = inst.d else {
        return CheckResult::na("d not given");
    };
    if inst.base_field != BaseField::Rationals {
        return CheckResult::na("k is not quadratic over Q");
    }
    if !is_fundamental_discriminant(d) {
        return CheckResult::na(format!("{d} is not a fundamental discriminant"));
    }
    let computed = match quadforms::class_group(d, &ClassGroupOptions::default()) {
        Ok(g) => g.structure,
        Err(err) => return CheckResult::na(err.to_string()),
    };
    let p = inst.p;
    let p_group_only = inst.cl_k.primes().iter().all(|&l| l == p);
    let (row, ours) = if p_group_only {
        (inst.cl_k.p_part(p), computed.p_part(p))
    } else {
        (inst.cl_k.clone(), computed)
    };
    let what = if p_group_only { format!("Cl_{p}") } else { "Cl".to_string() };
    CheckResult::theorem(row == ours, format!("{what}({d}) = {ours} by forms, row gives {row}"))
}

/// `disc(poly_K) / d^((p-1)/2)` is a nonzero rational square.
pub fn check_polynomial(inst: &DihedralInstance) -> CheckResult {
    let (Some(coeffs), Some(d)) = (&inst.poly_k, inst.d) else {
        return CheckResult::na("poly_K or d not given");
    };
    if inst.base_field != BaseField::Rationals {
        return CheckResult::na("poly_K is over Q only");
    }
    let f = IntPolynomial::from_i64(coeffs);
    if f.degree() != Some(inst.p as usize) {
        return CheckResult::fail(format!("poly_K has degree {:?}, expected {}", f.degree(), inst.p));
    }
    let disc = match poly_discriminant(&f) {
        Ok(x) => x,
        Err(err) => return CheckResult::na(err.to_string()),
    };
    let dp = num_traits::pow(BigInt::from(d), (inst.p as usize - 1) / 2);
    // disc / dp is a square iff disc * dp is
    let prod = &disc * &dp;
    let ok = !disc.is_zero() && !prod.is_negative() && exact_sqrt(&prod).is_some();
    CheckResult::theorem(ok, format!("disc(poly_K) = {disc}, d^(({}-1)/2) = {dp}", inst.p))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    /// `true` for proven statements, whose failure is a hard failure.
    pub theorem: bool,
    #[serde(flatten)]
    pub result: CheckResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowReport {
    pub line: usize,
    pub label: String,
    pub p: u64,
    pub derived: Derived,
    pub inferred_case: Option<String>,
    pub checks: Vec<NamedCheck>,
}

impl RowReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.result)
    }

    pub fn hard_failures(&self) -> impl Iterator<Item = &NamedCheck> {
        self.checks.iter().filter(|c| c.result.verdict == Verdict::Fail)
    }
}

pub fn verify_instance(inst: &DihedralInstance, line: usize) -> RowReport {
    let (pp, inferred_case) = check_pp_structure(inst);
    let named = |name: &str, theorem: bool, result: CheckResult| NamedCheck { name: name.to_string(), theorem, result };
    let checks = vec![
        named("hypotheses", true, check_hypotheses(inst)),
        named("quadratic_class_group", true, check_quadratic_class_group(inst)),
        named("polynomial", true, check_polynomial(inst)),
        named("class_number_formula", true, check_class_number_formula(inst)),
        named("capitulation", true, check_capitulation(inst)),
        named("lower_bound", true, check_lower_bound(inst)),
        named("upper_bound", true, check_upper_bound(inst)),
        named("callahan", false, check_callahan(inst)),
        named("pp_structure", true, pp),
        named("prime_to_p", true, check_prime_to_p(inst)),
    ];
    // the upper bound is a theorem only in its proven sub-cases
    let checks = checks
        .into_iter()
        .map(|mut c| {
            if matches!(c.result.verdict, Verdict::ConjectureConsistent | Verdict::ConjectureViolated) {
                c.theorem = false;
            }
            c
        })
        .collect();
    RowReport { line, label: inst.label.clone(), p: inst.p, derived: derive_parameters(inst), inferred_case, checks }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureEntry {
    pub label: String,
    pub check: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    pub hard_failures: usize,
    pub conjecture_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub summary: Summary,
    pub rows: Vec<RowReport>,
    pub conjectures: Vec<ConjectureEntry>,
}

impl VerificationReport {
    pub fn has_hard_failures(&self) -> bool {
        self.summary.hard_failures > 0
    }
}

pub fn verify_instances(rows: &[(usize, DihedralInstance)]) -> VerificationReport {
    #[cfg(feature = "parallel")]
    let reports: Vec<RowReport> = {
        use rayon::prelude::*;
        rows.par_iter().map(|(line, inst)| verify_instance(inst, *line)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let reports: Vec<RowReport> = rows.iter().map(|(line, inst)| verify_instance(inst, *line)).collect();

    let conjectures: Vec<ConjectureEntry> = reports
        .iter()
        .flat_map(|r| {
            r.checks
                .iter()
                .filter(|c| matches!(c.result.verdict, Verdict::ConjectureConsistent | Verdict::ConjectureViolated))
                .map(|c| ConjectureEntry {
                    label: r.label.clone(),
                    check: c.name.clone(),
                    verdict: c.result.verdict,
                    detail: c.result.detail.clone(),
                })
        })
        .collect();
    let summary = Summary {
        rows: reports.len(),
        hard_failures: reports.iter().map(|r| r.hard_failures().count()).sum(),
        conjecture_violations: conjectures.iter().filter(|c| c.verdict == Verdict::ConjectureViolated).count(),
    };
    VerificationReport { summary, rows: reports, conjectures }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}, column {column}: {message}")]
    Schema { line: usize, column: String, message: String },
}

fn schema(line: usize, column: &str, message: impl Into<String>) -> VerifyError {
    VerifyError::Schema { line, column: column.to_string(), message: message.into() }
}

fn field<'a>(rec: &'a csv::StringRecord, i: usize) -> Option<&'a str> {
    rec.get(i).map(str::trim).filter(|s| !s.is_empty())
}

fn parse_row(rec: &csv::StringRecord, line: usize) -> Result<DihedralInstance, VerifyError> {
    let req = |i: usize| field(rec, i).ok_or_else(|| schema(line, HEADER[i], "missing value"));
    fn num<T: FromStr>(s: &str, line: usize, i: usize) -> Result<T, VerifyError> {
        s.parse().map_err(|_| schema(line, HEADER[i], format!("{s:?} is not a valid number")))
    }
    let opt_num = |i: usize| -> Result<Option<u32>, VerifyError> { field(rec, i).map(|s| num(s, line, i)).transpose() };
    let group = |i: usize, s: &str| -> Result<AbelianGroupStructure, VerifyError> {
        s.parse().map_err(|e| schema(line, HEADER[i], format!("{e}")))
    };

    let p: u64 = num(req(0)?, line, 0)?;
    if p < 3 || !is_prime_u64(p) {
        return Err(schema(line, "p", format!("{p} is not an odd prime")));
    }
    let label = req(1)?.to_string();
    let base_field: BaseField = req(2)?.parse().map_err(|e: String| schema(line, "base_field", e))?;
    let d: Option<i64> = field(rec, 3).map(|s| num(s, line, 3)).transpose()?;
    let poly_k = field(rec, 4)
        .map(|s| s.split_whitespace().map(|t| num::<i64>(t, line, 4)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let cl_k = group(5, req(5)?)?;
    let cl_big_k = group(6, req(6)?)?;
    let cl_l = field(rec, 7).map(|s| group(7, s)).transpose()?;
    let h_f: u64 = num(req(8)?, line, 8)?;
    if h_f == 0 {
        return Err(schema(line, "h_F", "must be positive"));
    }
    let lambda_f: u32 = num(req(9)?, line, 9)?;
    let lambda_k: u32 = num(req(10)?, line, 10)?;
    let e = opt_num(11)?;
    let rho = opt_num(12)?;
    if rho == Some(0) {
        return Err(schema(line, "rho", "must be positive"));
    }
    let case = match field(rec, 13) {
        None => None,
        Some("A") => Some(Case::A),
        Some("B") => Some(Case::B),
        Some(other) => return Err(schema(line, "case", format!("{other:?} is neither A nor B"))),
    };
    Ok(DihedralInstance { p, label, base_field, d, poly_k, cl_k, cl_big_k, cl_l, h_f, lambda_f, lambda_k, e, rho, case })
}

/// Parse dataset text. Returns instances with their 1-based line numbers.
pub fn parse_dataset(text: &str) -> Result<Vec<(usize, DihedralInstance)>, VerifyError> {
    // drop comments and blank lines ourselves, keeping the original line numbers
    let mut origin = Vec::new();
    let mut kept = String::new();
    for (i, l) in text.lines().enumerate() {
        let t = l.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        origin.push(i + 1);
        kept.push_str(l);
        kept.push('\n');
    }
    let line_of = |pos: Option<&csv::Position>| pos.and_then(|p| origin.get(p.line() as usize - 1)).copied().unwrap_or(0);
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(kept.as_bytes());
    let header = reader.headers().map_err(|e| schema(1, "header", e.to_string()))?.clone();
    let names: Vec<&str> = header.iter().collect();
    if names != HEADER {
        let line = origin.first().copied().unwrap_or(1);
        return Err(schema(line, "header", format!("expected {}, found {}", HEADER.join(","), names.join(","))));
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| schema(line_of(e.position()), "row", e.to_string()))?;
        let line = line_of(rec.position());
        if rec.len() != HEADER.len() {
            return Err(schema(line, "row", format!("{} fields, expected {}", rec.len(), HEADER.len())));
        }
        out.push((line, parse_row(&rec, line)?));
    }
    Ok(out)
}

pub fn verify_text(text: &str) -> Result<VerificationReport, VerifyError> {
    Ok(verify_instances(&parse_dataset(text)?))
}

pub fn verify_dataset(path: impl AsRef<Path>) -> Result<VerificationReport, VerifyError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| VerifyError::Io { path: path.display().to_string(), source })?;
    verify_text(&text)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScholzCheck {
    pub m: i64,
    pub d_plus: i64,
    pub d_minus: i64,
    pub r_plus: usize,
    pub r_minus: usize,
    /// 3-ranks from cubic field counts, when the discriminants are small
    /// enough to enumerate.
    pub cubic_ranks: Option<(u32, u32)>,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScholzError {
    #[error("m = {0} must be a squarefree integer > 1")]
    BadM(i64),
    #[error(transparent)]
    Quad(#[from] quadforms::QuadError),
}

/// `r_3^+ <= r_3^- <= r_3^+ + 1` for `Q(sqrt m)` and `Q(sqrt -3m)`.
/// With `cross_check`, the ranks are also read off cubic field counts when
/// both discriminants lie within [`cubicforms::DEFAULT_MAX_BOUND`]; a
/// disagreement is a failure.
pub fn check_scholz(m: i64, cross_check: bool) -> Result<ScholzCheck, ScholzError> {
    if m <= 1 || squarefree_kernel(m) != m {
        return Err(ScholzError::BadM(m));
    }
    let d_plus = fundamental_discriminant(m);
    let d_minus = fundamental_discriminant(-3 * m);
    let r_plus = quadforms::p_rank(d_plus, 3)?;
    let r_minus = quadforms::p_rank(d_minus, 3)?;
    let ok = r_plus <= r_minus && r_minus <= r_plus + 1;
    let mut detail = format!("r3({d_plus}) = {r_plus}, r3({d_minus}) = {r_minus}: {r_plus} <= {r_minus} <= {r_plus} + 1");
    let mut cubic_ranks = None;
    let mut agree = true;
    let small = |d: i64| d.abs() <= cubicforms::DEFAULT_MAX_BOUND;
    if cross_check && small(d_plus) && small(d_minus) {
        if let (Ok(a), Ok(b)) = (cubicforms::r3_from_count(d_plus), cubicforms::r3_from_count(d_minus)) {
            agree = a as usize == r_plus && b as usize == r_minus;
            if !agree {
                detail.push_str(&format!("; cubic field counts give {a}, {b}"));
            }
            cubic_ranks = Some((a, b));
        }
    }
    let verdict = if ok && agree { Verdict::Pass } else { Verdict::Fail };
    Ok(ScholzCheck { m, d_plus, d_minus, r_plus, r_minus, cubic_ranks, verdict, detail })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_field_round_trip() {
        for s in ["Q", "imagquad(-3)", "realquad(5)"] {
            assert_eq!(s.parse::<BaseField>().unwrap().to_string(), s);
        }
        assert!("imagquad(3)".parse::<BaseField>().is_err());
        assert!("realquad(12)".parse::<BaseField>().is_err());
        assert!("Q(i)".parse::<BaseField>().is_err());
    }

    #[test]
    fn defaults_for_e() {
        assert_eq!(BaseField::Rationals.default_e(5), Some(0));
        assert_eq!(BaseField::ImagQuad(-1).default_e(3), Some(0));
        assert_eq!(BaseField::ImagQuad(-3).default_e(3), None);
        assert_eq!(BaseField::ImagQuad(-3).default_e(5), Some(0));
        assert_eq!(BaseField::RealQuad(5).default_e(5), None);
        assert_eq!(BaseField::RealQuad(5).max_e(5), 1);
        assert_eq!(BaseField::ImagQuad(-3).max_e(3), 1);
    }
}
