//! Polynomial families producing dihedral candidates.
//!
//! * `cubic`: `x^3 + a x + 1`, with `d = -4a^3 - 27` (`p = 3`).
//! * `quintic`: `x^5 - 2x^4 + (b+2)x^3 - (2b+1)x^2 + b x + 1`, whose
//!   discriminant is a square `d^2`; the sign of `d` makes `d ≡ 1 mod 4`
//!   (`p = 5`).
//! * `cyclic-cubic`: `x^3 - a x^2 - (a+3) x - 1` with `a = (b^2 - 3)/2` for odd
//!   `b`, square discriminant `(a^2 + 3a + 9)^2`; `d` is that square root.
//!
//! A candidate is `fundamental` when `d` is squarefree and `d ≡ 1 mod 4`, so
//! that it is the discriminant of `Q(sqrt d)`. Others are kept but flagged.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::arith::poly::{is_irreducible, poly_discriminant};
use crate::arith::{exact_sqrt, is_squarefree, ArithError, Decision, Effort, IntPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Cubic,
    Quintic,
    CyclicCubic,
}

impl Family {
    pub fn prime(self) -> u64 {
        match self {
            Family::Cubic | Family::CyclicCubic => 3,
            Family::Quintic => 5,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Cubic => "cubic",
            Family::Quintic => "quintic",
            Family::CyclicCubic => "cyclic-cubic",
        })
    }
}

impl FromStr for Family {
    type Err = FamilyError;
    fn from_str(s: &str) -> Result<Self, FamilyError> {
        match s {
            "cubic" => Ok(Family::Cubic),
            "quintic" => Ok(Family::Quintic),
            "cyclic-cubic" | "cyclic_cubic" => Ok(Family::CyclicCubic),
            _ => Err(FamilyError::UnknownFamily(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("{family} polynomial at parameter {parameter} is reducible")]
    Reducible { family: Family, parameter: i64 },
    #[error("no irreducibility witness for the {family} polynomial at parameter {parameter}")]
    NoWitness { family: Family, parameter: i64 },
    #[error("{family} discriminant at parameter {parameter} is not a perfect square")]
    NotSquare { family: Family, parameter: i64 },
    #[error("cyclic-cubic parameter b = {0} must be odd")]
    EvenParameter(i64),
    #[error("parameter {0} is too large")]
    Overflow(i64),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCandidate {
    pub family: Family,
    pub parameter: i64,
    #[serde(serialize_with = "ser_poly")]
    pub polynomial: IntPolynomial,
    pub d: i64,
    pub squarefree: Decision,
    pub fundamental: bool,
    pub p: u64,
}

fn ser_poly<S: serde::Serializer>(f: &IntPolynomial, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(f.coeffs().iter().map(|c| c.to_string()))
}

impl FamilyCandidate {
    fn build(family: Family, parameter: i64, polynomial: IntPolynomial, d: BigInt) -> Result<Self, FamilyError> {
        let d64 = d.to_i64().ok_or(FamilyError::Overflow(parameter))?;
        let squarefree = is_squarefree(&d, Effort::default())?;
        let fundamental = squarefree == Decision::Yes && d64.rem_euclid(4) == 1 && d64 != 1;
        Ok(FamilyCandidate { family, parameter, polynomial, d: d64, squarefree, fundamental, p: family.prime() })
    }

    /// Coefficients with the highest degree first, as `x^3 + 29x + 1`.
    pub fn polynomial_string(&self) -> String {
        render(&self.polynomial)
    }
}

fn render(f: &IntPolynomial) -> String {
    let deg = f.degree().unwrap_or(0);
    let mut out = String::new();
    for i in (0..=deg).rev() {
        let c = f.coeff(i);
        if c == BigInt::from(0) {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let one = a == BigInt::from(1);
        match i {
            0 => out.push_str(&a.to_string()),
            _ => {
                if !one {
                    out.push_str(&a.to_string());
                }
                out.push('x');
                if i > 1 {
                    out.push_str(&format!("^{i}"));
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn checked_irreducible(family: Family, parameter: i64, f: &IntPolynomial) -> Result<(), FamilyError> {
    match is_irreducible(f)?.decision {
        Decision::Yes => Ok(()),
        Decision::No => Err(FamilyError::Reducible { family, parameter }),
        Decision::Unknown => Err(FamilyError::NoWitness { family, parameter }),
    }
}

/// `x^3 + a x + 1`.
pub fn cubic_family(a: i64) -> Result<FamilyCandidate, FamilyError> {
    let f = IntPolynomial::from_i64(&[1, a, 0, 1]);
    checked_irreducible(Family::Cubic, a, &f)?;
    let a_big = BigInt::from(a);
    let d = -4 * &a_big * &a_big * &a_big - 27;
    FamilyCandidate::build(Family::Cubic, a, f, d)
}

/// Square root of the discriminant, signed so that it is `1 mod 4`.
fn signed_root(family: Family, parameter: i64, f: &IntPolynomial) -> Result<BigInt, FamilyError> {
    let disc = poly_discriminant(f)?;
    let root = exact_sqrt(&disc).ok_or(FamilyError::NotSquare { family, parameter })?;
    let four = BigInt::from(4);
    Ok(if ((&root % &four + &four) % &four) == BigInt::from(1) { root } else { -root })
}

/// `x^5 - 2x^4 + (b+2)x^3 - (2b+1)x^2 + b x + 1`.
pub fn quintic_family(b: i64) -> Result<FamilyCandidate, FamilyError> {
    let f = IntPolynomial::from_i64(&[1, b, -(2 * b + 1), b + 2, -2, 1]);
    checked_irreducible(Family::Quintic, b, &f)?;
    let d = signed_root(Family::Quintic, b, &f)?;
    FamilyCandidate::build(Family::Quintic, b, f, d)
}

/// `x^3 - a x^2 - (a+3) x - 1` with `a = (b^2 - 3)/2`.
pub fn cyclic_cubic_family(b: i64) -> Result<FamilyCandidate, FamilyError> {
    if b % 2 == 0 {
        return Err(FamilyError::EvenParameter(b));
    }
    let a = b.checked_mul(b).ok_or(FamilyError::Overflow(b))?.checked_sub(3).ok_or(FamilyError::Overflow(b))? / 2;
    let f = IntPolynomial::from_i64(&[-1, -(a + 3), -a, 1]);
    checked_irreducible(Family::CyclicCubic, b, &f)?;
    let disc = poly_discriminant(&f)?;
    let d = exact_sqrt(&disc).ok_or(FamilyError::NotSquare { family: Family::CyclicCubic, parameter: b })?;
    FamilyCandidate::build(Family::CyclicCubic, b, f, d)
}

pub fn candidate(family: Family, parameter: i64) -> Result<FamilyCandidate, FamilyError> {
    match family {
        Family::Cubic => cubic_family(parameter),
        Family::Quintic => quintic_family(parameter),
        Family::CyclicCubic => cyclic_cubic_family(parameter),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanFilter {
    /// Drop candidates whose `d` is not known to be squarefree.
    pub squarefree_only: bool,
}

/// Candidates over a parameter range. Parameters where the construction
/// fails (reducible polynomial, even `b`) are skipped.
pub fn scan(family: Family, range: RangeInclusive<i64>, filter: ScanFilter) -> Vec<FamilyCandidate> {
    let keep = |c: &FamilyCandidate| !filter.squarefree_only || c.squarefree == Decision::Yes;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        range
            .into_par_iter()
            .filter_map(|t| candidate(family, t).ok())
            .filter(keep)
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.filter_map(|t| candidate(family, t).ok()).filter(keep).collect()
    }
}
