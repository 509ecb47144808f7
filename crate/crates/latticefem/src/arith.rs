//! Exact scalar arithmetic: rationals, checked binomials, factorials.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("integer overflow computing {0}")]
    Overflow(String),
    #[error("cannot parse `{0}` as an exact rational")]
    Parse(String),
}

/// Binomial coefficient `C(n, k)` in checked 64-bit arithmetic.
///
/// Returns 0 when `k > n`. Intermediate products are overflow-checked; the
/// intended working range (`n ≤ 6`, `k ≤ 32` lattice parameters, so arguments
/// up to a few dozen) stays well inside `u64`.
pub fn binomial(n: u64, k: u64) -> Result<u64, ArithError> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiply
        acc = acc
            .checked_mul(n - i)
            .ok_or_else(|| ArithError::Overflow(format!("binomial({n},{k})")))?
            / (i + 1);
    }
    Ok(acc)
}

/// Signed binomial helper: 0 for negative arguments.
pub fn binomial_i(n: i64, k: i64) -> Result<u64, ArithError> {
    if n < 0 || k < 0 {
        return Ok(0);
    }
    binomial(n as u64, k as u64)
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// `α! = α_0! α_1! ⋯` for a multi-index given by its entries.
pub fn multi_factorial(alpha: &[u32]) -> BigInt {
    alpha.iter().map(|&a| factorial(a)).product()
}

pub fn rational_from_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `p` or `p/q` (lowest terms, `q > 0`).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, integer, or decimal (`-1.25`, `3e-2`) strings exactly.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let err = || ArithError::Parse(s.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    parse_decimal(s).ok_or_else(err)
}

/// Exact decimal parser: `[+-]digits[.digits][e[+-]exp]` → rational.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (Sign::Minus, rest),
        None => (Sign::Plus, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if joined.is_empty() { BigInt::zero() } else { joined.parse().ok()? };
    if sign == Sign::Minus {
        numer = -numer;
    }
    let shift = exp10 - frac_part.len() as i32;
    let base = BigInt::from(10u32);
    if shift >= 0 {
        Some(Rational::from_integer(numer * base.pow(shift as u32)))
    } else {
        Some(Rational::new(numer, base.pow((-shift) as u32)))
    }
}

/// Lossy conversion for the floating-point cross-check path.
///
/// Handles numerators/denominators far beyond the `f64` exponent range by
/// shifting both by a common amount first.
pub fn rational_to_f64(r: &Rational) -> f64 {
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
    let n = r.numer() >> shift;
    let d = r.denom() >> shift;
    if d.is_zero() {
        return if r.numer().is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    to_f64_small(&n) / to_f64_small(&d)
}

fn to_f64_small(v: &BigInt) -> f64 {
    // digits are little-endian; accumulate from the most significant end
    let (_, digits) = v.to_u64_digits();
    let mut acc = 0f64;
    for digit in digits.iter().rev() {
        acc = acc * 2f64.powi(64) + *digit as f64;
    }
    if v.sign() == Sign::Minus {
        -acc
    } else {
        acc
    }
}
