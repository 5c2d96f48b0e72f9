//! Small helpers around [`BigRational`]: parsing, printing, and float views
//! that stay accurate for numbers far below `f64::MIN_POSITIVE`-scale
//! cancellation.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse `{0}` as a rational number")]
pub struct ParseRationalError(pub String);

/// Parses `p/q`, an integer, or a plain decimal such as `-0.125`.
pub fn parse(s: &str) -> Result<BigRational, ParseRationalError> {
    let s = s.trim();
    let err = || ParseRationalError(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        let digits = format!("{int_digits}{frac}");
        let mantissa: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        let scale = num::pow(BigInt::from(10), frac.len());
        let value = BigRational::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    let p: BigInt = s.parse().map_err(|_| err())?;
    Ok(BigRational::from_integer(p))
}

/// Renders as `p/q`, or `p` for integers.
pub fn format(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn from_ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Nearest-ish float. Accurate to a few ulps for any magnitude, including
/// ratios whose numerator and denominator individually overflow `f64`.
pub fn to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    // both parts exact in f64, so one division rounds correctly
    if let (Some(n), Some(d)) = (x.numer().to_i64(), x.denom().to_i64()) {
        const EXACT: i64 = 1 << 53;
        if n.abs() <= EXACT && d <= EXACT {
            return n as f64 / d as f64;
        }
    }
    let (mantissa, exp) = mantissa_exp(x);
    mantissa * 2f64.powi(exp.clamp(-1074 - 64, 1100) as i32)
}

/// Natural logarithm of a positive rational.
pub fn ln(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "ln of non-positive rational");
    let (mantissa, exp) = mantissa_exp(x);
    mantissa.ln() + exp as f64 * std::f64::consts::LN_2
}

/// Returns `(m, e)` with `x ≈ m · 2^e` and `|m|` in `[0.5, 2)`.
fn mantissa_exp(x: &BigRational) -> (f64, i64) {
    let (n, d) = (x.numer(), x.denom());
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let n_top = top_bits(n, 60);
    let d_top = top_bits(d, 60);
    let m = n_top / d_top;
    let e = (nb - 60.min(nb)) - (db - 60.min(db));
    let sign = if n.sign() == Sign::Minus { -1.0 } else { 1.0 };
    (sign * m.abs(), e)
}

fn top_bits(v: &BigInt, keep: i64) -> f64 {
    let bits = v.bits() as i64;
    let shift = (bits - keep).max(0);
    let top: BigInt = v.abs() >> shift as usize;
    top.to_f64().expect("fits")
}

/// `floor(x)` as a big integer.
pub fn floor(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}
