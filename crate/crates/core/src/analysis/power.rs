//! `C⁻¹ ρ^δ ≤ μ(B(x, ρ)) ≤ C ρ^δ` checked on exact self-similar measures.

use num::{BigRational, One, Signed, Zero};
use serde::Serialize;

use super::AnalysisError;
use crate::metric::CantorSet;
use crate::par::{self, Execution};
use crate::rational;

/// Relative growth of the per-scale constant allowed between the coarser
/// and the finer half of the scale range.
pub const DEFAULT_STABILITY_TOLERANCE: f64 = 0.05;

/// Ternary digits examined before the Cantor function is truncated; the
/// truncation error is below `2^-64`.
const CANTOR_DIGITS: usize = 64;

pub trait MeasureOracle: Sync {
    fn description(&self) -> String;
    /// `μ([x − r, x + r])`.
    fn ball(&self, x: &BigRational, r: &BigRational) -> f64;
}

/// The Cantor function: the distribution function of the natural measure
/// on the middle-thirds set.
pub fn cantor_function(x: &BigRational) -> f64 {
    if !x.is_positive() {
        return 0.0;
    }
    if x >= &BigRational::one() {
        return 1.0;
    }
    let three = BigRational::from_integer(3.into());
    let mut y = x.clone();
    let (mut acc, mut weight) = (0.0, 0.5);
    for _ in 0..CANTOR_DIGITS {
        y *= &three;
        let d = rational::floor(&y);
        y -= BigRational::from_integer(d.clone());
        if d == 1.into() {
            return acc + weight;
        }
        if d == 2.into() {
            acc += weight;
        }
        if y.is_zero() {
            break;
        }
        weight /= 2.0;
    }
    acc
}

/// Natural (Hausdorff) measure on the middle-thirds Cantor set.
#[derive(Clone, Copy, Debug, Default)]
pub struct CantorMeasure;

impl MeasureOracle for CantorMeasure {
    fn description(&self) -> String {
        "cantor natural measure".into()
    }

    fn ball(&self, x: &BigRational, r: &BigRational) -> f64 {
        cantor_function(&(x + r)) - cantor_function(&(x - r))
    }
}

/// Lebesgue measure restricted to `[0, 1]`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LebesgueMeasure;

impl MeasureOracle for LebesgueMeasure {
    fn description(&self) -> String {
        "lebesgue on [0,1]".into()
    }

    fn ball(&self, x: &BigRational, r: &BigRational) -> f64 {
        let lo = (x - r).max(BigRational::zero());
        let hi = (x + r).min(BigRational::one());
        if hi <= lo {
            0.0
        } else {
            rational::to_f64(&(hi - lo))
        }
    }
}

/// Endpoints of the level-`level` middle-thirds cylinders.
pub fn cantor_samples(level: u32) -> Vec<BigRational> {
    CantorSet::middle_thirds(level).endpoints().to_vec()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaleRow {
    pub scale: String,
    pub scale_approx: f64,
    pub samples: usize,
    /// `max μ(B) / ρ^δ`.
    pub upper: f64,
    /// `max ρ^δ / μ(B)`.
    pub lower: f64,
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rejection {
    pub x: String,
    pub scale: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerLawReport {
    pub measure: String,
    pub delta: f64,
    /// Always `"+delta"`: balls are compared with `ρ^δ`, not `ρ^-δ`.
    pub exponent_convention: &'static str,
    pub rows: Vec<ScaleRow>,
    /// Best constant over all scales.
    pub constant: f64,
    /// Largest last-to-first growth of either ratio across the scale range.
    pub growth: f64,
    pub tolerance: f64,
    pub stable: bool,
    pub rejected: Vec<Rejection>,
    pub passed: bool,
}

/// Scales are sorted from coarse to fine. A sample whose ball has zero
/// measure at some scale is dropped from every scale and listed in
/// `rejected`. The check passes when `C` is finite and the largest
/// per-scale constant on the finer half of the range exceeds the coarser
/// half's by at most the relative `tolerance`.
pub fn power_law_check(
    measure: &dyn MeasureOracle,
    delta: f64,
    scales: &[BigRational],
    samples: &[BigRational],
    tolerance: f64,
    exec: Execution,
) -> Result<PowerLawReport, AnalysisError> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(AnalysisError::Domain(format!("delta = {delta} must be positive")));
    }
    if scales.len() < 2 || scales.iter().any(|r| !r.is_positive()) {
        return Err(AnalysisError::Domain("need at least two positive scales".into()));
    }
    let mut scales = scales.to_vec();
    scales.sort_by(|a, b| b.cmp(a));
    scales.dedup();
    let powers: Vec<f64> = scales.iter().map(|r| (delta * rational::ln(r)).exp()).collect();

    let per_sample = par::map(exec, samples, |x| -> Result<Vec<f64>, Rejection> {
        scales
            .iter()
            .map(|r| {
                let m = measure.ball(x, r);
                if m > 0.0 {
                    Ok(m)
                } else {
                    Err(Rejection {
                        x: rational::format(x),
                        scale: rational::format(r),
                        reason: "zero-measure ball".into(),
                    })
                }
            })
            .collect()
    });
    let mut rejected = Vec::new();
    let mut kept = Vec::new();
    for r in per_sample {
        match r {
            Ok(v) => kept.push(v),
            Err(e) => rejected.push(e),
        }
    }

    let rows: Vec<ScaleRow> = scales
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let (mut upper, mut lower) = (0.0f64, 0.0f64);
            for m in kept.iter().map(|v| v[k]) {
                upper = upper.max(m / powers[k]);
                lower = lower.max(powers[k] / m);
            }
            ScaleRow {
                scale: rational::format(r),
                scale_approx: rational::to_f64(r),
                samples: kept.len(),
                upper,
                lower,
                c: upper.max(lower),
            }
        })
        .collect();

    let constant = if kept.is_empty() {
        f64::INFINITY
    } else {
        rows.iter().map(|r| r.c).fold(0.0, f64::max)
    };
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    let growth = (last.upper / first.upper).max(last.lower / first.lower);
    let half = rows.len() / 2;
    let coarse = rows[..half].iter().map(|r| r.c).fold(0.0, f64::max);
    let fine = rows[half..].iter().map(|r| r.c).fold(0.0, f64::max);
    let stable = fine <= coarse * (1.0 + tolerance);
    let passed = !kept.is_empty() && constant.is_finite() && stable;
    Ok(PowerLawReport {
        measure: measure.description(),
        delta,
        exponent_convention: "+delta",
        rows,
        constant,
        growth,
        tolerance,
        stable,
        rejected,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_int, from_ratio};

    fn triadic(k: i64) -> BigRational {
        from_ratio(1, 3i64.pow(k as u32))
    }

    #[test]
    fn cantor_function_values() {
        assert_eq!(cantor_function(&from_ratio(1, 3)), 0.5);
        assert_eq!(cantor_function(&from_ratio(2, 3)), 0.5);
        assert_eq!(cantor_function(&from_ratio(1, 2)), 0.5);
        assert_eq!(cantor_function(&from_ratio(2, 9)), 0.25);
        assert_eq!(cantor_function(&from_ratio(8, 9)), 0.75);
        // 1/4 = 0.0202…₃ maps to 0.0101…₂ = 1/3
        assert!((cantor_function(&from_ratio(1, 4)) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn lebesgue_constant_is_two() {
        let scales: Vec<_> = (1..=10).map(triadic).collect();
        let r = power_law_check(&LebesgueMeasure, 1.0, &scales, &[from_ratio(1, 2)], 0.05, Execution::Sequential).unwrap();
        assert!((r.constant - 2.0).abs() < 1e-12);
        assert!(r.passed);
    }

    #[test]
    fn zero_measure_sample_is_rejected() {
        let scales: Vec<_> = (2..=4).map(triadic).collect();
        let r = power_law_check(
            &CantorMeasure,
            0.63,
            &scales,
            &[from_ratio(1, 2), from_int(0)],
            0.05,
            Execution::Sequential,
        )
        .unwrap();
        assert_eq!(r.rejected.len(), 1);
        assert_eq!(r.rows[0].samples, 1);
    }
}
