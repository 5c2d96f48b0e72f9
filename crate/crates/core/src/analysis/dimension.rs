//! Box counting on `[0, 1]` with least-squares slope fits.

use num::{BigInt, BigRational, One, Zero};
use serde::Serialize;

use super::AnalysisError;
use crate::par::{self, Execution};
use crate::rational;

/// Coarse scales discarded before fitting (fewer when that would leave
/// less than three points).
const DROPPED_SCALES: usize = 2;

pub trait SetOracle: Sync {
    fn description(&self) -> String;
    /// Whether the open interval `(lo, hi)` meets the set.
    fn meets(&self, lo: &BigRational, hi: &BigRational) -> Result<bool, AnalysisError>;
}

/// The full middle-thirds Cantor set, decided exactly.
#[derive(Clone, Copy, Debug, Default)]
pub struct CantorOracle;

impl SetOracle for CantorOracle {
    fn description(&self) -> String {
        "middle-thirds cantor set".into()
    }

    fn meets(&self, lo: &BigRational, hi: &BigRational) -> Result<bool, AnalysisError> {
        let three = BigRational::from_integer(3.into());
        let (mut a, mut w) = (BigRational::zero(), BigRational::one());
        loop {
            let b = &a + &w;
            // both cylinder endpoints belong to the set
            if hi <= &a || lo >= &b {
                return Ok(false);
            }
            if (lo < &a && &a < hi) || (lo < &b && &b < hi) {
                return Ok(true);
            }
            // (lo, hi) sits inside (a, b): follow the outer third it reaches into
            w /= &three;
            if lo < &(&a + &w) {
                continue;
            }
            if hi > &(&b - &w) {
                a = &b - &w;
                continue;
            }
            return Ok(false);
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct UnitInterval;

impl SetOracle for UnitInterval {
    fn description(&self) -> String {
        "[0,1]".into()
    }

    fn meets(&self, lo: &BigRational, hi: &BigRational) -> Result<bool, AnalysisError> {
        Ok(lo < hi && hi > &BigRational::zero() && lo < &BigRational::one())
    }
}

#[derive(Clone, Debug, Default)]
pub struct FinitePoints(pub Vec<BigRational>);

impl SetOracle for FinitePoints {
    fn description(&self) -> String {
        format!("{} points", self.0.len())
    }

    fn meets(&self, lo: &BigRational, hi: &BigRational) -> Result<bool, AnalysisError> {
        Ok(self.0.iter().any(|p| lo < p && p < hi))
    }
}

/// `N(base^-d)` for `d = 0..=max_depth`: the number of open grid cells
/// `(j b^-d, (j+1) b^-d)` meeting the set. Only children of occupied cells
/// are queried.
pub fn box_counts(oracle: &dyn SetOracle, base: u32, max_depth: u32, exec: Execution) -> Result<Vec<u64>, AnalysisError> {
    if base < 2 {
        return Err(AnalysisError::Domain(format!("grid base {base} < 2")));
    }
    let mut cells: Vec<u64> = if oracle.meets(&BigRational::zero(), &BigRational::one())? {
        vec![0]
    } else {
        vec![]
    };
    let mut counts = vec![cells.len() as u64];
    let mut denom = BigInt::one();
    for _ in 0..max_depth {
        denom *= base;
        let candidates: Vec<u64> = cells.iter().flat_map(|j| (0..base as u64).map(move |c| j * base as u64 + c)).collect();
        let hits = par::map(exec, &candidates, |j| {
            let lo = BigRational::new(BigInt::from(*j), denom.clone());
            let hi = BigRational::new(BigInt::from(j + 1), denom.clone());
            oracle.meets(&lo, &hi)
        });
        cells = candidates
            .into_iter()
            .zip(hits)
            .filter_map(|(j, h)| h.map(|h| h.then_some(j)).transpose())
            .collect::<Result<_, _>>()?;
        counts.push(cells.len() as u64);
    }
    Ok(counts)
}

/// Ordinary least squares `y = slope·x + intercept`, with a half-width of
/// two standard errors of the slope.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let half = if xs.len() > 2 { 2.0 * (ssr / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    (slope, intercept, half)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub set: String,
    pub base: u32,
    pub depths: Vec<u32>,
    pub scales: Vec<String>,
    pub counts: Vec<u64>,
    /// Depths entering the fit after the coarse ones are dropped.
    pub fit_depths: Vec<u32>,
    pub slope: f64,
    pub intercept: f64,
    pub half_width: f64,
    /// The raw fit left `[0, 1]` and was clamped.
    pub clamped: bool,
    /// Word-length budget of the oracle, when it has one.
    pub oracle_depth: Option<u32>,
    pub note: Option<String>,
}

impl DimensionEstimate {
    pub fn csv(&self) -> String {
        let mut out = String::from("depth,scale,count\n");
        for ((d, s), n) in self.depths.iter().zip(&self.scales).zip(&self.counts) {
            out.push_str(&format!("{d},{s},{n}\n"));
        }
        out
    }
}

/// Slope of `log N(ρ)` against `log(1/ρ)` over `ρ = base^-d`.
pub fn box_dimension(oracle: &dyn SetOracle, base: u32, depths: &[u32], exec: Execution) -> Result<DimensionEstimate, AnalysisError> {
    let mut depths = depths.to_vec();
    depths.sort_unstable();
    depths.dedup();
    if depths.len() < 3 {
        return Err(AnalysisError::Domain(format!("need at least 3 scales, got {}", depths.len())));
    }
    let all = box_counts(oracle, base, *depths.last().expect("non-empty"), exec)?;
    let counts: Vec<u64> = depths.iter().map(|&d| all[d as usize]).collect();
    let drop = DROPPED_SCALES.min(depths.len() - 3);
    let fit_depths = depths[drop..].to_vec();
    let xs: Vec<f64> = fit_depths.iter().map(|&d| d as f64 * (base as f64).ln()).collect();
    let ys: Vec<f64> = counts[drop..].iter().map(|&n| (n.max(1) as f64).ln()).collect();
    let (raw, intercept, half_width) = fit_slope(&xs, &ys);
    let slope = raw.clamp(0.0, 1.0);
    let scales = depths
        .iter()
        .map(|&d| rational::format(&BigRational::new(BigInt::one(), num::pow(BigInt::from(base), d as usize))))
        .collect();
    Ok(DimensionEstimate {
        set: oracle.description(),
        base,
        depths,
        scales,
        counts,
        fit_depths,
        slope,
        intercept,
        half_width,
        clamped: slope != raw,
        oracle_depth: None,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_ratio;

    #[test]
    fn cantor_counts_are_powers_of_two() {
        let c = box_counts(&CantorOracle, 3, 8, Execution::Sequential).unwrap();
        assert_eq!(c, (0..=8).map(|k| 1u64 << k).collect::<Vec<_>>());
    }

    #[test]
    fn cantor_oracle_decisions() {
        assert!(!CantorOracle.meets(&from_ratio(1, 3), &from_ratio(2, 3)).unwrap());
        assert!(CantorOracle.meets(&from_ratio(1, 4), &from_ratio(1, 3)).unwrap());
        assert!(!CantorOracle.meets(&from_ratio(7, 27), &from_ratio(8, 27)).unwrap());
        assert!(CantorOracle.meets(&from_ratio(-1, 2), &from_ratio(1, 100)).unwrap());
    }

    #[test]
    fn interval_has_dimension_one() {
        let e = box_dimension(&UnitInterval, 2, &[2, 3, 4, 5, 6, 7], Execution::Sequential).unwrap();
        assert!((e.slope - 1.0).abs() < 1e-12);
        assert_eq!(e.fit_depths, vec![4, 5, 6, 7]);
    }

    #[test]
    fn too_few_scales() {
        assert!(matches!(
            box_dimension(&UnitInterval, 2, &[3, 4], Execution::Sequential),
            Err(AnalysisError::Domain(_))
        ));
    }

    #[test]
    fn fit_recovers_a_line() {
        let (s, b, h) = fit_slope(&[1.0, 2.0, 3.0, 4.0], &[3.0, 5.0, 7.0, 9.0]);
        assert!((s - 2.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12 && h < 1e-12);
    }
}
