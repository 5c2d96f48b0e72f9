//! The sets `E_N = {x ∈ (0, 1) : every partial quotient ≤ N}`.
//!
//! Inside the cylinder of a word `w`, `E_N` has extreme points
//! `[0; w, 1, N, 1, N, …]` and `[0; w, N, 1, N, 1, …]`. Both are quadratic
//! irrationals, so interval queries with rational endpoints are decided by a
//! single descent through the word tree, with float comparisons confirmed
//! exactly whenever they are close.

use std::cmp::Ordering;

use num::{BigInt, BigRational, Signed, Zero};

use super::{box_dimension, AnalysisError, DimensionEstimate, SetOracle};
use crate::par::Execution;
use crate::rational;
use crate::strategy::QuadraticSurd;

/// Grid base used by [`dimension_of_ba_digits`].
pub const BA_DIGITS_BASE: u32 = 2;

/// Float decisions closer than this are redone exactly.
const FILTER: f64 = 1e-11;

/// A tail value `(u + √d)/v` with its float image.
#[derive(Clone, Debug)]
struct Tail {
    surd: QuadraticSurd,
    approx: f64,
}

impl Tail {
    /// `[a; b, a, b, …]`, the positive root of `b y² − ab y − a = 0`.
    fn periodic(a: u32, b: u32) -> Tail {
        let (a, b) = (a as i64, b as i64);
        let d = a * a * b * b + 4 * a * b;
        let surd = QuadraticSurd::new(BigInt::from(a * b), BigInt::from(d), BigInt::from(2 * b)).expect("never a square");
        let approx = ((a * b) as f64 + (d as f64).sqrt()) / (2 * b) as f64;
        Tail { surd, approx }
    }
}

/// Convergent pair of a word: `[0; w, t] = (t p + p') / (t q + q')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Word {
    p: i128,
    q: i128,
    pp: i128,
    qp: i128,
}

impl Word {
    const EMPTY: Word = Word { p: 0, q: 1, pp: 1, qp: 0 };

    fn child(&self, a: u32) -> Word {
        let a = a as i128;
        Word {
            p: a * self.p + self.pp,
            q: a * self.q + self.qp,
            pp: self.p,
            qp: self.q,
        }
    }

    fn at(&self, t: f64) -> f64 {
        (t * self.p as f64 + self.pp as f64) / (t * self.q as f64 + self.qp as f64)
    }

    fn at_rational(&self, t: &BigRational) -> BigRational {
        let big = |v: i128| BigRational::from_integer(BigInt::from(v));
        (t * big(self.p) + big(self.pp)) / (t * big(self.q) + big(self.qp))
    }

    /// Sign of `[0; w, y] − r`.
    fn cmp_at(&self, y: &Tail, r: &BigRational, r_approx: f64) -> Ordering {
        let x = self.at(y.approx);
        if (x - r_approx).abs() > FILTER {
            return x.partial_cmp(&r_approx).expect("finite");
        }
        // x − r has the sign of y·A + B
        let big = |v: i128| BigRational::from_integer(BigInt::from(v));
        let a = big(self.p) - r * big(self.q);
        let b = big(self.pp) - r * big(self.qp);
        if a.is_zero() {
            return b.cmp(&BigRational::zero());
        }
        let ord = y.surd.cmp_rational(&(-b / &a));
        if a.is_positive() {
            ord
        } else {
            ord.reverse()
        }
    }
}

/// Decides whether open intervals meet `E_N`, descending at most `depth`
/// digits.
#[derive(Clone, Debug)]
pub struct BaDigitOracle {
    pub n: u32,
    pub depth: u32,
    low: Tail,
    high: Tail,
}

pub fn ba_digit_set_oracle(n: u32, depth: u32) -> Result<BaDigitOracle, AnalysisError> {
    if n == 0 {
        return Err(AnalysisError::Domain("digit bound must be at least 1".into()));
    }
    Ok(BaDigitOracle {
        n,
        depth,
        low: Tail::periodic(1, n),
        high: Tail::periodic(n, 1),
    })
}

impl BaDigitOracle {
    /// Whether the open interval meets the hull of `E_N` inside the cylinder
    /// of `w`, and whether it contains one of the hull's endpoints.
    fn classify(&self, w: &Word, lo: (&BigRational, f64), hi: (&BigRational, f64)) -> (bool, bool) {
        // the map t ↦ [0; w, t] reverses order for words of odd length
        let ends = [&self.low, &self.high];
        let inside = |t: &Tail| w.cmp_at(t, lo.0, lo.1) == Ordering::Greater && w.cmp_at(t, hi.0, hi.1) == Ordering::Less;
        if ends.iter().any(|t| inside(t)) {
            return (true, true);
        }
        let below = |t: &Tail| w.cmp_at(t, lo.0, lo.1) != Ordering::Greater;
        let above = |t: &Tail| w.cmp_at(t, hi.0, hi.1) != Ordering::Less;
        let disjoint = (below(&self.low) && below(&self.high)) || (above(&self.low) && above(&self.high));
        (!disjoint, false)
    }
}

impl SetOracle for BaDigitOracle {
    fn description(&self) -> String {
        format!("partial quotients <= {}", self.n)
    }

    fn meets(&self, lo: &BigRational, hi: &BigRational) -> Result<bool, AnalysisError> {
        if hi <= lo {
            return Ok(false);
        }
        let (lo, hi) = ((lo, rational::to_f64(lo)), (hi, rational::to_f64(hi)));
        let mut w = Word::EMPTY;
        match self.classify(&w, lo, hi) {
            (false, _) => return Ok(false),
            (true, true) => return Ok(true),
            _ => {}
        }
        for _ in 0..self.depth {
            // (lo, hi) lies strictly inside the hull and holds no endpoint of it
            let next = (1..=self.n)
                .map(|a| (w.child(a), self.classify(&w.child(a), lo, hi)))
                .find(|(_, (meets, _))| *meets);
            match next {
                None => return Ok(false),
                Some((_, (_, true))) => return Ok(true),
                Some((child, _)) => w = child,
            }
        }
        Err(AnalysisError::Refused {
            depth: self.depth,
            width: hi.1 - lo.1,
        })
    }
}

/// Cylinders `{[0; w, t] : t ≥ 1}` of all words of length `len` with digits
/// in `1..=n`, as sorted closed intervals with exact endpoints.
pub fn digit_cylinders(n: u32, len: u32) -> Vec<(BigRational, BigRational)> {
    let mut words = vec![Word::EMPTY];
    for _ in 0..len {
        words = words.iter().flat_map(|w| (1..=n).map(move |a| w.child(a))).collect();
    }
    let one = BigRational::from_integer(1.into());
    let mut out: Vec<(BigRational, BigRational)> = words
        .iter()
        .map(|w| {
            let a = w.at_rational(&one);
            let b = BigRational::new(BigInt::from(w.p), BigInt::from(w.q));
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    out.sort();
    out
}

/// Box dimension of `E_N` on the dyadic grid at the given depths.
pub fn dimension_of_ba_digits(n: u32, depths: &[u32], exec: Execution) -> Result<DimensionEstimate, AnalysisError> {
    if n < 2 {
        return Err(AnalysisError::Domain(format!("digit bound {n} < 2")));
    }
    let max = depths.iter().copied().max().unwrap_or(0);
    // hull widths fall by at least φ² per digit, so 2d + 8 digits resolve 2^-d
    let oracle = ba_digit_set_oracle(n, 2 * max + 8)?;
    let mut est = box_dimension(&oracle, BA_DIGITS_BASE, depths, exec)?;
    est.oracle_depth = Some(oracle.depth);
    est.note = Some(format!("bounded-digit subset E_{n} of the badly approximable numbers"));
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_ratio;

    #[test]
    fn golden_is_the_only_point_of_e1() {
        let o = ba_digit_set_oracle(1, 40).unwrap();
        assert!(o.meets(&from_ratio(61, 100), &from_ratio(62, 100)).unwrap());
        assert!(o.meets(&from_ratio(6180, 10000), &from_ratio(6181, 10000)).unwrap());
        assert!(!o.meets(&from_ratio(1, 2), &from_ratio(6, 10)).unwrap());
        assert!(!o.meets(&from_ratio(62, 100), &from_ratio(1, 1)).unwrap());
    }

    #[test]
    fn e2_gaps() {
        let o = ba_digit_set_oracle(2, 40).unwrap();
        // E_2 ⊂ [[0; 2, 1, 2, …], [0; 1, 2, 1, …]] ≈ [0.366, 0.732]
        assert!(!o.meets(&from_ratio(0, 1), &from_ratio(36, 100)).unwrap());
        assert!(!o.meets(&from_ratio(74, 100), &from_ratio(1, 1)).unwrap());
        assert!(o.meets(&from_ratio(36, 100), &from_ratio(37, 100)).unwrap());
        // 1/2 = [0; 2] lies in the gap between the digit-1 and digit-2 cylinders
        assert!(!o.meets(&from_ratio(49, 100), &from_ratio(51, 100)).unwrap());
    }

    #[test]
    fn shallow_budget_refuses() {
        let o = ba_digit_set_oracle(2, 1).unwrap();
        let r = o.meets(&from_ratio(4000, 10000), &from_ratio(4001, 10000));
        assert!(matches!(r, Err(AnalysisError::Refused { .. })), "{r:?}");
    }

    #[test]
    fn children_abut() {
        for len in 0..5 {
            let parents = digit_cylinders(3, len);
            let children = digit_cylinders(3, len + 1);
            for (k, (lo, hi)) in parents.iter().enumerate() {
                let kids = &children[3 * k..3 * k + 3];
                assert!(kids.iter().all(|(a, b)| a >= lo && b <= hi));
                assert!(kids.windows(2).all(|p| p[0].1 == p[1].0));
            }
        }
    }
}
