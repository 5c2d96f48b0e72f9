//! Continued fractions and badly-approximable checks.

use std::cmp::Ordering;

use num::integer::{gcd, Integer};
use num::{BigInt, BigRational, One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::horoballs::HoroballFamily;
use crate::rational;

/// Bits of precision for rational enclosures of surds.
const SURD_BITS: usize = 320;

/// π − 3 to 60 decimal places, as an enclosure.
const PI_MINUS_3: &str = "0.141592653589793238462643383279502884197169399375105820974944";

/// `(p + √d) / q` with `d` a positive non-square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub p: BigInt,
    pub d: BigInt,
    pub q: BigInt,
}

impl QuadraticSurd {
    pub fn new(p: BigInt, d: BigInt, q: BigInt) -> Option<Self> {
        if q.is_zero() || !d.is_positive() {
            return None;
        }
        let s = d.sqrt();
        if &s * &s == d {
            return None;
        }
        Some(QuadraticSurd { p, d, q })
    }

    /// `(√5 − 1) / 2`.
    pub fn golden() -> Self {
        QuadraticSurd::new((-1).into(), 5.into(), 2.into()).expect("valid")
    }

    /// Sign of `x − a` for rational `a`, exactly.
    pub(crate) fn cmp_rational(&self, a: &BigRational) -> Ordering {
        // x − a = (p − a q + √d) / q ; compare √d with a q − p and fix the sign of q
        let t = a * BigRational::from_integer(self.q.clone()) - BigRational::from_integer(self.p.clone());
        let sqrt_vs_t = if t.is_negative() {
            Ordering::Greater
        } else {
            BigRational::from_integer(self.d.clone()).cmp(&(&t * &t))
        };
        if self.q.is_negative() {
            sqrt_vs_t.reverse()
        } else {
            sqrt_vs_t
        }
    }

    fn floor(&self) -> BigInt {
        let s = self.d.sqrt();
        let mut a = (&self.p + &s).div_floor(&self.q);
        while self.cmp_rational(&BigRational::from_integer(a.clone())) == Ordering::Less {
            a -= 1;
        }
        while self.cmp_rational(&BigRational::from_integer(&a + 1)) != Ordering::Less {
            a += 1;
        }
        a
    }

    fn enclosure(&self) -> (BigRational, BigRational) {
        let scale = BigInt::one() << SURD_BITS;
        let s = (&self.d * &scale * &scale).sqrt();
        let lo_root = BigRational::new(s.clone(), scale.clone());
        let hi_root = BigRational::new(s + 1, scale);
        let p = BigRational::from_integer(self.p.clone());
        let q = BigRational::from_integer(self.q.clone());
        let (a, b) = ((&p + lo_root) / &q, (&p + hi_root) / &q);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// A real number known exactly or through a certified enclosure.
#[derive(Clone, Debug, PartialEq)]
pub enum RealNumber {
    Rational(BigRational),
    Surd(QuadraticSurd),
    /// `lo ≤ x ≤ hi`.
    Interval {
        lo: BigRational,
        hi: BigRational,
    },
}

impl RealNumber {
    /// `p/q`, a decimal (taken exactly), `golden`, `pi-3`, `sqrt2-1`, or
    /// `surd:P:D:Q` for `(P + √D)/Q`.
    pub fn parse(s: &str) -> Result<RealNumber, String> {
        let s = s.trim();
        match s {
            "golden" => return Ok(RealNumber::Surd(QuadraticSurd::golden())),
            "sqrt2-1" => return Ok(RealNumber::Surd(QuadraticSurd::new((-1).into(), 2.into(), 1.into()).expect("valid"))),
            "pi-3" => {
                let mid = rational::parse(PI_MINUS_3).expect("constant parses");
                let err = BigRational::new(1.into(), num::pow(BigInt::from(10), 60));
                return Ok(RealNumber::Interval {
                    lo: &mid - &err,
                    hi: &mid + &err,
                });
            }
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("surd:") {
            let parts: Vec<&str> = rest.split(':').collect();
            let ints: Result<Vec<BigInt>, _> = parts.iter().map(|p| p.parse::<BigInt>()).collect();
            return match ints.ok().as_deref() {
                Some([p, d, q]) => QuadraticSurd::new(p.clone(), d.clone(), q.clone())
                    .map(RealNumber::Surd)
                    .ok_or_else(|| format!("`{s}` is not an irrational surd")),
                _ => Err(format!("expected surd:P:D:Q, got `{s}`")),
            };
        }
        rational::parse(s).map(RealNumber::Rational).map_err(|e| e.to_string())
    }

    pub fn label(&self) -> String {
        match self {
            RealNumber::Rational(x) => rational::format(x),
            RealNumber::Surd(s) => format!("({} + sqrt({}))/{}", s.p, s.d, s.q),
            RealNumber::Interval { lo, hi } => format!("[{}, {}]", rational::to_f64(lo), rational::to_f64(hi)),
        }
    }

    pub fn enclosure(&self) -> (BigRational, BigRational) {
        match self {
            RealNumber::Rational(x) => (x.clone(), x.clone()),
            RealNumber::Surd(s) => s.enclosure(),
            RealNumber::Interval { lo, hi } => (lo.clone(), hi.clone()),
        }
    }

    pub fn approx(&self) -> f64 {
        let (lo, hi) = self.enclosure();
        rational::to_f64(&((lo + hi) / BigRational::from_integer(2.into())))
    }
}

/// Partial quotients `a_1, a_2, …` of `x = a_0 + [0; a_1, a_2, …]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuedFraction {
    #[serde(serialize_with = "ser_bigint")]
    pub integer_part: BigInt,
    #[serde(serialize_with = "ser_bigints")]
    pub digits: Vec<BigInt>,
    /// The expansion ended: `x` is rational.
    pub terminated: bool,
    /// Precision ran out before `n` digits could be certified.
    pub truncated: bool,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|d| d.to_string()))
}

/// Up to `n` partial quotients after the integer part. Exact inputs give
/// exact digits; enclosures stop with `truncated` as soon as a digit is not
/// determined.
pub fn continued_fraction(x: &RealNumber, n: usize) -> ContinuedFraction {
    let mut digits = Vec::new();
    match x {
        RealNumber::Rational(r) => {
            let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
            let (a0, rem) = num.div_mod_floor(&den);
            num = rem;
            while digits.len() < n && !num.is_zero() {
                let (a, rem) = den.div_mod_floor(&num);
                digits.push(a);
                den = num;
                num = rem;
            }
            ContinuedFraction {
                integer_part: a0,
                digits,
                terminated: num.is_zero(),
                truncated: false,
            }
        }
        RealNumber::Surd(s) => {
            // the recurrence needs q | d − p²
            if !(&s.d - &s.p * &s.p).is_multiple_of(&s.q) {
                let qa = s.q.abs();
                let scaled = QuadraticSurd {
                    p: &s.p * &qa,
                    d: &s.d * &qa * &qa,
                    q: &s.q * &qa,
                };
                return continued_fraction(&RealNumber::Surd(scaled), n);
            }
            let mut cur = s.clone();
            let a0 = cur.floor();
            let step = |cur: &QuadraticSurd, a: &BigInt| {
                let p2 = a * &cur.q - &cur.p;
                let q2 = (&cur.d - &p2 * &p2) / &cur.q;
                QuadraticSurd {
                    p: p2,
                    d: cur.d.clone(),
                    q: q2,
                }
            };
            cur = step(&cur, &a0);
            while digits.len() < n {
                let a = cur.floor();
                cur = step(&cur, &a);
                digits.push(a);
            }
            ContinuedFraction {
                integer_part: a0,
                digits,
                terminated: false,
                truncated: false,
            }
        }
        RealNumber::Interval { lo, hi } => {
            let (mut lo, mut hi) = (lo.clone(), hi.clone());
            let a0 = rational::floor(&lo);
            if a0 != rational::floor(&hi) {
                return ContinuedFraction {
                    integer_part: a0,
                    digits,
                    terminated: false,
                    truncated: true,
                };
            }
            let a0r = BigRational::from_integer(a0.clone());
            lo -= &a0r;
            hi -= &a0r;
            loop {
                if digits.len() >= n {
                    return ContinuedFraction {
                        integer_part: a0,
                        digits,
                        terminated: false,
                        truncated: false,
                    };
                }
                if lo.is_zero() {
                    let terminated = hi.is_zero();
                    return ContinuedFraction {
                        integer_part: a0,
                        digits,
                        terminated,
                        truncated: !terminated,
                    };
                }
                let (nlo, nhi) = (hi.recip(), lo.recip());
                let a = rational::floor(&nlo);
                if a != rational::floor(&nhi) {
                    return ContinuedFraction {
                        integer_part: a0,
                        digits,
                        terminated: false,
                        truncated: true,
                    };
                }
                let ar = BigRational::from_integer(a.clone());
                lo = nlo - &ar;
                hi = nhi - &ar;
                digits.push(a);
            }
        }
    }
}

/// `q²|x − p/q|` for one fraction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Margin {
    pub p: u64,
    pub q: u64,
    pub margin: f64,
}

/// Outcome of [`verify_ba_ford`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BAWitness {
    pub x: String,
    pub s: f64,
    pub qmax: u64,
    /// `continued-fraction` or `scan`.
    pub method: &'static str,
    pub checked: usize,
    /// Smallest `q²|x − p/q|` among the checked fractions.
    pub min_margin: Option<Margin>,
    /// First fraction (by `q`) with `q²|x − p/q| ≤ s`.
    pub counterexample: Option<Margin>,
    /// Fractions whose comparison with `s` the enclosure could not decide.
    pub undecided: Vec<Margin>,
}

impl BAWitness {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none() && self.undecided.is_empty()
    }

    pub fn record(&self) -> Value {
        json!({
            "record": "ba-witness",
            "x": self.x,
            "s": self.s,
            "qmax": self.qmax,
            "method": self.method,
            "checked": self.checked,
            "min_margin": self.min_margin,
            "counterexample": self.counterexample,
            "undecided": self.undecided.len(),
            "passed": self.passed(),
        })
    }
}

struct Judge {
    lo: BigRational,
    hi: BigRational,
    s: BigRational,
}

enum Call {
    Above(Margin),
    AtMost(Margin),
    Unknown(Margin),
}

impl Judge {
    fn new(x: &RealNumber, s: f64) -> Self {
        let (lo, hi) = x.enclosure();
        Judge {
            lo,
            hi,
            s: rational::from_f64(s),
        }
    }

    fn call(&self, p: u64, q: u64) -> Call {
        let f = BigRational::new(p.into(), q.into());
        let q2 = BigRational::from_integer(BigInt::from(q) * BigInt::from(q));
        let (dlo, dhi) = if f < self.lo {
            (&self.lo - &f, &self.hi - &f)
        } else if f > self.hi {
            (&f - &self.hi, &f - &self.lo)
        } else {
            (BigRational::zero(), (&f - &self.lo).max(&self.hi - &f))
        };
        let (mlo, mhi) = (&q2 * dlo, &q2 * dhi);
        let m = Margin {
            p,
            q,
            margin: rational::to_f64(&mlo),
        };
        if mlo > self.s {
            Call::Above(m)
        } else if mhi <= self.s {
            Call::AtMost(m)
        } else {
            Call::Unknown(m)
        }
    }
}

/// Convergents and intermediate fractions `(j p_k + p_{k−1})/(j q_k + q_{k−1})`
/// with denominator at most `qmax`, or `None` if the expansion could not be
/// certified far enough.
fn cf_candidates(x: &RealNumber, qmax: u64) -> Option<Vec<(u64, u64)>> {
    let cf = continued_fraction(x, 64 + 2 * (64 - qmax.leading_zeros() as usize));
    let mut out = Vec::new();
    let a0 = cf.integer_part.clone();
    // (p_{-1}, q_{-1}) = (1, 0), (p_0, q_0) = (a_0, 1)
    let (mut pm, mut qm) = (BigInt::one(), BigInt::zero());
    let (mut pk, mut qk) = (a0, BigInt::one());
    let push = |out: &mut Vec<(u64, u64)>, p: &BigInt, q: &BigInt| {
        if let (Ok(p), Ok(q)) = (u64::try_from(p), u64::try_from(q)) {
            if q >= 1 && q <= qmax {
                out.push((p, q));
            }
        }
    };
    push(&mut out, &pk, &qk);
    for a in &cf.digits {
        let mut j = BigInt::one();
        while &j < a {
            let q = &j * &qk + &qm;
            if q > BigInt::from(qmax) {
                break;
            }
            push(&mut out, &(&j * &pk + &pm), &q);
            j += 1;
        }
        let pn = a * &pk + &pm;
        let qn = a * &qk + &qm;
        pm = std::mem::replace(&mut pk, pn);
        qm = std::mem::replace(&mut qk, qn);
        if qk > BigInt::from(qmax) {
            return Some(out);
        }
        push(&mut out, &pk, &qk);
    }
    if cf.terminated {
        Some(out)
    } else {
        None
    }
}

/// Every reduced `p/q`, `q ≤ qmax`, with `q|qx − p| ≤ s` possible.
fn scan_candidates(x: &RealNumber, s: f64, qmax: u64) -> Vec<(u64, u64)> {
    let (lo, hi) = x.enclosure();
    let slack = rational::from_f64(s);
    let mut out = Vec::new();
    for q in 1..=qmax {
        let qr = BigRational::from_integer(q.into());
        let from = rational::floor(&(&lo * &qr - &slack / &qr)).max(BigInt::zero());
        let to = rational::floor(&(&hi * &qr + &slack / &qr)) + 1;
        let mut p = from;
        while p <= to {
            if let Ok(pu) = u64::try_from(&p) {
                if gcd(pu, q) == 1 {
                    out.push((pu, q));
                }
            }
            p += 1;
        }
    }
    out
}

/// Checks `q²|x − p/q| > s` for every reduced `p/q` with `q ≤ qmax`.
///
/// For `s < 1` only convergents and intermediate fractions can violate the
/// inequality, so those are all that is checked; otherwise (or when the
/// expansion of an enclosure runs out of precision) every `q` is scanned.
pub fn verify_ba_ford(x: &RealNumber, s: f64, qmax: u64) -> BAWitness {
    let (method, mut candidates) = match (s < 1.0).then(|| cf_candidates(x, qmax)).flatten() {
        Some(c) => ("continued-fraction", c),
        None => ("scan", scan_candidates(x, s, qmax)),
    };
    candidates.sort_by_key(|&(p, q)| (q, p));
    candidates.dedup();
    let judge = Judge::new(x, s);
    let mut w = BAWitness {
        x: x.label(),
        s,
        qmax,
        method,
        checked: candidates.len(),
        min_margin: None,
        counterexample: None,
        undecided: Vec::new(),
    };
    for (p, q) in candidates {
        if gcd(p, q) != 1 {
            continue;
        }
        let m = match judge.call(p, q) {
            Call::Above(m) => m,
            Call::AtMost(m) => {
                if w.counterexample.is_none() {
                    w.counterexample = Some(m.clone());
                }
                m
            }
            Call::Unknown(m) => {
                w.undecided.push(m.clone());
                m
            }
        };
        if w.min_margin.as_ref().is_none_or(|b| m.margin < b.margin) {
            w.min_margin = Some(m);
        }
    }
    w
}

/// Distance-to-shadow check against a general family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyWitness {
    pub s: f64,
    pub r_min: f64,
    pub checked: usize,
    /// Smallest `|x − ξ_j| / R_j` seen, with its base.
    pub min_ratio: Option<(String, f64)>,
    pub violations: Vec<(String, f64)>,
}

impl FamilyWitness {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `|x − ξ_j| > s·R_j` for every member with shadow radius
/// `R_j ≥ r_min`.
pub fn verify_family(x: &BigRational, family: &HoroballFamily, s: f64, r_min: f64) -> FamilyWitness {
    let mut w = FamilyWitness {
        s,
        r_min,
        checked: 0,
        min_ratio: None,
        violations: Vec::new(),
    };
    let xf = rational::to_f64(x);
    let mut best = f64::INFINITY;
    for (h, base, r) in family.with_shadows() {
        let Ok(r) = r else { continue };
        if r < r_min {
            continue;
        }
        w.checked += 1;
        let rough = (xf - base).abs();
        // float distances are only trusted well away from the threshold
        let d = if rough > 4.0 * s * r && rough > 1e-9 {
            rough
        } else {
            rational::to_f64(&(x - &h.base).abs())
        };
        let ratio = d / r;
        if ratio <= s {
            w.violations.push((rational::format(&h.base), ratio));
        }
        if ratio < best {
            best = ratio;
            w.min_ratio = Some((rational::format(&h.base), ratio));
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_ratio;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&d| BigInt::from(d)).collect()
    }

    #[test]
    fn expansions() {
        let g = continued_fraction(&RealNumber::Surd(QuadraticSurd::golden()), 12);
        assert_eq!(g.integer_part, BigInt::zero());
        assert_eq!(g.digits, ints(&[1; 12]));
        let r = continued_fraction(&RealNumber::Rational(from_ratio(16, 113)), 20);
        assert_eq!(r.digits, ints(&[7, 16]));
        assert!(r.terminated);
        let pi = continued_fraction(&RealNumber::parse("pi-3").unwrap(), 4);
        assert_eq!(pi.digits, ints(&[7, 15, 1, 292]));
        let deep = continued_fraction(&RealNumber::parse("pi-3").unwrap(), 500);
        assert!(deep.truncated && deep.digits.len() < 500);
        let root2 = continued_fraction(&RealNumber::parse("sqrt2-1").unwrap(), 5);
        assert_eq!(root2.digits, ints(&[2; 5]));
    }

    #[test]
    fn golden_margins() {
        let x = RealNumber::Surd(QuadraticSurd::golden());
        let w = verify_ba_ford(&x, 0.38, 1000);
        assert!(w.passed());
        let m = w.min_margin.unwrap();
        assert_eq!((m.p, m.q), (1, 1));
        assert!((m.margin - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rationals_fail_at_themselves() {
        let x = RealNumber::Rational(from_ratio(16, 113));
        let w = verify_ba_ford(&x, 1e-9, 200);
        let c = w.counterexample.unwrap();
        assert_eq!((c.p, c.q), (16, 113));
        assert_eq!(c.margin, 0.0);
    }

    #[test]
    fn pi_counterexample_at_113() {
        let x = RealNumber::parse("pi-3").unwrap();
        assert!(verify_ba_ford(&x, 1e-6, 500).passed());
        let w = verify_ba_ford(&x, 0.004, 500);
        assert_eq!(w.counterexample.map(|m| (m.p, m.q)), Some((16, 113)));
    }

    #[test]
    fn parse_forms() {
        assert!(matches!(RealNumber::parse("3/7"), Ok(RealNumber::Rational(_))));
        assert!(matches!(RealNumber::parse("surd:-1:5:2"), Ok(RealNumber::Surd(_))));
        assert!(RealNumber::parse("surd:1:4:2").is_err());
        assert!((RealNumber::parse("golden").unwrap().approx() - 0.618_033_988_749_895).abs() < 1e-15);
    }
}
