use num::{BigRational, One, Signed, Zero};

use super::{Ball, BallSpace, LineSet, MetricError};
use crate::par::{self, Execution};
use crate::rational;

/// Largest admissible diffuseness parameter for a `ν`-uniformly-perfect set:
/// `min{1 − ν, ν²/4}`. Any β strictly below it works.
pub fn diffuse_bound_from_perfectness(nu: &BigRational) -> Result<BigRational, MetricError> {
    if !nu.is_positive() || nu >= &BigRational::one() {
        return Err(MetricError::Domain {
            name: "nu",
            value: rational::format(nu),
            range: "(0, 1)",
        });
    }
    let a = BigRational::one() - nu;
    let b = nu * nu / BigRational::from_integer(4.into());
    Ok(a.min(b))
}

/// A point `x' ∈ E` with `B(x', βρ) ⊆ B(x, ρ)` and `d(x', y) > 2βρ`, i.e.
/// `B(x', βρ) ⊆ B(x, ρ) − B(y, βρ)`; `x' = x` whenever that already works.
pub fn diffuse_witness(set: &LineSet, x: &BigRational, rho: &BigRational, y: &BigRational, beta: &BigRational) -> Option<BigRational> {
    let r = rho * beta;
    let obstacle = Ball::new(y.clone(), r.clone());
    set.find_avoiding(&Ball::new(x.clone(), rho.clone()), &r, Some(&obstacle))
        .map(|b| b.center)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerfectnessWitness {
    pub x: BigRational,
    pub radius: BigRational,
    /// A point of `B(x, R) − B(x, νR)`, or `None` on failure.
    pub witness: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerfectnessReport {
    pub nu: BigRational,
    pub scales: Vec<BigRational>,
    pub witnesses: Vec<PerfectnessWitness>,
    /// `(x, R)` pairs whose annulus is empty.
    pub failures: Vec<(BigRational, BigRational)>,
    /// Pairs skipped because the set does not escape `B(x, R)`.
    pub vacuous: usize,
}

impl PerfectnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Points of `set` in `[x − R, x + R]` worth trying as annulus witnesses.
fn annulus_candidates(set: &LineSet, x: &BigRational, r: &BigRational) -> Vec<BigRational> {
    let (lo, hi) = (x - r, x + r);
    match set.points_in(&lo, &hi) {
        // the farthest point in range is one of the two extremes
        Some(points) => points.first().into_iter().chain(points.last()).cloned().collect(),
        None => {
            let (wlo, whi) = set.hull().expect("window has a hull");
            vec![hi.clone().min(whi.clone()), lo.clone().max(wlo.clone())]
                .into_iter()
                .filter(|c| set.contains(c))
                .collect()
        }
    }
}

/// Farthest set point from `x` within distance `r`, larger coordinate on ties.
fn farthest_within(set: &LineSet, x: &BigRational, r: &BigRational) -> Option<BigRational> {
    annulus_candidates(set, x, r)
        .into_iter()
        .filter(|c| (c - x).abs() <= *r)
        .max_by(|a, b| (a - x).abs().cmp(&(b - x).abs()).then_with(|| a.cmp(b)))
}

/// Certifies `B(x, R) − B(x, νR) ∩ E ≠ ∅` for every sample and scale.
pub fn check_uniform_perfectness(
    set: &LineSet,
    nu: &BigRational,
    scales: &[BigRational],
    samples: &[BigRational],
) -> Result<PerfectnessReport, MetricError> {
    if scales.is_empty() {
        return Err(MetricError::Domain {
            name: "scales",
            value: "[]".into(),
            range: "non-empty list",
        });
    }
    if !nu.is_positive() || nu >= &BigRational::one() {
        return Err(MetricError::Domain {
            name: "nu",
            value: rational::format(nu),
            range: "(0, 1)",
        });
    }
    let pairs: Vec<(BigRational, BigRational)> = samples.iter().flat_map(|x| scales.iter().map(move |r| (x.clone(), r.clone()))).collect();
    let results = par::map(Execution::default(), &pairs, |(x, r)| {
        if !set.escapes(x, r) {
            return None;
        }
        let inner = nu * r;
        let witness = farthest_within(set, x, r).filter(|w| (w - x).abs() > inner);
        Some(PerfectnessWitness {
            x: x.clone(),
            radius: r.clone(),
            witness,
        })
    });
    let mut report = PerfectnessReport {
        nu: nu.clone(),
        scales: scales.to_vec(),
        witnesses: Vec::new(),
        failures: Vec::new(),
        vacuous: 0,
    };
    for r in results {
        match r {
            None => report.vacuous += 1,
            Some(w) => {
                if w.witness.is_none() {
                    report.failures.push((w.x.clone(), w.radius.clone()));
                }
                report.witnesses.push(w);
            }
        }
    }
    Ok(report)
}

/// The supremum of the `ν` that pass [`check_uniform_perfectness`] on the
/// given samples and scales: `min over (x, R) of max{d(x, y)/R : y ∈ E ∩ B(x, R)}`.
/// Returns `None` when every pair is vacuous.
pub fn measure_perfectness(set: &LineSet, scales: &[BigRational], samples: &[BigRational]) -> Option<BigRational> {
    let pairs: Vec<(BigRational, BigRational)> = samples.iter().flat_map(|x| scales.iter().map(move |r| (x.clone(), r.clone()))).collect();
    par::map(Execution::default(), &pairs, |(x, r)| {
        if !set.escapes(x, r) {
            return None;
        }
        let far = farthest_within(set, x, r).map(|w| (w - x).abs()).unwrap_or_else(BigRational::zero);
        Some(far / r)
    })
    .into_iter()
    .flatten()
    .min()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffuseTrial {
    pub x: BigRational,
    pub rho: BigRational,
    pub y: BigRational,
    pub witness: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffusenessCertificate {
    pub beta0: BigRational,
    pub trials: Vec<DiffuseTrial>,
}

impl DiffusenessCertificate {
    pub fn counterexamples(&self) -> impl Iterator<Item = &DiffuseTrial> {
        self.trials.iter().filter(|t| t.witness.is_none())
    }

    pub fn passed(&self) -> bool {
        self.counterexamples().next().is_none()
    }
}

/// Runs [`diffuse_witness`] for every sample `x`, every scale `ρ` at which
/// the set escapes `B(x, ρ)`, and the obstacle centers
/// `y ∈ {x, x ± kρ/4 : k = 1..4}`. Each accepted witness is re-checked with
/// the two distance inequalities.
pub fn certify_diffuse(
    set: &LineSet,
    beta: &BigRational,
    scales: &[BigRational],
    samples: &[BigRational],
    exec: Execution,
) -> DiffusenessCertificate {
    let mut jobs = Vec::new();
    for x in samples {
        for rho in scales {
            if !set.escapes(x, rho) {
                continue;
            }
            let quarter = rho / BigRational::from_integer(4.into());
            jobs.push((x.clone(), rho.clone(), x.clone()));
            for k in 1..=4 {
                let off = &quarter * BigRational::from_integer(k.into());
                jobs.push((x.clone(), rho.clone(), x + &off));
                jobs.push((x.clone(), rho.clone(), x - &off));
            }
        }
    }
    let trials = par::map(exec, &jobs, |(x, rho, y)| {
        let witness = diffuse_witness(set, x, rho, y, beta).filter(|w| {
            let r = rho * beta;
            let two = BigRational::from_integer(2.into());
            set.contains(w) && &r + (w - x).abs() <= *rho && (w - y).abs() > &two * &r
        });
        DiffuseTrial {
            x: x.clone(),
            rho: rho.clone(),
            y: y.clone(),
            witness,
        }
    });
    DiffusenessCertificate { beta0: beta.clone(), trials }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::CantorSet;
    use crate::rational::{from_int, from_ratio};

    #[test]
    fn bound_examples() {
        assert_eq!(diffuse_bound_from_perfectness(&from_ratio(1, 2)).unwrap(), from_ratio(1, 16));
        assert_eq!(diffuse_bound_from_perfectness(&from_ratio(1, 3)).unwrap(), from_ratio(1, 36));
        let near_one = diffuse_bound_from_perfectness(&from_ratio(999, 1000)).unwrap();
        assert_eq!(near_one, from_ratio(1, 1000));
        assert!(diffuse_bound_from_perfectness(&from_int(1)).is_err());
        assert!(diffuse_bound_from_perfectness(&from_int(0)).is_err());
    }

    #[test]
    fn witness_examples() {
        let e = LineSet::unit_window();
        let w = diffuse_witness(&e, &from_ratio(1, 2), &from_ratio(1, 10), &from_ratio(1, 2), &from_ratio(1, 10));
        assert_eq!(w, Some(from_ratio(11, 20)));
        let w = diffuse_witness(&e, &from_ratio(1, 2), &from_ratio(1, 10), &from_int(5), &from_ratio(1, 10));
        assert_eq!(w, Some(from_ratio(1, 2)));

        let cantor = LineSet::Cantor(CantorSet::middle_thirds(6));
        let w = diffuse_witness(&cantor, &from_int(0), &from_ratio(1, 3), &from_int(0), &from_ratio(1, 36)).unwrap();
        // ternary prefix 02
        assert!(w >= from_ratio(2, 9) && w <= from_ratio(1, 3), "{w}");
    }

    #[test]
    fn perfectness_examples() {
        let e = LineSet::unit_window();
        let rep = check_uniform_perfectness(&e, &from_ratio(9, 10), &[from_ratio(1, 2)], &[from_int(0)]).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.witnesses[0].witness, Some(from_ratio(1, 2)));

        let single = LineSet::finite(vec![from_ratio(1, 3)]);
        let rep = check_uniform_perfectness(&single, &from_ratio(1, 2), &[from_int(1)], &[from_ratio(1, 3)]).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.vacuous, 1);

        assert!(check_uniform_perfectness(&e, &from_ratio(1, 2), &[], &[from_int(0)]).is_err());
    }

    #[test]
    fn cantor_passes_quarter_perfectness() {
        let c = CantorSet::middle_thirds(10);
        let set = LineSet::Cantor(c.clone());
        let scales: Vec<BigRational> = (1..=8).map(|k| BigRational::new(1.into(), num::pow(num::BigInt::from(3), k))).collect();
        let samples = c.cylinder_starts(6);
        let rep = check_uniform_perfectness(&set, &from_ratio(1, 4), &scales, &samples).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!(rep.witnesses.iter().all(|w| w.witness.is_some()));
    }
}
