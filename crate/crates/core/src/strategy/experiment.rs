//! End-to-end plays of the avoidance strategy with post-hoc verification.

use std::sync::Arc;

use num::{BigInt, BigRational, One};
use serde_json::{json, Value};
use thiserror::Error;

use super::{verify_ba_ford, verify_family, BAWitness, ConstantError, FamilyWitness, HoroballAvoidance, RealNumber};
use super::{StrategyConstants, TreeAvoidance};
use crate::games::{referee, GameError, GameParams, Player, Strategy, TranscriptOf, Verdict};
use crate::horoballs::{Generation, HoroballFamily};
use crate::metric::{BallSpace, LineSet};
use crate::rational;
use crate::tree::{common_prefix, TreeHoroball, TreeSpace};

#[derive(Debug, Error, PartialEq)]
pub enum ExperimentError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Constant(#[from] ConstantError),
    #[error("opening radius {0} exceeds 1/2")]
    Opening(String),
    #[error("horoball family: {0}")]
    Family(String),
}

/// Knobs of a half-plane experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub beta: BigRational,
    pub rounds: usize,
    pub visual_a: f64,
    pub delta: f64,
    pub visual_c: f64,
    pub window: (BigRational, BigRational),
}

impl ExperimentConfig {
    pub fn echo(&self) -> Value {
        json!({
            "beta": rational::format(&self.beta),
            "rounds": self.rounds,
            "visual_a": self.visual_a,
            "delta": self.delta,
            "visual_C": self.visual_c,
            "window": [rational::format(&self.window.0), rational::format(&self.window.1)],
        })
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub transcript: TranscriptOf<LineSet>,
    pub constants: StrategyConstants,
    pub outcome: BigRational,
    pub rho_final: BigRational,
    /// Largest `q` with `1/q² ≥ ρ_final`, capped by the family's `Qmax`
    /// (saturates on long games against non-Ford families).
    pub certified_q: u64,
    /// Present for Ford families.
    pub ford: Option<BAWitness>,
    pub family: FamilyWitness,
}

impl ExperimentOutcome {
    pub fn passed(&self) -> bool {
        self.transcript.forfeit().is_none() && self.ford.as_ref().is_none_or(|w| w.passed()) && self.family.passed()
    }

    pub fn record(&self) -> Value {
        json!({
            "record": "experiment",
            "outcome": rational::format(&self.outcome),
            "outcome_approx": rational::to_f64(&self.outcome),
            "rho_final": rational::to_f64(&self.rho_final),
            "certified_q": self.certified_q,
            "constants": self.constants,
            "ford": self.ford.as_ref().map(|w| w.record()),
            "family": self.family,
            "forfeit": self.transcript.forfeit().map(|(p, v)| format!("{p}: {}", v.label())),
            "passed": self.passed(),
        })
    }
}

/// `max{q : q² ≤ 1/ρ}`, saturating at `u64::MAX`.
pub fn q_for_radius(rho: &BigRational) -> u64 {
    let inv = rational::floor(&(BigRational::one() / rho));
    let q = inv.sqrt();
    u64::try_from(&q).unwrap_or(u64::MAX)
}

/// Plays the avoidance strategy against `bob` and verifies the outcome on
/// every member coarser than the final radius, with `s` from
/// [`StrategyConstants`].
pub fn run_ba_experiment(
    family: Arc<HoroballFamily>,
    config: &ExperimentConfig,
    bob: &dyn Strategy<LineSet>,
) -> Result<ExperimentOutcome, ExperimentError> {
    let space = LineSet::Window {
        lo: config.window.0.clone(),
        hi: config.window.1.clone(),
    };
    let params = GameParams::absolute(config.beta.clone(), config.rounds);
    let alice = HoroballAvoidance::new(family.clone(), config.visual_a, config.window.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let transcript = referee(&space, &params, &alice, bob)?;
    let opening = transcript.moves[0].ball.as_ref().expect("referee keeps the opening").clone();
    if opening.radius > half {
        return Err(ExperimentError::Opening(rational::format(&opening.radius)));
    }
    let r1 = if family.is_empty() {
        1.0
    } else {
        family.max_shadow_radius().map_err(|e| ExperimentError::Family(e.to_string()))?
    };
    let constants = StrategyConstants::new(
        rational::to_f64(&config.beta),
        config.delta,
        config.visual_c,
        config.visual_a,
        rational::to_f64(&opening.radius),
        r1,
    )?;
    let last = transcript.outcome().expect("opening present").clone();
    let s = constants.s_lower;
    let mut certified_q = q_for_radius(&last.radius);
    let ford = match family.generation {
        Generation::Ford { qmax } => {
            certified_q = certified_q.min(qmax);
            Some(verify_ba_ford(&RealNumber::Rational(last.center.clone()), s, certified_q))
        }
        _ => None,
    };
    let fam = verify_family(&last.center, &family, s, rational::to_f64(&last.radius));
    Ok(ExperimentOutcome {
        transcript,
        constants,
        outcome: last.center,
        rho_final: last.radius,
        certified_q,
        ford,
        family: fam,
    })
}

/// `σ` with `s = a^-σ = min(a β², β ρ₁ / R_max)` for `β = a^-m`,
/// `ρ₁ = a^-n₁`, `R_max = a^-k_min`.
pub fn tree_exact_exponent(m: u32, n1: u32, k_min: u32) -> i64 {
    (2 * m as i64 - 1).max(m as i64 + n1 as i64 - k_min as i64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeViolation {
    pub base: Vec<u8>,
    pub k: u32,
    /// `(x|ξ)`, or `None` when `x = ξ`.
    pub overlap: Option<u32>,
}

/// Members with `k ≤ level` (shadow radius at least `a^-level`) that the
/// outcome fails to avoid: `ρ(x, ξ) > a^-σ · a^-k` is `(x|ξ) < σ + k`.
pub fn verify_tree_outcome(x: &[u8], family: &[TreeHoroball], sigma: i64, level: u32) -> Vec<TreeViolation> {
    family
        .iter()
        .filter(|h| h.k <= level)
        .filter_map(|h| {
            let overlap = common_prefix(x, &h.base);
            let ok = overlap.is_some_and(|p| (p as i64) < sigma + h.k as i64);
            (!ok).then(|| TreeViolation {
                base: h.base.clone(),
                k: h.k,
                overlap,
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct TreeOutcome {
    pub transcript: TranscriptOf<TreeSpace>,
    pub sigma: i64,
    /// Level of the last ball Alice answered; members with `k` up to it are
    /// certified.
    pub certified_level: u32,
    pub violations: Vec<TreeViolation>,
}

impl TreeOutcome {
    pub fn passed(&self) -> bool {
        self.transcript.forfeit().is_none() && self.violations.is_empty()
    }
}

/// Tree-mode play with `β = a^-m`.
pub fn run_tree_experiment(
    space: &TreeSpace,
    family: Arc<Vec<TreeHoroball>>,
    m: u32,
    rounds: usize,
    bob: &dyn Strategy<TreeSpace>,
) -> Result<TreeOutcome, ExperimentError> {
    let params = GameParams::absolute(m, rounds);
    let alice = TreeAvoidance::new(family.clone());
    let transcript = referee(space, &params, &alice, bob)?;
    let n1 = transcript.moves[0].ball.as_ref().expect("opening").radius.0;
    if n1 == 0 {
        return Err(ExperimentError::Opening("a^0".into()));
    }
    let k_min = family.iter().map(|h| h.k).min().unwrap_or(0);
    let sigma = tree_exact_exponent(m, n1, k_min);
    // the ball answered by Alice's last move is the one before the outcome
    let probed: Vec<u32> = transcript
        .moves
        .iter()
        .zip(transcript.moves.iter().skip(1))
        .filter(|(b, a)| b.player == Player::Bob && a.player == Player::Alice && a.verdict == Verdict::Legal)
        .filter_map(|(b, _)| b.ball.as_ref().map(|x| x.radius.0))
        .collect();
    let certified_level = probed.last().copied().unwrap_or(0).min(space.depth);
    let x = &transcript.outcome().expect("opening").center;
    debug_assert!(space.on_playfield(x));
    let violations = verify_tree_outcome(x, &family, sigma, certified_level);
    Ok(TreeOutcome {
        transcript,
        sigma,
        certified_level,
        violations,
    })
}
