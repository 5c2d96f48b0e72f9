//! Alice's avoidance strategy on the half-plane boundary and on trees.

use std::sync::Arc;

use num::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::games::{GameParams, Player, Reply, ReplyOf, Strategy, TranscriptOf, Variant};
use crate::horoballs::HoroballFamily;
use crate::hyperbolic::ray_offset;
use crate::metric::{Ball, LineBall, LineSet};
use crate::rational::{self, from_int};
use crate::tree::{TreeHoroball, TreeRadius, TreeSpace};

#[derive(Debug, Error, PartialEq)]
pub enum StrategyError {
    #[error("probe at height {height} over {x} lies in the horoball at infinity; opening radius too large")]
    ProbeInCusp { x: String, height: f64 },
    #[error("the absolute game is required")]
    Variant,
}

/// One move of the half-plane strategy against Bob's ball `B(x_i, ρ_i)`:
/// the deletion and, on a hit, the base of the horoball containing the
/// probe `γ_{x_i}(−log_a ρ_i)`.
pub fn alice_move(
    family: &HoroballFamily,
    visual_a: f64,
    window: &(BigRational, BigRational),
    bob: &LineBall,
    beta: &BigRational,
) -> Result<(LineBall, Option<BigRational>), StrategyError> {
    let t = -rational::ln(&bob.radius) / visual_a.ln();
    let (dx, height) = ray_offset(rational::to_f64(&bob.center), t);
    if family.in_infinity(height) {
        return Err(StrategyError::ProbeInCusp {
            x: rational::format(&bob.center),
            height,
        });
    }
    let r = &bob.radius * beta;
    if let Some(h) = family.locate_offset(&bob.center, dx, height) {
        return Ok((Ball::new(h.base.clone(), r), Some(h.base.clone())));
    }
    // any deletion disjoint from B_i will do; step off toward the roomier side
    let (lo, hi) = window;
    let away = &bob.radius * from_int(2) + &r;
    let center = if hi - &bob.center >= &bob.center - lo {
        &bob.center + away
    } else {
        &bob.center - away
    };
    Ok((Ball::new(center, r), None))
}

/// Absolute-game Alice on a line window avoiding a horoball family.
#[derive(Clone, Debug)]
pub struct HoroballAvoidance {
    pub family: Arc<HoroballFamily>,
    pub visual_a: f64,
    pub window: (BigRational, BigRational),
}

impl HoroballAvoidance {
    pub fn new(family: Arc<HoroballFamily>, visual_a: f64, window: (BigRational, BigRational)) -> Self {
        HoroballAvoidance { family, visual_a, window }
    }
}

impl Strategy<LineSet> for HoroballAvoidance {
    fn name(&self) -> String {
        "horoball-avoidance".into()
    }

    fn metadata(&self) -> Value {
        json!({
            "name": "horoball-avoidance",
            "family": self.family.generation.to_string(),
            "members": self.family.len(),
            "visual_a": self.visual_a,
        })
    }

    fn next_move(&self, _: &LineSet, params: &GameParams<BigRational>, t: &TranscriptOf<LineSet>) -> Option<ReplyOf<LineSet>> {
        let Variant::Absolute { beta } = &params.variant else { return None };
        if t.to_move() != Player::Alice {
            return None;
        }
        let (ball, hit) = alice_move(&self.family, self.visual_a, &self.window, t.last_bob()?, beta).ok()?;
        let note = Some(match hit {
            Some(b) => format!("hit {}", rational::format(&b)),
            None => "miss".to_string(),
        });
        Some(Reply { ball, consulted: None, note })
    }
}

/// The same strategy on a tree with `β = a^-m`: probe the vertex at depth
/// `n_i` on the way to `x_i`; on a hit at `ξ` delete `B(ξ, a^-(n_i+m))`,
/// otherwise delete the sibling cylinder of that size.
#[derive(Clone, Debug)]
pub struct TreeAvoidance {
    pub family: Arc<Vec<TreeHoroball>>,
}

impl TreeAvoidance {
    pub fn new(family: Arc<Vec<TreeHoroball>>) -> Self {
        TreeAvoidance { family }
    }
}

impl Strategy<TreeSpace> for TreeAvoidance {
    fn name(&self) -> String {
        "tree-avoidance".into()
    }

    fn next_move(&self, space: &TreeSpace, params: &GameParams<u32>, t: &TranscriptOf<TreeSpace>) -> Option<ReplyOf<TreeSpace>> {
        let Variant::Absolute { beta: m } = &params.variant else { return None };
        if t.to_move() != Player::Alice {
            return None;
        }
        let b = t.last_bob()?;
        let n = (b.radius.0 as usize).min(b.center.len());
        let r = TreeRadius(b.radius.0 + m);
        let probe = &b.center[..n];
        if let Some(h) = self.family.iter().find(|h| h.contains_vertex(probe)) {
            return Some(Reply {
                ball: Ball::new(h.base.clone(), r),
                consulted: None,
                note: Some("hit".into()),
            });
        }
        if n == 0 {
            // the whole boundary: nothing is disjoint from it
            return None;
        }
        let mut c = b.center.clone();
        c[n - 1] = (c[n - 1] + 1) % space.branching;
        Some(Reply {
            ball: Ball::new(c, r),
            consulted: None,
            note: Some("miss".into()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horoballs::generate_ford;
    use crate::rational::{from_int, from_ratio};

    #[test]
    fn probe_over_half_hits_its_circle() {
        let f = generate_ford(20).unwrap();
        let window = (from_int(0), from_int(1));
        let bob = Ball::new(from_ratio(1, 2), from_ratio(1, 8));
        let (a, hit) = alice_move(&f, std::f64::consts::E, &window, &bob, &from_ratio(1, 10)).unwrap();
        assert_eq!(hit, Some(from_ratio(1, 2)));
        assert_eq!(a, Ball::new(from_ratio(1, 2), from_ratio(1, 80)));
    }

    #[test]
    fn empty_family_always_misses() {
        let f = HoroballFamily::empty();
        let window = (from_int(0), from_int(1));
        let bob = Ball::new(from_ratio(1, 3), from_ratio(1, 8));
        let (a, hit) = alice_move(&f, std::f64::consts::E, &window, &bob, &from_ratio(1, 10)).unwrap();
        assert!(hit.is_none());
        assert!((&a.center - &bob.center) > (&a.radius + &bob.radius));
    }

    #[test]
    fn large_opening_reaches_the_cusp() {
        let f = generate_ford(5).unwrap();
        let window = (from_int(0), from_int(1));
        let bob = Ball::new(from_ratio(1, 2), from_ratio(1, 100_000) * from_int(100_000) * from_int(3));
        assert!(matches!(
            alice_move(&f, std::f64::consts::E, &window, &bob, &from_ratio(1, 10)),
            Err(StrategyError::ProbeInCusp { .. })
        ));
    }
}
