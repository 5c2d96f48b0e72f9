//! Replays a transcript with a second, representation-level implementation
//! of the move laws: intervals and boxes for real spaces, cylinders for
//! trees.

use std::cmp::Ordering;

use num::{BigRational, One, Zero};
use thiserror::Error;

use super::{BallOf, GameParams, Player, TranscriptOf, Variant, Verdict};
use crate::metric::{BallSpace, LineSet, ProductSpace};
use crate::tree::TreeSpace;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("move {index} ({player}, round {round}): {reason}")]
pub struct AuditError {
    pub index: usize,
    pub round: usize,
    pub player: String,
    pub reason: String,
}

pub trait Audit: BallSpace {
    type Region;
    fn region(&self, b: &BallOf<Self>) -> Self::Region;
    fn region_inside(&self, inner: &Self::Region, outer: &Self::Region) -> bool;
    fn region_disjoint(&self, a: &Self::Region, b: &Self::Region) -> bool;
    fn radius_cmp(&self, a: &Self::Radius, b: &Self::Radius) -> Ordering;
    /// Schmidt's nesting order; coincides with containment on real spaces.
    fn audit_schmidt_nested(&self, inner: &BallOf<Self>, outer: &BallOf<Self>) -> bool {
        self.region_inside(&self.region(inner), &self.region(outer))
    }
    fn audit_on_playfield(&self, p: &Self::Point) -> bool;
}

fn interval(b: &crate::metric::LineBall) -> (BigRational, BigRational) {
    (&b.center - &b.radius, &b.center + &b.radius)
}

impl Audit for LineSet {
    type Region = (BigRational, BigRational);

    fn region(&self, b: &BallOf<Self>) -> Self::Region {
        interval(b)
    }

    fn region_inside(&self, inner: &Self::Region, outer: &Self::Region) -> bool {
        outer.0 <= inner.0 && inner.1 <= outer.1
    }

    fn region_disjoint(&self, a: &Self::Region, b: &Self::Region) -> bool {
        a.1 < b.0 || b.1 < a.0
    }

    fn radius_cmp(&self, a: &BigRational, b: &BigRational) -> Ordering {
        a.cmp(b)
    }

    fn audit_on_playfield(&self, p: &BigRational) -> bool {
        match self {
            LineSet::Window { lo, hi } => lo <= p && p <= hi,
            LineSet::Finite(points) => points.iter().any(|q| q == p),
            LineSet::Cantor(c) => {
                // follow the one cylinder per level that can hold p
                let (mut lo, mut hi) = (BigRational::zero(), BigRational::one());
                if p < &lo || p > &hi {
                    return false;
                }
                for _ in 0..c.depth() {
                    let w = (&hi - &lo) * c.contraction();
                    if p <= &(&lo + &w) {
                        hi = &lo + &w;
                    } else if p >= &(&hi - &w) {
                        lo = &hi - &w;
                    } else {
                        return false;
                    }
                }
                true
            }
        }
    }
}

impl Audit for ProductSpace {
    type Region = [(BigRational, BigRational); 2];

    fn region(&self, b: &BallOf<Self>) -> Self::Region {
        let (x, y) = ProductSpace::project(b);
        [interval(&x), interval(&y)]
    }

    fn region_inside(&self, inner: &Self::Region, outer: &Self::Region) -> bool {
        (0..2).all(|k| self.factor.region_inside(&inner[k], &outer[k]))
    }

    fn region_disjoint(&self, a: &Self::Region, b: &Self::Region) -> bool {
        (0..2).any(|k| self.factor.region_disjoint(&a[k], &b[k]))
    }

    fn radius_cmp(&self, a: &BigRational, b: &BigRational) -> Ordering {
        a.cmp(b)
    }

    fn audit_on_playfield(&self, p: &(BigRational, BigRational)) -> bool {
        self.factor.audit_on_playfield(&p.0) && self.factor.audit_on_playfield(&p.1)
    }
}

impl Audit for TreeSpace {
    /// The cylinder word: the first `level` digits of the center.
    type Region = Vec<u8>;

    fn region(&self, b: &BallOf<Self>) -> Vec<u8> {
        let k = (b.radius.0 as usize).min(b.center.len());
        b.center[..k].to_vec()
    }

    fn region_inside(&self, inner: &Vec<u8>, outer: &Vec<u8>) -> bool {
        inner.starts_with(outer)
    }

    fn region_disjoint(&self, a: &Vec<u8>, b: &Vec<u8>) -> bool {
        !(a.starts_with(b) || b.starts_with(a))
    }

    fn radius_cmp(&self, a: &crate::tree::TreeRadius, b: &crate::tree::TreeRadius) -> Ordering {
        b.0.cmp(&a.0)
    }

    fn audit_schmidt_nested(&self, inner: &BallOf<Self>, outer: &BallOf<Self>) -> bool {
        let agree = inner.center.iter().zip(&outer.center).take_while(|(a, b)| a == b).count();
        let d = if inner.center == outer.center {
            0.0
        } else {
            self.a.powi(-(agree as i32))
        };
        self.a.powi(-(inner.radius.0 as i32)) + d <= self.a.powi(-(outer.radius.0 as i32)) * (1.0 + 1e-12)
    }

    fn audit_on_playfield(&self, p: &Vec<u8>) -> bool {
        p.len() == self.depth as usize && p.iter().all(|&d| d < self.branching)
    }
}

/// Re-validates every legal move and checks that illegal verdicts are
/// justified and terminal.
pub fn audit<S: Audit>(space: &S, params: &GameParams<S::Ratio>, t: &TranscriptOf<S>) -> Result<(), AuditError> {
    let mut bob: Option<&BallOf<S>> = None;
    let mut alice: Option<&BallOf<S>> = None;
    for (index, m) in t.moves.iter().enumerate() {
        let fail = |reason: String| AuditError {
            index,
            round: m.round,
            player: m.player.to_string(),
            reason,
        };
        let expected = if index == 0 {
            Player::Bob
        } else if t.moves[index - 1].player == Player::Bob {
            Player::Alice
        } else {
            Player::Bob
        };
        if m.player != expected {
            return Err(fail("out of turn".into()));
        }
        if m.verdict != Verdict::Legal {
            if index + 1 != t.moves.len() {
                return Err(fail("play continued after a forfeit".into()));
            }
            if let (Verdict::Illegal(_), Some(ball), Some(b)) = (&m.verdict, &m.ball, bob) {
                if legal(space, params, m.player, ball, b, alice).is_ok() {
                    return Err(fail("legal move marked illegal".into()));
                }
            }
            return Ok(());
        }
        let ball = m.ball.as_ref().ok_or_else(|| fail("legal verdict without a ball".into()))?;
        match bob {
            None => {
                if !space.audit_on_playfield(&ball.center) {
                    return Err(fail("opening off the playfield".into()));
                }
            }
            Some(b) => legal(space, params, m.player, ball, b, alice).map_err(fail)?,
        }
        match m.player {
            Player::Bob => {
                bob = Some(ball);
                alice = None;
            }
            Player::Alice => alice = Some(ball),
        }
    }
    if t.alice_moves() > params.rounds {
        return Err(AuditError {
            index: t.moves.len(),
            round: params.rounds,
            player: "-".into(),
            reason: "too many rounds".into(),
        });
    }
    Ok(())
}

fn legal<S: Audit>(
    space: &S,
    params: &GameParams<S::Ratio>,
    player: Player,
    ball: &BallOf<S>,
    bob: &BallOf<S>,
    alice: Option<&BallOf<S>>,
) -> Result<(), String> {
    let rho = &bob.radius;
    let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
    match (&params.variant, player) {
        (Variant::Schmidt { alpha, .. }, Player::Alice) => {
            check(
                space.radius_cmp(&ball.radius, &space.scale(rho, alpha)) == Ordering::Equal,
                "radius schedule",
            )?;
            check(space.audit_on_playfield(&ball.center), "playfield")?;
            check(space.audit_schmidt_nested(ball, bob), "nesting")
        }
        (Variant::Schmidt { beta, .. }, Player::Bob) => {
            let a = alice.ok_or("Bob moved without an Alice ball")?;
            check(
                space.radius_cmp(&ball.radius, &space.scale(&a.radius, beta)) == Ordering::Equal,
                "radius schedule",
            )?;
            check(space.audit_on_playfield(&ball.center), "playfield")?;
            check(space.audit_schmidt_nested(ball, a), "nesting")
        }
        (Variant::Absolute { beta }, Player::Alice) => check(
            space.radius_cmp(&ball.radius, &space.scale(rho, beta)) != Ordering::Greater,
            "deletion too large",
        ),
        (Variant::Absolute { beta }, Player::Bob) => {
            check(
                space.radius_cmp(&ball.radius, &space.scale(rho, beta)) != Ordering::Less,
                "radius below beta*rho",
            )?;
            check(space.radius_cmp(&ball.radius, rho) != Ordering::Greater, "radius above rho")?;
            check(space.audit_on_playfield(&ball.center), "playfield")?;
            check(space.region_inside(&space.region(ball), &space.region(bob)), "containment")?;
            match alice {
                Some(a) => check(space.region_disjoint(&space.region(ball), &space.region(a)), "meets deletion"),
                None => Err("Bob moved without a deletion".into()),
            }
        }
    }
}
