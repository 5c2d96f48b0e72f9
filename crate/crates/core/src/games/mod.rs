//! Referees for Schmidt's game and the absolute game.
//!
//! Bob opens with `B_1`. Each of the `rounds` rounds is one Alice move
//! followed by one Bob move, so a finished transcript holds `rounds` Alice
//! moves and `rounds + 1` Bob balls; the outcome is the last Bob ball.
//!
//! * Schmidt: Alice answers `B(x', αρ_i)` nested in `B_i`, Bob answers
//!   `B(x_{i+1}, βαρ_i)` nested in Alice's ball.
//! * Absolute: Alice deletes some `A_i` of radius at most `βρ_i`; Bob answers a
//!   ball of radius in `[βρ_i, ρ_i]` inside `B_i` and disjoint from `A_i`.

mod audit;
mod builtin;
mod compose;

pub use audit::{audit, Audit, AuditError};
pub use builtin::{Concentric, CuspSeeking, FarDeletion, GreedyLeft, RandomBob, RandomCenters};
pub use compose::{absolute_to_schmidt, diagonal_avoiding_first_move, intersect_strategies, product_strategy, project_transcript};
pub use compose::{AbsoluteToSchmidt, DiagonalFailure, Intersection, ProductStrategy};

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::metric::{Ball, BallSpace};

#[derive(Clone, Debug, PartialEq)]
pub enum Variant<Q> {
    Schmidt { alpha: Q, beta: Q },
    Absolute { beta: Q },
}

impl<Q> Variant<Q> {
    pub fn beta(&self) -> &Q {
        match self {
            Variant::Schmidt { beta, .. } | Variant::Absolute { beta } => beta,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Schmidt { .. } => "schmidt",
            Variant::Absolute { .. } => "absolute",
        }
    }
}

/// `Q` is the ratio type of the space the game is played on.
#[derive(Clone, Debug, PartialEq)]
pub struct GameParams<Q> {
    pub variant: Variant<Q>,
    pub rounds: usize,
}

impl<Q> GameParams<Q> {
    pub fn schmidt(alpha: Q, beta: Q, rounds: usize) -> Self {
        GameParams {
            variant: Variant::Schmidt { alpha, beta },
            rounds,
        }
    }

    pub fn absolute(beta: Q, rounds: usize) -> Self {
        GameParams {
            variant: Variant::Absolute { beta },
            rounds,
        }
    }
}

/// Checks `0 < α, β < 1`, and `β < 1/3` for the absolute game.
pub fn validate_params<S: BallSpace>(space: &S, params: &GameParams<S::Ratio>) -> Result<(), GameError> {
    let unit = |name: &str, q: &S::Ratio| {
        let v = space.ratio_value(q);
        if v > 0.0 && v < 1.0 {
            Ok(())
        } else {
            Err(GameError::Params(format!("{name} = {v} must lie in (0, 1)")))
        }
    };
    match &params.variant {
        Variant::Schmidt { alpha, beta } => {
            unit("alpha", alpha)?;
            unit("beta", beta)
        }
        Variant::Absolute { beta } => {
            unit("beta", beta)?;
            let v = space.ratio_value(beta);
            if v < 1.0 / 3.0 {
                Ok(())
            } else {
                Err(GameError::Params(format!("absolute game needs beta < 1/3, got {v}")))
            }
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GameError {
    #[error("invalid game parameters: {0}")]
    Params(String),
    #[error("illegal opening: {0}")]
    Opening(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "alice",
            Player::Bob => "bob",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Legal,
    /// The move was rejected; the player forfeits.
    Illegal(String),
    /// The strategy produced no move.
    Forfeit(String),
}

impl Verdict {
    pub fn label(&self) -> String {
        match self {
            Verdict::Legal => "legal".into(),
            Verdict::Illegal(why) => format!("illegal: {why}"),
            Verdict::Forfeit(why) => format!("forfeit: {why}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Move<P, R> {
    pub round: usize,
    pub player: Player,
    pub ball: Option<Ball<P, R>>,
    pub verdict: Verdict,
    /// A ball the strategy consulted, such as the deletion behind a
    /// translated Schmidt move.
    pub consulted: Option<Ball<P, R>>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transcript<P, R> {
    pub moves: Vec<Move<P, R>>,
}

pub type TranscriptOf<S> = Transcript<<S as BallSpace>::Point, <S as BallSpace>::Radius>;
pub type BallOf<S> = Ball<<S as BallSpace>::Point, <S as BallSpace>::Radius>;

impl<P: Clone, R: Clone> Transcript<P, R> {
    pub fn new() -> Self {
        Transcript { moves: Vec::new() }
    }

    pub fn legal_balls(&self, player: Player) -> impl Iterator<Item = &Ball<P, R>> {
        self.moves
            .iter()
            .filter(move |m| m.player == player && m.verdict == Verdict::Legal)
            .filter_map(|m| m.ball.as_ref())
    }

    pub fn last_bob(&self) -> Option<&Ball<P, R>> {
        self.legal_balls(Player::Bob).last()
    }

    pub fn last_alice(&self) -> Option<&Ball<P, R>> {
        self.legal_balls(Player::Alice).last()
    }

    /// Whose turn it is: Bob opens and answers every Alice move.
    pub fn to_move(&self) -> Player {
        match self.moves.last() {
            Some(m) if m.player == Player::Bob => Player::Alice,
            _ => Player::Bob,
        }
    }

    /// Number of Alice moves so far; the round of the next Alice move is
    /// one more.
    pub fn alice_moves(&self) -> usize {
        self.moves.iter().filter(|m| m.player == Player::Alice).count()
    }

    /// The last Bob ball: center is the outcome point.
    pub fn outcome(&self) -> Option<&Ball<P, R>> {
        self.last_bob()
    }

    pub fn forfeit(&self) -> Option<(Player, &Verdict)> {
        self.moves.iter().find(|m| m.verdict != Verdict::Legal).map(|m| (m.player, &m.verdict))
    }
}

impl<P: Clone, R: Clone> Default for Transcript<P, R> {
    fn default() -> Self {
        Self::new()
    }
}

/// One record per move: `{round, player, center, radius, verdict}`.
pub fn transcript_records<S: BallSpace>(space: &S, t: &TranscriptOf<S>) -> Vec<Value> {
    t.moves
        .iter()
        .map(|m| {
            let mut rec = json!({
                "round": m.round,
                "player": m.player,
                "center": m.ball.as_ref().map(|b| space.point_label(&b.center)),
                "radius": m.ball.as_ref().map(|b| space.radius_label(&b.radius)),
                "verdict": m.verdict.label(),
            });
            if let Some(note) = &m.note {
                rec["note"] = json!(note);
            }
            rec
        })
        .collect()
}

/// The strategy's reply: a ball plus optional bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct Reply<P, R> {
    pub ball: Ball<P, R>,
    pub consulted: Option<Ball<P, R>>,
    pub note: Option<String>,
}

impl<P, R> Reply<P, R> {
    pub fn plain(ball: Ball<P, R>) -> Self {
        Reply {
            ball,
            consulted: None,
            note: None,
        }
    }
}

pub type ReplyOf<S> = Reply<<S as BallSpace>::Point, <S as BallSpace>::Radius>;

/// A deterministic function of the transcript so far. Strategies must be
/// consultable on any legal transcript, which is what lets them be composed.
pub trait Strategy<S: BallSpace>: Send + Sync {
    fn name(&self) -> String;

    fn metadata(&self) -> Value {
        json!({ "name": self.name() })
    }

    /// `None` means no move; the referee records a forfeit.
    fn next_move(&self, space: &S, params: &GameParams<S::Ratio>, transcript: &TranscriptOf<S>) -> Option<ReplyOf<S>>;
}

impl<S: BallSpace, T: Strategy<S> + ?Sized> Strategy<S> for Box<T> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn metadata(&self) -> Value {
        (**self).metadata()
    }

    fn next_move(&self, space: &S, params: &GameParams<S::Ratio>, transcript: &TranscriptOf<S>) -> Option<ReplyOf<S>> {
        (**self).next_move(space, params, transcript)
    }
}

/// Why a proposed move is illegal, or `None` if it is legal. `previous` is
/// the last legal ball of the other player (Bob's `B_i` for Alice, Alice's
/// move for Bob) and `bob_ball` is `B_i`.
pub fn judge<S: BallSpace>(
    space: &S,
    variant: &Variant<S::Ratio>,
    player: Player,
    proposed: &BallOf<S>,
    bob_ball: &BallOf<S>,
    alice_ball: Option<&BallOf<S>>,
) -> Option<String> {
    let rho = &bob_ball.radius;
    match (variant, player) {
        (Variant::Schmidt { alpha, .. }, Player::Alice) => {
            let want = space.scale(rho, alpha);
            if proposed.radius != want {
                return Some(format!(
                    "radius {} != alpha*rho = {}",
                    space.radius_label(&proposed.radius),
                    space.radius_label(&want)
                ));
            }
            if !space.on_playfield(&proposed.center) {
                return Some("center off the playfield".into());
            }
            if !space.schmidt_nested(proposed, bob_ball) {
                return Some("not nested in Bob's ball".into());
            }
            None
        }
        (Variant::Schmidt { beta, .. }, Player::Bob) => {
            let outer = alice_ball.expect("Bob answers an Alice ball");
            let want = space.scale(&outer.radius, beta);
            if proposed.radius != want {
                return Some(format!(
                    "radius {} != beta*rho' = {}",
                    space.radius_label(&proposed.radius),
                    space.radius_label(&want)
                ));
            }
            if !space.on_playfield(&proposed.center) {
                return Some("center off the playfield".into());
            }
            if !space.schmidt_nested(proposed, outer) {
                return Some("not nested in Alice's ball".into());
            }
            None
        }
        (Variant::Absolute { beta }, Player::Alice) => {
            let cap = space.scale(rho, beta);
            if !space.radius_at_least(&cap, &proposed.radius) {
                return Some(format!(
                    "deletion radius {} exceeds beta*rho = {}",
                    space.radius_label(&proposed.radius),
                    space.radius_label(&cap)
                ));
            }
            None
        }
        (Variant::Absolute { beta }, Player::Bob) => {
            let floor = space.scale(rho, beta);
            if !space.radius_at_least(&proposed.radius, &floor) {
                return Some(format!(
                    "radius {} below beta*rho = {}",
                    space.radius_label(&proposed.radius),
                    space.radius_label(&floor)
                ));
            }
            if !space.radius_at_least(rho, &proposed.radius) {
                return Some("radius exceeds rho".into());
            }
            if !space.on_playfield(&proposed.center) {
                return Some("center off the playfield".into());
            }
            if !space.contained(proposed, bob_ball) {
                return Some("not contained in B_i".into());
            }
            if let Some(a) = alice_ball {
                if !space.disjoint(proposed, a) {
                    return Some("meets the deletion A_i".into());
                }
            }
            None
        }
    }
}

/// Plays `params.rounds` rounds. Illegal or missing moves end the game with
/// a forfeit recorded in the transcript; an illegal opening or bad
/// parameters are errors.
pub fn referee<S: BallSpace>(
    space: &S,
    params: &GameParams<S::Ratio>,
    alice: &dyn Strategy<S>,
    bob: &dyn Strategy<S>,
) -> Result<TranscriptOf<S>, GameError> {
    validate_params(space, params)?;
    let mut t = Transcript::new();
    let opening = bob
        .next_move(space, params, &t)
        .ok_or_else(|| GameError::Opening("Bob produced no opening".into()))?;
    if !space.on_playfield(&opening.ball.center) {
        return Err(GameError::Opening(format!(
            "center {} off the playfield",
            space.point_label(&opening.ball.center)
        )));
    }
    if space.radius_value(&opening.ball.radius) <= 0.0 {
        return Err(GameError::Opening("radius must be positive".into()));
    }
    t.moves.push(Move {
        round: 0,
        player: Player::Bob,
        ball: Some(opening.ball),
        verdict: Verdict::Legal,
        consulted: None,
        note: opening.note,
    });
    for round in 1..=params.rounds {
        for player in [Player::Alice, Player::Bob] {
            let strategy = if player == Player::Alice { alice } else { bob };
            let reply = strategy.next_move(space, params, &t);
            let bob_ball = t.last_bob().expect("opening present").clone();
            let alice_ball = if player == Player::Bob { t.last_alice().cloned() } else { None };
            let (ball, verdict, consulted, note) = match reply {
                None => (None, Verdict::Forfeit(format!("{} has no move", strategy.name())), None, None),
                Some(r) => {
                    let verdict = match judge(space, &params.variant, player, &r.ball, &bob_ball, alice_ball.as_ref()) {
                        None => Verdict::Legal,
                        Some(why) => Verdict::Illegal(why),
                    };
                    (Some(r.ball), verdict, r.consulted, r.note)
                }
            };
            let stop = verdict != Verdict::Legal;
            t.moves.push(Move {
                round,
                player,
                ball,
                verdict,
                consulted,
                note,
            });
            if stop {
                return Ok(t);
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::LineSet;
    use crate::rational::{format, from_ratio};

    #[test]
    fn schmidt_concentric_halves() {
        let e = LineSet::unit_window();
        let params = GameParams::schmidt(from_ratio(1, 2), from_ratio(1, 2), 3);
        let bob = Concentric::bob(Ball::new(from_ratio(1, 2), from_ratio(1, 2)));
        let t = referee(&e, &params, &Concentric::alice(), &bob).unwrap();
        let radii: Vec<String> = t.moves.iter().map(|m| format(&m.ball.as_ref().unwrap().radius)).collect();
        assert_eq!(radii, ["1/2", "1/4", "1/8", "1/16", "1/32", "1/64", "1/128"]);
        assert_eq!(t.outcome().unwrap().center, from_ratio(1, 2));
        assert!(t.forfeit().is_none());
    }

    #[test]
    fn absolute_rejects_large_beta() {
        let e = LineSet::unit_window();
        let params = GameParams::absolute(from_ratio(2, 5), 3);
        let bob = Concentric::bob(Ball::new(from_ratio(1, 2), from_ratio(1, 2)));
        assert!(matches!(referee(&e, &params, &Concentric::alice(), &bob), Err(GameError::Params(_))));
    }

    #[test]
    fn greedy_left_avoids_central_deletions() {
        let e = LineSet::unit_window();
        let params = GameParams::absolute(from_ratio(3, 10), 12);
        let bob = GreedyLeft::new(Ball::new(from_ratio(1, 2), from_ratio(1, 2)));
        let t = referee(&e, &params, &Concentric::alice(), &bob).unwrap();
        assert!(t.forfeit().is_none(), "{:?}", t.forfeit());
        audit(&e, &params, &t).unwrap();
    }

    #[test]
    fn records_have_the_documented_fields() {
        let e = LineSet::unit_window();
        let params = GameParams::absolute(from_ratio(1, 10), 1);
        let bob = Concentric::bob(Ball::new(from_ratio(1, 2), from_ratio(1, 4)));
        let t = referee(&e, &params, &Concentric::alice(), &bob).unwrap();
        let recs = transcript_records(&e, &t);
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0]["player"], "bob");
        assert_eq!(recs[1]["center"], "1/2");
        assert_eq!(recs[1]["radius"], "1/40");
        assert_eq!(recs[2]["verdict"], "legal");
    }
}
