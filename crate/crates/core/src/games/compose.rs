//! Building strategies out of strategies.

use num::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use super::{GameParams, Move, Player, Reply, ReplyOf, Strategy, Transcript, TranscriptOf, Variant};
use crate::metric::{Ball, BallSpace, LineBall, LineSet, PairBall, ProductSpace};
use crate::rational;

/// Schmidt Alice (with `α = β`) driven by an absolute-game Alice: consult the
/// absolute strategy for a deletion `A_i`, then answer `B(x', βρ_i)` inside
/// `B_i` avoiding `A_i`.
pub struct AbsoluteToSchmidt<S: BallSpace, A> {
    pub inner: A,
    pub beta: S::Ratio,
}

pub fn absolute_to_schmidt<S: BallSpace, A: Strategy<S>>(inner: A, beta: S::Ratio) -> AbsoluteToSchmidt<S, A> {
    AbsoluteToSchmidt { inner, beta }
}

impl<S: BallSpace, A: Strategy<S>> AbsoluteToSchmidt<S, A> {
    /// The absolute-game view: Bob's Schmidt balls interleaved with the
    /// deletions consulted so far.
    fn view(&self, t: &TranscriptOf<S>) -> TranscriptOf<S> {
        let moves = t
            .moves
            .iter()
            .map(|m| match m.player {
                Player::Bob => m.clone(),
                Player::Alice => Move {
                    ball: m.consulted.clone(),
                    consulted: None,
                    note: None,
                    ..m.clone()
                },
            })
            .collect();
        Transcript { moves }
    }
}

impl<S: BallSpace, A: Strategy<S>> Strategy<S> for AbsoluteToSchmidt<S, A> {
    fn name(&self) -> String {
        format!("absolute-to-schmidt({})", self.inner.name())
    }

    fn metadata(&self) -> Value {
        json!({ "name": "absolute-to-schmidt", "inner": self.inner.metadata() })
    }

    fn next_move(&self, space: &S, params: &GameParams<S::Ratio>, t: &TranscriptOf<S>) -> Option<ReplyOf<S>> {
        let Variant::Schmidt { alpha, .. } = &params.variant else { return None };
        if t.to_move() != Player::Alice {
            return None;
        }
        let b = t.last_bob()?;
        let absolute = GameParams::absolute(self.beta.clone(), params.rounds);
        let deletion = self.inner.next_move(space, &absolute, &self.view(t))?.ball;
        let r = space.scale(&b.radius, alpha);
        // `None` here on a diffuse playfield is a diffuseness counterexample
        let ball = space.find_avoiding(b, &r, Some(&deletion)).filter(|w| space.schmidt_nested(w, b))?;
        Some(Reply {
            ball,
            consulted: Some(deletion),
            note: None,
        })
    }
}

/// Round-robin dispatcher: Alice's `i`-th deletion comes from strategy
/// `i mod k`, each consulted on the full transcript.
pub struct Intersection<S: BallSpace> {
    pub parts: Vec<Box<dyn Strategy<S>>>,
}

pub fn intersect_strategies<S: BallSpace>(parts: Vec<Box<dyn Strategy<S>>>) -> Intersection<S> {
    assert!(!parts.is_empty(), "need at least one strategy");
    Intersection { parts }
}

impl<S: BallSpace> Strategy<S> for Intersection<S> {
    fn name(&self) -> String {
        let names: Vec<String> = self.parts.iter().map(|p| p.name()).collect();
        format!("intersection[{}]", names.join(", "))
    }

    fn metadata(&self) -> Value {
        json!({ "name": "intersection", "parts": self.parts.iter().map(|p| p.metadata()).collect::<Vec<_>>() })
    }

    fn next_move(&self, space: &S, params: &GameParams<S::Ratio>, t: &TranscriptOf<S>) -> Option<ReplyOf<S>> {
        if t.to_move() != Player::Alice {
            return None;
        }
        let k = t.alice_moves() % self.parts.len();
        let mut reply = self.parts[k].next_move(space, params, t)?;
        if let Variant::Absolute { beta } = &params.variant {
            let cap = space.scale(&t.last_bob()?.radius, beta);
            if !space.radius_at_least(&cap, &reply.ball.radius) {
                reply.note = Some(format!("clamped oversized deletion from {}", self.parts[k].name()));
                reply.ball.radius = cap;
            }
        }
        Some(reply)
    }
}

/// Strategy on `E × E` with the max metric, playing the ball whose
/// projections are the two factor replies.
pub struct ProductStrategy<A, B> {
    pub first: A,
    pub second: B,
}

pub fn product_strategy<A: Strategy<LineSet>, B: Strategy<LineSet>>(first: A, second: B) -> ProductStrategy<A, B> {
    ProductStrategy { first, second }
}

/// Coordinate `k` of a product transcript.
pub fn project_transcript(t: &TranscriptOf<ProductSpace>, k: usize) -> TranscriptOf<LineSet> {
    let pick = |b: &PairBall| {
        let (x, y) = ProductSpace::project(b);
        if k == 0 {
            x
        } else {
            y
        }
    };
    Transcript {
        moves: t
            .moves
            .iter()
            .map(|m| Move {
                round: m.round,
                player: m.player,
                ball: m.ball.as_ref().map(pick),
                verdict: m.verdict.clone(),
                consulted: m.consulted.as_ref().map(pick),
                note: m.note.clone(),
            })
            .collect(),
    }
}

impl<A: Strategy<LineSet>, B: Strategy<LineSet>> Strategy<ProductSpace> for ProductStrategy<A, B> {
    fn name(&self) -> String {
        format!("product({}, {})", self.first.name(), self.second.name())
    }

    fn next_move(&self, space: &ProductSpace, params: &GameParams<BigRational>, t: &TranscriptOf<ProductSpace>) -> Option<ReplyOf<ProductSpace>> {
        let a = self.first.next_move(&space.factor, params, &project_transcript(t, 0))?;
        let b = self.second.next_move(&space.factor, params, &project_transcript(t, 1))?;
        let radius = a.ball.radius.clone().min(b.ball.radius.clone());
        let consulted = match (a.consulted, b.consulted) {
            (Some(x), Some(y)) => Some(Ball::new((x.center, y.center), x.radius.max(y.radius))),
            _ => None,
        };
        Some(Reply {
            ball: Ball::new((a.ball.center, b.ball.center), radius),
            consulted,
            note: None,
        })
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("no diffuse witness in B({center}, {radius}) avoiding B({avoid}, {radius_avoid}); diffuseness counterexample")]
pub struct DiagonalFailure {
    pub center: String,
    pub radius: String,
    pub avoid: String,
    pub radius_avoid: String,
}

/// `A₁ = B((x, z), βρ)` for `B₁ = B((x, y), ρ)`, with `z` a witness such that
/// `B(z, βρ) ⊆ B(y, ρ)` and `|z − x| > 2βρ`. Every `(x', y') ∈ A₁` then has
/// `|y' − x| ≥ |z − x| − |y' − z| > βρ ≥ |x' − x|`, so `A₁` misses the
/// diagonal.
pub fn diagonal_avoiding_first_move(factor: &LineSet, b1: &PairBall, beta: &BigRational) -> Result<PairBall, DiagonalFailure> {
    let (x, y) = &b1.center;
    let r = &b1.radius * beta;
    let within: LineBall = Ball::new(y.clone(), b1.radius.clone());
    let avoid: LineBall = Ball::new(x.clone(), r.clone());
    match factor.find_avoiding(&within, &r, Some(&avoid)) {
        Some(w) => Ok(Ball::new((x.clone(), w.center), r)),
        None => Err(DiagonalFailure {
            center: rational::format(y),
            radius: rational::format(&b1.radius),
            avoid: rational::format(x),
            radius_avoid: rational::format(&r),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{audit, referee, Concentric};
    use crate::rational::{from_int, from_ratio};

    #[test]
    fn diagonal_example() {
        let e = LineSet::unit_window();
        let b1 = Ball::new((from_ratio(1, 2), from_ratio(1, 2)), from_ratio(1, 10));
        let a1 = diagonal_avoiding_first_move(&e, &b1, &from_ratio(1, 10)).unwrap();
        assert_eq!(a1.center, (from_ratio(1, 2), from_ratio(11, 20)));
        assert_eq!(a1.radius, from_ratio(1, 100));
        let far = Ball::new((from_ratio(1, 10), from_ratio(9, 10)), from_ratio(1, 10));
        assert_eq!(
            diagonal_avoiding_first_move(&e, &far, &from_ratio(1, 10)).unwrap().center.1,
            from_ratio(9, 10)
        );
    }

    #[test]
    fn translated_reply_avoids_deletion() {
        let line = LineSet::Window {
            lo: from_int(-1),
            hi: from_int(1),
        };
        // an absolute Alice that always deletes B(1/2, 1/5)
        struct Fixed;
        impl Strategy<LineSet> for Fixed {
            fn name(&self) -> String {
                "fixed".into()
            }
            fn next_move(&self, _: &LineSet, _: &GameParams<BigRational>, _: &TranscriptOf<LineSet>) -> Option<ReplyOf<LineSet>> {
                Some(Reply::plain(Ball::new(from_ratio(1, 2), from_ratio(1, 5))))
            }
        }
        let alice = absolute_to_schmidt(Fixed, from_ratio(1, 5));
        let params = GameParams::schmidt(from_ratio(1, 5), from_ratio(1, 5), 1);
        let bob = Concentric::bob(Ball::new(from_int(0), from_int(1)));
        let t = referee(&line, &params, &alice, &bob).unwrap();
        audit(&line, &params, &t).unwrap();
        let reply = t.last_alice().unwrap();
        assert_eq!(reply.radius, from_ratio(1, 5));
        assert!(line.disjoint(reply, &Ball::new(from_ratio(1, 2), from_ratio(1, 5))));
    }

    #[test]
    fn product_of_concentric_stays_concentric() {
        let p = ProductSpace::new(LineSet::unit_window());
        let params = GameParams::schmidt(from_ratio(1, 2), from_ratio(1, 3), 5);
        let open: LineBall = Ball::new(from_ratio(1, 2), from_ratio(1, 4));
        let alice = product_strategy(Concentric::alice(), Concentric::alice());
        let bob = product_strategy(Concentric::bob(open.clone()), Concentric::bob(open));
        let t = referee(&p, &params, &alice, &bob).unwrap();
        assert!(t.forfeit().is_none());
        audit(&p, &params, &t).unwrap();
        assert_eq!(t.outcome().unwrap().center, (from_ratio(1, 2), from_ratio(1, 2)));
        for k in 0..2 {
            audit(&p.factor, &params, &project_transcript(&t, k)).unwrap();
        }
    }
}
