//! Ready-made strategies for tests, experiments and the CLI.

use num::{BigRational, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{BallOf, GameParams, Player, Reply, ReplyOf, Strategy, TranscriptOf, Variant};
use crate::metric::{Ball, BallSpace, LineBall, LineSet, ProductSpace};
use crate::rational::{self, from_int, from_ratio};
use crate::tree::{TreeRadius, TreeSpace};

/// Grid resolution for random centers on continua.
const GRID: i64 = 64;
const RETRIES: usize = 64;

fn opening_or_reply<S: BallSpace>(opening: &Option<BallOf<S>>, t: &TranscriptOf<S>) -> Option<Option<ReplyOf<S>>> {
    if t.moves.is_empty() {
        return Some(opening.clone().map(Reply::plain));
    }
    None
}

/// Plays the center of the current ball: Alice shrinks or deletes at the
/// center, Bob stays concentric when legal and otherwise takes the first
/// ball found by [`BallSpace::find_avoiding`].
#[derive(Clone, Debug)]
pub struct Concentric<B> {
    opening: Option<B>,
}

impl Concentric<()> {
    pub fn alice<B>() -> Concentric<B> {
        Concentric { opening: None }
    }

    pub fn bob<B>(opening: B) -> Concentric<B> {
        Concentric { opening: Some(opening) }
    }
}

impl<S: BallSpace> Strategy<S> for Concentric<BallOf<S>> {
    fn name(&self) -> String {
        "concentric".into()
    }

    fn next_move(&self, space: &S, params: &GameParams<S::Ratio>, t: &TranscriptOf<S>) -> Option<ReplyOf<S>> {
        if let Some(open) = opening_or_reply::<S>(&self.opening, t) {
            return open;
        }
        let b = t.last_bob()?;
        let ball = match (t.to_move(), &params.variant) {
            (Player::Alice, Variant::Schmidt { alpha, .. }) => Ball::new(b.center.clone(), space.scale(&b.radius, alpha)),
            (Player::Alice, Variant::Absolute { beta }) => Ball::new(b.center.clone(), space.scale(&b.radius, beta)),
            (Player::Bob, Variant::Schmidt { beta, .. }) => {
                let a = t.last_alice()?;
                Ball::new(a.center.clone(), space.scale(&a.radius, beta))
            }
            (Player::Bob, Variant::Absolute { beta }) => space.find_avoiding(b, &space.scale(&b.radius, beta), t.last_alice())?,
        };
        Some(Reply::plain(ball))
    }
}

/// Absolute-game Alice that always deletes a ball disjoint from `B_i`, so
/// her deletions never constrain Bob.
#[derive(Clone, Debug, Default)]
pub struct FarDeletion;

impl Strategy<LineSet> for FarDeletion {
    fn name(&self) -> String {
        "far-deletion".into()
    }

    fn next_move(&self, space: &LineSet, params: &GameParams<BigRational>, t: &TranscriptOf<LineSet>) -> Option<ReplyOf<LineSet>> {
        let b = t.last_bob()?;
        let r = space.scale(&b.radius, params.variant.beta());
        Some(Reply::plain(Ball::new(&b.center + &b.radius * from_int(2), r)))
    }
}

fn legal_absolute_bob<S: BallSpace>(space: &S, within: &BallOf<S>, deletion: Option<&BallOf<S>>, c: &S::Point, r: &S::Radius) -> bool {
    let ball = Ball::new(c.clone(), r.clone());
    space.on_playfield(c) && space.contained(&ball, within) && deletion.is_none_or(|a| space.disjoint(&ball, a))
}

/// Bob on a line set, always taking the leftmost legal ball of minimal
/// radius.
#[derive(Clone, Debug)]
pub struct GreedyLeft {
    opening: LineBall,
}

impl GreedyLeft {
    pub fn new(opening: LineBall) -> Self {
        GreedyLeft { opening }
    }
}

impl Strategy<LineSet> for GreedyLeft {
    fn name(&self) -> String {
        "greedy-left".into()
    }

    fn next_move(&self, space: &LineSet, params: &GameParams<BigRational>, t: &TranscriptOf<LineSet>) -> Option<ReplyOf<LineSet>> {
        if t.moves.is_empty() {
            return Some(Reply::plain(self.opening.clone()));
        }
        let b = t.last_bob()?;
        let a = t.last_alice()?;
        let (within, r) = match &params.variant {
            Variant::Schmidt { beta, .. } => (a, a.radius.clone() * beta),
            Variant::Absolute { beta } => (b, b.radius.clone() * beta),
        };
        let slack = &within.radius - &r;
        let lo = &within.center - &slack;
        let hi = &within.center + &slack;
        let mut hints = vec![lo.clone()];
        if let Variant::Absolute { .. } = params.variant {
            let eps = &r / from_int(1024);
            hints.push(&a.center - &a.radius - &r - &eps);
            hints.push(&a.center + &a.radius + &r + &eps);
        }
        let deletion = matches!(params.variant, Variant::Absolute { .. }).then_some(a);
        let best = space
            .candidates_in(&lo, &hi, &hints)
            .into_iter()
            .filter(|c| match &params.variant {
                Variant::Schmidt { .. } => space.schmidt_nested(&Ball::new(c.clone(), r.clone()), within),
                Variant::Absolute { .. } => legal_absolute_bob(space, within, deletion, c, &r),
            })
            .min()?;
        Some(Reply::plain(Ball::new(best, r)))
    }
}

/// Bob on a line set heading for `target` (typically a rational cusp): the
/// minimal-radius legal ball whose center is closest to the target, which
/// puts him just outside Alice's deletion when she blocks the way.
#[derive(Clone, Debug)]
pub struct CuspSeeking {
    pub target: BigRational,
    opening: LineBall,
}

impl CuspSeeking {
    pub fn new(target: BigRational, opening: LineBall) -> Self {
        CuspSeeking { target, opening }
    }
}

impl Strategy<LineSet> for CuspSeeking {
    fn name(&self) -> String {
        format!("cusp:{}", rational::format(&self.target))
    }

    fn metadata(&self) -> Value {
        json!({ "name": "cusp", "target": rational::format(&self.target) })
    }

    fn next_move(&self, space: &LineSet, params: &GameParams<BigRational>, t: &TranscriptOf<LineSet>) -> Option<ReplyOf<LineSet>> {
        if t.moves.is_empty() {
            return Some(Reply::plain(self.opening.clone()));
        }
        let b = t.last_bob()?;
        let a = t.last_alice()?;
        let (within, r, deletion) = match &params.variant {
            Variant::Schmidt { beta, .. } => (a, &a.radius * beta, None),
            Variant::Absolute { beta } => (b, &b.radius * beta, Some(a)),
        };
        let slack = &within.radius - &r;
        let lo = &within.center - &slack;
        let hi = &within.center + &slack;
        let clamp = self.target.clone().max(lo.clone()).min(hi.clone());
        let mut hints = vec![clamp, lo.clone(), hi.clone(), within.center.clone()];
        if let Some(a) = deletion {
            let eps = &r / from_int(1024);
            hints.push(&a.center - &a.radius - &r - &eps);
            hints.push(&a.center + &a.radius + &r + &eps);
        }
        let best = space
            .candidates_in(&lo, &hi, &hints)
            .into_iter()
            .filter(|c| match deletion {
                None => space.schmidt_nested(&Ball::new(c.clone(), r.clone()), within),
                Some(_) => legal_absolute_bob(space, within, deletion, c, &r),
            })
            .min_by(|x, y| (x - &self.target).abs().cmp(&(y - &self.target).abs()).then(x.cmp(y)))?;
        Some(Reply::plain(Ball::new(best, r)))
    }
}

/// Spaces in which a random playfield center can be drawn.
pub trait RandomCenters: BallSpace {
    /// A playfield point `c` with `B(c, radius)` inside `within`, if one is
    /// easy to draw.
    fn random_center(&self, within: &BallOf<Self>, radius: &Self::Radius, rng: &mut ChaCha8Rng) -> Option<Self::Point>;
    /// A radius no larger than `cap`.
    fn random_radius_at_most(&self, cap: &Self::Radius, rng: &mut ChaCha8Rng) -> Self::Radius;
}

fn line_center(set: &LineSet, x: &BigRational, slack: &BigRational, rng: &mut ChaCha8Rng) -> Option<BigRational> {
    if slack.is_negative() {
        return None;
    }
    let lo = x - slack;
    let hi = x + slack;
    match set.discrete_points_in(&lo, &hi) {
        Some(points) if points.is_empty() => None,
        Some(points) => Some(points[rng.gen_range(0..points.len())].clone()),
        None => {
            let k = rng.gen_range(0..=GRID);
            Some(&lo + (&hi - &lo) * from_ratio(k, GRID))
        }
    }
}

impl RandomCenters for LineSet {
    fn random_center(&self, within: &LineBall, radius: &BigRational, rng: &mut ChaCha8Rng) -> Option<BigRational> {
        line_center(self, &within.center, &(&within.radius - radius), rng)
    }

    fn random_radius_at_most(&self, cap: &BigRational, rng: &mut ChaCha8Rng) -> BigRational {
        cap * from_ratio(rng.gen_range(1..=GRID), GRID)
    }
}

impl RandomCenters for ProductSpace {
    fn random_center(&self, within: &BallOf<Self>, radius: &BigRational, rng: &mut ChaCha8Rng) -> Option<(BigRational, BigRational)> {
        let slack = &within.radius - radius;
        Some((
            line_center(&self.factor, &within.center.0, &slack, rng)?,
            line_center(&self.factor, &within.center.1, &slack, rng)?,
        ))
    }

    fn random_radius_at_most(&self, cap: &BigRational, rng: &mut ChaCha8Rng) -> BigRational {
        cap * from_ratio(rng.gen_range(1..=GRID), GRID)
    }
}

impl RandomCenters for TreeSpace {
    fn random_center(&self, within: &BallOf<Self>, radius: &TreeRadius, rng: &mut ChaCha8Rng) -> Option<Vec<u8>> {
        if radius.0 < within.radius.0 {
            return None;
        }
        let keep = (within.radius.0 as usize).min(within.center.len());
        let mut c = within.center.clone();
        for d in c.iter_mut().skip(keep) {
            *d = rng.gen_range(0..self.branching);
        }
        Some(c)
    }

    fn random_radius_at_most(&self, cap: &TreeRadius, rng: &mut ChaCha8Rng) -> TreeRadius {
        TreeRadius(cap.0 + rng.gen_range(0..=2))
    }
}

/// Seeded random play for either side. The generator is re-derived from
/// `(seed, move index)` on every call, so the strategy is a pure function of
/// the transcript.
#[derive(Clone, Debug)]
pub struct RandomBob<B> {
    opening: Option<B>,
    pub seed: u64,
}

impl RandomBob<()> {
    pub fn bob<B>(opening: B, seed: u64) -> RandomBob<B> {
        RandomBob {
            opening: Some(opening),
            seed,
        }
    }

    /// The same generator playing Alice: random centers, and random
    /// deletion radii up to the cap in the absolute game.
    pub fn alice<B>(seed: u64) -> RandomBob<B> {
        RandomBob { opening: None, seed }
    }
}

impl<B> RandomBob<B> {
    fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

impl<S: RandomCenters> Strategy<S> for RandomBob<BallOf<S>> {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn metadata(&self) -> Value {
        json!({ "name": "random", "seed": self.seed })
    }

    fn next_move(&self, space: &S, params: &GameParams<S::Ratio>, t: &TranscriptOf<S>) -> Option<ReplyOf<S>> {
        if let Some(open) = opening_or_reply::<S>(&self.opening, t) {
            return open;
        }
        let mut rng = self.rng(t.moves.len());
        let b = t.last_bob()?;
        let ball = match (t.to_move(), &params.variant) {
            (Player::Alice, Variant::Schmidt { alpha, .. }) => {
                let r = space.scale(&b.radius, alpha);
                let c = (0..RETRIES)
                    .filter_map(|_| space.random_center(b, &r, &mut rng))
                    .find(|c| space.schmidt_nested(&Ball::new(c.clone(), r.clone()), b))
                    .unwrap_or_else(|| b.center.clone());
                Ball::new(c, r)
            }
            (Player::Alice, Variant::Absolute { beta }) => {
                let r = space.random_radius_at_most(&space.scale(&b.radius, beta), &mut rng);
                let c = space.random_center(b, &r, &mut rng).unwrap_or_else(|| b.center.clone());
                Ball::new(c, r)
            }
            (Player::Bob, Variant::Schmidt { beta, .. }) => {
                let a = t.last_alice()?;
                let r = space.scale(&a.radius, beta);
                let c = (0..RETRIES)
                    .filter_map(|_| space.random_center(a, &r, &mut rng))
                    .find(|c| space.schmidt_nested(&Ball::new(c.clone(), r.clone()), a))
                    .unwrap_or_else(|| a.center.clone());
                Ball::new(c, r)
            }
            (Player::Bob, Variant::Absolute { beta }) => {
                let a = t.last_alice();
                let r = space.scale(&b.radius, beta);
                let found = (0..RETRIES)
                    .filter_map(|_| space.random_center(b, &r, &mut rng))
                    .find(|c| legal_absolute_bob(space, b, a, c, &r));
                match found {
                    Some(c) => Ball::new(c, r),
                    None => space.find_avoiding(b, &r, a)?,
                }
            }
        };
        Some(Reply::plain(ball))
    }
}
