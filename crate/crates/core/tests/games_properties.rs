use badapprox::games::{
    absolute_to_schmidt, audit, product_strategy, project_transcript, referee, GameParams, Player, RandomBob, Reply, ReplyOf,
    Strategy as GameStrategy, TranscriptOf,
};
use badapprox::metric::{diffuse_bound_from_perfectness, Ball, BallSpace, CantorSet, LineBall, LineSet, PairBall, ProductSpace};
use badapprox::rational::{from_int, from_ratio};
use badapprox::BigRational;
use num::Signed;
use proptest::prelude::*;

fn opening() -> impl Strategy<Value = LineBall> {
    (1i64..=9, 2i64..=40).prop_map(|(c, r)| {
        let r = from_ratio(1, r);
        // keep the ball inside [0, 1]
        let c = (from_ratio(c, 10)).max(r.clone()).min(from_int(1) - &r);
        Ball::new(c, r)
    })
}

/// Absolute-game Alice deleting next to Bob's center at a seeded offset
/// `kρ/4`, the obstacle positions diffuseness is certified against.
struct Crowding {
    seed: u64,
}

impl GameStrategy<LineSet> for Crowding {
    fn name(&self) -> String {
        "crowding".into()
    }

    fn next_move(&self, space: &LineSet, params: &GameParams<BigRational>, t: &TranscriptOf<LineSet>) -> Option<ReplyOf<LineSet>> {
        let b = t.last_bob()?;
        let beta = params.variant.beta();
        let k = ((self.seed.wrapping_mul(2654435761) >> (t.moves.len() % 32)) % 9) as i64 - 4;
        let _ = space;
        Some(Reply::plain(Ball::new(&b.center + &b.radius * from_ratio(k, 4), &b.radius * beta)))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn outcome_lies_in_every_bob_ball(open in opening(), seed in any::<u64>(), schmidt in any::<bool>(), b in 1i64..=9) {
        let e = LineSet::unit_window();
        let params = if schmidt {
            GameParams::schmidt(from_ratio(b, 10), from_ratio(10 - b, 10), 12)
        } else {
            GameParams::absolute(from_ratio(b, 30), 12)
        };
        let t = referee(&e, &params, &RandomBob::alice::<LineBall>(seed), &RandomBob::bob(open, seed)).unwrap();
        audit(&e, &params, &t).unwrap();
        let x = &t.outcome().unwrap().center;
        for ball in t.legal_balls(Player::Bob) {
            prop_assert!((x - &ball.center).abs() <= ball.radius);
        }
    }

    #[test]
    fn translated_schmidt_play_avoids_every_deletion(open in opening(), seed in any::<u64>(), b in 1i64..=9) {
        let e = LineSet::unit_window();
        let beta = from_ratio(b, 30);
        let params = GameParams::schmidt(beta.clone(), beta.clone(), 10);
        let alice = absolute_to_schmidt(RandomBob::alice::<LineBall>(seed), beta);
        let t = referee(&e, &params, &alice, &RandomBob::bob(open, seed)).unwrap();
        prop_assert!(t.forfeit().is_none());
        audit(&e, &params, &t).unwrap();
        let x = &t.outcome().unwrap().center;
        for m in t.moves.iter().filter(|m| m.player == Player::Alice) {
            let (ball, deletion) = (m.ball.as_ref().unwrap(), m.consulted.as_ref().unwrap());
            // the Schmidt reply misses the deletion, and so does the outcome
            prop_assert!((&ball.center - &deletion.center).abs() > &ball.radius + &deletion.radius);
            prop_assert!((x - &deletion.center).abs() > deletion.radius);
        }
    }

    #[test]
    fn product_projections_are_legal(seed in any::<u64>(), x in 1i64..=9, y in 1i64..=9, r in 10i64..=40, b in 1i64..=9) {
        let p = ProductSpace::new(LineSet::unit_window());
        let open: LineBall = Ball::new(from_ratio(x, 10), from_ratio(1, r));
        let open_y: LineBall = Ball::new(from_ratio(y, 10), from_ratio(1, r));
        let params = GameParams::schmidt(from_ratio(b, 10), from_ratio(10 - b, 10), 8);
        let alice = product_strategy(RandomBob::alice::<LineBall>(seed), RandomBob::alice::<LineBall>(seed ^ 1));
        let bob = product_strategy(RandomBob::bob(open, seed), RandomBob::bob(open_y, seed ^ 1));
        let t = referee(&p, &params, &alice, &bob).unwrap();
        prop_assert!(t.forfeit().is_none());
        audit(&p, &params, &t).unwrap();
        for k in 0..2 {
            let proj = project_transcript(&t, k);
            prop_assert!(audit(&p.factor, &params, &proj).is_ok());
        }
        // a random product play also stays legal in the joint space
        let random: RandomBob<PairBall> = RandomBob::bob(Ball::new((from_ratio(1, 2), from_ratio(1, 2)), from_ratio(1, 4)), seed);
        let t = referee(&p, &params, &RandomBob::alice::<PairBall>(seed), &random).unwrap();
        audit(&p, &params, &t).unwrap();
        for k in 0..2 {
            prop_assert!(audit(&p.factor, &params, &project_transcript(&t, k)).is_ok());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    /// Below the certified diffuseness bound Bob is never left without a
    /// legal move, whatever Alice deletes.
    #[test]
    fn bob_always_has_a_move_on_a_diffuse_set(seed in any::<u64>(), start in 0usize..256, frac in 1i64..=1000, random_alice in any::<bool>()) {
        let depth = 10;
        let c = CantorSet::middle_thirds(depth);
        // measured ν of the middle-thirds set is 2/3
        let beta = diffuse_bound_from_perfectness(&from_ratio(2, 3)).unwrap() * from_ratio(frac, 1001);
        let center = c.endpoints()[start * 8].clone();
        let set = LineSet::Cantor(c);
        // play while Bob's balls stay above the finest resolved scale
        let floor = from_ratio(1, 3i64.pow(depth - 1));
        let (mut rounds, mut rho) = (0, from_ratio(1, 3));
        while &rho * &beta >= floor {
            rho = &rho * &beta;
            rounds += 1;
        }
        prop_assume!(rounds > 0);
        let params = GameParams::absolute(beta, rounds);
        let bob = RandomBob::bob(Ball::new(center, from_ratio(1, 3)), seed);
        let t = if random_alice {
            referee(&set, &params, &RandomBob::alice::<LineBall>(seed), &bob)
        } else {
            referee(&set, &params, &Crowding { seed }, &bob)
        }
        .unwrap();
        prop_assert!(t.forfeit().is_none(), "{:?}", t.forfeit());
        prop_assert!(set.on_playfield(&t.outcome().unwrap().center));
        audit(&set, &params, &t).unwrap();
    }
}
