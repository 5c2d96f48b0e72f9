use badapprox::analysis::{
    ba_digit_set_oracle, box_counts, box_dimension, cantor_samples, digit_cylinders, dimension_of_ba_digits, power_law_check, CantorMeasure,
    CantorOracle, MeasureOracle, SetOracle,
};
use badapprox::metric::{certify_diffuse, CantorSet, LineSet};
use badapprox::par::Execution;
use badapprox::rational::{from_ratio, to_f64};
use badapprox::BigRational;
use num::BigInt;
use proptest::prelude::*;

fn triadic(k: u32) -> BigRational {
    from_ratio(1, 3i64.pow(k))
}

fn dyadic(j: u64, d: u32) -> (BigRational, BigRational) {
    let den = BigInt::from(1u64 << d);
    (BigRational::new(BigInt::from(j), den.clone()), BigRational::new(BigInt::from(j + 1), den))
}

#[test]
fn box_counts_never_decrease_with_depth() {
    for n in 2..=4 {
        let oracle = ba_digit_set_oracle(n, 40).unwrap();
        let counts = box_counts(&oracle, 2, 10, Execution::Sequential).unwrap();
        assert!(counts.windows(2).all(|w| w[0] <= w[1] && w[1] <= 2 * w[0]), "E_{n}: {counts:?}");
    }
    let counts = box_counts(&CantorOracle, 2, 12, Execution::Sequential).unwrap();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
}

#[test]
fn digit_sets_grow_with_the_bound() {
    let depths: Vec<u32> = (2..=9).collect();
    let mut prev: Option<(Vec<u64>, f64)> = None;
    for n in 2..=5 {
        let est = dimension_of_ba_digits(n, &depths, Execution::Sequential).unwrap();
        assert!((0.0..=1.0).contains(&est.slope), "E_{n}: {}", est.slope);
        if let Some((counts, slope)) = &prev {
            assert!(counts.iter().zip(&est.counts).all(|(a, b)| a <= b), "E_{n}");
            assert!(est.slope >= *slope - 1e-9, "E_{n}: {} < {slope}", est.slope);
        }
        prev = Some((est.counts.clone(), est.slope));
    }
}

#[test]
fn digit_cylinders_tile_their_hull_in_order() {
    for n in 1..=4 {
        for len in 1..=5 {
            let cyl = digit_cylinders(n, len);
            assert_eq!(cyl.len(), (n as usize).pow(len));
            for (a, b) in &cyl {
                assert!(a < b || (n == 1 && a <= b));
            }
            // sorted, and consecutive cylinders do not overlap
            for w in cyl.windows(2) {
                assert!(w[0].1 <= w[1].0, "n {n} len {len}");
            }
        }
    }
    // with every digit allowed up to n, the cylinders of consecutive first
    // digits meet at 1/(a+1)
    let cyl = digit_cylinders(3, 1);
    assert_eq!(
        cyl,
        vec![
            (from_ratio(1, 4), from_ratio(1, 3)),
            (from_ratio(1, 3), from_ratio(1, 2)),
            (from_ratio(1, 2), from_ratio(1, 1))
        ]
    );
}

#[test]
fn cantor_fits_agree_on_every_depth_subset() {
    let target = 2f64.ln() / 3f64.ln();
    // every subset of at least three depths from 2..=9
    for mask in 0u32..256 {
        let depths: Vec<u32> = (0..8).filter(|k| mask >> k & 1 == 1).map(|k| k + 2).collect();
        if depths.len() < 3 {
            continue;
        }
        let est = box_dimension(&CantorOracle, 3, &depths, Execution::Sequential).unwrap();
        assert!((est.slope - target).abs() < 1e-12, "{depths:?}: {}", est.slope);
    }
}

#[test]
fn cantor_measure_matches_cylinder_counting() {
    let m = 12;
    let cyl = CantorSet::middle_thirds(m);
    let ends = cyl.endpoints();
    let weight = 0.5f64.powi(m as i32);
    for x in cantor_samples(5) {
        for k in 1..=8 {
            let r = triadic(k);
            let (lo, hi) = (&x - &r, &x + &r);
            let inside = ends.chunks(2).filter(|c| lo <= c[0] && c[1] <= hi).count() as f64 * weight;
            let mu = CantorMeasure.ball(&x, &r);
            assert!((mu - inside).abs() <= 2.0 * weight, "x {x} r {r}: {mu} vs {inside}");
        }
    }
}

#[test]
fn power_law_constant_is_stable_when_the_range_doubles() {
    let delta = 2f64.ln() / 3f64.ln();
    let samples = cantor_samples(6);
    let short: Vec<_> = (1..=5).map(triadic).collect();
    let long: Vec<_> = (1..=10).map(triadic).collect();
    let a = power_law_check(&CantorMeasure, delta, &short, &samples, 0.05, Execution::Sequential).unwrap();
    let b = power_law_check(&CantorMeasure, delta, &long, &samples, 0.05, Execution::Sequential).unwrap();
    assert!(a.passed && b.passed);
    // shared scales give identical rows; the longer range can only raise C
    assert_eq!(a.rows[..], b.rows[..5]);
    assert!(b.constant >= a.constant);
    assert!(b.constant <= a.constant * 1.05, "{} vs {}", b.constant, a.constant);
}

#[test]
fn sequential_and_parallel_paths_agree() {
    let oracle = ba_digit_set_oracle(3, 40).unwrap();
    assert_eq!(
        box_counts(&oracle, 2, 10, Execution::Sequential).unwrap(),
        box_counts(&oracle, 2, 10, Execution::Parallel).unwrap()
    );
    let set = LineSet::Cantor(CantorSet::middle_thirds(7));
    let LineSet::Cantor(c) = &set else { unreachable!() };
    let samples = c.endpoints().to_vec();
    let scales: Vec<_> = (1..7).map(triadic).collect();
    let beta = from_ratio(1, 10);
    assert_eq!(
        certify_diffuse(&set, &beta, &scales, &samples, Execution::Sequential),
        certify_diffuse(&set, &beta, &scales, &samples, Execution::Parallel)
    );
    let delta = 2f64.ln() / 3f64.ln();
    let pts = cantor_samples(5);
    assert_eq!(
        power_law_check(&CantorMeasure, delta, &scales, &pts, 0.05, Execution::Sequential).unwrap(),
        power_law_check(&CantorMeasure, delta, &scales, &pts, 0.05, Execution::Parallel).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// `E_N ⊆ E_{N+1}`, checked cell by cell.
    #[test]
    fn digit_oracles_are_nested(n in 1u32..=5, d in 1u32..=12, frac in 0.0f64..1.0) {
        let j = (frac * (1u64 << d) as f64) as u64;
        let (lo, hi) = dyadic(j, d);
        let small = ba_digit_set_oracle(n, 40).unwrap();
        let big = ba_digit_set_oracle(n + 1, 40).unwrap();
        if small.meets(&lo, &hi).unwrap() {
            prop_assert!(big.meets(&lo, &hi).unwrap());
        }
    }

    /// An interval around a whole cylinder meets `E_N`; a gap between
    /// consecutive cylinders does not.
    #[test]
    fn digit_oracle_respects_cylinders(n in 2u32..=4, len in 1u32..=4, pick in any::<prop::sample::Index>()) {
        let oracle = ba_digit_set_oracle(n, 40).unwrap();
        let cyl = digit_cylinders(n, len);
        let i = pick.index(cyl.len());
        let (a, b) = &cyl[i];
        let pad = (b - a) / BigRational::from_integer(8.into());
        prop_assert!(oracle.meets(&(a - &pad), &(b + &pad)).unwrap());
        if i + 1 < cyl.len() {
            let next = &cyl[i + 1].0;
            if b < next {
                prop_assert!(!oracle.meets(b, next).unwrap(), "gap ({}, {})", to_f64(b), to_f64(next));
            }
        }
    }
}
