use std::cmp::Ordering;

use num::{BigRational, One, Signed, Zero};

use super::{Ball, BallSpace, CantorSet, LineBall};
use crate::rational;

/// A closed subset of the real line used as a playfield.
#[derive(Clone, Debug, PartialEq)]
pub enum LineSet {
    /// The interval `[lo, hi]`.
    Window {
        lo: BigRational,
        hi: BigRational,
    },
    Cantor(CantorSet),
    /// A finite set of points, kept sorted.
    Finite(Vec<BigRational>),
}

impl LineSet {
    pub fn unit_window() -> Self {
        LineSet::Window {
            lo: BigRational::zero(),
            hi: BigRational::one(),
        }
    }

    pub fn finite(mut points: Vec<BigRational>) -> Self {
        points.sort();
        points.dedup();
        LineSet::Finite(points)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        match self {
            LineSet::Window { lo, hi } => lo <= x && x <= hi,
            LineSet::Cantor(c) => c.contains(x),
            LineSet::Finite(points) => points.binary_search(x).is_ok(),
        }
    }

    /// `(inf, sup)` of the set.
    pub fn hull(&self) -> Option<(BigRational, BigRational)> {
        match self {
            LineSet::Window { lo, hi } => Some((lo.clone(), hi.clone())),
            LineSet::Cantor(_) => Some((BigRational::zero(), BigRational::one())),
            LineSet::Finite(p) => Some((p.first()?.clone(), p.last()?.clone())),
        }
    }

    /// Whether the set escapes the closed ball `B(x, r)`.
    pub fn escapes(&self, x: &BigRational, r: &BigRational) -> bool {
        match self.hull() {
            Some((lo, hi)) => (x - &lo) > *r || (&hi - x) > *r,
            None => false,
        }
    }

    /// Sorted points of a discrete set (the cylinder endpoints of a Cantor
    /// set); `None` for a continuum.
    pub fn sorted_points(&self) -> Option<&[BigRational]> {
        match self {
            LineSet::Window { .. } => None,
            LineSet::Cantor(c) => Some(c.endpoints()),
            LineSet::Finite(points) => Some(points),
        }
    }

    /// The sorted points lying in `[lo, hi]`, as a slice.
    pub fn points_in(&self, lo: &BigRational, hi: &BigRational) -> Option<&[BigRational]> {
        let points = self.sorted_points()?;
        let start = points.partition_point(|p| p < lo);
        let end = points.partition_point(|p| p <= hi).max(start);
        Some(&points[start..end])
    }

    /// Finite list of set points in `[lo, hi]` for discrete sets; `None` for
    /// a continuum.
    pub fn discrete_points_in(&self, lo: &BigRational, hi: &BigRational) -> Option<Vec<BigRational>> {
        self.points_in(lo, hi).map(<[BigRational]>::to_vec)
    }

    /// Candidate set points inside `[lo, hi]`: all of them for discrete sets,
    /// a dyadic grid plus the supplied hints for a window.
    pub fn candidates_in(&self, lo: &BigRational, hi: &BigRational, hints: &[BigRational]) -> Vec<BigRational> {
        if let Some(points) = self.discrete_points_in(lo, hi) {
            return points;
        }
        let mut out: Vec<BigRational> = hints.iter().filter(|h| lo <= *h && *h <= hi).cloned().collect();
        if let LineSet::Window { lo: wlo, hi: whi } = self {
            for edge in [wlo, whi] {
                if lo <= edge && edge <= hi {
                    out.push(edge.clone());
                }
            }
        }
        let width = hi - lo;
        for m in 1..=6u32 {
            let denom = BigRational::from_integer(num::pow(num::BigInt::from(2), m as usize));
            let mut j = num::BigInt::from(1);
            let top = num::pow(num::BigInt::from(2), m as usize);
            while j < top {
                out.push(lo + &width * BigRational::from_integer(j.clone()) / &denom);
                j += 2;
            }
        }
        out.retain(|c| self.contains(c));
        out
    }
}

/// Orders candidates for ball searches: offsets closest to `target` from
/// `x` first, larger coordinate on ties.
pub(crate) fn witness_order(x: &BigRational, target: &BigRational, a: &BigRational, b: &BigRational) -> Ordering {
    let ka = ((a - x).abs() - target).abs();
    let kb = ((b - x).abs() - target).abs();
    ka.cmp(&kb).then_with(|| b.cmp(a))
}

/// A cursor over a sorted slice, moving one way while inside its bounds.
struct Cursor {
    next: usize,
    end: usize,
    up: bool,
}

/// Sorted points in [`witness_order`], produced lazily by merging four
/// cursors that walk outward from `x ± target`.
struct WitnessOrder<'a> {
    points: &'a [BigRational],
    x: &'a BigRational,
    target: &'a BigRational,
    cursors: [Cursor; 4],
}

impl<'a> WitnessOrder<'a> {
    fn new(points: &'a [BigRational], x: &'a BigRational, target: &'a BigRational) -> Self {
        let at = |v: &BigRational| points.partition_point(|p| p < v);
        let (n, ix) = (points.len(), at(x));
        let right = (x + target, ix);
        let left = (x - target, ix);
        let r_mid = at(&right.0).max(ix);
        let l_mid = points.partition_point(|p| p <= &left.0).min(ix);
        WitnessOrder {
            points,
            x,
            target,
            cursors: [
                // [x + t, ∞) upward and [x, x + t) downward
                Cursor {
                    next: r_mid,
                    end: n,
                    up: true,
                },
                Cursor {
                    next: r_mid,
                    end: ix,
                    up: false,
                },
                // (x − t, x) upward and (−∞, x − t] downward
                Cursor {
                    next: l_mid,
                    end: ix,
                    up: true,
                },
                Cursor {
                    next: l_mid,
                    end: 0,
                    up: false,
                },
            ],
        }
    }

    fn peek(&self, k: usize) -> Option<usize> {
        let c = &self.cursors[k];
        match c.up {
            true if c.next < c.end => Some(c.next),
            false if c.next > c.end => Some(c.next - 1),
            _ => None,
        }
    }
}

impl<'a> Iterator for WitnessOrder<'a> {
    type Item = &'a BigRational;

    fn next(&mut self) -> Option<&'a BigRational> {
        let best = (0..4)
            .filter_map(|k| self.peek(k).map(|i| (k, i)))
            .min_by(|(_, i), (_, j)| witness_order(self.x, self.target, &self.points[*i], &self.points[*j]))?;
        let c = &mut self.cursors[best.0];
        if c.up {
            c.next += 1;
        } else {
            c.next -= 1;
        }
        Some(&self.points[best.1])
    }
}

impl BallSpace for LineSet {
    type Point = BigRational;
    type Radius = BigRational;
    type Ratio = BigRational;

    fn on_playfield(&self, p: &BigRational) -> bool {
        self.contains(p)
    }

    fn scale(&self, r: &BigRational, by: &BigRational) -> BigRational {
        r * by
    }

    fn ratio_value(&self, by: &BigRational) -> f64 {
        rational::to_f64(by)
    }

    fn radius_at_least(&self, r: &BigRational, bound: &BigRational) -> bool {
        r >= bound
    }

    fn radius_value(&self, r: &BigRational) -> f64 {
        rational::to_f64(r)
    }

    fn point_label(&self, p: &BigRational) -> String {
        rational::format(p)
    }

    fn radius_label(&self, r: &BigRational) -> String {
        rational::format(r)
    }

    fn schmidt_nested(&self, inner: &LineBall, outer: &LineBall) -> bool {
        super::is_schmidt_nested(inner, outer)
    }

    fn contained(&self, inner: &LineBall, outer: &LineBall) -> bool {
        super::is_schmidt_nested(inner, outer)
    }

    fn disjoint(&self, a: &LineBall, b: &LineBall) -> bool {
        (&a.center - &b.center).abs() > &a.radius + &b.radius
    }

    fn find_avoiding(&self, within: &LineBall, radius: &BigRational, obstacle: Option<&LineBall>) -> Option<LineBall> {
        if radius > &within.radius || !radius.is_positive() {
            return None;
        }
        let x = &within.center;
        let fits = |c: &BigRational| {
            let ball = Ball::new(c.clone(), radius.clone());
            self.contained(&ball, within) && obstacle.is_none_or(|o| self.disjoint(&ball, o))
        };
        let legal = |c: &BigRational| self.contains(c) && fits(c);
        if legal(x) {
            return Some(Ball::new(x.clone(), radius.clone()));
        }
        let slack = &within.radius - radius;
        let half = &within.radius / BigRational::from_integer(2.into());
        if let Some(points) = self.points_in(&(x - &slack), &(x + &slack)) {
            return WitnessOrder::new(points, x, &half)
                .find(|c| fits(c))
                .map(|c| Ball::new(c.clone(), radius.clone()));
        }
        let mut hints = vec![x + &half, x - &half, x + &slack, x - &slack];
        if let Some(o) = obstacle {
            let gap = &o.radius + radius + &slack / BigRational::from_integer(1024.into());
            hints.push(&o.center + &gap);
            hints.push(&o.center - &gap);
        }
        let mut candidates = self.candidates_in(&(x - &slack), &(x + &slack), &hints);
        candidates.retain(|c| legal(c));
        candidates.sort_by(|a, b| witness_order(x, &half, a, b));
        candidates.into_iter().next().map(|c| Ball::new(c, radius.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_int, from_ratio};

    #[test]
    fn lazy_witness_order_matches_a_full_sort() {
        let points: Vec<BigRational> = (0..60).map(|k| from_ratio((k * k * 7) % 97, 97)).collect();
        let set = LineSet::finite(points);
        let pts = set.sorted_points().unwrap();
        for (x, t) in [
            (from_ratio(1, 2), from_ratio(1, 10)),
            (from_ratio(3, 97), from_ratio(2, 97)),
            (from_int(0), from_int(0)),
            (from_int(1), from_ratio(1, 3)),
        ] {
            let lazy: Vec<_> = WitnessOrder::new(pts, &x, &t).cloned().collect();
            let mut full = pts.to_vec();
            full.sort_by(|a, b| witness_order(&x, &t, a, b));
            assert_eq!(lazy, full);
        }
    }

    #[test]
    fn window_search_prefers_half_radius_offset() {
        let e = LineSet::unit_window();
        let within = Ball::new(from_ratio(1, 2), from_ratio(1, 10));
        let obstacle = Ball::new(from_ratio(1, 2), from_ratio(1, 100));
        let found = e.find_avoiding(&within, &from_ratio(1, 100), Some(&obstacle)).unwrap();
        assert_eq!(found.center, from_ratio(11, 20));
    }

    #[test]
    fn concentric_reply_when_obstacle_is_elsewhere() {
        let e = LineSet::unit_window();
        let within = Ball::new(from_ratio(1, 2), from_ratio(1, 10));
        let obstacle = Ball::new(from_int(5), from_ratio(1, 100));
        let found = e.find_avoiding(&within, &from_ratio(1, 100), Some(&obstacle)).unwrap();
        assert_eq!(found.center, from_ratio(1, 2));
    }

    #[test]
    fn finite_set_can_get_stuck() {
        let e = LineSet::finite(vec![from_int(0)]);
        let within = Ball::new(from_int(0), from_int(1));
        let obstacle = Ball::new(from_int(0), from_ratio(1, 10));
        assert!(e.find_avoiding(&within, &from_ratio(1, 10), Some(&obstacle)).is_none());
        assert!(!e.escapes(&from_int(0), &from_int(1)));
    }
}
