use num::{BigRational, Signed};

use super::{Ball, BallSpace, LineSet};
use crate::rational;

pub type PairBall = Ball<(BigRational, BigRational), BigRational>;

/// `E × E` with the max metric.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSpace {
    pub factor: LineSet,
}

impl ProductSpace {
    pub fn new(factor: LineSet) -> Self {
        ProductSpace { factor }
    }

    pub fn max_distance(p: &(BigRational, BigRational), q: &(BigRational, BigRational)) -> BigRational {
        let dx = (&p.0 - &q.0).abs();
        let dy = (&p.1 - &q.1).abs();
        dx.max(dy)
    }

    /// The two coordinate projections of a product ball.
    pub fn project(ball: &PairBall) -> (Ball<BigRational, BigRational>, Ball<BigRational, BigRational>) {
        (
            Ball::new(ball.center.0.clone(), ball.radius.clone()),
            Ball::new(ball.center.1.clone(), ball.radius.clone()),
        )
    }
}

impl BallSpace for ProductSpace {
    type Point = (BigRational, BigRational);
    type Radius = BigRational;
    type Ratio = BigRational;

    fn on_playfield(&self, p: &Self::Point) -> bool {
        self.factor.contains(&p.0) && self.factor.contains(&p.1)
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

    fn point_label(&self, p: &Self::Point) -> String {
        format!("({}, {})", rational::format(&p.0), rational::format(&p.1))
    }

    fn radius_label(&self, r: &BigRational) -> String {
        rational::format(r)
    }

    fn schmidt_nested(&self, inner: &PairBall, outer: &PairBall) -> bool {
        &inner.radius + Self::max_distance(&inner.center, &outer.center) <= outer.radius
    }

    fn contained(&self, inner: &PairBall, outer: &PairBall) -> bool {
        self.schmidt_nested(inner, outer)
    }

    fn disjoint(&self, a: &PairBall, b: &PairBall) -> bool {
        Self::max_distance(&a.center, &b.center) > &a.radius + &b.radius
    }

    fn find_avoiding(&self, within: &PairBall, radius: &BigRational, obstacle: Option<&PairBall>) -> Option<PairBall> {
        let (wx, wy) = Self::project(within);
        let (ox, oy) = match obstacle {
            Some(o) => {
                let (a, b) = Self::project(o);
                (Some(a), Some(b))
            }
            None => (None, None),
        };
        // Separation in either coordinate separates in the max metric.
        let first = self
            .factor
            .find_avoiding(&wx, radius, ox.as_ref())
            .and_then(|bx| self.factor.find_avoiding(&wy, radius, None).map(|by| (bx.center, by.center)));
        let centers = first.or_else(|| {
            let by = self.factor.find_avoiding(&wy, radius, oy.as_ref())?;
            let bx = self.factor.find_avoiding(&wx, radius, None)?;
            Some((bx.center, by.center))
        })?;
        let ball = Ball::new(centers, radius.clone());
        debug_assert!(self.contained(&ball, within));
        Some(ball)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_int, from_ratio};

    #[test]
    fn product_search_separates_in_one_coordinate() {
        let p = ProductSpace::new(LineSet::unit_window());
        let within = Ball::new((from_ratio(1, 2), from_ratio(1, 2)), from_ratio(1, 4));
        let obstacle = Ball::new((from_ratio(1, 2), from_ratio(1, 2)), from_ratio(1, 20));
        let found = p.find_avoiding(&within, &from_ratio(1, 20), Some(&obstacle)).unwrap();
        assert!(p.disjoint(&found, &obstacle));
        assert!(p.contained(&found, &within));
        assert!(p.on_playfield(&found.center));
        assert_eq!(
            ProductSpace::max_distance(&(from_int(0), from_int(1)), &(from_int(2), from_int(0))),
            from_int(2)
        );
    }
}
