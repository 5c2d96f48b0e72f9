//! Ambient metric spaces, closed balls, the Schmidt nesting order, and the
//! diffuseness / uniform-perfectness machinery that keeps the absolute game
//! from stalling.

mod cantor;
mod descriptor;
mod line;
mod perfect;
mod product;

pub use cantor::CantorSet;
pub use descriptor::{SpaceDescriptor, SpaceKind, HALF_PLANE_DELTA};
pub use line::LineSet;
pub use perfect::{
    certify_diffuse, check_uniform_perfectness, diffuse_bound_from_perfectness, diffuse_witness, measure_perfectness, DiffuseTrial,
    DiffusenessCertificate, PerfectnessReport, PerfectnessWitness,
};
pub use product::{PairBall, ProductSpace};

use std::fmt::Debug;

use num::{BigRational, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("point {0} does not belong to a {1} space")]
    SpaceMismatch(String, &'static str),
    #[error("parameter {name} = {value} outside {range}")]
    Domain {
        name: &'static str,
        value: String,
        range: &'static str,
    },
    #[error("invalid space descriptor: {0}")]
    Descriptor(String),
}

/// A point of one of the supported spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Point {
    /// Exact coordinate on a real window, Cantor set, or half-plane boundary.
    Real(BigRational),
    /// Boundary point of a rooted tree, as its digit string.
    Digits(Vec<u8>),
}

/// Closed ball `B(center, radius)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ball<P, R> {
    pub center: P,
    pub radius: R,
}

impl<P, R> Ball<P, R> {
    pub fn new(center: P, radius: R) -> Self {
        Ball { center, radius }
    }
}

/// A ball on the real line with exact data.
pub type LineBall = Ball<BigRational, BigRational>;

/// The ball relations every game needs, decided exactly where the space
/// allows it.
///
/// `Radius` is kept abstract so that trees can use integer levels (radius
/// `a^-level`) while real spaces use rationals. `Ratio` is the type of the
/// game parameters α and β in the same representation.
pub trait BallSpace: Send + Sync {
    type Point: Clone + Debug + PartialEq + Send + Sync;
    type Radius: Clone + Debug + PartialEq + Send + Sync;
    type Ratio: Clone + Debug + Send + Sync;

    /// Whether `p` lies in the closed set on which centers must be played.
    fn on_playfield(&self, p: &Self::Point) -> bool;
    fn scale(&self, r: &Self::Radius, by: &Self::Ratio) -> Self::Radius;
    fn ratio_value(&self, by: &Self::Ratio) -> f64;
    /// `r ≥ bound`.
    fn radius_at_least(&self, r: &Self::Radius, bound: &Self::Radius) -> bool;
    fn radius_value(&self, r: &Self::Radius) -> f64;
    fn point_label(&self, p: &Self::Point) -> String;
    fn radius_label(&self, r: &Self::Radius) -> String;

    /// Schmidt's partial order: `ρ_in + d(x_out, x_in) ≤ ρ_out`.
    fn schmidt_nested(&self, inner: &Ball<Self::Point, Self::Radius>, outer: &Ball<Self::Point, Self::Radius>) -> bool;
    /// Certified set containment `inner ⊆ outer`.
    fn contained(&self, inner: &Ball<Self::Point, Self::Radius>, outer: &Ball<Self::Point, Self::Radius>) -> bool;
    /// Certified disjointness.
    fn disjoint(&self, a: &Ball<Self::Point, Self::Radius>, b: &Ball<Self::Point, Self::Radius>) -> bool;

    /// Deterministic search for a ball of the given radius, centered on the
    /// playfield, contained in `within` and disjoint from `obstacle`.
    fn find_avoiding(
        &self,
        within: &Ball<Self::Point, Self::Radius>,
        radius: &Self::Radius,
        obstacle: Option<&Ball<Self::Point, Self::Radius>>,
    ) -> Option<Ball<Self::Point, Self::Radius>>;
}

/// Distance between two points of `space`, realized by the space's
/// (visual) metric. Real spaces use `|p − q|`; tree boundaries use
/// `a^-(p|q)` with `(p|q)` the common-prefix length.
pub fn distance(space: &SpaceDescriptor, p: &Point, q: &Point) -> Result<f64, MetricError> {
    let tree = matches!(space.kind, SpaceKind::TreeBoundary { .. });
    match (p, q) {
        (Point::Digits(x), Point::Digits(y)) if tree => Ok(crate::tree::visual_distance(x, y, space.visual_a)),
        (Point::Real(x), Point::Real(y)) if !tree => Ok(crate::rational::to_f64(&(x - y).abs())),
        _ => {
            let bad = match (tree, p) {
                (true, Point::Digits(_)) | (false, Point::Real(_)) => q,
                _ => p,
            };
            Err(MetricError::SpaceMismatch(format!("{bad:?}"), space.kind.name()))
        }
    }
}

pub fn is_schmidt_nested(inner: &LineBall, outer: &LineBall) -> bool {
    &inner.radius + (&outer.center - &inner.center).abs() <= outer.radius
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_int, from_ratio};

    fn lb(c: BigRational, r: BigRational) -> LineBall {
        Ball::new(c, r)
    }

    #[test]
    fn nesting_examples() {
        let outer = lb(from_int(0), from_int(1));
        assert!(is_schmidt_nested(&lb(from_ratio(1, 2), from_ratio(1, 2)), &outer));
        assert!(!is_schmidt_nested(&lb(from_ratio(3, 5), from_ratio(1, 2)), &outer));
        assert!(is_schmidt_nested(&outer, &outer));
    }

    #[test]
    fn distance_examples() {
        let window = SpaceDescriptor::real_window(from_int(0), from_int(1));
        let d = distance(&window, &Point::Real(from_ratio(1, 4)), &Point::Real(from_ratio(3, 4))).unwrap();
        assert_eq!(d, 0.5);

        let tree = SpaceDescriptor::tree(2, 8);
        let d = distance(&tree, &Point::Digits(vec![0, 1, 1, 0]), &Point::Digits(vec![0, 1, 0, 1])).unwrap();
        assert!((d - (-2.0f64).exp()).abs() < 1e-15);

        let cantor = SpaceDescriptor::cantor(from_ratio(1, 3), 6);
        let d = distance(&cantor, &Point::Real(from_int(0)), &Point::Real(from_int(1))).unwrap();
        assert_eq!(d, 1.0);

        assert!(matches!(
            distance(&tree, &Point::Real(from_int(0)), &Point::Digits(vec![0])),
            Err(MetricError::SpaceMismatch(..))
        ));
        assert!(distance(&window, &Point::Digits(vec![0]), &Point::Real(from_int(0))).is_err());
    }
}
