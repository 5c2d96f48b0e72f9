//! Rooted regular trees and their boundaries.
//!
//! A boundary point is a digit string of the tree's depth. The Gromov
//! product of two rays from the root is the length of their common prefix,
//! and `ρ(x, y) = a^-(x|y)` is an exact visual metric, so every ball is a
//! cylinder. Radii are stored as integer levels: `TreeRadius(k)` is the
//! radius `a^-k`.

use serde::{Deserialize, Serialize};

use crate::metric::{Ball, BallSpace};

/// Ball radius `a^-level`. Larger level means smaller ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeRadius(pub u32);

pub type TreeBall = Ball<Vec<u8>, TreeRadius>;

/// Common prefix length; `None` when the strings are equal (the product is
/// infinite for equal boundary points).
pub fn common_prefix(x: &[u8], y: &[u8]) -> Option<u32> {
    if x == y {
        return None;
    }
    Some(x.iter().zip(y).take_while(|(a, b)| a == b).count() as u32)
}

/// `a^-(x|y)`, and `0` for equal points.
pub fn visual_distance(x: &[u8], y: &[u8], a: f64) -> f64 {
    match common_prefix(x, y) {
        None => 0.0,
        Some(p) => a.powi(-(p as i32)),
    }
}

/// Gromov product with respect to the root, for vertices or boundary points.
pub fn gromov_product(x: &[u8], y: &[u8]) -> f64 {
    match common_prefix(x, y) {
        None => x.len() as f64,
        Some(p) => p as f64,
    }
}

/// Busemann function of the ray from the root to `xi`, at vertex `v`:
/// `b(v) = |v| − 2 (v|ξ)`.
pub fn busemann(xi: &[u8], v: &[u8]) -> i64 {
    let overlap = v.iter().zip(xi).take_while(|(a, b)| a == b).count() as i64;
    v.len() as i64 - 2 * overlap
}

/// Horoball `{v : b_ξ(v) ≤ −k}` based at the boundary point `ξ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeHoroball {
    pub base: Vec<u8>,
    /// `k`; the Busemann level is `−k` and the shadow radius `a^-k`.
    pub k: u32,
}

impl TreeHoroball {
    /// Horoball assigned to the ball `B(ξ, a^-k)`, i.e. level `log_a r = −k`.
    pub fn from_boundary_ball(base: Vec<u8>, radius: TreeRadius) -> Self {
        TreeHoroball { base, k: radius.0 }
    }

    pub fn level(&self) -> i64 {
        -(self.k as i64)
    }

    pub fn contains_vertex(&self, v: &[u8]) -> bool {
        busemann(&self.base, v) <= self.level()
    }

    /// The shadow seen from the root, which is exactly `B(ξ, a^-k)`.
    pub fn shadow(&self) -> TreeBall {
        Ball::new(self.base.clone(), TreeRadius(self.k))
    }

    pub fn shadow_radius(&self, a: f64) -> f64 {
        a.powi(-(self.k as i32))
    }

    /// `cH` for `c = a^-steps`: same base, shadow radius multiplied by `c`.
    pub fn scaled(&self, steps: u32) -> Self {
        TreeHoroball {
            base: self.base.clone(),
            k: self.k + steps,
        }
    }

    /// Interior disjointness for distinct bases: `k + k' > 2 (ξ|ξ')`.
    pub fn disjoint_from(&self, other: &TreeHoroball) -> bool {
        match common_prefix(&self.base, &other.base) {
            None => false,
            Some(p) => self.k + other.k > 2 * p,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeSpace {
    pub branching: u8,
    pub depth: u32,
    pub a: f64,
}

impl TreeSpace {
    pub fn new(branching: u8, depth: u32, a: f64) -> Self {
        assert!(branching >= 2, "branching must be at least 2");
        TreeSpace { branching, depth, a }
    }

    /// Every boundary point, in lexicographic order.
    pub fn leaves(&self) -> Vec<Vec<u8>> {
        self.words(self.depth)
    }

    /// Every vertex at distance `len` from the root.
    pub fn words(&self, len: u32) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..self.branching).map(move |d| {
                        let mut w = w.clone();
                        w.push(d);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// Leaves whose ray from the root passes through a vertex of `h`.
    pub fn shadow_by_enumeration(&self, h: &TreeHoroball) -> Vec<Vec<u8>> {
        self.leaves()
            .into_iter()
            .filter(|leaf| (0..=leaf.len()).any(|t| h.contains_vertex(&leaf[..t])))
            .collect()
    }

    /// Leaves of the closed ball `B(ξ, a^-k)`.
    pub fn ball_leaves(&self, ball: &TreeBall) -> Vec<Vec<u8>> {
        self.leaves().into_iter().filter(|leaf| in_ball(leaf, ball)).collect()
    }
}

/// `x ∈ B(c, a^-k)`.
pub fn in_ball(x: &[u8], ball: &TreeBall) -> bool {
    common_prefix(x, &ball.center).is_none_or(|p| p >= ball.radius.0)
}

impl BallSpace for TreeSpace {
    type Point = Vec<u8>;
    type Radius = TreeRadius;
    /// β = `a^-steps`.
    type Ratio = u32;

    fn on_playfield(&self, p: &Vec<u8>) -> bool {
        p.len() == self.depth as usize && p.iter().all(|d| *d < self.branching)
    }

    fn scale(&self, r: &TreeRadius, by: &u32) -> TreeRadius {
        TreeRadius(r.0 + by)
    }

    fn ratio_value(&self, by: &u32) -> f64 {
        self.a.powi(-(*by as i32))
    }

    fn radius_at_least(&self, r: &TreeRadius, bound: &TreeRadius) -> bool {
        r.0 <= bound.0
    }

    fn radius_value(&self, r: &TreeRadius) -> f64 {
        self.a.powi(-(r.0 as i32))
    }

    fn point_label(&self, p: &Vec<u8>) -> String {
        p.iter().map(|d| char::from_digit(*d as u32, 36).unwrap_or('?')).collect()
    }

    fn radius_label(&self, r: &TreeRadius) -> String {
        format!("a^-{}", r.0)
    }

    fn schmidt_nested(&self, inner: &TreeBall, outer: &TreeBall) -> bool {
        let d = visual_distance(&inner.center, &outer.center, self.a);
        if d == 0.0 {
            return inner.radius.0 >= outer.radius.0;
        }
        self.radius_value(&inner.radius) + d <= self.radius_value(&outer.radius)
    }

    fn contained(&self, inner: &TreeBall, outer: &TreeBall) -> bool {
        inner.radius.0 >= outer.radius.0 && in_ball(&inner.center, outer)
    }

    fn disjoint(&self, a: &TreeBall, b: &TreeBall) -> bool {
        common_prefix(&a.center, &b.center).is_some_and(|p| p < a.radius.0.min(b.radius.0))
    }

    fn find_avoiding(&self, within: &TreeBall, radius: &TreeRadius, obstacle: Option<&TreeBall>) -> Option<TreeBall> {
        if radius.0 < within.radius.0 {
            return None;
        }
        let legal = |c: &Vec<u8>| {
            let b = Ball::new(c.clone(), *radius);
            self.on_playfield(c) && self.contained(&b, within) && obstacle.is_none_or(|o| self.disjoint(&b, o))
        };
        if legal(&within.center) {
            return Some(Ball::new(within.center.clone(), *radius));
        }
        let lo = within.radius.0.min(self.depth) as usize;
        let hi = radius.0.min(self.depth) as usize;
        let free = (hi - lo) as u32;
        for choice in self.words(free) {
            let mut c = within.center.clone();
            c[lo..hi].copy_from_slice(&choice);
            if legal(&c) {
                return Some(Ball::new(c, *radius));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_metric() {
        assert_eq!(gromov_product(&[0, 1, 1, 0], &[0, 1, 0, 1]), 2.0);
        assert!((visual_distance(&[0, 1, 1, 0], &[0, 1, 0, 1], std::f64::consts::E) - (-2f64).exp()).abs() < 1e-15);
        assert_eq!(visual_distance(&[1, 1], &[1, 1], 2.0), 0.0);
        assert_eq!(gromov_product(&[0, 1, 1], &[0, 1, 1]), 3.0);
    }

    #[test]
    fn busemann_on_ray_is_minus_depth() {
        let xi = vec![0, 1, 1, 0, 1];
        for t in 0..=5 {
            assert_eq!(busemann(&xi, &xi[..t]), -(t as i64));
        }
        assert_eq!(busemann(&xi, &[1, 1]), 2);
    }

    #[test]
    fn shadow_matches_enumeration() {
        let t = TreeSpace::new(2, 6, std::f64::consts::E);
        let h = TreeHoroball::from_boundary_ball(vec![0, 1, 1, 0, 1, 0], TreeRadius(3));
        assert_eq!(h.level(), -3);
        assert_eq!(t.shadow_by_enumeration(&h), t.ball_leaves(&h.shadow()));
        assert_eq!(t.ball_leaves(&h.shadow()).len(), 8);
    }

    #[test]
    fn scaling_moves_boundary_by_log_inverse() {
        let h = TreeHoroball {
            base: vec![1, 0, 1, 1],
            k: 1,
        };
        let c = h.scaled(2);
        assert_eq!(c.k, 3);
        // first vertex of each horoball on the ray to the base
        let enter = |h: &TreeHoroball| (0..=4).find(|&t| h.contains_vertex(&h.base[..t])).unwrap();
        assert_eq!(enter(&c) - enter(&h), 2);
        assert!((c.shadow_radius(2.0) / h.shadow_radius(2.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn avoiding_search_picks_sibling() {
        let t = TreeSpace::new(2, 5, std::f64::consts::E);
        let within = Ball::new(vec![0, 0, 0, 0, 0], TreeRadius(1));
        let obstacle = Ball::new(vec![0, 0, 0, 0, 0], TreeRadius(2));
        let b = t.find_avoiding(&within, &TreeRadius(2), Some(&obstacle)).unwrap();
        assert_eq!(b.center, vec![0, 1, 0, 0, 0]);
        assert!(t.disjoint(&b, &obstacle) && t.contained(&b, &within));
    }
}
