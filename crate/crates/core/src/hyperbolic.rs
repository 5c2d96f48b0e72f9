//! The upper half-plane model with basepoint `o = i`.
//!
//! Geodesic rays from `i` are images of the vertical ray `t ↦ i e^{-t}`
//! under the rotation about `i` that sends `0` to the endpoint, which gives
//! closed forms for ray points, Busemann functions and horoball shadows.
//! Horoballs based on the real line are Euclidean disks tangent to `ℝ`; the
//! Busemann function of the ray to `ξ ∈ ℝ`, normalized by `b(i) = 0`, is
//! `ln(|z − ξ|² / (y (1 + ξ²)))`, so the horoball of level `L` at `ξ` has
//! Euclidean diameter `e^L (1 + ξ²)`.

use num::{BigRational, One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational;

/// Relative accuracy of closed-form shadow radii.
pub const SHADOW_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum HyperbolicError {
    #[error("basepoint lies inside the horoball at {0}; rescale the family first")]
    BasepointInside(String),
    #[error("shadow of the horoball at {0} is unbounded in the window")]
    UnboundedShadow(String),
    #[error("scale factor {0} outside (0, 1)")]
    ScaleDomain(f64),
    #[error("radius must be positive")]
    Radius,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Self {
        assert!(y > 0.0, "half-plane points need y > 0");
        HPoint { x, y }
    }

    pub const I: HPoint = HPoint { x: 0.0, y: 1.0 };
}

/// `arccosh(1 + |z − w|² / (2 y_z y_w))`, evaluated in the
/// cancellation-free `2 asinh` form.
pub fn hyp_distance(z: HPoint, w: HPoint) -> f64 {
    let e = (z.x - w.x).hypot(z.y - w.y);
    2.0 * (e / (2.0 * (z.y * w.y).sqrt())).asinh()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Boundary {
    Finite(f64),
    Infinity,
}

/// Unit-speed geodesic ray from `i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicRay {
    pub endpoint: Boundary,
}

impl GeodesicRay {
    pub fn to(endpoint: Boundary) -> Self {
        GeodesicRay { endpoint }
    }

    pub fn point(&self, t: f64) -> HPoint {
        geodesic_point(self, t)
    }
}

/// The point at arclength `t` along the ray.
pub fn geodesic_point(ray: &GeodesicRay, t: f64) -> HPoint {
    match ray.endpoint {
        Boundary::Infinity => HPoint { x: 0.0, y: t.exp() },
        Boundary::Finite(xi) => {
            let (s, c) = rotation(xi);
            let y = (-t).exp();
            let den = c * c + s * s * y * y;
            HPoint {
                x: s * c * (1.0 - y * y) / den,
                y: y / den,
            }
        }
    }
}

/// `(sin θ, cos θ)` for the rotation about `i` sending `0` to `xi`.
fn rotation(xi: f64) -> (f64, f64) {
    let norm = (1.0 + xi * xi).sqrt();
    (xi / norm, 1.0 / norm)
}

/// The ray point at time `t` written relative to the endpoint:
/// `γ(t) = (ξ + dx, height)`. Stays accurate when the point is far closer to
/// `ξ` than `ξ`'s own float spacing.
pub fn ray_offset(xi: f64, t: f64) -> (f64, f64) {
    let (s, c) = rotation(xi);
    let y = (-t).exp();
    let den = c * c + s * s * y * y;
    (-s * y * y / (c * den), y / den)
}

/// `b_γ(z) = lim (d(γ(t), z) − t)` in closed form, normalized by `b(i) = 0`.
pub fn busemann(ray: &GeodesicRay, z: HPoint) -> f64 {
    match ray.endpoint {
        Boundary::Infinity => -z.y.ln(),
        Boundary::Finite(xi) => {
            let dx = z.x - xi;
            ((dx * dx + z.y * z.y) / (z.y * (1.0 + xi * xi))).ln()
        }
    }
}

/// `½ (d(x, o) + d(y, o) − d(x, y))`.
pub fn gromov_product(x: HPoint, y: HPoint, o: HPoint) -> f64 {
    0.5 * (hyp_distance(x, o) + hyp_distance(y, o) - hyp_distance(x, y))
}

/// Boundary Gromov product from `i` along the radial sequences `γ(n)`.
/// Within `2δ` of the true value.
pub fn gromov_product_boundary(xi: Boundary, eta: Boundary, n: f64) -> f64 {
    let a = geodesic_point(&GeodesicRay::to(xi), n);
    let b = geodesic_point(&GeodesicRay::to(eta), n);
    gromov_product(a, b, HPoint::I)
}

/// Closed boundary interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShadowInterval {
    pub lo: f64,
    pub hi: f64,
}

/// Horoball tangent to `ℝ` at a rational base, with rational Euclidean
/// diameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfPlaneHoroball {
    pub base: BigRational,
    pub diameter: BigRational,
}

impl HalfPlaneHoroball {
    pub fn new(base: BigRational, diameter: BigRational) -> Self {
        assert!(diameter.is_positive(), "horoball diameter must be positive");
        HalfPlaneHoroball { base, diameter }
    }

    pub fn base_f64(&self) -> f64 {
        rational::to_f64(&self.base)
    }

    /// `e^level = diameter / (1 + ξ²)`.
    fn visual_size(&self) -> f64 {
        let denom = BigRational::one() + &self.base * &self.base;
        rational::to_f64(&(&self.diameter / denom))
    }

    /// The Busemann level `L` with `H = b^{-1}(−∞, L]`.
    pub fn level(&self) -> f64 {
        let denom = BigRational::one() + &self.base * &self.base;
        rational::ln(&(&self.diameter / denom))
    }

    /// Open-disk membership, exact.
    pub fn contains_exact(&self, x: &BigRational, y: &BigRational) -> bool {
        let dx = x - &self.base;
        &dx * &dx + y * y < &self.diameter * y
    }

    /// Open-disk membership for a float point.
    pub fn contains(&self, z: HPoint) -> bool {
        let dx = z.x - self.base_f64();
        dx * dx / z.y + z.y < rational::to_f64(&self.diameter)
    }

    /// Membership of `(x + dx, height)` with `x` exact: the horizontal gap is
    /// formed exactly before rounding.
    pub fn contains_offset(&self, x: &BigRational, dx: f64, height: f64) -> bool {
        let gap = rational::to_f64(&(x - &self.base)) + dx;
        gap * gap / height + height < rational::to_f64(&self.diameter)
    }

    /// Whether `i` lies in the closed horoball.
    pub fn contains_basepoint(&self) -> bool {
        self.visual_size() > 1.0
    }

    fn half_angle(&self) -> Result<f64, HyperbolicError> {
        let k = self.visual_size();
        if k > 1.0 {
            return Err(HyperbolicError::BasepointInside(rational::format(&self.base)));
        }
        // smaller root of 2η/(1+η²) = k
        let eta = k / (1.0 + (1.0 - k * k).sqrt());
        Ok(eta.atan())
    }

    /// Endpoints of rays from `i` that meet the horoball.
    pub fn shadow(&self) -> Result<ShadowInterval, HyperbolicError> {
        let w = self.half_angle()?;
        let phi = self.base_f64().atan();
        let half_pi = std::f64::consts::FRAC_PI_2;
        if phi + w >= half_pi || phi - w <= -half_pi {
            return Err(HyperbolicError::UnboundedShadow(rational::format(&self.base)));
        }
        Ok(ShadowInterval {
            lo: (phi - w).tan(),
            hi: (phi + w).tan(),
        })
    }

    /// Smallest `R` with `Sh(H) ⊆ B(ξ, R)` in the Euclidean boundary metric.
    pub fn shadow_radius(&self) -> Result<f64, HyperbolicError> {
        let xi = self.base_f64();
        let eta = self.half_angle()?.tan();
        let r = eta * (1.0 + xi * xi) / (1.0 - xi.abs() * eta);
        if r <= 0.0 || !r.is_finite() {
            return Err(HyperbolicError::UnboundedShadow(rational::format(&self.base)));
        }
        Ok(r)
    }

    /// The horoball at the same base whose shadow radius is `s·R`.
    pub fn scaled(&self, s: f64) -> Result<HalfPlaneHoroball, HyperbolicError> {
        if !(s > 0.0 && s < 1.0) {
            return Err(HyperbolicError::ScaleDomain(s));
        }
        let r = s * self.shadow_radius()?;
        let xi = self.base_f64();
        let eta = r / (1.0 + xi * xi + r * xi.abs());
        let k = 2.0 * eta / (1.0 + eta * eta);
        let one_plus = 1.0 + xi * xi;
        let diameter = rational::from_f64(k * one_plus).min(self.diameter.clone());
        Ok(HalfPlaneHoroball {
            base: self.base.clone(),
            diameter,
        })
    }

    /// Horoball at `ξ` of level `ln r`.
    pub fn from_boundary_ball(base: BigRational, r: BigRational) -> Result<HalfPlaneHoroball, HyperbolicError> {
        if !r.is_positive() {
            return Err(HyperbolicError::Radius);
        }
        let diameter = &r * (BigRational::one() + &base * &base);
        Ok(HalfPlaneHoroball { base, diameter })
    }
}

/// Horoball `{y ≥ height}` at `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InfinityHoroball {
    pub height: BigRational,
}

impl InfinityHoroball {
    pub fn contains(&self, y: f64) -> bool {
        y > rational::to_f64(&self.height)
    }

    pub fn level(&self) -> f64 {
        -rational::ln(&self.height)
    }
}

/// `n + 1` evenly spaced (in hyperbolic arclength) points of the geodesic
/// segment from `z` to `w`.
pub fn geodesic_segment(z: HPoint, w: HPoint, n: usize) -> Vec<HPoint> {
    if (z.x - w.x).abs() < 1e-15 * (1.0 + z.x.abs()) {
        let (a, b) = (z.y.ln(), w.y.ln());
        return (0..=n)
            .map(|k| HPoint {
                x: z.x,
                y: (a + (b - a) * k as f64 / n as f64).exp(),
            })
            .collect();
    }
    let c = (w.x * w.x + w.y * w.y - z.x * z.x - z.y * z.y) / (2.0 * (w.x - z.x));
    let r = (z.x - c).hypot(z.y);
    // on the semicircle, arclength is ln tan(φ/2) in the angle from the positive axis
    let angle = |p: HPoint| (p.y).atan2(p.x - c);
    let u = |phi: f64| (phi / 2.0).tan().ln();
    let (ua, ub) = (u(angle(z)), u(angle(w)));
    (0..=n)
        .map(|k| {
            let uk = ua + (ub - ua) * k as f64 / n as f64;
            let phi = 2.0 * uk.exp().atan();
            HPoint {
                x: c + r * phi.cos(),
                y: r * phi.sin(),
            }
        })
        .collect()
}
