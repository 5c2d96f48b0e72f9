use badapprox::hyperbolic::{
    busemann, geodesic_point, geodesic_segment, gromov_product, hyp_distance, Boundary, GeodesicRay, HPoint, HalfPlaneHoroball,
};
use badapprox::metric::HALF_PLANE_DELTA;
use badapprox::rational::from_ratio;
use proptest::prelude::*;

fn endpoint() -> impl Strategy<Value = Boundary> {
    prop_oneof![1 => Just(Boundary::Infinity), 9 => (-5.0f64..5.0).prop_map(Boundary::Finite)]
}

fn point() -> impl Strategy<Value = HPoint> {
    (-3.0f64..3.0, -6.0f64..2.0).prop_map(|(x, ly)| HPoint::new(x, ly.exp()))
}

/// Horoball at `p/q` with diameter `num/den`, small enough to miss `i`.
fn horoball() -> impl Strategy<Value = HalfPlaneHoroball> {
    (-20i64..=20, 1i64..=10, 1i64..=20).prop_map(|(p, q, k)| HalfPlaneHoroball::new(from_ratio(p, q), from_ratio(k, 40)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rays_have_unit_speed(end in endpoint(), s in 0.0f64..20.0, dt in 0.0f64..20.0) {
        let t = (s + dt).min(20.0);
        let ray = GeodesicRay::to(end);
        let d = hyp_distance(geodesic_point(&ray, s), geodesic_point(&ray, t));
        // the float image of γ(t) loses relative precision as y shrinks
        let tol = 1e-9 * (1.0 + t);
        prop_assert!((d - (t - s)).abs() < tol, "d = {d}, t - s = {}", t - s);
    }

    #[test]
    fn busemann_along_the_ray(end in endpoint(), t in 0.0f64..20.0) {
        let ray = GeodesicRay::to(end);
        let b = busemann(&ray, geodesic_point(&ray, t));
        prop_assert!((b + t).abs() < 1e-9 * (1.0 + t), "b = {b}, t = {t}");
    }

    #[test]
    fn busemann_is_a_limit(end in endpoint(), z in point()) {
        // d(γ(T), z) − T approaches b(z) as T grows
        let ray = GeodesicRay::to(end);
        let t = 18.0;
        let approx = hyp_distance(geodesic_point(&ray, t), z) - t;
        prop_assert!((approx - busemann(&ray, z)).abs() < 1e-5);
    }

    #[test]
    fn horoball_membership_matches_the_circle(h in horoball(), dx in -1.0f64..1.0, ly in -8.0f64..1.0) {
        let xi = h.base_f64();
        let d = badapprox::rational::to_f64(&h.diameter);
        let z = HPoint::new(xi + dx * d, ly.exp());
        let b = busemann(&GeodesicRay::to(Boundary::Finite(xi)), z);
        // Euclidean disk of radius D/2 centered at (ξ, D/2)
        let gap = ((z.x - xi).hypot(z.y - d / 2.0) - d / 2.0) / d;
        prop_assume!(gap.abs() > 1e-9 && (b - h.level()).abs() > 1e-9);
        let inside = gap < 0.0;
        prop_assert_eq!(b < h.level(), inside);
        prop_assert_eq!(h.contains(z), inside);
    }

    #[test]
    fn horoballs_are_quasiconvex(h in horoball(), a in 0.0f64..1.0, b in 0.0f64..1.0, u in -1.0f64..1.0, v in -1.0f64..1.0) {
        // two points of the closed disk, by radial fraction and angle
        let xi = h.base_f64();
        let d = badapprox::rational::to_f64(&h.diameter);
        let on_disk = |frac: f64, ang: f64| {
            let theta = ang * std::f64::consts::PI;
            HPoint::new(xi + frac * d / 2.0 * theta.sin(), d / 2.0 * (1.0 - frac * theta.cos()).max(1e-6))
        };
        let (z, w) = (on_disk(a, u), on_disk(b, v));
        let ray = GeodesicRay::to(Boundary::Finite(xi));
        for p in geodesic_segment(z, w, 32) {
            // distance from p to a horoball is its Busemann excess
            let excess = (busemann(&ray, p) - h.level()).max(0.0);
            prop_assert!(excess <= HALF_PLANE_DELTA, "excess {excess}");
        }
    }

    #[test]
    fn shadows_are_where_rays_enter(h in horoball(), u in -1.5f64..2.5) {
        // march the ray from i toward ξ + u·R and watch for the disk
        let xi = h.base_f64();
        let r = h.shadow_radius().unwrap();
        let end = xi + u * r;
        let ray = GeodesicRay::to(Boundary::Finite(end));
        let d = badapprox::rational::to_f64(&h.diameter);
        let depth = |p: HPoint| (p.x - xi).hypot(p.y - d / 2.0) - d / 2.0;
        let closest = (0..4000).map(|k| depth(geodesic_point(&ray, k as f64 * 0.01))).fold(f64::INFINITY, f64::min);
        let sh = h.shadow().unwrap();
        let margin = (end - sh.lo).abs().min((end - sh.hi).abs());
        prop_assume!(margin > 1e-3 * r);
        prop_assert_eq!(closest < 0.0, sh.lo < end && end < sh.hi, "closest {}", closest);
        // R is the farther shadow endpoint
        prop_assert!(((sh.lo - xi).abs().max((sh.hi - xi).abs()) - r).abs() < 1e-9 * (1.0 + r));
    }

    #[test]
    fn triangles_are_thin(x in point(), y in point(), w in point()) {
        // four-point condition with basepoint i
        let o = HPoint::I;
        let (xy, yw, xw) = (gromov_product(x, y, o), gromov_product(y, w, o), gromov_product(x, w, o));
        prop_assert!(xw >= xy.min(yw) - HALF_PLANE_DELTA - 1e-9);
    }
}
