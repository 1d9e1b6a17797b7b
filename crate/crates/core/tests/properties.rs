use std::f64::consts::{PI, TAU};

use hilbert_core::asdim_cover::{decompose_arc, footprint_diameter, ArcConfig, SphereLevel};
use hilbert_core::coarse_props::{contraction_constant, verify_contraction};
use hilbert_core::hilbert_metric::{
    ball_boundary, concurrency_defect, cross_ratio, geodesic_defect, sphere_point, RaySpec,
};
use hilbert_core::sampling::{random_direction, random_interior, random_polygon, rng};
use hilbert_core::{distance, BodySpec, Chord, ConvexBody, Direction, Point};
use proptest::prelude::*;
use rand::Rng;

const TOL: f64 = 1e-9;

fn body_strategy() -> impl Strategy<Value = ConvexBody> {
    prop_oneof![
        Just(BodySpec::unit_disk()),
        (0.2f64..3.0).prop_map(BodySpec::square),
        (0.3f64..3.0, 0.3f64..3.0, 0.0f64..PI).prop_map(|(a, b, rot)| BodySpec::ellipse(a, b, rot)),
        (5usize..12, any::<u64>()).prop_map(|(n, seed)| random_polygon(&mut rng(seed), n)),
    ]
    .prop_map(|spec| ConvexBody::new(&spec).expect("valid body"))
}

fn triple(body: &ConvexBody, seed: u64) -> (Point, Point, Point) {
    let mut r = rng(seed);
    (
        random_interior(body, &mut r),
        random_interior(body, &mut r),
        random_interior(body, &mut r),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn distance_is_symmetric(body in body_strategy(), seed in any::<u64>()) {
        let (x, y, _) = triple(&body, seed);
        let d = distance(&body, &x, &y).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert!((d - distance(&body, &y, &x).unwrap()).abs() <= TOL);
        prop_assert_eq!(distance(&body, &x, &x).unwrap(), 0.0);
    }

    #[test]
    fn triangle_inequality(body in body_strategy(), seed in any::<u64>()) {
        let (x, y, z) = triple(&body, seed);
        let lhs = distance(&body, &x, &z).unwrap();
        let rhs = distance(&body, &x, &y).unwrap() + distance(&body, &y, &z).unwrap();
        prop_assert!(lhs <= rhs + TOL, "{lhs} > {rhs}");
    }

    #[test]
    fn segments_are_geodesics(body in body_strategy(), seed in any::<u64>(), lambda in 0.01f64..0.99) {
        let (x, y, _) = triple(&body, seed);
        prop_assert!(geodesic_defect(&body, &x, &y, lambda).unwrap() <= TOL);
    }

    #[test]
    fn balls_are_convex(body in body_strategy(), seed in any::<u64>(), lambda in 0.0f64..=1.0) {
        let (x, y, z) = triple(&body, seed);
        let w = x.lerp(&y, lambda);
        let reach = distance(&body, &z, &x).unwrap().max(distance(&body, &z, &y).unwrap());
        prop_assert!(distance(&body, &z, &w).unwrap() <= reach + TOL);
    }

    #[test]
    fn ball_polylines_turn_one_way(body in body_strategy(), seed in any::<u64>(), t in 0.05f64..6.0) {
        let c = random_interior(&body, &mut rng(seed));
        let ball = ball_boundary(&body, &c, t, 64).unwrap();
        prop_assert!(ball.min_turn() >= -TOL);
        for p in &ball.samples {
            prop_assert!((distance(&body, &c, p).unwrap() - t).abs() <= 1e-8);
        }
    }

    #[test]
    fn rays_are_isometric(
        body in body_strategy(),
        seed in any::<u64>(),
        t0 in 0.0f64..6.0,
        t1 in 0.0f64..6.0,
    ) {
        let mut r = rng(seed);
        let x = random_interior(&body, &mut r);
        let ray = RaySpec::new(&body, &x, &random_direction(&mut r, 2)).unwrap();
        let d = distance(&body, &ray.point(t0).unwrap(), &ray.point(t1).unwrap()).unwrap();
        prop_assert!((d - (t0 - t1).abs()).abs() <= TOL);
        prop_assert!((ray.parameter_of(ray.offset_at(t0).unwrap()) - t0).abs() <= 1e-9 * (1.0 + t0));
    }

    #[test]
    fn exact_exit_matches_bisection(body in body_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_interior(&body, &mut r);
        let u = random_direction(&mut r, 2);
        let exact = body.boundary_distance(&p, &u).unwrap();
        let bisect = body.boundary_distance_bisect(&p, &u).unwrap();
        prop_assert!((exact - bisect).abs() <= 1e-9, "{exact} vs {bisect}");
    }

    // Affine maps carry a body onto its image isometrically, and a disk
    // radius gives the logarithm of the ratio of its two chord pieces.
    #[test]
    fn center_distance_matches_closed_form(
        a in 0.3f64..3.0,
        b in 0.3f64..3.0,
        rot in 0.0f64..PI,
        tau in 0.0f64..0.999,
        theta in 0.0f64..TAU,
    ) {
        let body = ConvexBody::new(&BodySpec::ellipse(a, b, rot)).unwrap();
        let (c, s) = (theta.cos(), theta.sin());
        let (cr, sr) = (rot.cos(), rot.sin());
        let local = Point::xy(tau * a * c, tau * b * s);
        let p = Point::xy(cr * local.x() - sr * local.y(), sr * local.x() + cr * local.y());
        let expected = ((1.0 + tau) / (1.0 - tau)).ln();
        let d = distance(&body, &Point::xy(0.0, 0.0), &p).unwrap();
        prop_assert!((d - expected).abs() <= 1e-9 * (1.0 + expected), "{d} vs {expected}");
    }

    #[test]
    fn cross_ratio_is_projectively_invariant(
        params in prop::array::uniform4(-1.0f64..1.0),
        eye in prop::array::uniform2(-3.0f64..3.0),
        tilt in 0.3f64..2.8,
    ) {
        let mut params = params;
        params.sort_by(f64::total_cmp);
        prop_assume!(params.windows(2).all(|w| w[1] - w[0] > 0.05));
        let pts: Vec<Point> = params.iter().map(|t| Point::xy(*t, 0.0)).collect();
        let eye = Point::xy(eye[0], eye[1]);
        prop_assume!(eye.y().abs() > 0.1);
        // central projection from `eye` onto the line through `base` at angle `tilt`
        let base = Point::xy(0.0, 4.0 * eye.y().signum());
        let u = Direction::from_angle(tilt);
        let mut image = Vec::new();
        for p in &pts {
            let v = p - &eye;
            let w = &base - &eye;
            let den = v.x() * u.coords()[1] - v.y() * u.coords()[0];
            prop_assume!(den.abs() > 0.05);
            let s = (w.x() * u.coords()[1] - w.y() * u.coords()[0]) / den;
            image.push(eye.offset(&Direction::new(&v).unwrap(), s * v.norm()));
        }
        let along: Vec<f64> = image.iter().map(|q| u.dot(&(q - &base))).collect();
        let increasing = along.windows(2).all(|w| w[1] - w[0] > 1e-3);
        let decreasing = along.windows(2).all(|w| w[0] - w[1] > 1e-3);
        prop_assume!(increasing || decreasing);
        if decreasing {
            image.reverse();
        }
        let before = cross_ratio(&pts[1], &pts[2], &Chord { tail: pts[0].clone(), head: pts[3].clone() }).unwrap();
        let after = cross_ratio(&image[1], &image[2], &Chord { tail: image[0].clone(), head: image[3].clone() }).unwrap();
        prop_assert!((before - after).abs() <= 1e-9 * before.max(1.0), "{before} vs {after}");
    }

    #[test]
    fn contraction_constant_is_monotone(r in 0.01f64..2.0, big_r in 1.0f64..5.0, dr in 0.0f64..0.5) {
        let d = contraction_constant(r, big_r).unwrap();
        prop_assert!(d > 0.0 && d < 1.0);
        prop_assert!(contraction_constant(r, big_r + dr).unwrap() <= d);
        if r + dr < 2.0 * big_r {
            prop_assert!(contraction_constant(r + dr, big_r).unwrap() >= d);
        }
    }

    #[test]
    fn contraction_lands_in_small_ball(
        body in body_strategy(),
        big_r in 0.5f64..3.0,
        frac in 0.05f64..0.9,
        seed in any::<u64>(),
    ) {
        let o = body.center().clone();
        let r = frac * big_r;
        let mut g = rng(seed);
        let x = sphere_point(&body, &o, g.random_range(0.0..TAU), g.random_range(0.0..=big_r - r)).unwrap();
        let rep = verify_contraction(&body, &o, big_r, &x, r, 40, seed).unwrap();
        prop_assert!(rep.max_violation <= TOL, "violation {}", rep.max_violation);
    }

    #[test]
    fn ray_pairs_separate_monotonically(
        body in body_strategy(),
        seed in any::<u64>(),
        s in 0.0f64..8.0,
        ds in 0.0f64..4.0,
    ) {
        let mut g = rng(seed);
        let o = random_interior(&body, &mut g);
        let r1 = RaySpec::new(&body, &o, &random_direction(&mut g, 2)).unwrap();
        let r2 = RaySpec::new(&body, &o, &random_direction(&mut g, 2)).unwrap();
        let near = distance(&body, &r1.point(s).unwrap(), &r2.point(s).unwrap()).unwrap();
        let far = distance(&body, &r1.point(s + ds).unwrap(), &r2.point(s + ds).unwrap()).unwrap();
        prop_assert!(near <= far + TOL, "{near} > {far}");
    }

    #[test]
    fn equidistant_chord_lines_are_concurrent(
        body in body_strategy(),
        seed in any::<u64>(),
        a in 0.0f64..TAU,
        b in 0.0f64..TAU,
        t in 0.2f64..6.0,
    ) {
        prop_assume!((a - b).sin().abs() > 0.05);
        let o = random_interior(&body, &mut rng(seed));
        let rep = concurrency_defect(
            &body,
            &o,
            &sphere_point(&body, &o, a, t).unwrap(),
            &sphere_point(&body, &o, b, t).unwrap(),
        )
        .unwrap();
        prop_assert!(rep.defect <= 1e-7, "defect {}", rep.defect);
    }

    #[test]
    fn near_pairs_stay_near_along_rays(
        body in body_strategy(),
        seed in any::<u64>(),
        r in 0.01f64..1.0,
        frac in 0.0f64..=1.0,
        k in 1usize..=20,
    ) {
        let o = body.center().clone();
        let mut g = rng(seed);
        let x0 = random_interior(&body, &mut g);
        let y0 = RaySpec::new(&body, &x0, &random_direction(&mut g, 2)).unwrap().point(frac * r).unwrap();
        let (dx, dy) = (distance(&body, &o, &x0).unwrap(), distance(&body, &o, &y0).unwrap());
        let (x, y, far) = if dx <= dy { (x0, y0, dy) } else { (y0, x0, dx) };
        prop_assume!(distance(&body, &o, &x).unwrap() > 0.0);
        let t = far * k as f64 / 20.0;
        let lx = RaySpec::through(&body, &o, &x).unwrap();
        let ly = RaySpec::through(&body, &o, &y).unwrap();
        let d = distance(&body, &lx.point(t).unwrap(), &ly.point(t).unwrap()).unwrap();
        prop_assert!(d <= 2.0 * r + TOL, "{d} > 2r = {}", 2.0 * r);
    }

    #[test]
    fn ball_footprints_stay_within_4r(
        body in body_strategy(),
        level in 1usize..=5,
        theta in 0.0f64..TAU,
        shift in -1.0f64..1.0,
    ) {
        let (big_r, r) = (1.0, 0.2);
        let o = body.center().clone();
        let t = level as f64 * big_r;
        let x = sphere_point(&body, &o, theta, t + shift * r).unwrap();
        let d = footprint_diameter(&body, &o, &x, r, t, 128).unwrap();
        prop_assert!(d <= 4.0 * r + 1e-6, "{d} > 4r");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn arc_decompositions_have_odd_counts(
        body in body_strategy(),
        level in 1usize..=4,
        big_r in 0.5f64..2.0,
        start in 0.0f64..TAU,
    ) {
        let cfg = ArcConfig { n_arc: 128, star_samples: 64, ..ArcConfig::default() };
        let o = body.center().clone();
        let lvl = SphereLevel::new(level, big_r, &o);
        let end = start + PI;
        let cuts = decompose_arc(&body, &lvl, start, end, big_r, &cfg).unwrap();
        prop_assert_eq!(cuts.len() % 2, 0);
        let mut bounds = vec![start];
        bounds.extend(&cuts);
        bounds.push(end);
        prop_assert!(bounds.windows(2).all(|w| w[0] < w[1]));
        let tol = cfg.tol_arc(big_r);
        for w in bounds.windows(2) {
            let a = lvl.point(&body, w[0]).unwrap();
            let pts: Vec<Point> = (0..=16)
                .map(|k| lvl.point(&body, w[0] + (w[1] - w[0]) * k as f64 / 16.0).unwrap())
                .collect();
            let reach = pts.iter().map(|p| distance(&body, &a, p).unwrap()).fold(0.0, f64::max);
            prop_assert!(reach >= big_r - tol, "sub-arc never reaches R: {reach}");
            for p in &pts {
                for q in &pts {
                    prop_assert!(distance(&body, p, q).unwrap() <= 4.0 * big_r + tol);
                }
            }
        }
    }
}
