use expcone::geometry::{boundary_point, contains, distance, dual_contains, project, MembershipStatus};
use expcone::Point3;
use proptest::prelude::*;

// Brute-force nearest point of the boundary: grid over (y, r) on the sheet and
// over the y = 0 quadrant, then a shrinking pattern search around the winner.
fn oracle_projection(p: Point3) -> Point3 {
    let sheet = |y: f64, r: f64| boundary_point(y, r).unwrap();
    let mut best = Point3::new(p.x.min(0.0), 0.0, p.z.max(0.0));
    let mut best_d = p.dist(best);
    let mut best_param: Option<(f64, f64)> = None;
    for i in 0..400 {
        let y = 10f64.powf(-6.0 + 8.0 * i as f64 / 399.0);
        for j in 0..400 {
            let r = -20.0 + 40.0 * j as f64 / 399.0;
            let v = sheet(y, r);
            let d = p.dist(v);
            if d < best_d {
                best_d = d;
                best = v;
                best_param = Some((y.ln(), r));
            }
        }
    }
    if let Some((mut ly, mut r)) = best_param {
        let mut step = 0.05;
        while step > 1e-13 {
            let mut improved = false;
            for (dl, dr) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                let v = sheet((ly + dl).exp(), r + dr);
                let d = p.dist(v);
                if d < best_d {
                    best_d = d;
                    best = v;
                    ly += dl;
                    r += dr;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
    }
    best
}

#[test]
fn projection_matches_brute_force_oracle() {
    let points = [
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(1.0, 1.0, 1.0),
        Point3::new(0.5, -0.3, 2.0),
        Point3::new(-1.0, 2.0, 0.1),
        Point3::new(2.0, 1.0, -1.0),
        Point3::new(0.3, 0.1, 0.2),
    ];
    for p in points {
        let got = project(p).unwrap().primal;
        let want = oracle_projection(p);
        assert!(got.dist(want) < 1e-6, "p={p}: got {got}, oracle {want}");
    }
}

#[test]
fn distance_zero_iff_member() {
    for p in [Point3::new(0.0, 1.0, 1.0), Point3::new(-1.0, 0.0, 5.0), Point3::new(0.0, 1.0, 3.0)] {
        assert_eq!(distance(p).unwrap(), 0.0);
        assert!(contains(p, 1e-12).unwrap().is_member());
    }
    let p = Point3::new(1.0, 0.0, 0.0);
    assert!(distance(p).unwrap() > 0.0);
    assert_eq!(contains(p, 1e-12).unwrap().status, MembershipStatus::Outside);
}

fn point_in_ball(radius: f64) -> impl Strategy<Value = Point3> {
    (-radius..radius, -radius..radius, -radius..radius).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn moreau_decomposition(p in point_in_ball(10.0)) {
        let pair = project(p).unwrap();
        let sum = pair.primal + pair.polar;
        prop_assert!((sum - p).max_abs() < 1e-9);
        prop_assert!(pair.primal.dot(pair.polar).abs() < 1e-8);
        prop_assert!((p.norm_sq() - pair.primal.norm_sq() - pair.polar.norm_sq()).abs() < 1e-8);
        prop_assert!(contains(pair.primal, 1e-9).unwrap().is_member());
        prop_assert!(dual_contains(-pair.polar, 1e-9).unwrap().is_member());
    }

    #[test]
    fn idempotent(p in point_in_ball(10.0)) {
        let once = project(p).unwrap().primal;
        let twice = project(once).unwrap().primal;
        prop_assert!((once - twice).max_abs() < 1e-9);
    }

    #[test]
    fn nonexpansive(p in point_in_ball(10.0), q in point_in_ball(10.0)) {
        let a = project(p).unwrap().primal;
        let b = project(q).unwrap().primal;
        prop_assert!(a.dist(b) <= p.dist(q) + 1e-9);
    }

    #[test]
    fn scale_equivariant(p in point_in_ball(10.0), lambda in 0.01f64..100.0) {
        let a = project(p * lambda).unwrap().primal;
        let b = project(p).unwrap().primal * lambda;
        prop_assert!((a - b).max_abs() < 1e-8 * lambda.max(1.0));
    }

    #[test]
    fn boundary_points_classify_boundary(y in 1e-3f64..10.0, r in -30.0f64..2.0) {
        let p = boundary_point(y, r).unwrap();
        prop_assert_eq!(contains(p, 1e-10).unwrap().status, MembershipStatus::Boundary);
    }

    #[test]
    fn distance_is_norm_of_residual(p in point_in_ball(10.0)) {
        let pair = project(p).unwrap();
        prop_assert!((distance(p).unwrap() - p.dist(pair.primal)).abs() < 1e-9);
    }
}
