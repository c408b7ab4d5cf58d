use expcone::analysis::{estimate_gamma, fit_exponent, kl_sequence_point, tightness_sequence, GammaGrid, SequenceKind};
use expcone::faces::{face_frame, project_face};
use expcone::geometry::{distance, project};
use expcone::gfun::{growth_constant, LogGrid};
use expcone::{FaceDescriptor, GFunction, Point3};

fn beta_z(beta: f64) -> Point3 {
    -face_frame(beta).unwrap().z_hat
}

#[test]
fn gamma_beta_one() {
    let grid = GammaGrid::default();
    let b = 2f64.powf(0.25) * 3f64.powf(-0.75);
    let e = estimate_gamma(beta_z(1.0), FaceDescriptor::FBeta { beta: 1.0 }, GFunction::sqrt(), 1.0, &grid).unwrap();
    assert!(e.gamma_hat > 0.0 && e.gamma_hat <= b + 0.01, "{}", e.gamma_hat);
    assert!(!e.vanishing);
    let e = estimate_gamma(beta_z(1.0), FaceDescriptor::FBeta { beta: 1.0 }, GFunction::sqrt(), 2.0, &grid).unwrap();
    assert!(e.gamma_hat > 0.0 && e.gamma_hat <= 3f64.powf(-0.75) + 0.01, "{}", e.gamma_hat);
}

#[test]
fn gamma_inf_lipschitz() {
    let z = Point3::new(0.0, 1.0, 1.0);
    let e = estimate_gamma(z, FaceDescriptor::FInf, GFunction::Identity, 1.0, &GammaGrid::default()).unwrap();
    assert!(e.gamma_hat >= 1.0 / (2.0 * 2f64.sqrt()) - 0.01, "{}", e.gamma_hat);
    assert!(!e.vanishing);
}

#[test]
fn gamma_inf_vanishes() {
    let z = Point3::new(0.0, 0.0, 1.0);
    let e = estimate_gamma(z, FaceDescriptor::FInf, GFunction::sqrt(), 1.0, &GammaGrid::default()).unwrap();
    assert!(e.vanishing, "{e:?}");
    assert!(e.gamma_hat < 1e-3);
}

#[test]
fn gamma_rejects_mismatch_and_bad_eta() {
    let grid = GammaGrid::default();
    assert!(estimate_gamma(Point3::new(0.0, 0.0, 1.0), FaceDescriptor::FNegInf, GFunction::sqrt(), 1.0, &grid).is_err());
    assert!(estimate_gamma(beta_z(0.0), FaceDescriptor::FBeta { beta: 0.0 }, GFunction::sqrt(), 0.0, &grid).is_err());
}

#[test]
fn gamma_nonincreasing_in_eta() {
    let grid = GammaGrid::default();
    for (z, face, g) in [
        (beta_z(0.5), FaceDescriptor::FBeta { beta: 0.5 }, GFunction::sqrt()),
        (Point3::new(0.0, 1.0, 1.0), FaceDescriptor::FInf, GFunction::Identity),
        (Point3::new(0.0, 1.0, 0.0), FaceDescriptor::FNegInf, GFunction::EntropyNegInf),
    ] {
        let mut prev = f64::INFINITY;
        for eta in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let e = estimate_gamma(z, face, g, eta, &grid).unwrap();
            assert!(e.gamma_hat <= prev * (1.0 + 1e-6), "{face} eta={eta}: {} > {prev}", e.gamma_hat);
            prev = e.gamma_hat;
        }
    }
}

#[test]
fn power_above_half_vanishes_on_beta_faces() {
    let e = estimate_gamma(
        beta_z(1.0),
        FaceDescriptor::FBeta { beta: 1.0 },
        GFunction::power(0.75).unwrap(),
        1.0,
        &GammaGrid::default(),
    )
    .unwrap();
    let s =
        estimate_gamma(beta_z(1.0), FaceDescriptor::FBeta { beta: 1.0 }, GFunction::sqrt(), 1.0, &GammaGrid::default())
            .unwrap();
    assert!(e.gamma_hat < 0.25 * s.gamma_hat, "{} vs {}", e.gamma_hat, s.gamma_hat);
    for k in [1e2, 1e4, 1e6] {
        let p = tightness_sequence(SequenceKind::BetaB { beta: 1.0 }, k).unwrap();
        let r = p.rhs_input.powf(0.75) / p.lhs;
        assert!(r < 2.0 * k.powf(-0.25), "{k}: {r}");
    }
}

#[test]
fn fit_beta_half() {
    let f = fit_exponent(beta_z(0.0), FaceDescriptor::FBeta { beta: 0.0 }, 1.0, 40).unwrap();
    assert!((f.slope - 0.5).abs() <= 0.05, "{f:?}");
    assert!(f.r_squared >= 0.98 && f.is_hoelderian());
}

#[test]
fn fit_inf_lipschitz() {
    let f = fit_exponent(Point3::new(0.0, 1.0, 1.0), FaceDescriptor::FInf, 1.0, 40).unwrap();
    assert!((f.slope - 1.0).abs() <= 0.05, "{f:?}");
    assert!(f.is_hoelderian());
}

#[test]
fn fit_inf_non_hoelder() {
    let f = fit_exponent(Point3::new(0.0, 0.0, 1.0), FaceDescriptor::FInf, 1.0, 40).unwrap();
    assert!(!f.is_hoelderian(), "{f:?}");
    assert!((0.0..=1.0).contains(&f.r_squared));
}

#[test]
fn fit_rejects_few_samples() {
    assert!(fit_exponent(beta_z(0.0), FaceDescriptor::FBeta { beta: 0.0 }, 1.0, 9).is_err());
}

#[test]
fn entropic_band() {
    let l = growth_constant(GFunction::EntropyNegInf, &LogGrid::default()).unwrap();
    let mut k = 10.0;
    while k <= 1e6 {
        let p = tightness_sequence(SequenceKind::EntropicA, k).unwrap();
        assert_eq!(p.lhs, k.ln() / k);
        assert!(p.rhs_input <= 1.0 / k);
        let ratio = p.lhs / GFunction::EntropyNegInf.eval(p.rhs_input).unwrap();
        assert!((0.5..=2.0 * l).contains(&ratio), "k={k}: {ratio}");
        k *= 1.7;
    }
}

#[test]
fn entropic_lhs_is_face_distance() {
    for k in [10.0, 1e3] {
        let p = tightness_sequence(SequenceKind::EntropicA, k).unwrap();
        let u = project_face(FaceDescriptor::FNegInf, p.w).unwrap();
        assert!((p.w.dist(u) - p.lhs).abs() < 1e-15);
        assert!((distance(p.w).unwrap() - p.rhs_input).abs() < 1e-15);
    }
}

#[test]
fn log_sequence() {
    for k in [5.0, 20.0, 50.0, 200.0] {
        let p = tightness_sequence(SequenceKind::LogC, k).unwrap();
        assert!(p.rhs_input <= (-k).exp() / k * (1.0 + 1e-12));
    }
    let p = tightness_sequence(SequenceKind::LogC, 50.0).unwrap();
    let r = 50.0 * GFunction::LogInf.eval(p.rhs_input).unwrap();
    assert!((r - 1.0).abs() <= 0.2, "{r}");
    let far = tightness_sequence(SequenceKind::LogC, 2000.0).unwrap();
    assert!(far.ln_rhs_input.is_finite() && far.ln_rhs_input < -2000.0);
}

#[test]
fn beta_sequence_limit() {
    let p = tightness_sequence(SequenceKind::BetaB { beta: 1.0 }, 1e6).unwrap();
    let r = p.rhs_input.sqrt() / p.lhs;
    assert!((r - 3f64.powf(-0.75)).abs() < 1e-3, "{r}");
}

#[test]
fn beta_sequence_matches_closed_form_limit() {
    for beta in [-1.0f64, 0.0, 0.5, 2.0] {
        let fr = face_frame(beta).unwrap();
        let l = fr.p_hat.norm()
            / fr.z_hat.norm().sqrt()
            / (2f64.sqrt() * ((beta - 1.0).exp() + (beta * beta + 1.0) * (1.0 - beta).exp()));
        let p = tightness_sequence(SequenceKind::BetaB { beta }, 1e6).unwrap();
        let r = p.rhs_input.sqrt() / p.lhs;
        assert!((r - l).abs() < 1e-3 * l, "beta={beta}: {r} vs {l}");
    }
}

#[test]
fn beta_sequence_is_in_hyperplane() {
    for beta in [-2.0, 0.0, 1.0, 3.0] {
        let z = beta_z(beta);
        for k in [3.0, 30.0, 3000.0] {
            let p = tightness_sequence(SequenceKind::BetaB { beta }, k).unwrap();
            assert!(z.dot(p.w).abs() < 1e-12 * p.w.norm(), "beta={beta} k={k}");
            let v = Point3::new(1.0 - beta + 1.0 / k, 1.0, (1.0 - beta + 1.0 / k).exp());
            assert!(project(v).unwrap().primal.dist(v) < 1e-12);
        }
    }
}

#[test]
fn kl_quotient_decays() {
    let mut prev = f64::INFINITY;
    for k in [1e1, 1e2, 1e3, 1e4, 1e5] {
        let p = kl_sequence_point(k).unwrap();
        assert!(p.f_value > 0.0 && p.subgrad_norm > 0.0);
        assert!(p.quotient < prev, "k={k}: {} >= {prev}", p.quotient);
        prev = p.quotient;
    }
    assert!(prev < 0.5, "{prev}");
}
