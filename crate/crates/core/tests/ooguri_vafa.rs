use std::f64::consts::{LN_2, PI};

use ffhk::geometry::FdOptions;
use ffhk::local_model::FiberPoint;
use ffhk::ooguri_vafa::*;
use ffhk::scalar_kernels::{BasePoint, HarmonicInvariant, ModelParams, Truncation};
use ffhk::Error;

fn params(r: f64) -> ModelParams {
    ModelParams::new(r, 0.5).unwrap()
}

fn linear(a: f64) -> HarmonicInvariant {
    HarmonicInvariant::linear(a, 1.0)
}

fn cubic() -> HarmonicInvariant {
    HarmonicInvariant::from_pairs(&[(0.1, 0.0), (0.0, 0.0), (0.05, 0.0)], 1.0).unwrap()
}

#[test]
fn axis_value_is_ln2_over_pi() {
    let p = OVPoint::new(0.0, 0.0, PI, 0.0);
    let f = ov_potential(&p, &HarmonicInvariant::zero(1.0), &params(1.0)).unwrap();
    assert!((f.v - LN_2 / PI).abs() < 1e-12);
    assert!(f.v_sf.is_none() && f.connection.is_none());
}

#[test]
fn poisson_split_matches_lattice_sum() {
    let s = cubic();
    for r in [0.5, 1.0, 2.0] {
        let prm = params(r);
        for rc in [0.05, 0.4, 1.1, 3.0] {
            for th in [0.0, 1.0, 2.5, -2.0] {
                let p = OVPoint::new(0.6 * rc / r, 0.8 * rc / r, th, 0.0);
                if p.c1.hypot(p.c2) >= 1.0 {
                    continue;
                }
                let f = ov_potential(&p, &s, &prm).unwrap();
                let split = f.v_sf.unwrap() + f.v_inst.unwrap();
                assert!(((f.v - split) / f.v).abs() < 1e-10, "R={r} R|c|={rc} th={th}");
            }
        }
    }
}

#[test]
fn sigma_derivative_is_instanton_potential() {
    let prm = params(1.3);
    let tr = Truncation::default();
    let p = OVPoint::new(0.1, -0.05, 0.7, 0.0);
    let h = 1e-5;
    let sp = sigma_correction(&OVPoint { theta_e: p.theta_e + h, ..p }, &prm, &tr).unwrap();
    let sm = sigma_correction(&OVPoint { theta_e: p.theta_e - h, ..p }, &prm, &tr).unwrap();
    let vi = potential_instanton(&p, &prm, &tr).unwrap();
    assert!(((sp - sm) / (2.0 * h) - vi / (prm.r * prm.r)).abs() < 1e-8);
}

#[test]
fn connection_is_monopole() {
    let s = cubic();
    for (r, c1, c2, th) in [(1.0, 0.2, 0.1, 0.5), (0.5, -0.3, 0.2, 2.0), (2.0, 0.05, -0.1, -1.0)] {
        let res =
            connection_residual(&OVPoint::new(c1, c2, th, 0.3), &s, &params(r), FdOptions::richardson(1e-3)).unwrap();
        assert!(res < 1e-7, "{res}");
    }
}

#[test]
fn potential_is_harmonic() {
    let s = cubic();
    let p = OVPoint::new(0.15, 0.1, 1.2, 0.0);
    let lap = potential_laplacian(&p, &s, &params(1.0), FdOptions::richardson(1e-3)).unwrap();
    assert!(lap.abs() < 1e-6, "{lap}");
}

#[test]
fn omega0_in_action_angle_form() {
    for s in [HarmonicInvariant::zero(1.0), cubic()] {
        for (r, c1, c2, th) in [(1.0, 0.2, 0.1, 0.5), (0.5, -0.3, 0.2, 2.0), (2.0, 0.05, -0.1, -1.0)] {
            let p = OVPoint::new(c1, c2, th, 0.4);
            let res = verify_action_angle(&p, &s, &params(r), FdOptions::richardson(1e-4)).unwrap();
            assert!(res < 1e-7, "{res}");
            let d = omega0_closedness(&p, &s, &params(r), FdOptions::richardson(1e-3)).unwrap();
            assert!(d < 1e-6, "{d}");
        }
    }
}

#[test]
fn semiflat_part_embeds_local_model() {
    let s = cubic();
    for r in [0.5, 1.0, 3.0] {
        let res = embedding_residual(&BasePoint::new(0.2, -0.1), &FiberPoint::new(0.3, 1.1), &s, &params(r)).unwrap();
        assert!(res < 1e-12, "{res}");
    }
}

#[test]
fn invariant_matching_round_trip() {
    let s = cubic();
    let back = matched_invariant(&local_invariant(&s, 1.7), 1.7);
    for (a, b) in s.coefficients().iter().zip(back.coefficients()) {
        assert!((a - b).norm() < 1e-15);
    }
    assert!((zero_mode_shift(1.0) - (LN_2 - 0.577_215_664_901_532_9)).abs() < 1e-15);
}

#[test]
fn gibbons_hawking_is_positive_off_axis() {
    let s = linear(0.1);
    let g = gibbons_hawking_metric(&OVPoint::new(0.1, 0.2, 1.0, 0.0), &s, &params(1.0)).unwrap();
    assert!(g.sylvester().positive);
}

#[test]
fn margin_and_positivity_error() {
    let grid: Vec<f64> = (0..=400).map(|k| 2.0 * PI * k as f64 / 400.0).collect();
    let m = positivity_margin(&HarmonicInvariant::zero(1.0), &grid).unwrap();
    assert!((m - 2.0 * LN_2).abs() < 1e-10);
    let m = positivity_margin(&linear(-2.0), &grid).unwrap();
    assert!(m < 0.0);
    let err = gibbons_hawking_metric(&OVPoint::new(0.0, 0.0, PI, 0.0), &linear(-2.0), &params(1.0));
    assert!(matches!(err, Err(Error::PositivityViolation(_))));
}

#[test]
fn off_axis_quantities_reject_axis() {
    let p = OVPoint::new(0.0, 0.0, 1.0, 0.0);
    let tr = Truncation::default();
    assert!(matches!(sigma_correction(&p, &params(1.0), &tr), Err(Error::Singular(_))));
    assert!(matches!(regularized(&p), Err(Error::Singular(_))));
}

fn regularized(p: &OVPoint) -> ffhk::Result<f64> {
    potential_lattice(&OVPoint { theta_e: 0.0, ..*p }, &HarmonicInvariant::zero(1.0), &params(1.0))
}

#[test]
fn semiflat_regime_matches_semiflat_metric() {
    use ffhk::geometry::Frame;
    use ffhk::local_model::angles_jacobian;
    use ffhk::semiflat::semiflat_metric_matrix;
    // R|c| = 8, so the instanton part is below e^{-50}.
    let s_local = cubic();
    let prm = params(20.0);
    let c = BasePoint::new(0.24, -0.32);
    let t = FiberPoint::new(0.3, 1.1);
    let lam = ffhk::local_model::lattice_data(&c, &s_local).unwrap();
    let theta_e = 2.0 * PI * t.t1 / lam.lambda;
    let theta_gm = t.t2 - t.t1 * lam.mu / lam.lambda;
    let p = OVPoint { c1: c.c1, c2: c.c2, theta_e, theta_m: -theta_gm, chart: c.chart };
    let s_ov = matched_invariant(&s_local, prm.r);
    let full = gibbons_hawking_metric(&p, &s_ov, &prm).unwrap();
    let sf = gibbons_hawking_semiflat(&p, &s_ov, &prm).unwrap();
    assert!(full.max_diff(&sf).unwrap() < 1e-12);
    let jac = ov_from_angles_jacobian() * angles_jacobian(&c, &t, &s_local).unwrap();
    let pulled = full.scale(2.0 * PI).pullback(&jac, Frame::CT);
    let g = semiflat_metric_matrix(&c, &t, &s_local, &prm).unwrap();
    let rel = pulled.max_diff(&g).unwrap() / g.matrix().amax();
    assert!(rel < 1e-6, "{rel}\n{}\n{}", pulled.matrix(), g.matrix());
}
