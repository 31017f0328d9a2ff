use std::f64::consts::PI;

use ffhk::geometry::{exterior_derivative_fd, FdOptions};
use ffhk::holomorphic::*;
use ffhk::local_model::{action_coordinates, canonical_form, lattice_data};
use ffhk::scalar_kernels::{BasePoint, HarmonicInvariant, ModelParams};
use ffhk::Complex64;
use proptest::prelude::*;

fn prm() -> ModelParams {
    ModelParams::default()
}

fn annulus(r0: f64, r1: f64) -> Vec<BasePoint> {
    let mut out = Vec::new();
    for i in 0..4 {
        let r = r0 + (r1 - r0) * i as f64 / 3.0;
        for k in 0..8 {
            out.push(BasePoint::polar(r, -PI + 0.1 + k as f64 * PI / 4.0));
        }
    }
    out
}

#[test]
fn charges_at_one() {
    let z =
        central_charges(&BasePoint::new(1.0, 0.0), &HarmonicInvariant::zero(2.0), &ModelParams::new(1.0, 2.0).unwrap())
            .unwrap();
    assert!((z.z_m - 1.0 / (2.0 * PI)).norm() < 1e-16);
    assert_eq!(z.z_e, Complex64::new(0.0, -1.0));
}

#[test]
fn charges_reject_origin() {
    assert!(central_charges(&BasePoint::new(0.0, 0.0), &HarmonicInvariant::zero(1.0), &prm()).is_err());
}

#[test]
fn real_part_is_the_action() {
    let s = HarmonicInvariant::from_pairs(&[(0.2, -0.3), (0.05, 0.1), (0.0, 0.4)], 1.0).unwrap();
    for k in 0..20 {
        let base = BasePoint::polar(0.02 + 0.023 * k as f64, -3.0 + 0.31 * k as f64);
        let z = central_charges(&base, &s, &prm()).unwrap();
        let (z_m, z_e) = action_coordinates(&base, &s).unwrap();
        assert!((z.z_m.re - z_m).abs() < 1e-12);
        assert!((z.z_e.re - z_e).abs() < 1e-15);
        assert_eq!(z.z_e, Complex64::new(0.0, -1.0) * base.c());
    }
}

#[test]
fn form_in_flow_frame() {
    let om = holomorphic_form();
    assert_eq!(om.wedge(&om).unwrap().max_abs(), 0.0);
    assert_eq!(om.re(), canonical_form());
    let vol = om.wedge(&om.conj()).unwrap().volume_coefficient();
    assert_eq!(vol, Complex64::new(-4.0, 0.0));
}

#[test]
fn volume_density_in_angle_frame() {
    let s = HarmonicInvariant::from_pairs(&[(0.1, 0.0), (0.0, 0.0), (0.05, 0.0)], 1.0).unwrap();
    for base in annulus(0.05, 0.45) {
        let lam = lattice_data(&base, &s).unwrap().lambda;
        let v = volume_density_angles(&base, &s).unwrap();
        assert!((v - 2.0 / PI * lam).abs() < 1e-12 * lam.abs().max(1.0));
    }
}

#[test]
fn closed_in_angle_frame() {
    let s = HarmonicInvariant::from_pairs(&[(0.3, 0.1), (-0.2, 0.0), (0.0, 0.15)], 1.0).unwrap();
    for (c1, c2) in [(0.2, 0.1), (-0.3, 0.05), (0.1, -0.4)] {
        let field = |y: &[f64; 4]| holomorphic_form_angles(&BasePoint::new(y[0], y[1]), &s);
        let d = exterior_derivative_fd(field, &[c1, c2, 0.4, 1.0], FdOptions::richardson(1e-4)).unwrap();
        assert!(d.max_abs() < 1e-8, "{}", d.max_abs());
    }
}

#[test]
fn compatibility_for_zero_invariant() {
    let rep = verify_compatibility(&HarmonicInvariant::zero(1.0), &prm(), &annulus(0.1, 0.4)).unwrap();
    assert!(rep.max_residual() < 1e-8, "{rep:?}");
    assert!((rep.positivity_margin + 0.4f64.ln()).abs() < 1e-14);
    assert!(rep.laplacian_z_e < 1e-8, "{}", rep.laplacian_z_e);
}

#[test]
fn compatibility_flags_negative_margin() {
    let rep = verify_compatibility(&HarmonicInvariant::linear(-3.0, 1.0), &prm(), &annulus(0.1, 0.4)).unwrap();
    assert!(rep.max_residual() < 1e-8);
    assert!((rep.positivity_margin - (-3.0 - 0.4f64.ln())).abs() < 1e-14);
    assert!(rep.positivity_margin < 0.0);
}

#[test]
fn positivity_follows_the_lattice() {
    // S = a c1 with a = ln 0.3: the circle |c| = 0.3 separates the two signs.
    let s = HarmonicInvariant::linear(0.3f64.ln(), 1.0);
    for (r, sign) in [(0.25, 1.0), (0.29, 1.0), (0.31, -1.0), (0.4, -1.0)] {
        let v = volume_density_angles(&BasePoint::polar(r, 0.7), &s).unwrap();
        assert_eq!(v.signum(), sign, "r = {r}");
    }
}

proptest! {
    #[test]
    fn charges_are_holomorphic(r in 0.05..0.45f64, a in -3.0..3.0f64) {
        let s = HarmonicInvariant::from_pairs(&[(0.1, 0.2), (0.3, 0.0), (0.0, -0.1)], 1.0).unwrap();
        let rep = verify_compatibility(&s, &prm(), &[BasePoint::polar(r, a)]).unwrap();
        prop_assert!(rep.holomorphy < 1e-7);
        prop_assert!(rep.laplacian_z_m < 1e-6);
        prop_assert!(rep.omega_wedge_omega == 0.0);
    }
}
