//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::{LN_2, PI};
use std::time::Instant;

use ffhk::geometry::FdOptions;
use ffhk::gmn::{
    chi_e, contour_bessel_identities, cps_solve, extract_metric, gibbons_hawking_reference, gmn_correction,
    twistor_identity_residual, GmnContours, GmnOptions, TwistorParameter, JUMP_EXPONENT,
};
use ffhk::local_model::{gluing_cr_residual, verify_symplectic_identity, FiberPoint};
use ffhk::ooguri_vafa::{
    connection_residual, gibbons_hawking_metric, ov_potential, positivity_margin, verify_action_angle, OVPoint,
};
use ffhk::scalar_kernels::{regularized_theta_sum, BasePoint, HarmonicInvariant, ModelParams, RawInvariant};
use ffhk::semiflat::{semiflat_metric_matrix, verify_lemma52};
use ffhk::{Complex64, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    residual: f64,
    tol: f64,
    ok: bool,
    note: String,
}

impl Outcome {
    fn below(residual: f64, tol: f64) -> Self {
        Self { residual, tol, ok: residual < tol, note: String::new() }
    }

    fn and(mut self, ok: bool, note: impl Into<String>) -> Self {
        self.ok &= ok;
        self.note = note.into();
        self
    }
}

fn criterion(n: usize, name: &str, limit: Option<f64>, f: impl FnOnce() -> Result<Outcome>) -> bool {
    let start = Instant::now();
    let out = f();
    let secs = start.elapsed().as_secs_f64();
    let in_time = limit.is_none_or(|l| secs < l);
    let limit_txt = limit.map_or(String::new(), |l| format!(" (limit {l} s)"));
    match out {
        Ok(o) => {
            let pass = o.ok && in_time;
            let tag = if pass { "PASS" } else { "FAIL" };
            let note = if o.note.is_empty() { String::new() } else { format!("  [{}]", o.note) };
            println!(
                "[{tag}] {n:>2}. {name}: residual {:.3e}, tol {:.1e}, {secs:.2} s{limit_txt}{note}",
                o.residual, o.tol
            );
            pass
        }
        Err(e) => {
            println!("[FAIL] {n:>2}. {name}: error {e}, {secs:.2} s{limit_txt}");
            false
        }
    }
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(20240601)
}

fn cubic(radius: f64) -> HarmonicInvariant {
    HarmonicInvariant::from_pairs(&[(0.1, 0.0), (0.0, 0.0), (0.05, 0.0)], radius).unwrap()
}

fn prm(r: f64) -> ModelParams {
    ModelParams::new(r, 0.5).unwrap()
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| a + (b - a) * k as f64 / (n - 1) as f64)
}

fn random_base(g: &mut ChaCha8Rng, lo: f64, hi: f64) -> BasePoint {
    BasePoint::polar(g.gen_range(lo..hi), g.gen_range(-PI..PI))
}

fn action_angle_grid() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for s in [HarmonicInvariant::zero(1.0), cubic(1.0)] {
        for r in linspace(0.02, 0.45, 20) {
            for j in 0..20 {
                let base = BasePoint::polar(r, -PI + (j as f64 + 0.5) * PI / 10.0);
                for k in 0..10 {
                    let t = FiberPoint::new(-1.0 + 2.0 * k as f64 / 9.0, 0.7 * k as f64 - 3.0);
                    let opts = FdOptions::richardson(2e-3 * r);
                    worst = worst.max(verify_symplectic_identity(&base, &t, &s, &prm(1.0), opts)?.residual);
                }
            }
        }
    }
    Ok(Outcome::below(worst, 1e-8))
}

fn gluing_gate() -> Result<Outcome> {
    let pts = [
        (Complex64::new(0.4, 0.3), Complex64::new(0.5, -0.2)),
        (Complex64::new(-0.6, 0.1), Complex64::new(0.2, 0.5)),
        (Complex64::new(0.1, -0.7), Complex64::new(-0.3, -0.3)),
    ];
    let harmonic = [cubic(1.0), HarmonicInvariant::from_pairs(&[(0.2, -0.1), (0.3, 0.4), (0.0, 0.1)], 1.0)?];
    let square = RawInvariant::new(|x, _| x * x);
    let (mut worst, mut weakest) = (0.0f64, f64::INFINITY);
    for (z1, z2) in pts {
        for s in &harmonic {
            worst = worst.max(gluing_cr_residual(s, z1, z2, 1e-4)?);
        }
        weakest = weakest.min(gluing_cr_residual(&square, z1, z2, 1e-4)?);
    }
    Ok(Outcome::below(worst, 1e-6).and(weakest >= 1e-2, format!("S = c1^2 gives {weakest:.3e} >= 1e-2")))
}

fn lemma_identities() -> Result<Outcome> {
    let mut g = rng();
    let s = cubic(1.0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let base = random_base(&mut g, 0.02, 0.45);
        let t = FiberPoint::new(g.gen_range(-2.0..2.0), g.gen_range(-5.0..5.0));
        worst = worst.max(verify_lemma52(&base, &t, &s, &prm(g.gen_range(0.5..2.0)))?.max());
    }
    Ok(Outcome::below(worst, 1e-10))
}

fn positivity_boundary() -> Result<Outcome> {
    let (n, eps) = (200, 0.5);
    let cell = eps / n as f64;
    let mut worst = 0.0f64;
    let mut monotone = true;
    for a in [-1.0f64, -2.0] {
        let s = HarmonicInvariant::linear(a, 1.0);
        let flags: Vec<bool> = (0..n)
            .map(|k| {
                let base = BasePoint::polar((k as f64 + 0.5) * cell, 0.9);
                semiflat_metric_matrix(&base, &FiberPoint::new(0.4, -0.3), &s, &prm(1.0))
                    .map(|g| g.sylvester().positive)
            })
            .collect::<Result<_>>()?;
        let first_bad = flags.iter().position(|p| !p).unwrap_or(n);
        monotone &= flags[first_bad..].iter().all(|p| !p);
        let boundary = first_bad as f64 * cell;
        worst = worst.max((boundary - a.exp()).abs());
    }
    Ok(Outcome::below(worst, cell).and(monotone, "positive set is a disc"))
}

fn poisson_grid() -> Result<Outcome> {
    let s = cubic(100.0);
    let mut worst = 0.0f64;
    for (i, rc) in linspace(0.05, 3.0, 10).enumerate() {
        for th in linspace(-PI, PI, 10) {
            for r in [0.5, 1.0, 2.0, 4.0, 8.0] {
                let arg = 0.37 + 1.3 * i as f64;
                let p = OVPoint::new(rc / r * arg.cos(), rc / r * arg.sin(), th, 0.0);
                let f = ov_potential(&p, &s, &prm(r))?;
                let split = f.v_sf.unwrap() + f.v_inst.unwrap();
                worst = worst.max(((f.v - split) / f.v).abs());
            }
        }
    }
    Ok(Outcome::below(worst, 1e-8))
}

fn closed_form() -> Result<Outcome> {
    Ok(Outcome::below((regularized_theta_sum(0.0, 0.5)? - 4.0 * LN_2).abs(), 1e-10))
}

fn random_ov_point(g: &mut ChaCha8Rng) -> (OVPoint, f64) {
    let base = random_base(g, 0.05, 0.45);
    let p = OVPoint::new(base.c1, base.c2, g.gen_range(-PI..PI), g.gen_range(-PI..PI));
    (p, g.gen_range(0.5..2.0))
}

fn monopole() -> Result<Outcome> {
    let mut g = rng();
    let s = cubic(1.0);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (p, r) = random_ov_point(&mut g);
        worst = worst.max(connection_residual(&p, &s, &prm(r), FdOptions::richardson(1e-3))?);
    }
    Ok(Outcome::below(worst, 1e-6))
}

fn ov_action_angle() -> Result<Outcome> {
    let mut g = rng();
    let mut worst = 0.0f64;
    for k in 0..50 {
        let s = if k % 2 == 0 { HarmonicInvariant::zero(1.0) } else { cubic(1.0) };
        let (p, r) = random_ov_point(&mut g);
        worst = worst.max(verify_action_angle(&p, &s, &prm(r), FdOptions::richardson(1e-4))?);
    }
    Ok(Outcome::below(worst, 1e-6))
}

fn bessel_grid() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for x in linspace(0.1, 2.0, 5) {
        for th in linspace(-3.0, 3.0, 5) {
            for r in [0.5, 1.0, 2.0, 4.0] {
                let c = BasePoint::polar(x / r, 0.7);
                worst = worst.max(contour_bessel_identities(&c, th, &prm(r), 1e-12)?.residual);
            }
        }
    }
    Ok(Outcome::below(worst, 1e-8))
}

fn invariant_for(k: usize) -> HarmonicInvariant {
    if k.is_multiple_of(2) {
        HarmonicInvariant::zero(1.0)
    } else {
        HarmonicInvariant::linear(0.1, 1.0)
    }
}

fn off_contour_zeta(g: &mut ChaCha8Rng, c: &BasePoint, margin: f64) -> TwistorParameter {
    let a = c.arg();
    loop {
        let phi: f64 = g.gen_range(-PI..PI);
        // angular distance to the rays through +c and -c
        let d = phi.sin().abs().asin();
        if d > margin {
            return TwistorParameter::polar(g.gen_range(0.5..2.0), a + phi).unwrap();
        }
    }
}

fn full_identity() -> Result<Outcome> {
    let mut g = rng();
    let opts = GmnOptions::default();
    let mut worst = 0.0f64;
    for k in 0..20 {
        let r = [0.5, 1.0, 2.0][k % 3];
        let c = random_base(&mut g, 0.1, 0.45);
        let z = off_contour_zeta(&mut g, &c, opts.angular_margin + 0.05);
        let (th_m, th_e) = (g.gen_range(-PI..PI), g.gen_range(-PI..PI));
        worst = worst.max(twistor_identity_residual(&c, th_m, th_e, &invariant_for(k), &prm(r), &z, &opts)?);
    }
    Ok(Outcome::below(worst, 1e-6))
}

fn jump_property() -> Result<Outcome> {
    let c = BasePoint::new(0.4, 0.0);
    let (params, theta, delta) = (prm(1.0), 0.7, 1e-4);
    let contours = GmnContours::standard(&c, &params)?;
    let cc = c.c();
    let phi = move |t: Complex64| (1.0 - chi_e(cc, theta, params.r, t)).ln();
    let opts = GmnOptions { angular_margin: 0.0, target_tol: 1e-12 };
    let (mut cps, mut factor) = (0.0f64, 0.0f64);
    for rho in [0.5, 1.0, 2.0] {
        let on = contours.plus.direction * rho;
        let side = |sgn: f64| on * Complex64::from_polar(1.0, sgn * delta);
        let f = |sgn: f64| cps_solve(&contours.plus, &phi, side(sgn), 1e-13).map(|v| v.value);
        cps = cps.max((f(1.0)? - f(-1.0)? - phi(on)).norm());

        let corr =
            |sgn: f64| gmn_correction(&c, theta, &params, &TwistorParameter::new(side(sgn))?, &opts).map(|v| v.factor);
        let ratio = corr(1.0)? / corr(-1.0)?;
        let predicted = (1.0 - chi_e(cc, theta, params.r, on)).powf(JUMP_EXPONENT);
        factor = factor.max((ratio.norm() - predicted.norm()).abs());
    }
    Ok(Outcome::below(cps.max(factor), 1e-5)
        .and(true, format!("cps jump {cps:.3e}, factor jump {factor:.3e}, exponent {JUMP_EXPONENT}")))
}

struct Flagship {
    metric: f64,
    fit: f64,
    triple: f64,
    j_squared: f64,
}

fn flagship_points() -> Vec<(f64, HarmonicInvariant, BasePoint, f64, f64)> {
    let mut g = rng();
    (0..10)
        .map(|k| {
            let c = random_base(&mut g, 0.1, 0.45);
            ([0.5, 1.0, 2.0][k % 3], invariant_for(k), c, g.gen_range(-PI..PI), g.gen_range(-PI..PI))
        })
        .collect()
}

fn flagship() -> Result<Flagship> {
    let opts = GmnOptions::default();
    let mut out = Flagship { metric: 0.0, fit: 0.0, triple: 0.0, j_squared: 0.0 };
    for (r, s, c, th_m, th_e) in flagship_points() {
        let m = extract_metric(&c, th_m, th_e, &s, &prm(r), &opts)?;
        let gh = gibbons_hawking_reference(&c, th_m, th_e, &s, &prm(r))?;
        out.metric = out.metric.max(m.metric.max_diff(&gh)?);
        out.fit = out.fit.max(m.fit.residual);
        out.triple = out.triple.max(m.triple_residual()?);
        out.j_squared = out.j_squared.max(m.triple.j_squared_residual);
    }
    Ok(out)
}

fn axis_positivity() -> Result<Outcome> {
    let grid: Vec<f64> = (0..=2000).map(|k| 2.0 * PI * k as f64 / 2000.0).collect();
    let margin = positivity_margin(&HarmonicInvariant::zero(1.0), &grid)?;
    let err =
        gibbons_hawking_metric(&OVPoint::new(0.0, 0.0, PI, 0.0), &HarmonicInvariant::linear(-2.0, 1.0), &prm(1.0));
    let raised = matches!(err, Err(Error::PositivityViolation(_)));
    Ok(Outcome::below((margin - 2.0 * LN_2).abs(), 1e-6)
        .and(raised, format!("margin {margin:.12}; S = -2 c1 on the axis raises: {raised}")))
}

fn main() {
    let mut all = true;
    all &= criterion(1, "action-angle identity on 20x20x10 grid", Some(5.0), action_angle_grid);
    all &= criterion(2, "gluing Cauchy-Riemann gate", Some(1.0), gluing_gate);
    all &= criterion(3, "semi-flat wedge identities at 100 points", Some(1.0), lemma_identities);
    all &= criterion(4, "positivity boundary on radial scan", Some(1.0), positivity_boundary);
    all &= criterion(5, "Poisson resummation on 10x10x5 grid", Some(5.0), poisson_grid);
    all &= criterion(6, "regularized sum at tau = 1/2", None, closed_form);
    all &= criterion(7, "dA = *dV at 50 points", Some(2.0), monopole);
    all &= criterion(8, "omega_0 in action-angle form at 50 points", Some(5.0), ov_action_angle);
    all &= criterion(9, "Bessel contour identities on 5x5x4 grid", Some(30.0), bessel_grid);
    all &= criterion(10, "corrected twistor family at 20 samples", Some(60.0), full_identity);
    all &= criterion(11, "jump across l+ at delta = 1e-4", Some(10.0), jump_property);

    let start = Instant::now();
    let flag = flagship();
    let secs = start.elapsed().as_secs_f64();
    all &= criterion(12, "extracted metric = 2 pi g_GH at 10 points", None, || {
        let f = flag.as_ref().map_err(Clone::clone)?;
        let ok = f.fit < 1e-6 && secs < 120.0;
        Ok(Outcome::below(f.metric, 1e-5)
            .and(ok, format!("Laurent fit {:.3e} < 1e-6, {secs:.2} s (limit 120 s)", f.fit)))
    });
    all &= criterion(13, "hyperkahler triple at the same points", None, || {
        let f = flag.as_ref().map_err(Clone::clone)?;
        Ok(Outcome::below(f.triple, 1e-6).and(f.j_squared < 1e-6, format!("J^2 + Id {:.3e} < 1e-6", f.j_squared)))
    });
    all &= criterion(14, "axis positivity margin", None, axis_positivity);

    println!("{}", if all { "all criteria passed" } else { "some criteria failed" });
    if !all {
        std::process::exit(1);
    }
}
