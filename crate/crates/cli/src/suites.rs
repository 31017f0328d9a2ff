//! The four verification suites. Each returns its checks and the tables to export.

use std::f64::consts::{LN_2, PI};
use std::time::Instant;

use ffhk::geometry::FdOptions;
use ffhk::gmn::{
    chi_e, contour_bessel_identities, cps_solve, darboux_sf, extract_metric, gibbons_hawking_reference, gmn_correction,
    semiflat_twistor_form, twistor_form_from_darboux, twistor_identity_residual, GmnContours, GmnOptions,
    TwistorParameter, JUMP_EXPONENT,
};
use ffhk::holomorphic::{verify_compatibility, volume_density_angles};
use ffhk::local_model::{
    action_angle, gluing_cr_residual, lattice_data, parametrize, period_lattice, verify_symplectic_identity, FiberPoint,
};
use ffhk::ooguri_vafa::{
    connection_residual, embedding_residual, gibbons_hawking_metric, local_invariant, omega0_closedness,
    ov_potential_with, positivity_margin, potential_laplacian, verify_action_angle, OVPoint,
};
use ffhk::scalar_kernels::{regularized_theta_sum, BasePoint, Chart, HarmonicInvariant, ModelParams, RawInvariant};
use ffhk::semiflat::{
    angular_part, gluing_invariance_residual, i_ddbar_potential, lemma52_residuals, semiflat_form,
    semiflat_form_from_definition, semiflat_metric_matrix,
};
use ffhk::{Complex64, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::grid::{angle_points, base_points, fiber_points, modulus_cell, product};
use crate::report::{num, opt, CheckRecord, Comparison, Table};

pub struct Context {
    pub config: RunConfig,
    pub params: ModelParams,
    pub s: HarmonicInvariant,
    pub tol_scale: f64,
}

impl Context {
    pub fn new(config: RunConfig, tol_scale: f64) -> Self {
        Self { params: config.params(), s: config.invariant(), config, tol_scale }
    }

    fn below<T: Sync>(&self, name: &str, tol: f64, items: &[T], f: impl Fn(&T) -> Result<f64> + Sync) -> CheckRecord {
        let (outcomes, secs) = timed(|| items.par_iter().map(&f).collect());
        CheckRecord::aggregate(name, outcomes, Comparison::Below, tol * self.tol_scale, secs)
    }

    fn above<T: Sync>(&self, name: &str, bound: f64, items: &[T], f: impl Fn(&T) -> Result<f64> + Sync) -> CheckRecord {
        let (outcomes, secs) = timed(|| items.par_iter().map(&f).collect());
        CheckRecord::aggregate(name, outcomes, Comparison::Above, bound, secs)
    }
}

pub struct SuiteOutput {
    pub checks: Vec<CheckRecord>,
    pub tables: Vec<Table>,
}

fn timed<R>(f: impl FnOnce() -> R) -> (R, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    y.min(2.0 * PI - y)
}

fn count(flag: bool) -> f64 {
    if flag {
        1.0
    } else {
        0.0
    }
}

// ---------------------------------------------------------------- local model

pub fn check_model(ctx: &Context) -> SuiteOutput {
    let (s, prm) = (&ctx.s, &ctx.params);
    let bases = base_points(&ctx.config.grid);
    let pts = product(&bases, &fiber_points(&ctx.config.grid));
    let mut checks = Vec::new();

    checks.push(ctx.below("model.gluing_harmonicity", 1e-6, &pts, |(c, t)| {
        let (z1, z2) = parametrize(c, t, prm)?;
        gluing_cr_residual(s, z1, z2, 1e-4)
    }));

    // The same gate must reject a non-harmonic perturbation.
    let perturbed = RawInvariant::new(|x, _| x * x);
    checks.push(
        ctx.above("model.nonharmonic_rejected", 1e-2, &pts, |(c, t)| {
            let (z1, z2) = parametrize(c, t, prm)?;
            gluing_cr_residual(&perturbed, z1, z2, 1e-4)
        })
        .note("gate residual for the non-harmonic S = c1^2"),
    );

    checks.push(ctx.below("model.symplectic_identity", 1e-8, &pts, |(c, t)| {
        Ok(verify_symplectic_identity(c, t, s, prm, FdOptions::richardson(2e-3 * c.modulus()))?.residual)
    }));

    checks.push(ctx.below("model.monodromy", 1e-12, &pts, |(c, t)| {
        let p = BasePoint::with_chart(c.c1, c.c2, Chart::Principal);
        let q = BasePoint::with_chart(c.c1, c.c2, Chart::Shifted);
        let k = ((q.arg() - p.arg()) / (2.0 * PI)).round();
        let a = action_angle(&p, t, s, prm)?;
        let b = action_angle(&q, t, s, prm)?;
        Ok([
            (b.z_m - (a.z_m + k * a.z_e)).abs(),
            (b.theta_m - (a.theta_m - k * a.theta_e)).abs() / (1.0 + a.theta_m.abs()),
            (b.theta_e - a.theta_e).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max))
    }));

    checks.push(ctx.below("model.lattice_periodicity", 1e-10, &pts, |(c, t)| {
        let lat = period_lattice(c, s)?;
        let a = action_angle(c, t, s, prm)?;
        let g = action_angle(c, &FiberPoint::new(t.t1 + lat.gen1.0, t.t2 + lat.gen1.1), s, prm)?;
        let h = action_angle(c, &FiberPoint::new(t.t1, t.t2 + 2.0 * PI), s, prm)?;
        Ok([
            (g.theta_e - a.theta_e - 2.0 * PI).abs(),
            wrap(g.theta_m - a.theta_m),
            (h.theta_e - a.theta_e).abs(),
            wrap(h.theta_m - a.theta_m),
        ]
        .into_iter()
        .fold(0.0, f64::max))
    }));

    checks.push(ctx.below("model.holomorphic_compatibility", 1e-6, &bases, |c| {
        Ok(verify_compatibility(s, prm, std::slice::from_ref(c))?.max_residual())
    }));

    checks.push(ctx.below("model.volume_density", 1e-10, &bases, |c| {
        let lam = lattice_data(c, s)?.lambda;
        Ok((volume_density_angles(c, s)? - 2.0 / PI * lam).abs() / lam.abs().max(1.0))
    }));

    checks.push(
        ctx.above("model.lattice_positivity", 0.0, &bases, |c| Ok(lattice_data(c, s)?.lambda))
            .note("value is min of S1 - ln|c|"),
    );

    SuiteOutput { checks, tables: Vec::new() }
}

// ------------------------------------------------------------------ semi-flat

pub fn semiflat(ctx: &Context) -> SuiteOutput {
    let (s, prm) = (&ctx.s, &ctx.params);
    let grid = &ctx.config.grid;
    let bases = base_points(grid);
    let pts = product(&bases, &fiber_points(grid));
    let mut checks = Vec::new();

    // Coefficients grow like 1/lambda^3 near the positivity boundary, so residuals are
    // relative to the largest coefficient and steps shrink with lambda.
    checks.push(
        ctx.below("semiflat.explicit_vs_definition", 1e-8, &pts, |(c, t)| {
            let a = semiflat_form(c, t, s, prm)?;
            let b = semiflat_form_from_definition(c, t, s, prm, FdOptions::richardson(1e-3 * step_scale(c, s)?))?;
            Ok(a.max_diff(&b)? / a.max_abs().max(1.0))
        })
        .note("relative to the largest coefficient"),
    );

    let (lemma, lsecs) = timed(|| pts.par_iter().map(|(c, t)| lemma_residual(c, t, s, prm)).collect::<Vec<_>>());
    checks.push(
        CheckRecord::aggregate(
            "semiflat.lemma_identities",
            lemma.clone(),
            Comparison::Below,
            1e-10 * ctx.tol_scale,
            lsecs,
        )
        .note("relative to the largest coefficient of omega_sf and its square"),
    );

    checks.push(
        ctx.below("semiflat.ddbar_decomposition", 1e-6, &pts, |(c, t)| ddbar_residual(c, t, s, prm))
            .note("Hessian by Richardson-extrapolated differences; relative to the largest coefficient"),
    );

    checks.push(
        ctx.below("semiflat.gluing_invariance", 1e-10, &pts, |(c, t)| {
            Ok(gluing_invariance_residual(c, t, s, prm)? / semiflat_form(c, t, s, prm)?.max_abs().max(1.0))
        })
        .note("relative to the largest coefficient"),
    );

    let (metrics, msecs) = timed(|| {
        pts.par_iter()
            .map(|(c, t)| {
                let lam = lattice_data(c, s)?.lambda;
                let g = semiflat_metric_matrix(c, t, s, prm)?;
                Ok((lam, g))
            })
            .collect::<Vec<Result<_>>>()
    });

    let mismatches = metrics
        .iter()
        .map(|m| m.as_ref().map(|(lam, g)| count(g.sylvester().positive != (*lam > 0.0))).map_err(Clone::clone))
        .collect();
    checks.push(
        CheckRecord::aggregate("semiflat.sylvester_matches_lattice", mismatches, Comparison::Below, 0.5, msecs)
            .note("value counts points where Sylvester disagrees with the sign of S1 - ln|c|"),
    );

    let eig = metrics
        .iter()
        .map(|m| {
            m.as_ref().map(|(_, g)| g.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)).map_err(Clone::clone)
        })
        .collect();
    let boundary = positivity_boundary_note(&pts, &metrics, modulus_cell(grid));
    checks.push(
        CheckRecord::aggregate("semiflat.metric_positivity", eig, Comparison::Above, 0.0, msecs)
            .note("value is the smallest eigenvalue")
            .note(boundary),
    );

    let mut table = Table::new(
        "semiflat.csv",
        &[
            "c1",
            "c2",
            "t1",
            "t2",
            "lambda",
            "minor_1",
            "minor_2",
            "minor_3",
            "minor_4",
            "eig_1",
            "eig_2",
            "eig_3",
            "eig_4",
            "positive",
            "lemma_residual",
        ],
    );
    for (((c, t), m), l) in pts.iter().zip(&metrics).zip(&lemma) {
        let mut row = vec![num(c.c1), num(c.c2), num(t.t1), num(t.t2)];
        match m {
            Ok((lam, g)) => {
                let syl = g.sylvester();
                row.push(num(*lam));
                row.extend(syl.minors.iter().map(|x| num(*x)));
                row.extend(g.eigenvalues().iter().map(|x| num(*x)));
                row.push(syl.positive.to_string());
            }
            Err(_) => row.extend(std::iter::repeat_n(String::new(), 10)),
        }
        row.push(opt(l.as_ref().ok().copied()));
        table.rows.push(row);
    }

    SuiteOutput { checks, tables: vec![table] }
}

/// Length over which the action-angle map changes by O(1): `|c| min(1, lambda)`.
fn step_scale(c: &BasePoint, s: &HarmonicInvariant) -> Result<f64> {
    Ok(c.modulus() * lattice_data(c, s)?.lambda.abs().min(1.0))
}

fn lemma_residual(c: &BasePoint, t: &FiberPoint, s: &HarmonicInvariant, prm: &ModelParams) -> Result<f64> {
    let w = semiflat_form(c, t, s, prm)?;
    let r = lemma52_residuals(&w)?;
    let k = w.max_abs().max(1.0);
    Ok((r.square / (k * k)).max(r.with_omega / k).max(r.with_omega_bar / k))
}

/// `i d dbar phi` against the angular part, extrapolating the Hessian from steps `h` and `h/2`.
fn ddbar_residual(c: &BasePoint, t: &FiberPoint, s: &HarmonicInvariant, prm: &ModelParams) -> Result<f64> {
    let h = 5e-3 * step_scale(c, s)?;
    let a = i_ddbar_potential(c, t, s, prm, h)?;
    let b = i_ddbar_potential(c, t, s, prm, h / 2.0)?;
    let exact = angular_part(c, t, s, prm)?;
    Ok(b.scale_real(4.0 / 3.0).add(&a.scale_real(-1.0 / 3.0))?.max_diff(&exact)? / exact.max_abs().max(1.0))
}

fn positivity_boundary_note(
    pts: &[(BasePoint, FiberPoint)],
    metrics: &[Result<(f64, ffhk::geometry::MetricAtPoint)>],
    cell: f64,
) -> String {
    let mut inner_bad = f64::INFINITY;
    let mut outer_good = 0.0f64;
    let mut positive = 0;
    for ((c, _), m) in pts.iter().zip(metrics) {
        if let Ok((_, g)) = m {
            if g.sylvester().positive {
                positive += 1;
                outer_good = outer_good.max(c.modulus());
            } else {
                inner_bad = inner_bad.min(c.modulus());
            }
        }
    }
    let mut note = format!("positive at {positive} of {} points", pts.len());
    if inner_bad.is_finite() {
        note.push_str(&format!(
            ", first non-positive |c| = {inner_bad:.4}, last positive |c| = {outer_good:.4}, grid cell {cell:.4}"
        ));
    }
    note
}

// --------------------------------------------------------------- Ooguri-Vafa

const AXIS_SAMPLES: usize = 2000;

/// The config invariant is read as the Ooguri-Vafa one; the local model uses its shift.
pub fn ov(ctx: &Context) -> SuiteOutput {
    let (s, prm) = (&ctx.s, &ctx.params);
    let trunc = ctx.config.truncation();
    let grid = &ctx.config.grid;
    let bases = base_points(grid);
    let pts: Vec<OVPoint> = product(&bases, &angle_points(grid))
        .into_iter()
        .map(|(c, (theta_m, theta_e))| OVPoint::new(c.c1, c.c2, theta_e, theta_m))
        .collect();
    let mut checks = Vec::new();

    let (fields, fsecs) = timed(|| pts.par_iter().map(|p| ov_potential_with(p, s, prm, &trunc)).collect::<Vec<_>>());
    let poisson = fields
        .iter()
        .map(|f| {
            let f = f.as_ref().map_err(Clone::clone)?;
            let split = f.v_sf.unwrap_or(f64::NAN) + f.v_inst.unwrap_or(f64::NAN);
            Ok(((f.v - split) / f.v).abs())
        })
        .collect();
    checks.push(
        CheckRecord::aggregate("ov.poisson_resummation", poisson, Comparison::Below, 1e-8 * ctx.tol_scale, fsecs)
            .note("relative difference of lattice sum and zero mode plus instantons"),
    );

    checks.push(ctx.below("ov.theta_sum_closed_form", 1e-10, &[()], |_| {
        Ok((regularized_theta_sum(0.0, 0.5)? - 4.0 * LN_2).abs())
    }));

    checks.push(ctx.below("ov.monopole_equation", 1e-6, &pts, |p| {
        connection_residual(p, s, prm, FdOptions::richardson(1e-3 * p.modulus()))
    }));

    // V ~ 1/|x| near the nut, so the Laplacian is measured against V / |c|^2.
    let fields_ref = &fields;
    let indexed: Vec<usize> = (0..pts.len()).collect();
    checks.push(
        ctx.below("ov.potential_harmonic", 1e-6, &indexed, |&k| {
            let p = &pts[k];
            let v = fields_ref[k].as_ref().map_err(Clone::clone)?.v;
            let lap = potential_laplacian(p, s, prm, FdOptions::richardson(1e-2 * p.modulus()))?;
            Ok((lap * p.modulus().powi(2) / v).abs())
        })
        .note("value is |Laplacian V| |c|^2 / V"),
    );

    checks.push(
        ctx.below("ov.omega0_action_angle", 1e-6, &pts, |p| {
            verify_action_angle(p, s, prm, FdOptions::richardson(1e-4))
        }),
    );

    checks
        .push(ctx.below("ov.omega0_closed", 1e-6, &pts, |p| omega0_closedness(p, s, prm, FdOptions::richardson(1e-3))));

    let s_local = local_invariant(s, prm.r);
    let local_pts = product(&bases, &fiber_points(grid));
    checks.push(
        ctx.below("ov.semiflat_embedding", 1e-10, &local_pts, |(c, t)| embedding_residual(c, t, &s_local, prm))
            .note("local-model invariant is the shifted config invariant"),
    );

    let (metrics, gsecs) = timed(|| pts.par_iter().map(|p| gibbons_hawking_metric(p, s, prm)).collect::<Vec<_>>());
    let nonpositive = metrics
        .iter()
        .map(|m| match m {
            Ok(g) => Ok(count(!g.sylvester().positive)),
            Err(Error::PositivityViolation(_)) => Ok(1.0),
            Err(e) => Err(e.clone()),
        })
        .collect();
    checks.push(
        CheckRecord::aggregate("ov.metric_positivity", nonpositive, Comparison::Below, 0.5, gsecs)
            .note("value counts points where the Gibbons-Hawking metric is not positive"),
    );

    let theta_grid: Vec<f64> = (0..=AXIS_SAMPLES).map(|k| 2.0 * PI * k as f64 / AXIS_SAMPLES as f64).collect();
    let (margin, msecs) = timed(|| positivity_margin(s, &theta_grid));
    let margin_note = match &margin {
        Ok(m) => format!("axis margin {m:.12}; 2 ln 2 = {:.12}", 2.0 * LN_2),
        Err(_) => String::new(),
    };
    checks.push(
        CheckRecord::aggregate("ov.axis_margin", vec![margin.clone()], Comparison::Above, 0.0, msecs).note(margin_note),
    );

    // Push the margin below zero and make sure the metric refuses the axis point.
    let (raised, rsecs) = timed(|| -> Result<f64> {
        let m = margin.clone()?;
        let bad = s.add_linear(-m - 0.5);
        match gibbons_hawking_metric(&OVPoint::new(0.0, 0.0, PI, 0.0), &bad, prm) {
            Err(Error::PositivityViolation(v)) => Ok(v),
            Err(e) => Err(e),
            Ok(_) => Ok(f64::INFINITY),
        }
    });
    checks.push(
        CheckRecord::aggregate("ov.axis_violation_raised", vec![raised], Comparison::Below, 0.0, rsecs)
            .note("value is V at the axis after lowering the margin to -0.5"),
    );

    let mut table = Table::new(
        "ov.csv",
        &[
            "c1",
            "c2",
            "theta_e",
            "theta_m",
            "V",
            "V_sf",
            "V_inst",
            "g_11",
            "g_21",
            "g_22",
            "g_31",
            "g_32",
            "g_33",
            "g_41",
            "g_42",
            "g_43",
            "g_44",
            "poisson_residual",
            "status",
        ],
    );
    for ((p, f), g) in pts.iter().zip(&fields).zip(&metrics) {
        let mut row = vec![num(p.c1), num(p.c2), num(p.theta_e), num(p.theta_m)];
        match f {
            Ok(f) => {
                row.extend([num(f.v), opt(f.v_sf), opt(f.v_inst)]);
            }
            Err(_) => row.extend(std::iter::repeat_n(String::new(), 3)),
        }
        match g {
            Ok(g) => row.extend(g.lower_triangle().iter().map(|x| num(*x))),
            Err(_) => row.extend(std::iter::repeat_n(String::new(), 10)),
        }
        let residual = f.as_ref().ok().and_then(|f| Some(((f.v - (f.v_sf? + f.v_inst?)) / f.v).abs()));
        row.push(opt(residual));
        let status = match (f, g) {
            (Err(e), _) | (_, Err(e)) => format!("error: {e}"),
            (Ok(_), Ok(g)) if g.sylvester().positive => "ok".to_owned(),
            _ => "not positive".to_owned(),
        };
        row.push(status);
        table.rows.push(row);
    }
    // Axis point with regular potential, then the nut itself.
    let axis = ov_potential_with(&OVPoint::new(0.0, 0.0, PI, 0.0), s, prm, &trunc);
    let mut row = vec![num(0.0), num(0.0), num(PI), num(0.0), opt(axis.as_ref().ok().map(|f| f.v))];
    row.extend(std::iter::repeat_n(String::new(), 13));
    row.push("axis".to_owned());
    table.rows.push(row);
    let nut = ov_potential_with(&OVPoint::new(0.0, 0.0, 0.0, 0.0), s, prm, &trunc);
    let mut row = vec![num(0.0), num(0.0), num(0.0), num(0.0)];
    row.extend(std::iter::repeat_n(String::new(), 14));
    row.push(match nut {
        Err(Error::Singular(_)) => "singular".to_owned(),
        Err(e) => format!("error: {e}"),
        Ok(_) => "unexpectedly regular".to_owned(),
    });
    table.rows.push(row);

    SuiteOutput { checks, tables: vec![table] }
}

// ----------------------------------------------------------------------- GMN

struct GmnPoint {
    c: BasePoint,
    theta_m: f64,
    theta_e: f64,
    zeta: TwistorParameter,
}

/// A twistor parameter at least `margin + 0.05` rad away from the BPS rays through `+-c`.
fn off_contour_zeta(g: &mut ChaCha8Rng, c: &BasePoint, margin: f64) -> TwistorParameter {
    loop {
        let phi: f64 = g.gen_range(-PI..PI);
        if phi.sin().abs().asin() > margin + 0.05 {
            let r: f64 = g.gen_range(0.5..2.0);
            return TwistorParameter::polar(r, c.arg() + phi).expect("nonzero modulus");
        }
    }
}

const JUMP_DELTA: f64 = 1e-4;
const JUMP_RADII: [f64; 3] = [0.5, 1.0, 2.0];

/// Config invariant is the local-model one.
pub fn gmn(ctx: &Context) -> SuiteOutput {
    let (s, prm) = (&ctx.s, &ctx.params);
    let opts = ctx.config.gmn_options();
    let grid = &ctx.config.grid;
    let bases = base_points(grid);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.seed);
    let pts: Vec<GmnPoint> = product(&bases, &angle_points(grid))
        .into_iter()
        .map(|(c, (theta_m, theta_e))| {
            let zeta = off_contour_zeta(&mut rng, &c, opts.angular_margin);
            GmnPoint { c, theta_m, theta_e, zeta }
        })
        .collect();
    let mut checks = Vec::new();

    checks.push(ctx.below("gmn.semiflat_two_routes", 1e-9, &pts, |q| {
        let pair = darboux_sf(&q.c, q.theta_m, q.theta_e, s, prm, &q.zeta)?;
        twistor_form_from_darboux(&pair, prm.r)?.max_diff(&semiflat_twistor_form(&q.c, s, prm, &q.zeta)?)
    }));

    checks.push(ctx.below("gmn.bessel_identities", 1e-8, &pts, |q| {
        Ok(contour_bessel_identities(&q.c, q.theta_e, prm, opts.target_tol)?.residual)
    }));

    let (jumps, jsecs) = timed(|| pts.par_iter().map(|q| jump_residuals(q, prm)).collect::<Vec<_>>());
    let cps = jumps.iter().map(|j| j.as_ref().map(|j| j.0).map_err(Clone::clone)).collect();
    checks.push(CheckRecord::aggregate("gmn.cps_jump", cps, Comparison::Below, 1e-5 * ctx.tol_scale, jsecs).note(
        format!(
        "|f(z e^(i d)) - f(z e^(-i d)) - phi(z)| with phi = ln(1 - chi_e), d = {JUMP_DELTA:e}, |z| in {JUMP_RADII:?}"
    ),
    ));
    let factor = jumps.iter().map(|j| j.as_ref().map(|j| j.1).map_err(Clone::clone)).collect();
    checks.push(
        CheckRecord::aggregate("gmn.factor_jump", factor, Comparison::Below, 1e-5 * ctx.tol_scale, jsecs)
            .note(format!("| |ratio| - |(1 - chi_e)^({JUMP_EXPONENT})| |")),
    );

    checks.push(ctx.below("gmn.corrected_two_routes", 1e-6, &pts, |q| {
        twistor_identity_residual(&q.c, q.theta_m, q.theta_e, s, prm, &q.zeta, &opts)
    }));

    checks.push(ctx.below("gmn.chart_independence", 1e-6, &pts, |q| {
        let mut worst = 0.0f64;
        for chart in [Chart::Principal, Chart::Shifted] {
            let c = BasePoint::with_chart(q.c.c1, q.c.c2, chart);
            worst = worst.max(twistor_identity_residual(&c, q.theta_m, q.theta_e, s, prm, &q.zeta, &opts)?);
        }
        Ok(worst)
    }));

    let (extracted, esecs) = timed(|| {
        pts.par_iter()
            .map(|q| -> Result<[f64; 5]> {
                let m = extract_metric(&q.c, q.theta_m, q.theta_e, s, prm, &opts)?;
                let gh = gibbons_hawking_reference(&q.c, q.theta_m, q.theta_e, s, prm)?;
                Ok([
                    m.metric.max_diff(&gh)?,
                    m.fit.residual,
                    m.triple_residual()?,
                    m.triple.j_squared_residual,
                    m.evaluations as f64,
                ])
            })
            .collect::<Vec<_>>()
    });
    let column = |k: usize| -> Vec<Result<f64>> {
        extracted.iter().map(|e| e.as_ref().map(|v| v[k]).map_err(Clone::clone)).collect()
    };
    let nodes: Vec<usize> = extracted.iter().map(|e| e.as_ref().map_or(0, |v| v[4] as usize)).collect();
    let shared = "extraction shared by the four gmn metric checks";
    for (k, name, tol) in [
        (0, "gmn.flagship_metric", 1e-5),
        (1, "gmn.laurent_fit", 1e-6),
        (2, "gmn.hyperkahler_triple", 1e-6),
        (3, "gmn.j_squared", 1e-6),
    ] {
        let mut rec = CheckRecord::aggregate(name, column(k), Comparison::Below, tol * ctx.tol_scale, esecs);
        if k == 0 {
            let total: usize = nodes.iter().sum();
            rec = rec
                .note(format!("compared with the Gibbons-Hawking metric; {total} quadrature nodes in total"))
                .with_nodes(nodes.clone());
        } else {
            rec = rec.note(shared);
        }
        checks.push(rec);
    }

    let mut table = Table::new(
        "gmn.csv",
        &[
            "c1",
            "c2",
            "theta_m",
            "theta_e",
            "zeta_re",
            "zeta_im",
            "metric_residual",
            "fit_residual",
            "triple_residual",
            "j_squared_residual",
            "quadrature_nodes",
            "status",
        ],
    );
    for (q, e) in pts.iter().zip(&extracted) {
        let z = q.zeta.zeta();
        let mut row = vec![num(q.c.c1), num(q.c.c2), num(q.theta_m), num(q.theta_e), num(z.re), num(z.im)];
        match e {
            Ok(v) => {
                row.extend(v[..4].iter().map(|x| num(*x)));
                row.push((v[4] as usize).to_string());
                row.push("ok".to_owned());
            }
            Err(Error::DegenerateLattice(_)) => {
                row.extend(std::iter::repeat_n(String::new(), 5));
                row.push("skipped: degenerate lattice".to_owned());
            }
            Err(err) => {
                row.extend(std::iter::repeat_n(String::new(), 5));
                row.push(format!("error: {err}"));
            }
        }
        table.rows.push(row);
    }

    SuiteOutput { checks, tables: vec![table] }
}

/// Largest CPS jump residual and largest factor jump residual over `JUMP_RADII` on `l+`.
fn jump_residuals(q: &GmnPoint, prm: &ModelParams) -> Result<(f64, f64)> {
    let contours = GmnContours::standard(&q.c, prm)?;
    let (cc, r, theta) = (q.c.c(), prm.r, q.theta_e);
    let phi = move |t: Complex64| (1.0 - chi_e(cc, theta, r, t)).ln();
    let opts = GmnOptions { angular_margin: 0.0, target_tol: 1e-12 };
    let (mut cps, mut factor) = (0.0f64, 0.0f64);
    for rho in JUMP_RADII {
        let on = contours.plus.direction * rho;
        let side = |sgn: f64| on * Complex64::from_polar(1.0, sgn * JUMP_DELTA);
        let f = |sgn: f64| cps_solve(&contours.plus, &phi, side(sgn), 1e-13).map(|v| v.value);
        cps = cps.max((f(1.0)? - f(-1.0)? - phi(on)).norm());
        let corr =
            |sgn: f64| gmn_correction(&q.c, theta, prm, &TwistorParameter::new(side(sgn))?, &opts).map(|v| v.factor);
        let ratio = corr(1.0)? / corr(-1.0)?;
        let predicted = (1.0 - chi_e(cc, theta, r, on)).powf(JUMP_EXPONENT);
        factor = factor.max((ratio.norm() - predicted.norm()).abs());
    }
    Ok((cps, factor))
}
