use std::f64::consts::PI;

use ffhk::local_model::FiberPoint;
use ffhk::scalar_kernels::BasePoint;

use crate::config::GridConfig;

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn lerp(range: [f64; 2], t: f64) -> f64 {
    range[0] + (range[1] - range[0]) * t
}

fn unit(k: usize, n: usize) -> f64 {
    if n == 1 {
        0.0
    } else {
        k as f64 / (n - 1) as f64
    }
}

/// `n_c` base points on a spiral: moduli increase linearly, arguments are spread by a golden-ratio
/// stride so neighbouring moduli do not share a direction.
pub fn base_points(g: &GridConfig) -> Vec<BasePoint> {
    (0..g.n_c)
        .map(|k| {
            let r = lerp(g.c_modulus_range, unit(k, g.n_c));
            let a = lerp(g.c_arg_range, (0.5 + k as f64 * GOLDEN).fract());
            BasePoint::polar(r, a)
        })
        .collect()
}

/// Spacing between consecutive moduli.
pub fn modulus_cell(g: &GridConfig) -> f64 {
    let [lo, hi] = g.c_modulus_range;
    if g.n_c > 1 {
        (hi - lo) / (g.n_c - 1) as f64
    } else {
        0.0
    }
}

/// Fibre samples in `(t1, t2)`: `t1` in `[-1, 1]`, `t2` in `[-pi, pi]`.
pub fn fiber_points(g: &GridConfig) -> Vec<FiberPoint> {
    let n = g.fiber_samples;
    (0..n)
        .map(|k| {
            let u = (k as f64 + 0.5) / n as f64;
            FiberPoint::new(2.0 * u - 1.0, 2.0 * PI * (0.25 + k as f64 * GOLDEN).fract() - PI)
        })
        .collect()
}

/// Fibre samples in angle coordinates `(theta_m, theta_e)`.
pub fn angle_points(g: &GridConfig) -> Vec<(f64, f64)> {
    let n = g.fiber_samples;
    (0..n)
        .map(|k| {
            let theta_e = 2.0 * PI * (k as f64 + 0.5) / n as f64 - PI;
            let theta_m = 2.0 * PI * (0.25 + k as f64 * GOLDEN).fract() - PI;
            (theta_m, theta_e)
        })
        .collect()
}

pub fn product<A: Clone, B: Clone>(a: &[A], b: &[B]) -> Vec<(A, B)> {
    a.iter().flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone()))).collect()
}
