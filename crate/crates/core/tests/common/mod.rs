//! Independent numerical oracles shared by the integration tests.
//!
//! Nothing here reuses the crate's own quadrature or closed forms: integrals
//! go through the double-exponential (tanh–sinh) rule of the `quadrature`
//! crate, and principal values use singularity subtraction.

#![allow(dead_code)]

use std::f64::consts::PI;

use sgcrack_core::problem::reference_case;
use sgcrack_core::Params;

/// Absolute tolerance requested from the adaptive rule.
pub const QUAD_TOL: f64 = 1e-14;

/// `∫_a^b f` by tanh–sinh quadrature (robust to endpoint singularities).
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    quadrature::double_exponential::integrate(f, a, b, QUAD_TOL).integral
}

/// `∫_a^b f`, split at interior breakpoints (kinks, log singularities).
pub fn integrate_split(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64]) -> f64 {
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.windows(2).map(|p| integrate(&f, p[0], p[1])).sum()
}

/// `(1/π) p.v.∫_{-1}^{1} f(τ)/(τ - t) dτ` by subtracting `f(t)`:
/// `∫ (f(τ) - f(t))/(τ - t) dτ + f(t) ln((1 - t)/(1 + t))`.
pub fn principal_value(f: impl Fn(f64) -> f64, t: f64) -> f64 {
    principal_value_split(f, t, &[])
}

/// [`principal_value`] with additional breakpoints where `f` is not smooth.
pub fn principal_value_split(f: impl Fn(f64) -> f64, t: f64, breaks: &[f64]) -> f64 {
    let ft = f(t);
    let mut all = vec![t];
    all.extend_from_slice(breaks);
    let regular = integrate_split(|x| if x == t { 0.0 } else { (f(x) - ft) / (x - t) }, -1.0, 1.0, &all);
    (regular + ft * ((1.0 - t) / (1.0 + t)).ln()) / PI
}

/// `(1/π) p.v.∫_{-1}^{1} f(τ) / (sqrt(1-τ²) (τ - x)) dτ` for smooth `f`,
/// evaluated in the angle variable `τ = cos θ` with the singular factor
/// `1/(θ - θ₀)` subtracted.
pub fn principal_value_weighted(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let th0 = x.acos();
    // cos θ - cos θ₀ in product form keeps full relative precision near θ₀
    let g = |th: f64| f(th.cos()) * (th - th0) / (-2.0 * ((th + th0) / 2.0).sin() * ((th - th0) / 2.0).sin());
    let g0 = -f(x) / th0.sin();
    let regular = integrate_split(
        |th| if th == th0 { 0.0 } else { (g(th) - g0) / (th - th0) },
        0.0,
        PI,
        &[th0],
    );
    (regular + g0 * ((PI - th0) / th0).ln()) / PI
}

/// Central finite difference of order `k` (1, 2 or 3) with step `h`.
pub fn finite_difference(f: impl Fn(f64) -> f64, x: f64, h: f64, k: usize) -> f64 {
    match k {
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        3 => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h),
        _ => panic!("unsupported derivative order {k}"),
    }
}

/// `n` equispaced points on `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Chebyshev–Lobatto points on `[-1, 1]`, increasing, with exact endpoints.
pub fn lobatto(n: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..n).map(|i| -(PI * i as f64 / (n - 1) as f64).cos()).collect();
    g[0] = -1.0;
    g[n - 1] = 1.0;
    g
}

/// The benchmark parameters with `γ₄ = γ₃`.
pub fn benchmark() -> Params {
    reference_case(1.0).expect("benchmark parameters are valid")
}

/// Relative difference `|a - b| / max(|b|, floor)`.
pub fn rel(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}
