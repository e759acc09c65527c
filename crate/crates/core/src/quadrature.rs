//! Quadrature rules: Gauss–Legendre panels with adaptive bisection, and
//! Gauss–Chebyshev integration for inverse-square-root endpoint behaviour.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

fn panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let (x, w) = gl16();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    x.iter()
        .zip(w)
        .map(|(&xi, &wi)| f(c + h * xi) * wi)
        .sum::<Complex64>()
        * h
}

fn adapt<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    whole: Complex64,
    tol: f64,
    depth: usize,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let left = panel(f, a, m);
    let right = panel(f, m, b);
    let both = left + right;
    if (both - whole).norm() <= tol || (b - a).abs() < 1e-14 * (a.abs() + b.abs()).max(1.0) {
        return Ok(both);
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "adaptive Gauss-Legendre did not reach {tol:e} on [{a}, {b}]"
        )));
    }
    Ok(adapt(f, a, m, left, 0.5 * tol, depth - 1)? + adapt(f, m, b, right, 0.5 * tol, depth - 1)?)
}

/// Adaptive Gauss–Legendre for a complex-valued integrand on `[a, b]`.
pub fn integrate_c<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    let whole = panel(&f, a, b);
    adapt(&f, a, b, whole, tol, 48)
}

/// Adaptive Gauss–Legendre for a real integrand on `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_c(|x| Complex64::new(f(x), 0.0), a, b, tol).map(|z| z.re)
}

/// `∫_a^b g(t) / sqrt((t-a)(b-t)) dt` for smooth `g`, via `t = c + h cos θ`
/// and the midpoint rule in `θ` (Gauss–Chebyshev), doubling the node count
/// until two successive values agree to `tol` (relative to `max(1,|I|)`).
pub fn chebyshev_weighted<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let rule = |n: usize| -> f64 {
        let dt = std::f64::consts::PI / n as f64;
        (0..n)
            .map(|k| g(c + h * ((k as f64 + 0.5) * dt).cos()))
            .sum::<f64>()
            * dt
    };
    let mut n = 16;
    let mut prev = rule(n);
    while n < 1 << 18 {
        n *= 2;
        let cur = rule(n);
        if (cur - prev).abs() <= tol * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!(
        "Gauss-Chebyshev rule on [{a}, {b}] did not settle to {tol:e}"
    )))
}

/// Complex variant of [`chebyshev_weighted`].
pub fn chebyshev_weighted_c<F: Fn(f64) -> Complex64>(g: F, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    let re = chebyshev_weighted(|t| g(t).re, a, b, tol)?;
    let im = chebyshev_weighted(|t| g(t).im, a, b, tol)?;
    Ok(Complex64::new(re, im))
}
