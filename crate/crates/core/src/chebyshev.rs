//! Monic Chebyshev polynomials of intervals and band sets, equioscillation
//! diagnostics and a Remez exchange on unions of intervals.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::{gq, gq_int, rational_from_f64, GaussianRational};
use crate::error::{Error, Result};
use crate::jacobi::{naiman_polynomial, NaimanPolynomial, PeriodicJacobi};
use crate::poly::{RationalPoly, RealPoly};
use crate::sets::BandSet;

/// Monic Chebyshev polynomial `C_n` of `[-2, 2]`: `C_0 = 2`, `C_1 = z`,
/// `C_{k+1} = z C_k - C_{k-1}`. Integer coefficients.
pub fn chebyshev_m22(n: usize) -> RationalPoly {
    if n == 0 {
        return RationalPoly::from_i64(&[2]);
    }
    let z = RationalPoly::z();
    let mut prev = RationalPoly::from_i64(&[2]);
    let mut cur = z.clone();
    for _ in 1..n {
        let next = &(&z * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Exact monic Chebyshev polynomial of `[a, b]`: `((b-a)/4)^n C_n(u)` with
/// `u = (4z - 2(a+b)) / (b-a)`.
pub fn monic_chebyshev_interval_exact(a: &BigRational, b: &BigRational, n: usize) -> Result<RationalPoly> {
    if a >= b {
        return Err(Error::invalid("interval needs a < b"));
    }
    if n == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let zero = BigRational::from_integer(BigInt::from(0));
    let len = b - a;
    let four = BigRational::from_integer(BigInt::from(4));
    let two = BigRational::from_integer(BigInt::from(2));
    let u = RationalPoly::new(vec![
        gq(-(&two * (a + b)) / &len, zero.clone()),
        gq(&four / &len, zero.clone()),
    ]);
    let scale = num_traits::pow(&len / &four, n);
    Ok(chebyshev_m22(n).compose(&u).scale(&gq(scale, zero)))
}

/// Float endpoints are taken at their exact binary values.
pub fn monic_chebyshev_interval(a: f64, b: f64, n: usize) -> Result<RationalPoly> {
    monic_chebyshev_interval_exact(&rational_from_f64(a)?, &rational_from_f64(b)?, n)
}

/// Sup norm of the monic Chebyshev polynomial of `[a, b]`.
pub fn interval_chebyshev_norm(a: f64, b: f64, n: usize) -> f64 {
    2.0 * ((b - a) / 4.0).powi(n as i32)
}

/// Monic composition `B^n C_n(P/B)`, computed as `Q_0 = 2`, `Q_1 = P`,
/// `Q_{k+1} = P Q_k - B^2 Q_{k-1}`. Degree `n r`; sup norm `2|B|^n` on the
/// spectrum.
pub fn chebyshev_compose(j: &PeriodicJacobi, n: usize) -> Result<RationalPoly> {
    let np = naiman_polynomial(j)?;
    compose_from_naiman(&np, n)
}

pub fn compose_from_naiman(np: &NaimanPolynomial, n: usize) -> Result<RationalPoly> {
    if n == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let b2: GaussianRational = &np.modulus * &np.modulus;
    let mut prev = RationalPoly::constant(gq_int(2));
    let mut cur = np.p.clone();
    for _ in 1..n {
        let next = &(&np.p * &cur) - &prev.scale(&b2);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Stable float evaluation of `B^n C_n(P(x)/B)` through the recurrence.
pub fn compose_eval(np: &NaimanPolynomial, n: usize, x: f64) -> f64 {
    let p = np.p.to_real_poly().eval(x);
    let b = crate::arith::GaussianRationalExt::to_c64(&np.modulus).re;
    let (mut prev, mut cur) = (2.0, p);
    for _ in 1..n {
        let next = p * cur - b * b * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `m` Chebyshev–Lobatto points on `[a, b]`, ascending, endpoints exact.
pub fn lobatto_grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    let m = m.max(2);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    (0..m)
        .map(|k| {
            if k == 0 {
                a
            } else if k == m - 1 {
                b
            } else {
                let t = std::f64::consts::PI * (m as f64 - 1.0 - 2.0 * k as f64) / (2.0 * (m as f64 - 1.0));
                c - h * t.sin()
            }
        })
        .collect()
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1).abs(), f(x2).abs());
    for _ in 0..200 {
        if hi - lo <= 1e-14 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2).abs();
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1).abs();
        }
    }
    0.5 * (lo + hi)
}

/// Local maxima of `|f|` on each band (grid of `per_band` points plus a
/// golden-section refinement), sorted by position; band endpoints are
/// included when they are one-sided maxima.
pub fn local_extrema(f: &dyn Fn(f64) -> f64, e: &BandSet, per_band: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for (a, b) in e.bands() {
        let xs = lobatto_grid(a, b, per_band);
        let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let m = xs.len();
        for i in 0..m {
            let here = vs[i].abs();
            let left = if i > 0 { vs[i - 1].abs() } else { f64::NEG_INFINITY };
            let right = if i + 1 < m { vs[i + 1].abs() } else { f64::NEG_INFINITY };
            if here >= left && here >= right && (here > left || here > right) {
                if i == 0 || i + 1 == m {
                    out.push((xs[i], vs[i]));
                } else {
                    let x = golden_max(f, xs[i - 1], xs[i + 1]);
                    let v = f(x);
                    if v.abs() >= here {
                        out.push((x, v));
                    } else {
                        out.push((xs[i], vs[i]));
                    }
                }
            }
        }
    }
    out.sort_by(|p, q| p.0.total_cmp(&q.0));
    out.dedup_by(|p, q| (p.0 - q.0).abs() <= 1e-13 * (1.0 + p.0.abs()));
    out
}

/// `sup_E |f|` and a point attaining it.
pub fn sup_norm(f: &dyn Fn(f64) -> f64, e: &BandSet, per_band: usize) -> (f64, f64) {
    local_extrema(f, e, per_band)
        .into_iter()
        .fold((0.0, e.endpoints()[0]), |(m, xm), (x, v)| if v.abs() > m { (v.abs(), x) } else { (m, xm) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquioscillationReport {
    pub norm: f64,
    /// Extremum points with `|p| >= (1 - 1e-8) norm`, ascending.
    pub alternation_points: Vec<f64>,
    /// `1 +` the number of sign changes along the alternation points.
    pub alternation_count: usize,
    /// Zeros of `p` on the set, ascending.
    pub zeros: Vec<f64>,
    /// Distances between consecutive zeros within a band.
    pub zero_gaps: Vec<f64>,
}

impl EquioscillationReport {
    pub fn max_zero_gap(&self) -> f64 {
        self.zero_gaps.iter().copied().fold(0.0, f64::max)
    }
}

fn bisect_zero(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Equioscillation diagnostics for an arbitrary real function of degree
/// `degree` on `e`, sampled at `grid` points in total.
pub fn equioscillation_check_fn(f: &dyn Fn(f64) -> f64, degree: usize, e: &BandSet, grid: usize) -> Result<EquioscillationReport> {
    if grid < 10 * degree {
        return Err(Error::invalid(format!("grid {grid} is below 10 x degree {degree}")));
    }
    let per_band = (grid / e.r()).max(16);
    let ext = local_extrema(f, e, per_band);
    let norm = ext.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = ext
        .into_iter()
        .filter(|p| p.1.abs() >= (1.0 - 1e-8) * norm)
        .collect();
    let changes = pts.windows(2).filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0)).count();
    let mut zeros = Vec::new();
    let mut zero_gaps = Vec::new();
    for (a, b) in e.bands() {
        let xs = lobatto_grid(a, b, per_band);
        let mut band_zeros = Vec::new();
        for w in xs.windows(2) {
            let (fa, fb) = (f(w[0]), f(w[1]));
            if fa == 0.0 {
                band_zeros.push(w[0]);
            } else if fa * fb < 0.0 {
                band_zeros.push(bisect_zero(f, w[0], w[1]));
            }
        }
        if f(b) == 0.0 {
            band_zeros.push(b);
        }
        zero_gaps.extend(band_zeros.windows(2).map(|w| w[1] - w[0]));
        zeros.extend(band_zeros);
    }
    Ok(EquioscillationReport {
        norm,
        alternation_count: if pts.is_empty() { 0 } else { changes + 1 },
        alternation_points: pts.into_iter().map(|p| p.0).collect(),
        zeros,
        zero_gaps,
    })
}

pub fn equioscillation_check(p: &RealPoly, e: &BandSet, grid: usize) -> Result<EquioscillationReport> {
    equioscillation_check_fn(&|x| p.eval(x), p.degree(), e, grid)
}

// ---- Remez exchange ----

/// Chebyshev series `sum c_k T_k(s)` by Clenshaw.
fn clenshaw(c: &[f64], s: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * s * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    s * b1 - b2 + c[0]
}

fn cheb_t(k: usize, s: f64) -> f64 {
    let (mut t0, mut t1) = (1.0, s);
    if k == 0 {
        return 1.0;
    }
    for _ in 1..k {
        let t2 = 2.0 * s * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    t1
}

/// Monomial coefficients of a Chebyshev series in `s`.
fn cheb_to_monomial(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let mut out = vec![0.0; n];
    let mut t_prev = vec![0.0; n];
    let mut t_cur = vec![0.0; n];
    t_prev[0] = 1.0;
    if n > 1 {
        t_cur[1] = 1.0;
    }
    for (k, &ck) in c.iter().enumerate() {
        let tk = if k == 0 { &t_prev } else { &t_cur };
        for i in 0..n {
            out[i] += ck * tk[i];
        }
        if k >= 1 && k + 1 < n {
            let mut next = vec![0.0; n];
            for i in 0..n - 1 {
                next[i + 1] += 2.0 * t_cur[i];
            }
            for i in 0..n {
                next[i] -= t_prev[i];
            }
            t_prev = std::mem::replace(&mut t_cur, next);
        }
    }
    out
}

/// `h^n p((x - c)/h)` for `p` given by monomial coefficients in `s`.
fn unscale(ps: &[f64], c: f64, h: f64) -> RealPoly {
    let lin = RealPoly::new(vec![-c / h, 1.0 / h]);
    let mut acc = RealPoly::new(vec![]);
    for &a in ps.iter().rev() {
        acc = &(&acc * &lin) + &RealPoly::new(vec![a]);
    }
    let n = ps.len() - 1;
    acc.scale(h.powi(n as i32))
}

fn pick_alternating(mut ext: Vec<(f64, f64)>, need: usize) -> Vec<(f64, f64)> {
    // merge runs of equal sign, keeping the largest magnitude
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for p in ext.drain(..) {
        match merged.last_mut() {
            Some(q) if (q.1 > 0.0) == (p.1 > 0.0) => {
                if p.1.abs() > q.1.abs() {
                    *q = p;
                }
            }
            _ => merged.push(p),
        }
    }
    while merged.len() > need {
        if merged.len() == need + 1 {
            if merged[0].1.abs() < merged[merged.len() - 1].1.abs() {
                merged.remove(0);
            } else {
                merged.pop();
            }
            continue;
        }
        let (i, _) = merged
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.abs().total_cmp(&b.1 .1.abs()))
            .unwrap();
        merged.remove(i);
        if i > 0 && i < merged.len() && (merged[i - 1].1 > 0.0) == (merged[i].1 > 0.0) {
            if merged[i - 1].1.abs() >= merged[i].1.abs() {
                merged.remove(i);
            } else {
                merged.remove(i - 1);
            }
        }
    }
    merged
}

/// Monic polynomial of degree `n` with least sup norm on `e`, by multi-point
/// Remez exchange. Returned once the levelled error and the true norm agree
/// to `1e-8` relative and the iteration has stopped improving.
pub fn remez_union(e: &BandSet, n: usize, max_iters: usize) -> Result<RealPoly> {
    if n == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let (lo, hi) = e.hull();
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let se = e.affine(1.0 / h, -c / h)?;
    let lead = 0.5f64.powi(n as i32 - 1);
    let per_band = (40 * n + 200).max(400);

    // initial reference: equally spaced indices of a dense grid on the set
    let grid: Vec<f64> = se
        .bands()
        .iter()
        .flat_map(|&(a, b)| {
            let m = ((b - a) / 2.0 * per_band as f64).ceil() as usize + 2;
            lobatto_grid(a, b, m)
        })
        .collect();
    if grid.len() < n + 1 {
        return Err(Error::invalid("set too small for the requested degree"));
    }
    let mut refs: Vec<f64> = (0..=n)
        .map(|i| grid[(i * (grid.len() - 1)) / n])
        .collect();

    let to_monomial = |coef: &[f64]| unscale(&cheb_to_monomial(coef), c, h);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut last_spread = f64::INFINITY;
    for iter in 1..=max_iters {
        let mut a = DMatrix::<f64>::zeros(n + 1, n + 1);
        let mut rhs = DVector::<f64>::zeros(n + 1);
        for (i, &s) in refs.iter().enumerate() {
            for k in 0..n {
                a[(i, k)] = cheb_t(k, s);
            }
            a[(i, n)] = if i % 2 == 0 { 1.0 } else { -1.0 };
            rhs[i] = -lead * cheb_t(n, s);
        }
        let sol = a
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Singular("Remez reference system".into()))?;
        let mut coef: Vec<f64> = sol.iter().take(n).copied().collect();
        coef.push(lead);
        let level = sol[n].abs();
        let f = |s: f64| clenshaw(&coef, s);
        let mut ext = local_extrema(&f, &se, per_band);
        ext.extend(refs.iter().map(|&s| (s, f(s))));
        ext.sort_by(|p, q| p.0.total_cmp(&q.0));
        let norm = ext.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
        let spread = (norm - level) / norm;
        if best.as_ref().map_or(true, |b| norm < b.0) {
            best = Some((norm, coef.clone()));
        }
        let converged = spread <= 1e-8 && (spread <= 1e-14 || spread >= 0.5 * last_spread);
        if converged {
            return Ok(to_monomial(&coef));
        }
        last_spread = spread;
        let picked = pick_alternating(ext, n + 1);
        if picked.len() < n + 1 {
            return Err(Error::RemezStagnated {
                best: to_monomial(&best.unwrap().1).coeffs,
                spread,
                iterations: iter,
            });
        }
        refs = picked.into_iter().map(|p| p.0).collect();
    }
    let (_, coef) = best.unwrap();
    Err(Error::RemezStagnated {
        best: to_monomial(&coef).coeffs,
        spread: last_spread,
        iterations: max_iters,
    })
}
