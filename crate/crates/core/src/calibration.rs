//! Green function of a band set through the differential `R(t) dt / sqrt(q(t))`:
//! gap normalization, harmonic measures, Robin constant, calibrated inflation
//! and the cosh construction of Chebyshev polynomials.
//!
//! Internally everything is computed for the set affinely mapped onto a hull
//! of `[-1, 1]`; results are mapped back. The branch of `sqrt(q)` is the
//! product of principal square roots `sqrt(t - e_i)`, which is analytic off
//! the set and positive right of the last endpoint.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::RealPoly;
use crate::quadrature::{chebyshev_weighted, integrate, integrate_c};
use crate::sets::BandSet;

const QUAD_TOL: f64 = 1e-14;
const PATH_TOL: f64 = 1e-13;

/// The differential data of a band set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalibrationData {
    pub bands: BandSet,
    /// Monomial coefficients of `q(t) = prod (t - e_i)`, ascending.
    pub q_coeffs: Vec<f64>,
    /// Monomial coefficients of the monic `R`, degree `r - 1`, ascending.
    pub r_coeffs: Vec<f64>,
    /// Roots of `R`, one per gap, ascending.
    pub lambda: Vec<f64>,
    /// Harmonic measures of the bands (empty until computed).
    pub omega: Vec<f64>,
    /// Sign of `∫_band R/sqrt|q|` per band.
    pub omega_signs: Vec<i8>,
    pub n_total: Option<usize>,
    pub n_k: Option<Vec<usize>>,
    #[serde(skip)]
    center: f64,
    #[serde(skip)]
    half_width: f64,
    /// Endpoints in the scaled variable.
    #[serde(skip)]
    eu: Vec<f64>,
    /// Roots of `R` in the scaled variable.
    #[serde(skip)]
    lu: Vec<f64>,
}

fn expand_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &x in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= x * ci;
        }
        c = next;
    }
    c
}

fn poly_val(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * t + x)
}

/// `prod_{i not in skip} |t - e_i|`
fn rest_abs(e: &[f64], t: f64, skip: (usize, usize)) -> f64 {
    e.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip.0 && i != skip.1)
        .map(|(_, &x)| (t - x).abs())
        .product()
}

impl CalibrationData {
    fn scaled_r(&self, t: f64) -> f64 {
        self.lu.iter().map(|&l| t - l).product()
    }

    fn scaled_r_c(&self, t: Complex64) -> Complex64 {
        self.lu.iter().map(|&l| t - l).product()
    }

    fn sqrt_q_c(&self, t: Complex64) -> Complex64 {
        self.eu.iter().map(|&x| (t - x).sqrt()).product()
    }

    pub fn r(&self) -> usize {
        self.bands.r()
    }

    fn to_scaled(&self, x: f64) -> f64 {
        (x - self.center) / self.half_width
    }

    /// `(1/pi) ∫_θ^π` of the equilibrium density on band `k` in the variable
    /// `t = c - h cos θ` of that band (scaled coordinates).
    fn band_mass_from(&self, k: usize, theta: f64) -> Result<f64> {
        let (a, b) = (self.eu[2 * k], self.eu[2 * k + 1]);
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        let f = |th: f64| {
            let t = c - h * th.cos();
            self.scaled_r(t).abs() / rest_abs(&self.eu, t, (2 * k, 2 * k + 1)).sqrt()
        };
        Ok(integrate(f, theta, std::f64::consts::PI, QUAD_TOL)? / std::f64::consts::PI)
    }
}

/// Solves the gap conditions `∫_gap R/sqrt|q| = 0` for the monic `R`.
pub fn solve_r(e: &BandSet) -> Result<CalibrationData> {
    if e.has_closed_gaps() {
        return Err(Error::invalid("band set has closed gaps; the differential needs open gaps"));
    }
    let r = e.r();
    let (lo, hi) = e.hull();
    let center = 0.5 * (lo + hi);
    let half_width = 0.5 * (hi - lo);
    let eu: Vec<f64> = e.endpoints().iter().map(|x| (x - center) / half_width).collect();
    let mut lu = Vec::new();
    if r > 1 {
        let m = r - 1;
        let mut a = DMatrix::<f64>::zeros(m, m);
        let mut rhs = DVector::<f64>::zeros(m);
        for k in 0..m {
            let (ga, gb) = (eu[2 * k + 1], eu[2 * k + 2]);
            for j in 0..=m {
                let mom = chebyshev_weighted(
                    |t| t.powi(j as i32) / rest_abs(&eu, t, (2 * k + 1, 2 * k + 2)).sqrt(),
                    ga,
                    gb,
                    QUAD_TOL,
                )?;
                if j < m {
                    a[(k, j)] = mom;
                } else {
                    rhs[k] = -mom;
                }
            }
        }
        let sol = a
            .clone()
            .lu()
            .solve(&rhs)
            .filter(|s| s.iter().all(|x| x.is_finite()))
            .ok_or_else(|| Error::Singular("gap moment matrix".into()))?;
        let mut coeffs: Vec<f64> = sol.iter().copied().collect();
        coeffs.push(1.0);
        for k in 0..m {
            let (ga, gb) = (eu[2 * k + 1], eu[2 * k + 2]);
            let (fa, fb) = (poly_val(&coeffs, ga), poly_val(&coeffs, gb));
            if !(fa * fb < 0.0) {
                return Err(Error::Inconsistent(format!("R has no sign change in gap {}", k + 1)));
            }
            let (mut x0, mut x1) = (ga, gb);
            for _ in 0..200 {
                let mid = 0.5 * (x0 + x1);
                if mid <= x0 || mid >= x1 {
                    break;
                }
                if (poly_val(&coeffs, mid) > 0.0) == (fa > 0.0) {
                    x0 = mid;
                } else {
                    x1 = mid;
                }
            }
            let root = 0.5 * (x0 + x1);
            if !(root > ga && root < gb) {
                return Err(Error::Inconsistent(format!("R root not interior to gap {}", k + 1)));
            }
            lu.push(root);
        }
    }
    let lambda: Vec<f64> = lu.iter().map(|x| center + half_width * x).collect();
    Ok(CalibrationData {
        bands: e.clone(),
        q_coeffs: expand_roots(e.endpoints()),
        r_coeffs: expand_roots(&lambda),
        lambda,
        omega: vec![],
        omega_signs: vec![],
        n_total: None,
        n_k: None,
        center,
        half_width,
        eu,
        lu,
    })
}

/// Harmonic measures `ω_k = (1/π) |∫_band R/sqrt|q||` of every band.
pub fn harmonic_measures(e: &BandSet) -> Result<CalibrationData> {
    let mut d = solve_r(e)?;
    let mut omega = Vec::with_capacity(d.r());
    let mut signs = Vec::with_capacity(d.r());
    for k in 0..d.r() {
        let (a, b) = (d.eu[2 * k], d.eu[2 * k + 1]);
        let v = chebyshev_weighted(
            |t| d.scaled_r(t) / rest_abs(&d.eu, t, (2 * k, 2 * k + 1)).sqrt(),
            a,
            b,
            QUAD_TOL,
        )?;
        omega.push(v.abs() / std::f64::consts::PI);
        signs.push(if v >= 0.0 { 1 } else { -1 });
    }
    d.omega = omega;
    d.omega_signs = signs;
    Ok(d)
}

/// Value of `sqrt(q)` on the upper side of the real axis at `x`, divided by
/// `sqrt|q(x)|`: `i^m` with `m` the number of endpoints right of `x`.
pub fn branch_factor(e: &BandSet, x: f64) -> Complex64 {
    let m = e.endpoints().iter().filter(|&&t| t > x).count();
    Complex64::new(0.0, 1.0).powu(m as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GreenEvaluation {
    pub z: (f64, f64),
    pub g: f64,
    pub robin: f64,
}

/// Green function with pole at infinity, evaluated through the differential.
#[derive(Clone, Debug)]
pub struct Green {
    pub data: CalibrationData,
    robin: f64,
}

impl Green {
    pub fn new(e: &BandSet) -> Result<Self> {
        let data = harmonic_measures(e)?;
        let robin_u = scaled_robin(&data)?;
        let robin = robin_u - data.half_width.ln();
        Ok(Green { data, robin })
    }

    pub fn robin(&self) -> f64 {
        self.robin
    }

    pub fn capacity(&self) -> f64 {
        (-self.robin).exp()
    }

    /// `g` at a real point, scaled coordinates.
    fn g_real_scaled(&self, u: f64) -> Result<f64> {
        let d = &self.data;
        let e = &d.eu;
        let n = e.len();
        let last = e[n - 1];
        if u >= last {
            let w = (u - last).sqrt();
            let f = |v: f64| {
                let t = last + v * v;
                2.0 * d.scaled_r(t) / rest_abs(e, t, (n - 1, n - 1)).sqrt()
            };
            return integrate(f, 0.0, w, PATH_TOL);
        }
        if u <= e[0] {
            let w = (e[0] - u).sqrt();
            let f = |v: f64| {
                let t = e[0] - v * v;
                2.0 * d.scaled_r(t).abs() / rest_abs(e, t, (0, 0)).sqrt()
            };
            return integrate(f, 0.0, w, PATH_TOL);
        }
        for k in 0..d.r() - 1 {
            let (a, b) = (e[2 * k + 1], e[2 * k + 2]);
            if u > a && u < b {
                let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
                let th = ((c - u) / h).clamp(-1.0, 1.0).acos();
                let f = |th: f64| {
                    let t = c - h * th.cos();
                    d.scaled_r(t) / rest_abs(e, t, (2 * k + 1, 2 * k + 2)).sqrt()
                };
                // θ runs from π (t = a) down to th
                return Ok(integrate(f, th, std::f64::consts::PI, PATH_TOL)?.abs());
            }
        }
        Ok(0.0)
    }

    /// `G(z) = ∫_{e_2r}^z R/sqrt(q)` along a path in the upper half plane
    /// (conjugated for the lower one); scaled coordinates.
    fn big_g_scaled(&self, z: Complex64) -> Result<Complex64> {
        if z.im < 0.0 {
            return Ok(self.big_g_scaled(z.conj())?.conj());
        }
        let d = &self.data;
        let x0 = 2.0;
        let base = self.g_real_scaled(x0)?;
        if z.im == 0.0 && z.re >= x0 {
            return Ok(Complex64::new(self.g_real_scaled(z.re)?, 0.0));
        }
        let f = |t: Complex64| d.scaled_r_c(t) / d.sqrt_q_c(t);
        let y = if z.im == 0.0 { 0.0 } else { z.im };
        if y == 0.0 {
            return Err(Error::invalid("real point off the right ray; use the real Green function"));
        }
        let i = Complex64::new(0.0, 1.0);
        let vert = integrate_c(|s| f(Complex64::new(x0, s)) * i, 0.0, y, PATH_TOL)?;
        let horiz = integrate_c(|s| f(Complex64::new(s, y)), x0, z.re, PATH_TOL)?;
        Ok(Complex64::new(base, 0.0) + vert + horiz)
    }

    /// Green function `g(z) >= 0`, zero on the set.
    pub fn g(&self, z: Complex64) -> Result<f64> {
        let d = &self.data;
        let u = Complex64::new(d.to_scaled(z.re), z.im / d.half_width);
        if u.im.abs() <= 1e-14 * (1.0 + u.re.abs()) {
            return self.g_real_scaled(u.re);
        }
        Ok(self.big_g_scaled(u)?.re.max(0.0))
    }

    /// Complex Green integral `G(z)` with `Re G = g`.
    pub fn big_g(&self, z: Complex64) -> Result<Complex64> {
        let d = &self.data;
        let u = Complex64::new(d.to_scaled(z.re), z.im / d.half_width);
        if u.im == 0.0 && u.re >= 1.0 {
            return Ok(Complex64::new(self.g_real_scaled(u.re)?, 0.0));
        }
        self.big_g_scaled(u)
    }

    /// Harmonic measure of `E ∩ [x, ∞)` for `x` on the set.
    pub fn mass_right_of(&self, x: f64) -> Result<f64> {
        let d = &self.data;
        let u = d.to_scaled(x);
        let k = match d.bands.band_of(x) {
            Some(k) => k,
            None => {
                return Ok((0..d.r())
                    .filter(|&j| d.eu[2 * j] >= u)
                    .map(|j| d.omega[j])
                    .sum())
            }
        };
        let (a, b) = (d.eu[2 * k], d.eu[2 * k + 1]);
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        let th = ((c - u) / h).clamp(-1.0, 1.0).acos();
        let inner = d.band_mass_from(k, th)?;
        Ok(inner + d.omega[k + 1..].iter().sum::<f64>())
    }

    pub fn eval(&self, z: Complex64) -> Result<GreenEvaluation> {
        Ok(GreenEvaluation {
            z: (z.re, z.im),
            g: self.g(z)?,
            robin: self.robin,
        })
    }
}

/// `lim (g(x) - ln x)` for the scaled set (hull `[-1, 1]`, centre 0).
fn scaled_robin(d: &CalibrationData) -> Result<f64> {
    let e = &d.eu;
    let n = e.len();
    let last = e[n - 1];
    let c = 0.0;
    let t1 = last + 1.0;
    let near = integrate(
        |v: f64| {
            let t = last + v * v;
            2.0 * d.scaled_r(t) / rest_abs(e, t, (n - 1, n - 1)).sqrt()
        },
        0.0,
        (t1 - last).sqrt(),
        PATH_TOL,
    )? - ((t1 - c) / (last - c)).ln();
    // tail: t = t1 / v; R/sqrt(q) - 1/(t - c) written through log1p
    let tail = integrate(
        |v: f64| {
            if v == 0.0 {
                return 0.0;
            }
            let t = t1 / v;
            let a: f64 = d.lu.iter().map(|l| (-l / t).ln_1p()).sum::<f64>()
                - 0.5 * e.iter().map(|x| (-x / t).ln_1p()).sum::<f64>();
            let b = -(-c / t).ln_1p();
            (1.0 / t) * b.exp() * (a - b).exp_m1() * t1 / (v * v)
        },
        0.0,
        1.0,
        PATH_TOL,
    )?;
    Ok(near + tail - (last - c).ln())
}

/// Moments `m_1..m_count` of the equilibrium measure, whose density on the
/// bands is `|R(t)| / (π sqrt|q(t)|)`.
pub fn band_equilibrium_moments(e: &BandSet, count: usize) -> Result<Vec<f64>> {
    let d = solve_r(e)?;
    let mut out = vec![0.0; count];
    for k in 0..d.r() {
        let (a, b) = (d.eu[2 * k], d.eu[2 * k + 1]);
        for (p, slot) in out.iter_mut().enumerate() {
            let v = chebyshev_weighted(
                |t| {
                    let x = d.center + d.half_width * t;
                    x.powi(p as i32 + 1) * d.scaled_r(t).abs() / rest_abs(&d.eu, t, (2 * k, 2 * k + 1)).sqrt()
                },
                a,
                b,
                QUAD_TOL,
            )?;
            *slot += v / std::f64::consts::PI;
        }
    }
    Ok(out)
}

pub fn robin_constant(e: &BandSet) -> Result<f64> {
    Ok(Green::new(e)?.robin())
}

pub fn green_eval(e: &BandSet, z: Complex64) -> Result<GreenEvaluation> {
    Green::new(e)?.eval(z)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Calibrated {
    pub bands: BandSet,
    /// Band multiplicities, positive, summing to `m`.
    pub k: Vec<usize>,
    pub m: usize,
    /// Harmonic measures of the inflated set.
    pub omega: Vec<f64>,
    pub lambda: Vec<f64>,
    /// Largest endpoint displacement.
    pub max_inflation: f64,
    pub iterations: usize,
    /// Whether the targets were met by pushing bands into gaps alone.
    pub gap_only: bool,
}

/// Largest-remainder rounding of `m ω` with every share at least one.
pub fn band_shares(omega: &[f64], m: usize) -> Result<Vec<usize>> {
    let r = omega.len();
    if m < r {
        return Err(Error::invalid(format!(
            "m = {m} cannot give each of the {r} bands a positive share"
        )));
    }
    let raw: Vec<f64> = omega.iter().map(|w| w * m as f64).collect();
    let mut k: Vec<usize> = raw.iter().map(|x| x.floor() as usize).collect();
    let mut left = m as i64 - k.iter().sum::<usize>() as i64;
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| (raw[j] - raw[j].floor()).total_cmp(&(raw[i] - raw[i].floor())).then(i.cmp(&j)));
    let mut idx = 0;
    while left > 0 {
        k[order[idx % r]] += 1;
        idx += 1;
        left -= 1;
    }
    while let Some(z) = k.iter().position(|&x| x == 0) {
        let big = (0..r).max_by(|&i, &j| k[i].cmp(&k[j]).then(j.cmp(&i))).unwrap();
        k[big] -= 1;
        k[z] += 1;
    }
    Ok(k)
}

fn inflate_gaps(e: &BandSet, s: &[f64]) -> Result<BandSet> {
    let mut ends = e.endpoints().to_vec();
    for (g, &sg) in s.iter().enumerate() {
        let (a, b) = (ends[2 * g + 1], ends[2 * g + 2]);
        let w = b - a;
        if sg > 0.0 {
            ends[2 * g + 1] = a + sg * w;
        } else {
            ends[2 * g + 2] = b + sg * w;
        }
    }
    BandSet::new(ends)
}

/// Band `k` grows by `t[k]` on every side; gap sides stop just short of the
/// gap midpoint.
fn inflate_bands(e: &BandSet, t: &[f64]) -> Result<BandSet> {
    let old = e.endpoints();
    let mut ends = old.to_vec();
    let r = e.r();
    for k in 0..r {
        let grow = t[k].max(0.0);
        ends[2 * k] = if k == 0 {
            old[0] - grow
        } else {
            old[2 * k] - grow.min(0.5 * (old[2 * k] - old[2 * k - 1]) * (1.0 - 1e-12))
        };
        ends[2 * k + 1] = if k == r - 1 {
            old[2 * k + 1] + grow
        } else {
            old[2 * k + 1] + grow.min(0.5 * (old[2 * k + 2] - old[2 * k + 1]) * (1.0 - 1e-12))
        };
    }
    BandSet::new(ends)
}

struct NewtonProblem<'a> {
    build: &'a dyn Fn(&[f64]) -> Result<BandSet>,
    /// Bands whose harmonic measure is matched (the remaining one follows).
    eqs: Vec<usize>,
    target: Vec<f64>,
    lower: f64,
    upper: f64,
    step: f64,
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

fn newton_inflate(p: &NewtonProblem) -> Result<(Vec<f64>, CalibrationData, usize)> {
    let dim = p.eqs.len();
    let resid = |x: &[f64]| -> Result<(Vec<f64>, CalibrationData)> {
        let d = harmonic_measures(&(p.build)(x)?)?;
        Ok((p.eqs.iter().map(|&j| d.omega[j] - p.target[j]).collect(), d))
    };
    let diverged = |x: &[f64], res: f64, it: usize| Error::CalibrationDiverged {
        last: (p.build)(x).map(|b| b.endpoints().to_vec()).unwrap_or_default(),
        residual: res,
        iterations: it,
    };
    let mut x = vec![0.0; dim];
    let (mut f, mut d) = resid(&x)?;
    for it in 0..50 {
        if sup(&f) <= 1e-10 {
            return Ok((x, d, it));
        }
        let mut jac = DMatrix::<f64>::zeros(dim, dim);
        for j in 0..dim {
            let h = if x[j] + p.step < p.upper { p.step } else { -p.step };
            let mut xp = x.clone();
            xp[j] += h;
            let (fp, _) = resid(&xp)?;
            for i in 0..dim {
                jac[(i, j)] = (fp[i] - f[i]) / h;
            }
        }
        let step = jac
            .lu()
            .solve(&DVector::from_vec(f.clone()))
            .filter(|s| s.iter().all(|v| v.is_finite()))
            .ok_or_else(|| diverged(&x, sup(&f), it))?;
        let mut t = 1.0;
        loop {
            let cand: Vec<f64> = (0..dim)
                .map(|j| (x[j] - t * step[j]).clamp(p.lower, p.upper))
                .collect();
            let (fc, dc) = resid(&cand)?;
            if sup(&fc) < sup(&f) {
                x = cand;
                f = fc;
                d = dc;
                break;
            }
            if t < 1e-4 {
                return Err(diverged(&cand, sup(&fc), it + 1));
            }
            t *= 0.5;
        }
    }
    if sup(&f) <= 1e-10 {
        return Ok((x, d, 50));
    }
    Err(diverged(&x, sup(&f), 50))
}

/// Inflates `E` until every harmonic measure equals `k_j / m`.
///
/// Bands are first pushed into the gaps only (never past a gap midpoint).
/// When that cannot reach the targets, bands short of their share grow on
/// every side instead, gap sides still capped at the midpoint.
pub fn calibrate(e: &BandSet, m: usize) -> Result<Calibrated> {
    let base = harmonic_measures(e)?;
    let r = e.r();
    let k = band_shares(&base.omega, m)?;
    let target: Vec<f64> = k.iter().map(|&x| x as f64 / m as f64).collect();
    let finish = |bands: BandSet, d: CalibrationData, iterations: usize, gap_only: bool| -> Calibrated {
        let max_inflation = bands
            .endpoints()
            .iter()
            .zip(e.endpoints())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        Calibrated {
            bands,
            k: k.clone(),
            m,
            omega: d.omega,
            lambda: d.lambda,
            max_inflation,
            iterations,
            gap_only,
        }
    };
    if r == 1 {
        return Ok(finish(e.clone(), base, 0, true));
    }
    let gaps = |s: &[f64]| inflate_gaps(e, s);
    let first = NewtonProblem {
        build: &gaps,
        eqs: (0..r - 1).collect(),
        target: target.clone(),
        lower: -(0.5 - 1e-9),
        upper: 0.5 - 1e-9,
        step: 1e-6,
    };
    if let Ok((s, d, it)) = newton_inflate(&first) {
        return Ok(finish(inflate_gaps(e, &s)?, d, it, true));
    }
    // the band with the largest surplus stays put
    let pinned = (0..r)
        .max_by(|&i, &j| (base.omega[i] - target[i]).total_cmp(&(base.omega[j] - target[j])))
        .unwrap();
    let free: Vec<usize> = (0..r).filter(|&j| j != pinned).collect();
    let (lo, hi) = e.hull();
    let min_gap = e.gaps().iter().map(|g| g.1 - g.0).fold(f64::INFINITY, f64::min);
    let grow = |t: &[f64]| {
        let mut full = vec![0.0; r];
        for (&j, &tj) in free.iter().zip(t) {
            full[j] = tj;
        }
        inflate_bands(e, &full)
    };
    let second = NewtonProblem {
        build: &grow,
        eqs: free.clone(),
        target,
        lower: 0.0,
        upper: 10.0 * (hi - lo),
        step: 1e-6 * min_gap,
    };
    let (t, d, it) = newton_inflate(&second)?;
    Ok(finish(grow(&t)?, d, it, false))
}
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoshPolynomial {
    /// `cosh(N G)` as a polynomial: `|f| <= 1` on the set.
    pub f: RealPoly,
    /// Monic rescaling of `f`: the Chebyshev polynomial of degree `N`.
    pub t: RealPoly,
    pub n_k: Vec<usize>,
    /// Sup norm of `t` on the set, `1 / |lead(f)|`.
    pub norm: f64,
}

fn chebyshev_t(k: usize, s: f64) -> f64 {
    let (mut a, mut b) = (1.0, s);
    if k == 0 {
        return 1.0;
    }
    for _ in 1..k {
        let c = 2.0 * s * b - a;
        a = b;
        b = c;
    }
    b
}

/// Degree-`N` polynomial equal to `cosh(N G)` for a set whose harmonic
/// measures are all multiples of `1/N`. It is fitted through the points where
/// `N · mass_right_of(x)` is an integer `j` (value `(-1)^j`).
pub fn cosh_polynomial(e: &BandSet, n: usize) -> Result<CoshPolynomial> {
    if n == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let green = Green::new(e)?;
    let d = &green.data;
    let r = d.r();
    let n_k: Vec<usize> = d.omega.iter().map(|w| (w * n as f64).round() as usize).collect();
    for (w, &nk) in d.omega.iter().zip(&n_k) {
        if nk == 0 || (w - nk as f64 / n as f64).abs() > 1e-8 {
            return Err(Error::invalid(format!(
                "set is not calibrated at N = {n} (harmonic measures {:?})",
                d.omega
            )));
        }
    }
    // nodes in scaled coordinates with values (-1)^j
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    let mut j0 = 0usize;
    for k in (0..r).rev() {
        let (a, b) = (d.eu[2 * k], d.eu[2 * k + 1]);
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        let nk = n_k[k];
        for i in 0..=nk {
            let sign = if (j0 + i) % 2 == 0 { 1.0 } else { -1.0 };
            let x = if i == 0 {
                b
            } else if i == nk {
                a
            } else {
                let target = d.omega[k] * i as f64 / nk as f64;
                // mass of [x, b] decreases as θ grows
                let (mut lo, mut hi) = (0.0, std::f64::consts::PI);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if d.band_mass_from(k, mid)? > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                c - h * (0.5 * (lo + hi)).cos()
            };
            nodes.push((x, sign));
        }
        j0 += nk;
    }
    let rows = nodes.len();
    let mut a = DMatrix::<f64>::zeros(rows, n + 1);
    let mut rhs = DVector::<f64>::zeros(rows);
    for (i, &(x, v)) in nodes.iter().enumerate() {
        for k in 0..=n {
            a[(i, k)] = chebyshev_t(k, x);
        }
        rhs[i] = v;
    }
    let coef = a
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|m| Error::Interpolation(m.to_string()))?;
    let cheb: Vec<f64> = coef.iter().copied().collect();
    let fit_resid = nodes
        .iter()
        .map(|&(x, v)| (cheb.iter().enumerate().map(|(k, c)| c * chebyshev_t(k, x)).sum::<f64>() - v).abs())
        .fold(0.0, f64::max);
    if fit_resid > 1e-6 {
        return Err(Error::Interpolation(format!("node residual {fit_resid:e}")));
    }
    // monomial coefficients in the scaled variable, then in x
    let mut mono = vec![0.0; n + 1];
    let (mut t_prev, mut t_cur) = (vec![0.0; n + 1], vec![0.0; n + 1]);
    t_prev[0] = 1.0;
    if n >= 1 {
        t_cur[1] = 1.0;
    }
    for (k, &ck) in cheb.iter().enumerate() {
        let tk = if k == 0 { &t_prev } else { &t_cur };
        for i in 0..=n {
            mono[i] += ck * tk[i];
        }
        if k >= 1 && k < n {
            let mut next = vec![0.0; n + 1];
            for i in 0..n {
                next[i + 1] += 2.0 * t_cur[i];
            }
            for i in 0..=n {
                next[i] -= t_prev[i];
            }
            t_prev = std::mem::replace(&mut t_cur, next);
        }
    }
    let lin = RealPoly::new(vec![-d.center / d.half_width, 1.0 / d.half_width]);
    let mut f = RealPoly::new(vec![]);
    for &m in mono.iter().rev() {
        f = &(&f * &lin) + &RealPoly::new(vec![m]);
    }
    // |f| <= 1 on the set, and f = cosh(N g) right of the set
    let (sup, _) = crate::chebyshev::sup_norm(&|x| f.eval(x), e, 40 * n + 200);
    if sup > 1.0 + 1e-6 {
        return Err(Error::Interpolation(format!("fitted polynomial reaches {sup} on the set")));
    }
    let (_, hi) = e.hull();
    let probe = hi + 0.25 * d.half_width;
    let expect = (n as f64 * green.g(Complex64::new(probe, 0.0))?).cosh();
    let got = f.eval(probe);
    if (got - expect).abs() > 1e-6 * expect.abs().max(1.0) {
        return Err(Error::Interpolation(format!(
            "fit disagrees with cosh(N g) right of the set: {got} vs {expect}"
        )));
    }
    let lead = f.leading();
    let t = f.scale(1.0 / lead);
    Ok(CoshPolynomial {
        f,
        t,
        n_k,
        norm: 1.0 / lead.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(e: &[f64]) -> BandSet {
        BandSet::new(e.to_vec()).unwrap()
    }

    #[test]
    fn r_examples() {
        let d = solve_r(&bs(&[-2.0, 2.0])).unwrap();
        assert_eq!(d.r_coeffs, vec![1.0]);
        let d = solve_r(&bs(&[-3.0, -1.0, 1.0, 3.0])).unwrap();
        assert!(d.lambda[0].abs() < 1e-12);
        let d = solve_r(&bs(&[-2.0, -1.0, 1.0, 2.0])).unwrap();
        assert!(d.lambda[0].abs() < 1e-12);
    }

    #[test]
    fn omega_examples() {
        let d = harmonic_measures(&bs(&[-2.0, 2.0])).unwrap();
        assert!((d.omega[0] - 1.0).abs() < 1e-12);
        let d = harmonic_measures(&bs(&[-3.0, -1.0, 1.0, 3.0])).unwrap();
        assert!((d.omega[0] - 0.5).abs() < 1e-12 && (d.omega[1] - 0.5).abs() < 1e-12);
        let d = harmonic_measures(&bs(&[-2.0, 0.0, 1.0, 2.0, 2.5, 4.0])).unwrap();
        assert!((d.omega.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn robin_examples() {
        assert!(robin_constant(&bs(&[-2.0, 2.0])).unwrap().abs() < 1e-10);
        let r = robin_constant(&bs(&[-3.0, -1.0, 1.0, 3.0])).unwrap();
        assert!((r + 0.5 * 2f64.ln()).abs() < 1e-8, "{r}");
        assert!((robin_constant(&bs(&[-1.0, 1.0])).unwrap() - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn green_of_interval_matches_joukowski() {
        let g = Green::new(&bs(&[-2.0, 2.0])).unwrap();
        for z in [
            Complex64::new(3.0, 0.0),
            Complex64::new(-5.0, 0.0),
            Complex64::new(0.5, 1.0),
            Complex64::new(-1.0, -0.3),
            Complex64::new(10.0, 4.0),
        ] {
            let w = z / 2.0;
            let mut s = (w * w - 1.0).sqrt();
            if (w + s).norm() < 1.0 {
                s = -s;
            }
            let expect = (w + s).norm().ln();
            assert!((g.g(z).unwrap() - expect).abs() < 1e-10, "{z}");
        }
        assert_eq!(g.g(Complex64::new(2.0, 0.0)).unwrap(), 0.0);
        assert_eq!(g.g(Complex64::new(0.3, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn branch_factor_matches_principal_product() {
        let e = bs(&[-3.0, -1.0, 1.0, 3.0]);
        let d = solve_r(&e).unwrap();
        for x in [-4.0, -2.0, 0.0, 2.0, 4.0] {
            let t = Complex64::new(d.to_scaled(x), 1e-12);
            let v = d.sqrt_q_c(t);
            let expect = branch_factor(&e, x) * v.norm();
            assert!((v - expect).norm() < 1e-6 * v.norm(), "{x}");
        }
    }

    #[test]
    fn shares() {
        assert_eq!(band_shares(&[0.5, 0.5], 4).unwrap(), vec![2, 2]);
        assert_eq!(band_shares(&[0.95, 0.05], 3).unwrap(), vec![2, 1]);
        assert!(band_shares(&[0.5, 0.5], 1).is_err());
    }

    #[test]
    fn calibrate_trivial_cases() {
        let c = calibrate(&bs(&[-3.0, -1.0, 1.0, 3.0]), 6).unwrap();
        assert_eq!(c.k, vec![3, 3]);
        assert_eq!(c.bands, bs(&[-3.0, -1.0, 1.0, 3.0]));
        let c = calibrate(&bs(&[-2.0, 2.0]), 5).unwrap();
        assert_eq!(c.k, vec![5]);
    }

    #[test]
    fn cosh_examples() {
        let c = cosh_polynomial(&bs(&[-2.0, 2.0]), 1).unwrap();
        assert!(c.f.max_coeff_diff(&RealPoly::new(vec![0.0, 0.5])) < 1e-8);
        let c = cosh_polynomial(&bs(&[-3.0, -1.0, 1.0, 3.0]), 2).unwrap();
        assert!(c.f.max_coeff_diff(&RealPoly::new(vec![-1.25, 0.0, 0.25])) < 1e-8);
        let c = cosh_polynomial(&bs(&[-3.0, -1.0, 1.0, 3.0]), 4).unwrap();
        assert!(c.t.max_coeff_diff(&RealPoly::new(vec![17.0, 0.0, -10.0, 0.0, 1.0])) < 1e-6);
        assert!(cosh_polynomial(&bs(&[-3.0, -1.0, 1.0, 3.0]), 3).is_err());
    }

    #[test]
    fn equilibrium_moments_of_bands() {
        let m = band_equilibrium_moments(&bs(&[-3.0, -1.0, 1.0, 3.0]), 4).unwrap();
        for (x, e) in m.iter().zip([0.0, 5.0, 0.0, 33.0]) {
            assert!((x - e).abs() < 1e-10, "{m:?}");
        }
        let m = band_equilibrium_moments(&bs(&[-2.0, 2.0]), 4).unwrap();
        for (x, e) in m.iter().zip([0.0, 2.0, 0.0, 6.0]) {
            assert!((x - e).abs() < 1e-10, "{m:?}");
        }
    }

    #[test]
    fn inflation_example() {
        let e = bs(&[-2.0, 0.0, 1.0, 2.0]);
        let c = calibrate(&e, 4).unwrap();
        assert_eq!(c.k.iter().sum::<usize>(), 4);
        assert!(c.bands.contains_set(&e));
        assert!(c.max_inflation <= 0.5 + 1e-9, "{}", c.max_inflation);
        let again = harmonic_measures(&c.bands).unwrap();
        for (w, k) in again.omega.iter().zip(&c.k) {
            assert!((w - *k as f64 / 4.0).abs() < 1e-8);
        }
    }

    #[test]
    fn robin_matches_jacobi_capacity() {
        use crate::jacobi::{jacobi_capacity, spectrum_bands, PeriodicJacobi};
        for (a, b) in [
            (vec![0, 0], vec![1, 2]),
            (vec![1, -1], vec![2, 1]),
            (vec![0, 1, -1], vec![1, 1, 2]),
            (vec![2, 0, 0], vec![1, 3, 1]),
        ] {
            let j = PeriodicJacobi::from_i64(&a, &b).unwrap();
            let sp = spectrum_bands(&j).unwrap();
            if sp.bands.has_closed_gaps() {
                continue;
            }
            let robin = robin_constant(&sp.bands).unwrap();
            let cap = jacobi_capacity(&j).unwrap();
            assert!((robin + cap.ln()).abs() < 1e-6, "{a:?} {b:?}: {robin} vs {}", -cap.ln());
        }
    }

    #[test]
    fn cosh_of_green_integral_is_discriminant() {
        use crate::jacobi::{naiman_polynomial, spectrum_bands, PeriodicJacobi};
        let j = PeriodicJacobi::from_i64(&[0, 1, -1], &[1, 1, 2]).unwrap();
        let sp = spectrum_bands(&j).unwrap();
        let np = naiman_polynomial(&j).unwrap();
        let g = Green::new(&sp.bands).unwrap();
        let r = j.r() as f64;
        let (lo, hi) = sp.bands.hull();
        let rad = 0.5 * (hi - lo) + 1.0;
        let mid = 0.5 * (lo + hi);
        for k in 0..50 {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / 50.0;
            let z = Complex64::new(mid + rad * th.cos(), rad * th.sin());
            let lhs = 2.0 * (r * g.big_g(z).unwrap()).cosh();
            let rhs = np.p_tilde.eval(z);
            assert!((lhs - rhs).norm() < 1e-8 * rhs.norm().max(1.0), "{z}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn gap_moments_are_settled() {
        let e = bs(&[-2.0, -0.5, 0.3, 1.0, 1.7, 3.0]);
        let d = solve_r(&e).unwrap();
        for k in 0..2 {
            let (a, b) = (d.eu[2 * k + 1], d.eu[2 * k + 2]);
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            let rule = |n: usize| -> f64 {
                let dt = std::f64::consts::PI / n as f64;
                (0..n)
                    .map(|i| {
                        let t = c + h * ((i as f64 + 0.5) * dt).cos();
                        t / rest_abs(&d.eu, t, (2 * k + 1, 2 * k + 2)).sqrt()
                    })
                    .sum::<f64>()
                    * dt
            };
            assert!((rule(256) - rule(512)).abs() < 1e-10);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(200))]
        #[test]
        fn roots_of_r_sit_inside_gaps(
            lens in proptest::collection::vec(0.05f64..2.0, 3..=5),
            three in proptest::bool::ANY,
        ) {
            let count = if three { 5 } else { 3 };
            let mut ends = vec![-1.0];
            for l in lens.iter().take(count) {
                let x = ends.last().unwrap() + l;
                ends.push(x);
            }
            if ends.len() % 2 == 1 {
                let x = ends.last().unwrap() + 0.5;
                ends.push(x);
            }
            let e = bs(&ends);
            let d = harmonic_measures(&e).unwrap();
            for (g, l) in e.gaps().iter().zip(&d.lambda) {
                proptest::prop_assert!(*l > g.0 && *l < g.1);
            }
            proptest::prop_assert!((d.omega.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            proptest::prop_assert!(d.omega.iter().all(|w| *w > 0.0));
        }
    }
}
