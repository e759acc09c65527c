//! Polynomial roots by Aberth–Ehrlich simultaneous iteration, with a
//! companion-matrix eigenvalue fallback.
//!
//! Exact polynomials are evaluated through a fixed-point big-integer Horner
//! scheme, so cancellation in high-degree polynomials with large coefficients
//! does not limit the attainable accuracy.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::GaussianInt;
use crate::error::{Error, Result};
use crate::poly::{GaussianIntPoly, RationalPoly, RealPoly};

pub const DEFAULT_TOL: f64 = 1e-10;
const MAX_ITERS: usize = 600;
const FIXED_POINT_BITS: u64 = 80;

/// One Newton step's worth of information at a point.
pub struct NewtonData {
    /// `p(z) / p'(z)`
    pub ratio: Complex64,
    /// `ln |p(z)|`, `-inf` at an exact root.
    pub ln_abs: f64,
}

pub trait Evaluator: Sync {
    fn degree(&self) -> usize;
    /// `ln` of the largest coefficient magnitude.
    fn ln_scale(&self) -> f64;
    /// `ln |c_0|` and `ln |c_n|`, used to size the starting circle.
    fn ln_end_coeffs(&self) -> (f64, f64);
    fn newton(&self, z: Complex64) -> NewtonData;
}

/// Plain double-precision Horner.
pub struct FloatEvaluator {
    coeffs: Vec<Complex64>,
}

impl FloatEvaluator {
    pub fn new(coeffs: &[Complex64]) -> Self {
        let mut c = coeffs.to_vec();
        while c.last().is_some_and(|x| x.norm() == 0.0) {
            c.pop();
        }
        FloatEvaluator { coeffs: c }
    }
}

impl Evaluator for FloatEvaluator {
    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn ln_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max).ln()
    }

    fn ln_end_coeffs(&self) -> (f64, f64) {
        (
            self.coeffs[0].norm().ln(),
            self.coeffs.last().unwrap().norm().ln(),
        )
    }

    fn newton(&self, z: Complex64) -> NewtonData {
        let n = self.coeffs.len() - 1;
        let mut b = self.coeffs[n];
        let mut d = Complex64::zero();
        for k in (0..n).rev() {
            d = d * z + b;
            b = b * z + self.coeffs[k];
        }
        NewtonData {
            ratio: b / d,
            ln_abs: b.norm().ln(),
        }
    }
}

/// Exact evaluation of a Gaussian-integer polynomial at the fixed-point
/// quantization of `z` (80 fractional bits).
pub struct ExactEvaluator {
    coeffs: Vec<GaussianInt>,
    ln_scale: f64,
}

impl ExactEvaluator {
    pub fn new(p: &GaussianIntPoly) -> Self {
        let coeffs = p.coeffs().to_vec();
        let ln_scale = coeffs
            .iter()
            .map(ln_abs_gint)
            .fold(f64::NEG_INFINITY, f64::max);
        ExactEvaluator { coeffs, ln_scale }
    }

    /// Clears denominators; the roots are unchanged.
    pub fn from_rational(p: &RationalPoly) -> Self {
        let (n, _) = p.to_scaled_int();
        Self::new(&GaussianIntPoly::new(n))
    }
}

pub(crate) fn ln_abs_big(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

pub(crate) fn ln_abs_gint(z: &GaussianInt) -> f64 {
    let (a, b) = (ln_abs_big(&z.re), ln_abs_big(&z.im));
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + 0.5 * ((2.0 * (a - m)).exp() + (2.0 * (b - m)).exp()).ln()
}

/// `z / 2^shift` as a float pair together with the extra binary exponent,
/// i.e. the value is `mantissa * 2^exp`.
fn gint_to_scaled(z: &GaussianInt) -> (Complex64, i64) {
    let bits = z.re.bits().max(z.im.bits()) as i64;
    let shift = (bits - 60).max(0);
    let re = (&z.re >> shift as usize).to_f64().unwrap();
    let im = (&z.im >> shift as usize).to_f64().unwrap();
    (Complex64::new(re, im), shift)
}

fn quantize(x: f64) -> BigInt {
    let scaled = x * (FIXED_POINT_BITS as f64).exp2();
    BigInt::from_f64_round(scaled)
}

trait FromF64Round {
    fn from_f64_round(x: f64) -> BigInt;
}

impl FromF64Round for BigInt {
    fn from_f64_round(x: f64) -> BigInt {
        num_traits::FromPrimitive::from_f64(x.round()).unwrap_or_default()
    }
}

impl Evaluator for ExactEvaluator {
    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn ln_scale(&self) -> f64 {
        self.ln_scale
    }

    fn ln_end_coeffs(&self) -> (f64, f64) {
        (
            ln_abs_gint(&self.coeffs[0]),
            ln_abs_gint(self.coeffs.last().unwrap()),
        )
    }

    fn newton(&self, z: Complex64) -> NewtonData {
        let s = FIXED_POINT_BITS as usize;
        let n = self.coeffs.len() - 1;
        let zq = Complex::new(quantize(z.re), quantize(z.im));
        let mut b = self.coeffs[n].clone();
        let mut d: GaussianInt = Complex::new(BigInt::zero(), BigInt::zero());
        for k in (0..n).rev() {
            d = &d * &zq + &b;
            let c = &self.coeffs[k];
            let sh = s * (n - k);
            b = &b * &zq + Complex::new(&c.re << sh, &c.im << sh);
        }
        // p = b / 2^{sn}, p' = d / 2^{s(n-1)}
        let (bm, be) = gint_to_scaled(&b);
        let ln_abs = if b.is_zero() {
            f64::NEG_INFINITY
        } else {
            bm.norm().ln() + (be - (s * n) as i64) as f64 * std::f64::consts::LN_2
        };
        let ratio = if d.is_zero() {
            Complex64::new(f64::INFINITY, 0.0)
        } else if b.is_zero() {
            Complex64::zero()
        } else {
            let (dm, de) = gint_to_scaled(&d);
            let e = be - de - s as i64;
            (bm / dm) * (e as f64).exp2()
        };
        NewtonData { ratio, ln_abs }
    }
}

fn initial_guesses(ev: &dyn Evaluator) -> Vec<Complex64> {
    let n = ev.degree();
    let (l0, ln) = ev.ln_end_coeffs();
    let mut r = ((l0 - ln) / n as f64).exp();
    if !r.is_finite() || r <= 0.0 {
        r = 1.0;
    }
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(r, t)
        })
        .collect()
}

fn residual_ok(ev: &dyn Evaluator, z: Complex64, tol: f64) -> (bool, f64) {
    let nd = ev.newton(z);
    let n = ev.degree() as f64;
    let bound = tol.ln() + ev.ln_scale() + n * z.norm().max(1.0).ln();
    (nd.ln_abs <= bound, nd.ln_abs - bound)
}

/// Aberth–Ehrlich iteration against an arbitrary evaluator.
pub fn aberth(ev: &dyn Evaluator, tol: f64) -> Result<Vec<Complex64>> {
    let n = ev.degree();
    if n == 0 {
        return Err(Error::invalid("roots of a constant polynomial"));
    }
    let mut z = initial_guesses(ev);
    let mut done = vec![false; n];
    let mut iters = 0;
    while iters < MAX_ITERS && done.iter().any(|d| !d) {
        iters += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let nd = ev.newton(z[i]);
            if nd.ln_abs == f64::NEG_INFINITY {
                done[i] = true;
                continue;
            }
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::zero()
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let w = nd.ratio / (Complex64::new(1.0, 0.0) - nd.ratio * s);
            if !w.is_finite() {
                let bump = Complex64::new(1e-8, 1e-8) * z[i].norm().max(1.0);
                z[i] += bump;
                continue;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(1e-300) {
                done[i] = true;
            }
        }
    }
    let worst = z
        .iter()
        .map(|&r| residual_ok(ev, r, tol))
        .fold((true, f64::NEG_INFINITY), |(ok, w), (o, e)| (ok && o, w.max(e)));
    if worst.0 {
        Ok(z)
    } else {
        Err(Error::RootsNotConverged {
            best: z,
            residual: worst.1.exp() * tol,
            iterations: iters,
        })
    }
}

/// Eigenvalues of the companion matrix.
pub fn companion_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let ev = FloatEvaluator::new(coeffs);
    let n = ev.degree();
    if n == 0 {
        return Err(Error::invalid("roots of a constant polynomial"));
    }
    let lead = ev.coeffs[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -ev.coeffs[i] / lead;
    }
    let schur = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Singular("companion eigenvalue iteration failed".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

fn strip_zero_roots<T: Clone + Zero>(coeffs: &[T]) -> (usize, Vec<T>) {
    let k = coeffs.iter().take_while(|c| c.is_zero()).count();
    (k, coeffs[k..].to_vec())
}

fn run(ev: &dyn Evaluator, zeros: usize, fallback: impl FnOnce() -> Result<Vec<Complex64>>, tol: f64) -> Result<Vec<Complex64>> {
    let mut out = vec![Complex64::zero(); zeros];
    if ev.degree() == 0 {
        return Ok(out);
    }
    match aberth(ev, tol) {
        Ok(r) => out.extend(r),
        Err(err) => {
            let r = fallback()?;
            let ok = r.iter().all(|&x| residual_ok(ev, x, tol).0);
            if !ok {
                return Err(err);
            }
            out.extend(r);
        }
    }
    Ok(out)
}

/// Roots of a polynomial with complex float coefficients (ascending). Every
/// returned root satisfies `|p(r)| <= tol * scale(p) * max(1,|r|)^deg`.
pub fn roots(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let ev = FloatEvaluator::new(coeffs);
    if ev.degree() == 0 {
        return Err(Error::invalid("roots of a constant polynomial"));
    }
    let (zeros, rest) = strip_zero_roots(&ev.coeffs);
    let inner = FloatEvaluator::new(&rest);
    run(&inner, zeros, || companion_roots(&rest), tol)
}

pub fn roots_real(p: &RealPoly, tol: f64) -> Result<Vec<Complex64>> {
    roots(&p.to_c64(), tol)
}

/// Roots of an exact polynomial, evaluated exactly during iteration.
pub fn roots_exact(p: &RationalPoly, tol: f64) -> Result<Vec<Complex64>> {
    if p.degree() == 0 {
        return Err(Error::invalid("roots of a constant polynomial"));
    }
    let (n, _) = p.to_scaled_int();
    let (zeros, rest) = strip_zero_roots(&n);
    let ip = GaussianIntPoly::new(rest);
    let ev = ExactEvaluator::new(&ip);
    let c64 = ip.to_c64();
    run(&ev, zeros, || companion_roots(&c64), tol)
}

pub fn roots_gint(p: &GaussianIntPoly, tol: f64) -> Result<Vec<Complex64>> {
    roots_exact(&p.to_rational(), tol)
}

/// Sorts by real part, then imaginary part.
pub fn sort_roots(r: &mut [Complex64]) {
    r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn close_sets(mut a: Vec<Complex64>, mut b: Vec<Complex64>, tol: f64) -> bool {
        sort_roots(&mut a);
        sort_roots(&mut b);
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn small_examples() {
        let r = roots(&[c(-1.0), c(0.0), c(1.0)], DEFAULT_TOL).unwrap();
        assert!(close_sets(r, vec![c(-1.0), c(1.0)], 1e-12));
        let r = roots(&[c(0.0), c(-1.0), c(1.0)], DEFAULT_TOL).unwrap();
        assert!(close_sets(r, vec![c(0.0), c(1.0)], 1e-12));
        let s3 = 3f64.sqrt();
        let p = RationalPoly::from_i64(&[0, -3, 0, 1]);
        let r = roots_exact(&p, DEFAULT_TOL).unwrap();
        assert!(close_sets(r, vec![c(-s3), c(0.0), c(s3)], 1e-12));
    }

    #[test]
    fn high_degree_chebyshev_is_accurate() {
        // monic Chebyshev of [-2,2], degree 64: roots 2 cos((2k+1)pi/128)
        let mut prev = RationalPoly::from_i64(&[2]);
        let mut cur = RationalPoly::z();
        for _ in 1..64 {
            let next = &(&RationalPoly::z() * &cur) - &prev;
            prev = cur;
            cur = next;
        }
        let r = roots_exact(&cur, DEFAULT_TOL).unwrap();
        let expected: Vec<_> = (0..64)
            .map(|k| c(2.0 * ((2 * k + 1) as f64 * std::f64::consts::PI / 128.0).cos()))
            .collect();
        assert!(close_sets(r, expected, 1e-12));
    }

    #[test]
    fn multiple_roots_meet_residual_contract() {
        let p = RationalPoly::from_i64(&[-1, 1]).pow(4).unwrap();
        let r = roots_exact(&p, DEFAULT_TOL).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|x| (x - c(1.0)).norm() < 1e-3));
    }

    #[test]
    fn companion_agrees() {
        let r = companion_roots(&[c(6.0), c(-5.0), c(1.0)]).unwrap();
        assert!(close_sets(r, vec![c(2.0), c(3.0)], 1e-10));
    }
}
