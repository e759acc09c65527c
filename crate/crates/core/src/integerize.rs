//! Integer lifting of powers of monic rational polynomials, Rouché
//! certification on lemniscates, and the equidistribution pipeline.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::arith::{format_gaussian_rational, gq_int, round_to_grid, GaussianRational, GaussianRationalExt};
use crate::error::{Error, Result};
use crate::jacobi::{naiman_polynomial, NaimanPolynomial, PeriodicJacobi};
use crate::poly::{GaussianIntPoly, RationalPoly};
use crate::roots::{self, Evaluator};
use crate::sets::BandSet;

/// Default largest lifted degree `K c`.
pub const DEFAULT_LIFT_DEGREE: usize = 2048;
pub const DEFAULT_SAMPLES: usize = 512;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftParams {
    pub k: usize,
    /// Common denominator of the coefficients of `P`.
    pub m: String,
    pub a: usize,
    pub b: Option<u64>,
    pub c: usize,
    pub r2: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftCertificate {
    pub gamma: GaussianIntPoly,
    /// `lambdas[i - 1][j - 1]` multiplies `z^{K-j} P^{c-a-i}`.
    pub lambdas: Vec<Vec<GaussianRational>>,
    pub params: LiftParams,
    /// Sampled max of `|Γ - P^c| / |P^c|` on the lemniscate `|P| = R2`.
    pub rouche_margin: Option<f64>,
    /// `2M / (R2^a (R2 - 1))`.
    pub analytic_bound: Option<f64>,
    pub certified: bool,
    /// Whether the sampled margin also stays below 1/2.
    pub half_threshold: bool,
    pub zero_counts: Vec<usize>,
    pub roots_inside: Option<usize>,
}

impl LiftCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "gamma": self.gamma.to_strings(),
            "lambdas": self.lambdas.iter()
                .map(|row| row.iter().map(format_gaussian_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "params": self.params,
            "rouche_margin": self.rouche_margin,
            "analytic_bound": self.analytic_bound,
            "certified": self.certified,
            "half_threshold": self.half_threshold,
            "zero_counts": self.zero_counts,
            "roots_inside": self.roots_inside,
        })
    }

    /// Lifts with `c = 1` leave an already integral `P` untouched.
    fn identity(p: &GaussianIntPoly) -> Self {
        LiftCertificate {
            gamma: p.clone(),
            lambdas: vec![],
            params: LiftParams {
                k: p.degree(),
                m: "1".into(),
                a: 0,
                b: None,
                c: 1,
                r2: None,
            },
            rouche_margin: None,
            analytic_bound: None,
            certified: false,
            half_threshold: false,
            zero_counts: vec![],
            roots_inside: None,
        }
    }
}

fn check_monic(p: &RationalPoly) -> Result<usize> {
    if p.is_zero() || p.degree() == 0 || !p.is_monic() {
        return Err(Error::invalid("expected a monic polynomial of degree at least 1"));
    }
    Ok(p.degree())
}

/// Coefficients of `z^{Kc-1}, ..., z^{Kc-count}` of `P^c`, from the power
/// of the reversed series (`g_n = (1/n) Σ ((c+1)k - n) f_k g_{n-k}`).
pub fn top_power_coefficients(p: &RationalPoly, c: usize, count: usize) -> Result<Vec<GaussianRational>> {
    let k = check_monic(p)?;
    let f: Vec<GaussianRational> = (0..=count)
        .map(|i| if i <= k { p.coeff(k - i) } else { gq_int(0) })
        .collect();
    let mut g = vec![gq_int(1)];
    for n in 1..=count {
        let mut acc = gq_int(0);
        for (kk, fk) in f.iter().enumerate().take(n + 1).skip(1) {
            if fk.is_zero() {
                continue;
            }
            let w = ((c as i64 + 1) * kk as i64) - n as i64;
            if w == 0 {
                continue;
            }
            acc = acc + fk * &g[n - kk] * gq_int(w);
        }
        g.push(acc / gq_int(n as i64));
    }
    Ok(g.split_off(1))
}

/// First protected coefficient of `P^c` that is not a Gaussian integer.
pub fn protected_failure(p: &RationalPoly, a: usize, c: usize) -> Result<Option<(usize, GaussianRational)>> {
    let k = check_monic(p)?;
    let top = top_power_coefficients(p, c, a * k)?;
    Ok(top
        .into_iter()
        .enumerate()
        .find(|(_, x)| !x.is_gaussian_integer())
        .map(|(t, x)| (k * c - t - 1, x)))
}

/// Smallest `c` in `a+1..=c_max` whose protected coefficients are integral.
pub fn minimal_c(p: &RationalPoly, a: usize, c_max: usize) -> Result<Option<usize>> {
    for c in a + 1..=c_max {
        if protected_failure(p, a, c)?.is_none() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// The sufficient schedule `b = a^K`, `c = b! m^b`, refused when `c` exceeds
/// `c_max`.
pub fn factorial_schedule(a: usize, k: usize, m: &BigInt, c_max: usize) -> Result<(u64, usize)> {
    let too_big = || Error::BudgetExceeded(format!("schedule c = b! m^b exceeds {c_max} (a = {a}, K = {k})"));
    let b = (a as u64).checked_pow(k as u32).ok_or_else(too_big)?;
    let limit = BigInt::from(c_max);
    let mut c = BigInt::one();
    for i in 1..=b {
        c *= BigInt::from(i) * m;
        if c > limit {
            return Err(too_big());
        }
    }
    let c = c.to_usize().ok_or_else(too_big)?;
    if c <= b as usize {
        return Err(Error::invalid(format!("schedule gives c = {c} not above b = {b}")));
    }
    Ok((b, c))
}

/// Triangular λ-correction of `P^c` into a monic Gaussian-integer polynomial.
pub fn integer_lift(p: &RationalPoly, a: usize, c: usize, max_degree: usize) -> Result<LiftCertificate> {
    let k = check_monic(p)?;
    if a < 1 || a >= c {
        return Err(Error::invalid(format!("need 1 <= a < c, got a = {a}, c = {c}")));
    }
    if k * c > max_degree {
        return Err(Error::BudgetExceeded(format!(
            "lift degree K c = {} exceeds budget {max_degree}",
            k * c
        )));
    }
    if let Some((degree, value)) = protected_failure(p, a, c)? {
        return Err(Error::ProtectedCoefficient {
            degree,
            value: format_gaussian_rational(&value),
        });
    }
    let low = c - a;
    // P^{c-a-1} downwards by exact division
    let mut power = p.pow((low - 1) as u32)?;
    let mut gamma: Vec<GaussianRational> = p.pow(c as u32)?.coeffs().to_vec();
    let mut lambdas = Vec::with_capacity(low);
    for i in 1..=low {
        let mut row = Vec::with_capacity(k);
        let pc = power.coeffs();
        let base = k * (low - i);
        for j in 1..=k {
            let d = base + k - j;
            let x = &gamma[d];
            let residue = x - GaussianRational::from_gaussian_int(&x.round_nearest());
            let lambda = -residue;
            if !lambda.is_zero() {
                // add λ z^{K-j} P^{c-a-i}
                for (t, coef) in pc.iter().enumerate() {
                    let slot = &mut gamma[t + k - j];
                    *slot = &*slot + &lambda * coef;
                }
            }
            debug_assert!(gamma[d].is_gaussian_integer());
            row.push(lambda);
        }
        lambdas.push(row);
        if i < low {
            let (q, rem) = power.div_rem(p)?;
            if !rem.is_zero() {
                return Err(Error::Inconsistent("power of P not divisible by P".into()));
            }
            power = q;
        }
    }
    let mut ints = Vec::with_capacity(gamma.len());
    for (deg, x) in gamma.iter().enumerate() {
        if !x.is_gaussian_integer() {
            return Err(Error::Inconsistent(format!(
                "lifted coefficient of z^{deg} is {} after elimination",
                format_gaussian_rational(x)
            )));
        }
        ints.push(x.round_nearest());
    }
    Ok(LiftCertificate {
        gamma: GaussianIntPoly::new(ints),
        lambdas,
        params: LiftParams {
            k,
            m: p.common_denominator().to_string(),
            a,
            b: None,
            c,
            r2: None,
        },
        rouche_margin: None,
        analytic_bound: None,
        certified: false,
        half_threshold: false,
        zero_counts: vec![],
        roots_inside: None,
    })
}

/// `n` points on each of the `K` arcs of the lemniscate `|P| = R2`, paired
/// with the value `P(z) = R2 e^{iθ}`.
pub fn lemniscate_points(p: &RationalPoly, r2: f64, n: usize) -> Result<Vec<(Complex64, Complex64)>> {
    let coeffs = p.to_c64();
    let chunks: Vec<Result<Vec<(Complex64, Complex64)>>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let w = Complex64::from_polar(r2, 2.0 * std::f64::consts::PI * s as f64 / n as f64);
            let mut q = coeffs.clone();
            q[0] -= w;
            Ok(roots::roots(&q, roots::DEFAULT_TOL)?.into_iter().map(|z| (z, w)).collect())
        })
        .collect();
    let mut out = Vec::new();
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

/// Samples `|Γ - P^c| / |P^c| = |Σ_i S_i(z) P^{-(a+i)}|` on `|P| = R2`.
pub fn rouche_certify(p: &RationalPoly, cert: &LiftCertificate, r2: f64, n_samples: usize) -> Result<LiftCertificate> {
    if r2.is_nan() || r2 <= 1.0 {
        return Err(Error::invalid("R2 must exceed 1"));
    }
    if n_samples < 64 {
        return Err(Error::invalid("at least 64 lemniscate samples are required"));
    }
    let k = cert.params.k;
    let a = cert.params.a;
    let lambdas: Vec<Vec<Complex64>> = cert
        .lambdas
        .iter()
        .map(|row| row.iter().map(|x| x.to_c64()).collect())
        .collect();
    let pts = lemniscate_points(p, r2, n_samples)?;
    let (margin, m) = pts
        .par_iter()
        .map(|&(z, w)| {
            let u = w.inv();
            let mut acc = Complex64::new(0.0, 0.0);
            for row in lambdas.iter().rev() {
                let s = row.iter().fold(Complex64::new(0.0, 0.0), |h, l| h * z + l);
                acc = (acc + s) * u;
            }
            let dev = (acc * u.powu(a as u32)).norm();
            let mz: f64 = (0..k).map(|e| z.norm().powi(e as i32)).sum();
            (dev, mz)
        })
        .reduce(|| (0.0, 0.0), |x, y| (x.0.max(y.0), x.1.max(y.1)));
    let mut out = cert.clone();
    out.params.r2 = Some(r2);
    out.rouche_margin = Some(margin);
    out.analytic_bound = Some(2.0 * m / (r2.powi(a as i32) * (r2 - 1.0)));
    out.certified = margin < 1.0;
    out.half_threshold = margin <= 0.5;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroCount {
    /// Roots of Γ with `|P| < R2`.
    pub inside: usize,
    pub outside: Vec<(f64, f64)>,
    /// Roots per band, nearest band first (empty without bands).
    pub per_band: Vec<usize>,
    pub roots: Vec<(f64, f64)>,
}

/// Locates the roots of Γ relative to the lemniscate `|P| < R2`.
pub fn count_inside(gamma: &GaussianIntPoly, p: &RationalPoly, r2: f64, bands: Option<&BandSet>) -> Result<ZeroCount> {
    let zs = roots::roots_gint(gamma, roots::DEFAULT_TOL)?;
    let (scaled, den) = p.to_scaled_int();
    let ev = roots::ExactEvaluator::new(&GaussianIntPoly::new(scaled));
    let ln_den = roots::ln_abs_big(&den);
    let ln_r2 = r2.ln();
    let mut inside = 0;
    let mut outside = Vec::new();
    let mut per_band = vec![0; bands.map_or(0, |b| b.r())];
    for z in &zs {
        if ev.newton(*z).ln_abs - ln_den < ln_r2 {
            inside += 1;
        } else {
            outside.push((z.re, z.im));
        }
        if let Some(b) = bands {
            let best = (0..b.r())
                .min_by(|&i, &j| {
                    let d = |k: usize| BandSet::interval(b.band(k).0, b.band(k).1).map(|x| x.dist(*z)).unwrap_or(f64::INFINITY);
                    d(i).total_cmp(&d(j))
                })
                .unwrap_or(0);
            per_band[best] += 1;
        }
    }
    Ok(ZeroCount {
        inside,
        outside,
        per_band,
        roots: zs.iter().map(|z| (z.re, z.im)).collect(),
    })
}

/// Roots of a certified lift must all lie inside the lemniscate.
pub fn zero_localization(
    cert: &LiftCertificate,
    p: &RationalPoly,
    r2: f64,
    bands: Option<&BandSet>,
) -> Result<LiftCertificate> {
    if !cert.certified {
        return Err(Error::invalid("zero localization needs a certified lift"));
    }
    let count = count_inside(&cert.gamma, p, r2, bands)?;
    let total = cert.params.k * cert.params.c;
    if count.inside != total {
        return Err(Error::Inconsistent(format!(
            "certified lift has {} of {total} roots outside |P| < {r2}; sampling too sparse",
            total - count.inside
        )));
    }
    let mut out = cert.clone();
    out.roots_inside = Some(count.inside);
    out.zero_counts = if count.per_band.is_empty() { vec![count.inside] } else { count.per_band };
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LiftSearch {
    pub max_a: usize,
    pub max_degree: usize,
    pub n_samples: usize,
}

impl Default for LiftSearch {
    fn default() -> Self {
        LiftSearch {
            max_a: 4,
            max_degree: DEFAULT_LIFT_DEGREE,
            n_samples: DEFAULT_SAMPLES,
        }
    }
}

/// Lifts `P`: identity when already integral, otherwise the first certified
/// `(a, minimal c)` for `a = 1..=max_a`, else the lift with smallest margin.
pub fn best_lift(p: &RationalPoly, r2: f64, search: &LiftSearch) -> Result<LiftCertificate> {
    let k = check_monic(p)?;
    if let Some(g) = p.to_gaussian_int_poly() {
        let mut cert = LiftCertificate::identity(&g);
        cert.params.r2 = Some(r2);
        cert.rouche_margin = Some(0.0);
        cert.analytic_bound = Some(0.0);
        cert.certified = true;
        cert.half_threshold = true;
        return Ok(cert);
    }
    let c_max = search.max_degree / k;
    let mut best: Option<LiftCertificate> = None;
    let mut last_err = None;
    for a in 1..=search.max_a {
        let Some(c) = minimal_c(p, a, c_max)? else {
            last_err = Some(Error::BudgetExceeded(format!(
                "no c <= {c_max} makes the top {a}K coefficients of P^c integral"
            )));
            break;
        };
        let cert = rouche_certify(p, &integer_lift(p, a, c, search.max_degree)?, r2, search.n_samples)?;
        if cert.certified {
            return Ok(cert);
        }
        if best.as_ref().is_none_or(|b| b.rouche_margin > cert.rouche_margin) {
            best = Some(cert);
        }
    }
    match (best, last_err) {
        (Some(b), _) => Ok(b),
        (None, Some(e)) => Err(e),
        (None, None) => Err(Error::invalid("max_a must be at least 1")),
    }
}

/// Where the periodic structure of the pipeline comes from.
#[derive(Clone, Debug)]
pub enum PipelineSource {
    Bands(BandSet),
    Jacobi(PeriodicJacobi),
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Largest degree of the compositions `P_n`.
    pub degree_budget: usize,
    /// Entries and coefficients are rounded to `Z[i] / denom_bound`.
    pub denom_bound: u64,
    /// Lemniscate level; default `1 + 1/deg(P_n)`.
    pub r2: Option<f64>,
    /// Calibration degree for band input (default: number of bands).
    pub calibration_m: Option<usize>,
    pub lift: LiftSearch,
    /// Number of moments in the distance.
    pub moments: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            degree_budget: 64,
            denom_bound: 1_000_000,
            r2: None,
            calibration_m: None,
            lift: LiftSearch::default(),
            moments: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineStep {
    pub n: usize,
    /// Degree of `P_n`.
    pub degree: usize,
    pub p_n: RationalPoly,
    pub certificate: LiftCertificate,
    /// Moment gap between the zeros of Γ and the equilibrium measure.
    pub moment_distance: f64,
    /// `||P_n||^{1/deg}` on the spectrum, `(2|B|^n)^{1/deg}`.
    pub capacity_estimate: f64,
    /// Roots of Γ per band of the spectrum.
    pub band_counts: Vec<usize>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineReport {
    pub naiman: NaimanPolynomial,
    pub spectrum: BandSet,
    pub reference_moments: Vec<f64>,
    /// Hausdorff-type displacement of the spectrum from the input set.
    pub spectrum_error: f64,
    pub steps: Vec<PipelineStep>,
    /// Whether the moment distances never increase.
    pub non_increasing: bool,
}

impl PipelineReport {
    pub fn diagnostics_csv(&self) -> String {
        let mut s = String::from("degree,rouche_margin,moment_distance,capacity_estimate\n");
        for st in &self.steps {
            let deg = st.certificate.gamma.degree();
            let margin = st.certificate.rouche_margin.map_or(String::new(), |m| format!("{m:e}"));
            s.push_str(&format!("{deg},{margin},{:e},{}\n", st.moment_distance, st.capacity_estimate));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "naiman": {
                "p": self.naiman.p.to_strings(),
                "modulus": format_gaussian_rational(&self.naiman.modulus),
            },
            "spectrum": self.spectrum,
            "reference_moments": self.reference_moments,
            "spectrum_error": self.spectrum_error,
            "non_increasing": self.non_increasing,
            "steps": self.steps.iter().map(|st| json!({
                "n": st.n,
                "degree": st.degree,
                "p_n": st.p_n.to_strings(),
                "certificate": st.certificate.to_json(),
                "moment_distance": st.moment_distance,
                "capacity_estimate": st.capacity_estimate,
                "band_counts": st.band_counts,
                "error": st.error,
            })).collect::<Vec<_>>(),
        })
    }
}

fn rational_naiman(t: &crate::poly::RealPoly, norm: f64, denom: u64) -> Result<NaimanPolynomial> {
    let n = t.degree();
    let mut coeffs = Vec::with_capacity(n + 1);
    for (i, &x) in t.coeffs.iter().enumerate() {
        let q = if i == n { BigRational::one() } else { round_to_grid(x, denom)? };
        coeffs.push(GaussianRational::new(q, BigRational::zero()));
    }
    let p = RationalPoly::new(coeffs);
    let b = round_to_grid(0.5 * norm, denom)?;
    if b.is_zero() {
        return Err(Error::invalid("modulus rounds to zero; increase the denominator bound"));
    }
    let modulus = GaussianRational::new(b, BigRational::zero());
    let p_tilde = p.scale(&(GaussianRational::new(BigRational::one(), BigRational::zero()) / &modulus));
    Ok(NaimanPolynomial { p, modulus, p_tilde })
}

fn band_hausdorff(a: &BandSet, b: &BandSet) -> f64 {
    let one = |x: &BandSet, y: &BandSet| {
        x.bands()
            .iter()
            .flat_map(|&(s, t)| crate::chebyshev::lobatto_grid(s, t, 65))
            .map(|p| y.dist(Complex64::new(p, 0.0)))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// Builds monic compositions `P_n` of a periodic structure close to `E`,
/// lifts each to a monic integer polynomial, certifies it on a lemniscate
/// and tracks the distance of its zero distribution to the equilibrium
/// measure.
pub fn pipeline(source: &PipelineSource, opts: &PipelineOptions) -> Result<PipelineReport> {
    let (naiman, capacity, target, reference) = match source {
        PipelineSource::Jacobi(j) => {
            if !j.is_real() {
                return Err(Error::invalid("the pipeline works with real Jacobi matrices"));
            }
            let rj = crate::jacobi::rationalize(j, opts.denom_bound)?.jacobi;
            let np = naiman_polynomial(&rj)?;
            let spec = crate::jacobi::spectrum_bands(&rj)?;
            let cap = crate::jacobi::jacobi_capacity(&rj)?;
            let refm: Vec<f64> = crate::jacobi::equilibrium_moments(&rj, opts.moments)?
                .into_iter()
                .map(|z| z.re)
                .collect();
            (np, cap, spec.bands, refm)
        }
        PipelineSource::Bands(e) => {
            let cap = crate::calibration::Green::new(e)?.capacity();
            if cap < 1.0 - 1e-9 {
                return Err(refusal(cap));
            }
            let m = opts.calibration_m.unwrap_or(e.r());
            let cal = crate::calibration::calibrate(e, m)?;
            let cosh = crate::calibration::cosh_polynomial(&cal.bands, m)?;
            let np = rational_naiman(&cosh.t, cosh.norm, opts.denom_bound)?;
            let refm = crate::calibration::band_equilibrium_moments(e, opts.moments)?;
            (np, cap, e.clone(), refm)
        }
    };
    if capacity < 1.0 - 1e-9 {
        return Err(refusal(capacity));
    }
    let spectrum = spectrum_of(&naiman)?;
    let spectrum_error = band_hausdorff(&spectrum, &target);
    let r = naiman.p.degree();
    let b = naiman.modulus.to_c64().norm();
    let reference: Vec<Complex64> = reference.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let ns: Vec<usize> = (1..).take_while(|n| n * r <= opts.degree_budget).collect();
    let steps: Vec<PipelineStep> = ns
        .par_iter()
        .map(|&n| -> Result<PipelineStep> {
            let p_n = crate::chebyshev::compose_from_naiman(&naiman, n)?;
            let deg = p_n.degree();
            let r2 = opts.r2.unwrap_or(1.0 + 1.0 / deg as f64);
            let capacity_estimate = (2.0 * b.powi(n as i32)).powf(1.0 / deg as f64);
            let mut error = None;
            let cert = match best_lift(&p_n, r2, &opts.lift) {
                Ok(c) => c,
                Err(e) => {
                    return Ok(PipelineStep {
                        n,
                        degree: deg,
                        p_n,
                        certificate: LiftCertificate::identity(&GaussianIntPoly::new(vec![])),
                        moment_distance: f64::NAN,
                        capacity_estimate,
                        band_counts: vec![],
                        error: Some(e.to_string()),
                    })
                }
            };
            let cert = if cert.certified {
                match zero_localization(&cert, &p_n, r2, Some(&spectrum)) {
                    Ok(c) => c,
                    Err(e @ Error::Inconsistent(_)) => return Err(e),
                    Err(e) => {
                        error = Some(e.to_string());
                        cert
                    }
                }
            } else {
                cert
            };
            let band_counts = if cert.roots_inside.is_some() {
                cert.zero_counts.clone()
            } else {
                count_inside(&cert.gamma, &p_n, r2, Some(&spectrum))?.per_band
            };
            let ps = cert.gamma.to_rational().root_power_sums(opts.moments)?;
            let total = cert.gamma.degree() as f64;
            let moments: Vec<Complex64> = ps.iter().map(|s| s.to_c64() / total).collect();
            let moment_distance = crate::measure::moment_gap(&moments, &reference);
            Ok(PipelineStep {
                n,
                degree: deg,
                p_n,
                certificate: cert,
                moment_distance,
                capacity_estimate,
                band_counts,
                error,
            })
        })
        .collect::<Result<_>>()?;
    let dists: Vec<f64> = steps.iter().map(|s| s.moment_distance).filter(|x| x.is_finite()).collect();
    let non_increasing = dists.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    Ok(PipelineReport {
        naiman,
        spectrum,
        reference_moments: reference.iter().map(|z| z.re).collect(),
        spectrum_error,
        steps,
        non_increasing,
    })
}

fn refusal(cap: f64) -> Error {
    Error::Refused(format!(
        "capacity {cap} is below 1: by Fekete's theorem only finitely many monic integer \
         polynomials have all zeros near such a set, so no equidistributing sequence exists"
    ))
}

fn spectrum_of(np: &NaimanPolynomial) -> Result<BandSet> {
    // P~ = ±2 edges through the same machinery as Jacobi spectra
    let two = crate::arith::gq_int(2);
    let mut edges = Vec::new();
    for sign in [1i64, -1] {
        let shifted = &np.p_tilde - &RationalPoly::constant(&two * &crate::arith::gq_int(sign));
        for (f, mult) in shifted.squarefree_decomposition()? {
            for z in roots::roots_exact(&f, 1e-12)? {
                if z.im.abs() > 1e-7 * z.norm().max(1.0) {
                    return Err(Error::Inconsistent(format!("non-real band edge {z}")));
                }
                for _ in 0..mult {
                    edges.push(z.re);
                }
            }
        }
    }
    edges.sort_by(f64::total_cmp);
    let intervals: Vec<(f64, f64)> = edges.chunks(2).map(|w| (w[0], w[1])).collect();
    BandSet::from_touching_intervals(&intervals)
}
