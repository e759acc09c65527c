//! Discrete probability measures and moment / potential comparison.

use num_complex::Complex64;

use crate::arith::GaussianRationalExt;
use crate::error::{Error, Result};
use crate::poly::RationalPoly;
use crate::roots::{Evaluator, ExactEvaluator};

/// Weighted point masses with total mass one.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<(Complex64, f64)>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<(Complex64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("measure has no atoms"));
        }
        if atoms.iter().any(|(z, w)| !z.is_finite() || !(*w >= 0.0)) {
            return Err(Error::invalid("atom weights must be nonnegative and locations finite"));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(DiscreteMeasure { atoms })
    }

    /// Equal weights on the given points.
    pub fn uniform(points: &[Complex64]) -> Result<Self> {
        let w = 1.0 / points.len() as f64;
        Self::new(points.iter().map(|&z| (z, w)).collect())
    }

    pub fn dirac(z: Complex64) -> Self {
        DiscreteMeasure {
            atoms: vec![(z, 1.0)],
        }
    }

    pub fn atoms(&self) -> &[(Complex64, f64)] {
        &self.atoms
    }

    pub fn points(&self) -> Vec<Complex64> {
        self.atoms.iter().map(|a| a.0).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im,weight\n");
        for (z, w) in &self.atoms {
            s.push_str(&format!("{:e},{:e},{:e}\n", z.re, z.im, w));
        }
        s
    }

    /// Reads `re,im,weight` rows; a header line is optional.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (k == 0 && line.starts_with("re")) {
                continue;
            }
            let f: Vec<f64> = line
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", k + 1)))?;
            if f.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected 3 fields", k + 1)));
            }
            atoms.push((Complex64::new(f[0], f[1]), f[2]));
        }
        Self::new(atoms)
    }
}

/// Anything with computable complex moments and logarithmic potential.
pub trait MeasureLike {
    /// `m_k = ∫ z^k dμ` for `k = 1..=count`.
    fn moments(&self, count: usize) -> Vec<Complex64>;
    /// `∫ ln(1/|z - x|) dμ(x)`.
    fn log_potential(&self, z: Complex64) -> f64;
    /// Bounding box `(re_min, re_max, im_min, im_max)` of the support.
    fn support_box(&self) -> (f64, f64, f64, f64);
}

impl MeasureLike for DiscreteMeasure {
    fn moments(&self, count: usize) -> Vec<Complex64> {
        (1..=count as i32)
            .map(|k| self.atoms.iter().map(|(z, w)| z.powi(k) * w).sum())
            .collect()
    }

    fn log_potential(&self, z: Complex64) -> f64 {
        let mut s = 0.0;
        for (x, w) in &self.atoms {
            let d = (z - x).norm();
            if d == 0.0 {
                if *w > 0.0 {
                    return f64::INFINITY;
                }
                continue;
            }
            s -= w * d.ln();
        }
        s
    }

    fn support_box(&self) -> (f64, f64, f64, f64) {
        self.atoms.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), (z, _)| (a.min(z.re), b.max(z.re), c.min(z.im), d.max(z.im)),
        )
    }
}

/// Zero counting measure of an exact polynomial, with moments from Newton's
/// identities and the potential from an exact evaluation of `ln|p|`.
pub struct PolyMeasure {
    poly: RationalPoly,
    eval: ExactEvaluator,
    lead_ln: f64,
    roots_box: (f64, f64, f64, f64),
}

impl PolyMeasure {
    pub fn new(poly: &RationalPoly) -> Result<Self> {
        if poly.degree() == 0 {
            return Err(Error::invalid("constant polynomial has no zeros"));
        }
        let (ints, _) = poly.to_scaled_int();
        let lead_ln = crate::roots::ln_abs_gint(ints.last().unwrap());
        let eval = ExactEvaluator::from_rational(poly);
        // Cauchy bound for the support box; only used to place comparison rings
        let lead = poly.leading().to_c64().norm();
        let rad = 1.0
            + poly.coeffs()[..poly.degree()]
                .iter()
                .map(|c| c.to_c64().norm() / lead)
                .fold(0.0, f64::max);
        Ok(PolyMeasure {
            poly: poly.clone(),
            eval,
            lead_ln,
            roots_box: (-rad, rad, -rad, rad),
        })
    }

    /// Replaces the coarse Cauchy box by the box of known roots.
    pub fn with_roots(mut self, roots: &[Complex64]) -> Self {
        self.roots_box = DiscreteMeasure::uniform(roots)
            .map(|m| m.support_box())
            .unwrap_or(self.roots_box);
        self
    }

    pub fn exact_moments(&self, count: usize) -> Result<Vec<crate::arith::GaussianRational>> {
        let n = crate::arith::gq_int(self.poly.degree() as i64);
        Ok(self
            .poly
            .root_power_sums(count)?
            .into_iter()
            .map(|p| p / &n)
            .collect())
    }
}

impl MeasureLike for PolyMeasure {
    fn moments(&self, count: usize) -> Vec<Complex64> {
        self.exact_moments(count)
            .expect("nonzero polynomial")
            .iter()
            .map(|m| m.to_c64())
            .collect()
    }

    fn log_potential(&self, z: Complex64) -> f64 {
        let nd = self.eval.newton(z);
        -(nd.ln_abs - self.lead_ln) / self.poly.degree() as f64
    }

    fn support_box(&self) -> (f64, f64, f64, f64) {
        self.roots_box
    }
}

/// Arcsine (equilibrium) distribution of a real interval `[a, b]`.
pub struct ArcsineMeasure {
    pub a: f64,
    pub b: f64,
}

impl MeasureLike for ArcsineMeasure {
    fn moments(&self, count: usize) -> Vec<Complex64> {
        let c = 0.5 * (self.a + self.b);
        let h = 0.5 * (self.b - self.a);
        // moments of the arcsine law on [-1,1]: E y^{2j} = C(2j,j)/4^j
        let ym = |k: usize| -> f64 {
            if k % 2 == 1 {
                return 0.0;
            }
            let j = k / 2;
            (0..j).fold(1.0, |acc, i| acc * (2 * j - i) as f64 / ((j - i) as f64 * 4.0))
        };
        (1..=count)
            .map(|k| {
                let mut s = 0.0;
                let mut binom = 1.0;
                for i in 0..=k {
                    s += binom * c.powi((k - i) as i32) * h.powi(i as i32) * ym(i);
                    binom = binom * (k - i) as f64 / (i + 1) as f64;
                }
                Complex64::new(s, 0.0)
            })
            .collect()
    }

    fn log_potential(&self, z: Complex64) -> f64 {
        let c = 0.5 * (self.a + self.b);
        let h = 0.5 * (self.b - self.a);
        let w = (z - c) / h;
        let mut s = (w * w - 1.0).sqrt();
        if (w + s).norm() < 1.0 {
            s = -s;
        }
        // potential = ln(1/cap) - green
        -(h / 2.0).ln() - (w + s).norm().ln()
    }

    fn support_box(&self) -> (f64, f64, f64, f64) {
        (self.a, self.b, 0.0, 0.0)
    }
}

/// A measure known only through its moments.
pub struct MomentsOnly(pub Vec<Complex64>);

impl MomentsOnly {
    pub fn real(m: &[f64]) -> Self {
        MomentsOnly(m.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureDistance {
    /// `max_k |m_k(mu) - m_k(nu)|`, `k = 1..=M`.
    pub moment_gap: f64,
    /// Largest potential difference on the exterior ring, when both measures
    /// expose potentials.
    pub potential_gap: Option<f64>,
}

pub fn moment_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// 64 points on a circle at distance one outside the joint support box.
pub fn exterior_ring(boxes: &[(f64, f64, f64, f64)]) -> Vec<Complex64> {
    let (a, b, c, d) = boxes.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), x| (a.min(x.0), b.max(x.1), c.min(x.2), d.max(x.3)),
    );
    let center = Complex64::new(0.5 * (a + b), 0.5 * (c + d));
    let radius = 0.5 * ((b - a).powi(2) + (d - c).powi(2)).sqrt() + 1.0;
    (0..64)
        .map(|k| center + Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / 64.0))
        .collect()
}

/// Moment and exterior-potential distance between two measures.
pub fn measure_distance(mu: &dyn MeasureLike, nu: &dyn MeasureLike, m: usize) -> MeasureDistance {
    let gap = moment_gap(&mu.moments(m), &nu.moments(m));
    let ring = exterior_ring(&[mu.support_box(), nu.support_box()]);
    let pot = ring
        .iter()
        .map(|&z| (mu.log_potential(z) - nu.log_potential(z)).abs())
        .fold(0.0, f64::max);
    MeasureDistance {
        moment_gap: gap,
        potential_gap: Some(pot),
    }
}

/// Moment-only distance, for references given by moments.
pub fn moment_distance(mu: &dyn MeasureLike, reference: &MomentsOnly) -> f64 {
    moment_gap(&mu.moments(reference.0.len()), &reference.0)
}

/// Complex moments of a list of points with equal weights.
pub fn point_moments(points: &[Complex64], count: usize) -> Vec<Complex64> {
    let n = points.len() as f64;
    (1..=count as i32)
        .map(|k| points.iter().map(|z| z.powi(k)).sum::<Complex64>() / n)
        .collect()
}

impl Default for MeasureDistance {
    fn default() -> Self {
        MeasureDistance {
            moment_gap: 0.0,
            potential_gap: Some(0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirac_moments() {
        let a = DiscreteMeasure::dirac(Complex64::new(0.0, 0.0));
        let b = DiscreteMeasure::dirac(Complex64::new(1.0, 0.0));
        assert_eq!(measure_distance(&a, &b, 1).moment_gap, 1.0);
        assert_eq!(measure_distance(&a, &a, 4).moment_gap, 0.0);
        assert_eq!(measure_distance(&a, &a, 4).potential_gap, Some(0.0));
    }

    #[test]
    fn csv_roundtrip() {
        let m = DiscreteMeasure::new(vec![
            (Complex64::new(0.5, -1.0), 0.25),
            (Complex64::new(2.0, 0.0), 0.75),
        ])
        .unwrap();
        let back = DiscreteMeasure::from_csv(&m.to_csv()).unwrap();
        assert_eq!(m, back);
        assert!(DiscreteMeasure::from_csv("1,2\n").is_err());
        assert!(DiscreteMeasure::new(vec![(Complex64::new(0.0, 0.0), 0.5)]).is_err());
    }

    #[test]
    fn arcsine_moments_on_standard_interval() {
        let m = ArcsineMeasure { a: -2.0, b: 2.0 }.moments(6);
        let expect = [0.0, 2.0, 0.0, 6.0, 0.0, 20.0];
        for (x, e) in m.iter().zip(expect) {
            assert!((x.re - e).abs() < 1e-12);
        }
    }

    #[test]
    fn arcsine_potential_matches_green() {
        // [-2,2] has capacity 1: potential = -g = -ln|w + sqrt(w^2-1)|
        let mu = ArcsineMeasure { a: -2.0, b: 2.0 };
        let z = Complex64::new(0.0, 3.0);
        let w = z / 2.0;
        let g = (w + (w * w - 1.0).sqrt()).norm().ln();
        assert!((mu.log_potential(z) + g).abs() < 1e-12);
    }

    #[test]
    fn poly_measure_potential_is_normalized_log() {
        let p = RationalPoly::from_i64(&[-6, 5, 1]);
        let pm = PolyMeasure::new(&p).unwrap();
        let z = Complex64::new(0.3, 1.7);
        let expected = -p.eval(z).norm().ln() / 2.0;
        assert!((pm.log_potential(z) - expected).abs() < 1e-12);
        let m = pm.moments(2);
        // roots 1, -6
        assert!((m[0].re - (-2.5)).abs() < 1e-12);
        assert!((m[1].re - 18.5).abs() < 1e-12);
    }
}
