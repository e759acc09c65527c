//! Compact sets: finite unions of real intervals and finite point clouds.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite union of disjoint closed real intervals `[e1,e2] ∪ ... ∪ [e_{2r-1},e_{2r}]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct BandSet {
    endpoints: Vec<f64>,
    /// Interior points where two bands touched and were merged.
    touching: Vec<f64>,
}

impl BandSet {
    pub fn new(endpoints: Vec<f64>) -> Result<Self> {
        if endpoints.is_empty() || endpoints.len() % 2 != 0 {
            return Err(Error::invalid(format!(
                "band set needs a positive even number of endpoints, got {}",
                endpoints.len()
            )));
        }
        if endpoints.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("band set endpoints must be finite"));
        }
        if endpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("band set endpoints must be strictly increasing"));
        }
        Ok(BandSet {
            endpoints,
            touching: vec![],
        })
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![a, b])
    }

    /// Builds from possibly touching, sorted intervals, merging bands that
    /// share an endpoint (the shared points are remembered).
    pub fn from_touching_intervals(intervals: &[(f64, f64)]) -> Result<Self> {
        let mut ends: Vec<f64> = Vec::new();
        let mut touching = Vec::new();
        for &(a, b) in intervals {
            if !(a < b) {
                return Err(Error::invalid(format!("degenerate interval [{a}, {b}]")));
            }
            match ends.last() {
                Some(&last) if a <= last => {
                    touching.push(last);
                    *ends.last_mut().unwrap() = b.max(last);
                }
                _ => {
                    ends.push(a);
                    ends.push(b);
                }
            }
        }
        let mut s = Self::new(ends)?;
        s.touching = touching;
        Ok(s)
    }

    pub fn endpoints(&self) -> &[f64] {
        &self.endpoints
    }

    pub fn touching_points(&self) -> &[f64] {
        &self.touching
    }

    pub fn has_closed_gaps(&self) -> bool {
        !self.touching.is_empty()
    }

    /// Number of bands.
    pub fn r(&self) -> usize {
        self.endpoints.len() / 2
    }

    pub fn band(&self, j: usize) -> (f64, f64) {
        (self.endpoints[2 * j], self.endpoints[2 * j + 1])
    }

    pub fn bands(&self) -> Vec<(f64, f64)> {
        (0..self.r()).map(|j| self.band(j)).collect()
    }

    /// Open gaps between consecutive bands.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        (0..self.r() - 1)
            .map(|j| (self.endpoints[2 * j + 1], self.endpoints[2 * j + 2]))
            .collect()
    }

    pub fn hull(&self) -> (f64, f64) {
        (self.endpoints[0], *self.endpoints.last().unwrap())
    }

    pub fn total_length(&self) -> f64 {
        self.bands().iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.bands().iter().any(|&(a, b)| a <= x && x <= b)
    }

    /// Index of the band containing `x`, if any.
    pub fn band_of(&self, x: f64) -> Option<usize> {
        self.bands().iter().position(|&(a, b)| a <= x && x <= b)
    }

    pub fn contains_set(&self, other: &BandSet) -> bool {
        other
            .bands()
            .iter()
            .all(|&(a, b)| self.bands().iter().any(|&(c, d)| c <= a && b <= d))
    }

    /// Distance from a complex point to the set.
    pub fn dist(&self, z: Complex64) -> f64 {
        self.bands()
            .iter()
            .map(|&(a, b)| Complex64::new(z.re.clamp(a, b), 0.0))
            .map(|p| (z - p).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn affine(&self, scale: f64, shift: f64) -> Result<Self> {
        let mut e: Vec<f64> = self.endpoints.iter().map(|x| scale * x + shift).collect();
        if scale < 0.0 {
            e.reverse();
        }
        Self::new(e)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let e: Vec<f64> = serde_json::from_value(v.clone())
            .map_err(|e| Error::Parse(format!("band set must be an array of numbers: {e}")))?;
        Self::new(e)
    }
}

impl TryFrom<Vec<f64>> for BandSet {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BandSet> for Vec<f64> {
    fn from(b: BandSet) -> Vec<f64> {
        b.endpoints
    }
}

/// Finite set of complex points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    points: Vec<Complex64>,
    conj_symmetric: bool,
}

impl PointCloud {
    /// Arbitrary points, no symmetry claimed.
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("point cloud is empty"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("point cloud contains non-finite values"));
        }
        Ok(PointCloud {
            points,
            conj_symmetric: false,
        })
    }

    /// Conjugate-symmetric cloud built by explicit pairing: every point in
    /// `upper` (which must have positive imaginary part) is added together
    /// with its exact conjugate; `real` points are added once.
    pub fn conjugate_pairs(upper: &[Complex64], real: &[f64]) -> Result<Self> {
        if upper.iter().any(|z| !(z.im > 0.0)) {
            return Err(Error::invalid("paired points must lie in the upper half plane"));
        }
        let mut points: Vec<Complex64> = real.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        for z in upper {
            points.push(*z);
            points.push(z.conj());
        }
        let mut c = Self::new(points)?;
        c.conj_symmetric = true;
        Ok(c)
    }

    /// `m` points on the circle `|z - center| = radius`, `center` real,
    /// paired exactly across the real axis.
    pub fn circle(center: f64, radius: f64, m: usize) -> Result<Self> {
        if m == 0 || !(radius > 0.0) {
            return Err(Error::invalid("circle needs m >= 1 and positive radius"));
        }
        let c = Complex64::new(center, 0.0);
        let mut real = vec![center + radius];
        if m % 2 == 0 {
            real.push(center - radius);
        }
        let upper: Vec<Complex64> = (1..m.div_ceil(2))
            .map(|k| c + Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / m as f64))
            .collect();
        Self::conjugate_pairs(&upper, &real)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn is_conj_symmetric(&self) -> bool {
        self.conj_symmetric
    }

    pub fn dist(&self, z: Complex64) -> f64 {
        self.points
            .iter()
            .map(|p| (z - p).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn scaled(&self, scale: f64, shift: f64) -> Result<Self> {
        let mut c = Self::new(
            self.points
                .iter()
                .map(|p| p * scale + Complex64::new(shift, 0.0))
                .collect(),
        )?;
        c.conj_symmetric = self.conj_symmetric;
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CompactSet {
    Bands(BandSet),
    Cloud(PointCloud),
}

impl From<BandSet> for CompactSet {
    fn from(b: BandSet) -> Self {
        CompactSet::Bands(b)
    }
}

impl From<PointCloud> for CompactSet {
    fn from(c: PointCloud) -> Self {
        CompactSet::Cloud(c)
    }
}

impl CompactSet {
    pub fn dist(&self, z: Complex64) -> f64 {
        match self {
            CompactSet::Bands(b) => b.dist(z),
            CompactSet::Cloud(c) => c.dist(z),
        }
    }
}

/// `sup_{x in a} dist(x, b)`.
fn directed(a: &CompactSet, b: &CompactSet) -> f64 {
    let candidates: Vec<Complex64> = match (a, b) {
        (CompactSet::Cloud(c), _) => c.points().to_vec(),
        (CompactSet::Bands(ba), CompactSet::Bands(bb)) => {
            // distance to a union of intervals is piecewise linear along a
            // band, maximal at band ends or at gap midpoints of the target
            let mut v: Vec<f64> = ba.endpoints().to_vec();
            for (p, q) in bb.gaps() {
                let m = 0.5 * (p + q);
                if ba.contains(m) {
                    v.push(m);
                }
            }
            v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
        }
        (CompactSet::Bands(ba), CompactSet::Cloud(cb)) => {
            // nearest-point switches happen on perpendicular bisectors
            let mut v: Vec<f64> = ba.endpoints().to_vec();
            let pts = cb.points();
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    let dx = pts[j].re - pts[i].re;
                    if dx != 0.0 {
                        let x = (pts[j].norm_sqr() - pts[i].norm_sqr()) / (2.0 * dx);
                        if ba.contains(x) {
                            v.push(x);
                        }
                    }
                }
                if ba.contains(pts[i].re) {
                    v.push(pts[i].re);
                }
            }
            v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
        }
    };
    candidates
        .iter()
        .map(|&z| b.dist(z))
        .fold(0.0, f64::max)
}

/// Symmetric inflation distance: the smallest `r` such that each set lies in
/// the closed `r`-neighbourhood of the other.
pub fn set_distance(a: &CompactSet, b: &CompactSet) -> f64 {
    directed(a, b).max(directed(b, a))
}
