//! Logarithmic potentials, discrete energies, Fekete points and capacity.

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chebyshev::lobatto_grid;
use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, MeasureLike};
use crate::poly::RationalPoly;
use crate::roots;
use crate::sets::CompactSet;

/// `sum_i w_i ln(1/|z - x_i|)`; `+inf` when `z` is an atom.
pub fn log_potential(mu: &DiscreteMeasure, z: Complex64) -> f64 {
    mu.log_potential(z)
}

/// Off-diagonal discrete energy `sum_{i != j} w_i w_j ln(1/|x_i - x_j|)`.
pub fn energy(mu: &DiscreteMeasure) -> Result<f64> {
    let atoms = mu.atoms();
    if atoms.len() < 2 {
        return Err(Error::invalid("energy needs at least two atoms"));
    }
    let mut s = 0.0;
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            let d = (atoms[i].0 - atoms[j].0).norm();
            if d == 0.0 {
                return Err(Error::invalid("coincident atoms have infinite interaction energy"));
            }
            s -= 2.0 * atoms[i].1 * atoms[j].1 * d.ln();
        }
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeketeResult {
    /// Points, sorted by real then imaginary part.
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<Complex64>,
    /// `ln q_n`, `q_n = prod_{i != j} |z_i - z_j|`.
    pub log_pairwise_product: f64,
    /// `q_n` itself (may under- or overflow for large `n`).
    pub pairwise_product: f64,
    pub d_n: f64,
}

fn ser_points<S: serde::Serializer>(pts: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(pts.len()))?;
    for p in pts {
        seq.serialize_element(&[p.re, p.im])?;
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeketeOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Grid points per band for band sets; default `16 n + 1` (at least 65).
    pub grid_per_band: Option<usize>,
}

impl Default for FeketeOptions {
    fn default() -> Self {
        FeketeOptions {
            restarts: 4,
            seed: 0,
            grid_per_band: None,
        }
    }
}

/// Candidate grid of a compact set for `n` points.
pub fn fekete_grid(k: &CompactSet, n: usize, per_band: Option<usize>) -> Vec<Complex64> {
    match k {
        CompactSet::Bands(b) => {
            let m = per_band.unwrap_or((16 * n + 1).max(65));
            b.bands()
                .iter()
                .flat_map(|&(a, c)| lobatto_grid(a, c, m))
                .map(|x| Complex64::new(x, 0.0))
                .collect()
        }
        CompactSet::Cloud(c) => c.points().to_vec(),
    }
}

fn log_q(points: &[Complex64]) -> f64 {
    let mut s = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            s += 2.0 * (points[i] - points[j]).norm().ln();
        }
    }
    s
}

/// Coordinate-exchange ascent from a starting index set; returns the final
/// indices (a grid-local maximizer of `q_n`).
fn ascend(grid: &[Complex64], mut idx: Vec<usize>) -> Vec<usize> {
    let g = grid.len();
    let mut occupied = vec![false; g];
    for &i in &idx {
        occupied[i] = true;
    }
    for _sweep in 0..10_000 {
        // S[t] = sum_j ln|grid[t] - z_j| over unoccupied t
        let mut s = vec![0.0; g];
        for t in 0..g {
            if !occupied[t] {
                s[t] = idx.iter().map(|&i| (grid[t] - grid[i]).norm().ln()).sum();
            }
        }
        let mut improved = false;
        for j in 0..idx.len() {
            let cur = idx[j];
            let cur_val: f64 = idx
                .iter()
                .filter(|&&i| i != cur)
                .map(|&i| (grid[cur] - grid[i]).norm().ln())
                .sum();
            let mut best = (cur_val, cur);
            for t in 0..g {
                if occupied[t] {
                    continue;
                }
                let val = s[t] - (grid[t] - grid[cur]).norm().ln();
                if val > best.0 + 1e-13 * (1.0 + best.0.abs()) {
                    best = (val, t);
                }
            }
            if best.1 != cur {
                let new = best.1;
                occupied[cur] = false;
                occupied[new] = true;
                idx[j] = new;
                for t in 0..g {
                    if occupied[t] {
                        continue;
                    }
                    if t == cur {
                        s[t] = cur_val + (grid[cur] - grid[new]).norm().ln();
                    } else {
                        s[t] += (grid[t] - grid[new]).norm().ln() - (grid[t] - grid[cur]).norm().ln();
                    }
                }
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    idx
}

/// True when no single exchange of a point with a free grid point increases
/// `q_n` (beyond a relative `1e-12`).
pub fn is_exchange_optimal(grid: &[Complex64], points: &[Complex64]) -> bool {
    let base = log_q(points);
    for j in 0..points.len() {
        let without: f64 = points
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, &p)| (points[j] - p).norm().ln())
            .sum();
        for &g in grid {
            if points.contains(&g) {
                continue;
            }
            let with: f64 = points
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &p)| (g - p).norm().ln())
                .sum();
            if 2.0 * (with - without) > 1e-12 * (1.0 + base.abs()) {
                return false;
            }
        }
    }
    true
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Grid-restricted Fekete points by coordinate exchange with restarts.
/// Deterministic for a fixed seed regardless of thread count.
pub fn fekete_points(k: &CompactSet, n: usize, opts: &FeketeOptions) -> Result<FeketeResult> {
    if n < 2 {
        return Err(Error::invalid("Fekete points need n >= 2"));
    }
    let grid = fekete_grid(k, n, opts.grid_per_band);
    if n > grid.len() {
        return Err(Error::invalid(format!(
            "n = {n} exceeds the {} available grid points",
            grid.len()
        )));
    }
    let g = grid.len();
    let restarts = opts.restarts.max(1);
    let runs: Vec<(f64, Vec<Complex64>)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let start: Vec<usize> = if r == 0 {
                (0..n).map(|i| (i * (g - 1)) / (n - 1)).collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(r as u64);
                sample(&mut rng, g, n).into_vec()
            };
            let idx = ascend(&grid, start);
            let mut pts: Vec<Complex64> = idx.iter().map(|&i| grid[i]).collect();
            roots::sort_roots(&mut pts);
            (log_q(&pts), pts)
        })
        .collect();
    let (lq, points) = runs
        .into_iter()
        .reduce(|a, b| match a.0.total_cmp(&b.0) {
            std::cmp::Ordering::Less => b,
            std::cmp::Ordering::Greater => a,
            std::cmp::Ordering::Equal => {
                if lex_cmp(&b.1, &a.1).is_lt() {
                    b
                } else {
                    a
                }
            }
        })
        .unwrap();
    let d_n = (lq / (n * (n - 1)) as f64).exp();
    Ok(FeketeResult {
        points,
        log_pairwise_product: lq,
        pairwise_product: lq.exp(),
        d_n,
    })
}

pub fn transfinite_diameter(k: &CompactSet, n: usize, opts: &FeketeOptions) -> Result<f64> {
    Ok(fekete_points(k, n, opts)?.d_n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityScheme {
    FeketeExtrapolation,
    JacobiFormula,
    RobinConstant,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityEstimate {
    pub value: f64,
    pub scheme: CapacityScheme,
    pub n_used: usize,
    pub error_bound: Option<f64>,
    /// `(n, d_n)` pairs behind a Fekete extrapolation.
    pub diameters: Vec<(usize, f64)>,
}

impl CapacityEstimate {
    pub fn from_jacobi(j: &crate::jacobi::PeriodicJacobi) -> Result<Self> {
        Ok(CapacityEstimate {
            value: crate::jacobi::jacobi_capacity(j)?,
            scheme: CapacityScheme::JacobiFormula,
            n_used: j.r(),
            error_bound: Some(0.0),
            diameters: vec![],
        })
    }
}

/// Capacity of a compact set.
///
/// `FeketeExtrapolation` computes `d_n` for `n = n_max/8, n_max/4, n_max/2,
/// n_max` and fits `d_n = C + c/n` through the two largest; `RobinConstant`
/// uses the Green function of a band set. `JacobiFormula` needs the matrix,
/// see [`CapacityEstimate::from_jacobi`].
pub fn capacity_estimate(
    k: &CompactSet,
    scheme: CapacityScheme,
    n_max: usize,
    opts: &FeketeOptions,
) -> Result<CapacityEstimate> {
    match scheme {
        CapacityScheme::JacobiFormula => Err(Error::invalid(
            "the Jacobi formula needs a periodic Jacobi matrix, not a bare set",
        )),
        CapacityScheme::RobinConstant => match k {
            CompactSet::Bands(b) => {
                let robin = crate::calibration::robin_constant(b)?;
                Ok(CapacityEstimate {
                    value: (-robin).exp(),
                    scheme,
                    n_used: 0,
                    error_bound: None,
                    diameters: vec![],
                })
            }
            CompactSet::Cloud(_) => Err(Error::invalid(
                "the Robin-constant scheme applies to band sets only",
            )),
        },
        CapacityScheme::FeketeExtrapolation => {
            if n_max < 2 {
                return Err(Error::invalid("n_max must be at least 2"));
            }
            let mut ns: Vec<usize> = [n_max / 8, n_max / 4, n_max / 2, n_max]
                .into_iter()
                .filter(|&n| n >= 2)
                .collect();
            ns.dedup();
            let ds: Vec<(usize, f64)> = ns
                .iter()
                .map(|&n| Ok((n, transfinite_diameter(k, n, opts)?)))
                .collect::<Result<_>>()?;
            for w in ds.windows(2) {
                if w[1].1 > w[0].1 * (1.0 + 1e-9) {
                    return Err(Error::invalid(format!(
                        "d_n is not decreasing (d_{} = {}, d_{} = {}); use a finer grid",
                        w[0].0, w[0].1, w[1].0, w[1].1
                    )));
                }
            }
            let rich = |a: (usize, f64), b: (usize, f64)| {
                let (n1, d1, n2, d2) = (a.0 as f64, a.1, b.0 as f64, b.1);
                (n2 * d2 - n1 * d1) / (n2 - n1)
            };
            let m = ds.len();
            let (value, error_bound) = if m >= 2 {
                let c = rich(ds[m - 2], ds[m - 1]);
                let err = if m >= 3 {
                    Some((c - rich(ds[m - 3], ds[m - 2])).abs())
                } else {
                    None
                };
                (c.max(0.0), err)
            } else {
                (ds[0].1, None)
            };
            Ok(CapacityEstimate {
                value,
                scheme,
                n_used: n_max,
                error_bound,
                diameters: ds,
            })
        }
    }
}

/// Counting measure of the zeros of an exact polynomial, with exact
/// multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct CountingMeasure {
    pub measure: DiscreteMeasure,
    /// Multiplicity of each atom; they sum to `degree`.
    pub multiplicities: Vec<usize>,
    pub degree: usize,
}

pub fn counting_measure(p: &RationalPoly) -> Result<CountingMeasure> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::invalid("constant polynomial has no zeros"));
    }
    let mut atoms = Vec::new();
    let mut mult = Vec::new();
    for (f, m) in p.squarefree_decomposition()? {
        for z in roots::roots_exact(&f, roots::DEFAULT_TOL)? {
            atoms.push((z, m as f64 / n as f64));
            mult.push(m);
        }
    }
    let mut order: Vec<usize> = (0..atoms.len()).collect();
    order.sort_by(|&i, &j| {
        atoms[i].0.re.total_cmp(&atoms[j].0.re).then(atoms[i].0.im.total_cmp(&atoms[j].0.im))
    });
    let measure = DiscreteMeasure::new(order.iter().map(|&i| atoms[i]).collect())?;
    Ok(CountingMeasure {
        measure,
        multiplicities: order.iter().map(|&i| mult[i]).collect(),
        degree: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{BandSet, PointCloud};

    fn interval(a: f64, b: f64) -> CompactSet {
        BandSet::interval(a, b).unwrap().into()
    }

    #[test]
    fn potential_examples() {
        let circle = PointCloud::circle(0.0, 1.0, 64).unwrap();
        let mu = DiscreteMeasure::uniform(circle.points()).unwrap();
        assert!(log_potential(&mu, Complex64::new(0.0, 0.0)).abs() < 1e-12);
        assert!((log_potential(&mu, Complex64::new(2.0, 0.0)) + 2f64.ln()).abs() < 1e-9);
        let d = DiscreteMeasure::dirac(Complex64::new(0.0, 0.0));
        assert!((log_potential(&d, Complex64::new(std::f64::consts::E, 0.0)) + 1.0).abs() < 1e-15);
        assert_eq!(log_potential(&d, Complex64::new(0.0, 0.0)), f64::INFINITY);
    }

    #[test]
    fn energy_examples() {
        let two = |b: f64| {
            DiscreteMeasure::uniform(&[Complex64::new(0.0, 0.0), Complex64::new(b, 0.0)]).unwrap()
        };
        assert_eq!(energy(&two(1.0)).unwrap(), 0.0);
        assert!((energy(&two(2.0)).unwrap() + 2f64.ln() / 2.0).abs() < 1e-15);
        assert!(energy(&DiscreteMeasure::dirac(Complex64::new(0.0, 0.0))).is_err());
    }

    #[test]
    fn fekete_small_cases() {
        let k = interval(-1.0, 1.0);
        let r = fekete_points(&k, 2, &FeketeOptions::default()).unwrap();
        assert_eq!(r.points, vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!((r.d_n - 2.0).abs() < 1e-15);
        let r = fekete_points(&k, 3, &FeketeOptions::default()).unwrap();
        assert!(r.points.iter().zip([-1.0, 0.0, 1.0]).all(|(p, x)| (p.re - x).abs() < 1e-15));
        assert!((r.d_n - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
        let grid = fekete_grid(&k, 3, None);
        assert!(is_exchange_optimal(&grid, &r.points));
    }

    #[test]
    fn fekete_circle_triangle() {
        let k: CompactSet = PointCloud::circle(0.0, 1.0, 48).unwrap().into();
        let r = fekete_points(&k, 3, &FeketeOptions::default()).unwrap();
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(((r.points[i] - r.points[j]).norm() - 3f64.sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn counting_measure_examples() {
        let cm = counting_measure(&RationalPoly::from_i64(&[0, -1, 1])).unwrap();
        assert_eq!(cm.multiplicities, vec![1, 1]);
        assert!((cm.measure.atoms()[1].0 - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let p = RationalPoly::from_i64(&[0, -3, 0, 1]);
        let p3 = p.pow(3).unwrap();
        let a = counting_measure(&p).unwrap();
        let b = counting_measure(&p3).unwrap();
        assert_eq!(b.multiplicities.iter().sum::<usize>(), 9);
        for (x, y) in a.measure.atoms().iter().zip(b.measure.atoms()) {
            assert!((x.0 - y.0).norm() < 1e-12 && (x.1 - y.1).abs() < 1e-15);
        }
    }
}
