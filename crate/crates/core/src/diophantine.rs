//! Exhaustive and Monte-Carlo searches over integer polynomials: small sup
//! norms on a compact set, volumes of unit-norm coefficient regions,
//! algebraic integers with all conjugates in a set, Bernstein operators and
//! nearest conjugate sets.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::GaussianRational;
use crate::chebyshev::{lobatto_grid, sup_norm};
use crate::error::{Error, Result};
use crate::poly::{GaussianIntPoly, RationalPoly};
use crate::roots;
use crate::sets::{BandSet, CompactSet};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
/// Inflation absorbing root-finder error in membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Integer bounds `|a_k| <= bounds[k]` for the coefficient of `z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffBox {
    pub n: usize,
    pub bounds: Vec<u64>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl CoeffBox {
    pub fn new(bounds: Vec<u64>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::invalid("coefficient box needs at least one bound"));
        }
        Ok(CoeffBox {
            n: bounds.len() - 1,
            bounds,
        })
    }

    pub fn uniform(n: usize, bound: u64) -> Self {
        CoeffBox {
            n,
            bounds: vec![bound; n + 1],
        }
    }

    /// Monic bounds `|a_{n-k}| <= C(n,k) ρ^k` for roots of modulus at most `ρ`.
    pub fn binomial(n: usize, rho: f64) -> Self {
        let mut bounds = vec![0; n + 1];
        for k in 1..=n {
            bounds[n - k] = (binomial(n, k) * rho.powi(k as i32) + 1e-9).floor() as u64;
        }
        bounds[n] = 1;
        CoeffBox { n, bounds }
    }

    /// Number of integer points in the box (saturating).
    pub fn size(&self) -> u64 {
        self.bounds
            .iter()
            .fold(1u64, |acc, &b| acc.saturating_mul(2 * b + 1))
    }

    fn monic_size(&self) -> u64 {
        self.bounds[..self.n]
            .iter()
            .fold(1u64, |acc, &b| acc.saturating_mul(2 * b + 1))
    }
}

/// Decodes the `idx`-th point (lexicographic, highest power slowest) of the
/// box restricted to the first `len` coefficients.
fn decode(bounds: &[u64], mut idx: u64, out: &mut [i64]) {
    for k in 0..out.len() {
        let w = 2 * bounds[k] + 1;
        out[k] = (idx % w) as i64 - bounds[k] as i64;
        idx /= w;
    }
}

fn eval_real(c: &[i64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a as f64)
}

/// `sup_K |f|` for real coefficients (grid of `32 n` points per band with
/// golden refinement; exact maximum over a point cloud).
pub fn sup_on(k: &CompactSet, coeffs: &[f64]) -> f64 {
    let n = coeffs.len().saturating_sub(1).max(1);
    match k {
        CompactSet::Bands(e) => {
            let f = |x: f64| coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a);
            sup_norm(&f, e, 32 * n + 1).0
        }
        CompactSet::Cloud(c) => c
            .points()
            .iter()
            .map(|&z| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a).norm())
            .fold(0.0, f64::max),
    }
}

/// Whether `sup_K |f| < 1`, rejecting early on the coarse grid.
pub fn in_unit_region(k: &CompactSet, coeffs: &[f64]) -> bool {
    if let CompactSet::Bands(e) = k {
        let n = coeffs.len().saturating_sub(1).max(1);
        for (a, b) in e.bands() {
            for x in lobatto_grid(a, b, 32 * n + 1) {
                if coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c).abs() >= 1.0 {
                    return false;
                }
            }
        }
    }
    sup_on(k, coeffs) < 1.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallNorm {
    /// Ascending integer coefficients.
    pub coeffs: Vec<i64>,
    pub sup: f64,
}

/// All nonzero integer vectors in the box with `sup_K |f_a| < 1`, sorted by
/// sup norm then coefficients. Only one of `a, -a` is tested; both are
/// returned.
pub fn small_norm_search(k: &CompactSet, b: &CoeffBox, budget: u64) -> Result<Vec<SmallNorm>> {
    let total = b.size();
    if total > budget {
        return Err(Error::BudgetExceeded(format!("{total} candidates exceed the budget {budget}")));
    }
    let len = b.n + 1;
    let found: Vec<SmallNorm> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let mut c = vec![0i64; len];
            decode(&b.bounds, idx, &mut c);
            // canonical sign: highest nonzero coefficient positive
            match c.iter().rev().find(|&&x| x != 0) {
                Some(&top) if top > 0 => {}
                _ => return None,
            }
            if let CompactSet::Bands(e) = k {
                if eval_real(&c, e.endpoints()[0]).abs() >= 1.0 {
                    return None;
                }
            }
            let cf: Vec<f64> = c.iter().map(|&x| x as f64).collect();
            if !in_unit_region(k, &cf) {
                return None;
            }
            Some(SmallNorm {
                sup: sup_on(k, &cf),
                coeffs: c,
            })
        })
        .collect();
    let mut out = Vec::with_capacity(2 * found.len());
    for s in found {
        out.push(SmallNorm {
            coeffs: s.coeffs.iter().map(|x| -x).collect(),
            sup: s.sup,
        });
        out.push(s);
    }
    out.sort_by(|x, y| x.sup.total_cmp(&y.sup).then_with(|| x.coeffs.cmp(&y.coeffs)));
    Ok(out)
}

/// Half-widths of a box containing every real polynomial of degree `n`
/// bounded by one at the nodes: the sums of `|coefficients|` of the Lagrange
/// basis.
pub fn lagrange_box(nodes: &[f64]) -> Result<Vec<f64>> {
    let n = nodes.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut basis = vec![1.0];
        let mut denom = 1.0;
        for (j, &x) in nodes.iter().enumerate() {
            if j == i {
                continue;
            }
            let d = nodes[i] - x;
            if d == 0.0 {
                return Err(Error::invalid("interpolation nodes must be distinct"));
            }
            denom *= d;
            let mut next = vec![0.0; basis.len() + 1];
            for (t, &c) in basis.iter().enumerate() {
                next[t + 1] += c;
                next[t] -= x * c;
            }
            basis = next;
        }
        for (t, c) in basis.iter().enumerate() {
            out[t] += (c / denom).abs();
        }
    }
    Ok(out)
}

/// `n + 1` distinct nodes on the bands, spread by length.
fn band_nodes(e: &BandSet, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![e.endpoints()[0]];
    }
    let total = e.total_length();
    let mut nodes = Vec::with_capacity(count);
    for j in 0..count {
        // Chebyshev–Lobatto positions in arclength across the bands
        let s = 0.5 * total * (1.0 - (std::f64::consts::PI * j as f64 / (count - 1) as f64).cos());
        let mut left = s;
        for (a, b) in e.bands() {
            if left <= b - a || b == e.hull().1 {
                nodes.push((a + left).min(b));
                break;
            }
            left -= b - a;
        }
    }
    nodes
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub volume: f64,
    /// `(2 / n^2) ln(volume)`.
    pub normalized_log: f64,
    /// `-ln C(K)` when the set is a band set.
    pub reference: Option<f64>,
    pub hits: u64,
    pub samples: u64,
    pub box_half_widths: Vec<f64>,
    pub warning: Option<String>,
}

const MC_CHUNKS: u64 = 64;

/// Monte-Carlo volume of `{a in R^{n+1} : sup_K |f_a| < 1}`.
pub fn fn_volume_mc(k: &CompactSet, n: usize, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    if samples < 10_000 {
        return Err(Error::invalid("at least 10^4 samples are required"));
    }
    let nodes = match k {
        CompactSet::Bands(e) => band_nodes(e, n + 1),
        CompactSet::Cloud(_) => {
            return Err(Error::invalid("volume estimates need a real band set"));
        }
    };
    let half = lagrange_box(&nodes)?;
    let reference = match k {
        CompactSet::Bands(e) => crate::calibration::robin_constant(e).ok(),
        CompactSet::Cloud(_) => None,
    };
    let per = samples.div_ceil(MC_CHUNKS);
    let hits: u64 = (0..MC_CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let count = per.min(samples.saturating_sub(chunk * per));
            let mut h = 0u64;
            let mut a = vec![0.0; n + 1];
            for _ in 0..count {
                for (x, w) in a.iter_mut().zip(&half) {
                    *x = rng.gen_range(-1.0..1.0) * w;
                }
                if in_unit_region(k, &a) {
                    h += 1;
                }
            }
            h
        })
        .sum();
    let box_volume: f64 = half.iter().map(|w| 2.0 * w).product();
    let volume = box_volume * hits as f64 / samples as f64;
    Ok(VolumeEstimate {
        volume,
        normalized_log: 2.0 / (n * n).max(1) as f64 * volume.ln(),
        reference,
        hits,
        samples,
        box_half_widths: half,
        warning: (hits == 0).then(|| "no sample landed in the region; volume reported as 0".to_string()),
    })
}

/// Target region for algebraic integers.
#[derive(Clone, Debug, PartialEq)]
pub enum TotallyInSet {
    Disk(f64),
    Bands(BandSet),
}

impl TotallyInSet {
    fn radius(&self) -> f64 {
        match self {
            TotallyInSet::Disk(r) => *r,
            TotallyInSet::Bands(e) => e.endpoints().iter().fold(0.0f64, |m, x| m.max(x.abs())),
        }
    }

    fn contains(&self, z: Complex64, tol: f64) -> bool {
        match self {
            TotallyInSet::Disk(r) => z.norm() <= r + tol,
            TotallyInSet::Bands(e) => e.dist(z) <= tol,
        }
    }
}

fn gint_poly(c: &[i64]) -> GaussianIntPoly {
    GaussianIntPoly::from_i64(c)
}

/// Roots with multiplicity through the exact squarefree decomposition.
fn exact_roots(c: &[i64]) -> Result<Vec<Complex64>> {
    let p = RationalPoly::from_i64(c);
    let mut out = Vec::new();
    for (f, m) in p.squarefree_decomposition()? {
        for z in roots::roots_exact(&f, 1e-13)? {
            out.extend(std::iter::repeat_n(z, m));
        }
    }
    Ok(out)
}

/// Monic integer polynomials of degree `n` whose roots all lie in the set
/// (within [`MEMBERSHIP_TOL`]), ascending coefficient vectors in
/// lexicographic order.
pub fn totally_in_enumerate(set: &TotallyInSet, n: usize, budget: u64) -> Result<Vec<Vec<i64>>> {
    if n == 0 || n > 8 {
        return Err(Error::invalid("degree must be between 1 and 8"));
    }
    let b = CoeffBox::binomial(n, set.radius());
    let total = b.monic_size();
    if total > budget {
        return Err(Error::BudgetExceeded(format!("{total} candidates exceed the budget {budget}")));
    }
    let found: Vec<Result<Option<Vec<i64>>>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut c = vec![0i64; n + 1];
            decode(&b.bounds, idx, &mut c[..n]);
            c[n] = 1;
            let rough = roots::roots_gint(&gint_poly(&c), 1e-10)?;
            if !rough.iter().all(|&z| set.contains(z, 1e-3)) {
                return Ok(None);
            }
            let fine = exact_roots(&c)?;
            Ok(fine.iter().all(|&z| set.contains(z, MEMBERSHIP_TOL)).then_some(c))
        })
        .collect();
    let mut out = Vec::new();
    for f in found {
        if let Some(c) = f? {
            out.push(c);
        }
    }
    out.sort_by(|x, y| x.iter().rev().cmp(y.iter().rev()));
    Ok(out)
}

/// Cyclotomic polynomial `Φ_k` (integer coefficients, ascending).
pub fn cyclotomic(k: usize) -> RationalPoly {
    let mut p = RationalPoly::from_i64(&{
        let mut v = vec![0i64; k + 1];
        v[0] = -1;
        v[k] = 1;
        v
    });
    for d in 1..k {
        if k % d == 0 {
            p = p.div_rem(&cyclotomic(d)).expect("nonzero divisor").0;
        }
    }
    p
}

/// Splits `p` into powers of `z` and cyclotomic factors: returns the list of
/// indices (`0` for `z`), or `None` when another factor remains.
pub fn kronecker_factorization(c: &[i64]) -> Option<Vec<usize>> {
    let mut p = RationalPoly::from_i64(c);
    let mut out = Vec::new();
    let z = RationalPoly::z();
    while p.degree() > 0 && p.coeff(0).is_zero() {
        p = p.div_rem(&z).ok()?.0;
        out.push(0);
    }
    let n = p.degree();
    // φ(k) <= n forces k <= 2 n^2 (a crude but safe cap)
    for k in 1..=(2 * n * n).max(2) {
        if p.degree() == 0 {
            break;
        }
        let phi = cyclotomic(k);
        if phi.degree() > p.degree() {
            continue;
        }
        loop {
            let (q, r) = p.div_rem(&phi).ok()?;
            if !r.is_zero() {
                break;
            }
            p = q;
            out.push(k);
        }
    }
    (p.degree() == 0 && (p.coeff(0) == GaussianRational::one() || p.coeff(0) == -GaussianRational::one()))
        .then_some(out)
}

/// Bernstein polynomial `Σ f(ν/n) C(n,ν) x^ν (1-x)^{n-ν}` with exact
/// rational coefficients.
pub fn bernstein(values: &[BigRational]) -> Result<RationalPoly> {
    if values.len() < 2 {
        return Err(Error::invalid("need f at n + 1 >= 2 equispaced points"));
    }
    let n = values.len() - 1;
    let mut coeffs = vec![BigRational::zero(); n + 1];
    // x^ν (1-x)^{n-ν} = Σ_j (-1)^j C(n-ν, j) x^{ν+j}
    let mut binom_n = BigInt::one();
    for (nu, f) in values.iter().enumerate() {
        if nu > 0 {
            binom_n = binom_n * BigInt::from(n - nu + 1) / BigInt::from(nu);
        }
        let mut inner = BigInt::one();
        for j in 0..=n - nu {
            if j > 0 {
                inner = inner * BigInt::from(n - nu - j + 1) / BigInt::from(j);
            }
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let w = BigRational::from_integer(&binom_n * &inner * sign);
            coeffs[nu + j] += f * w;
        }
    }
    Ok(RationalPoly::from_real_rationals(coeffs))
}

/// Bernstein polynomial of `f` sampled at `ν / n`.
pub fn bernstein_fn(f: impl Fn(&BigRational) -> BigRational, n: usize) -> Result<RationalPoly> {
    let values: Vec<BigRational> = (0..=n)
        .map(|nu| f(&BigRational::new(BigInt::from(nu), BigInt::from(n.max(1)))))
        .collect();
    bernstein(&values)
}

/// Smallest achievable largest distance in a one-to-one matching.
pub fn bottleneck_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid("matching needs equally many points"));
    }
    let n = a.len();
    let mut cand: Vec<f64> = a.iter().flat_map(|x| b.iter().map(move |y| (x - y).norm())).collect();
    cand.sort_by(f64::total_cmp);
    cand.dedup();
    let feasible = |t: f64| -> bool {
        let mut owner: Vec<Option<usize>> = vec![None; n];
        fn augment(i: usize, t: f64, a: &[Complex64], b: &[Complex64], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
            for j in 0..b.len() {
                if !seen[j] && (a[i] - b[j]).norm() <= t {
                    seen[j] = true;
                    if owner[j].is_none_or(|k| augment(k, t, a, b, seen, owner)) {
                        owner[j] = Some(i);
                        return true;
                    }
                }
            }
            false
        }
        (0..n).all(|i| augment(i, t, a, b, &mut vec![false; n], &mut owner))
    };
    let (mut lo, mut hi) = (0usize, cand.len().saturating_sub(1));
    if n == 0 {
        return Ok(0.0);
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(cand[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(cand[lo])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NearestConjugates {
    /// Ascending monic integer coefficients.
    pub coeffs: Vec<i64>,
    pub distance: f64,
    pub roots: Vec<(f64, f64)>,
    pub note: String,
}

/// Monic integer polynomial in the box whose roots match `targets` best in
/// the bottleneck sense. Ties go to the lexicographically first candidate.
pub fn nearest_conjugate_set(targets: &[Complex64], b: &CoeffBox, budget: u64) -> Result<NearestConjugates> {
    let n = targets.len();
    if n == 0 || b.n != n {
        return Err(Error::invalid("box degree must equal the number of targets"));
    }
    let conj: Vec<Complex64> = targets.iter().map(|z| z.conj()).collect();
    if bottleneck_distance(targets, &conj)? > 1e-9 {
        return Err(Error::invalid("targets must be closed under complex conjugation"));
    }
    let total = b.monic_size();
    if total > budget {
        return Err(Error::BudgetExceeded(format!("{total} candidates exceed the budget {budget}")));
    }
    let scored: Vec<Result<(f64, u64, Vec<Complex64>)>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut c = vec![0i64; n + 1];
            decode(&b.bounds, idx, &mut c[..n]);
            c[n] = 1;
            let zs = exact_roots(&c)?;
            Ok((bottleneck_distance(&zs, targets)?, idx, zs))
        })
        .collect();
    let mut best: Option<(f64, u64, Vec<Complex64>)> = None;
    for s in scored {
        let s = s?;
        if best.as_ref().is_none_or(|b| s.0 < b.0 || (s.0 == b.0 && s.1 < b.1)) {
            best = Some(s);
        }
    }
    let (distance, idx, zs) = best.expect("box is nonempty");
    let mut coeffs = vec![0i64; n + 1];
    decode(&b.bounds, idx, &mut coeffs[..n]);
    coeffs[n] = 1;
    Ok(NearestConjugates {
        coeffs,
        distance,
        roots: zs.iter().map(|z| (z.re, z.im)).collect(),
        note: "brute-force optimum for a fixed number of conjugates; approximating with more \
               conjugates than targets may push the extra ones far away"
            .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest, ProptestConfig};

    fn interval(a: f64, b: f64) -> CompactSet {
        BandSet::interval(a, b).unwrap().into()
    }

    #[test]
    fn small_norm_examples() {
        let k = interval(-0.5, 0.5);
        let out = small_norm_search(&k, &CoeffBox::new(vec![1, 1]).unwrap(), DEFAULT_BUDGET).unwrap();
        assert!(out.iter().any(|s| s.coeffs == vec![0, 1] && (s.sup - 0.5).abs() < 1e-12));
        let out = small_norm_search(&k, &CoeffBox::uniform(2, 2), DEFAULT_BUDGET).unwrap();
        assert!(out.iter().any(|s| s.coeffs == vec![0, 0, 1] && (s.sup - 0.25).abs() < 1e-12));
        for s in &out {
            let neg: Vec<i64> = s.coeffs.iter().map(|x| -x).collect();
            assert!(out.iter().any(|t| t.coeffs == neg));
        }
    }

    #[test]
    fn unit_interval_has_no_small_quadratics() {
        let k = interval(-1.0, 1.0);
        for n in 1..=2 {
            assert!(small_norm_search(&k, &CoeffBox::uniform(n, 5), DEFAULT_BUDGET).unwrap().is_empty());
        }
        let cubic = small_norm_search(&k, &CoeffBox::uniform(3, 5), DEFAULT_BUDGET).unwrap();
        assert!(cubic.iter().any(|s| s.coeffs == vec![0, -1, 0, 1]));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            small_norm_search(&interval(-1.0, 1.0), &CoeffBox::uniform(8, 10), 1000),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn lagrange_box_of_half_interval() {
        let b = lagrange_box(&[-0.5, 0.5]).unwrap();
        assert!((b[0] - 1.0).abs() < 1e-15 && (b[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn volume_of_linear_region() {
        let v = fn_volume_mc(&interval(-0.5, 0.5), 1, 200_000, 7).unwrap();
        assert!((v.volume - 4.0).abs() < 0.2, "{}", v.volume);
        let again = fn_volume_mc(&interval(-0.5, 0.5), 1, 200_000, 7).unwrap();
        assert_eq!(v, again);
    }

    #[test]
    fn unit_region_is_symmetric() {
        let k = interval(-0.5, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let a: Vec<f64> = (0..3).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let neg: Vec<f64> = a.iter().map(|x| -x).collect();
            assert_eq!(in_unit_region(&k, &a), in_unit_region(&k, &neg));
        }
    }

    #[test]
    fn totally_in_examples() {
        let disk = totally_in_enumerate(&TotallyInSet::Disk(1.0), 2, DEFAULT_BUDGET).unwrap();
        for q in [vec![1, 1, 1], vec![1, -1, 1], vec![1, 0, 1], vec![-1, 0, 1], vec![0, 0, 1], vec![1, 2, 1]] {
            assert!(disk.contains(&q), "{q:?}");
        }
        for p in &disk {
            assert!(kronecker_factorization(p).is_some(), "{p:?}");
        }
        let half = BandSet::interval(-0.5, 0.5).unwrap();
        for n in 1..=4 {
            let out = totally_in_enumerate(&TotallyInSet::Bands(half.clone()), n, DEFAULT_BUDGET).unwrap();
            let mut zn = vec![0; n + 1];
            zn[n] = 1;
            assert_eq!(out, vec![zn]);
        }
        let wide = BandSet::interval(-2.5, 2.5).unwrap();
        let out2 = totally_in_enumerate(&TotallyInSet::Bands(wide.clone()), 2, DEFAULT_BUDGET).unwrap();
        assert!(out2.contains(&vec![-2, 0, 1]));
        let out3 = totally_in_enumerate(&TotallyInSet::Bands(wide), 3, DEFAULT_BUDGET).unwrap();
        assert!(out3.contains(&vec![0, -3, 0, 1]));
    }

    #[test]
    fn enumeration_is_monotone_in_the_set() {
        let small = BandSet::interval(-2.0, 2.0).unwrap();
        let big = BandSet::interval(-2.5, 2.5).unwrap();
        let a = totally_in_enumerate(&TotallyInSet::Bands(small), 3, DEFAULT_BUDGET).unwrap();
        let b = totally_in_enumerate(&TotallyInSet::Bands(big), 3, DEFAULT_BUDGET).unwrap();
        assert!(a.iter().all(|p| b.contains(p)));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), RationalPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(6), RationalPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), RationalPoly::from_i64(&[1, 0, -1, 0, 1]));
        assert_eq!(kronecker_factorization(&[0, 1, 2, 1]), Some(vec![0, 2, 2]));
        assert_eq!(kronecker_factorization(&[-1, -1, 1]), None);
    }

    #[test]
    fn bernstein_examples() {
        let p = bernstein_fn(|x| x.clone(), 5).unwrap();
        assert_eq!(p, RationalPoly::from_i64(&[0, 1]));
        let p = bernstein_fn(|x| x * x, 2).unwrap();
        assert_eq!(p, RationalPoly::from_ratios(&[(0, 1), (1, 2), (1, 2)]));
        for n in 1..=16i64 {
            let p = bernstein_fn(|x| x * x, n as usize).unwrap();
            // x^2 + x (1 - x) / n
            let expect = RationalPoly::from_ratios(&[(0, 1), (1, n), (n - 1, n)]);
            assert_eq!(p, expect);
        }
        let vals = vec![rat(3, 1), rat(-7, 2), rat(5, 1)];
        let p = bernstein(&vals).unwrap();
        assert_eq!(p.coeff(0).re, rat(3, 1));
        let at_one = p.coeffs().iter().fold(GaussianRational::zero(), |a, c| a + c);
        assert_eq!(at_one.re, rat(5, 1));
    }

    #[test]
    fn nearest_conjugate_examples() {
        let s5 = 5f64.sqrt();
        let golden = [Complex64::new((1.0 + s5) / 2.0, 0.0), Complex64::new((1.0 - s5) / 2.0, 0.0)];
        let r = nearest_conjugate_set(&golden, &CoeffBox::uniform(2, 2), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.coeffs, vec![-1, -1, 1]);
        assert!(r.distance < 1e-12);
        let t = [Complex64::new(0.5, 0.1), Complex64::new(0.5, -0.1)];
        let r = nearest_conjugate_set(&t, &CoeffBox::uniform(2, 2), DEFAULT_BUDGET).unwrap();
        assert!(r.distance <= (Complex64::new(0.5, 0.1) - 1.0).norm() + 1e-12);
        let wider = nearest_conjugate_set(&t, &CoeffBox::uniform(2, 4), DEFAULT_BUDGET).unwrap();
        assert!(wider.distance <= r.distance);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn bernstein_is_linear_and_monotone(
            f in proptest::collection::vec(-20i64..20, 2..8),
            g in proptest::collection::vec(0i64..10, 8),
        ) {
            let n = f.len() - 1;
            let fv: Vec<BigRational> = f.iter().map(|&x| rat(x, 1)).collect();
            let gv: Vec<BigRational> = f.iter().zip(&g).map(|(&x, &d)| rat(x + d, 1)).collect();
            let pf = bernstein(&fv).unwrap();
            let pg = bernstein(&gv).unwrap();
            let sum: Vec<BigRational> = fv.iter().zip(&gv).map(|(x, y)| x + y).collect();
            prop_assert_eq!(bernstein(&sum).unwrap(), &pf + &pg);
            for i in 0..=20 {
                let x = Complex64::new(i as f64 / 20.0, 0.0);
                prop_assert!(pg.eval(x).re >= pf.eval(x).re - 1e-9);
            }
            prop_assert_eq!(pf.coeff(0).re, fv[0].clone());
            let _ = n;
        }
    }
}
