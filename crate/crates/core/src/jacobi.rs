//! Periodic Jacobi matrices: discriminant (Naiman) polynomial, band
//! spectrum, capacity and coefficient rationalization.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{
    format_gaussian_rational, parse_gaussian_rational, round_to_grid, GaussianRational,
    GaussianRationalExt,
};
use crate::error::{Error, Result};
use crate::poly::RationalPoly;
use crate::roots;
use crate::sets::BandSet;

/// Jacobi entry: exact, or a float standing for a possibly irrational real.
#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Exact(GaussianRational),
    Approx(Complex64),
}

impl Entry {
    pub fn real(x: f64) -> Self {
        Entry::Approx(Complex64::new(x, 0.0))
    }

    pub fn int(x: i64) -> Self {
        Entry::Exact(crate::arith::gq_int(x))
    }

    /// Exact value; floats are taken at their binary value.
    pub fn exact(&self) -> Result<GaussianRational> {
        match self {
            Entry::Exact(q) => Ok(q.clone()),
            Entry::Approx(z) => GaussianRational::from_c64_exact(*z),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Entry::Exact(q) => q.to_c64(),
            Entry::Approx(z) => *z,
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Entry::Exact(q) => q.im.is_zero(),
            Entry::Approx(z) => z.im == 0.0,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Entry::Exact(q) => serde_json::Value::from(format_gaussian_rational(q)),
            Entry::Approx(z) if z.im == 0.0 => serde_json::Value::from(z.re),
            Entry::Approx(z) => serde_json::json!([z.re, z.im]),
        }
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => Ok(Entry::Exact(parse_gaussian_rational(s)?)),
            serde_json::Value::Number(n) => {
                // integers are exact, other numbers are floats
                if let Some(i) = n.as_i64() {
                    Ok(Entry::int(i))
                } else {
                    Ok(Entry::real(n.as_f64().unwrap()))
                }
            }
            _ => Err(Error::Parse(format!("bad Jacobi entry {v}"))),
        }
    }
}

/// Period-`r` two-sided Jacobi matrix with diagonal `a` and off-diagonal `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicJacobi {
    a: Vec<Entry>,
    b: Vec<Entry>,
}

impl PeriodicJacobi {
    pub fn new(a: Vec<Entry>, b: Vec<Entry>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::invalid(format!(
                "need equal positive lengths for a and b, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if b.iter().any(|x| x.to_c64().norm() == 0.0) {
            return Err(Error::invalid("off-diagonal entries must be nonzero"));
        }
        if a.iter().chain(&b).any(|x| !x.to_c64().is_finite()) {
            return Err(Error::invalid("Jacobi entries must be finite"));
        }
        Ok(PeriodicJacobi { a, b })
    }

    pub fn from_i64(a: &[i64], b: &[i64]) -> Result<Self> {
        Self::new(
            a.iter().map(|&x| Entry::int(x)).collect(),
            b.iter().map(|&x| Entry::int(x)).collect(),
        )
    }

    pub fn from_f64(a: &[f64], b: &[f64]) -> Result<Self> {
        Self::new(
            a.iter().map(|&x| Entry::real(x)).collect(),
            b.iter().map(|&x| Entry::real(x)).collect(),
        )
    }

    pub fn from_exact(a: Vec<GaussianRational>, b: Vec<GaussianRational>) -> Result<Self> {
        Self::new(
            a.into_iter().map(Entry::Exact).collect(),
            b.into_iter().map(Entry::Exact).collect(),
        )
    }

    /// `{"r": 2, "a": [0, 0], "b": [1, "3/2"]}`; strings are exact, integers
    /// exact, other numbers floats. `r` is optional but checked when present.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let list = |key: &str| -> Result<Vec<Entry>> {
            v.get(key)
                .and_then(|x| x.as_array())
                .ok_or_else(|| Error::Parse(format!("missing array {key:?}")))?
                .iter()
                .map(Entry::from_json)
                .collect()
        };
        let j = Self::new(list("a")?, list("b")?)?;
        if let Some(r) = v.get("r") {
            if r.as_u64() != Some(j.r() as u64) {
                return Err(Error::invalid(format!("r = {r} does not match entry count {}", j.r())));
            }
        }
        Ok(j)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "r": self.r(),
            "a": self.a.iter().map(Entry::to_json).collect::<Vec<_>>(),
            "b": self.b.iter().map(Entry::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn r(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Entry] {
        &self.a
    }

    pub fn b(&self) -> &[Entry] {
        &self.b
    }

    pub fn is_real(&self) -> bool {
        self.a.iter().chain(&self.b).all(Entry::is_real)
    }

    pub fn is_exact(&self) -> bool {
        self.a.iter().chain(&self.b).all(|e| matches!(e, Entry::Exact(_)))
    }

    fn exact_entries(&self) -> Result<(Vec<GaussianRational>, Vec<GaussianRational>)> {
        Ok((
            self.a.iter().map(Entry::exact).collect::<Result<_>>()?,
            self.b.iter().map(Entry::exact).collect::<Result<_>>()?,
        ))
    }

    /// Exact modulus `B = b_1 ... b_r`.
    pub fn modulus(&self) -> Result<GaussianRational> {
        let (_, b) = self.exact_entries()?;
        Ok(b.into_iter().fold(crate::arith::gq_int(1), |acc, x| acc * x))
    }

    /// Adds `s` to every diagonal entry.
    pub fn shifted(&self, s: &GaussianRational) -> Result<Self> {
        let (a, b) = self.exact_entries()?;
        Self::from_exact(a.into_iter().map(|x| x + s).collect(), b)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NaimanPolynomial {
    /// Monic degree-`r` discriminant polynomial.
    pub p: RationalPoly,
    /// Modulus `B`.
    pub modulus: GaussianRational,
    /// `P / B`, the trace of the period transfer matrix.
    pub p_tilde: RationalPoly,
}

fn linear(c0: GaussianRational, c1: GaussianRational) -> RationalPoly {
    RationalPoly::new(vec![c0, c1])
}

/// Determinants `D(i..=j)` of `J_[i..j] - z` for consecutive blocks starting
/// at `start` (0-based), `len` rows, via the three-term recurrence.
fn block_det(a: &[GaussianRational], b: &[GaussianRational], start: usize, len: usize) -> RationalPoly {
    let mut prev = RationalPoly::one(); // D_{-1}
    if len == 0 {
        return prev;
    }
    let neg_one = -crate::arith::gq_int(1);
    let mut cur = linear(a[start].clone(), neg_one.clone());
    for k in start + 1..start + len {
        let diag = linear(a[k].clone(), neg_one.clone());
        let b2 = &b[k - 1] * &b[k - 1];
        let next = &(&diag * &cur) - &prev.scale(&b2);
        prev = cur;
        cur = next;
    }
    cur
}

/// Trace of the product of period transfer matrices, as a polynomial.
pub fn transfer_trace_polynomial(j: &PeriodicJacobi) -> Result<RationalPoly> {
    let (a, b) = j.exact_entries()?;
    let r = j.r();
    let one = crate::arith::gq_int(1);
    let mut m = [
        [RationalPoly::one(), RationalPoly::zero()],
        [RationalPoly::zero(), RationalPoly::one()],
    ];
    for n in 0..r {
        let bn_inv = &one / &b[n];
        let b_prev = if n == 0 { &b[r - 1] } else { &b[n - 1] };
        let t = [
            [
                linear(-&a[n] * &bn_inv, bn_inv.clone()),
                RationalPoly::constant(-(b_prev * &bn_inv)),
            ],
            [RationalPoly::one(), RationalPoly::zero()],
        ];
        // m <- t * m
        let mut out = [
            [RationalPoly::zero(), RationalPoly::zero()],
            [RationalPoly::zero(), RationalPoly::zero()],
        ];
        for i in 0..2 {
            for k in 0..2 {
                out[i][k] = &(&t[i][0] * &m[0][k]) + &(&t[i][1] * &m[1][k]);
            }
        }
        m = out;
    }
    Ok(&m[0][0] + &m[1][1])
}

/// Trace of the period transfer matrix at an exact point.
pub fn transfer_trace_at(j: &PeriodicJacobi, z: &GaussianRational) -> Result<GaussianRational> {
    let (a, b) = j.exact_entries()?;
    let r = j.r();
    let zero = crate::arith::gq_int(0);
    let one = crate::arith::gq_int(1);
    let mut m = [[one.clone(), zero.clone()], [zero.clone(), one.clone()]];
    for n in 0..r {
        let b_prev = if n == 0 { &b[r - 1] } else { &b[n - 1] };
        let t = [[(z - &a[n]) / &b[n], -(b_prev / &b[n])], [one.clone(), zero.clone()]];
        let mut out = [[zero.clone(), zero.clone()], [zero.clone(), zero.clone()]];
        for i in 0..2 {
            for k in 0..2 {
                out[i][k] = &t[i][0] * &m[0][k] + &t[i][1] * &m[1][k];
            }
        }
        m = out;
    }
    Ok(&m[0][0] + &m[1][1])
}

/// Discriminant polynomial `P = (-1)^r [D(1,r) - b_r^2 D(2,r-1)]`, its modulus
/// and `P~ = P/B`. The result is checked exactly against the transfer-matrix
/// trace; a mismatch is an error.
pub fn naiman_polynomial(j: &PeriodicJacobi) -> Result<NaimanPolynomial> {
    let (a, b) = j.exact_entries()?;
    let r = j.r();
    let modulus = j.modulus()?;
    let p = if r == 1 {
        linear(-a[0].clone(), crate::arith::gq_int(1))
    } else {
        let full = block_det(&a, &b, 0, r);
        let inner = block_det(&a, &b, 1, r - 2);
        let br2 = &b[r - 1] * &b[r - 1];
        let d = &full - &inner.scale(&br2);
        if r % 2 == 1 {
            -&d
        } else {
            d
        }
    };
    let p_tilde = p.scale(&(crate::arith::gq_int(1) / &modulus));
    let trace = transfer_trace_polynomial(j)?;
    if trace != p_tilde {
        return Err(Error::Inconsistent(
            "discriminant polynomial disagrees with the transfer-matrix trace".into(),
        ));
    }
    Ok(NaimanPolynomial {
        p,
        modulus,
        p_tilde,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandSpectrum {
    pub bands: BandSet,
    /// Zeros of `P`, one in each (unmerged) band, ascending.
    pub band_zeros: Vec<f64>,
    /// All `2r` solutions of `P~ = ±2` with multiplicity, ascending.
    pub band_edges: Vec<f64>,
    /// Points where two bands touch (closed gaps).
    pub closed_gaps: Vec<f64>,
}

fn real_roots_with_multiplicity(p: &RationalPoly) -> Result<Vec<(f64, usize)>> {
    let mut out = Vec::new();
    for (factor, mult) in p.squarefree_decomposition()? {
        for z in roots::roots_exact(&factor, 1e-12)? {
            if z.im.abs() > 1e-7 * z.norm().max(1.0) {
                return Err(Error::Inconsistent(format!(
                    "expected real root, found {z} (numerical failure)"
                )));
            }
            out.push((z.re, mult));
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(out)
}

/// Spectrum of a real periodic Jacobi matrix: `P~^{-1}([-2, 2])`.
pub fn spectrum_bands(j: &PeriodicJacobi) -> Result<BandSpectrum> {
    if !j.is_real() {
        return Err(Error::invalid("band geometry is only computed for real Jacobi matrices"));
    }
    let np = naiman_polynomial(j)?;
    let two_b = np.modulus.clone() * crate::arith::gq_int(2);
    let lower = &np.p - &RationalPoly::constant(two_b.clone());
    let upper = &np.p + &RationalPoly::constant(two_b);
    let mut edges: Vec<f64> = Vec::new();
    let mut closed = Vec::new();
    for q in [&lower, &upper] {
        for (x, m) in real_roots_with_multiplicity(q)? {
            if m > 2 {
                return Err(Error::Inconsistent(format!("edge {x} of multiplicity {m}")));
            }
            if m == 2 {
                closed.push(x);
            }
            edges.extend(std::iter::repeat(x).take(m));
        }
    }
    edges.sort_by(f64::total_cmp);
    if edges.len() != 2 * j.r() {
        return Err(Error::Inconsistent(format!(
            "found {} band edges for period {}",
            edges.len(),
            j.r()
        )));
    }
    closed.sort_by(f64::total_cmp);
    let intervals: Vec<(f64, f64)> = edges.chunks(2).map(|c| (c[0], c[1])).collect();
    let bands = BandSet::from_touching_intervals(&intervals)?;
    let band_zeros = real_roots_with_multiplicity(&np.p)?
        .into_iter()
        .flat_map(|(x, m)| std::iter::repeat(x).take(m))
        .collect();
    Ok(BandSpectrum {
        bands,
        band_zeros,
        band_edges: edges,
        closed_gaps: closed,
    })
}

/// Capacity of the spectrum, `|B|^{1/r}`.
pub fn jacobi_capacity(j: &PeriodicJacobi) -> Result<f64> {
    let b = j.modulus()?;
    Ok(b.to_c64().norm().powf(1.0 / j.r() as f64))
}

/// Moments `k = 1..=count` of the equilibrium measure of a real spectrum:
/// the pullback of the arcsine law of `[-2,2]` under `P~`, averaged over the
/// `r` preimages. Each moment is a polynomial in `cos θ` of degree at most
/// `k`, so the midpoint rule with `count + 1` nodes is exact.
pub fn equilibrium_moments(j: &PeriodicJacobi, count: usize) -> Result<Vec<Complex64>> {
    let np = naiman_polynomial(j)?;
    let b = np.modulus.to_c64();
    let r = j.r();
    let p = np.p.to_c64();
    let nodes = 2 * count + 2;
    let mut acc = vec![Complex64::new(0.0, 0.0); count];
    for i in 0..nodes {
        let w = 2.0 * (std::f64::consts::PI * (i as f64 + 0.5) / nodes as f64).cos();
        let mut q = p.clone();
        q[0] -= b * w;
        // power sums of roots by Newton's identities on the monic q
        let e = |k: usize| -> Complex64 {
            if k > r {
                return Complex64::new(0.0, 0.0);
            }
            let c = q[r - k];
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        };
        let mut ps = vec![Complex64::new(r as f64, 0.0)];
        for k in 1..=count {
            let mut s = Complex64::new(0.0, 0.0);
            for t in 1..k {
                let term = e(t) * ps[k - t];
                s += if t % 2 == 1 { term } else { -term };
            }
            let last = e(k) * k as f64;
            s += if k % 2 == 1 { last } else { -last };
            ps.push(s);
        }
        for k in 0..count {
            acc[k] += ps[k + 1] / (r as f64);
        }
    }
    Ok(acc.into_iter().map(|x| x / nodes as f64).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rationalized {
    pub jacobi: PeriodicJacobi,
    /// Largest entrywise change.
    pub entry_error: f64,
    /// Bound on the spectral displacement: three times the entry error.
    pub spectral_bound: f64,
}

fn rationalize_entry(e: &Entry, denom: u64) -> Result<(GaussianRational, f64)> {
    if let Entry::Exact(q) = e {
        let d = num_bigint::BigInt::from(denom);
        if q.re.denom() <= &d && q.im.denom() <= &d {
            return Ok((q.clone(), 0.0));
        }
    }
    let z = e.to_c64();
    let q = GaussianRational::new(round_to_grid(z.re, denom)?, round_to_grid(z.im, denom)?);
    let err = match e {
        Entry::Exact(orig) => (orig - &q).to_c64().norm(),
        Entry::Approx(z) => (z - q.to_c64()).norm(),
    };
    Ok((q, err))
}

/// Rounds every entry to the grid `Z[i]/denom` (entries that are already
/// rational with denominator at most `denom` are kept).
pub fn rationalize(j: &PeriodicJacobi, denom: u64) -> Result<Rationalized> {
    if denom == 0 {
        return Err(Error::invalid("denominator bound must be at least 1"));
    }
    let mut err: f64 = 0.0;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for e in j.a() {
        let (q, d) = rationalize_entry(e, denom)?;
        err = err.max(d);
        a.push(q);
    }
    for e in j.b() {
        let (q, d) = rationalize_entry(e, denom)?;
        if q.re.is_zero() && q.im.is_zero() {
            return Err(Error::invalid(format!(
                "off-diagonal entry rounds to zero at denominator {denom}; increase it"
            )));
        }
        err = err.max(d);
        b.push(q);
    }
    Ok(Rationalized {
        jacobi: PeriodicJacobi::from_exact(a, b)?,
        entry_error: err,
        spectral_bound: 3.0 * err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gq_int, gq_ratio};

    #[test]
    fn naiman_examples() {
        let j = PeriodicJacobi::from_i64(&[0, 0], &[1, 1]).unwrap();
        let np = naiman_polynomial(&j).unwrap();
        assert_eq!(np.p, RationalPoly::from_i64(&[-2, 0, 1]));
        assert_eq!(np.modulus, gq_int(1));
        let j = PeriodicJacobi::from_i64(&[0, 0], &[1, 2]).unwrap();
        let np = naiman_polynomial(&j).unwrap();
        assert_eq!(np.p, RationalPoly::from_i64(&[-5, 0, 1]));
        assert_eq!(np.modulus, gq_int(2));
        assert_eq!(np.p_tilde, RationalPoly::from_ratios(&[(-5, 2), (0, 1), (1, 2)]));
        let j = PeriodicJacobi::from_i64(&[3], &[2]).unwrap();
        let np = naiman_polynomial(&j).unwrap();
        assert_eq!(np.p, RationalPoly::from_i64(&[-3, 1]));
        assert_eq!(np.modulus, gq_int(2));
    }

    #[test]
    fn trace_at_point_matches_polynomial() {
        let j = PeriodicJacobi::from_exact(
            vec![gq_ratio(1, 3), gq_int(-2), gq_ratio(5, 7)],
            vec![gq_int(2), gq_ratio(-1, 2), gq_int(3)],
        )
        .unwrap();
        let np = naiman_polynomial(&j).unwrap();
        let z = gq_ratio(11, 13);
        assert_eq!(transfer_trace_at(&j, &z).unwrap(), np.p_tilde.eval_exact(&z));
    }

    #[test]
    fn spectrum_examples() {
        let j = PeriodicJacobi::from_i64(&[0, 0], &[1, 2]).unwrap();
        let s = spectrum_bands(&j).unwrap();
        let e = s.bands.endpoints();
        for (x, y) in e.iter().zip([-3.0, -1.0, 1.0, 3.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        let j = PeriodicJacobi::from_i64(&[0, 0], &[1, 1]).unwrap();
        let s = spectrum_bands(&j).unwrap();
        assert_eq!(s.bands.r(), 1);
        assert!(s.closed_gaps[0].abs() < 1e-12);
        let shifted = PeriodicJacobi::from_i64(&[5, 5], &[1, 2]).unwrap();
        let t = spectrum_bands(&shifted).unwrap();
        for (x, y) in t.bands.endpoints().iter().zip([2.0, 4.0, 6.0, 8.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn capacity_examples() {
        let c = |b: &[i64]| jacobi_capacity(&PeriodicJacobi::from_i64(&vec![0; b.len()], b).unwrap()).unwrap();
        assert!((c(&[1, 2]) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(c(&[1, 1]), 1.0);
        assert!((c(&[2, 2, 2]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rationalize_examples() {
        let j = PeriodicJacobi::from_f64(&[0.0, 0.0], &[1.0, 2f64.sqrt()]).unwrap();
        let r = rationalize(&j, 100).unwrap();
        assert_eq!(r.jacobi.b()[1], Entry::Exact(gq_ratio(141, 100)));
        assert!(r.entry_error <= 0.01);
        let exact = PeriodicJacobi::from_exact(vec![gq_ratio(1, 3)], vec![gq_int(2)]).unwrap();
        assert_eq!(rationalize(&exact, 3).unwrap().jacobi, exact);
        let tiny = PeriodicJacobi::from_f64(&[0.0], &[0.001]).unwrap();
        assert!(rationalize(&tiny, 10).is_err());
    }

    #[test]
    fn equilibrium_moments_of_symmetric_pair() {
        let j = PeriodicJacobi::from_i64(&[0, 0], &[1, 2]).unwrap();
        let m = equilibrium_moments(&j, 4).unwrap();
        let expect = [0.0, 5.0, 0.0, 33.0];
        for (x, e) in m.iter().zip(expect) {
            assert!((x.re - e).abs() < 1e-12 && x.im.abs() < 1e-12);
        }
    }
}
