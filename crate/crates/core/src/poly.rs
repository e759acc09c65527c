//! Polynomials over `Q[i]`, `Z[i]` and `R`, ascending coefficient order.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{
    common_denominator, format_gaussian_int, format_gaussian_rational, gint_to_c64,
    parse_gaussian_int, parse_gaussian_rational, GaussianInt, GaussianRational,
    GaussianRationalExt,
};
use crate::error::{Error, Result};

/// Upper bound on the estimated size (in bits) of an exact power.
pub const POW_BIT_BUDGET: u64 = 1 << 31;

/// Exact polynomial with Gaussian-rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalPoly {
    coeffs: Vec<GaussianRational>,
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn gzero() -> GaussianRational {
    Complex::new(BigRational::zero(), BigRational::zero())
}

fn gone() -> GaussianRational {
    Complex::new(BigRational::one(), BigRational::zero())
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        trim(&mut coeffs);
        RationalPoly { coeffs }
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(gone())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Self::new(vec![gzero(), gone()])
    }

    /// `c * z^k`
    pub fn monomial(c: GaussianRational, k: usize) -> Self {
        let mut v = vec![gzero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| crate::arith::gq_int(c)).collect())
    }

    /// Real rational coefficients `n/d`, ascending.
    pub fn from_ratios(coeffs: &[(i64, i64)]) -> Self {
        Self::new(coeffs.iter().map(|&(n, d)| crate::arith::gq_ratio(n, d)).collect())
    }

    pub fn from_real_rationals(coeffs: Vec<BigRational>) -> Self {
        Self::new(
            coeffs
                .into_iter()
                .map(|c| Complex::new(c, BigRational::zero()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(gzero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> GaussianRational {
        self.coeffs.last().cloned().unwrap_or_else(gzero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im.is_zero())
    }

    pub fn has_gaussian_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_gaussian_integer())
    }

    /// Least common multiple of all coefficient denominators.
    pub fn common_denominator(&self) -> BigInt {
        common_denominator(&self.coeffs)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::invalid("zero polynomial has no monic normalization"));
        }
        let inv = gone() / self.leading();
        Ok(self.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * crate::arith::gq_int(k as i64))
                .collect(),
        )
    }

    /// Exact Horner evaluation.
    pub fn eval_exact(&self, z: &GaussianRational) -> GaussianRational {
        self.coeffs
            .iter()
            .rev()
            .fold(gzero(), |acc, c| acc * z + c)
    }

    /// Floating Horner evaluation (coefficients rounded to `f64`).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        crate::poly::horner(&self.to_c64(), z)
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.to_c64()).collect()
    }

    /// Real parts as floats; the imaginary parts are dropped.
    pub fn to_real_poly(&self) -> RealPoly {
        RealPoly::new(self.coeffs.iter().map(|c| c.to_c64().re).collect())
    }

    /// Scaled integer form `(N, d)` with `self = N / d`, `d > 0` minimal.
    pub fn to_scaled_int(&self) -> (Vec<GaussianInt>, BigInt) {
        let d = self.common_denominator();
        let dq = BigRational::from_integer(d.clone());
        let n = self
            .coeffs
            .iter()
            .map(|c| {
                let re = (&c.re * &dq).to_integer();
                let im = (&c.im * &dq).to_integer();
                Complex::new(re, im)
            })
            .collect();
        (n, d)
    }

    fn from_scaled_int(n: Vec<GaussianInt>, d: &BigInt) -> Self {
        Self::new(
            n.into_iter()
                .map(|c| {
                    Complex::new(
                        BigRational::new(c.re, d.clone()),
                        BigRational::new(c.im, d.clone()),
                    )
                })
                .collect(),
        )
    }

    pub fn to_gaussian_int_poly(&self) -> Option<GaussianIntPoly> {
        if !self.has_gaussian_integer_coeffs() {
            return None;
        }
        Some(GaussianIntPoly::new(
            self.coeffs.iter().map(|c| c.round_nearest()).collect(),
        ))
    }

    fn max_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| {
                c.re.numer().bits().max(c.re.denom().bits())
                    + c.im.numer().bits().max(c.im.denom().bits())
            })
            .max()
            .unwrap_or(0)
    }

    /// Exact `self^k`. Refuses (rather than truncating) when the estimated
    /// size of the result exceeds [`POW_BIT_BUDGET`].
    pub fn pow(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(Self::one());
        }
        let k64 = u64::from(k);
        let deg = self.degree() as u64;
        let est = (deg * k64 + 1)
            .saturating_mul(k64.saturating_mul(self.max_bits() + 2) + 64);
        if est > POW_BIT_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "power {k} of a degree-{deg} polynomial needs ~{est} bits"
            )));
        }
        let (n, d) = self.to_scaled_int();
        let mut base = n;
        let mut acc: Vec<GaussianInt> = vec![Complex::new(BigInt::one(), BigInt::zero())];
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_int(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = mul_int(&base, &base);
            }
        }
        Ok(Self::from_scaled_int(acc, &num_traits::pow(d, k as usize)))
    }

    /// `self(inner(z))`
    pub fn compose(&self, inner: &RationalPoly) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    /// Euclidean division over `Q[i]`.
    pub fn div_rem(&self, divisor: &RationalPoly) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::invalid("division by the zero polynomial"));
        }
        let dd = divisor.degree();
        let lead_inv = gone() / divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![gzero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &RationalPoly) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().expect("nonzero")
        }
    }

    /// Cheap sufficient test for square-freeness: the gcd with the derivative
    /// is trivial modulo a prime `p = 1 (mod 4)`. `None` means inconclusive.
    fn squarefree_mod_p(&self) -> Option<bool> {
        let f = ModPoly::reduce(self)?;
        if f.0.len() != self.coeffs.len() {
            return None;
        }
        let g = f.gcd(&f.derivative());
        Some(g.0.len() <= 1)
    }

    /// Squarefree factorization (Yun): monic, pairwise coprime factors with
    /// their multiplicities; the product of `f_i^{m_i}` is `self.monic()`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(RationalPoly, usize)>> {
        if self.is_zero() {
            return Err(Error::invalid("zero polynomial has no factorization"));
        }
        let f = self.monic()?;
        if f.degree() == 0 {
            return Ok(vec![]);
        }
        if f.squarefree_mod_p() == Some(true) {
            return Ok(vec![(f, 1)]);
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0)?.0;
        let c = df.div_rem(&a0)?.0;
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            let nb = b.div_rem(&a)?.0;
            let nc = d.div_rem(&a)?.0;
            d = &nc - &nb.derivative();
            if a.degree() > 0 {
                out.push((a, i));
            }
            b = nb;
            i += 1;
        }
        Ok(out)
    }

    /// Power sums `p_k = sum r_i^k` over the roots, `k = 1..=count`,
    /// exact via Newton's identities.
    pub fn root_power_sums(&self, count: usize) -> Result<Vec<GaussianRational>> {
        let f = self.monic()?;
        let n = f.degree();
        // e_k = (-1)^k c_{n-k}
        let e = |k: usize| -> GaussianRational {
            if k > n {
                return gzero();
            }
            let c = f.coeff(n - k);
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        };
        let mut p: Vec<GaussianRational> = Vec::with_capacity(count + 1);
        p.push(crate::arith::gq_int(n as i64));
        for k in 1..=count {
            let mut s = gzero();
            for i in 1..k {
                let term = e(i) * &p[k - i];
                s = if i % 2 == 1 { s + term } else { s - term };
            }
            let last = e(k) * crate::arith::gq_int(k as i64);
            s = if k % 2 == 1 { s + last } else { s - last };
            p.push(s);
        }
        p.remove(0);
        Ok(p)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_gaussian_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        Ok(Self::new(
            items
                .iter()
                .map(|s| parse_gaussian_rational(s.as_ref()))
                .collect::<Result<_>>()?,
        ))
    }

    /// JSON array of coefficient strings, ascending degree.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(self.to_strings())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("polynomial must be a JSON array".into()))?;
        let items = arr
            .iter()
            .map(|x| match x {
                serde_json::Value::String(s) => Ok(s.clone()),
                serde_json::Value::Number(n) => Ok(n.to_string()),
                _ => Err(Error::Parse(format!("bad coefficient {x}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_strings(&items)
    }
}

fn mul_int(a: &[GaussianInt], b: &[GaussianInt]) -> Vec<GaussianInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Complex::new(BigInt::zero(), BigInt::zero()); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if x.im.is_zero() && y.im.is_zero() {
                out[i + j].re += &x.re * &y.re;
            } else {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        let (a, da) = self.to_scaled_int();
        let (b, db) = rhs.to_scaled_int();
        RationalPoly::from_scaled_int(mul_int(&a, &b), &(da * db))
    }
}

/// Monic-or-not polynomial with Gaussian-integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianIntPoly {
    coeffs: Vec<GaussianInt>,
}

impl GaussianIntPoly {
    pub fn new(mut coeffs: Vec<GaussianInt>) -> Self {
        trim(&mut coeffs);
        GaussianIntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Complex::new(BigInt::from(c), BigInt::zero()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[GaussianInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im.is_zero())
    }

    pub fn to_rational(&self) -> RationalPoly {
        RationalPoly::new(
            self.coeffs
                .iter()
                .map(GaussianRational::from_gaussian_int)
                .collect(),
        )
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(gint_to_c64).collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.to_c64(), z)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_gaussian_int).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        Ok(Self::new(
            items
                .iter()
                .map(|s| parse_gaussian_int(s.as_ref()))
                .collect::<Result<_>>()?,
        ))
    }
}

/// Polynomial with real floating coefficients.
#[derive(Clone, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct RealPoly {
    pub coeffs: Vec<f64>,
}

impl RealPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        RealPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// Exact rational image of the float coefficients.
    pub fn to_rational(&self) -> Result<RationalPoly> {
        Ok(RationalPoly::from_real_rationals(
            self.coeffs
                .iter()
                .map(|&c| crate::arith::rational_from_f64(c))
                .collect::<Result<_>>()?,
        ))
    }

    /// Largest coefficientwise absolute difference.
    pub fn max_coeff_diff(&self, other: &RealPoly) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(0.0);
                let b = other.coeffs.get(k).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }
}

impl Mul for &RealPoly {
    type Output = RealPoly;
    fn mul(self, rhs: &RealPoly) -> RealPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return RealPoly::default();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RealPoly::new(out)
    }
}

impl Add for &RealPoly {
    type Output = RealPoly;
    fn add(self, rhs: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RealPoly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(0.0)
                        + rhs.coeffs.get(k).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }
}

pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, &c| acc * z + c)
}

// ---- arithmetic modulo a prime p = 1 (mod 4), with i -> sqrt(-1) ----

const MOD_P: u64 = 1_000_000_009;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, MOD_P - 2)
}

fn sqrt_minus_one() -> u64 {
    (2..)
        .map(|g| powmod(g, (MOD_P - 1) / 4))
        .find(|&s| mulmod(s, s) == MOD_P - 1)
        .expect("p = 1 mod 4")
}

fn reduce_int(x: &BigInt) -> u64 {
    let m = BigInt::from(MOD_P);
    let r = x.mod_floor(&m);
    num_traits::ToPrimitive::to_u64(&r).expect("reduced")
}

#[derive(Clone, Debug)]
struct ModPoly(Vec<u64>);

impl ModPoly {
    fn reduce(p: &RationalPoly) -> Option<ModPoly> {
        let s = sqrt_minus_one();
        let m = BigInt::from(MOD_P);
        let mut out = Vec::with_capacity(p.coeffs.len());
        for c in &p.coeffs {
            let part = |x: &BigRational| -> Option<u64> {
                if x.denom().is_multiple_of(&m) {
                    return None;
                }
                Some(mulmod(reduce_int(x.numer()), invmod(reduce_int(x.denom()))))
            };
            let v = (part(&c.re)? + mulmod(part(&c.im)?, s)) % MOD_P;
            out.push(v);
        }
        let mut f = ModPoly(out);
        f.trim();
        Some(f)
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    fn derivative(&self) -> ModPoly {
        let mut d = ModPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| mulmod(c, k as u64 % MOD_P))
                .collect(),
        );
        d.trim();
        d
    }

    fn rem(&self, b: &ModPoly) -> ModPoly {
        let mut r = self.0.clone();
        let db = b.0.len() - 1;
        let inv = invmod(*b.0.last().unwrap());
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1 - db;
            let c = mulmod(*r.last().unwrap(), inv);
            for (j, &bc) in b.0.iter().enumerate() {
                r[k + j] = (r[k + j] + MOD_P - mulmod(c, bc)) % MOD_P;
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        ModPoly(r)
    }

    fn gcd(&self, other: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.0.is_empty() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }
}
