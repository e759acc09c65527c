//! Exact scalars: Gaussian rationals `Q[i]` and Gaussian integers `Z[i]`.
//!
//! Both are plain `num_complex::Complex` over arbitrary-precision parts, so the
//! field operations come for free; this module adds rounding, integrality tests,
//! float conversion and the textual coefficient format `"p/q"` / `"p/q+r/s i"`.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type GaussianRational = Complex<BigRational>;
pub type GaussianInt = Complex<BigInt>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gq(re: BigRational, im: BigRational) -> GaussianRational {
    Complex::new(re, im)
}

pub fn gq_int(re: i64) -> GaussianRational {
    Complex::new(BigRational::from_integer(re.into()), BigRational::zero())
}

pub fn gq_ratio(n: i64, d: i64) -> GaussianRational {
    Complex::new(rat(n, d), BigRational::zero())
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::invalid(format!("non-finite value {x}")))
}

/// Nearest integer, ties rounded up (`floor(x + 1/2)`).
pub fn round_half_up(x: &BigRational) -> BigInt {
    let half = rat(1, 2);
    (x + half).floor().to_integer()
}

/// `round(x * denom) / denom`, computed exactly from the float's binary value.
pub fn round_to_grid(x: f64, denom: u64) -> Result<BigRational> {
    let exact = rational_from_f64(x)?;
    let d = BigInt::from(denom);
    let scaled = &exact * BigRational::from_integer(d.clone());
    Ok(BigRational::new(round_half_up(&scaled), d))
}

pub trait GaussianRationalExt {
    fn is_gaussian_integer(&self) -> bool;
    /// Componentwise nearest Gaussian integer; the residue `self - round` has
    /// both parts in `[-1/2, 1/2)`.
    fn round_nearest(&self) -> GaussianInt;
    fn to_c64(&self) -> Complex64;
    fn from_gaussian_int(z: &GaussianInt) -> Self;
    fn from_c64_exact(z: Complex64) -> Result<GaussianRational>;
}

impl GaussianRationalExt for GaussianRational {
    fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    fn round_nearest(&self) -> GaussianInt {
        Complex::new(round_half_up(&self.re), round_half_up(&self.im))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn from_gaussian_int(z: &GaussianInt) -> Self {
        Complex::new(
            BigRational::from_integer(z.re.clone()),
            BigRational::from_integer(z.im.clone()),
        )
    }

    fn from_c64_exact(z: Complex64) -> Result<GaussianRational> {
        Ok(Complex::new(rational_from_f64(z.re)?, rational_from_f64(z.im)?))
    }
}

pub fn gint_to_c64(z: &GaussianInt) -> Complex64 {
    Complex64::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

/// Least common multiple of all real and imaginary denominators.
pub fn common_denominator<'a>(coeffs: impl IntoIterator<Item = &'a GaussianRational>) -> BigInt {
    coeffs.into_iter().fold(BigInt::one(), |acc, c| {
        acc.lcm(c.re.denom()).lcm(c.im.denom())
    })
}

fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Textual form `"p/q"`, `"p/q+r/s i"` or `"p/q-r/s i"`; integers omit `/1`.
pub fn format_gaussian_rational(z: &GaussianRational) -> String {
    if z.im.is_zero() {
        return format_rational(&z.re);
    }
    let sign = if z.im.is_negative() { '-' } else { '+' };
    format!("{}{}{} i", format_rational(&z.re), sign, format_rational(&z.im.abs()))
}

pub fn format_gaussian_int(z: &GaussianInt) -> String {
    format_gaussian_rational(&GaussianRational::from_gaussian_int(z))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

/// Parses the coefficient format produced by [`format_gaussian_rational`].
/// Also accepts a bare imaginary part such as `"3/4 i"` or `"-i"`.
pub fn parse_gaussian_rational(s: &str) -> Result<GaussianRational> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty coefficient".into()));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex::new(parse_rational(&t)?, BigRational::zero()));
    };
    // split at the last sign that is not in leading position
    let split = body
        .char_indices()
        .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
        .map(|(k, _)| k)
        .last();
    let (re, im) = match split {
        Some(k) => (parse_rational(&body[..k])?, &body[k..]),
        None => (BigRational::zero(), body),
    };
    let im = match im {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
    };
    Ok(Complex::new(re, im))
}

pub fn parse_gaussian_int(s: &str) -> Result<GaussianInt> {
    let z = parse_gaussian_rational(s)?;
    if !z.is_gaussian_integer() {
        return Err(Error::Parse(format!("{s:?} is not a Gaussian integer")));
    }
    Ok(z.round_nearest())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_agree() {
        for s in ["3", "-1/4", "1/2+3/7 i", "0+1 i", "-5/3-2 i", "7/9 i"] {
            let z = parse_gaussian_rational(s).unwrap();
            let back = parse_gaussian_rational(&format_gaussian_rational(&z)).unwrap();
            assert_eq!(z, back, "{s}");
        }
        assert_eq!(format_gaussian_rational(&gq_ratio(-2, 4)), "-1/2");
        assert_eq!(
            format_gaussian_rational(&gq(rat(1, 2), rat(-3, 7))),
            "1/2-3/7 i"
        );
        assert_eq!(parse_gaussian_rational("-i").unwrap(), gq(rat(0, 1), rat(-1, 1)));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_gaussian_rational("1/0").is_err());
        assert!(parse_gaussian_rational("abc").is_err());
        assert!(parse_gaussian_rational("").is_err());
        assert!(parse_gaussian_int("1/2").is_err());
    }

    #[test]
    fn rounding_residue_is_bounded() {
        for (n, d) in [(1, 2), (-1, 2), (7, 3), (-7, 3), (5, 1)] {
            let x = rat(n, d);
            let r = BigRational::from_integer(round_half_up(&x));
            let res = &x - &r;
            assert!(res >= rat(-1, 2) && res < rat(1, 2), "{n}/{d}");
        }
    }

    #[test]
    fn grid_rounding() {
        let r = round_to_grid(std::f64::consts::SQRT_2, 100).unwrap();
        assert_eq!(r, rat(141, 100));
        assert_eq!(round_to_grid(0.5, 1).unwrap(), rat(1, 1));
    }
}
