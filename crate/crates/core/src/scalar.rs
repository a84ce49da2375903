//! Number types shared by the exact and floating evaluation paths.
//!
//! The finite-N formulas are written once, generically over [`Scalar`], and
//! instantiated with exact rationals, `f64`, or polynomials in the radius
//! (for coefficient-wise comparisons).

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Commutative ring operations needed by determinant expansion.
pub trait Ring:
    Clone + fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
}

/// A ring that embeds the rationals and supports exact division where the
/// quotient is known to exist (fraction-free elimination).
pub trait Scalar: Ring {
    fn from_ratio(q: &BigRational) -> Self;

    fn from_bigint(i: &BigInt) -> Self {
        Self::from_ratio(&BigRational::from_integer(i.clone()))
    }

    fn from_i64(i: i64) -> Self {
        Self::from_bigint(&BigInt::from(i))
    }

    /// `self / d`, or `None` when `d` is zero or the quotient leaves a remainder.
    fn div_exact(&self, d: &Self) -> Option<Self>;

    /// Pivot preference for elimination; larger is better, zero means unusable.
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn powu(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for BigRational {
    fn from_ratio(q: &BigRational) -> Self {
        q.clone()
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        if Zero::is_zero(d) {
            None
        } else {
            Some(self / d)
        }
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Scalar for f64 {
    fn from_ratio(q: &BigRational) -> Self {
        ratio_to_f64(q)
    }
    fn from_i64(i: i64) -> Self {
        i as f64
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        if *d == 0.0 {
            None
        } else {
            Some(self / d)
        }
    }
    fn pivot_weight(&self) -> f64 {
        libm::fabs(*self)
    }
}

/// Converts a big rational to the nearest representable `f64`, including
/// values whose numerator and denominator overflow `f64` individually.
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Scale by powers of two so both parts fit.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift > 0 {
        q / BigRational::from_integer(BigInt::one() << (shift as usize))
    } else {
        q * BigRational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    let n = scaled.numer().to_f64().unwrap_or(f64::NAN);
    let d = scaled.denom().to_f64().unwrap_or(f64::NAN);
    let m = if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // both huge but comparable: drop low bits
        let drop = (nb.max(db) - 1000).max(0) as usize;
        let n2 = (scaled.numer() >> drop).to_f64().unwrap_or(f64::NAN);
        let d2 = (scaled.denom() >> drop).to_f64().unwrap_or(f64::NAN);
        n2 / d2
    };
    libm::ldexp(m, shift as i32)
}

/// Result of an evaluation that may have been carried out exactly or in
/// floating point. Mixed arithmetic is deliberately not provided: values are
/// produced by one path and compared or printed.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactNumber {
    Exact(BigRational),
    Float(f64),
}

/// Evaluation mode tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl ExactNumber {
    pub fn mode(&self) -> Mode {
        match self {
            ExactNumber::Exact(_) => Mode::Exact,
            ExactNumber::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactNumber::Exact(q) => ratio_to_f64(q),
            ExactNumber::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            ExactNumber::Exact(q) => Some(q),
            ExactNumber::Float(_) => None,
        }
    }

    /// Numerator and denominator as decimal strings (exact mode only).
    pub fn num_den(&self) -> Option<(String, String)> {
        self.as_exact().map(|q| (q.numer().to_string(), q.denom().to_string()))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            ExactNumber::Exact(q) => q.is_negative(),
            ExactNumber::Float(x) => *x < 0.0,
        }
    }

    /// Parses `"p/q"`, an integer, or a decimal literal. Decimal literals
    /// are read exactly (`0.25` becomes `1/4`) in exact mode.
    pub fn parse(text: &str, mode: Mode) -> Option<ExactNumber> {
        match mode {
            Mode::Float => {
                if let Some(q) = parse_rational(text) {
                    Some(ExactNumber::Float(ratio_to_f64(&q)))
                } else {
                    text.trim().parse::<f64>().ok().map(ExactNumber::Float)
                }
            }
            Mode::Exact => parse_rational(text).map(ExactNumber::Exact),
        }
    }
}

impl fmt::Display for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactNumber::Exact(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            ExactNumber::Float(x) => write!(f, "{}", format!("{:.17e}", x)),
        }
    }
}

/// Parses `"a/b"`, `"-12"`, or `"0.125"` / `"1e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut all = String::from(int_part);
    all.push_str(frac_part);
    let n: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let q = if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if neg { -q } else { q })
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
