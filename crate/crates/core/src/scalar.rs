//! Exact rational scalars and points.
//!
//! Every coordinate is a [`BigRational`]; points additionally cache an `f64`
//! approximation used only to filter predicates (see [`crate::geom`]).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(s: &Scalar) -> f64 {
    s.to_f64().unwrap_or_else(|| {
        // Ratios of huge integers overflow the direct conversion.
        let n = s.numer().to_f64().unwrap_or(f64::NAN);
        let d = s.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Nearest rational with denominator `den` (round half away from zero).
pub fn from_f64_grid(v: f64, den: i64) -> Scalar {
    let scaled = (v * den as f64).round();
    Scalar::new(BigInt::from(scaled as i64), BigInt::from(den))
}

/// Canonical `"p/q"` form (reduced, positive denominator, sign on numerator).
pub fn format_scalar(s: &Scalar) -> String {
    format!("{}/{}", s.numer(), s.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::new(num, den))
}

#[derive(Clone)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
    approx: [f64; 2],
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Point {
        let approx = [to_f64(&x), to_f64(&y)];
        Point { x, y, approx }
    }

    pub fn from_ints(x: i64, y: i64) -> Point {
        Point::new(int(x), int(y))
    }

    #[inline]
    pub fn approx(&self) -> [f64; 2] {
        self.approx
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scale(&self, s: &Scalar) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    /// `self + t * (other - self)`.
    pub fn lerp(&self, other: &Point, t: &Scalar) -> Point {
        Point::new(
            &self.x + t * (&other.x - &self.x),
            &self.y + t * (&other.y - &self.y),
        )
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let half = ratio(1, 2);
        self.lerp(other, &half)
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Applies `(x, y) -> (a x + b y + e, c x + d y + f)`.
    pub fn affine(&self, m: &[Scalar; 6]) -> Point {
        Point::new(
            &m[0] * &self.x + &m[1] * &self.y + &m[4],
            &m[2] * &self.x + &m[3] * &self.y + &m[5],
        )
    }

    pub fn neg_y(&self) -> Point {
        Point::new(self.x.clone(), -&self.y)
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.x.hash(state);
        self.y.hash(state);
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Sign of a scalar as -1, 0, 1.
pub fn sign(s: &Scalar) -> i32 {
    if s.is_positive() {
        1
    } else if s.is_negative() {
        -1
    } else {
        0
    }
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(format_scalar(&ratio(6, -4)), "-3/2");
        assert_eq!(format_scalar(&int(5)), "5/1");
        assert_eq!(parse_scalar("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_scalar("10/4").unwrap(), ratio(5, 2));
        assert_eq!(parse_scalar("7").unwrap(), int(7));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("a/b").is_err());
    }

    #[test]
    fn grid_rounding() {
        assert_eq!(from_f64_grid(0.5, 4), ratio(1, 2));
        assert_eq!(from_f64_grid(-0.26, 4), ratio(-1, 4));
    }
}
