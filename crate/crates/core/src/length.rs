//! Edge lengths: exact arbitrary-precision rationals or IEEE doubles.
//!
//! A graph uses one mode throughout. Exact mode is closed under addition and
//! comparison with no rounding, which is what makes "preserves distances
//! exactly" testable as equality.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LengthMode {
    Exact,
    Approx,
}

impl fmt::Display for LengthMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthMode::Exact => write!(f, "exact"),
            LengthMode::Approx => write!(f, "approx"),
        }
    }
}

/// A nonnegative edge length, either an exact rational or a double.
#[derive(Debug, Clone)]
pub enum Length {
    Exact(BigRational),
    Approx(f64),
}

impl Length {
    pub fn zero(mode: LengthMode) -> Self {
        match mode {
            LengthMode::Exact => Length::Exact(BigRational::zero()),
            LengthMode::Approx => Length::Approx(0.0),
        }
    }

    pub fn from_int(n: u64) -> Self {
        Length::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact rational `num/den`. Errors on zero denominator or negative value.
    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::BadLength);
        }
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        if r.is_negative() {
            return Err(Error::BadLength);
        }
        Ok(Length::Exact(r))
    }

    pub fn exact(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::BadLength);
        }
        Ok(Length::Exact(r))
    }

    pub fn approx(x: f64) -> Result<Self> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::BadLength);
        }
        Ok(Length::Approx(x))
    }

    pub fn mode(&self) -> LengthMode {
        match self {
            Length::Exact(_) => LengthMode::Exact,
            Length::Approx(_) => LengthMode::Approx,
        }
    }

    /// Valid edge length: nonnegative, and finite in approximate mode.
    pub fn is_valid(&self) -> bool {
        match self {
            Length::Exact(r) => !r.is_negative(),
            Length::Approx(x) => x.is_finite() && *x >= 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Length::Exact(r) => r.is_zero(),
            Length::Approx(x) => *x == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Length::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Length::Approx(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Length::Exact(r) => Some(r),
            Length::Approx(_) => None,
        }
    }

    /// Parse `integer`, `decimal`, or `a/b` in the given mode.
    pub fn parse(s: &str, mode: LengthMode) -> Result<Self> {
        let s = s.trim();
        match mode {
            LengthMode::Exact => {
                let r = if let Some((a, b)) = s.split_once('/') {
                    let num: BigInt = a.trim().parse().map_err(|_| Error::BadLength)?;
                    let den: BigInt = b.trim().parse().map_err(|_| Error::BadLength)?;
                    if den.is_zero() {
                        return Err(Error::BadLength);
                    }
                    BigRational::new(num, den)
                } else if let Some((int, frac)) = s.split_once('.') {
                    let int = if int.is_empty() { "0" } else { int };
                    let whole: BigInt = int.parse().map_err(|_| Error::BadLength)?;
                    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(Error::BadLength);
                    }
                    let digits: BigInt = frac.parse().map_err(|_| Error::BadLength)?;
                    let scale = num::pow::pow(BigInt::from(10), frac.len());
                    let frac_part = BigRational::new(digits, scale);
                    let whole_part = BigRational::from_integer(whole);
                    if s.starts_with('-') {
                        whole_part - frac_part
                    } else {
                        whole_part + frac_part
                    }
                } else {
                    let n: BigInt = s.parse().map_err(|_| Error::BadLength)?;
                    BigRational::from_integer(n)
                };
                Length::exact(r)
            }
            LengthMode::Approx => {
                let x: f64 = if let Some((a, b)) = s.split_once('/') {
                    let num: f64 = a.trim().parse().map_err(|_| Error::BadLength)?;
                    let den: f64 = b.trim().parse().map_err(|_| Error::BadLength)?;
                    num / den
                } else {
                    s.parse().map_err(|_| Error::BadLength)?
                };
                Length::approx(x)
            }
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Exact(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            // f64 Display prints the shortest string that round-trips.
            Length::Approx(x) => write!(f, "{}", x),
        }
    }
}

impl PartialEq for Length {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Length {}

impl PartialOrd for Length {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Length {
    /// Total order. Cross-mode comparison orders Exact before Approx; a graph
    /// never mixes modes, so that branch carries no meaning.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Length::Exact(a), Length::Exact(b)) => a.cmp(b),
            (Length::Approx(a), Length::Approx(b)) => a.total_cmp(b),
            (Length::Exact(_), Length::Approx(_)) => Ordering::Less,
            (Length::Approx(_), Length::Exact(_)) => Ordering::Greater,
        }
    }
}

impl Add<&Length> for &Length {
    type Output = Length;

    fn add(self, rhs: &Length) -> Length {
        match (self, rhs) {
            (Length::Exact(a), Length::Exact(b)) => Length::Exact(a + b),
            (Length::Approx(a), Length::Approx(b)) => Length::Approx(a + b),
            _ => panic!("length mode mismatch in addition"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_exact_forms() {
        let a = Length::parse("5", LengthMode::Exact).unwrap();
        assert_eq!(a, Length::from_int(5));
        let b = Length::parse("5/4", LengthMode::Exact).unwrap();
        assert_eq!(b, Length::from_ratio(5, 4).unwrap());
        let c = Length::parse("1.25", LengthMode::Exact).unwrap();
        assert_eq!(c, Length::from_ratio(5, 4).unwrap());
        assert!(Length::parse("-1", LengthMode::Exact).is_err());
        assert!(Length::parse("1/0", LengthMode::Exact).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "7", "5/4", "3/2048"] {
            let l = Length::parse(s, LengthMode::Exact).unwrap();
            assert_eq!(l.to_string(), s);
        }
        let x = Length::approx(0.1 + 0.2).unwrap();
        let back = Length::parse(&x.to_string(), LengthMode::Approx).unwrap();
        assert_eq!(x, back);
    }

    #[test]
    fn exact_addition_no_rounding() {
        let a = Length::from_ratio(1, 3).unwrap();
        let b = Length::from_ratio(1, 6).unwrap();
        assert_eq!(&a + &b, Length::from_ratio(1, 2).unwrap());
    }

    #[test]
    fn approx_rejects_nan_and_negative() {
        assert!(Length::approx(f64::NAN).is_err());
        assert!(Length::approx(-0.5).is_err());
    }
}
