//! Exact rational arithmetic for costs, sizes and times.
//!
//! Every quantity in the cost model is a sum, product or maximum of
//! non-negative inputs, so exact rationals make solver and simulator results
//! directly comparable without tolerances. Values print as terminating
//! decimals when possible (`2.5`) and as `p/q` otherwise (`1/3`).

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact rational number backed by `i128` numerator and denominator.
///
/// Arithmetic panics on overflow rather than wrapping.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Builds `numer / denom` in lowest terms. Panics when `denom` is zero.
    pub fn new(numer: i128, denom: i128) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_integer(value: i128) -> Self {
        Rational(Ratio::from_integer(value))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Option<Rational> {
        if rhs.is_zero() {
            return None;
        }
        self.0.checked_div(&rhs.0).map(Rational)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Nearest multiple of `1 / 10^digits` (ties away from zero).
    pub fn round_to_decimal(value: f64, digits: u32) -> Self {
        let scale = 10i128.pow(digits);
        let scaled = (value * scale as f64).round() as i128;
        Rational::new(scaled, scale)
    }

    /// Exact decimal expansion, if the denominator only has factors 2 and 5.
    fn decimal_digits(&self) -> Option<u32> {
        let mut d = self.denom();
        let (mut twos, mut fives) = (0u32, 0u32);
        while d % 2 == 0 {
            d /= 2;
            twos += 1;
        }
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        (d == 1).then_some(twos.max(fives))
    }
}

fn overflow(op: &str) -> ! {
    panic!("rational overflow in {op}")
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(
            self.0
                .checked_add(&rhs.0)
                .unwrap_or_else(|| overflow("add")),
        )
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = *self + rhs;
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(
            self.0
                .checked_sub(&rhs.0)
                .unwrap_or_else(|| overflow("sub")),
        )
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(
            self.0
                .checked_mul(&rhs.0)
                .unwrap_or_else(|| overflow("mul")),
        )
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self.checked_div(&rhs).unwrap_or_else(|| overflow("div"))
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, Add::add)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v as i128)
    }
}

impl From<u32> for Rational {
    fn from(v: u32) -> Self {
        Rational::from_integer(v as i128)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        if d == 1 {
            return write!(f, "{n}");
        }
        match self.decimal_digits() {
            Some(digits) => {
                let scale = 10i128.pow(digits);
                let scaled = n * (scale / d);
                let sign = if scaled < 0 { "-" } else { "" };
                let abs = scaled.abs();
                let (int, frac) = abs.div_rem(&scale);
                write!(f, "{sign}{int}.{frac:0width$}", width = digits as usize)
            }
            None => write!(f, "{n}/{d}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts integers (`3`), decimals (`0.25`, `-1.5`) and fractions (`1/3`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadNumber(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: i128 = n.parse().map_err(|_| bad())?;
            let d: i128 = d.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            return Ok(Rational::new(n, d));
        }
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int) || !all_digits(frac) || frac.len() > 30 {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let numer: i128 = if digits.is_empty() {
            0
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let denom = 10i128.pow(frac.len() as u32);
        let value = Rational::new(numer, denom);
        Ok(if negative {
            Rational::ZERO - value
        } else {
            value
        })
    }
}

/// `max` over rationals with an explicit empty value.
pub fn max_or(values: impl IntoIterator<Item = Rational>, empty: Rational) -> Rational {
    values
        .into_iter()
        .fold(None, |acc: Option<Rational>, v| match acc {
            Some(a) if a.cmp(&v) != Ordering::Less => Some(a),
            _ => Some(v),
        })
        .unwrap_or(empty)
}

/// Least common multiple of the denominators, or `None` on overflow.
pub(crate) fn common_denominator<'a>(
    values: impl IntoIterator<Item = &'a Rational>,
) -> Option<i128> {
    let mut acc: i128 = 1;
    for v in values {
        let d = v.denom();
        let g = acc.gcd(&d);
        acc = (acc / g).checked_mul(d)?;
    }
    Some(acc)
}
