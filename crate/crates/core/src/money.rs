//! Exact money arithmetic.
//!
//! Amounts are integer cents. Per-unit fare rates are fixed-point with four
//! decimal places of a cent, so `0.01` major units per meter is stored as
//! `10_000` rate units.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Number of rate units in one cent.
pub const RATE_UNITS_PER_CENT: i64 = 10_000;

/// An amount of money in integer minor units (cents).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cents(pub i64);

impl Cents {
    pub const ZERO: Cents = Cents(0);

    pub fn value(self) -> i64 {
        self.0
    }

    /// Converts a major-unit decimal string ("2.50") to cents.
    pub fn parse_major(s: &str) -> Option<Cents> {
        parse_fixed(s, 2).map(Cents)
    }

    pub fn as_major(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl fmt::Display for Cents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}¢", self.0)
    }
}

impl Add for Cents {
    type Output = Cents;
    fn add(self, rhs: Cents) -> Cents {
        Cents(self.0 + rhs.0)
    }
}

impl AddAssign for Cents {
    fn add_assign(&mut self, rhs: Cents) {
        self.0 += rhs.0;
    }
}

impl Sub for Cents {
    type Output = Cents;
    fn sub(self, rhs: Cents) -> Cents {
        Cents(self.0 - rhs.0)
    }
}

impl Mul<i64> for Cents {
    type Output = Cents;
    fn mul(self, rhs: i64) -> Cents {
        Cents(self.0 * rhs)
    }
}

impl Sum for Cents {
    fn sum<I: Iterator<Item = Cents>>(iter: I) -> Cents {
        iter.fold(Cents::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Cents> for Cents {
    fn sum<I: Iterator<Item = &'a Cents>>(iter: I) -> Cents {
        iter.copied().sum()
    }
}

/// Money per physical unit (meter or minute), in 1/10000 of a cent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rate(pub i64);

impl Rate {
    pub fn from_cents(cents: i64) -> Rate {
        Rate(cents * RATE_UNITS_PER_CENT)
    }

    /// Converts a major-unit decimal string ("0.015") to rate units.
    pub fn parse_major(s: &str) -> Option<Rate> {
        parse_fixed(s, 6).map(Rate)
    }

    pub fn as_cents(self) -> f64 {
        self.0 as f64 / RATE_UNITS_PER_CENT as f64
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / RATE_UNITS_PER_CENT;
        let frac = (self.0 % RATE_UNITS_PER_CENT).abs();
        write!(f, "{whole}.{frac:04}¢")
    }
}

/// Parses a non-negative decimal string into an integer scaled by
/// `10^scale`, rounding half-up on excess digits.
pub fn parse_fixed(s: &str, scale: u32) -> Option<i64> {
    let s = s.trim();
    if s.is_empty() || s.starts_with('-') {
        return None;
    }
    let s = s.strip_prefix('+').unwrap_or(s);
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let pow = 10i64.checked_pow(scale)?;
    let int_value: i64 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
    let mut value = int_value.checked_mul(pow)?;
    let mut place = pow;
    let mut digits = frac_part.bytes();
    for b in digits.by_ref() {
        place /= 10;
        value = value.checked_add(i64::from(b - b'0') * place)?;
        if place == 1 {
            break;
        }
    }
    if let Some(next) = digits.next() {
        if next >= b'5' {
            value = value.checked_add(1)?;
        }
    }
    Some(value)
}
