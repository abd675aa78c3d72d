use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::{Error, Result};

/// An integer or half-integer quantum number, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    /// Nearest representable value; errors unless `x` is a multiple of 1/2.
    pub fn from_f64(x: f64) -> Result<Self> {
        let twice = 2.0 * x;
        if !twice.is_finite() || twice.fract() != 0.0 || twice.abs() > i32::MAX as f64 {
            return Err(Error::domain(format!("{x} is not a multiple of 1/2")));
        }
        Ok(HalfInt(twice as i32))
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// Multiplicity `2j + 1` of a spin magnitude.
    pub fn dim(self) -> usize {
        debug_assert!(self.0 >= 0);
        (self.0 + 1) as usize
    }

    /// True when `self` is an allowed projection `m` of the spin `j`.
    pub fn is_projection_of(self, j: HalfInt) -> bool {
        j.0 >= 0 && self.0.abs() <= j.0 && (j.0 - self.0) % 2 == 0
    }

    /// Projections `j, j-1, ..., -j` in descending order (the basis order
    /// used by every matrix in this crate).
    pub fn projections(self) -> impl DoubleEndedIterator<Item = HalfInt> + ExactSizeIterator {
        let j = self.0.max(0);
        (0..(j as usize + 1)).map(move |k| HalfInt(j - 2 * k as i32))
    }

    /// Row/column index of projection `m` in the descending basis of `self`.
    pub fn index_of(self, m: HalfInt) -> usize {
        debug_assert!(m.is_projection_of(self));
        ((self.0 - m.0) / 2) as usize
    }
}

/// Whether `(a, b, c)` satisfies the triangle rule with integer perimeter.
pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.0, b.0, c.0);
    a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl From<i32> for HalfInt {
    fn from(n: i32) -> Self {
        HalfInt::from_int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"4"`, `"7/2"`, `"-1/2"` and `"3.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::domain(format!("cannot read {s:?} as an integer or half-integer"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(HalfInt(num)),
                "1" => Ok(HalfInt::from_int(num)),
                _ => Err(bad()),
            }
        } else if let Ok(n) = s.parse::<i32>() {
            Ok(HalfInt::from_int(n))
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            HalfInt::from_f64(x).map_err(|_| bad())
        }
    }
}
