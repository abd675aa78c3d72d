//! Unit-suffixed quantities, converted to SI on ingestion.

use std::f64::consts::TAU;

/// Physical dimension expected for a configuration value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    /// Angular frequency in rad/s. Hz-family suffixes are ordinary frequency
    /// and are multiplied by 2π.
    Frequency,
    Length,
    Power,
    Time,
    Angle,
}

impl Dimension {
    fn name(self) -> &'static str {
        match self {
            Dimension::Frequency => "frequency",
            Dimension::Length => "length",
            Dimension::Power => "power",
            Dimension::Time => "time",
            Dimension::Angle => "angle",
        }
    }

    /// Conversion to SI. Decimal sub-units divide by an exact power of ten
    /// so that e.g. `10 uW` lands on the nearest double to `1e-5`.
    fn units(self) -> &'static [(&'static str, Scale)] {
        use Scale::{Div, Mul};
        match self {
            Dimension::Frequency => {
                &[("Hz", Mul(1.0)), ("kHz", Mul(1e3)), ("MHz", Mul(1e6)), ("GHz", Mul(1e9)), ("rad/s", Mul(1.0))]
            }
            Dimension::Length => {
                &[("m", Mul(1.0)), ("cm", Div(1e2)), ("mm", Div(1e3)), ("um", Div(1e6)), ("nm", Div(1e9))]
            }
            Dimension::Power => &[("W", Mul(1.0)), ("mW", Div(1e3)), ("uW", Div(1e6)), ("nW", Div(1e9))],
            Dimension::Time => &[("s", Mul(1.0)), ("ms", Div(1e3)), ("us", Div(1e6)), ("ns", Div(1e9))],
            Dimension::Angle => &[("rad", Mul(1.0)), ("deg", Mul(std::f64::consts::PI / 180.0))],
        }
    }

    /// Suffix used when writing values back out.
    pub fn si_unit(self) -> &'static str {
        match self {
            Dimension::Frequency => "rad/s",
            Dimension::Length => "m",
            Dimension::Power => "W",
            Dimension::Time => "s",
            Dimension::Angle => "rad",
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Scale {
    Mul(f64),
    Div(f64),
}

/// Parses `"<number> <unit>"` (the space is optional) into SI units.
pub fn parse_quantity(text: &str, dimension: Dimension) -> Result<f64, String> {
    let text = text.trim();
    let split = unit_start(text);
    let (number, unit) = (text[..split].trim(), text[split..].trim());
    let value: f64 = number.parse().map_err(|_| format!("cannot read {:?} as a {}", text, dimension.name()))?;
    if !value.is_finite() {
        return Err(format!("{text:?} is not finite"));
    }
    if unit.is_empty() {
        return Err(format!("{} {text:?} needs a unit suffix ({})", dimension.name(), unit_list(dimension)));
    }
    let &(_, scale) = dimension.units().iter().find(|(name, _)| *name == unit).ok_or_else(|| {
        format!("unknown {} unit {unit:?} (expected one of {})", dimension.name(), unit_list(dimension))
    })?;
    let si = match scale {
        Scale::Mul(k) => value * k,
        Scale::Div(k) => value / k,
    };
    Ok(if dimension == Dimension::Frequency && unit != "rad/s" { TAU * si } else { si })
}

/// Parses a dimensionless number, rejecting anything with a suffix.
pub fn parse_number(text: &str) -> Result<f64, String> {
    let value: f64 = text.trim().parse().map_err(|_| format!("cannot read {text:?} as a number"))?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{text:?} is not finite"))
    }
}

fn unit_list(dimension: Dimension) -> String {
    dimension.units().iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
}

/// Byte index where the unit suffix begins. An `e`/`E` directly followed by
/// a digit or sign belongs to the exponent.
fn unit_start(text: &str) -> usize {
    let bytes = text.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        let exponent = matches!(b, b'e' | b'E')
            && i > 0
            && bytes.get(i + 1).is_some_and(|n| n.is_ascii_digit() || *n == b'-' || *n == b'+');
        if (b.is_ascii_alphabetic() && !exponent) || b == b'/' || b.is_ascii_whitespace() {
            return i;
        }
    }
    text.len()
}

/// Writes an SI value so that [`parse_quantity`] reads back the same bits.
pub fn format_quantity(value: f64, dimension: Dimension) -> String {
    format!("{value:e} {}", dimension.si_unit())
}
