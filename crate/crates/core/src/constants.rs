//! Physical constants (CODATA 2018, SI).

pub const HBAR: f64 = 1.054_571_817e-34;
pub const PLANCK: f64 = 6.626_070_15e-34;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
