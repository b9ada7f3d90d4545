use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

/// Sign of a real quantity. `Zero` also stands for "indistinguishable from
/// zero at the working precision" when produced by a certified evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Positive,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    /// Sign of `value`, or `Zero` when `|value| <= noise`.
    pub fn certified(value: f64, noise: f64) -> Sign {
        if value.abs() <= noise {
            Sign::Zero
        } else {
            Sign::of(value)
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    /// True when both signs are nonzero and differ.
    pub fn opposes(self, other: Sign) -> bool {
        !self.is_zero() && !other.is_zero() && self != other
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Positive => "+",
        })
    }
}

/// Endpoint of the positive half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Endpoint {
    ZeroPlus,
    Infinity,
}
