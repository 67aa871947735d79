use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Width of the band around equality reported as [`Verdict::Marginal`].
pub const MARGINAL_BAND: f64 = 1e-9;

/// A non-negative real stored as its natural logarithm.
///
/// Zero is represented explicitly because `ln 0` is not finite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    ln: f64,
    zero: bool,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        ln: 0.0,
        zero: true,
    };
    pub const ONE: LogValue = LogValue {
        ln: 0.0,
        zero: false,
    };

    pub fn from_ln(ln: f64) -> Self {
        if ln == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { ln, zero: false }
        }
    }

    /// `x` must be non-negative.
    pub fn from_f64(x: f64) -> Self {
        debug_assert!(x >= 0.0, "LogValue of negative {x}");
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                ln: x.ln(),
                zero: false,
            }
        }
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        if x.is_zero() {
            return Self::ZERO;
        }
        let bits = x.bits();
        if bits <= 1000 {
            return Self::from_f64(x.to_f64().expect("fits in f64"));
        }
        let shift = bits - 64;
        let top = (x >> shift).to_f64().expect("64-bit head");
        Self {
            ln: top.ln() + shift as f64 * std::f64::consts::LN_2,
            zero: false,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// Natural logarithm; `-inf` for zero.
    pub fn ln(&self) -> f64 {
        if self.zero {
            f64::NEG_INFINITY
        } else {
            self.ln
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.zero {
            0.0
        } else {
            self.ln.exp()
        }
    }

    pub fn powi(self, n: u64) -> LogValue {
        if n == 0 {
            Self::ONE
        } else if self.zero {
            Self::ZERO
        } else {
            Self::from_ln(self.ln * n as f64)
        }
    }
}

impl std::ops::Mul for LogValue {
    type Output = LogValue;

    fn mul(self, other: LogValue) -> LogValue {
        if self.zero || other.zero {
            Self::ZERO
        } else {
            Self::from_ln(self.ln + other.ln)
        }
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "0")
        } else {
            write!(f, "exp({})", self.ln)
        }
    }
}

/// Outcome of a single check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Within [`MARGINAL_BAND`] of equality in log space.
    Marginal,
    /// Evaluated and recorded, never a failure.
    Informational,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        self == Verdict::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Marginal => "marginal",
            Verdict::Informational => "informational",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Checks `lhs >= rhs` in log space with the marginal band.
pub fn compare_at_least(lhs: LogValue, rhs: LogValue) -> Verdict {
    match (lhs.is_zero(), rhs.is_zero()) {
        (_, true) => Verdict::Pass,
        (true, false) => Verdict::Fail,
        (false, false) => {
            let diff = lhs.ln() - rhs.ln();
            if diff.abs() <= MARGINAL_BAND {
                Verdict::Marginal
            } else if diff > 0.0 {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
    }
}
