use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

/// Sign of a [`LogReal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn as_f64(self) -> f64 {
        match self {
            Sign::Negative => -1.0,
            Sign::Zero => 0.0,
            Sign::Positive => 1.0,
        }
    }

    fn product(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// A real number stored as `sign · exp(log_magnitude)`.
///
/// Covers magnitudes far outside the `f64` range, which is what the
/// beta-function ratios in the comparison formulas need. When the sign is
/// [`Sign::Zero`] the magnitude is meaningless and kept at `-inf`.
#[derive(Debug, Clone, Copy)]
pub struct LogReal {
    log_magnitude: f64,
    sign: Sign,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        log_magnitude: f64::NEG_INFINITY,
        sign: Sign::Zero,
    };

    pub const ONE: LogReal = LogReal {
        log_magnitude: 0.0,
        sign: Sign::Positive,
    };

    /// Builds `sign · exp(log_magnitude)`. A non-finite `-inf` magnitude
    /// collapses to zero.
    pub fn new(sign: Sign, log_magnitude: f64) -> Self {
        if sign == Sign::Zero || log_magnitude == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { log_magnitude, sign }
        }
    }

    /// Positive value `exp(log_magnitude)`.
    pub fn from_ln(log_magnitude: f64) -> Self {
        Self::new(Sign::Positive, log_magnitude)
    }

    pub fn from_f64(x: f64) -> Self {
        match x.partial_cmp(&0.0) {
            Some(Ordering::Greater) => Self::new(Sign::Positive, x.ln()),
            Some(Ordering::Less) => Self::new(Sign::Negative, (-x).ln()),
            _ => Self::ZERO,
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Natural log of `|value|`; `-inf` for zero.
    pub fn log_magnitude(&self) -> f64 {
        self.log_magnitude
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// Natural log of the value, defined only for positive values.
    pub fn ln(&self) -> Option<f64> {
        (self.sign == Sign::Positive).then_some(self.log_magnitude)
    }

    /// Converts to `f64`, overflowing to `±inf` or underflowing to `0`.
    pub fn to_f64(&self) -> f64 {
        self.sign.as_f64() * self.log_magnitude.exp()
    }

    pub fn abs(&self) -> Self {
        Self::new(
            if self.is_zero() { Sign::Zero } else { Sign::Positive },
            self.log_magnitude,
        )
    }

    /// Multiplies by the positive factor `exp(ln_factor)`.
    pub fn scale_ln(&self, ln_factor: f64) -> Self {
        Self::new(self.sign, self.log_magnitude + ln_factor)
    }

    /// Signed addition carried out in log space.
    pub fn add(&self, other: &LogReal) -> LogReal {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (big, small) = if self.log_magnitude >= other.log_magnitude {
            (self, other)
        } else {
            (other, self)
        };
        let delta = small.log_magnitude - big.log_magnitude;
        if big.sign == small.sign {
            Self::new(big.sign, big.log_magnitude + delta.exp().ln_1p())
        } else if delta == 0.0 {
            Self::ZERO
        } else {
            Self::new(big.sign, big.log_magnitude + ln_1m_exp(delta))
        }
    }
}

/// `ln(1 - exp(x))` for `x < 0`, accurate on both sides of `-ln 2`.
pub(crate) fn ln_1m_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

impl PartialEq for LogReal {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign && (self.is_zero() || self.log_magnitude == other.log_magnitude)
    }
}

impl Mul for LogReal {
    type Output = LogReal;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: LogReal) -> LogReal {
        LogReal::new(
            self.sign.product(rhs.sign),
            self.log_magnitude + rhs.log_magnitude,
        )
    }
}

impl Neg for LogReal {
    type Output = LogReal;

    fn neg(self) -> LogReal {
        let sign = match self.sign {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        };
        LogReal::new(sign, self.log_magnitude)
    }
}

impl From<f64> for LogReal {
    fn from(x: f64) -> Self {
        LogReal::from_f64(x)
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Zero => write!(f, "0"),
            Sign::Positive => write!(f, "exp({})", self.log_magnitude),
            Sign::Negative => write!(f, "-exp({})", self.log_magnitude),
        }
    }
}
