use super::logreal::{LogReal, Sign};

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Streaming log-sum-exp over positive terms given by their logarithms.
///
/// Holds `exp(max) · (sum)` with the inner sum compensated, so long runs of
/// comparable terms do not drift.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    sum: NeumaierSum,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: NeumaierSum::new(),
        }
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if ln_term > self.max {
            let rescale = (self.max - ln_term).exp();
            self.sum = NeumaierSum {
                sum: self.sum.sum * rescale,
                compensation: self.sum.compensation * rescale,
            };
            self.max = ln_term;
        }
        self.sum.add((ln_term - self.max).exp());
    }

    pub fn is_empty(&self) -> bool {
        self.max == f64::NEG_INFINITY
    }

    /// Log of the accumulated sum; `-inf` when empty.
    pub fn ln(&self) -> f64 {
        if self.is_empty() {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.total().ln()
        }
    }
}

/// Two [`LogSumExp`] pools for an alternating series, combined once at the
/// end so the cancellation can be measured.
#[derive(Debug, Clone, Copy, Default)]
pub struct SignedLogSum {
    positive: LogSumExp,
    negative: LogSumExp,
}

impl SignedLogSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, term: LogReal) {
        match term.sign() {
            Sign::Positive => self.positive.push(term.log_magnitude()),
            Sign::Negative => self.negative.push(term.log_magnitude()),
            Sign::Zero => {}
        }
    }

    /// Combined value and the number of decimal digits lost to cancellation
    /// (`log10` of the larger pool over the result's magnitude).
    pub fn finish(&self) -> (LogReal, f64) {
        let pos = LogReal::from_ln(self.positive.ln());
        let neg = -LogReal::from_ln(self.negative.ln());
        let value = pos.add(&neg);
        if pos.is_zero() || neg.is_zero() {
            return (value, 0.0);
        }
        let lead = pos.log_magnitude().max(neg.log_magnitude());
        let digits = if value.is_zero() {
            f64::INFINITY
        } else {
            ((lead - value.log_magnitude()) / std::f64::consts::LN_10).max(0.0)
        };
        (value, digits)
    }
}
