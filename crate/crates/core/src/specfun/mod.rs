//! Special-function kernels, evaluated in log space wherever a ratio of
//! gamma functions appears.
//!
//! Everything here is a pure function of its arguments.

pub(crate) mod gamma;
mod ddouble;
mod hyp2f1;
mod incbeta;
mod ingamma;
mod jacobi;
mod logreal;
mod sum;

pub use gamma::{ln_beta, ln_binomial, ln_gamma, ln_pochhammer};
pub use hyp2f1::{
    hyp2f1_neg_int_series, hyp2f1_via_jacobi, SeriesEval, SeriesRoute, CANCELLATION_DIGITS,
    EXTENDED_EXTRA_DIGITS,
};
pub use incbeta::reg_inc_beta_int;
pub use ingamma::reg_inc_gamma_upper;
pub use jacobi::jacobi_poly;
pub use logreal::{LogReal, Sign};
pub use sum::{LogSumExp, NeumaierSum, SignedLogSum};

pub(crate) use hyp2f1::{hyp2f1_series_with_complement, hyp2f1_via_jacobi_with_complement};
