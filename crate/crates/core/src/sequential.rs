//! Gambler's-ruin sequential A/B test.
//!
//! Successes of treatment (`T`) and control (`C`) are fed in one at a time.
//! The test stops with a treatment win once `T - C` reaches the margin `d*`,
//! or with no winner once `T + C` reaches the budget `N`.

use crate::error::{domain, Error, Result};

/// Largest budget the design search will consider.
pub const DESIGN_MAX_N: u64 = 1_000_000;

/// Budget `N` and win margin `d*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SequentialConfig {
    n_max: u64,
    d_star: u64,
}

impl SequentialConfig {
    pub fn new(n_max: u64, d_star: u64) -> Result<Self> {
        if n_max == 0 || d_star == 0 {
            return domain(format!(
                "budget and margin must be positive, got N={n_max}, d*={d_star}"
            ));
        }
        if d_star > n_max {
            return domain(format!("margin d*={d_star} exceeds budget N={n_max}"));
        }
        Ok(Self { n_max, d_star })
    }

    /// Config with the default margin `d* = ceil(2 √N)`.
    pub fn from_budget(n_max: u64) -> Result<Self> {
        Self::new(n_max, default_margin(n_max))
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn d_star(&self) -> u64 {
        self.d_star
    }
}

/// `ceil(2 √n)` in integer arithmetic.
pub fn default_margin(n: u64) -> u64 {
    let four_n = 4 * n;
    let r = four_n.isqrt();
    if r * r == four_n {
        r
    } else {
        r + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    TreatmentSuccess,
    ControlSuccess,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequentialStatus {
    Running,
    TreatmentWins,
    NoWinner,
}

impl SequentialStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Running => "running",
            Self::TreatmentWins => "treatment_wins",
            Self::NoWinner => "no_winner",
        }
    }
}

/// Running state of one test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentialState {
    config: SequentialConfig,
    t_wins: u64,
    c_wins: u64,
    status: SequentialStatus,
}

impl SequentialState {
    pub fn new(config: SequentialConfig) -> Self {
        Self {
            config,
            t_wins: 0,
            c_wins: 0,
            status: SequentialStatus::Running,
        }
    }

    /// Resumes a test from counts already seen. The counts must describe a
    /// test that has not stopped yet.
    pub fn from_counts(config: SequentialConfig, t_wins: u64, c_wins: u64) -> Result<Self> {
        let state = Self {
            config,
            t_wins,
            c_wins,
            status: SequentialStatus::Running,
        };
        if state.margin() >= config.d_star as i64 || state.n_tot() >= config.n_max {
            return Err(Error::State(format!(
                "counts T={t_wins}, C={c_wins} already meet a stopping condition"
            )));
        }
        Ok(state)
    }

    pub fn config(&self) -> SequentialConfig {
        self.config
    }

    pub fn t_wins(&self) -> u64 {
        self.t_wins
    }

    pub fn c_wins(&self) -> u64 {
        self.c_wins
    }

    pub fn status(&self) -> SequentialStatus {
        self.status
    }

    /// `T - C`.
    pub fn margin(&self) -> i64 {
        self.t_wins as i64 - self.c_wins as i64
    }

    /// `T + C`.
    pub fn n_tot(&self) -> u64 {
        self.t_wins + self.c_wins
    }

    /// Records one success. The margin is checked before the budget, so a
    /// success that triggers both ends the test with a treatment win.
    pub fn record(&mut self, outcome: Outcome) -> Result<SequentialStatus> {
        if self.status != SequentialStatus::Running {
            return Err(Error::State(format!(
                "test already stopped with status {}",
                self.status.as_str()
            )));
        }
        match outcome {
            Outcome::TreatmentSuccess => self.t_wins += 1,
            Outcome::ControlSuccess => self.c_wins += 1,
        }
        if self.margin() >= self.config.d_star as i64 {
            self.status = SequentialStatus::TreatmentWins;
        } else if self.n_tot() >= self.config.n_max {
            self.status = SequentialStatus::NoWinner;
        }
        Ok(self.status)
    }
}

/// Relative success-rate advantage `δ` of treatment over control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lift(f64);

impl Lift {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return domain(format!("lift must be finite and >= 0, got {delta}"));
        }
        Ok(Self(delta))
    }

    pub fn delta(&self) -> f64 {
        self.0
    }

    /// Probability that the next success belongs to the treatment,
    /// `(1 + δ) / (2 + δ)`.
    pub fn treatment_step_probability(&self) -> f64 {
        (1.0 + self.0) / (2.0 + self.0)
    }
}

/// Prefactor of the first-passage sum.
///
/// `MarginOverStep` uses `d*/j`, the exact first-passage mass of the walk.
/// `LiteralTotalWinsOverStep` uses `n_M/j` with `n_M = (N + d*)/2`, which
/// inflates every term by `(N + d*)/(2d*)`. The literal variant is returned
/// unclamped and can exceed one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Prefactor {
    #[default]
    MarginOverStep,
    LiteralTotalWinsOverStep,
}

impl Prefactor {
    fn factor(self, n_max: u64, d_star: u64) -> f64 {
        match self {
            Self::MarginOverStep => 1.0,
            Self::LiteralTotalWinsOverStep => (n_max + d_star) as f64 / (2 * d_star) as f64,
        }
    }
}

const RESCALE: f64 = 1e150;
const LN_RESCALE: f64 = 345.387_763_949_106_8;

/// Running sums of `d/j · C(j, (j+d)/2) · p^{(j+d)/2} q^{(j-d)/2}` over
/// `j = d, d+2, ...` for `L` step probabilities at once. Each lane is kept in
/// scaled form so deep tails do not underflow.
#[derive(Debug, Clone)]
struct FirstPassage<const L: usize> {
    d: u64,
    next_j: u64,
    lanes: [Lane; L],
}

#[derive(Debug, Clone, Copy)]
struct Lane {
    pq: f64,
    term: f64,
    sum: f64,
    ln_scale: f64,
}

impl Lane {
    fn new(d: u64, p: f64) -> Self {
        let ln_first = d as f64 * p.ln();
        // ln_first <= 0; start in a representable range
        let ln_scale = if ln_first < -600.0 { ln_first } else { 0.0 };
        Self {
            pq: p * (1.0 - p),
            term: (ln_first - ln_scale).exp(),
            sum: 0.0,
            ln_scale,
        }
    }

    #[inline]
    fn step(&mut self, ratio: f64) {
        self.sum += self.term;
        self.term *= ratio * self.pq;
        if self.term != 0.0 && self.term < 1.0 / RESCALE && self.sum < 1.0 / RESCALE {
            self.term *= RESCALE;
            self.sum *= RESCALE;
            self.ln_scale -= LN_RESCALE;
        } else if self.ln_scale < 0.0 && self.sum > RESCALE {
            self.term /= RESCALE;
            self.sum /= RESCALE;
            self.ln_scale += LN_RESCALE;
        }
    }

    fn value(&self) -> f64 {
        if self.sum == 0.0 {
            0.0
        } else {
            (self.sum.ln() + self.ln_scale).exp()
        }
    }
}

impl<const L: usize> FirstPassage<L> {
    fn new(d: u64, p: [f64; L]) -> Self {
        Self {
            d,
            next_j: d,
            lanes: p.map(|p| Lane::new(d, p)),
        }
    }

    /// Adds every term with `j <= n`.
    fn advance_to(&mut self, n: u64) {
        while self.next_j <= n {
            let j = self.next_j as f64;
            let k = ((self.next_j + self.d) / 2) as f64;
            let ratio = j * (j + 1.0) / ((k + 1.0) * (j - k + 1.0));
            for lane in &mut self.lanes {
                lane.step(ratio);
            }
            self.next_j += 2;
        }
    }

    fn value(&self, lane: usize) -> f64 {
        self.lanes[lane].value()
    }
}

fn check_bound_args(n_max: u64, d_star: u64) -> Result<()> {
    if n_max == 0 || d_star == 0 {
        return domain(format!(
            "budget and margin must be positive, got N={n_max}, d*={d_star}"
        ));
    }
    Ok(())
}

fn hit_probability(n_max: u64, d_star: u64, p: f64, prefactor: Prefactor) -> Result<f64> {
    check_bound_args(n_max, d_star)?;
    if d_star > n_max {
        return Ok(0.0);
    }
    let mut walk = FirstPassage::new(d_star, [p]);
    walk.advance_to(n_max);
    let value = walk.value(0) * prefactor.factor(n_max, d_star);
    Ok(match prefactor {
        Prefactor::MarginOverStep => value.min(1.0),
        Prefactor::LiteralTotalWinsOverStep => value,
    })
}

/// Probability under no lift that the margin reaches `d*` within `N`
/// successes: `Σ_j (d*/j) C(j, (d*+j)/2) 2^{-j}` over `j ≡ d* (mod 2)`.
pub fn significance_bound(n_max: u64, d_star: u64) -> Result<f64> {
    significance_bound_with(n_max, d_star, Prefactor::default())
}

pub fn significance_bound_with(n_max: u64, d_star: u64, prefactor: Prefactor) -> Result<f64> {
    hit_probability(n_max, d_star, 0.5, prefactor)
}

/// Probability of declaring the treatment the winner under lift `δ`.
pub fn power_bound(n_max: u64, d_star: u64, lift: Lift) -> Result<f64> {
    power_bound_with(n_max, d_star, lift, Prefactor::default())
}

pub fn power_bound_with(n_max: u64, d_star: u64, lift: Lift, prefactor: Prefactor) -> Result<f64> {
    hit_probability(n_max, d_star, lift.treatment_step_probability(), prefactor)
}

/// Smallest `(N, d*)`, ordered by `N` then `d*`, with
/// `significance_bound <= alpha_target` and `1 - power_bound <= beta_target`.
pub fn design_sequential(alpha_target: f64, beta_target: f64, lift: Lift) -> Result<SequentialConfig> {
    design_sequential_with(alpha_target, beta_target, lift, Prefactor::default())
}

pub fn design_sequential_with(
    alpha_target: f64,
    beta_target: f64,
    lift: Lift,
    prefactor: Prefactor,
) -> Result<SequentialConfig> {
    for (name, v) in [("alpha_target", alpha_target), ("beta_target", beta_target)] {
        if !(v > 0.0 && v < 1.0) {
            return domain(format!("{name} must lie in (0, 1), got {v}"));
        }
    }
    if lift.delta() <= 0.0 {
        return domain("design needs a positive lift");
    }
    let p = lift.treatment_step_probability();
    // Both bounds fall as d grows and rise with N, so the smallest margin
    // meeting the significance target never decreases with N.
    let mut d = 1u64;
    // Lane 0 is the null walk, lane 1 the lifted one.
    let mut walks = FirstPassage::new(d, [0.5, p]);
    for n in 1..=DESIGN_MAX_N {
        walks.advance_to(n);
        while d <= n && walks.value(0) * prefactor.factor(n, d) > alpha_target {
            d += 1;
            walks = FirstPassage::new(d, [0.5, p]);
            walks.advance_to(n);
        }
        if d > n {
            continue;
        }
        if 1.0 - walks.value(1) * prefactor.factor(n, d) <= beta_target {
            return SequentialConfig::new(n, d);
        }
    }
    Err(Error::Infeasible(format!(
        "no design with N <= {DESIGN_MAX_N} meets alpha={alpha_target}, beta={beta_target} at lift {}",
        lift.delta()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: u64, d: u64) -> SequentialConfig {
        SequentialConfig::new(n, d).unwrap()
    }

    #[test]
    fn default_margin_is_ceiling() {
        assert_eq!(default_margin(4), 4);
        assert_eq!(default_margin(170), 27);
        assert_eq!(default_margin(100), 20);
        assert_eq!(default_margin(101), 21);
        assert_eq!(SequentialConfig::from_budget(4).unwrap().d_star(), 4);
        assert!(SequentialConfig::from_budget(3).is_err());
        assert!(SequentialConfig::new(1, 2).is_err());
        assert!(SequentialConfig::new(0, 0).is_err());
    }

    #[test]
    fn new_state_is_zeroed() {
        let s = SequentialState::new(cfg(170, 26));
        assert_eq!((s.t_wins(), s.c_wins(), s.status()), (0, 0, SequentialStatus::Running));
    }

    #[test]
    fn margin_reached() {
        let mut s = SequentialState::from_counts(cfg(170, 26), 25, 0).unwrap();
        assert_eq!(s.record(Outcome::TreatmentSuccess).unwrap(), SequentialStatus::TreatmentWins);
        assert_eq!(s.margin(), 26);
        assert!(matches!(s.record(Outcome::ControlSuccess), Err(Error::State(_))));
        assert_eq!(s.n_tot(), 26);
    }

    #[test]
    fn budget_reached() {
        let mut s = SequentialState::from_counts(cfg(170, 26), 97, 72).unwrap();
        assert_eq!(s.record(Outcome::ControlSuccess).unwrap(), SequentialStatus::NoWinner);
        assert_eq!((s.n_tot(), s.margin()), (170, 24));
    }

    #[test]
    fn margin_checked_before_budget() {
        let mut s = SequentialState::from_counts(cfg(10, 4), 6, 3).unwrap();
        assert_eq!(s.record(Outcome::TreatmentSuccess).unwrap(), SequentialStatus::TreatmentWins);
    }

    #[test]
    fn alternating_never_wins() {
        let mut s = SequentialState::new(cfg(10, 2));
        let mut i = 0;
        while s.status() == SequentialStatus::Running {
            let o = if i % 2 == 0 { Outcome::TreatmentSuccess } else { Outcome::ControlSuccess };
            s.record(o).unwrap();
            i += 1;
        }
        assert_eq!((s.status(), s.n_tot()), (SequentialStatus::NoWinner, 10));
    }

    #[test]
    fn from_counts_rejects_stopped() {
        assert!(SequentialState::from_counts(cfg(10, 3), 3, 0).is_err());
        assert!(SequentialState::from_counts(cfg(10, 3), 5, 5).is_err());
    }

    #[test]
    fn small_bounds_by_hand() {
        // d=1: hits at j=1 w.p. 1/2, j=3 w.p. 1/8, j=5 w.p. 2/32.
        let s = significance_bound(5, 1).unwrap();
        assert!((s - (0.5 + 0.125 + 0.0625)).abs() < 1e-15);
        // d=2: j=2 -> 1/4, j=4 -> 2/16
        assert!((significance_bound(4, 2).unwrap() - 0.375).abs() < 1e-15);
        assert_eq!(significance_bound(10, 20).unwrap(), 0.0);
        assert_eq!(power_bound(10, 20, Lift::new(3.0).unwrap()).unwrap(), 0.0);
        assert!(significance_bound(0, 1).is_err());
    }

    #[test]
    fn zero_lift_matches_significance() {
        let zero = Lift::new(0.0).unwrap();
        for (n, d) in [(170, 26), (50, 3), (999, 40)] {
            assert_eq!(power_bound(n, d, zero).unwrap(), significance_bound(n, d).unwrap());
        }
    }

    #[test]
    fn long_budget_does_not_underflow() {
        let s = significance_bound(1_000_000, 3000).unwrap();
        assert!(s > 0.0 && s < 1.0, "{s}");
        // huge margin: first term is 2^-5000
        let s = significance_bound(100_000, 5000).unwrap();
        assert!((0.0..1e-20).contains(&s), "{s}");
        // sure hit: near one over a long horizon
        let s = significance_bound(1_000_000, 1).unwrap();
        assert!(s > 0.999 && s <= 1.0, "{s}");
    }

    #[test]
    fn design_reproduces_worked_example() {
        let c = design_sequential(0.05, 0.2, Lift::new(0.5).unwrap()).unwrap();
        assert_eq!((c.n_max(), c.d_star()), (170, 26));
        let sig = significance_bound(170, 26).unwrap();
        let pow = power_bound(170, 26, Lift::new(0.5).unwrap()).unwrap();
        assert!(sig <= 0.05 && pow >= 0.8, "{sig} {pow}");
    }

    #[test]
    fn design_easy_targets() {
        let c = design_sequential(0.5, 0.5, Lift::new(10.0).unwrap()).unwrap();
        assert!(c.n_max() <= 3 && c.d_star() <= 2, "{c:?}");
    }

    #[test]
    fn design_infeasible_below_cap() {
        let err = design_sequential(1e-9, 1e-9, Lift::new(0.01).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)), "{err}");
    }

    #[test]
    fn literal_prefactor_inflates() {
        let lit = significance_bound_with(170, 26, Prefactor::LiteralTotalWinsOverStep).unwrap();
        let std = significance_bound(170, 26).unwrap();
        assert!((lit / std - 196.0 / 52.0).abs() < 1e-12);
    }

    #[test]
    fn design_rejects_bad_targets() {
        let l = Lift::new(0.5).unwrap();
        assert!(design_sequential(0.0, 0.2, l).is_err());
        assert!(design_sequential(0.05, 1.0, l).is_err());
        assert!(design_sequential(0.05, 0.2, Lift::new(0.0).unwrap()).is_err());
        assert!(Lift::new(-0.1).is_err());
    }
}
