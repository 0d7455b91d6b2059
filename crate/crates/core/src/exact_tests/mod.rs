//! Offline frequentist tests on win/loss data for two assets.

mod fisher;
mod ks;
mod likelihood;

pub use fisher::{fisher_exact_p, fisher_table_probability, Tail};
pub use ks::{ks_critical_value, ks_two_sample, KsResult};
pub use likelihood::{log_likelihood, wilks_test, LikelihoodConvention};

/// 2×2 table of wins and losses for assets `A` and `B`. Marginals are
/// always recomputed from the four cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ContingencyTable {
    pub wins_a: u64,
    pub losses_a: u64,
    pub wins_b: u64,
    pub losses_b: u64,
}

impl ContingencyTable {
    pub fn new(wins_a: u64, losses_a: u64, wins_b: u64, losses_b: u64) -> Self {
        Self {
            wins_a,
            losses_a,
            wins_b,
            losses_b,
        }
    }

    /// Trials of `A`.
    pub fn m_a(&self) -> u64 {
        self.wins_a + self.losses_a
    }

    /// Trials of `B`.
    pub fn m_b(&self) -> u64 {
        self.wins_b + self.losses_b
    }

    pub fn n_tot(&self) -> u64 {
        self.wins_a + self.wins_b
    }

    pub fn o_tot(&self) -> u64 {
        self.losses_a + self.losses_b
    }

    pub fn m_tot(&self) -> u64 {
        self.m_a() + self.m_b()
    }

    /// Exchanges the two assets.
    pub fn swapped(&self) -> Self {
        Self::new(self.wins_b, self.losses_b, self.wins_a, self.losses_a)
    }

    /// Range of `wins_b` over all tables sharing these margins.
    pub fn wins_b_support(&self) -> std::ops::RangeInclusive<u64> {
        let n_tot = self.n_tot();
        n_tot.saturating_sub(self.m_a())..=n_tot.min(self.m_b())
    }

    /// The table with the same margins and the given `wins_b`.
    pub fn with_wins_b(&self, wins_b: u64) -> Self {
        let wins_a = self.n_tot() - wins_b;
        Self::new(wins_a, self.m_a() - wins_a, wins_b, self.m_b() - wins_b)
    }
}
