use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::bench::run_benchmark;
use super::report::Record;
use crate::bayes::{
    mc_oracle, posterior_from_counts, pr_rate_greater, pr_scaled_rate_greater_with,
    ComparisonResult, FTermBackend, PayoutRatio,
};
use crate::error::{Error, Result};
use crate::exact_tests::{fisher_exact_p, ks_two_sample, wilks_test, ContingencyTable, Tail};
use crate::sequential::{
    design_sequential_with, power_bound_with, significance_bound_with, Lift, Outcome, Prefactor,
    SequentialConfig, SequentialState, SequentialStatus,
};

/// Exit code, standard output and standard error of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "betarate", version, about = "Exact Bayesian comparison of beta-binomial rates")]
struct Cli {
    /// Emit a single JSON document instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Counts {
    #[arg(long, allow_negative_numbers = true)]
    a_wins: i64,
    #[arg(long, allow_negative_numbers = true)]
    a_losses: i64,
    #[arg(long, allow_negative_numbers = true)]
    b_wins: i64,
    #[arg(long, allow_negative_numbers = true)]
    b_losses: i64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BackendArg {
    Series,
    Jacobi,
    CrossChecked,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TailArg {
    Less,
    Greater,
    TwoSided,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PrefactorArg {
    Margin,
    Literal,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pr(rate_B > rate_A) from win/loss counts.
    Compare(Counts),
    /// Pr(rate_B > gamma * rate_A).
    CompareScaled {
        #[command(flatten)]
        counts: Counts,
        #[arg(long)]
        gamma: f64,
        #[arg(long, value_enum, default_value = "series")]
        backend: BackendArg,
    },
    /// Monte Carlo estimate of Pr(rate_B > gamma * rate_A).
    Mc {
        #[command(flatten)]
        counts: Counts,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, env = "BETARATE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Fisher's exact test on the 2x2 win/loss table.
    Fisher {
        #[arg(long)]
        a_wins: u64,
        #[arg(long)]
        a_losses: u64,
        #[arg(long)]
        b_wins: u64,
        #[arg(long)]
        b_losses: u64,
        #[arg(long, value_enum, default_value = "greater")]
        tail: TailArg,
    },
    /// Two-sample Kolmogorov-Smirnov test on two sample files.
    Ks {
        /// One real per line; `#` starts a comment.
        samples_a: PathBuf,
        samples_b: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Likelihood-ratio test between nested models.
    Wilks {
        #[arg(long, allow_negative_numbers = true)]
        ell_h1: f64,
        #[arg(long, allow_negative_numbers = true)]
        ell_h0: f64,
        #[arg(long)]
        dof: u32,
    },
    /// Replays a file of outcomes (`T` or `C` per line) through a sequential test.
    Sequential {
        outcomes: PathBuf,
        #[arg(long)]
        n: u64,
        /// Defaults to ceil(2 sqrt(n)).
        #[arg(long)]
        d_star: Option<u64>,
    },
    /// Smallest sequential design meeting significance and power targets.
    Design {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        lift: f64,
        #[arg(long, value_enum, default_value = "margin")]
        prefactor: PrefactorArg,
    },
    /// Closed form versus Monte Carlo timing and accuracy benchmark.
    Bench {
        #[arg(long, default_value_t = 10)]
        cases: usize,
        #[arg(long, default_value_t = 10_000_000)]
        samples: u64,
        #[arg(long, env = "BETARATE_SEED", default_value_t = 0)]
        seed: u64,
    },
}

enum Rendered {
    Record(Record),
    Text { text: String, json: String },
}

fn comparison_record(r: &ComparisonResult) -> Record {
    Record::new()
        .with("method", r.method.as_str())
        .with("probability", r.probability)
        .with("terms_evaluated", r.terms_evaluated)
        .with("cancellation_flag", r.cancellation_flag)
}

fn read_samples(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let x: f64 = body.parse().map_err(|_| {
            Error::Domain(format!("{}:{}: not a number: {body:?}", path.display(), i + 1))
        })?;
        out.push(x);
    }
    Ok(out)
}

fn read_outcomes(path: &Path) -> Result<Vec<Outcome>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        match body.to_ascii_lowercase().as_str() {
            "" => {}
            "t" | "treatment" => out.push(Outcome::TreatmentSuccess),
            "c" | "control" => out.push(Outcome::ControlSuccess),
            _ => {
                return Err(Error::Domain(format!(
                    "{}:{}: expected T or C, got {body:?}",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(out)
}

fn run(command: Command) -> Result<Rendered> {
    let out = match command {
        Command::Compare(c) => {
            let a = posterior_from_counts(c.a_wins, c.a_losses)?;
            let b = posterior_from_counts(c.b_wins, c.b_losses)?;
            comparison_record(&pr_rate_greater(a, b)?)
        }
        Command::CompareScaled {
            counts: c,
            gamma,
            backend,
        } => {
            let a = posterior_from_counts(c.a_wins, c.a_losses)?;
            let b = posterior_from_counts(c.b_wins, c.b_losses)?;
            let backend = match backend {
                BackendArg::Series => FTermBackend::Series,
                BackendArg::Jacobi => FTermBackend::Jacobi,
                BackendArg::CrossChecked => FTermBackend::CrossChecked,
            };
            let r = pr_scaled_rate_greater_with(a, b, PayoutRatio::new(gamma)?, backend)?;
            comparison_record(&r).with("gamma", gamma)
        }
        Command::Mc {
            counts: c,
            gamma,
            samples,
            seed,
        } => {
            let a = posterior_from_counts(c.a_wins, c.a_losses)?;
            let b = posterior_from_counts(c.b_wins, c.b_losses)?;
            let r = mc_oracle(a, b, PayoutRatio::new(gamma)?, samples, seed)?;
            comparison_record(&r).with("gamma", gamma).with("seed", seed)
        }
        Command::Fisher {
            a_wins,
            a_losses,
            b_wins,
            b_losses,
            tail,
        } => {
            let t = ContingencyTable::new(a_wins, a_losses, b_wins, b_losses);
            let (tail, name) = match tail {
                TailArg::Less => (Tail::SingleLess, "single_less"),
                TailArg::Greater => (Tail::SingleGreater, "single_greater"),
                TailArg::TwoSided => (Tail::TwoSidedMinLikelihood, "two_sided_min_likelihood"),
            };
            Record::new()
                .with("method", "fisher_exact")
                .with("tail", name)
                .with("p_value", fisher_exact_p(&t, tail)?)
        }
        Command::Ks {
            samples_a,
            samples_b,
            alpha,
        } => {
            let a = read_samples(&samples_a)?;
            let b = read_samples(&samples_b)?;
            let r = ks_two_sample(&a, &b, alpha)?;
            Record::new()
                .with("method", "ks_two_sample")
                .with("d_stat", r.d_stat)
                .with("threshold", r.threshold)
                .with("reject", r.reject)
                .with("m_a", r.m_a)
                .with("m_b", r.m_b)
        }
        Command::Wilks { ell_h1, ell_h0, dof } => {
            let (d, p) = wilks_test(ell_h1, ell_h0, dof)?;
            Record::new()
                .with("method", "wilks")
                .with("d_stat", d)
                .with("p_value", p)
                .with("dof", dof as u64)
        }
        Command::Sequential { outcomes, n, d_star } => {
            let config = match d_star {
                Some(d) => SequentialConfig::new(n, d)?,
                None => SequentialConfig::from_budget(n)?,
            };
            let outcomes = read_outcomes(&outcomes)?;
            let mut state = SequentialState::new(config);
            let mut consumed = 0usize;
            for o in &outcomes {
                if state.status() != SequentialStatus::Running {
                    break;
                }
                state.record(*o)?;
                consumed += 1;
            }
            Record::new()
                .with("method", "sequential")
                .with("n_max", config.n_max())
                .with("d_star", config.d_star())
                .with("t_wins", state.t_wins())
                .with("c_wins", state.c_wins())
                .with("margin", state.margin())
                .with("status", state.status().as_str())
                .with("consumed", consumed)
                .with("unused", outcomes.len() - consumed)
        }
        Command::Design {
            alpha,
            beta,
            lift,
            prefactor,
        } => {
            let lift = Lift::new(lift)?;
            let prefactor = match prefactor {
                PrefactorArg::Margin => Prefactor::MarginOverStep,
                PrefactorArg::Literal => Prefactor::LiteralTotalWinsOverStep,
            };
            let c = design_sequential_with(alpha, beta, lift, prefactor)?;
            Record::new()
                .with("method", "design")
                .with("n_max", c.n_max())
                .with("d_star", c.d_star())
                .with("significance", significance_bound_with(c.n_max(), c.d_star(), prefactor)?)
                .with("power", power_bound_with(c.n_max(), c.d_star(), lift, prefactor)?)
        }
        Command::Bench {
            cases,
            samples,
            seed,
        } => {
            let report = run_benchmark(cases, samples, seed)?;
            return Ok(Rendered::Text {
                text: report.to_text(),
                json: report.to_json() + "\n",
            });
        }
    };
    Ok(Rendered::Record(out))
}

/// Runs the command line `argv` (program name first) and captures what it
/// would print. Exit codes: 0 success, 1 computation error, 2 usage error.
pub fn cli_dispatch<I, T>(argv: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CliOutcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                CliOutcome {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    let json = cli.json;
    match run(cli.command) {
        Ok(Rendered::Record(r)) => CliOutcome {
            code: 0,
            stdout: if json { r.to_json() } else { r.to_text() },
            stderr: String::new(),
        },
        Ok(Rendered::Text { text, json: doc }) => CliOutcome {
            code: 0,
            stdout: if json { doc } else { text },
            stderr: String::new(),
        },
        Err(e) => CliOutcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
