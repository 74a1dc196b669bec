//! Seeded property suites behind `vecdual verify`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub mod gen;
mod geometry;
mod programs;

pub const SUITES: [&str; 9] = [
    "decomposition",
    "wsum",
    "psi",
    "basic-lemmas",
    "representation",
    "farkas",
    "weak-duality",
    "strong-duality",
    "scalar-regression",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// `None` runs the suite's default trial count.
    pub trials: Option<usize>,
    pub jobs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            trials: None,
            jobs: 1,
        }
    }
}

/// Tallies from one trial, or from a whole suite once merged.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Tally {
    pub checks: u64,
    pub failures: Vec<String>,
    pub stats: BTreeMap<String, u64>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn bump(&mut self, key: &str, by: u64) {
        *self.stats.entry(key.to_string()).or_default() += by;
    }

    fn absorb(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
        for (k, v) in other.stats {
            *self.stats.entry(k).or_default() += v;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub format: u32,
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub checks: u64,
    pub failed: usize,
    pub stats: BTreeMap<String, u64>,
    /// First few failure descriptions; each is a reproducer.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

/// Independent stream per trial, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(trial as u64 + 1);
    r
}

pub(crate) fn run_trials<F>(cfg: &SuiteConfig, trials: usize, f: F) -> Result<Tally>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Result<Tally> + Sync,
{
    let tallies: Vec<Tally> = (0..trials)
        .into_par_iter()
        .map(|t| f(t, &mut trial_rng(cfg.seed, t)))
        .collect::<Result<_>>()?;
    let mut total = Tally::default();
    for t in tallies {
        total.absorb(t);
    }
    Ok(total)
}

fn default_trials(name: &str) -> usize {
    match name {
        "decomposition" | "wsum" => 200,
        "psi" | "basic-lemmas" => 100,
        "farkas" => 100,
        "weak-duality" => 50,
        "scalar-regression" => 20,
        _ => 1,
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    if !SUITES.contains(&name) {
        return Err(Error::Malformed(format!(
            "unknown suite {name:?}; expected one of {}",
            SUITES.join(", ")
        )));
    }
    let trials = cfg.trials.unwrap_or_else(|| default_trials(name));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    let tally = pool.install(|| match name {
        "decomposition" => geometry::decomposition(cfg, trials),
        "wsum" => geometry::wsum(cfg, trials),
        "psi" => geometry::psi(cfg, trials),
        "basic-lemmas" => geometry::basic_lemmas(cfg, trials),
        "representation" => programs::representation(cfg),
        "farkas" => programs::farkas(cfg, trials),
        "weak-duality" => programs::weak_duality(cfg, trials),
        "strong-duality" => programs::strong_duality(cfg),
        "scalar-regression" => programs::scalar_regression(cfg, trials),
        _ => unreachable!("checked above"),
    })?;
    let failed = tally.failures.len();
    let mut failures = tally.failures;
    failures.truncate(20);
    Ok(SuiteReport {
        format: 1,
        suite: name.to_string(),
        seed: cfg.seed,
        trials,
        checks: tally.checks,
        failed,
        stats: tally.stats,
        failures,
    })
}
