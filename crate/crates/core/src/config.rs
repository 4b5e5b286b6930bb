//! Effective run configuration, embedded in every report.

use serde::{Deserialize, Serialize};

use crate::field::DEFAULT_PRIME;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub p: u32,
    pub master_seed: u64,
    pub workers: usize,
    pub format: OutputFormat,
    /// Full certification checks `h^1(E(td)) = 0` for
    /// `t in [-alpha - acm_below, acm_above]`.
    pub acm_below: u32,
    pub acm_above: u32,
    pub generic_rank_trials: usize,
    pub sampler_k_max: usize,
    pub sampler_trials_per_k: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            p: DEFAULT_PRIME,
            master_seed: 0,
            workers: 1,
            format: OutputFormat::Text,
            acm_below: 3,
            acm_above: 3,
            generic_rank_trials: 10,
            sampler_k_max: 2,
            sampler_trials_per_k: 20,
        }
    }
}
