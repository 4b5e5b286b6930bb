//! Seeded randomized search for presentations passing the vanishing
//! criterion, and sweeps over lists of degrees.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Config;
use crate::field::{FieldError, PrimeField};
use crate::presentation::{shape, PresentationError, UlrichPresentation};
use crate::seed::derive_rng;
use crate::ulrich::{certify, CertifyLevel, CertifyOptions, Vanishing};

pub const SWEEP_FORMAT: &str = "ulrich-sweep/1";

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Shape(#[from] PresentationError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("trials must be at least 1")]
    NoTrials,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub config: Config,
    pub trials: u64,
    /// Record wall-clock times in reports (they are then not reproducible).
    pub timings: bool,
}

impl SearchOptions {
    pub fn new(config: Config, trials: u64) -> Self {
        SearchOptions { config, trials, timings: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub d: i64,
    pub r: i64,
    pub p: u32,
    pub master_seed: u64,
    pub a: usize,
    pub b: usize,
    pub alpha: u32,
    pub trials_requested: u64,
    /// Trials up to and including the first success.
    pub trials_attempted: u64,
    pub success_trial: Option<u64>,
    pub presentation_hash: Option<String>,
    pub presentation_file: Option<String>,
    pub h1_checks: Vec<Vanishing>,
    pub failures: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trial_ms: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub report: SearchReport,
    pub presentation: Option<UlrichPresentation>,
}

struct Trial {
    index: u64,
    presentation: UlrichPresentation,
    vanishings: Vec<Vanishing>,
    failure: Option<String>,
    ms: f64,
}

/// The random presentation and basic certificate of trial `index`; a pure
/// function of `(master_seed, d, r, p, index)`.
fn run_trial(field: PrimeField, d: i64, r: i64, opts: &CertifyOptions, index: u64) -> Trial {
    let start = Instant::now();
    let mut rng = derive_rng(opts.master_seed, &format!("search/d={d}/r={r}"), index);
    let presentation = UlrichPresentation::random(field, d, r, &mut rng).expect("shape validated by caller");
    let cert = certify(&presentation, opts, &mut rng);
    Trial {
        index,
        failure: cert.failure_reason(),
        vanishings: cert.vanishings,
        presentation,
        ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// File name used for the saved success of a search.
pub fn presentation_file_name(d: i64, r: i64, seed: u64) -> String {
    format!("d{d}_r{r}_seed{seed}.json")
}

/// Runs trials `1..=trials` in chunks of `workers` and stops at the first
/// success. Results do not depend on the worker count.
pub fn search(d: i64, r: i64, opts: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    let s = shape(d, r)?;
    if opts.trials == 0 {
        return Err(SearchError::NoTrials);
    }
    let field = PrimeField::new(opts.config.p)?;
    let start = Instant::now();
    let cert_opts = CertifyOptions {
        sample_local_freeness: false,
        ..CertifyOptions::from_config(&opts.config, CertifyLevel::Basic)
    };
    let chunk = opts.config.workers.max(1) as u64;
    let mut done: Vec<Trial> = Vec::new();
    let mut next = 1;
    while next <= opts.trials {
        let end = (next + chunk - 1).min(opts.trials);
        let mut batch: Vec<Trial> =
            (next..=end).into_par_iter().map(|i| run_trial(field, d, r, &cert_opts, i)).collect();
        batch.sort_by_key(|t| t.index);
        let hit = batch.iter().position(|t| t.failure.is_none());
        if let Some(pos) = hit {
            batch.truncate(pos + 1);
        }
        done.extend(batch);
        if hit.is_some() {
            break;
        }
        next = end + 1;
    }

    let mut failures = BTreeMap::new();
    for t in done.iter().filter_map(|t| t.failure.as_ref()) {
        *failures.entry(t.clone()).or_insert(0) += 1;
    }
    let success = done.last().filter(|t| t.failure.is_none());
    let report = SearchReport {
        d,
        r,
        p: field.modulus(),
        master_seed: opts.config.master_seed,
        a: s.a,
        b: s.b,
        alpha: s.alpha,
        trials_requested: opts.trials,
        trials_attempted: done.len() as u64,
        success_trial: success.map(|t| t.index),
        presentation_hash: success.map(|t| t.presentation.hash()),
        presentation_file: success.map(|_| presentation_file_name(d, r, opts.config.master_seed)),
        h1_checks: success.map(|t| t.vanishings.clone()).unwrap_or_default(),
        failures,
        ms: opts.timings.then(|| start.elapsed().as_secs_f64() * 1e3),
        trial_ms: opts.timings.then(|| done.iter().map(|t| t.ms).collect()),
    };
    Ok(SearchOutcome { report, presentation: success.map(|t| t.presentation.clone()) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub format: String,
    pub p: u32,
    pub r: i64,
    pub master_seed: u64,
    pub trials_per_d: u64,
    pub config: Config,
    /// False when the time budget ran out before every degree was tried.
    pub complete: bool,
    pub skipped: Vec<i64>,
    pub results: Vec<SearchReport>,
}

impl SweepReport {
    pub fn successes(&self) -> usize {
        self.results.iter().filter(|r| r.success_trial.is_some()).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("sweep report serializes");
        s.push('\n');
        s
    }

    /// Fixed-width table with the same numbers as the JSON report.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "sweep r={} p={} seed={} trials/d={}", self.r, self.p, self.master_seed, self.trials_per_d);
        let _ = writeln!(out, "{:>4} {:>5} {:>5} {:>6} {:>8} {:>8}  h1 checks", "d", "a", "b", "alpha", "success", "tried");
        for rep in &self.results {
            let checks: Vec<String> = rep.h1_checks.iter().map(|v| format!("h1(E({}))={}", v.m, v.h1)).collect();
            let success = rep.success_trial.map_or("-".to_string(), |t| t.to_string());
            let _ = writeln!(
                out,
                "{:>4} {:>5} {:>5} {:>6} {:>8} {:>8}  {}",
                rep.d,
                rep.a,
                rep.b,
                rep.alpha,
                success,
                rep.trials_attempted,
                checks.join(" ")
            );
            if !rep.failures.is_empty() {
                let hist: Vec<String> = rep.failures.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                let _ = writeln!(out, "     failures {}", hist.join(" "));
            }
        }
        let _ = writeln!(out, "{}/{} succeeded{}", self.successes(), self.results.len(), if self.complete { "" } else { " (partial: time budget exhausted)" });
        out
    }
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub search: SearchOptions,
    pub time_budget: Option<Duration>,
    /// Successful presentations are saved here.
    pub out_dir: Option<PathBuf>,
}

/// One search per degree, in the given order. Degrees not started before
/// the time budget runs out are listed in `skipped`.
pub fn sweep(d_list: &[i64], r: i64, opts: &SweepOptions) -> Result<SweepReport, SearchError> {
    for &d in d_list {
        shape(d, r)?;
    }
    let field = PrimeField::new(opts.search.config.p)?;
    let start = Instant::now();
    let mut results = Vec::new();
    let mut skipped = Vec::new();
    for &d in d_list {
        if opts.time_budget.is_some_and(|b| start.elapsed() > b) {
            skipped.push(d);
            continue;
        }
        let outcome = search(d, r, &opts.search)?;
        if let (Some(dir), Some(p)) = (&opts.out_dir, &outcome.presentation) {
            save_into(dir, outcome.report.presentation_file.as_deref().expect("file named on success"), p)?;
        }
        results.push(outcome.report);
    }
    Ok(SweepReport {
        format: SWEEP_FORMAT.into(),
        p: field.modulus(),
        r,
        master_seed: opts.search.config.master_seed,
        trials_per_d: opts.search.trials,
        config: opts.search.config.clone(),
        complete: skipped.is_empty(),
        skipped,
        results,
    })
}

fn save_into(dir: &Path, name: &str, p: &UlrichPresentation) -> Result<(), PresentationError> {
    std::fs::create_dir_all(dir).map_err(|source| PresentationError::Io { path: dir.display().to_string(), source })?;
    p.save(&dir.join(name))
}
