use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::invariants;
use crate::cohomology::{Cohomology, Hodge};
use crate::config::Config;
use crate::presentation::{GenericRank, LocalFreeness, UlrichPresentation};

pub const CERTIFICATE_FORMAT: &str = "ulrich-certificate/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertifyLevel {
    #[default]
    Basic,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub level: CertifyLevel,
    pub master_seed: u64,
    pub generic_rank_trials: usize,
    pub sampler_k_max: usize,
    pub sampler_trials_per_k: usize,
    pub acm_below: u32,
    pub acm_above: u32,
    /// Skip the degeneracy sampler (searches only need the criterion).
    pub sample_local_freeness: bool,
}

impl CertifyOptions {
    pub fn from_config(config: &Config, level: CertifyLevel) -> Self {
        CertifyOptions {
            level,
            master_seed: config.master_seed,
            generic_rank_trials: config.generic_rank_trials,
            sampler_k_max: config.sampler_k_max,
            sampler_trials_per_k: config.sampler_trials_per_k,
            acm_below: config.acm_below,
            acm_above: config.acm_above,
            sample_local_freeness: true,
        }
    }
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self::from_config(&Config::default(), CertifyLevel::Basic)
    }
}

/// `h^1(E(m))` at `m = -t d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vanishing {
    pub t: i64,
    pub m: i64,
    pub h1: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckItem {
    pub check: String,
    pub formula: String,
    pub expected: i64,
    pub computed: i64,
    pub passed: bool,
}

/// A failed [`CheckItem`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub check: String,
    pub expected: i64,
    pub computed: i64,
    pub formula: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timings {
    pub generic_rank_ms: f64,
    pub vanishings_ms: f64,
    pub profile_ms: Option<f64>,
    pub local_freeness_ms: Option<f64>,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UlrichCertificate {
    pub format: String,
    pub presentation_hash: String,
    pub p: u32,
    pub d: i64,
    pub r: i64,
    pub a: usize,
    pub b: usize,
    pub alpha: u32,
    pub level: CertifyLevel,
    pub master_seed: u64,
    pub options: CertifyOptions,
    pub generic_rank: GenericRank,
    pub vanishings: Vec<Vanishing>,
    /// Criterion verdict: injective and every listed `h^1` is zero.
    pub valid: bool,
    pub profile: Option<Vec<CheckItem>>,
    pub local_freeness: Option<LocalFreeness>,
    pub discrepancies: Vec<Discrepancy>,
    pub caveats: Vec<String>,
    pub timings: Timings,
}

impl UlrichCertificate {
    /// Valid, and at full level every profile item passed.
    pub fn passed(&self) -> bool {
        self.valid && self.discrepancies.is_empty()
    }

    /// Short label of the first reason the certificate is invalid.
    pub fn failure_reason(&self) -> Option<String> {
        if !self.generic_rank.is_injective() {
            return Some("generic-rank".into());
        }
        if let Some(v) = self.vanishings.iter().find(|v| v.h1 != 0) {
            return Some(format!("h1-t{}", v.t));
        }
        self.discrepancies.first().map(|d| format!("profile:{}", d.check))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

struct Items(Vec<CheckItem>);

impl Items {
    fn push(&mut self, check: String, formula: &str, expected: i64, computed: usize) {
        let computed = computed as i64;
        self.0.push(CheckItem { check, formula: formula.into(), expected, computed, passed: expected == computed });
    }

    fn hodge(&mut self, label: &str, formula: &str, expected: [i64; 3], h: Hodge) {
        for (i, e) in expected.iter().enumerate() {
            self.push(format!("h{i}({label})"), formula, *e, h.get(i));
        }
    }
}

/// Runs the finite vanishing criterion and, at full level, the profile
/// checks. Failures are recorded in the certificate, never returned as errors.
pub fn certify<R: Rng + ?Sized>(pres: &UlrichPresentation, opts: &CertifyOptions, rng: &mut R) -> UlrichCertificate {
    let start = Instant::now();
    let s = pres.shape();
    let d = pres.d();
    let r = pres.r();
    let coh = Cohomology::new(pres);

    let t0 = Instant::now();
    let generic_rank = pres.generic_rank_check(opts.generic_rank_trials.max(1), rng);
    let generic_rank_ms = ms(t0);

    let t0 = Instant::now();
    let ts: Vec<i64> = (2..=i64::from(s.alpha)).collect();
    let vanishings: Vec<Vanishing> = ts.par_iter().map(|&t| Vanishing { t, m: -t * d, h1: coh.h1(-t * d) }).collect();
    let vanishings_ms = ms(t0);
    let valid = generic_rank.is_injective() && vanishings.iter().all(|v| v.h1 == 0);

    let mut profile_ms = None;
    let profile = (opts.level == CertifyLevel::Full).then(|| {
        let t0 = Instant::now();
        let items = full_profile(&coh, opts);
        profile_ms = Some(ms(t0));
        items
    });

    let mut local_freeness_ms = None;
    let local_freeness = opts.sample_local_freeness.then(|| {
        let t0 = Instant::now();
        let v = pres.local_freeness_sample(opts.sampler_k_max, opts.sampler_trials_per_k, rng);
        local_freeness_ms = Some(ms(t0));
        v
    });

    let discrepancies = profile
        .iter()
        .flatten()
        .filter(|i| !i.passed)
        .map(|i| Discrepancy {
            check: i.check.clone(),
            expected: i.expected,
            computed: i.computed,
            formula: i.formula.clone(),
        })
        .collect();

    let mut caveats = vec![
        format!("computed over F_{}; the statement over a field of characteristic 0 needs a separate lifting argument", pres.field().modulus()),
    ];
    if local_freeness.is_some() {
        caveats.push("local freeness is sampled, not certified: finding no degenerate point is not a proof".into());
    } else {
        caveats.push("local freeness was not sampled".into());
    }
    if opts.level == CertifyLevel::Full {
        caveats.push(format!(
            "the ACM check covers t in [-alpha-{}, {}] only",
            opts.acm_below, opts.acm_above
        ));
    }

    UlrichCertificate {
        format: CERTIFICATE_FORMAT.into(),
        presentation_hash: pres.hash(),
        p: pres.field().modulus(),
        d,
        r,
        a: s.a,
        b: s.b,
        alpha: s.alpha,
        level: opts.level,
        master_seed: opts.master_seed,
        options: opts.clone(),
        generic_rank,
        vanishings,
        valid,
        profile,
        local_freeness,
        discrepancies,
        caveats,
        timings: Timings { generic_rank_ms, vanishings_ms, profile_ms, local_freeness_ms, total_ms: ms(start) },
    }
}

fn full_profile(coh: &Cohomology<'_>, opts: &CertifyOptions) -> Vec<CheckItem> {
    let pres = coh.presentation();
    let (d, r) = (pres.d(), pres.r());
    let (a, b) = (pres.a() as i64, pres.b() as i64);
    let alpha = i64::from(pres.shape().alpha);
    let inv = invariants(d, r).expect("presentation shape is valid");
    let deg = d * d * r;
    let mut items = Items(Vec::new());

    // every twist the checks below touch, computed in parallel up front
    let acm: Vec<i64> = (-alpha - i64::from(opts.acm_below)..=i64::from(opts.acm_above)).collect();
    let ladder = [-d, 1 - d, 2 - d];
    let sections = [0, 1, 2];
    let bundle_twists: Vec<i64> = ladder.iter().copied().chain(sections.iter().map(|t| t * d)).collect();
    let bundles: Vec<Hodge> = bundle_twists.par_iter().map(|&m| coh.bundle(m)).collect();
    let h1s: Vec<usize> = acm.par_iter().map(|&t| coh.h1(t * d)).collect();
    let shift = 3 * d - 3;
    let dual_twists = [shift, shift - d, shift - 2 * d, 4 * d - 3];
    let duals: Vec<Hodge> = dual_twists.par_iter().map(|&m| coh.dual(m)).collect();
    let (omega, end) = rayon::join(|| coh.omega_table(), || coh.end());

    let ladder_formula = "vanishing ladder of an Ulrich bundle";
    items.hodge(&format!("E({})", -d), ladder_formula, [0, 0, 0], bundles[0]);
    items.hodge(&format!("E({})", 1 - d), ladder_formula, [b, 0, 0], bundles[1]);
    items.push(format!("h0(E({}))", 2 - d), ladder_formula, r * (d + 2), bundles[2].h0);
    items.push(format!("h1(E({}))", 2 - d), ladder_formula, 0, bundles[2].h1);

    for (t, h1) in acm.iter().zip(&h1s) {
        items.push(format!("h1(E({}))", t * d), "ACM: h1(E(td)) = 0", 0, *h1);
    }
    for (i, t) in sections.iter().enumerate() {
        items.push(format!("h0(E({}))", t * d), "h0(E(td)) = d^2 r C(t+2, 2)", deg * (t + 1) * (t + 2) / 2, bundles[3 + i].h0);
    }
    // h2(E(m)) = h0(E^v(-m-3)) by Serre duality
    for (t, dual) in [(-3i64, &duals[0]), (-4, &duals[3])] {
        items.push(
            format!("h2(E({}))", t * d),
            "h2(E(td)) = d^2 r (t+1)(t+2)/2 via h0(E^v(-td-3))",
            deg * (t + 1) * (t + 2) / 2,
            dual.h0,
        );
    }
    let expected_omega = [[0, a, b], [0, 0, 0], [0, 0, 0]];
    for (q, (want, got)) in expected_omega.iter().zip(&omega.cells).enumerate() {
        for (p, (&e, &c)) in want.iter().zip(got).enumerate() {
            items.push(format!("omega[q={q}][p={}]", p as i64 - 2), "Beilinson table of E(1-d)", e, c);
        }
    }
    let end_formula = "simple Ulrich: h(End E) = (1, (4 + r^2(d^2-5))/4, 0)";
    items.hodge("End E", end_formula, [1, inv.h1_end_simple, 0], end);

    let dual_formula = "Ulrich profile of E^v(3d-3)";
    items.hodge(&format!("E^v({shift})"), dual_formula, [deg, 0, 0], duals[0]);
    items.hodge(&format!("E^v({})", shift - d), dual_formula, [0, 0, 0], duals[1]);
    items.hodge(&format!("E^v({})", shift - 2 * d), dual_formula, [0, 0, 0], duals[2]);
    items.0
}
