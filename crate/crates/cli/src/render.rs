//! Text output. Every number printed here also appears in the JSON output.

use std::fmt::Write;
use std::path::Path;

use ulrich_core::cohomology::CohomologyProfile;
use ulrich_core::presentation::{GenericRank, LocalFreeness};
use ulrich_core::{OmegaTable, SearchReport, UlrichCertificate, UlrichInvariants, UlrichPresentation};

pub fn numerology(inv: &UlrichInvariants, hilbert: &[(i64, i64)], veronese: (i64, i64)) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "d={} r={}", inv.d, inv.r);
    let _ = writeln!(out, "a={} b={} alpha={}", inv.a, inv.b, inv.alpha);
    let _ = writeln!(out, "c1={} c2={}", inv.c1, inv.c2);
    let _ = writeln!(out, "chi_end={} h1_end_simple={}", inv.chi_end, inv.h1_end_simple);
    let [c0, c1, c2] = inv.hilbert.0;
    let _ = writeln!(out, "2P(t)={c0}+{c1}t+{c2}t^2");
    for (t, v) in hilbert {
        let _ = writeln!(out, "  P({t})={v}");
    }
    let _ = writeln!(out, "veronese degree={} ambient_dim={}", veronese.0, veronese.1);
    out
}

pub fn certificate(cert: &UlrichCertificate, path: &Path) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "presentation {} d={} r={} a={} b={} p={}", cert.presentation_hash, cert.d, cert.r, cert.a, cert.b, cert.p);
    match &cert.generic_rank {
        GenericRank::Injective { witness, trials_used } => {
            let _ = writeln!(out, "generic rank: injective at {witness:?} (trial {trials_used})");
        }
        GenericRank::Undetermined { trials } => {
            let _ = writeln!(out, "generic rank: undetermined after {trials} points");
        }
    }
    for v in &cert.vanishings {
        let _ = writeln!(out, "h1(E({}))={}", v.m, v.h1);
    }
    if let Some(items) = &cert.profile {
        let passed = items.iter().filter(|i| i.passed).count();
        let _ = writeln!(out, "profile: {passed}/{} items", items.len());
    }
    for d in &cert.discrepancies {
        let _ = writeln!(out, "  MISMATCH {}: expected {} computed {} ({})", d.check, d.expected, d.computed, d.formula);
    }
    match &cert.local_freeness {
        Some(LocalFreeness::Falsified { k, rank, .. }) => {
            let _ = writeln!(out, "local freeness: rank {rank} point over F_p^{k}");
        }
        Some(LocalFreeness::NoDegeneracyFound { k_max, trials_per_k, .. }) => {
            let _ = writeln!(out, "local freeness: no degeneracy in {trials_per_k} points per extension degree up to {k_max}");
        }
        None => {}
    }
    for c in &cert.caveats {
        let _ = writeln!(out, "note: {c}");
    }
    match cert.failure_reason() {
        None => {
            let _ = writeln!(out, "VALID");
        }
        Some(reason) => {
            let _ = writeln!(out, "INVALID ({reason})");
        }
    }
    let _ = writeln!(out, "certificate written to {}", path.display());
    out
}

pub fn search(rep: &SearchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "search d={} r={} p={} seed={}", rep.d, rep.r, rep.p, rep.master_seed);
    let _ = writeln!(out, "a={} b={} alpha={}", rep.a, rep.b, rep.alpha);
    match (rep.success_trial, &rep.presentation_file) {
        (Some(t), Some(file)) => {
            let _ = writeln!(out, "success at trial {t}/{}: {file}", rep.trials_requested);
        }
        _ => {
            let _ = writeln!(out, "no success in {} trials", rep.trials_attempted);
        }
    }
    for v in &rep.h1_checks {
        let _ = writeln!(out, "h1(E({}))={}", v.m, v.h1);
    }
    for (reason, n) in &rep.failures {
        let _ = writeln!(out, "failed {reason}: {n}");
    }
    if let Some(ms) = rep.ms {
        let _ = writeln!(out, "{ms:.1} ms");
    }
    out
}

pub fn table(pres: &UlrichPresentation, profile: &CohomologyProfile, omega: &OmegaTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "d={} r={} presentation {}", pres.d(), pres.r(), profile.presentation_hash);
    let _ = writeln!(out, "{:>6} {:>4} {:>10} {:>10} {:>10} {:>10}", "m", "t", "h0", "h1", "h2", "chi");
    for row in &profile.rows {
        // t is shown on rows that are twists by a multiple of the polarization
        let t = if row.m % pres.d() == 0 { (row.m / pres.d()).to_string() } else { String::new() };
        let _ = writeln!(out, "{:>6} {t:>4} {:>10} {:>10} {:>10} {:>10}", row.m, row.h0, row.h1, row.h2, row.chi);
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "h^q(E({}) (x) Omega^-p(-p))", 1 - pres.d());
    let _ = writeln!(out, "{:>6} {:>8} {:>8} {:>8}", "", "p=-2", "p=-1", "p=0");
    for q in (0..3).rev() {
        let [x, y, z] = omega.row(q);
        let _ = writeln!(out, "{:>6} {x:>8} {y:>8} {z:>8}", format!("q={q}"));
    }
    out
}
