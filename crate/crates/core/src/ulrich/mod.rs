//! Numerical invariants of Ulrich bundles on the Veronese surfaces `(P^2, dH)`
//! and the integer identities and inequalities they satisfy.
//!
//! Everything is exact integer arithmetic. Quantities with denominators 2 or
//! 4 are either proven integral before dividing or carried scaled.

mod certify;

pub use certify::{
    certify, CertifyLevel, CertifyOptions, CheckItem, Discrepancy, Timings, UlrichCertificate, Vanishing,
    CERTIFICATE_FORMAT,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::resolution_chi;
use crate::presentation::{shape, PresentationError};

#[derive(Debug, Error)]
pub enum NumerologyError {
    #[error(transparent)]
    Shape(#[from] PresentationError),
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Coefficients `[c0, c1, c2]` of `2 * P(t) = c0 + c1 t + c2 t^2` where
/// `P(t) = d^2 r (t + 1)(t + 2) / 2` is the Hilbert polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubledPolynomial(pub [i64; 3]);

impl DoubledPolynomial {
    pub fn eval(&self, t: i64) -> i64 {
        let [c0, c1, c2] = self.0;
        (c0 + c1 * t + c2 * t * t) / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UlrichInvariants {
    pub d: i64,
    pub r: i64,
    pub a: usize,
    pub b: usize,
    pub alpha: u32,
    pub c1: i64,
    /// From matching the constant term of Riemann-Roch against the Hilbert
    /// polynomial: `c2 = c1 (c1 + 3) / 2 + r - d^2 r`.
    pub c2: i64,
    pub hilbert: DoubledPolynomial,
    pub chi_end: i64,
    pub h1_end_simple: i64,
    /// Coefficient of `H` in the canonical class of the plane.
    pub canonical: i64,
}

pub fn invariants(d: i64, r: i64) -> Result<UlrichInvariants, NumerologyError> {
    let s = shape(d, r)?;
    let deg = d * d * r;
    let c1 = 3 * r * (d - 1) / 2;
    let c2 = c1 * (c1 + 3) / 2 + r - deg;
    let disc = d * d - 5;
    Ok(UlrichInvariants {
        d,
        r,
        a: s.a,
        b: s.b,
        alpha: s.alpha,
        c1,
        c2,
        hilbert: DoubledPolynomial([2 * deg, 3 * deg, deg]),
        chi_end: -(r * r * disc) / 4,
        h1_end_simple: (4 + r * r * disc) / 4,
        canonical: -3,
    })
}

/// `chi(E(td))` computed from the resolution and from the Hilbert
/// polynomial; errors if they differ.
pub fn hilbert_check(d: i64, r: i64, t: i64) -> Result<i64, NumerologyError> {
    let inv = invariants(d, r)?;
    let from_resolution = resolution_chi(inv.a, inv.b, d, t * d);
    let from_hilbert = d * d * r * (t + 1) * (t + 2) / 2;
    if from_resolution != from_hilbert || inv.hilbert.eval(t) != from_hilbert {
        return Err(NumerologyError::Inconsistent(format!(
            "chi(E({t}d)) at d={d}, r={r}: resolution {from_resolution}, Hilbert polynomial {from_hilbert}"
        )));
    }
    Ok(from_hilbert)
}

/// Integers `t0` with `3d^2 = d(2 t0 + 3)` and `2d^2 = t0^2 + 3 t0 + 2`,
/// the conditions for `O(t0)` to be Ulrich.
pub fn line_bundle_solutions(d: i64) -> Vec<i64> {
    if d < 1 || (3 * d - 3) % 2 != 0 {
        return Vec::new();
    }
    let t0 = (3 * d - 3) / 2;
    if 2 * d * d == t0 * t0 + 3 * t0 + 2 {
        vec![t0]
    } else {
        Vec::new()
    }
}

/// `chi(E1^v (x) E2)` by Riemann-Roch from the ranks and Chern classes of two
/// Ulrich bundles of ranks `r1`, `r2` on `(P^2, dH)`.
pub fn euler_pairing(d: i64, r1: i64, r2: i64) -> Result<i64, NumerologyError> {
    let e1 = invariants(d, r1)?;
    let e2 = invariants(d, r2)?;
    let (r1, r2) = (i128::from(r1), i128::from(r2));
    let (c11, c21) = (i128::from(e1.c1), i128::from(e1.c2));
    let (c12, c22) = (i128::from(e2.c1), i128::from(e2.c2));
    let rank = r1 * r2;
    let c1 = r1 * c12 - r2 * c11;
    // 2 ch_2 of the product: ch_2(E1^v) = ch_2(E1), ch_1(E1^v) = -c1(E1)
    let twice_ch2 = r2 * (c11 * c11 - 2 * c21) + r1 * (c12 * c12 - 2 * c22) - 2 * c11 * c12;
    // Todd class of the plane is 1 + (3/2) H + H^2
    let twice_chi = twice_ch2 + 3 * c1 + 2 * rank;
    if twice_chi % 2 != 0 {
        return Err(NumerologyError::Inconsistent(format!("odd 2 chi = {twice_chi}")));
    }
    i64::try_from(twice_chi / 2).map_err(|_| NumerologyError::OutOfRange("pairing overflows i64".into()))
}

/// Which dimension count to compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundCase {
    /// Rank `2k`, extensions of ranks 2 and `2k - 2`.
    Even,
    /// Rank `2k`, extensions of ranks 2 and `2k - 2` and of ranks 3 and `2k - 3`.
    OddEven,
    /// Rank `2k + 1`, extensions of ranks 3 and `2k - 2`.
    OddOdd,
}

/// Strict inequality: extensions of two stable bundles form a family of
/// smaller dimension than the simple bundles of the same rank. Both sides
/// are scaled by 4.
///
/// The simple-bundle dimension is `1 - chi_end = (4 + r^2 (d^2 - 5)) / 4`,
/// which is `k^2 (d^2 - 5) + 1` when `r = 2k`.
pub fn semistable_bound_check(d: i64, k: i64, case: BoundCase) -> Result<bool, NumerologyError> {
    if d < 3 || k < 2 {
        return Err(NumerologyError::OutOfRange(format!("need d >= 3 and k >= 2, got d={d}, k={k}")));
    }
    let disc = i128::from(d) * i128::from(d) - 5;
    let k = i128::from(k);
    let simple = |r: i128| 4 + r * r * disc;
    // moduli of rank 2 and rank r - 2 plus extension classes minus scaling
    let via_rank_two = |r: i128| {
        let rest = r - 2;
        4 * (disc + 1) + (4 + rest * rest * disc) + 2 * rest * disc - 4
    };
    // moduli of rank 3 and rank r - 3 plus extension classes minus scaling
    let via_rank_three = |r: i128| {
        let rest = r - 3;
        (4 + 9 * disc) + (4 + rest * rest * disc) + 3 * rest * disc - 4
    };
    Ok(match case {
        BoundCase::Even => via_rank_two(2 * k) < simple(2 * k),
        BoundCase::OddEven => via_rank_two(2 * k) < simple(2 * k) && via_rank_three(2 * k) < simple(2 * k),
        BoundCase::OddOdd => via_rank_three(2 * k + 1) < simple(2 * k + 1),
    })
}

/// `(degree, ambient dimension)` of the `d`-th Veronese surface.
pub fn veronese_facts(d: i64) -> (i64, i64) {
    (d * d, (d + 2) * (d + 1) / 2 - 1)
}

#[cfg(test)]
mod tests;
