//! Arithmetic in prime fields `F_p` and small extensions `F_{p^k}`.
//!
//! Every container in this crate carries its [`PrimeField`]; elements are bare
//! residues ([`FieldElement`]) and are only meaningful next to their field.

mod extension;

pub use extension::{ExtElement, ExtensionField, MAX_EXTENSION_DEGREE};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The modulus used throughout unless a run overrides it.
pub const DEFAULT_PRIME: u32 = 32003;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus {0} does not fit below 2^31")]
    TooLarge(u64),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),
    #[error("moduli disagree: {0} vs {1}")]
    ModulusMismatch(u32, u32),
}

/// A residue in `[0, p)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The prime field `F_p` for an odd prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl TryFrom<u32> for PrimeField {
    type Error = FieldError;

    fn try_from(p: u32) -> Result<Self, FieldError> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut q = 3u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        let wide = u64::from(p);
        if wide >= 1 << 31 {
            return Err(FieldError::TooLarge(wide));
        }
        if p == 2 || !is_prime(wide) {
            return Err(FieldError::NotOddPrime(wide));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Fails unless `other` is the same field.
    pub fn check_same(&self, other: &PrimeField) -> Result<(), FieldError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(FieldError::ModulusMismatch(self.p, other.p))
        }
    }

    #[inline]
    pub fn elem(&self, v: u64) -> FieldElement {
        FieldElement((v % u64::from(self.p)) as u32)
    }

    #[inline]
    pub fn from_i64(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(i64::from(self.p)) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a.0 + b.0;
        FieldElement(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 >= b.0 {
            FieldElement(a.0 - b.0)
        } else {
            FieldElement(a.0 + self.p - b.0)
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 {
            a
        } else {
            FieldElement(self.p - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(((u64::from(a.0) * u64::from(b.0)) % u64::from(self.p)) as u32)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inverse(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        if x.0 == 0 {
            return Err(FieldError::DivisionByZero(self.p));
        }
        let (mut r0, mut r1) = (i64::from(self.p), i64::from(x.0));
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.from_i64(t0))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inverse(b)?))
    }

    pub fn pow(&self, mut base: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Uniform draw from `[0, p)`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.random_range(0..self.p))
    }

    /// How many products of two reduced residues can be added onto a reduced
    /// residue before a `u64` accumulator may overflow.
    pub fn lazy_budget(&self) -> usize {
        let m = u64::from(self.p - 1);
        let budget = (u64::MAX - m) / (m * m);
        budget.min(usize::MAX as u64) as usize
    }

    /// Dot product of two residue slices with one reduction per
    /// [`lazy_budget`](Self::lazy_budget)-sized block.
    pub fn dot(&self, a: &[u32], b: &[u32]) -> FieldElement {
        assert_eq!(a.len(), b.len(), "dot product of unequal lengths");
        let p = u64::from(self.p);
        let block = self.lazy_budget().max(1);
        let mut acc = 0u64;
        for (ca, cb) in a.chunks(block).zip(b.chunks(block)) {
            for (&x, &y) in ca.iter().zip(cb) {
                acc = acc.wrapping_add(u64::from(x) * u64::from(y));
            }
            acc %= p;
        }
        FieldElement(acc as u32)
    }
}

/// The operations the generic small-matrix routines need from a finite field.
pub trait FiniteField {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Embeds a residue of the prime subfield.
    fn embed(&self, c: FieldElement) -> Self::Elem;
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
}

impl FiniteField for PrimeField {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }
    fn one(&self) -> FieldElement {
        FieldElement::ONE
    }
    fn is_zero(&self, x: &FieldElement) -> bool {
        x.is_zero()
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        PrimeField::add(self, *a, *b)
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        PrimeField::sub(self, *a, *b)
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        PrimeField::mul(self, *a, *b)
    }
    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        self.inverse(*a).ok()
    }
    fn embed(&self, c: FieldElement) -> FieldElement {
        c
    }
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.random(rng)
    }
}

/// Rank of a small matrix over any [`FiniteField`], by plain Gaussian
/// elimination on an owned copy.
pub fn small_rank<F: FiniteField>(field: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&i| !field.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(&rows[rank][col]).expect("nonzero pivot is invertible");
        let pivot_row: Vec<F::Elem> = rows[rank].iter().map(|v| field.mul(v, &inv)).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            if field.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = field.sub(x, &field.mul(&factor, y));
            }
        }
        rank += 1;
    }
    rank
}
