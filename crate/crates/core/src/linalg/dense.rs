//! Rank-only dense elimination.
//!
//! Rows are eliminated panel by panel: a panel of up to [`PANEL`] pivot rows
//! is formed, then applied to every remaining row while that row sits in a
//! `u64` scratch buffer. Products are accumulated unreduced and the scratch
//! row is reduced only when [`PrimeField::lazy_budget`] would be exceeded,
//! which for 15-bit moduli means once per panel.

use crate::field::PrimeField;

const PANEL: usize = 64;

/// `dst[i] += f * src[i]` without reduction.
#[inline(always)]
fn axpy_generic(dst: &mut [u64], src: &[u32], f: u64) {
    for (t, &v) in dst.iter_mut().zip(src) {
        *t = t.wrapping_add(f.wrapping_mul(u64::from(v)));
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn axpy_avx2(dst: &mut [u64], src: &[u32], f: u64) {
    axpy_generic(dst, src, f)
}

#[inline]
pub(crate) fn axpy(dst: &mut [u64], src: &[u32], f: u64) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the feature was detected at runtime.
            unsafe { axpy_avx2(dst, src, f) };
            return;
        }
    }
    axpy_generic(dst, src, f)
}

struct Pivot {
    col: usize,
    /// Normalized row restricted to `col..`, leading entry 1.
    tail: Vec<u32>,
}

struct Scratch {
    buf: Vec<u64>,
    p: u64,
    budget: usize,
}

impl Scratch {
    fn load(&mut self, row: &[u32]) {
        for (t, &v) in self.buf.iter_mut().zip(row) {
            *t = u64::from(v);
        }
    }

    fn reduce(&mut self) {
        let p = self.p;
        for t in self.buf.iter_mut() {
            *t %= p;
        }
    }

    fn store(&mut self, row: &mut [u32]) {
        let p = self.p;
        for (dst, t) in row.iter_mut().zip(self.buf.iter()) {
            *dst = (*t % p) as u32;
        }
    }

    /// Applies the panel in order; afterwards the scratch row vanishes at
    /// every panel pivot column (entries may be unreduced elsewhere).
    fn apply(&mut self, panel: &[Pivot]) {
        let mut pending = 0usize;
        for piv in panel {
            let coef = self.buf[piv.col] % self.p;
            if coef == 0 {
                self.buf[piv.col] = 0;
                continue;
            }
            if pending == self.budget {
                self.reduce();
                pending = 0;
            }
            axpy(&mut self.buf[piv.col..], &piv.tail, self.p - coef);
            pending += 1;
        }
    }
}

/// Rank of a row-major `rows x cols` matrix of reduced residues. Consumes the
/// buffer; nothing of the echelon form is kept.
pub(crate) fn rank_consuming(field: &PrimeField, rows: usize, cols: usize, mut data: Vec<u32>) -> usize {
    debug_assert_eq!(data.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let p = u64::from(field.modulus());
    let mut scratch = Scratch { buf: vec![0u64; cols], p, budget: field.lazy_budget().max(1) };
    let mut active: Vec<usize> = (0..rows).collect();
    let mut panel: Vec<Pivot> = Vec::with_capacity(PANEL);
    let mut rank = 0;

    while !active.is_empty() && rank < cols {
        panel.clear();
        let mut consumed = 0;
        while panel.len() < PANEL && consumed < active.len() {
            let r = active[consumed];
            consumed += 1;
            scratch.load(&data[r * cols..(r + 1) * cols]);
            scratch.apply(&panel);
            scratch.reduce();
            let Some(lead) = scratch.buf.iter().position(|&v| v != 0) else {
                continue;
            };
            let inv = field
                .inverse(field.elem(scratch.buf[lead]))
                .expect("nonzero lead")
                .value();
            let tail = scratch.buf[lead..]
                .iter()
                .map(|&v| ((v * u64::from(inv)) % p) as u32)
                .collect();
            panel.push(Pivot { col: lead, tail });
        }
        rank += panel.len();
        active.drain(..consumed);
        if panel.is_empty() {
            break;
        }
        for &r in &active {
            let row = &mut data[r * cols..(r + 1) * cols];
            scratch.load(row);
            scratch.apply(&panel);
            scratch.store(row);
        }
    }
    rank
}
