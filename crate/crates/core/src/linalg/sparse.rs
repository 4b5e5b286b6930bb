//! Rank-only structured elimination for sparse and banded matrices.
//!
//! Rows are bucketed by leading column. A row keeps its original nonzeros
//! until a reduction first touches it, and from then on is stored as a dense
//! segment from its leading column to its last nonzero. Columns are processed in
//! order; inside a bucket the shortest segment becomes the pivot (the
//! Markowitz row count, with the column fixed), so subtracting it never
//! lengthens another row. For matrices whose rows span a bounded window of
//! columns this keeps the whole elimination inside the band.
//!
//! When the stored entries fill more than [`DENSE_SWITCH`] of the active
//! submatrix the remainder is handed to the dense kernel.

use super::dense;
use crate::field::PrimeField;

/// Fill fraction of the active submatrix above which elimination continues densely.
pub const DENSE_SWITCH: f64 = 0.20;

/// Below this many active rows the density test is skipped.
const MIN_DENSE_ROWS: usize = 64;

struct Segment {
    start: usize,
    vals: Vec<u64>,
    /// Unreduced products accumulated since the last full reduction.
    pending: usize,
}

impl Segment {
    fn reduce(&mut self, p: u64) {
        for v in self.vals.iter_mut() {
            *v %= p;
        }
        self.pending = 0;
    }
}

/// A row is kept as its original nonzeros until elimination first touches
/// it, so only the rows near the current column are ever stored densely.
enum Row {
    Fresh(Vec<(usize, u64)>),
    Dense(Segment),
}

impl Row {
    fn start(&self) -> usize {
        match self {
            Row::Fresh(e) => e[0].0,
            Row::Dense(s) => s.start,
        }
    }

    fn span(&self) -> usize {
        match self {
            Row::Fresh(e) => e[e.len() - 1].0 - e[0].0 + 1,
            Row::Dense(s) => s.vals.len(),
        }
    }

    fn stored(&self) -> usize {
        match self {
            Row::Fresh(e) => e.len(),
            Row::Dense(s) => s.vals.len(),
        }
    }

    fn into_segment(self) -> Segment {
        match self {
            Row::Fresh(e) => {
                let start = e[0].0;
                let mut vals = vec![0; e[e.len() - 1].0 - start + 1];
                for (c, v) in e {
                    vals[c - start] = v;
                }
                Segment { start, vals, pending: 0 }
            }
            Row::Dense(s) => s,
        }
    }
}

pub(crate) fn rank_consuming(
    field: &PrimeField,
    rows: usize,
    cols: usize,
    row_entries: Vec<Vec<(u32, u32)>>,
) -> usize {
    debug_assert_eq!(row_entries.len(), rows);
    let p = u64::from(field.modulus());
    let budget = field.lazy_budget().max(1);
    let mut buckets: Vec<Vec<Row>> = (0..cols).map(|_| Vec::new()).collect();
    let mut active = 0usize;
    let mut stored = 0usize;

    for mut entries in row_entries {
        entries.sort_unstable_by_key(|&(c, _)| c);
        let mut merged: Vec<(usize, u64)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == c as usize => last.1 = (last.1 + u64::from(v)) % p,
                _ => merged.push((c as usize, u64::from(v) % p)),
            }
        }
        merged.retain(|&(_, v)| v != 0);
        if merged.is_empty() {
            continue;
        }
        let row = Row::Fresh(merged);
        stored += row.stored();
        active += 1;
        buckets[row.start()].push(row);
    }

    let mut rank = 0usize;
    for c in 0..cols {
        if active >= MIN_DENSE_ROWS && (c & 63) == 0 {
            let remaining = (cols - c) as f64;
            if stored as f64 > DENSE_SWITCH * active as f64 * remaining {
                return rank + densify_rest(field, &mut buckets[c..], c, cols - c, active);
            }
        }
        let mut bucket = std::mem::take(&mut buckets[c]);
        if bucket.is_empty() {
            continue;
        }
        let pi = bucket
            .iter()
            .enumerate()
            .min_by_key(|(_, r)| r.span())
            .map(|(i, _)| i)
            .expect("nonempty bucket");
        let pivot = bucket.swap_remove(pi);
        rank += 1;
        active -= 1;
        stored -= pivot.stored();
        if bucket.is_empty() {
            continue;
        }
        let mut pivot = pivot.into_segment();
        pivot.reduce(p);
        let inv = u64::from(field.inverse(field.elem(pivot.vals[0])).expect("nonzero lead").value());
        let piv: Vec<u32> = pivot.vals.iter().map(|&v| ((v * inv) % p) as u32).collect();

        for row in bucket {
            stored -= row.stored();
            let mut seg = row.into_segment();
            debug_assert!(seg.vals.len() >= piv.len());
            let coef = seg.vals[0] % p;
            if seg.pending == budget {
                seg.reduce(p);
            }
            if piv.len() > 1 {
                dense::axpy(&mut seg.vals[1..piv.len()], &piv[1..], p - coef);
                seg.pending += 1;
            }
            let Some(off) = seg.vals[1..].iter().position(|&v| v % p != 0) else {
                active -= 1;
                continue;
            };
            seg.vals.drain(..=off);
            seg.vals[0] %= p;
            seg.start += off + 1;
            stored += seg.vals.len();
            let s = seg.start;
            buckets[s].push(Row::Dense(seg));
        }
    }
    rank
}

/// Packs every remaining segment into a dense block over columns
/// `first_col..first_col + width` and finishes with the dense kernel.
fn densify_rest(
    field: &PrimeField,
    buckets: &mut [Vec<Row>],
    first_col: usize,
    width: usize,
    active: usize,
) -> usize {
    let p = u64::from(field.modulus());
    let mut data = vec![0u32; active * width];
    let mut r = 0;
    for bucket in buckets.iter_mut() {
        for row in bucket.drain(..) {
            let dst = &mut data[r * width..(r + 1) * width];
            match row {
                Row::Fresh(entries) => {
                    for (c, v) in entries {
                        dst[c - first_col] = v as u32;
                    }
                }
                Row::Dense(seg) => {
                    let from = seg.start - first_col;
                    for (d, v) in dst[from..].iter_mut().zip(&seg.vals) {
                        *d = (v % p) as u32;
                    }
                }
            }
            r += 1;
        }
    }
    debug_assert_eq!(r, active);
    dense::rank_consuming(field, active, width, data)
}
