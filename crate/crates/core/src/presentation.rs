//! Candidate bundles presented as cokernels `O(d-2)^a -> O(d-1)^b` of a
//! `b x a` matrix of linear forms.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::{ExtElement, ExtensionField, FieldElement, FiniteField, PrimeField, MAX_EXTENSION_DEGREE};
use crate::poly::LinearForm;

pub const PRESENTATION_FORMAT: &str = "ulrich-presentation/1";

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error("degree d must be at least 1, got {0}")]
    BadDegree(i64),
    #[error("rank r must be at least 1, got {0}")]
    BadRank(i64),
    #[error("rank {r} is odd but degree {d} is even: an Ulrich bundle on an even-degree Veronese surface has even rank, so r(d-1)/2 is not an integer")]
    Parity { d: i64, r: i64 },
    #[error("invalid presentation file: {0}")]
    Invalid(String),
    #[error("malformed presentation JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("presentations live over different fields (p = {0} and p = {1})")]
    ModulusMismatch(u32, u32),
}

/// Sizes `a`, `b` of the resolution and the last twist `alpha` that the
/// vanishing criterion has to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub d: u32,
    pub r: u32,
    pub a: usize,
    pub b: usize,
    pub alpha: u32,
}

pub fn shape(d: i64, r: i64) -> Result<Shape, PresentationError> {
    if d < 1 {
        return Err(PresentationError::BadDegree(d));
    }
    if r < 1 {
        return Err(PresentationError::BadRank(r));
    }
    if (r * (d - 1)) % 2 != 0 {
        return Err(PresentationError::Parity { d, r });
    }
    Ok(Shape {
        d: d as u32,
        r: r as u32,
        a: (r * (d - 1) / 2) as usize,
        b: (r * (d + 1) / 2) as usize,
        alpha: ((r + 3) / 2) as u32,
    })
}

/// A `b x a` matrix of linear forms over `F_p` together with `(d, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlrichPresentation {
    field: PrimeField,
    shape: Shape,
    /// Row-major, `b * a` entries.
    entries: Vec<LinearForm>,
}

/// Verdict of [`UlrichPresentation::generic_rank_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum GenericRank {
    /// Full column rank at `witness`.
    Injective { witness: [u32; 3], trials_used: usize },
    Undetermined { trials: usize },
}

impl GenericRank {
    pub fn is_injective(&self) -> bool {
        matches!(self, GenericRank::Injective { .. })
    }
}

/// Verdict of the degeneracy sampler. Passing is never a proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum LocalFreeness {
    /// Rank drops below `a` at `point`, whose coordinates lie in `F_{p^k}`
    /// (each listed as its `k` coefficients over `F_p`).
    Falsified { k: usize, point: Vec<Vec<u32>>, rank: usize },
    NoDegeneracyFound { k_max: usize, trials_per_k: usize, complete: bool },
}

impl LocalFreeness {
    pub fn is_falsified(&self) -> bool {
        matches!(self, LocalFreeness::Falsified { .. })
    }
}

/// Draws a point of `P^2` over `field` from the chart with a 1 in position
/// `chart` (2, 1, 0 in rotation for `z = 1`, `y = 1`, `x = 1`).
pub fn sample_point<F: FiniteField, R: Rng + ?Sized>(field: &F, chart: usize, rng: &mut R) -> [F::Elem; 3] {
    let one = field.one();
    let mut draw = |k: usize| if k == chart { one.clone() } else { field.random_elem(rng) };
    [draw(0), draw(1), draw(2)]
}

const CHART_ROTATION: [usize; 3] = [2, 1, 0];

#[derive(Serialize, Deserialize)]
struct PresentationFile {
    format: String,
    p: u32,
    d: i64,
    r: i64,
    a: usize,
    b: usize,
    entries: Vec<Vec<[u64; 3]>>,
}

impl UlrichPresentation {
    /// Builds a presentation from rows of linear forms, checking the shape.
    pub fn new(field: PrimeField, d: i64, r: i64, rows: Vec<Vec<LinearForm>>) -> Result<Self, PresentationError> {
        let shape = shape(d, r)?;
        if rows.len() != shape.b {
            return Err(PresentationError::Invalid(format!(
                "matrix has {} rows, expected b = {}",
                rows.len(),
                shape.b
            )));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != shape.a) {
            return Err(PresentationError::Invalid(format!(
                "row {i} has {} entries, expected a = {}",
                row.len(),
                shape.a
            )));
        }
        Ok(UlrichPresentation { field, shape, entries: rows.into_iter().flatten().collect() })
    }

    /// Independent uniform coefficients, drawn row by row.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, d: i64, r: i64, rng: &mut R) -> Result<Self, PresentationError> {
        let shape = shape(d, r)?;
        let entries = (0..shape.a * shape.b)
            .map(|_| LinearForm([field.random(rng), field.random(rng), field.random(rng)]))
            .collect();
        Ok(UlrichPresentation { field, shape, entries })
    }

    /// The column `(x, y, z)^T`: `0 -> O -> O(1)^3 -> E -> 0` for `d = r = 2`.
    pub fn euler(field: PrimeField) -> Self {
        let rows = (0..3).map(|k| vec![LinearForm::variable(k)]).collect();
        Self::new(field, 2, 2, rows).expect("d = r = 2 has shape (1, 3)")
    }

    /// Block-diagonal sum; ranks add.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, PresentationError> {
        if self.field != other.field {
            return Err(PresentationError::ModulusMismatch(self.field.modulus(), other.field.modulus()));
        }
        if self.shape.d != other.shape.d {
            return Err(PresentationError::Invalid(format!(
                "direct sum needs equal degrees, got {} and {}",
                self.shape.d, other.shape.d
            )));
        }
        let (a1, a2) = (self.shape.a, other.shape.a);
        let mut rows = Vec::new();
        for i in 0..self.shape.b {
            let mut row = self.row(i).to_vec();
            row.resize(a1 + a2, LinearForm::zero());
            rows.push(row);
        }
        for i in 0..other.shape.b {
            let mut row = vec![LinearForm::zero(); a1];
            row.extend_from_slice(other.row(i));
            rows.push(row);
        }
        Self::new(self.field, i64::from(self.shape.d), i64::from(self.shape.r + other.shape.r), rows)
    }

    /// Rows reordered so that new row `i` is old row `perm[i]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self, PresentationError> {
        let mut seen = vec![false; self.shape.b];
        if perm.len() != self.shape.b || perm.iter().any(|&i| i >= self.shape.b || std::mem::replace(&mut seen[i], true)) {
            return Err(PresentationError::Invalid("row permutation is not a permutation of 0..b".into()));
        }
        let rows = perm.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::new(self.field, i64::from(self.shape.d), i64::from(self.shape.r), rows)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn d(&self) -> i64 {
        i64::from(self.shape.d)
    }

    pub fn r(&self) -> i64 {
        i64::from(self.shape.r)
    }

    pub fn a(&self) -> usize {
        self.shape.a
    }

    pub fn b(&self) -> usize {
        self.shape.b
    }

    pub fn entry(&self, i: usize, j: usize) -> LinearForm {
        self.entries[i * self.shape.a + j]
    }

    pub fn row(&self, i: usize) -> &[LinearForm] {
        &self.entries[i * self.shape.a..(i + 1) * self.shape.a]
    }

    /// The scalar `b x a` matrix at `point`.
    pub fn evaluate<F: FiniteField>(&self, field: &F, point: &[F::Elem; 3]) -> Vec<Vec<F::Elem>> {
        (0..self.shape.b)
            .map(|i| self.row(i).iter().map(|f| f.evaluate_unchecked(field, point)).collect())
            .collect()
    }

    fn rank_at<F: FiniteField>(&self, field: &F, point: &[F::Elem; 3]) -> usize {
        crate::field::small_rank(field, self.evaluate(field, point))
    }

    /// Looks for an `F_p`-point where the matrix has full column rank `a`.
    /// One such point proves the sheaf map is injective.
    pub fn generic_rank_check<R: Rng + ?Sized>(&self, trials: usize, rng: &mut R) -> GenericRank {
        for t in 0..trials {
            let point = sample_point(&self.field, CHART_ROTATION[t % 3], rng);
            if self.rank_at(&self.field, &point) == self.shape.a {
                return GenericRank::Injective { witness: point.map(|c| c.value()), trials_used: t + 1 };
            }
        }
        GenericRank::Undetermined { trials }
    }

    /// Samples points over `F_{p^k}`, `k = 1..=k_max`, and reports the first
    /// where the rank drops. `k_max` is capped at [`MAX_EXTENSION_DEGREE`].
    pub fn local_freeness_sample<R: Rng + ?Sized>(&self, k_max: usize, trials_per_k: usize, rng: &mut R) -> LocalFreeness {
        let k_max = k_max.clamp(1, MAX_EXTENSION_DEGREE);
        for k in 1..=k_max {
            let ext = ExtensionField::new(self.field, k);
            for t in 0..trials_per_k {
                let point: [ExtElement; 3] = sample_point(&ext, CHART_ROTATION[t % 3], rng);
                let rank = self.rank_at(&ext, &point);
                if rank < self.shape.a {
                    return LocalFreeness::Falsified { k, point: point.into_iter().map(|c| c.0).collect(), rank };
                }
            }
        }
        LocalFreeness::NoDegeneracyFound { k_max, trials_per_k, complete: false }
    }

    /// Canonical JSON: fixed key order, one matrix row per line, trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let s = &self.shape;
        let mut out = String::new();
        let _ = write!(
            out,
            "{{\"format\":\"{PRESENTATION_FORMAT}\",\"p\":{},\"d\":{},\"r\":{},\"a\":{},\"b\":{},\"entries\":[",
            self.field.modulus(),
            s.d,
            s.r,
            s.a,
            s.b
        );
        for i in 0..s.b {
            out.push_str(if i == 0 { "\n  [" } else { ",\n  [" });
            for (j, f) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                let [c0, c1, c2] = f.coeffs().map(FieldElement::value);
                let _ = write!(out, "[{c0},{c1},{c2}]");
            }
            out.push(']');
        }
        out.push_str("\n]}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self, PresentationError> {
        let file: PresentationFile = serde_json::from_str(text)?;
        if file.format != PRESENTATION_FORMAT {
            return Err(PresentationError::Invalid(format!(
                "format is {:?}, expected {PRESENTATION_FORMAT:?}",
                file.format
            )));
        }
        let field = PrimeField::new(file.p).map_err(|e| PresentationError::Invalid(format!("modulus: {e}")))?;
        let s = shape(file.d, file.r)?;
        if file.b < file.a || file.b - file.a != s.r as usize {
            return Err(PresentationError::Invalid(format!(
                "b - a must equal r = {} (got a = {}, b = {})",
                s.r, file.a, file.b
            )));
        }
        if (file.a, file.b) != (s.a, s.b) {
            return Err(PresentationError::Invalid(format!(
                "a = {}, b = {} disagree with r(d-1)/2 = {}, r(d+1)/2 = {}",
                file.a, file.b, s.a, s.b
            )));
        }
        let mut rows = Vec::with_capacity(file.entries.len());
        for (i, row) in file.entries.iter().enumerate() {
            let mut forms = Vec::with_capacity(row.len());
            for (j, c) in row.iter().enumerate() {
                if let Some(bad) = c.iter().find(|&&v| v >= u64::from(file.p)) {
                    return Err(PresentationError::Invalid(format!(
                        "entry ({i}, {j}) has coefficient {bad} outside [0, p)"
                    )));
                }
                forms.push(LinearForm(c.map(|v| field.elem(v))));
            }
            rows.push(forms);
        }
        Self::new(field, file.d, file.r, rows)
    }

    pub fn save(&self, path: &Path) -> Result<(), PresentationError> {
        std::fs::write(path, self.to_canonical_json())
            .map_err(|source| PresentationError::Io { path: path.display().to_string(), source })
    }

    pub fn load(path: &Path) -> Result<Self, PresentationError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| PresentationError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_canonical_json().as_bytes()))
    }
}
