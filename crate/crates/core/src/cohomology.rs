//! Sheaf cohomology of presented bundles through ranks of multiplication
//! matrices.
//!
//! For `0 -> A(m) -> B(m) -> E(m) -> 0` with `A = O(d-2)^a`, `B = O(d-1)^b`
//! every `h^i(E(m))` is a dimension count minus the rank of one of two block
//! matrices:
//!
//! * `sigma_m : R_{d-2+m}^a -> R_{d-1+m}^b`, multiplication by `M`;
//! * `mu_m : R_{-m-d-2}^b -> R_{-m-d-1}^a`, multiplication by `M^T`, the
//!   Serre dual of `H^2(A(m)) -> H^2(B(m))`.
//!
//! The dual bundle uses `0 -> E^v -> B^v -> A^v -> 0` and its own builder so
//! the two sides of Serre duality are computed independently.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, PrimeField};
use crate::linalg::{solve_affine, AffineSolution, DenseMatrix, MatrixFp, SparseMatrix};
use crate::poly::{block_mult_matrix, graded_dim, mult_matrix, multiply_into, LinearForm};
use crate::presentation::UlrichPresentation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("presentations are incompatible: {0}")]
    Incompatible(String),
}

/// `(h^0, h^1, h^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hodge {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

impl Hodge {
    pub const ZERO: Hodge = Hodge { h0: 0, h1: 0, h2: 0 };

    pub fn new(h0: usize, h1: usize, h2: usize) -> Self {
        Hodge { h0, h1, h2 }
    }

    pub fn chi(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }

    pub fn get(&self, i: usize) -> usize {
        [self.h0, self.h1, self.h2][i]
    }
}

/// `h^i(O(n))` on the plane.
pub fn line_h(i: u8, n: i64) -> usize {
    match i {
        0 => graded_dim(n),
        2 => graded_dim(-n - 3),
        _ => 0,
    }
}

/// `chi(O(n)) = (n + 1)(n + 2) / 2`.
pub fn line_chi(n: i64) -> i64 {
    (n + 1) * (n + 2) / 2
}

/// `chi(E(m))` from the resolution.
pub fn resolution_chi(a: usize, b: usize, d: i64, m: i64) -> i64 {
    b as i64 * line_chi(d - 1 + m) - a as i64 * line_chi(d - 2 + m)
}

/// `H^0(E(m))` as the quotient of `R_{d-1+m}^b` by the image of `sigma_m`.
///
/// The image is kept in reduced row echelon form; the non-pivot coordinates
/// of a reduced vector are its coordinates in the quotient.
#[derive(Debug, Clone)]
pub struct SectionSpace {
    twist: i64,
    degree: i64,
    copies: usize,
    echelon: DenseMatrix,
    pivots: Vec<usize>,
    free: Vec<usize>,
    /// Position of each ambient coordinate in `free`, if any.
    free_pos: Vec<Option<usize>>,
}

impl SectionSpace {
    fn build(pres: &UlrichPresentation, m: i64) -> Self {
        let degree = pres.d() - 1 + m;
        let copies = pres.b();
        let ambient = graded_dim(degree) * copies;
        let image = sigma_matrix(pres, m).transpose().to_dense();
        let ech = image.rref();
        let rank = ech.rank();
        let free = ech.free_columns();
        let mut free_pos = vec![None; ambient];
        for (k, &c) in free.iter().enumerate() {
            free_pos[c] = Some(k);
        }
        let echelon = DenseMatrix::from_fn(*pres.field(), rank, ambient, |i, j| ech.matrix.get(i, j));
        SectionSpace { twist: m, degree, copies, echelon, pivots: ech.pivots, free, free_pos }
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    /// Degree of the ambient graded piece, `d - 1 + m`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn ambient_dim(&self) -> usize {
        self.free_pos.len()
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Ambient coordinates that form the quotient basis.
    pub fn free_coordinates(&self) -> &[usize] {
        &self.free
    }

    pub fn pivot_coordinates(&self) -> &[usize] {
        &self.pivots
    }

    /// The ambient vector of the `k`-th quotient basis element.
    pub fn lift(&self, k: usize) -> Vec<FieldElement> {
        let mut v = vec![FieldElement::ZERO; self.ambient_dim()];
        v[self.free[k]] = FieldElement::ONE;
        v
    }

    /// Quotient coordinates of an ambient vector.
    pub fn project(&self, field: &PrimeField, mut v: Vec<FieldElement>) -> Vec<FieldElement> {
        debug_assert_eq!(v.len(), self.ambient_dim());
        for (i, &c) in self.pivots.iter().enumerate() {
            let coef = v[c];
            if coef.is_zero() {
                continue;
            }
            let row = self.echelon.row(i);
            for (j, &e) in row.iter().enumerate().skip(c) {
                if e != 0 {
                    v[j] = field.sub(v[j], field.mul(coef, field.elem(u64::from(e))));
                }
            }
        }
        let mut out = vec![FieldElement::ZERO; self.dim()];
        for (j, x) in v.into_iter().enumerate() {
            if let Some(k) = self.free_pos[j] {
                out[k] = x;
            }
        }
        out
    }

    /// Multiplies an ambient vector by a linear form into the next degree.
    fn multiply(&self, field: &PrimeField, f: &LinearForm, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; graded_dim(self.degree + 1) * self.copies];
        multiply_into(field, f, self.degree, self.copies, v, &mut out);
        out
    }
}

/// `sigma_m : R_{d-2+m}^a -> R_{d-1+m}^b`, monomial-major on both sides.
pub fn sigma_matrix(pres: &UlrichPresentation, m: i64) -> SparseMatrix {
    block_mult_matrix(pres.field(), pres.a(), pres.b(), pres.d() - 2 + m, |s, t| pres.entry(t, s))
}

/// `mu_m : R_{-m-d-2}^b -> R_{-m-d-1}^a`, monomial-major on both sides.
pub fn mu_matrix(pres: &UlrichPresentation, m: i64) -> SparseMatrix {
    block_mult_matrix(pres.field(), pres.b(), pres.a(), -m - pres.d() - 2, |s, t| pres.entry(s, t))
}

/// `R_n^b -> R_{n+1}^a` by `M^T`, built block by block in copy-major order
/// and eliminated densely.
fn dual_map_rank(pres: &UlrichPresentation, n: i64) -> usize {
    let (src, dst) = (graded_dim(n), graded_dim(n + 1));
    if src == 0 || dst == 0 {
        return 0;
    }
    let field = *pres.field();
    let mut out = DenseMatrix::zeros(field, pres.a() * dst, pres.b() * src);
    for i in 0..pres.b() {
        for j in 0..pres.a() {
            let block = mult_matrix(&field, &pres.entry(i, j), n);
            for row in 0..dst {
                for &(col, v) in block.row_entries(row) {
                    out.set(j * dst + row, i * src + col as usize, field.elem(u64::from(v)));
                }
            }
        }
    }
    out.into_rank()
}

/// 3x3 table of `h^q(E(1-d) (x) Omega^{-p}(-p))`; `cells[q][p + 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaTable {
    pub cells: [[usize; 3]; 3],
}

impl OmegaTable {
    pub fn row(&self, q: usize) -> [usize; 3] {
        self.cells[q]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub m: i64,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub chi: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyProfile {
    pub presentation_hash: String,
    pub rows: Vec<ProfileRow>,
}

/// Cohomology of one presentation with cached ranks and section spaces.
/// Safe to share across threads.
pub struct Cohomology<'a> {
    pres: &'a UlrichPresentation,
    sections: RwLock<HashMap<i64, Arc<SectionSpace>>>,
    sigma_ranks: RwLock<HashMap<i64, usize>>,
    mu_ranks: RwLock<HashMap<i64, usize>>,
}

fn cached(cache: &RwLock<HashMap<i64, usize>>, key: i64, compute: impl FnOnce() -> usize) -> usize {
    if let Some(&v) = cache.read().expect("rank cache poisoned").get(&key) {
        return v;
    }
    let v = compute();
    cache.write().expect("rank cache poisoned").insert(key, v);
    v
}

impl<'a> Cohomology<'a> {
    pub fn new(pres: &'a UlrichPresentation) -> Self {
        Cohomology {
            pres,
            sections: RwLock::default(),
            sigma_ranks: RwLock::default(),
            mu_ranks: RwLock::default(),
        }
    }

    pub fn presentation(&self) -> &UlrichPresentation {
        self.pres
    }

    fn sigma_rank(&self, m: i64) -> usize {
        cached(&self.sigma_ranks, m, || {
            if graded_dim(self.pres.d() - 2 + m) == 0 {
                0
            } else {
                sigma_matrix(self.pres, m).into_rank()
            }
        })
    }

    fn mu_rank(&self, m: i64) -> usize {
        cached(&self.mu_ranks, m, || {
            if graded_dim(-m - self.pres.d() - 2) == 0 {
                0
            } else {
                mu_matrix(self.pres, m).into_rank()
            }
        })
    }

    pub fn h0(&self, m: i64) -> usize {
        self.pres.b() * line_h(0, self.pres.d() - 1 + m) - self.sigma_rank(m)
    }

    pub fn h1(&self, m: i64) -> usize {
        self.pres.a() * line_h(2, self.pres.d() - 2 + m) - self.mu_rank(m)
    }

    pub fn h2(&self, m: i64) -> usize {
        self.pres.b() * line_h(2, self.pres.d() - 1 + m) - self.mu_rank(m)
    }

    /// `h^i(E(m))`.
    pub fn bundle(&self, m: i64) -> Hodge {
        Hodge::new(self.h0(m), self.h1(m), self.h2(m))
    }

    /// `h^i(E^v(m))`.
    pub fn dual(&self, m: i64) -> Hodge {
        let d = self.pres.d();
        let (a, b) = (self.pres.a(), self.pres.b());
        let n = 1 - d + m;
        let rank = dual_map_rank(self.pres, n);
        Hodge::new(
            b * line_h(0, n) - rank,
            a * line_h(0, n + 1) - rank,
            b * line_h(2, n) - a * line_h(2, n + 1),
        )
    }

    pub fn section_space(&self, m: i64) -> Arc<SectionSpace> {
        if let Some(s) = self.sections.read().expect("section cache poisoned").get(&m) {
            return Arc::clone(s);
        }
        let built = Arc::new(SectionSpace::build(self.pres, m));
        let mut w = self.sections.write().expect("section cache poisoned");
        Arc::clone(w.entry(m).or_insert(built))
    }

    /// Rank of a map between section spaces given by linear forms: column
    /// `(s, k)` is `sum_t forms(s, t) * lift(k)` placed in target copy `t`.
    fn section_map_rank(
        &self,
        src: &SectionSpace,
        dst: &SectionSpace,
        src_copies: usize,
        dst_copies: usize,
        forms: impl Fn(usize, usize) -> LinearForm,
    ) -> usize {
        let field = self.pres.field();
        let (ns, nt) = (src.dim(), dst.dim());
        let mut mat = DenseMatrix::zeros(*field, dst_copies * nt, src_copies * ns);
        for s in 0..src_copies {
            for k in 0..ns {
                let v = src.lift(k);
                for t in 0..dst_copies {
                    let f = forms(s, t);
                    if f.is_zero() {
                        continue;
                    }
                    let image = dst.project(field, src.multiply(field, &f, &v));
                    for (row, x) in image.into_iter().enumerate() {
                        mat.set(t * nt + row, s * ns + k, x);
                    }
                }
            }
        }
        mat.into_rank()
    }

    /// `h^i(E (x) E^v)` from `0 -> End E -> E(1-d)^b -> E(2-d)^a -> 0`.
    ///
    /// The resolution forces `h^1(E(1-d)) = h^1(E(2-d)) = h^2(E(1-d)) = 0`,
    /// so `h^1` is the cokernel and `h^2` vanishes.
    pub fn end(&self) -> Hodge {
        let d = self.pres.d();
        let (a, b) = (self.pres.a(), self.pres.b());
        let src = self.section_space(1 - d);
        let dst = self.section_space(2 - d);
        let rank = self.section_map_rank(&src, &dst, b, a, |i, j| self.pres.entry(i, j));
        Hodge::new(b * src.dim() - rank, a * dst.dim() - rank, 0)
    }

    /// The middle column comes from the Euler sequence twisted by `E(2-d)`.
    pub fn omega_table(&self) -> OmegaTable {
        let d = self.pres.d();
        let left = self.bundle(-d);
        let right = self.bundle(1 - d);
        let src = self.section_space(1 - d);
        let dst = self.section_space(2 - d);
        let rank = self.section_map_rank(&src, &dst, 3, 1, |s, _| LinearForm::variable(s));
        let mid = Hodge::new(3 * src.dim() - rank, dst.dim() - rank, 0);
        let mut cells = [[0; 3]; 3];
        for (q, row) in cells.iter_mut().enumerate() {
            *row = [left.get(q), mid.get(q), right.get(q)];
        }
        OmegaTable { cells }
    }

    /// Rows for each twist in `ms`, computed in parallel.
    pub fn profile(&self, ms: impl IntoIterator<Item = i64>) -> CohomologyProfile {
        let ms: Vec<i64> = ms.into_iter().collect();
        let rows = ms
            .par_iter()
            .map(|&m| {
                let h = self.bundle(m);
                ProfileRow { m, h0: h.h0, h1: h.h1, h2: h.h2, chi: h.chi() }
            })
            .collect();
        CohomologyProfile { presentation_hash: self.pres.hash(), rows }
    }
}

pub fn bundle_cohomology(pres: &UlrichPresentation, m: i64) -> Hodge {
    Cohomology::new(pres).bundle(m)
}

pub fn dual_cohomology(pres: &UlrichPresentation, m: i64) -> Hodge {
    Cohomology::new(pres).dual(m)
}

pub fn section_space(pres: &UlrichPresentation, m: i64) -> SectionSpace {
    SectionSpace::build(pres, m)
}

pub fn end_cohomology(pres: &UlrichPresentation) -> Hodge {
    Cohomology::new(pres).end()
}

pub fn omega_table(pres: &UlrichPresentation) -> OmegaTable {
    Cohomology::new(pres).omega_table()
}

/// Dimension of `{(Q, R) : Q M1 = M2 R}` with `Q` a scalar `b2 x b1` and `R`
/// a scalar `a2 x a1` matrix: degree-0 homomorphisms of the presented modules.
pub fn hom_presentations(p1: &UlrichPresentation, p2: &UlrichPresentation) -> Result<usize, CohomologyError> {
    if p1.field() != p2.field() {
        return Err(CohomologyError::Incompatible(format!(
            "moduli {} and {}",
            p1.field().modulus(),
            p2.field().modulus()
        )));
    }
    if p1.d() != p2.d() {
        return Err(CohomologyError::Incompatible(format!("degrees {} and {}", p1.d(), p2.d())));
    }
    let field = *p1.field();
    let (a1, b1, a2, b2) = (p1.a(), p1.b(), p2.a(), p2.b());
    let q_var = |k: usize, i: usize| k * b1 + i;
    let r_var = |l: usize, j: usize| b2 * b1 + l * a1 + j;
    let unknowns = b2 * b1 + a2 * a1;
    let mut system = SparseMatrix::zeros(field, 3 * b2 * a1, unknowns);
    for k in 0..b2 {
        for j in 0..a1 {
            for v in 0..3 {
                let eq = (k * a1 + j) * 3 + v;
                for i in 0..b1 {
                    system.add_at(eq, q_var(k, i), p1.entry(i, j).coeffs()[v]);
                }
                for l in 0..a2 {
                    system.add_at(eq, r_var(l, j), field.neg(p2.entry(k, l).coeffs()[v]));
                }
            }
        }
    }
    let zero = vec![FieldElement::ZERO; system.rows()];
    match solve_affine(&MatrixFp::Sparse(system), &zero).expect("right-hand side sized to the system") {
        AffineSolution::Consistent { null_dim, .. } => Ok(null_dim),
        AffineSolution::Inconsistent => unreachable!("homogeneous systems are consistent"),
    }
}
