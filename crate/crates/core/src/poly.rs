//! Graded pieces of `F_p[x, y, z]` and multiplication-by-form matrices.
//!
//! Monomials of a fixed degree are ordered graded-lexicographically with
//! `x > y > z`. With that order the position of `x^e0 y^e1 z^e2` in degree
//! `n` is `T(n - e0) + e2`, `T(k) = k(k+1)/2`, which every builder below uses
//! instead of a lookup table.
//!
//! Vectors in `R_n^c` (`c` copies of the degree-`n` piece) are laid out
//! monomial-major: coordinate `(copy, monomial)` sits at `monomial * c + copy`.
//! Multiplication by linear forms then only couples coordinates within a
//! window of about `(n + 3) * c`, which keeps the cohomology matrices banded.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FiniteField, PrimeField};
use crate::linalg::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("(0, 0, 0) is not a point of the projective plane")]
    ZeroPoint,
    #[error("coefficient vector has length {got}, degree-{degree} piece has dimension {expected}")]
    LengthMismatch { degree: i64, expected: usize, got: usize },
}

/// Exponent triple `(e0, e1, e2)` of `x^e0 y^e1 z^e2`.
pub type Monomial = [u32; 3];

/// `dim R_n = C(n + 2, 2)`, zero for negative `n`.
pub fn graded_dim(n: i64) -> usize {
    if n < 0 {
        0
    } else {
        let n = n as usize;
        (n + 1) * (n + 2) / 2
    }
}

#[inline]
fn tri(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Position of a monomial inside the basis of its degree.
#[inline]
pub fn monomial_index(m: Monomial) -> usize {
    let n = (m[0] + m[1] + m[2]) as usize;
    tri(n - m[0] as usize) + m[2] as usize
}

/// The ordered monomial basis of `R_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    degree: i64,
    monomials: Vec<Monomial>,
}

impl GradedBasis {
    /// Negative degrees give the empty basis.
    pub fn new(n: i64) -> Self {
        let mut monomials = Vec::with_capacity(graded_dim(n));
        if n >= 0 {
            let n = n as u32;
            for e0 in (0..=n).rev() {
                for e1 in (0..=n - e0).rev() {
                    monomials.push([e0, e1, n - e0 - e1]);
                }
            }
        }
        GradedBasis { degree: n, monomials }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: Monomial) -> Option<usize> {
        (i64::from(m[0] + m[1] + m[2]) == self.degree).then(|| monomial_index(m))
    }
}

pub fn basis(n: i64) -> GradedBasis {
    GradedBasis::new(n)
}

/// `c0 x + c1 y + c2 z`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm(pub [FieldElement; 3]);

impl LinearForm {
    pub fn new(field: &PrimeField, c: [i64; 3]) -> Self {
        LinearForm(c.map(|v| field.from_i64(v)))
    }

    pub const fn zero() -> Self {
        LinearForm([FieldElement::ZERO; 3])
    }

    /// The coordinate form `x_k`.
    pub const fn variable(k: usize) -> Self {
        let mut c = [FieldElement::ZERO; 3];
        c[k] = FieldElement::ONE;
        LinearForm(c)
    }

    pub fn coeffs(&self) -> [FieldElement; 3] {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, field: &PrimeField, other: &LinearForm) -> LinearForm {
        LinearForm([0, 1, 2].map(|k| field.add(self.0[k], other.0[k])))
    }

    pub fn scale(&self, field: &PrimeField, s: FieldElement) -> LinearForm {
        LinearForm(self.0.map(|c| field.mul(c, s)))
    }

    /// Value at a point of `P^2` over `field` (the base field or an extension).
    pub fn evaluate<F: FiniteField>(&self, field: &F, point: &[F::Elem; 3]) -> Result<F::Elem, PolyError> {
        if point.iter().all(|c| field.is_zero(c)) {
            return Err(PolyError::ZeroPoint);
        }
        Ok(self.evaluate_unchecked(field, point))
    }

    pub(crate) fn evaluate_unchecked<F: FiniteField>(&self, field: &F, point: &[F::Elem; 3]) -> F::Elem {
        let mut acc = field.zero();
        for (c, x) in self.0.iter().zip(point) {
            if !c.is_zero() {
                acc = field.add(&acc, &field.mul(&field.embed(*c), x));
            }
        }
        acc
    }
}

/// A homogeneous polynomial given by its coordinates in [`GradedBasis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPoly {
    degree: i64,
    coeffs: Vec<FieldElement>,
}

impl HomogeneousPoly {
    pub fn new(degree: i64, coeffs: Vec<FieldElement>) -> Result<Self, PolyError> {
        let expected = graded_dim(degree);
        if coeffs.len() != expected {
            return Err(PolyError::LengthMismatch { degree, expected, got: coeffs.len() });
        }
        Ok(HomogeneousPoly { degree, coeffs })
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn evaluate<F: FiniteField>(&self, field: &F, point: &[F::Elem; 3]) -> Result<F::Elem, PolyError> {
        if point.iter().all(|c| field.is_zero(c)) {
            return Err(PolyError::ZeroPoint);
        }
        let n = self.degree.max(0) as usize;
        // powers[k][e] = point[k]^e
        let powers: Vec<Vec<F::Elem>> = point
            .iter()
            .map(|x| {
                let mut v = vec![field.one()];
                for e in 1..=n {
                    v.push(field.mul(&v[e - 1], x));
                }
                v
            })
            .collect();
        let mut acc = field.zero();
        for (m, c) in GradedBasis::new(self.degree).monomials().iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let term = field.mul(
                &field.mul(&powers[0][m[0] as usize], &powers[1][m[1] as usize]),
                &powers[2][m[2] as usize],
            );
            acc = field.add(&acc, &field.mul(&field.embed(*c), &term));
        }
        Ok(acc)
    }
}

/// Multiplication `R_n -> R_{n+1}` by `f`: a `C(n+3,2) x C(n+2,2)` matrix
/// with at most three nonzeros per column.
pub fn mult_matrix(field: &PrimeField, f: &LinearForm, n: i64) -> SparseMatrix {
    let src = GradedBasis::new(n);
    let mut m = SparseMatrix::zeros(*field, graded_dim(n + 1), src.len());
    for (j, mono) in src.monomials().iter().enumerate() {
        for (k, c) in f.0.iter().enumerate() {
            if !c.is_zero() {
                let mut up = *mono;
                up[k] += 1;
                m.add_at(monomial_index(up), j, *c);
            }
        }
    }
    m
}

/// Adds `f * v` into `out`, where `v` lies in `R_n^copies` and `out` in
/// `R_{n+1}^copies` (monomial-major layout).
pub fn multiply_into(
    field: &PrimeField,
    f: &LinearForm,
    n: i64,
    copies: usize,
    v: &[FieldElement],
    out: &mut [FieldElement],
) {
    let src = GradedBasis::new(n);
    debug_assert_eq!(v.len(), src.len() * copies);
    debug_assert_eq!(out.len(), graded_dim(n + 1) * copies);
    for (j, mono) in src.monomials().iter().enumerate() {
        for (k, c) in f.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut up = *mono;
            up[k] += 1;
            let row = monomial_index(up) * copies;
            for copy in 0..copies {
                let x = v[j * copies + copy];
                if !x.is_zero() {
                    out[row + copy] = field.add(out[row + copy], field.mul(*c, x));
                }
            }
        }
    }
}

/// The block map `R_n^src_copies -> R_{n+1}^dst_copies` sending the basis
/// vector `(s, u)` to `sum_t form(s, t) * u` in copy `t`. Rows index the
/// target, columns the source, both monomial-major.
pub fn block_mult_matrix(
    field: &PrimeField,
    src_copies: usize,
    dst_copies: usize,
    n: i64,
    form: impl Fn(usize, usize) -> LinearForm,
) -> SparseMatrix {
    let src = GradedBasis::new(n);
    let rows = graded_dim(n + 1) * dst_copies;
    let cols = src.len() * src_copies;
    let mut triplets = Vec::new();
    let forms: Vec<Vec<LinearForm>> = (0..src_copies).map(|s| (0..dst_copies).map(|t| form(s, t)).collect()).collect();
    for (j, mono) in src.monomials().iter().enumerate() {
        let ups = [0usize, 1, 2].map(|k| {
            let mut up = *mono;
            up[k] += 1;
            monomial_index(up)
        });
        for (s, row_forms) in forms.iter().enumerate() {
            let col = j * src_copies + s;
            for (t, f) in row_forms.iter().enumerate() {
                for (up, c) in ups.iter().zip(f.0) {
                    if !c.is_zero() {
                        triplets.push((up * dst_copies + t, col, c));
                    }
                }
            }
        }
    }
    SparseMatrix::from_triplets(*field, rows, cols, triplets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ExtensionField, FiniteField};
    use crate::linalg::{kernel_basis, DenseMatrix};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn binom2(n: i64) -> usize {
        // brute-force count of exponent triples summing to n
        let mut count = 0;
        for a in 0..=n.max(0) {
            for b in 0..=n.max(0) - a {
                let _ = b;
                count += 1;
            }
        }
        if n < 0 {
            0
        } else {
            count
        }
    }

    #[test]
    fn basis_examples() {
        assert_eq!(basis(0).monomials(), &[[0, 0, 0]]);
        assert_eq!(basis(1).monomials(), &[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(basis(6).len(), 28);
        assert!(basis(-1).is_empty());
        assert_eq!(
            basis(2).monomials(),
            &[[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]
        );
    }

    #[test]
    fn basis_sizes_and_closed_form_index() {
        for n in -3..25 {
            let b = basis(n);
            assert_eq!(b.len(), binom2(n));
            assert_eq!(b.len(), graded_dim(n));
            for (i, m) in b.monomials().iter().enumerate() {
                assert_eq!(monomial_index(*m), i);
                assert_eq!(b.index_of(*m), Some(i));
            }
        }
        assert_eq!(basis(3).index_of([1, 0, 0]), None);
    }

    #[test]
    fn mult_matrix_examples() {
        let f = PrimeField::default();
        let x = mult_matrix(&f, &LinearForm::variable(0), 0).to_dense();
        assert_eq!((x.rows(), x.cols()), (3, 1));
        assert_eq!([x.get(0, 0), x.get(1, 0), x.get(2, 0)].map(|v| v.value()), [1, 0, 0]);
        assert!(mult_matrix(&f, &LinearForm::zero(), 4).to_dense().is_zero());

        // (x + y) * y = xy + y^2
        let m = mult_matrix(&f, &LinearForm::new(&f, [1, 1, 0]), 1).to_dense();
        assert_eq!((m.rows(), m.cols()), (6, 3));
        let col_y: Vec<u32> = (0..6).map(|i| m.get(i, 1).value()).collect();
        let xy = monomial_index([1, 1, 0]);
        let yy = monomial_index([0, 2, 0]);
        for (i, v) in col_y.iter().enumerate() {
            assert_eq!(*v, u32::from(i == xy || i == yy));
        }
    }

    #[test]
    fn multiplication_by_x_is_injective() {
        let f = PrimeField::default();
        let m = mult_matrix(&f, &LinearForm::variable(0), 2);
        assert!(kernel_basis(&m.into()).is_empty());
    }

    #[test]
    fn evaluate_examples() {
        let f = PrimeField::default();
        let one = FieldElement::ONE;
        let zero = FieldElement::ZERO;
        assert_eq!(LinearForm::variable(0).evaluate(&f, &[one, zero, zero]).unwrap(), one);
        let f7 = PrimeField::new(7).unwrap();
        let s = LinearForm::new(&f7, [1, 1, 1]);
        assert_eq!(s.evaluate(&f7, &[one, one, one]).unwrap().value(), 3);
        assert_eq!(s.evaluate(&f7, &[zero, zero, zero]), Err(PolyError::ZeroPoint));
    }

    #[test]
    fn homogeneous_poly_matches_linear_form() {
        let f = PrimeField::default();
        let l = LinearForm::new(&f, [5, -2, 9]);
        let h = HomogeneousPoly::new(1, l.coeffs().to_vec()).unwrap();
        let pt = [f.elem(3), f.elem(8), f.elem(11)];
        assert_eq!(h.evaluate(&f, &pt).unwrap(), l.evaluate(&f, &pt).unwrap());
        assert!(HomogeneousPoly::new(2, vec![FieldElement::ONE; 5]).is_err());
    }

    fn random_form(f: &PrimeField, rng: &mut ChaCha8Rng) -> LinearForm {
        LinearForm([f.random(rng), f.random(rng), f.random(rng)])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn multiplication_is_injective_linear_and_commutative(seed in any::<u64>(), n in 0i64..7) {
            let f = PrimeField::default();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_form(&f, &mut rng);
            let b = random_form(&f, &mut rng);
            if !a.is_zero() {
                prop_assert_eq!(mult_matrix(&f, &a, n).rank(), graded_dim(n));
            }
            let sum = mult_matrix(&f, &a.add(&f, &b), n).to_dense();
            let parts = mult_matrix(&f, &a, n).to_dense().add(&mult_matrix(&f, &b, n).to_dense()).unwrap();
            prop_assert_eq!(sum, parts);
            let ab = mult_matrix(&f, &b, n + 1).to_dense().mul(&mult_matrix(&f, &a, n).to_dense()).unwrap();
            let ba = mult_matrix(&f, &a, n + 1).to_dense().mul(&mult_matrix(&f, &b, n).to_dense()).unwrap();
            prop_assert_eq!(ab, ba);
        }

        #[test]
        fn evaluation_is_homogeneous(seed in any::<u64>(), k in 1usize..4, deg in 0i64..5) {
            let base = PrimeField::default();
            let ext = ExtensionField::new(base, k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pt = [ext.random_elem(&mut rng), ext.random_elem(&mut rng), ext.random_elem(&mut rng)];
            prop_assume!(!pt.iter().all(|c| ext.is_zero(c)));
            let lambda = ext.random_elem(&mut rng);
            prop_assume!(!ext.is_zero(&lambda));
            let scaled = pt.clone().map(|c| ext.mul(&lambda, &c));

            let l = random_form(&base, &mut rng);
            let lhs = l.evaluate(&ext, &scaled).unwrap();
            let rhs = ext.mul(&lambda, &l.evaluate(&ext, &pt).unwrap());
            prop_assert_eq!(lhs, rhs);

            let coeffs = (0..graded_dim(deg)).map(|_| base.random(&mut rng)).collect();
            let h = HomogeneousPoly::new(deg, coeffs).unwrap();
            let lhs = h.evaluate(&ext, &scaled).unwrap();
            let rhs = ext.mul(&ext.pow(&lambda, deg as u128), &h.evaluate(&ext, &pt).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn block_matrix_with_single_copy_is_mult_matrix() {
        let f = PrimeField::default();
        let l = LinearForm::new(&f, [3, 0, 7]);
        for n in 0..5 {
            assert_eq!(block_mult_matrix(&f, 1, 1, n, |_, _| l), mult_matrix(&f, &l, n));
        }
        let _ = DenseMatrix::zeros(f, 1, 1);
    }
}
