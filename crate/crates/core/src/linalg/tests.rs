use super::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fraction-free elimination: rows are combined as `piv * row - lead * pivot_row`,
/// so no inverses are taken. Kept independent of the kernels under test.
fn oracle_rank(m: &DenseMatrix) -> usize {
    let p = u64::from(m.field().modulus());
    let mut a: Vec<Vec<u64>> = (0..m.rows()).map(|i| m.row(i).iter().map(|&v| u64::from(v)).collect()).collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(pr) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, pr);
        let pivot = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            let lead = row[c];
            if lead == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&pivot) {
                *x = (pivot[c] * *x % p + (p - lead) * y % p) % p;
            }
        }
        rank += 1;
    }
    rank
}

fn random_dense(field: PrimeField, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    DenseMatrix::from_fn(field, rows, cols, |_, _| field.random(rng))
}

/// A `rows x cols` matrix of rank at most `k`, as a product of random factors.
fn planted_rank(field: PrimeField, rows: usize, cols: usize, k: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let left = random_dense(field, rows, k, rng);
    let right = random_dense(field, k, cols, rng);
    left.mul(&right).unwrap()
}

fn random_column_sparse(field: PrimeField, rows: usize, cols: usize, per_col: usize, rng: &mut ChaCha8Rng) -> SparseMatrix {
    let mut m = SparseMatrix::zeros(field, rows, cols);
    for j in 0..cols {
        for _ in 0..per_col {
            let i = rng.random_range(0..rows);
            m.add_at(i, j, field.random(rng));
        }
    }
    m
}

#[test]
fn rank_examples() {
    let f = PrimeField::default();
    assert_eq!(DenseMatrix::identity(f, 5).rank(), 5);
    assert_eq!(DenseMatrix::zeros(f, 4, 7).rank(), 0);
    assert_eq!(DenseMatrix::zeros(f, 0, 7).rank(), 0);
    assert_eq!(DenseMatrix::identity(f, 5).to_sparse().rank(), 5);
    assert_eq!(SparseMatrix::zeros(f, 4, 7).rank(), 0);
}

#[test]
fn random_50_by_50_matches_fraction_free_oracle() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..10 {
        let m = random_dense(f, 50, 50, &mut rng);
        let expected = oracle_rank(&m);
        assert_eq!(m.rank(), expected);
        assert_eq!(m.to_sparse().rank(), expected);
    }
}

#[test]
fn planted_ranks_across_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in [7u32, 32003, 2147483629] {
        let f = PrimeField::new(p).unwrap();
        for &(r, c, k) in &[(30, 80, 17), (130, 70, 64), (200, 200, 131), (65, 65, 65), (1, 9, 1)] {
            let m = planted_rank(f, r, c, k, &mut rng);
            let expected = oracle_rank(&m);
            if p != 7 {
                assert_eq!(expected, k, "planted rank survives at p={p}");
            }
            assert_eq!(m.rank(), expected, "dense p={p} {r}x{c}");
            assert_eq!(m.to_sparse().rank(), expected, "sparse p={p} {r}x{c}");
            assert_eq!(m.transpose().rank(), expected);
        }
    }
}

#[test]
fn banded_matrices_stay_sparse_and_agree() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (rows, cols, width) = (900, 1000, 40);
    let mut m = SparseMatrix::zeros(f, rows, cols);
    for i in 0..rows {
        let start = i * (cols - width) / rows;
        for _ in 0..6 {
            let j = start + rng.random_range(0..width);
            m.add_at(i, j, f.random(&mut rng));
        }
    }
    let dense = m.to_dense();
    assert_eq!(m.rank(), oracle_rank(&dense));
    assert_eq!(dense.rank(), oracle_rank(&dense));
}

#[test]
fn dense_and_sparse_paths_agree_up_to_2000() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2000);
    for &(r, c) in &[(10, 10), (300, 200), (200, 300), (1000, 1000), (2000, 2000)] {
        let m = random_column_sparse(f, r, c, 3, &mut rng);
        let dense_rank = m.to_dense().rank();
        assert_eq!(m.rank(), dense_rank, "{r}x{c}");
        assert_eq!(m.transpose().rank(), dense_rank);
    }
}

#[test]
fn kernel_examples() {
    let f = PrimeField::default();
    assert!(kernel_basis(&DenseMatrix::identity(f, 4).into()).is_empty());
    let zero: MatrixFp = DenseMatrix::zeros(f, 3, 3).into();
    let ker = kernel_basis(&zero);
    assert_eq!(ker.len(), 3);
    let span = DenseMatrix::from_fn(f, 3, 3, |i, j| ker[i][j]);
    assert_eq!(span.rank(), 3);
}

#[test]
fn kernel_vectors_are_annihilated() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let m = planted_rank(f, 20, 35, 12, &mut rng);
    let ker = kernel_basis(&m.clone().into());
    assert_eq!(ker.len(), 35 - 12);
    for v in &ker {
        assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
    }
    let span = DenseMatrix::from_fn(f, ker.len(), 35, |i, j| ker[i][j]);
    assert_eq!(span.rank(), ker.len());
}

#[test]
fn solve_affine_examples() {
    let f = PrimeField::default();
    let b: Vec<FieldElement> = [3u64, 1, 4, 1].iter().map(|&v| f.elem(v)).collect();
    let id: MatrixFp = DenseMatrix::identity(f, 4).into();
    assert_eq!(
        solve_affine(&id, &b).unwrap(),
        AffineSolution::Consistent { particular: b.clone(), null_dim: 0 }
    );
    let zero: MatrixFp = DenseMatrix::zeros(f, 4, 2).into();
    assert_eq!(solve_affine(&zero, &b).unwrap(), AffineSolution::Inconsistent);
    assert!(matches!(solve_affine(&id, &b[..3]), Err(LinalgError::DimensionMismatch(_))));
}

#[test]
fn solve_affine_random_consistent_system() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let a = random_dense(f, 20, 30, &mut rng);
    let x0: Vec<FieldElement> = (0..30).map(|_| f.random(&mut rng)).collect();
    let b = a.mul_vec(&x0).unwrap();
    match solve_affine(&a.clone().into(), &b).unwrap() {
        AffineSolution::Consistent { particular, null_dim } => {
            assert_eq!(a.mul_vec(&particular).unwrap(), b);
            assert_eq!(null_dim, 30 - a.rank());
        }
        AffineSolution::Inconsistent => panic!("constructed system must be consistent"),
    }
}

#[test]
fn mixing_moduli_is_rejected() {
    let a = DenseMatrix::identity(PrimeField::new(7).unwrap(), 2);
    let b = DenseMatrix::identity(PrimeField::new(11).unwrap(), 2);
    assert_eq!(a.mul(&b), Err(LinalgError::ModulusMismatch(7, 11)));
    assert_eq!(a.add(&b), Err(LinalgError::ModulusMismatch(7, 11)));
}

#[test]
fn sparse_accumulates_and_cancels() {
    let f = PrimeField::new(7).unwrap();
    let mut m = SparseMatrix::zeros(f, 2, 2);
    m.add_at(0, 1, f.elem(3));
    m.add_at(0, 1, f.elem(4));
    m.add_at(1, 0, f.elem(5));
    assert_eq!(m.nnz(), 1);
    assert_eq!(m.get(1, 0).value(), 5);
    assert_eq!(m.transpose().get(0, 1).value(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn rank_is_transpose_invariant(seed in any::<u64>(), r in 1usize..40, c in 1usize..40, k in 0usize..40) {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = planted_rank(f, r, c, k.max(1), &mut rng);
        let rk = m.rank();
        prop_assert!(rk <= r.min(c));
        prop_assert_eq!(rk, m.transpose().rank());
        prop_assert_eq!(rk, oracle_rank(&m));
        prop_assert_eq!(rk, m.to_sparse().rank());
    }

    #[test]
    fn kernel_dimension_is_cols_minus_rank(seed in any::<u64>(), r in 1usize..25, c in 1usize..25) {
        let f = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_dense(f, r, c, &mut rng);
        let ker = kernel_basis(&m.clone().into());
        prop_assert_eq!(ker.len(), c - m.rank());
        for v in &ker {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }
}
