//! Independent cross-check for the counting search.
//!
//! Exact rational Gaussian elimination over the rows. The search never calls
//! into this module; it exists so tests can compare the two.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::IntMatrix;

/// Rank of `X` over the rationals.
pub fn rational_rank(x: &IntMatrix) -> usize {
    let mut rows: Vec<Vec<BigRational>> = (0..x.rows())
        .map(|i| {
            x.row(i)
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..x.cols() {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = BigRational::one() / rows[rank][col].clone();
        let pivot_row: Vec<BigRational> = rows[rank].iter().map(|v| v * &inv).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// True iff the only rational `τ` with `τᵀX = 0` is zero, i.e. the rows are
/// linearly independent.
pub fn oracle_nullspace_trivial(x: &IntMatrix) -> bool {
    rational_rank(x) == x.rows()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fano_rows_are_independent() {
        let x = crate::generators::projective_plane(2)
            .unwrap()
            .build_incidence()
            .to_int_matrix();
        assert!(oracle_nullspace_trivial(&x));
    }

    #[test]
    fn dependent_rows() {
        let x = IntMatrix::from_rows(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert!(!oracle_nullspace_trivial(&x));
        assert_eq!(rational_rank(&x), 2);
    }

    #[test]
    fn empty_row_set_is_trivial() {
        assert!(oracle_nullspace_trivial(&IntMatrix::zeros(0, 3)));
        assert!(!oracle_nullspace_trivial(&IntMatrix::zeros(1, 3)));
    }
}
