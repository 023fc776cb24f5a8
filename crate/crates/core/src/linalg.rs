//! Exact linear algebra over Q and Z.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Solves `Σ_k z_k·columns[k] = rhs` over Q, setting free unknowns to zero.
/// Returns `None` if the system is inconsistent.
pub(crate) fn solve_columns(columns: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = rhs.len();
    let ncols = columns.len();
    // augmented row-major matrix
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row[c..=ncols].iter_mut().zip(&pivot[c..=ncols]) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut z = vec![BigRational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        z[c] = m[i][ncols].clone();
    }
    Some(z)
}

/// Determinant by fraction-free elimination.
pub(crate) fn determinant(m: &[Vec<i64>]) -> BigInt {
    let size = m.len();
    if size == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..size).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[size - 1][size - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn solves_and_detects_inconsistency() {
        // columns (1,1), (1,-1); rhs (3,1) -> z = (2,1)
        let cols = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert_eq!(solve_columns(&cols, &[q(3), q(1)]), Some(vec![q(2), q(1)]));
        let cols = vec![vec![q(1), q(2)]];
        assert_eq!(solve_columns(&cols, &[q(1), q(3)]), None);
        // free unknown set to zero
        let cols = vec![vec![q(1), q(0)], vec![q(0), q(0)]];
        assert_eq!(solve_columns(&cols, &[q(5), q(0)]), Some(vec![q(5), q(0)]));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![1, -2], vec![0, 1]]), BigInt::from(1));
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(determinant(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), BigInt::from(6));
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), BigInt::from(0));
        assert_eq!(
            determinant(&[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]),
            BigInt::from(-1)
        );
    }
}
