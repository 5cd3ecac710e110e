//! Gaussian elimination over a [`Field`]: exact for rationals, partially
//! pivoted with a relative rank tolerance for floats.

use crate::matrix::Matrix;
use crate::scalar::Field;

/// Relative tolerance below which a float pivot counts as zero.
pub const RANK_TOL: f64 = 1e-10;

fn is_negligible<T: Field>(v: &T, threshold: f64) -> bool {
    if T::is_exact() {
        v.is_zero()
    } else {
        v.to_f64().abs() <= threshold
    }
}

/// Reduced row echelon form and the pivot columns.
pub fn rref<T: Field>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let mut a = m.clone();
    let threshold = RANK_TOL * m.max_abs().max(1e-300);
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let candidate = if T::is_exact() {
            (r..rows).find(|&i| !a[(i, c)].is_zero())
        } else {
            (r..rows)
                .max_by(|&i, &j| {
                    a[(i, c)]
                        .to_f64()
                        .abs()
                        .partial_cmp(&a[(j, c)].to_f64().abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .filter(|&i| !is_negligible(&a[(i, c)], threshold))
        };
        let Some(p) = candidate else {
            if !T::is_exact() {
                for i in r..rows {
                    a[(i, c)] = T::zero();
                }
            }
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = T::one() / a[(r, c)].clone();
        for j in 0..cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
            }
            a[(i, c)] = T::zero();
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<T: Field>(m: &Matrix<T>) -> usize {
    rref(m).1.len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<T: Field>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let (r, pivots) = rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `a x = b`, or `None` when the system is inconsistent.
pub fn solve_any<T: Field>(a: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(a.rows(), b.len());
    let aug = Matrix::from_fn(a.rows(), a.cols() + 1, |i, j| {
        if j < a.cols() {
            a[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols()) {
        return None;
    }
    let mut x = vec![T::zero(); a.cols()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r[(row, a.cols())].clone();
    }
    Some(x)
}

/// Unique solution of a square system, `None` when singular.
pub fn solve<T: Field>(a: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert!(a.is_square());
    if rank(a) < a.rows() {
        return None;
    }
    solve_any(a, b)
}

pub fn inverse<T: Field>(a: &Matrix<T>) -> Option<Matrix<T>> {
    assert!(a.is_square());
    let n = a.rows();
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else if j - n == i {
            T::one()
        } else {
            T::zero()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
}

pub fn determinant<T: Field>(a: &Matrix<T>) -> T {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();
    let threshold = RANK_TOL * a.max_abs().max(1e-300);
    let mut det = T::one();
    for c in 0..n {
        let candidate = if T::is_exact() {
            (c..n).find(|&i| !m[(i, c)].is_zero())
        } else {
            (c..n)
                .max_by(|&i, &j| {
                    m[(i, c)]
                        .to_f64()
                        .abs()
                        .partial_cmp(&m[(j, c)].to_f64().abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .filter(|&i| !is_negligible(&m[(i, c)], threshold))
        };
        let Some(p) = candidate else {
            return T::zero();
        };
        if p != c {
            for j in 0..n {
                let tmp = m[(p, j)].clone();
                m[(p, j)] = m[(c, j)].clone();
                m[(c, j)] = tmp;
            }
            det = -det;
        }
        let pivot = m[(c, c)].clone();
        det = det * pivot.clone();
        for i in c + 1..n {
            if m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone() / pivot.clone();
            for j in c..n {
                m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
            }
        }
    }
    det
}

/// Classical adjoint (transpose of the cofactor matrix).
pub fn adjugate<T: Field>(a: &Matrix<T>) -> Matrix<T> {
    assert!(a.is_square());
    let n = a.rows();
    if n == 1 {
        return Matrix::identity(1);
    }
    if let Some(inv) = inverse(a) {
        return inv.scale(&determinant(a));
    }
    Matrix::from_fn(n, n, |i, j| {
        // adj(a)_ij = (-1)^{i+j} det(minor with row j and column i removed)
        let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
        let d = determinant(&a.submatrix(&rows, &cols));
        if (i + j) % 2 == 0 {
            d
        } else {
            -d
        }
    })
}

/// Whether `v` lies in the column space of `m`.
pub fn in_column_space<T: Field>(m: &Matrix<T>, v: &[T]) -> bool {
    solve_any(m, v).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Q::from_int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_and_nullspace() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        let prod = m.mul_vec(&ns[0]);
        assert!(prod.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn solve_and_inverse() {
        let a = qm(&[&[1, -1], &[0, 1]]);
        let x = solve(&a, &[Q::from_int(1), Q::from_int(1)]).unwrap();
        assert_eq!(x, vec![Q::from_int(2), Q::from_int(1)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(inverse(&qm(&[&[1, 1], &[1, 1]])).is_none());
    }

    #[test]
    fn inconsistent_system() {
        let a = qm(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
        assert!(solve_any(&a, &[Q::from_int(0), Q::from_int(0), Q::from_int(1)]).is_some());
        assert!(solve_any(&a, &[Q::from_int(1), Q::from_int(0), Q::from_int(0)]).is_none());
    }

    #[test]
    fn determinant_and_adjugate() {
        let a = qm(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(determinant(&a), Q::from_int(18));
        let adj = adjugate(&a);
        assert_eq!(a.mul(&adj), Matrix::identity(3).scale(&Q::from_int(18)));
        // singular: adj via cofactors, a * adj(a) = 0
        let s = qm(&[&[1, 1], &[1, 1]]);
        let adj = adjugate(&s);
        assert_eq!(adj, qm(&[&[1, -1], &[-1, 1]]));
        assert!(s.mul(&adj).is_zero());
    }

    #[test]
    fn float_rank_tolerates_roundoff() {
        let m = Matrix::<f64>::from_rows(vec![
            vec![1.0, 1.0 / 3.0],
            vec![3.0, 1.0 + 1e-17],
        ])
        .unwrap();
        assert_eq!(rank(&m), 1);
    }
}
