//! LP formulations shared by the solvers and the property suites.
//!
//! Inputs in either numeric mode are converted to exact rationals first
//! (every binary64 value is a rational), so verdicts are always exact for the
//! data as represented.

use crate::error::{Error, Result};
use crate::matrix::{IndexSet, Matrix};
use crate::oracle::lp::{LpOutcome, LpProblem};
use crate::scalar::{Field, Rational};

pub fn rational<T: Field>(v: &T) -> Result<Rational> {
    v.to_rational()
        .ok_or_else(|| Error::Numeric(format!("{v} has no exact rational value")))
}

pub fn rational_vec<T: Field>(v: &[T]) -> Result<Vec<Rational>> {
    v.iter().map(rational).collect()
}

pub fn rational_matrix<T: Field>(m: &Matrix<T>) -> Result<Matrix<Rational>> {
    let rows = m
        .to_rows()
        .iter()
        .map(|r| rational_vec(r))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

fn zero_outside(lp: &mut LpProblem, allowed: &IndexSet) {
    let n = lp.nvars();
    for i in (0..n).filter(|i| !allowed.contains(i)) {
        let mut row = vec![Rational::zero(); n];
        row[i] = Rational::one();
        lp.add_eq(row, Rational::zero());
    }
}

/// Some `x ≥ 0` with `a x = b` (and `supp(x) ⊆ allowed` when given).
pub fn nonneg_solution(
    a: &Matrix<Rational>,
    b: &[Rational],
    allowed: Option<&IndexSet>,
) -> Result<Option<Vec<Rational>>> {
    let mut lp = LpProblem::new(a.cols());
    for (i, rhs) in b.iter().enumerate() {
        lp.add_eq(a.row(i).to_vec(), rhs.clone());
    }
    if let Some(s) = allowed {
        zero_outside(&mut lp, s);
    }
    Ok(lp.feasible()?.witness)
}

/// Whether `x0` is the only `x ≥ 0` with `a x = b`: every coordinate is
/// pinned both from above and from below.
pub fn unique_nonneg_solution(
    a: &Matrix<Rational>,
    b: &[Rational],
    x0: &[Rational],
) -> Result<bool> {
    let n = a.cols();
    let mut lp = LpProblem::new(n);
    for (i, rhs) in b.iter().enumerate() {
        lp.add_eq(a.row(i).to_vec(), rhs.clone());
    }
    for i in 0..n {
        for sign in [Rational::one(), -Rational::one()] {
            let mut c = vec![Rational::zero(); n];
            c[i] = sign.clone();
            match lp.maximize(&c)? {
                LpOutcome::Optimal { value, .. } if value == sign.clone() * x0[i].clone() => {}
                LpOutcome::Infeasible => {
                    return Err(Error::Inconsistency(
                        "uniqueness probe on an infeasible system".into(),
                    ))
                }
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// `{i : ∃x ≥ 0, Σx = 1, a x ≥ 0, (a x)_i > 0}`: the union of supports of
/// `a R^n_+ ∩ R^n_+`.
pub fn image_face(a: &Matrix<Rational>) -> Result<IndexSet> {
    let n = a.cols();
    let mut lp = LpProblem::new(n);
    for i in 0..a.rows() {
        lp.add_ge(a.row(i).to_vec(), Rational::zero());
    }
    lp.normalize();
    let mut found = IndexSet::new();
    for i in 0..a.rows() {
        if found.contains(&i) {
            continue;
        }
        match lp.maximize(a.row(i))? {
            LpOutcome::Optimal { value, x } if value > Rational::zero() => {
                let y = a.mul_vec(&x);
                found.extend((0..a.rows()).filter(|&k| y[k] > Rational::zero()));
            }
            LpOutcome::Unbounded => unreachable!("normalized problem is bounded"),
            _ => {}
        }
    }
    Ok(found)
}

/// Whether some `x > 0` satisfies `a x ≤ 0`, found through the homogeneous
/// scaling `x = 1 + z`, `z ≥ 0`.
pub fn positive_vector_with_nonpositive_image(a: &Matrix<Rational>) -> Result<Option<Vec<Rational>>> {
    let n = a.cols();
    let mut lp = LpProblem::new(n);
    for i in 0..a.rows() {
        let shift: Rational = a.row(i).iter().cloned().fold(Rational::zero(), |s, v| s + v);
        lp.add_le(a.row(i).to_vec(), -shift);
    }
    Ok(lp
        .feasible()?
        .witness
        .map(|z| z.into_iter().map(|v| v + Rational::one()).collect()))
}

/// Whether some `x ≥ 0`, `Σx = 1`, `kernel x = 0` has `image x ≠ 0`, probed
/// one sign and coordinate at a time.
pub fn kernel_vector_with_nonzero_image(
    kernel: &Matrix<Rational>,
    image: &Matrix<Rational>,
) -> Result<bool> {
    let n = kernel.cols();
    let mut lp = LpProblem::new(n);
    for i in 0..kernel.rows() {
        lp.add_eq(kernel.row(i).to_vec(), Rational::zero());
    }
    lp.normalize();
    for i in 0..image.rows() {
        for sign in [Rational::one(), -Rational::one()] {
            let c: Vec<Rational> = image.row(i).iter().map(|v| v.clone() * sign.clone()).collect();
            if lp.can_be_positive(&c)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Whether some nonzero `x ≥ 0` has `a x ≥ ω x`.
pub fn omega_feasible(p: &Matrix<Rational>, omega: &Rational) -> Result<bool> {
    let mut lp = LpProblem::new(p.cols());
    let shifted = p.shift(omega);
    for i in 0..shifted.rows() {
        lp.add_ge(shifted.row(i).to_vec(), Rational::zero());
    }
    lp.normalize();
    Ok(lp.feasible()?.feasible)
}

/// Whether some `x > 0` has `a x ≥ ω x`, through `x = 1 + z`.
pub fn omega1_feasible(p: &Matrix<Rational>, omega: &Rational) -> Result<Option<Vec<Rational>>> {
    positive_vector_with_nonpositive_image(&p.shift(omega).neg())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap()
    }

    fn set(v: &[usize]) -> IndexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn image_face_examples() {
        // P = [[1,1],[0,1]], λ = 1: (P − I)x = (x2, 0)
        assert_eq!(image_face(&qm(&[&[0, 1], &[0, 0]])).unwrap(), set(&[0]));
        // λ > ρ: nothing
        assert_eq!(image_face(&qm(&[&[-1, 1], &[0, -1]])).unwrap(), set(&[]));
    }

    #[test]
    fn restricted_and_unique_solutions() {
        let a = qm(&[&[0, 0], &[1, -1]]);
        let b = [q(0), q(1)];
        assert!(nonneg_solution(&a, &b, None).unwrap().is_some());
        assert!(nonneg_solution(&a, &b, Some(&set(&[1]))).unwrap().is_none());
        let id = qm(&[&[1, 0], &[0, 1]]);
        assert!(unique_nonneg_solution(&id, &b, &b).unwrap());
        assert!(!unique_nonneg_solution(&a, &b, &[q(1), q(0)]).unwrap());
    }

    #[test]
    fn positive_subinvariant_vectors() {
        // P = I, ρ = 1: x = 1 works
        let zero = qm(&[&[0, 0], &[0, 0]]);
        assert!(positive_vector_with_nonpositive_image(&zero).unwrap().is_some());
        // P = [[1,1],[0,1]]: (P − I)x = (x2, 0) ≤ 0 forces x2 = 0
        let a = qm(&[&[0, 1], &[0, 0]]);
        assert!(positive_vector_with_nonpositive_image(&a).unwrap().is_none());
    }

    #[test]
    fn generalized_kernel_probe() {
        // (I − J)^2 = 0 but (I − J) e2 ≠ 0
        let b = qm(&[&[0, -1], &[0, 0]]);
        assert!(kernel_vector_with_nonzero_image(&b.mul(&b), &b).unwrap());
        let z = qm(&[&[0, 0], &[0, 0]]);
        assert!(!kernel_vector_with_nonzero_image(&z, &z).unwrap());
    }
}
