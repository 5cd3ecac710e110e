//! The equation `(λI − P)x = b`, `x ≥ 0`.
//!
//! Solvability is decided combinatorially: every class with access to
//! `supp(b)` must have radius below `λ`. The minimal solution lives on the
//! union of those classes and is obtained by a direct restricted solve.

use crate::classes::InitialSubset;
use crate::error::{Error, Result};
use crate::matrix::{max_abs, sub_vec, support, ConeVector, IndexSet, Matrix, NonnegMatrix};
use crate::oracle::eig::{block_spectrum, dominant_subspace, generalized_eigenspace};
use crate::scalar::{Field, SpectralPair};
use crate::spectral::{snap_nonneg, Analysis};
use crate::linalg::solve;

/// Which combinatorial condition decided a verdict.
pub const FIRED_G: &str = "g";

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport1<T> {
    pub solvable: bool,
    pub x0: Option<ConeVector<T>>,
    pub unique: bool,
    /// Distinguished classes of radius `λ`; their eigenvectors can be added
    /// to `x0`.
    pub eigen_freedom: Vec<usize>,
    pub fired_condition: &'static str,
    pub residual_norm: T,
    pub rho_b: T,
}

impl<T: Field> SolveReport1<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "solvable": self.solvable,
            "x0": self.x0.as_ref().map(|x| x.to_json()),
            "unique": self.unique,
            "eigen_freedom": self.eigen_freedom.iter().map(|c| c + 1).collect::<Vec<_>>(),
            "fired_condition": self.fired_condition,
            "residual_norm": self.residual_norm.to_json(),
            "rho_b": self.rho_b.to_json(),
        })
    }
}

pub(crate) fn require_positive<T: Field>(lambda: &T) -> Result<()> {
    if *lambda > T::zero() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("λ must be positive, got {lambda}")))
    }
}

pub(crate) fn require_len<T: Field>(an: &Analysis<T>, b: &ConeVector<T>) -> Result<()> {
    if b.len() == an.n() {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "vector has length {}, matrix has order {}",
            b.len(),
            an.n()
        )))
    }
}

pub fn solvable1<T: Field>(an: &Analysis<T>, lambda: &T, b: &ConeVector<T>) -> Result<bool> {
    require_positive(lambda)?;
    require_len(an, b)?;
    Ok(an.tol().eig_lt(&an.local_rho(b.entries()), lambda))
}

/// Solves `(λI − P_II) y = rhs_I` on `I` and extends by zero.
pub(crate) fn restricted_solve<T: Field>(
    p: &NonnegMatrix<T>,
    lambda: &T,
    set: &InitialSubset,
    rhs: &[T],
) -> Option<Vec<T>> {
    let idx = set.to_vec();
    let mut x = vec![T::zero(); p.n()];
    if idx.is_empty() {
        return Some(x);
    }
    let block = p.principal(&idx).matrix().neg().shift(&-lambda.clone());
    let local: Vec<T> = idx.iter().map(|&i| rhs[i].clone()).collect();
    let y = solve(&block, &local)?;
    for (&i, v) in idx.iter().zip(y) {
        x[i] = v;
    }
    Some(x)
}

/// `‖(λI − P)x − b‖_∞`.
pub fn residual1<T: Field>(p: &NonnegMatrix<T>, lambda: &T, x: &[T], b: &[T]) -> T {
    let lhs = sub_vec(
        &x.iter().map(|v| lambda.clone() * v.clone()).collect::<Vec<_>>(),
        &p.apply(x),
    );
    max_abs(&sub_vec(&lhs, b))
}

pub fn solve1<T: Field>(an: &Analysis<T>, lambda: &T, b: &ConeVector<T>) -> Result<SolveReport1<T>> {
    let solvable = solvable1(an, lambda, b)?;
    let rho_b = an.local_rho(b.entries());
    let eigen_freedom = an.taxonomy().distinguished_with(lambda);
    let unique = eigen_freedom.is_empty();
    if !solvable {
        return Ok(SolveReport1 {
            solvable,
            x0: None,
            unique,
            eigen_freedom,
            fired_condition: FIRED_G,
            residual_norm: T::zero(),
            rho_b,
        });
    }
    let set = an.classes().smallest_initial_superset(&b.support());
    let x = restricted_solve(an.matrix(), lambda, &set, b.entries()).ok_or_else(|| {
        Error::Inconsistency("restricted system singular although ρ_b < λ".into())
    })?;
    let x = snap_nonneg(x, an.tol());
    let residual_norm = residual1(an.matrix(), lambda, &x, b.entries());
    Ok(SolveReport1 {
        solvable,
        x0: Some(ConeVector::new(x)?),
        unique,
        eigen_freedom,
        fired_condition: FIRED_G,
        residual_norm,
        rho_b,
    })
}

/// `y_m = Σ_{j=0..m} λ^{−j−1} P^j b`.
pub fn neumann_partial<T: Field>(
    p: &NonnegMatrix<T>,
    lambda: &T,
    b: &ConeVector<T>,
    m: usize,
) -> Result<ConeVector<T>> {
    require_positive(lambda)?;
    let inv = T::one() / lambda.clone();
    let mut term: Vec<T> = b.entries().iter().map(|v| v.clone() * inv.clone()).collect();
    let mut sum = term.clone();
    for _ in 0..m {
        term = p.apply(&term).into_iter().map(|v| v * inv.clone()).collect();
        sum = sum.into_iter().zip(&term).map(|(s, t)| s + t.clone()).collect();
        if sum.iter().any(|v| !v.to_f64().is_finite()) {
            return Err(Error::Numeric("overflow in partial Neumann sum".into()));
        }
    }
    ConeVector::new(sum)
}

/// `I = {i : every class with access to i has radius < λ}`.
pub fn solvable_set1<T: Field>(an: &Analysis<T>, lambda: &T) -> Result<InitialSubset> {
    require_positive(lambda)?;
    let ca = an.classes();
    let set: IndexSet = (0..an.n())
        .filter(|&i| {
            ca.classes_with_access_to(&[ca.class_of(i)])
                .iter()
                .all(|&c| an.tol().eig_lt(an.radius(c), lambda))
        })
        .collect();
    Ok(ca.initial_subset(set).expect("access-closed set is initial"))
}

/// Verdicts for each equivalent condition; `None` marks a numeric
/// indeterminate excluded from the agreement check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionsReport {
    pub a: bool,
    pub b: Option<bool>,
    pub c: Option<bool>,
    pub d: Option<bool>,
    pub e: Option<bool>,
    pub f: Option<bool>,
    pub g: Option<bool>,
    pub h: Option<bool>,
    pub i: Option<bool>,
    pub j: Option<bool>,
}

impl ConditionsReport {
    fn entries(&self) -> [(&'static str, Option<bool>); 10] {
        [
            ("a", Some(self.a)),
            ("b", self.b),
            ("c", self.c),
            ("d", self.d),
            ("e", self.e),
            ("f", self.f),
            ("g", self.g),
            ("h", self.h),
            ("i", self.i),
            ("j", self.j),
        ]
    }

    /// Conditions whose decided verdict differs from (a).
    pub fn disagreements(&self) -> Vec<&'static str> {
        self.entries()
            .iter()
            .filter(|(_, v)| v.is_some_and(|v| v != self.a))
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .entries()
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
            .collect();
        serde_json::Value::Object(map)
    }
}

/// Iterates `t_j = (P/λ)^j b / λ`: `Some(true)` once the terms become
/// negligible against the partial sum, `Some(false)` once a term exceeds
/// `1e12·‖b‖`, `None` if neither happens within the iteration budget.
fn series_verdict<T: Field>(an: &Analysis<T>, lambda: f64, b: &[T]) -> Option<bool> {
    let p = an.matrix().to_f64();
    let bn = b.iter().fold(0.0f64, |m, v| m.max(v.to_f64().abs()));
    let mut term: Vec<f64> = b.iter().map(|v| v.to_f64() / lambda).collect();
    let mut sum = term.clone();
    for step in 0..an.tol().power_iters {
        let tn = term.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let sn = sum.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if tn == 0.0 || (step >= an.n() && tn <= 1e-15 * sn) {
            return Some(true);
        }
        if !tn.is_finite() || tn > 1e12 * bn {
            return Some(false);
        }
        term = p.apply(&term).into_iter().map(|v| v / lambda).collect();
        sum.iter_mut().zip(&term).for_each(|(s, t)| *s += t);
    }
    None
}

/// Float basis of the generalized eigenspaces of `Pᵀ` for eigenvalues of
/// modulus at least `λ`.
fn dominant_transpose_basis<T: Field>(an: &Analysis<T>, lambda: f64) -> Result<Option<Vec<Vec<f64>>>> {
    let spectrum = block_spectrum(an.matrix(), an.tol())?;
    let pt = an.matrix().to_f64().transpose();
    let margin = 1e-6 * lambda.abs().max(1.0);
    // A modulus inside (λ − 2·margin, λ) would be folded in wrongly.
    let straddles = spectrum
        .iter()
        .any(|z| z.norm() > lambda - 2.0 * margin && z.norm() < lambda - margin);
    Ok(dominant_subspace(pt.matrix(), &spectrum, lambda - margin * 2.0).filter(|_| !straddles))
}

/// Generalized eigenvectors of `Pᵀ` for the distinguished eigenvalues of
/// `P` that are at least `λ`, in the working field.
fn distinguished_transpose_basis<T: Field>(an: &Analysis<T>, lambda: &T) -> Vec<Vec<T>> {
    let pt: Matrix<T> = an.matrix().matrix().transpose();
    an.distinguished_eigenvalues()
        .iter()
        .filter(|mu| an.tol().eig_le(lambda, mu))
        .flat_map(|mu| generalized_eigenspace(&pt, mu))
        .collect()
}

pub fn conditions_report_3_1<T: Field>(
    an: &Analysis<T>,
    lambda: &T,
    b: &ConeVector<T>,
) -> Result<ConditionsReport> {
    require_positive(lambda)?;
    require_len(an, b)?;
    if b.is_zero() {
        return Err(Error::Precondition("conditions need b ≠ 0".into()));
    }
    let tol = an.tol();
    let ca = an.classes();
    let bv = b.entries();
    let supp = b.support();
    let lf = lambda.to_f64();

    let a = solvable1(an, lambda, b)?;
    let cond_b = tol.eig_lt(&an.local_rho(bv), lambda);
    let series = series_verdict(an, lf, bv);

    let (cond_e, cond_i) = match dominant_transpose_basis(an, lf)? {
        None => (None, None),
        Some(basis) => {
            let bn = bv.iter().fold(0.0f64, |m, v| m.max(v.to_f64().abs()));
            let orth = basis.iter().all(|z| {
                let zn = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let ip: f64 = z.iter().zip(bv).map(|(zi, bi)| zi * bi.to_f64()).sum();
                ip.abs() <= 1e-8 * bn.max(1.0) * zn.max(1.0)
            });
            let disjoint = basis.iter().all(|z| {
                let zn = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                supp.iter().all(|&i| z[i].abs() <= 1e-8 * zn.max(1.0))
            });
            (Some(orth), Some(disjoint))
        }
    };

    let dbasis = distinguished_transpose_basis(an, lambda);
    let cond_f = dbasis.iter().all(|z| {
        let ip = z
            .iter()
            .zip(bv)
            .fold(T::zero(), |s, (zi, bi)| s + zi.clone() * bi.clone());
        tol.is_zero(&ip)
    });
    let cond_j = dbasis
        .iter()
        .all(|z| supp.iter().all(|&i| tol.is_zero(&z[i])));

    let cond_g = an
        .accessing_classes(&supp)
        .iter()
        .all(|&c| tol.eig_lt(an.radius(c), lambda));
    let cond_h = an.taxonomy().distinguished_classes().iter().all(|&alpha| {
        tol.eig_lt(an.radius(alpha), lambda)
            || ca
                .classes_accessed_from(&[alpha])
                .iter()
                .all(|&beta| ca.class(beta).iter().all(|&v| bv[v].is_zero()))
    });

    let report = ConditionsReport {
        a,
        b: Some(cond_b),
        c: series,
        d: series,
        e: cond_e,
        f: Some(cond_f),
        g: Some(cond_g),
        h: Some(cond_h),
        i: cond_i,
        j: Some(cond_j),
    };
    let bad = report.disagreements();
    if bad.is_empty() {
        Ok(report)
    } else {
        Err(Error::Inconsistency(format!(
            "conditions {bad:?} disagree with the solvability verdict {a}"
        )))
    }
}

/// `ρ_x = ρ_b` for the minimal solution and `ρ_x = λ` for any other one.
pub fn expected_solution_pair<T: Field>(
    an: &Analysis<T>,
    lambda: &T,
    b: &[T],
    x: &[T],
    x0: &[T],
) -> bool {
    let rho_x = an.local_rho(x);
    if support(x) == support(x0) && sub_vec(x, x0).iter().all(|v| an.tol().is_zero(v)) {
        an.tol().eig_eq(&rho_x, &an.local_rho(b))
    } else {
        an.tol().eig_eq(&rho_x, lambda)
    }
}

/// Spectral pair of the minimal solution, which coincides with that of `b`
/// in radius.
pub fn solution_pair<T: Field>(an: &Analysis<T>, report: &SolveReport1<T>) -> Option<SpectralPair<T>> {
    report.x0.as_ref().map(|x| an.ord_and_pair(x.entries()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Tolerance};

    fn an(rows: &[&[i64]]) -> Analysis<Rational> {
        Analysis::new(&NonnegMatrix::from_ints(rows).unwrap(), &Tolerance::default()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn v(x: &[i64]) -> ConeVector<Rational> {
        ConeVector::from_ints(x).unwrap()
    }

    #[test]
    fn diagonal_counterexample_is_unsolvable() {
        let a = an(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        let b = v(&[0, 0, 1]);
        assert!(!solvable1(&a, &q(1, 1), &b).unwrap());
        let r = solve1(&a, &q(1, 1), &b).unwrap();
        assert_eq!(r.rho_b, q(2, 1));
        assert!(r.x0.is_none());
        let c = conditions_report_3_1(&a, &q(1, 1), &b).unwrap();
        assert!(!c.a && c.g == Some(false) && c.h == Some(false) && c.j == Some(false));
        assert_eq!(c.c, Some(false));
    }

    #[test]
    fn triangular_examples() {
        let a = an(&[&[1, 1], &[0, 1]]);
        let r = solve1(&a, &q(2, 1), &v(&[1, 1])).unwrap();
        assert_eq!(r.x0.unwrap().entries(), &[q(2, 1), q(1, 1)]);
        assert!(r.unique);
        assert_eq!(r.residual_norm, q(0, 1));

        let a = an(&[&[2, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let r = solve1(&a, &q(3, 1), &v(&[1, 1, 1])).unwrap();
        assert_eq!(r.x0.unwrap().entries(), &[q(3, 2), q(1, 2), q(1, 2)]);
        let r = solve1(&a, &q(3, 2), &v(&[0, 0, 1])).unwrap();
        assert!(r.solvable);
        assert_eq!(r.x0.unwrap().entries(), &[q(0, 1), q(0, 1), q(2, 1)]);
        assert_eq!(
            solvable_set1(&a, &q(3, 2)).unwrap().to_vec(),
            vec![2]
        );
        assert_eq!(solvable_set1(&a, &q(3, 1)).unwrap().len(), 3);
        assert!(solvable_set1(&a, &q(1, 1)).unwrap().is_empty());
    }

    #[test]
    fn zero_matrix_and_zero_rhs() {
        let a = an(&[&[0, 0], &[0, 0]]);
        let r = solve1(&a, &q(1, 1), &v(&[1, 0])).unwrap();
        assert_eq!(r.x0.unwrap().entries(), &[q(1, 1), q(0, 1)]);
        let c = conditions_report_3_1(&a, &q(1, 1), &v(&[1, 0])).unwrap();
        assert!(c.disagreements().is_empty() && c.a);
        let r = solve1(&a, &q(1, 1), &v(&[0, 0])).unwrap();
        assert!(r.solvable && r.x0.unwrap().is_zero());
        assert!(conditions_report_3_1(&a, &q(1, 1), &v(&[0, 0])).is_err());
    }

    #[test]
    fn all_conditions_true_below() {
        let a = an(&[&[2, 0], &[1, 1]]);
        let c = conditions_report_3_1(&a, &q(3, 1), &v(&[1, 1])).unwrap();
        assert_eq!(c.b, Some(true));
        assert_eq!(c.c, Some(true));
        assert_eq!(c.e, Some(true));
        assert_eq!(c.i, Some(true));
        assert_eq!(c.f, Some(true));
    }

    #[test]
    fn distinguished_lambda_gives_freedom() {
        // class {2} has radius 1 and is distinguished; b on vertex 1 only
        let a = an(&[&[0, 1], &[0, 1]]);
        let r = solve1(&a, &q(1, 1), &v(&[1, 0])).unwrap();
        assert!(r.solvable && !r.unique);
        assert_eq!(r.eigen_freedom, vec![1]);
    }

    #[test]
    fn neumann_partial_sums() {
        let p = NonnegMatrix::<Rational>::from_ints(&[&[1, 1], &[0, 1]]).unwrap();
        let b = v(&[1, 1]);
        assert_eq!(
            neumann_partial(&p, &q(2, 1), &b, 0).unwrap().entries(),
            &[q(1, 2), q(1, 2)]
        );
        let pf = p.to_f64();
        let bf = ConeVector::new(vec![1.0, 1.0]).unwrap();
        let y = neumann_partial(&pf, &2.0, &bf, 200).unwrap();
        assert!((y.entries()[0] - 2.0).abs() < 1e-9 && (y.entries()[1] - 1.0).abs() < 1e-9);
        assert!(solvable1(&a_lambda_zero(), &q(0, 1), &b).is_err());
    }

    fn a_lambda_zero() -> Analysis<Rational> {
        an(&[&[1, 0], &[0, 1]])
    }
}
