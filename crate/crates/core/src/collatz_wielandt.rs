//! Collatz–Wielandt numbers and sets of a nonnegative matrix, attainment of
//! their extrema, and the eigenvector decompositions tied to them.

use crate::classes::InitialSubset;
use crate::eq_type1::restricted_solve;
use crate::eq_type2::solvable_face_probe;
use crate::error::{Error, Result};
use crate::matrix::{add_vec, sub_vec, support, ConeVector, IndexSet};
use crate::oracle::eig::decompose_generalized;
use crate::oracle::poly::peripheral_orders;
use crate::oracle::queries::{
    kernel_vector_with_nonzero_image, omega1_feasible, positive_vector_with_nonpositive_image,
    rational, rational_matrix, rational_vec,
};
use crate::scalar::Field;
use crate::spectral::{snap_nonneg, Analysis};

/// Upper Collatz–Wielandt number: finite exactly when `supp(x)` spans a
/// `P`-invariant face.
#[derive(Debug, Clone, PartialEq)]
pub enum Upper<T> {
    Finite(T),
    Infinite,
}

impl<T: Field> Upper<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Upper::Finite(v) => Some(v),
            Upper::Infinite => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Upper::Finite(v) => v.to_json(),
            Upper::Infinite => serde_json::json!("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CwReport<T> {
    pub r_lower: T,
    pub r_upper: Upper<T>,
    pub rho_x: T,
}

impl<T: Field> CwReport<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "r_lower": self.r_lower.to_json(),
            "R_upper": self.r_upper.to_json(),
            "rho_x": self.rho_x.to_json(),
        })
    }
}

fn require_nonzero<T: Field>(an: &Analysis<T>, x: &ConeVector<T>) -> Result<()> {
    crate::eq_type1::require_len(an, x)?;
    if x.is_zero() {
        Err(Error::Precondition("x must be nonzero".into()))
    } else {
        Ok(())
    }
}

pub fn cw_numbers<T: Field>(an: &Analysis<T>, x: &ConeVector<T>) -> Result<CwReport<T>> {
    require_nonzero(an, x)?;
    let xv = x.entries();
    let px = an.matrix().apply(xv);
    let supp = x.support();
    let ratios: Vec<T> = supp.iter().map(|&i| px[i].clone() / xv[i].clone()).collect();
    let r_lower = ratios.iter().cloned().reduce(T::min_of).expect("x ≠ 0");
    let r_upper = if support(&px).is_subset(&supp) {
        Upper::Finite(ratios.into_iter().reduce(T::max_of).expect("x ≠ 0"))
    } else {
        Upper::Infinite
    };
    Ok(CwReport { r_lower, r_upper, rho_x: an.local_rho(xv) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CwSets<T> {
    pub sup_omega: T,
    pub inf_sigma: T,
    pub sup_omega1: T,
    pub inf_sigma1: T,
    pub inf_sigma1_attained: bool,
    /// Outcome of the LP search for `x > 0` with `Px ≥ (sup Ω1)·x`; `None`
    /// outside rational mode.
    pub sup_omega1_witness: Option<bool>,
}

impl<T: Field> CwSets<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sup_omega": self.sup_omega.to_json(),
            "inf_sigma": self.inf_sigma.to_json(),
            "sup_omega1": self.sup_omega1.to_json(),
            "sup_omega1_attained": true,
            "sup_omega1_witness_found": self.sup_omega1_witness,
            "inf_sigma1": self.inf_sigma1.to_json(),
            "inf_sigma1_attained": self.inf_sigma1_attained,
        })
    }
}

pub fn cw_sets<T: Field>(an: &Analysis<T>) -> Result<CwSets<T>> {
    let tax = an.taxonomy();
    let least = |flags: &[bool]| {
        (0..flags.len())
            .filter(|&c| flags[c])
            .map(|c| an.radius(c).clone())
            .reduce(T::min_of)
            .unwrap_or_else(T::zero)
    };
    let sup_omega1 = least(&tax.distinguished_for_transpose);
    let sup_omega1_witness = if T::is_exact() {
        let p = rational_matrix(an.matrix().matrix())?;
        Some(omega1_feasible(&p, &rational(&sup_omega1)?)?.is_some())
    } else {
        None
    };
    Ok(CwSets {
        sup_omega: an.rho().clone(),
        inf_sigma: least(&tax.distinguished),
        sup_omega1,
        inf_sigma1: an.rho().clone(),
        inf_sigma1_attained: rho_in_sigma1(an)?,
        sup_omega1_witness,
    })
}

/// `(I1, I2)`: classes with access to a distinguished basic class, and
/// classes with no access from any basic class. Their union is everything
/// exactly when `ρ(P) ∈ Σ1`.
pub fn sigma1_faces<T: Field>(an: &Analysis<T>) -> (InitialSubset, InitialSubset) {
    let ca = an.classes();
    let tax = an.taxonomy();
    let dist_basic: Vec<usize> = tax
        .basic_classes()
        .into_iter()
        .filter(|&c| tax.distinguished[c])
        .collect();
    let i1 = an.initial_over(&dist_basic);
    let below_basic = ca.classes_accessed_from(&tax.basic_classes());
    let free: Vec<usize> = (0..ca.num_classes()).filter(|c| !below_basic.contains(c)).collect();
    let i2 = ca
        .initial_subset(ca.union_of(&free))
        .expect("complement of an accessed-from set is initial");
    (i1, i2)
}

/// Whether `ρ(P) ∈ Σ1`: every basic class is final.
pub fn rho_in_sigma1<T: Field>(an: &Analysis<T>) -> Result<bool> {
    let tax = an.taxonomy();
    let verdict = tax.basic_classes().iter().all(|&c| tax.final_class[c]);
    let (i1, i2) = sigma1_faces(an);
    let covered = i1.indices().union(i2.indices()).count() == an.n();
    if verdict != covered {
        return Err(Error::Inconsistency(format!(
            "basic-final test says {verdict}, face cover says {covered}"
        )));
    }
    Ok(verdict)
}

/// Exact LP: some `x > 0` with `Px ≤ ρ(P)x`.
pub fn rho_in_sigma1_lp<T: Field>(an: &Analysis<T>) -> Result<bool> {
    let p = rational_matrix(an.matrix().matrix())?;
    let rho = rational(an.rho())?;
    Ok(positive_vector_with_nonpositive_image(&p.shift(&rho))?.is_some())
}

/// `x = x1 + x2` with `Px1 = ρ_x x1` and `ρ_{x2} < ρ_x`, available when
/// `R(x) = ρ_x`.
pub fn decompose_5_4<T: Field>(an: &Analysis<T>, x: &ConeVector<T>) -> Result<(ConeVector<T>, ConeVector<T>)> {
    require_nonzero(an, x)?;
    let tol = an.tol();
    let xv = x.entries();
    let rho = an.local_rho(xv);
    let b: Vec<T> = sub_vec(
        &xv.iter().map(|v| rho.clone() * v.clone()).collect::<Vec<_>>(),
        &an.matrix().apply(xv),
    );
    if b.iter().any(|v| v.is_negative() && !tol.is_zero(v)) {
        return Err(Error::Precondition("R_A(x) > ρ_x(A)".into()));
    }
    let b = snap_nonneg(b, tol);
    let x2 = split_off(an, &rho, &b)?;
    let x1 = snap_nonneg(sub_vec(xv, &x2), tol);
    Ok((ConeVector::new(x1)?, ConeVector::new(x2)?))
}

/// The minimal solution of `(ρ I − P)y = b` (zero when `b = 0`).
fn split_off<T: Field>(an: &Analysis<T>, rho: &T, b: &[T]) -> Result<Vec<T>> {
    let set = an.classes().smallest_initial_superset(&support(b));
    let y = restricted_solve(an.matrix(), rho, &set, b).ok_or_else(|| {
        Error::Inconsistency("remainder system singular at ρ_x".into())
    })?;
    Ok(snap_nonneg(y, an.tol()))
}

/// `x = x1 − x2` with `Px1 = ρ_x x1`, `x2 ≥ 0` and `ρ_{x2} < ρ_x`, available
/// when `ord(x) = 1` and `r(x) = ρ_x`.
pub fn decompose_5_13<T: Field>(an: &Analysis<T>, x: &ConeVector<T>) -> Result<(ConeVector<T>, ConeVector<T>)> {
    require_nonzero(an, x)?;
    let tol = an.tol();
    let xv = x.entries();
    let sp = an.ord_and_pair(xv);
    let b: Vec<T> = sub_vec(
        &an.matrix().apply(xv),
        &xv.iter().map(|v| sp.rho.clone() * v.clone()).collect::<Vec<_>>(),
    );
    if sp.ord != 1 || b.iter().any(|v| v.is_negative() && !tol.is_zero(v)) {
        return Err(Error::Precondition("needs ord(x) = 1 and r_A(x) = ρ_x(A)".into()));
    }
    let b = snap_nonneg(b, tol);
    let x2 = split_off(an, &sp.rho, &b)?;
    let x1 = add_vec(xv, &x2);
    Ok((ConeVector::new(x1)?, ConeVector::new(x2)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Check511 {
    pub a: bool,
    pub b: bool,
    pub c: bool,
}

impl Check511 {
    pub fn agree(&self) -> bool {
        self.a == self.b && self.b == self.c
    }
}

/// The three conditions: `ρ(P) ∈ Σ1(Pᵀ)`; nonnegative generalized
/// eigenvectors for `ρ` are eigenvectors and no smaller distinguished
/// eigenvalue lives on their face; `R^n_+ ∩ (P − ρI)R^n_+ = {0}`.
pub fn check_5_11<T: Field>(an: &Analysis<T>) -> Result<Check511> {
    if !T::is_exact() {
        return Err(Error::Precondition("the LP conditions need rational mode".into()));
    }
    let tax = an.taxonomy();
    let a = tax.basic_classes().iter().all(|&c| tax.initial_class[c]);

    let p = rational_matrix(an.matrix().matrix())?;
    let rho = rational(an.rho())?;
    let shifted = p.shift(&rho).neg();
    let generalized_only = !kernel_vector_with_nonzero_image(&shifted.pow(an.n()), &shifted)?;
    let (i1, _) = sigma1_faces(an);
    let ca = an.classes();
    let lower_on_face = tax.distinguished_classes().iter().any(|&c| {
        i1.contains(ca.class(c)[0]) && an.tol().eig_lt(an.radius(c), an.rho())
    });
    let b = generalized_only && !lower_on_face;

    let c = solvable_face_probe(an.matrix(), an.rho())?.is_empty();
    Ok(Check511 { a, b, c })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Boundary<T> {
    pub b: ConeVector<T>,
    pub on_boundary: bool,
    pub strict_iff: bool,
}

/// `b = (R(x)I − P)x` lies on the relative boundary of the face of `x`, and
/// generates it as an invariant face exactly when `ρ_x < R(x)`.
pub fn boundary_5_2<T: Field>(an: &Analysis<T>, x: &ConeVector<T>) -> Result<Boundary<T>> {
    let cw = cw_numbers(an, x)?;
    let r = cw
        .r_upper
        .finite()
        .ok_or_else(|| Error::Precondition("R_A(x) is infinite".into()))?
        .clone();
    let xv = x.entries();
    let b: Vec<T> = sub_vec(
        &xv.iter().map(|v| r.clone() * v.clone()).collect::<Vec<_>>(),
        &an.matrix().apply(xv),
    );
    let b = ConeVector::new(snap_nonneg(b, an.tol()))?;
    let supp_x = x.support();
    let supp_b: IndexSet = b.support();
    let on_boundary = supp_b.is_subset(&supp_x) && supp_b != supp_x;
    let generates = an.classes().smallest_initial_superset(&supp_b).indices() == &supp_x;
    let strict = an.tol().eig_lt(&cw.rho_x, &r);
    Ok(Boundary { b, on_boundary, strict_iff: strict == generates })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerLimit {
    pub exists: bool,
    /// Advisory orbit evidence: `Some(true)` if `(P/ρ_x)^k x` settled,
    /// `Some(false)` if it blew up, `None` if neither was seen.
    pub orbit_converged: Option<bool>,
}

/// Whether `lim (P/ρ_x)^k x` exists, i.e. `x` is a `ρ_x`-eigenvector plus
/// a part of smaller local radius.
pub fn power_limit_5_6<T: Field>(an: &Analysis<T>, x: &ConeVector<T>) -> Result<PowerLimit> {
    require_nonzero(an, x)?;
    let rho = an.local_rho(x.entries());
    if rho.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Precondition("needs ρ_x(A) > 0".into()));
    }
    let exists = if T::is_exact() {
        let p = rational_matrix(an.matrix().matrix())?;
        let (ord, others) = peripheral_orders(&p, &rational_vec(x.entries())?, &rational(&rho)?);
        ord <= 1 && others.is_none()
    } else {
        let rf = rho.to_f64();
        let xf: Vec<f64> = x.entries().iter().map(|v| v.to_f64()).collect();
        let dec = decompose_generalized(&an.matrix().to_f64(), &xf, an.tol())?;
        dec.components
            .iter()
            .filter(|c| c.lambda.norm() >= rf * (1.0 - 1e-6))
            .all(|c| (c.lambda.re - rf).abs() <= 1e-6 * rf && c.lambda.im == 0.0 && c.order == 1)
    };
    Ok(PowerLimit { exists, orbit_converged: orbit_evidence(an, rho.to_f64(), x.entries()) })
}

fn orbit_evidence<T: Field>(an: &Analysis<T>, rho: f64, x: &[T]) -> Option<bool> {
    let p = an.matrix().to_f64();
    let mut v: Vec<f64> = x.iter().map(|e| e.to_f64()).collect();
    let x0 = v.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    for _ in 0..an.tol().power_iters {
        let next: Vec<f64> = p.apply(&v).into_iter().map(|e| e / rho).collect();
        let nn = next.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        if !nn.is_finite() || nn > 1e12 * x0 {
            return Some(false);
        }
        let diff = next.iter().zip(&v).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if diff <= 1e-12 * nn.max(x0) {
            return Some(true);
        }
        v = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::NonnegMatrix;
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
    fn cw_number_examples() {
        let a = an(&[&[0, 1], &[1, 0]]);
        let r = cw_numbers(&a, &v(&[1, 2])).unwrap();
        assert_eq!(r.r_lower, q(1, 2));
        assert_eq!(r.r_upper, Upper::Finite(q(2, 1)));
        assert_eq!(r.rho_x, q(1, 1));
        let a = an(&[&[1, 1], &[0, 1]]);
        let r = cw_numbers(&a, &v(&[0, 1])).unwrap();
        assert_eq!(r.r_upper, Upper::Infinite);
        assert_eq!(r.r_lower, q(1, 1));
        assert!(cw_numbers(&a, &v(&[0, 0])).is_err());
    }

    #[test]
    fn cw_set_examples() {
        let s = cw_sets(&an(&[&[2, 1, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(
            (s.sup_omega.clone(), s.inf_sigma.clone(), s.sup_omega1.clone(), s.inf_sigma1.clone()),
            (q(2, 1), q(1, 1), q(1, 1), q(2, 1))
        );
        assert!(!s.inf_sigma1_attained);
        assert_eq!(s.sup_omega1_witness, Some(true));
        let s = cw_sets(&an(&[&[1, 0], &[0, 1]])).unwrap();
        assert!(s.inf_sigma1_attained && s.sup_omega == q(1, 1) && s.inf_sigma == q(1, 1));
        let s = cw_sets(&an(&[&[0, 0], &[0, 0]])).unwrap();
        assert!(s.inf_sigma1_attained && s.sup_omega == q(0, 1) && s.sup_omega1 == q(0, 1));
    }

    #[test]
    fn sigma1_examples() {
        assert!(!rho_in_sigma1(&an(&[&[1, 1], &[0, 1]])).unwrap());
        assert!(rho_in_sigma1(&an(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap());
        let a = an(&[&[2, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(!rho_in_sigma1(&a).unwrap());
        assert!(!rho_in_sigma1_lp(&a).unwrap());
        assert!(rho_in_sigma1_lp(&an(&[&[2, 0], &[1, 1]])).unwrap());
    }

    #[test]
    fn decompositions() {
        let a = an(&[&[2, 0], &[0, 1]]);
        let (x1, x2) = decompose_5_4(&a, &v(&[1, 1])).unwrap();
        assert_eq!(x1.entries(), &[q(1, 1), q(0, 1)]);
        assert_eq!(x2.entries(), &[q(0, 1), q(1, 1)]);
        let a = an(&[&[2, 0], &[1, 1]]);
        let (x1, x2) = decompose_5_4(&a, &v(&[1, 1])).unwrap();
        assert_eq!(x1.entries(), &[q(1, 1), q(1, 1)]);
        assert!(x2.is_zero());
        let (x1, x2) = decompose_5_13(&a, &v(&[1, 0])).unwrap();
        assert_eq!(x1.entries(), &[q(1, 1), q(1, 1)]);
        assert_eq!(x2.entries(), &[q(0, 1), q(1, 1)]);
        let a = an(&[&[1, 1], &[0, 1]]);
        assert!(decompose_5_4(&a, &v(&[0, 1])).is_err());
    }

    #[test]
    fn theorem_5_11_examples() {
        let c = check_5_11(&an(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(c, Check511 { a: true, b: true, c: true });
        let c = check_5_11(&an(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(c, Check511 { a: false, b: false, c: false });
        assert!(check_5_11(&an(&[&[2, 1, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap().agree());
    }

    #[test]
    fn boundary_examples() {
        let a = an(&[&[2, 0], &[0, 1]]);
        let bd = boundary_5_2(&a, &v(&[1, 1])).unwrap();
        assert_eq!(bd.b.entries(), &[q(0, 1), q(1, 1)]);
        assert!(bd.on_boundary && bd.strict_iff);
        let a = an(&[&[1, 0], &[1, 1]]);
        let bd = boundary_5_2(&a, &v(&[1, 1])).unwrap();
        assert_eq!(bd.b.entries(), &[q(1, 1), q(0, 1)]);
        assert!(bd.on_boundary && bd.strict_iff);
        let bd = boundary_5_2(&a, &v(&[0, 1])).unwrap();
        assert!(bd.b.is_zero() && bd.on_boundary && bd.strict_iff);
    }

    #[test]
    fn power_limit_examples() {
        let a = an(&[&[0, 1], &[1, 0]]);
        assert!(power_limit_5_6(&a, &v(&[1, 1])).unwrap().exists);
        let pl = power_limit_5_6(&a, &v(&[1, 0])).unwrap();
        assert!(!pl.exists);
        assert_eq!(pl.orbit_converged, None);
        let a = an(&[&[1, 1], &[0, 1]]);
        assert!(!power_limit_5_6(&a, &v(&[0, 1])).unwrap().exists);
        let fa = Analysis::new(
            &NonnegMatrix::<f64>::from_ints(&[&[0, 1], &[1, 0]]).unwrap(),
            &Tolerance::default(),
        )
        .unwrap();
        let x = ConeVector::new(vec![1.0, 0.0]).unwrap();
        assert!(!power_limit_5_6(&fa, &x).unwrap().exists);
        let x = ConeVector::new(vec![1.0, 1.0]).unwrap();
        assert!(power_limit_5_6(&fa, &x).unwrap().exists);
    }
}
