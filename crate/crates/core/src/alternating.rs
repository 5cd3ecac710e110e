//! Alternating sequences `x, Ax, A²x, …` for Z-matrices `A = sI − P`.
//!
//! Since `(−1)^r (sI − P)^r = (P − sI)^r`, everything is phrased through the
//! iterates `w_r = (P − sI)^r x`, which must stay nonzero and nonnegative.

use crate::error::{Error, Result};
use crate::matrix::{ConeVector, NonnegMatrix};
use crate::oracle::eig::decompose_generalized;
use crate::oracle::poly::peripheral_orders;
use crate::oracle::queries::{rational, rational_matrix, rational_vec};
use crate::scalar::{Field, Tolerance};
use crate::spectral::Analysis;

/// `A = sI − P`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZMatrix<T> {
    pub s: T,
    pub p: NonnegMatrix<T>,
}

impl<T: Field> ZMatrix<T> {
    pub fn new(s: T, p: NonnegMatrix<T>) -> Self {
        ZMatrix { s, p }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AltKind {
    /// The longest alternating sequence starting at `x` has this length.
    Finite(usize),
    /// No failure within the step budget.
    AtLeast(usize),
    /// `x` is an eigenvector of `P` for an eigenvalue above `s`.
    InfiniteCertified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltResult {
    pub kind: AltKind,
    pub iterates_checked: usize,
}

impl AltResult {
    pub fn to_json(&self) -> serde_json::Value {
        let (kind, length) = match self.kind {
            AltKind::Finite(k) => ("finite", Some(k)),
            AltKind::AtLeast(k) => ("at_least", Some(k)),
            AltKind::InfiniteCertified => ("infinite_certified", None),
        };
        serde_json::json!({
            "kind": kind,
            "length": length,
            "iterates_checked": self.iterates_checked,
        })
    }
}

/// Sign of an iterate: `None` if some entry is negative, otherwise whether
/// it is nonzero. Float entries within `eq_tol·max(1, ‖w‖)` of zero count as
/// zero.
fn classify<T: Field>(w: &mut [T], tol: &Tolerance) -> Option<bool> {
    if !T::is_exact() {
        let scale = w.iter().fold(0.0f64, |m, v| m.max(v.to_f64().abs())).max(1.0);
        for v in w.iter_mut() {
            if v.to_f64().abs() <= tol.eq_tol * scale {
                *v = T::zero();
            }
        }
    }
    if w.iter().any(|v| v.is_negative()) {
        None
    } else {
        Some(w.iter().any(|v| !v.is_zero()))
    }
}

fn shifted_apply<T: Field>(p: &NonnegMatrix<T>, s: &T, w: &[T]) -> Vec<T> {
    p.apply(w)
        .into_iter()
        .zip(w)
        .map(|(pw, wi)| pw - s.clone() * wi.clone())
        .collect()
}

/// Exact eigenvalue of `P` at `x`, if `x` is an eigenvector.
fn eigenvalue_at<T: Field>(p: &NonnegMatrix<T>, x: &[T]) -> Option<T> {
    let px = p.apply(x);
    let i = x.iter().position(|v| !v.is_zero())?;
    let mu = px[i].clone() / x[i].clone();
    px.iter()
        .zip(x)
        .all(|(a, b)| *a == mu.clone() * b.clone())
        .then_some(mu)
}

pub fn alt_length<T: Field>(
    z: &ZMatrix<T>,
    x: &ConeVector<T>,
    max_steps: usize,
    tol: &Tolerance,
) -> Result<AltResult> {
    if x.len() != z.p.n() {
        return Err(Error::Input("vector length does not match the matrix".into()));
    }
    if x.is_zero() {
        return Err(Error::Precondition("x must be nonzero".into()));
    }
    let mut w = x.entries().to_vec();
    for r in 1..=max_steps {
        w = shifted_apply(&z.p, &z.s, &w);
        match classify(&mut w, tol) {
            None => return Ok(AltResult { kind: AltKind::Finite(r - 1), iterates_checked: r }),
            Some(false) => return Ok(AltResult { kind: AltKind::Finite(r), iterates_checked: r }),
            Some(true) => {}
        }
    }
    let certified = T::is_exact()
        && eigenvalue_at(&z.p, x.entries()).is_some_and(|mu| mu > z.s);
    Ok(AltResult {
        kind: if certified { AltKind::InfiniteCertified } else { AltKind::AtLeast(max_steps) },
        iterates_checked: max_steps,
    })
}

/// Whether some `x ≥ 0` starts an infinite alternating sequence, i.e.
/// `s < ρ(P)`; the witness is a nonnegative eigenvector for `ρ(P)`.
pub fn exists_infinite<T: Field>(an: &Analysis<T>, s: &T) -> Result<(bool, Option<ConeVector<T>>)> {
    if !an.tol().eig_lt(s, an.rho()) {
        return Ok((false, None));
    }
    let alpha = an
        .taxonomy()
        .distinguished_with(an.rho())
        .into_iter()
        .next()
        .ok_or_else(|| Error::Inconsistency("no distinguished class at ρ(P)".into()))?;
    Ok((true, Some(an.fv_eigenvector(alpha)?)))
}

/// `sI − P` is an M-matrix exactly when `s ≥ ρ(P)`.
pub fn is_m_matrix<T: Field>(an: &Analysis<T>, s: &T) -> bool {
    an.tol().eig_le(an.rho(), s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    /// Longest run of nonzero nonnegative iterates `(P − ρ_x I)^j x`,
    /// capped at `n + 2`.
    pub m_observed: usize,
    pub ord: usize,
    pub nu: usize,
    /// `m ≤ ord − max_Γ ord(x_j)` when peripheral components other than
    /// `ρ_x` are present; `None` when there are none or the numeric
    /// decomposition is ambiguous.
    pub gamma_deduction: Option<bool>,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.m_observed <= self.ord && self.ord <= self.nu && self.gamma_deduction != Some(false)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m_observed": self.m_observed,
            "ord": self.ord,
            "nu": self.nu,
            "gamma_deduction": self.gamma_deduction,
        })
    }
}

pub fn bound_check_6_1<T: Field>(an: &Analysis<T>, x: &ConeVector<T>) -> Result<BoundCheck> {
    let sp = an.ord_and_pair(x.entries());
    let z = ZMatrix::new(sp.rho.clone(), an.matrix().clone());
    let run = alt_length(&z, x, an.n() + 2, an.tol())?;
    let m_observed = match run.kind {
        AltKind::Finite(k) => k,
        AltKind::AtLeast(k) => k,
        AltKind::InfiniteCertified => {
            return Err(Error::Inconsistency("infinite run at s = ρ_x".into()))
        }
    };
    let peripheral = peripheral_max_order(an, x, &sp.rho)?;
    let gamma_deduction = peripheral.map(|t| m_observed + t <= sp.ord);
    Ok(BoundCheck { m_observed, ord: sp.ord, nu: an.index_nu(&sp.rho), gamma_deduction })
}

/// Largest order among components of `x` at eigenvalues of modulus `ρ_x`
/// other than `ρ_x` itself.
fn peripheral_max_order<T: Field>(an: &Analysis<T>, x: &ConeVector<T>, rho: &T) -> Result<Option<usize>> {
    if rho.is_zero() {
        return Ok(None);
    }
    if T::is_exact() {
        let p = rational_matrix(an.matrix().matrix())?;
        return Ok(peripheral_orders(&p, &rational_vec(x.entries())?, &rational(rho)?).1);
    }
    let rf = rho.to_f64();
    let xf: Vec<f64> = x.entries().iter().map(|v| v.to_f64()).collect();
    let dec = decompose_generalized(&an.matrix().to_f64(), &xf, an.tol())?;
    if dec.merged {
        return Ok(None);
    }
    Ok(dec
        .components
        .iter()
        .filter(|c| {
            (c.lambda.norm() - rf).abs() <= 1e-6 * rf && (c.lambda.re - rf).abs() > 1e-6 * rf
        })
        .map(|c| c.order)
        .max())
}
