//! The equation `(P − λI)x = b`, `x ≥ 0`.
//!
//! Above `ρ_b` the question is combinatorial and a solution is built from
//! distinguished eigenvectors. At and below `ρ_b` only necessary conditions
//! are combinatorial, so the verdict comes from an exact LP and the
//! necessary conditions are cross-checked against it.

use std::cmp::Ordering;

use crate::classes::{ClassAnalysis, InitialSubset};
use crate::eq_type1::{require_len, require_positive, restricted_solve};
use crate::error::{Error, Result};
use crate::linalg::{adjugate, inverse};
use crate::matrix::{ConeVector, IndexSet, Matrix, NonnegMatrix};
use crate::oracle::eig::{block_spectrum, largest_real_below};
use crate::oracle::queries::{image_face, nonneg_solution, rational, rational_matrix, rational_vec};
use crate::scalar::{convergents, lex_leq_tol, Field, SpectralPair, Tolerance};
use crate::spectral::{power_iteration, snap_nonneg, Analysis};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `λ > ρ_b`
    Above,
    /// `λ = ρ_b`
    At,
    /// `λ < ρ_b`
    Below,
}

impl Regime {
    pub fn tag(self) -> &'static str {
        match self {
            Regime::Above => "above",
            Regime::At => "at",
            Regime::Below => "below",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// `b = 0`, solved by `x = 0`.
    Trivial,
    /// Combinatorial test on distinguished classes (regime above).
    Cor42,
    /// Exact LP feasibility.
    Lp,
    /// A necessary combinatorial condition fails.
    NecessaryViolated,
}

impl Certificate {
    pub fn tag(self) -> &'static str {
        match self {
            Certificate::Trivial => "trivial",
            Certificate::Cor42 => "cor4_2",
            Certificate::Lp => "lp",
            Certificate::NecessaryViolated => "necessary_violated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport2<T> {
    pub regime: Regime,
    pub solvable: bool,
    pub x: Option<ConeVector<T>>,
    pub certificate: Certificate,
    pub spectral_pair_of_x: Option<SpectralPair<T>>,
    pub rho_b: T,
}

impl<T: Field> SolveReport2<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "regime": self.regime.tag(),
            "solvable": self.solvable,
            "x": self.x.as_ref().map(|x| x.to_json()),
            "certificate": self.certificate.tag(),
            "fired_condition": self.certificate.tag(),
            "spectral_pair_of_x": self.spectral_pair_of_x.as_ref().map(|s| s.to_json()),
            "rho_b": self.rho_b.to_json(),
        })
    }
}

/// `λ` is a distinguished eigenvalue and every class meeting `supp(b)` has
/// access to a distinguished class of radius `λ`.
pub fn cor42_test<T: Field>(an: &Analysis<T>, lambda: &T, b: &ConeVector<T>) -> bool {
    let targets = an.taxonomy().distinguished_with(lambda);
    if targets.is_empty() {
        return false;
    }
    let ca = an.classes();
    ca.classes_meeting(&b.support())
        .iter()
        .all(|&c| targets.iter().any(|&t| ca.has_access(c, t)))
}

fn lp_solution<T: Field>(an: &Analysis<T>, lambda: &T, b: &[T], allowed: Option<&IndexSet>) -> Result<Option<Vec<T>>> {
    let a = rational_matrix(&an.matrix().matrix().shift(lambda))?;
    let rb = rational_vec(b)?;
    Ok(nonneg_solution(&a, &rb, allowed)?
        .map(|x| x.iter().map(T::from_rational).collect()))
}

pub fn solvable2<T: Field>(an: &Analysis<T>, lambda: &T, b: &ConeVector<T>) -> Result<SolveReport2<T>> {
    require_positive(lambda)?;
    require_len(an, b)?;
    let tol = an.tol();
    let rho_b = an.local_rho(b.entries());
    let regime = match tol.eig_cmp(lambda, &rho_b) {
        Ordering::Greater => Regime::Above,
        Ordering::Equal => Regime::At,
        Ordering::Less => Regime::Below,
    };
    let report = |solvable, x: Option<Vec<T>>, certificate| -> Result<SolveReport2<T>> {
        let x = x.map(ConeVector::new).transpose()?;
        let spectral_pair_of_x = x.as_ref().map(|x| an.ord_and_pair(x.entries()));
        Ok(SolveReport2 { regime, solvable, x, certificate, spectral_pair_of_x, rho_b: rho_b.clone() })
    };
    if b.is_zero() {
        return report(true, Some(vec![T::zero(); an.n()]), Certificate::Trivial);
    }

    if regime == Regime::Above {
        if !cor42_test(an, lambda, b) {
            return report(false, None, Certificate::Cor42);
        }
        let x = solve2_above(an, lambda, b)?;
        let out = report(true, Some(x.into_entries()), Certificate::Cor42)?;
        let sp = out.spectral_pair_of_x.as_ref().expect("solution present");
        if !(tol.eig_eq(&sp.rho, lambda) && sp.ord == 1) {
            return Err(Error::Inconsistency(format!(
                "constructed solution has spectral pair ({}, {}) instead of (λ, 1)",
                sp.rho, sp.ord
            )));
        }
        return Ok(out);
    }

    let necessary = regime == Regime::Below || {
        an.is_distinguished_eigenvalue(lambda)
            && b.support().is_subset(necessary_face(an, lambda)?.indices())
    };
    let x = lp_solution(an, lambda, b.entries(), None)?;
    match (necessary, x) {
        (false, Some(_)) => Err(Error::Inconsistency(
            "LP found a solution although a necessary condition fails".into(),
        )),
        (false, None) => report(false, None, Certificate::NecessaryViolated),
        (true, None) => report(false, None, Certificate::Lp),
        (true, Some(x)) => {
            let x = snap_nonneg(x, tol);
            if !tol.eig_eq(&an.local_rho(&x), &rho_b) {
                return Err(Error::Inconsistency(
                    "LP solution violates ρ_x = ρ_b for λ ≤ ρ_b".into(),
                ));
            }
            report(true, Some(x), Certificate::Lp)
        }
    }
}

/// `x = αu − x0`, with `u` a sum of distinguished eigenvectors for `λ`
/// covering the support of the minimal solution `x0` of `(λI − P)x0 = b`.
pub fn solve2_above<T: Field>(an: &Analysis<T>, lambda: &T, b: &ConeVector<T>) -> Result<ConeVector<T>> {
    require_positive(lambda)?;
    require_len(an, b)?;
    let tol = an.tol();
    if !tol.eig_lt(&an.local_rho(b.entries()), lambda) || !(b.is_zero() || cor42_test(an, lambda, b)) {
        return Err(Error::Precondition(
            "needs λ > ρ_b and every class meeting supp(b) to reach a λ-distinguished class".into(),
        ));
    }
    let n = an.n();
    if b.is_zero() {
        return Ok(ConeVector::zeros(n));
    }
    let ca = an.classes();
    let reached = ca.classes_accessed_from(&ca.classes_meeting(&b.support()));
    let mut u = vec![T::zero(); n];
    for alpha in an.taxonomy().distinguished_with(lambda) {
        if reached.contains(&alpha) {
            let v = an.fv_eigenvector(alpha)?;
            u = u.into_iter().zip(v.entries()).map(|(a, c)| a + c.clone()).collect();
        }
    }
    let set = ca.smallest_initial_superset(&b.support());
    let x0 = restricted_solve(an.matrix(), lambda, &set, b.entries())
        .ok_or_else(|| Error::Inconsistency("restricted system singular although ρ_b < λ".into()))?;
    let mut alpha = T::zero();
    for i in set.to_vec() {
        if u[i].is_zero() {
            return Err(Error::Inconsistency("eigenvector does not cover supp(x0)".into()));
        }
        alpha = T::max_of(alpha, x0[i].clone() / u[i].clone());
    }
    let x: Vec<T> = u
        .into_iter()
        .zip(x0)
        .map(|(ui, xi)| alpha.clone() * ui - xi)
        .collect();
    ConeVector::new(snap_nonneg(x, tol))
}

/// Union of the classes strictly accessing a semi-distinguished class of
/// radius `λ`; its face is generated by the solutions with `ρ_b ≤ λ`.
pub fn necessary_face<T: Field>(an: &Analysis<T>, lambda: &T) -> Result<InitialSubset> {
    if !an.is_distinguished_eigenvalue(lambda) {
        return Err(Error::Precondition(format!("{lambda} is not a distinguished eigenvalue")));
    }
    let ca = an.classes();
    let semi: Vec<usize> = (0..ca.num_classes())
        .filter(|&c| an.taxonomy().semi_distinguished(ca, c, lambda))
        .collect();
    let members: Vec<usize> = (0..ca.num_classes())
        .filter(|&a| semi.iter().any(|&s| ca.strictly_accesses(a, s)))
        .collect();
    Ok(ca.initial_subset(ca.union_of(&members)).expect("strict accessors form an initial set"))
}

/// Classes with access to a semi-distinguished class of radius `λ`: the
/// support of the nonnegative generalized eigenvectors for `λ`.
pub fn generalized_eigen_face<T: Field>(an: &Analysis<T>, lambda: &T) -> InitialSubset {
    let ca = an.classes();
    let semi: Vec<usize> = (0..ca.num_classes())
        .filter(|&c| an.taxonomy().semi_distinguished(ca, c, lambda))
        .collect();
    an.initial_over(&semi)
}

/// `{i : ∃x ≥ 0, (P − λI)x ≥ 0, ((P − λI)x)_i > 0}` by exact LP.
pub fn solvable_face_probe<T: Field>(p: &NonnegMatrix<T>, lambda: &T) -> Result<IndexSet> {
    image_face(&rational_matrix(&p.matrix().shift(lambda))?)
}

/// A solution pair `(x, b)` of `(P − ρI)x = b` with `supp(b)` exactly the
/// classes strictly accessing `alpha`, built class by class towards the top
/// of the access order.
pub fn tracedown_witness<T: Field>(an: &Analysis<T>, alpha: usize) -> Result<(ConeVector<T>, ConeVector<T>)> {
    let tax = an.taxonomy();
    if alpha >= an.classes().num_classes() || !tax.basic[alpha] || !tax.distinguished_for_transpose[alpha] {
        return Err(Error::Precondition(
            "trace-down needs a basic class distinguished for the transpose".into(),
        ));
    }
    let ca = an.classes();
    let rho = an.rho().clone();
    let half = T::one() / T::from_int(2);
    let mut x = vec![T::zero(); an.n()];
    let mut b = vec![T::zero(); an.n()];
    for (&v, e) in ca.class(alpha).iter().zip(an.perron_vector(alpha)) {
        x[v] = e.clone();
    }
    for beta in (0..alpha).rev().filter(|&c| ca.has_access(c, alpha)) {
        let s = an.coupling(beta, &x);
        if tax.basic[beta] {
            for ((&v, e), sv) in ca.class(beta).iter().zip(an.perron_vector(beta)).zip(s) {
                x[v] = e.clone();
                b[v] = sv;
            }
        } else {
            let s: Vec<T> = s.into_iter().map(|v| v * half.clone()).collect();
            x = an.place_resolvent(beta, &rho, &s, x)?;
            for (&v, sv) in ca.class(beta).iter().zip(s) {
                b[v] = sv;
            }
        }
    }
    Ok((
        ConeVector::new(snap_nonneg(x, an.tol()))?,
        ConeVector::new(snap_nonneg(b, an.tol()))?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolventSign {
    /// `None` when `P − λI` is singular.
    pub inverse_positive: Option<bool>,
    pub adjugate_positive: bool,
}

fn entrywise_positive<T: Field>(m: &Matrix<T>) -> bool {
    if T::is_exact() {
        m.entries().all(|v| *v > T::zero())
    } else {
        let margin = 1e-7 * m.max_abs().max(f64::MIN_POSITIVE);
        m.entries().all(|v| v.to_f64() > margin)
    }
}

fn require_irreducible<T: Field>(p: &NonnegMatrix<T>) -> Result<()> {
    if ClassAnalysis::condense(p).is_irreducible() {
        Ok(())
    } else {
        Err(Error::Precondition("matrix must be irreducible".into()))
    }
}

/// Strict positivity of `(P − λI)^{-1}` and of `adj(λI − P)`.
pub fn resolvent_sign<T: Field>(p: &NonnegMatrix<T>, lambda: &T) -> Result<ResolventSign> {
    require_irreducible(p)?;
    let shifted = p.matrix().shift(lambda);
    let inverse_positive = inverse(&shifted).map(|inv| entrywise_positive(&inv));
    let adjugate_positive = entrywise_positive(&adjugate(&shifted.neg()));
    Ok(ResolventSign { inverse_positive, adjugate_positive })
}

/// Some `λ < ρ(P)` at which both resolvent positivity flags hold, found by
/// halving `ε` in `λ = ρ − ε` from `ρ/2` down to `1e-6·ρ`. Positivity of
/// the inverse itself certifies `λ < ρ`, so an approximate `ρ` suffices and
/// rational candidates need not hit `ρ − ε` exactly.
pub fn resolvent_window<T: Field>(p: &NonnegMatrix<T>, tol: &Tolerance) -> Result<Option<T>> {
    require_irreducible(p)?;
    let (rho, _) = power_iteration(p.to_f64().matrix(), tol)?;
    if rho <= 0.0 {
        return Ok(None);
    }
    let mut eps = rho / 2.0;
    while eps >= 1e-6 * rho {
        let target = rho - eps;
        let lambda = if T::is_exact() {
            convergents(target, 1 << 40)
                .into_iter()
                .map(|q| T::from_rational(&q))
                .find(|q| (q.to_f64() - target).abs() <= eps / 8.0)
        } else {
            T::from_f64(target)
        };
        if let Some(lambda) = lambda {
            let s = resolvent_sign(p, &lambda)?;
            if s.inverse_positive == Some(true) && s.adjugate_positive {
                return Ok(Some(lambda));
            }
        }
        eps /= 2.0;
    }
    Ok(None)
}

/// Largest real eigenvalue below `ρ(P)`, `None` standing for `−∞`.
pub fn subcritical_window<T: Field>(an: &Analysis<T>) -> Result<Option<f64>> {
    let spectrum = block_spectrum(an.matrix(), an.tol())?;
    Ok(largest_real_below(&spectrum, an.rho().to_f64(), an.tol()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    pub in_s1: bool,
    pub in_s2: bool,
    pub in_s3: bool,
}

/// Membership of `b` in the three nested sets: solvable with `ρ_b ≤ λ`;
/// image of the nonnegative generalized eigenvectors; and the spectral-pair
/// bound `sp(b) ⪯ (λ, m_λ − 1)` on their face.
pub fn membership_s<T: Field>(an: &Analysis<T>, lambda: &T, b: &ConeVector<T>) -> Result<Membership> {
    require_len(an, b)?;
    let m = an.m_lambda(lambda)?;
    let tol = an.tol();
    let face = generalized_eigen_face(an, lambda);
    let rho_ok = tol.eig_le(&an.local_rho(b.entries()), lambda);
    let in_s1 = rho_ok && lp_solution(an, lambda, b.entries(), None)?.is_some();
    let in_s2 = lp_solution(an, lambda, b.entries(), Some(face.indices()))?.is_some();
    let bound = SpectralPair::new(lambda.clone(), m.saturating_sub(1));
    let in_s3 = b.support().is_subset(face.indices())
        && (b.is_zero() || lex_leq_tol(&an.ord_and_pair(b.entries()), &bound, tol));
    Ok(Membership { in_s1, in_s2, in_s3 })
}

/// `λ` as an exact rational, for callers needing the LP oracle directly.
pub fn exact_lambda<T: Field>(lambda: &T) -> Result<crate::scalar::Rational> {
    rational(lambda)
}
