//! Perron roots of the classes, local spectral radii, distinguished
//! eigenvalues, Frobenius–Victory eigenvectors, orders and indices.

use crate::classes::{ClassAnalysis, ClassTaxonomy, InitialSubset};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, solve};
use crate::matrix::{support, ConeVector, IndexSet, Matrix, NonnegMatrix};
use crate::scalar::{convergents, Field, SpectralPair, Tolerance};

/// Largest denominator tried when recovering an exact Perron root from its
/// floating-point estimate.
const MAX_ROOT_DENOM: i64 = 1_000_000;

/// Power iteration on `B + I` for an irreducible nonnegative block `B`.
/// Returns the Perron root and a Perron vector scaled to max entry 1.
pub fn power_iteration(block: &Matrix<f64>, tol: &Tolerance) -> Result<(f64, Vec<f64>)> {
    let k = block.rows();
    let shifted = block.shift(&-1.0);
    let mut x = vec![1.0; k];
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for _ in 0..tol.power_iters {
        let y = shifted.mul_vec(&x);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (yi, xi) in y.iter().zip(&x) {
            let r = yi / xi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let width = hi - lo;
        if width < best.0 {
            best = (width, lo, hi);
        }
        let top = y.iter().cloned().fold(0.0, f64::max);
        if !(top.is_finite() && top > 0.0) {
            return Err(Error::Numeric("power iteration lost positivity".into()));
        }
        x = y.iter().map(|v| v / top).collect();
        if width <= 0.1 * tol.eig_tol * hi.max(1.0) {
            return Ok(((lo + hi) / 2.0 - 1.0, x));
        }
    }
    let (width, lo, hi) = best;
    if width <= tol.eig_tol * hi.max(1.0) {
        Ok(((lo + hi) / 2.0 - 1.0, x))
    } else {
        Err(Error::Numeric(format!(
            "power iteration did not converge in {} steps",
            tol.power_iters
        )))
    }
}

fn constant_row_sum<T: Field>(block: &Matrix<T>, tol: &Tolerance) -> Option<T> {
    let sums: Vec<T> = (0..block.rows())
        .map(|i| block.row(i).iter().cloned().fold(T::zero(), |a, b| a + b))
        .collect();
    let first = sums[0].clone();
    sums.iter()
        .all(|s| tol.is_zero(&(s.clone() - first.clone())))
        .then_some(first)
}

/// Positive vector spanning a one-dimensional kernel, scaled to max entry 1.
fn positive_kernel_vector<T: Field>(m: &Matrix<T>) -> Option<Vec<T>> {
    let ns = nullspace(m);
    if ns.len() != 1 {
        return None;
    }
    let v = &ns[0];
    let sign = if v.iter().all(|e| e.is_negative()) {
        -T::one()
    } else if v.iter().all(|e| !e.is_negative() && !e.is_zero()) {
        T::one()
    } else {
        return None;
    };
    let top = v
        .iter()
        .map(|e| e.abs())
        .fold(T::zero(), T::max_of);
    Some(v.iter().map(|e| e.clone() * sign.clone() / top.clone()).collect())
}

/// Perron root and Perron vector (max entry 1) of an irreducible block.
///
/// In exact mode the root must be rational: it is recovered from the float
/// estimate by continued fractions and accepted only when `B − qI` has a
/// positive kernel vector, which characterizes the Perron root of an
/// irreducible nonnegative matrix.
pub fn block_perron<T: Field>(block: &Matrix<T>, tol: &Tolerance) -> Result<(T, Vec<T>)> {
    let k = block.rows();
    if k == 1 {
        return Ok((block[(0, 0)].clone(), vec![T::one()]));
    }
    if let Some(s) = constant_row_sum(block, tol) {
        return Ok((s, vec![T::one(); k]));
    }
    let (r, v) = power_iteration(&block.to_f64(), tol)?;
    if !T::is_exact() {
        let v = v.iter().map(|&e| T::from_f64(e).unwrap_or_else(T::zero)).collect();
        return Ok((T::from_f64(r).unwrap_or_else(T::zero), v));
    }
    for q in convergents(r, MAX_ROOT_DENOM) {
        let qt = T::from_rational(&q);
        if (qt.to_f64() - r).abs() > 1e-6 * r.abs().max(1.0) {
            continue;
        }
        if let Some(vec) = positive_kernel_vector(&block.shift(&qt)) {
            return Ok((qt, vec));
        }
    }
    Err(Error::Numeric(format!(
        "Perron root ≈ {r} of a class block is not a verifiable rational"
    )))
}

/// Class structure, class radii and Perron data of one matrix, computed once
/// and shared by every spectral query.
#[derive(Debug, Clone)]
pub struct Analysis<T> {
    p: NonnegMatrix<T>,
    classes: ClassAnalysis,
    taxonomy: ClassTaxonomy<T>,
    perron: Vec<Vec<T>>,
    tol: Tolerance,
}

impl<T: Field> Analysis<T> {
    pub fn new(p: &NonnegMatrix<T>, tol: &Tolerance) -> Result<Self> {
        let classes = ClassAnalysis::condense(p);
        let mut radii = Vec::with_capacity(classes.num_classes());
        let mut perron = Vec::with_capacity(classes.num_classes());
        for c in classes.classes() {
            let (r, v) = block_perron(p.principal(c).matrix(), tol)?;
            radii.push(r);
            perron.push(v);
        }
        let rho = radii.iter().cloned().fold(T::zero(), T::max_of);
        let taxonomy = ClassTaxonomy::classify(&classes, radii, rho, tol);
        Ok(Analysis {
            p: p.clone(),
            classes,
            taxonomy,
            perron,
            tol: *tol,
        })
    }

    pub fn matrix(&self) -> &NonnegMatrix<T> {
        &self.p
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn classes(&self) -> &ClassAnalysis {
        &self.classes
    }

    pub fn taxonomy(&self) -> &ClassTaxonomy<T> {
        &self.taxonomy
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    pub fn rho(&self) -> &T {
        &self.taxonomy.rho
    }

    pub fn class_radii(&self) -> &[T] {
        &self.taxonomy.radii
    }

    pub fn radius(&self, c: usize) -> &T {
        &self.taxonomy.radii[c]
    }

    /// Perron vector of the diagonal block of class `c` (max entry 1).
    pub fn perron_vector(&self, c: usize) -> &[T] {
        &self.perron[c]
    }

    /// Classes having access to `supp(x)`.
    pub fn accessing_classes(&self, s: &IndexSet) -> Vec<usize> {
        self.classes
            .classes_with_access_to(&self.classes.classes_meeting(s))
    }

    /// `ρ_x(P)`: largest class radius among classes with access to `supp(x)`.
    pub fn local_rho(&self, x: &[T]) -> T {
        self.local_rho_of_support(&support(x))
    }

    pub fn local_rho_of_support(&self, s: &IndexSet) -> T {
        self.accessing_classes(s)
            .iter()
            .map(|&c| self.radius(c).clone())
            .fold(T::zero(), T::max_of)
    }

    /// Sorted, deduplicated radii of the distinguished classes.
    pub fn distinguished_eigenvalues(&self) -> Vec<T> {
        let mut vals: Vec<T> = self
            .taxonomy
            .distinguished_classes()
            .iter()
            .map(|&c| self.radius(c).clone())
            .collect();
        vals.sort_by(|a, b| self.tol.eig_cmp(a, b));
        vals.dedup_by(|a, b| self.tol.eig_eq(a, b));
        vals
    }

    pub fn is_distinguished_eigenvalue(&self, lambda: &T) -> bool {
        !self.taxonomy.distinguished_with(lambda).is_empty()
    }

    /// Nonnegative eigenvector for the radius of the distinguished class
    /// `alpha`, positive exactly on the vertices with access to `alpha`.
    pub fn fv_eigenvector(&self, alpha: usize) -> Result<ConeVector<T>> {
        if alpha >= self.classes.num_classes() || !self.taxonomy.distinguished[alpha] {
            return Err(Error::Precondition(format!(
                "class {} is not distinguished",
                alpha + 1
            )));
        }
        let lambda = self.radius(alpha).clone();
        let mut x = vec![T::zero(); self.n()];
        for (&v, e) in self.classes.class(alpha).iter().zip(&self.perron[alpha]) {
            x[v] = e.clone();
        }
        for beta in (0..alpha).rev() {
            if !self.classes.has_access(beta, alpha) {
                continue;
            }
            let rhs = self.coupling(beta, &x);
            x = self.place_resolvent(beta, &lambda, &rhs, x)?;
        }
        ConeVector::new(snap_nonneg(x, &self.tol))
    }

    /// `Σ_{j ∉ β} P_vj x_j` for the vertices `v` of class `beta`.
    pub(crate) fn coupling(&self, beta: usize, x: &[T]) -> Vec<T> {
        let members = self.classes.class(beta);
        members
            .iter()
            .map(|&v| {
                (0..self.n())
                    .filter(|j| !members.contains(j))
                    .fold(T::zero(), |acc, j| {
                        acc + self.p.get(v, j).clone() * x[j].clone()
                    })
            })
            .collect()
    }

    /// Sets `x_β = (λI − P_ββ)^{-1} rhs`.
    pub(crate) fn place_resolvent(
        &self,
        beta: usize,
        lambda: &T,
        rhs: &[T],
        mut x: Vec<T>,
    ) -> Result<Vec<T>> {
        let members = self.classes.class(beta);
        let block = self.p.principal(members).matrix().neg().shift(&-lambda.clone());
        let sol = solve(&block, rhs).ok_or_else(|| {
            Error::Inconsistency(format!("class {} block is singular at λ", beta + 1))
        })?;
        for (&v, e) in members.iter().zip(sol) {
            x[v] = e;
        }
        Ok(x)
    }

    /// Classes `c` whose every accessor has radius at most `lambda`: the
    /// classes of the face `{y : ρ_y ≤ λ}`.
    pub fn classes_at_most(&self, lambda: &T) -> Vec<usize> {
        (0..self.classes.num_classes())
            .filter(|&c| {
                self.classes
                    .classes_with_access_to(&[c])
                    .iter()
                    .all(|&b| self.tol.eig_le(self.radius(b), lambda))
            })
            .collect()
    }

    /// Classes of radius `lambda` among `members`.
    fn with_radius(&self, members: &[usize], lambda: &T) -> Vec<usize> {
        members
            .iter()
            .copied()
            .filter(|&c| self.tol.eig_eq(self.radius(c), lambda))
            .collect()
    }

    /// `sp_P(x) = (ρ_x, ord_P(x))`; the order is the longest access chain of
    /// radius-`ρ_x` classes inside the smallest initial subset containing
    /// `supp(x)`.
    pub fn ord_and_pair(&self, x: &[T]) -> SpectralPair<T> {
        let s = support(x);
        if s.is_empty() {
            return SpectralPair::zero();
        }
        let rho = self.local_rho_of_support(&s);
        let members = self.with_radius(&self.accessing_classes(&s), &rho);
        let ord = self.classes.longest_chain(&members);
        SpectralPair::new(rho, ord)
    }

    /// Index of `lambda`, computed on the invariant face `{y : ρ_y ≤ λ}`:
    /// the longest chain of radius-`lambda` classes none of whose accessors
    /// exceeds `lambda`. At `λ = ρ(P)` this is the longest chain of basic
    /// classes; it is 0 when no such class exists.
    pub fn index_nu(&self, lambda: &T) -> usize {
        let members = self.with_radius(&self.classes_at_most(lambda), lambda);
        self.classes.longest_chain(&members)
    }

    /// Maximal order of nonnegative generalized eigenvectors for the
    /// distinguished eigenvalue `lambda`.
    pub fn m_lambda(&self, lambda: &T) -> Result<usize> {
        if !self.is_distinguished_eigenvalue(lambda) {
            return Err(Error::Precondition(format!(
                "{lambda} is not a distinguished eigenvalue"
            )));
        }
        Ok(self.index_nu(lambda))
    }

    /// Union of the classes having access to some class in `targets`.
    pub fn initial_over(&self, targets: &[usize]) -> InitialSubset {
        let set = self
            .classes
            .union_of(&self.classes.classes_with_access_to(targets));
        self.classes
            .initial_subset(set)
            .expect("access closure is initial")
    }

    pub fn report(&self) -> SpectralReport<T> {
        let distinguished = self.distinguished_eigenvalues();
        let nu = distinguished
            .iter()
            .map(|l| (l.clone(), self.index_nu(l), self.index_nu(l)))
            .collect();
        SpectralReport {
            rho: self.rho().clone(),
            class_radii: self.class_radii().to_vec(),
            distinguished_eigenvalues: distinguished,
            nu_rho: self.index_nu(self.rho()),
            per_eigenvalue: nu,
        }
    }
}

/// Zeroes float entries that are negative within `eq_tol` (roundoff at the
/// cone boundary); exact values pass through untouched.
pub(crate) fn snap_nonneg<T: Field>(v: Vec<T>, tol: &Tolerance) -> Vec<T> {
    if T::is_exact() {
        return v;
    }
    v.into_iter()
        .map(|e| if e.is_negative() && tol.is_zero(&e) { T::zero() } else { e })
        .collect()
}

/// `‖A^m x‖_∞^{1/m}` with per-step renormalization.
pub fn local_rho_estimate<T: Field>(p: &NonnegMatrix<T>, x: &[T], m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::Precondition("estimator needs m ≥ 1".into()));
    }
    let a = p.to_f64();
    let mut v: Vec<f64> = x.iter().map(|e| e.to_f64()).collect();
    let norm0 = v.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    if norm0 == 0.0 {
        return Err(Error::Precondition("estimator needs x ≠ 0".into()));
    }
    let mut log_sum = norm0.ln();
    v.iter_mut().for_each(|e| *e /= norm0);
    for _ in 0..m {
        v = a.apply(&v);
        let nrm = v.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
        if nrm == 0.0 {
            return Ok(0.0);
        }
        if !nrm.is_finite() {
            return Err(Error::Numeric("overflow in local spectral radius estimate".into()));
        }
        log_sum += nrm.ln();
        v.iter_mut().for_each(|e| *e /= nrm);
    }
    Ok((log_sum / m as f64).exp())
}

/// Spectral summary emitted under `"spectral"` by `analyze`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport<T> {
    pub rho: T,
    pub class_radii: Vec<T>,
    pub distinguished_eigenvalues: Vec<T>,
    pub nu_rho: usize,
    /// `(λ, ν_λ, m_λ)` per distinguished eigenvalue.
    pub per_eigenvalue: Vec<(T, usize, usize)>,
}

impl<T: Field> SpectralReport<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rho": self.rho.to_json(),
            "class_radii": self.class_radii.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            "distinguished_eigenvalues":
                self.distinguished_eigenvalues.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            "nu_rho": self.nu_rho,
            "eigenvalues": self.per_eigenvalue.iter().map(|(l, nu, m)| serde_json::json!({
                "lambda": l.to_json(), "nu": nu, "m": m,
            })).collect::<Vec<_>>(),
        })
    }
}
