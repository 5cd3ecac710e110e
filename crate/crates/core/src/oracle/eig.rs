//! Dense spectra and generalized eigenspaces.
//!
//! Spectra of nonnegative matrices are taken block by block over the classes:
//! the spectrum of a block-triangular matrix is the union of its diagonal
//! blocks' spectra, and computing them separately avoids the `ε^{1/k}`
//! splitting that a Jordan chain across blocks would otherwise cause.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::classes::ClassAnalysis;
use crate::error::{Error, Result};
use crate::linalg::nullspace;
use crate::matrix::{Matrix, NonnegMatrix};
use crate::scalar::{Field, Tolerance};

fn to_dmatrix(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

/// Zeroes imaginary parts below `eig_tol` (relative to the modulus).
pub fn snap_real(z: Complex64, tol: &Tolerance) -> Complex64 {
    if z.im.abs() <= tol.eig_tol * z.norm().max(1.0) {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

fn sort_spectrum(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// All eigenvalues of a dense real matrix, with multiplicity, sorted by real
/// part descending.
pub fn eig_all(m: &Matrix<f64>, tol: &Tolerance) -> Result<Vec<Complex64>> {
    if m.rows() == 0 {
        return Ok(Vec::new());
    }
    if m.entries().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite matrix entry".into()));
    }
    let mut v: Vec<Complex64> = to_dmatrix(m)
        .complex_eigenvalues()
        .iter()
        .map(|&z| snap_real(z, tol))
        .collect();
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("eigensolver failed".into()));
    }
    sort_spectrum(&mut v);
    Ok(v)
}

/// Spectrum of a nonnegative matrix as the union of its class-block spectra.
pub fn block_spectrum<T: Field>(p: &NonnegMatrix<T>, tol: &Tolerance) -> Result<Vec<Complex64>> {
    let a = ClassAnalysis::condense(p);
    let f = p.to_f64();
    let mut all = Vec::with_capacity(p.n());
    for c in a.classes() {
        all.extend(eig_all(f.principal(c).matrix(), tol)?);
    }
    sort_spectrum(&mut all);
    Ok(all)
}

/// Largest real eigenvalue strictly below `rho`, or `None` when there is
/// none (the `−∞` case). Eigenvalues within `eig_tol` of `rho` count as `rho`.
pub fn largest_real_below(spectrum: &[Complex64], rho: f64, tol: &Tolerance) -> Option<f64> {
    spectrum
        .iter()
        .filter(|z| z.im == 0.0)
        .map(|z| z.re)
        .filter(|&r| r < rho - tol.eig_tol * rho.abs().max(1.0))
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))))
}

/// Basis of the generalized eigenspace `N((M − μI)^n)`.
pub fn generalized_eigenspace<T: Field>(m: &Matrix<T>, mu: &T) -> Vec<Vec<T>> {
    nullspace(&m.shift(mu).pow(m.rows()))
}

/// Basis of the sum of the generalized eigenspaces of `m` for eigenvalues
/// with modulus at least `lambda`, or `None` when some eigenvalue modulus is
/// within `1e-6` (relative) of `lambda` and the split is ambiguous.
pub fn dominant_subspace(
    m: &Matrix<f64>,
    spectrum: &[Complex64],
    lambda: f64,
) -> Option<Vec<Vec<f64>>> {
    let n = m.rows();
    let margin = 1e-6 * lambda.abs().max(1.0);
    if spectrum.iter().any(|z| (z.norm() - lambda).abs() <= margin) {
        return None;
    }
    let chosen: Vec<Complex64> = spectrum.iter().copied().filter(|z| z.norm() > lambda).collect();
    if chosen.is_empty() {
        return Some(Vec::new());
    }
    let a = to_dmatrix(m).map(|v| Complex64::new(v, 0.0));
    let mut q = DMatrix::<Complex64>::identity(n, n);
    for mu in &chosen {
        q = &q * (&a - DMatrix::<Complex64>::identity(n, n) * *mu);
        let scale = q.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        if scale > 0.0 {
            q /= Complex64::new(scale, 0.0);
        }
    }
    let basis = smallest_right_singular(q, chosen.len());
    // The kernel of a real matrix has a real basis; rotate each vector to its
    // dominant phase and keep the real part.
    Some(
        basis
            .into_iter()
            .map(|v| {
                let pivot = v
                    .iter()
                    .copied()
                    .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
                    .unwrap_or(Complex64::new(1.0, 0.0));
                let phase = pivot.conj() / pivot.norm().max(f64::MIN_POSITIVE);
                v.iter().map(|z| (z * phase).re).collect()
            })
            .collect(),
    )
}

fn smallest_right_singular(m: DMatrix<Complex64>, k: usize) -> Vec<Vec<Complex64>> {
    let n = m.ncols();
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| {
        svd.singular_values[a]
            .partial_cmp(&svd.singular_values[b])
            .unwrap()
    });
    idx.into_iter()
        .take(k)
        .map(|r| (0..n).map(|j| v_t[(r, j)].conj()).collect())
        .collect()
}

/// One generalized-eigenvector component of a vector.
#[derive(Debug, Clone)]
pub struct Component {
    pub lambda: Complex64,
    pub multiplicity: usize,
    pub vector: Vec<Complex64>,
    pub order: usize,
}

#[derive(Debug, Clone)]
pub struct GeneralizedDecomposition {
    pub components: Vec<Component>,
    /// Some cluster merged numerically distinct eigenvalues.
    pub merged: bool,
}

/// Writes `x` as a sum of generalized eigenvectors of `p` for distinct
/// eigenvalues. Components of negligible norm are omitted.
pub fn decompose_generalized(
    p: &NonnegMatrix<f64>,
    x: &[f64],
    tol: &Tolerance,
) -> Result<GeneralizedDecomposition> {
    let n = p.n();
    let spectrum = block_spectrum(p, tol)?;
    let cluster_tol = 1e-6;
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for z in spectrum {
        match clusters
            .iter_mut()
            .find(|c| (c[0] - z).norm() <= cluster_tol * c[0].norm().max(1.0))
        {
            Some(c) => c.push(z),
            None => clusters.push(vec![z]),
        }
    }
    let merged = clusters
        .iter()
        .any(|c| c.iter().any(|z| (z - c[0]).norm() > tol.eig_tol * c[0].norm().max(1.0)));
    let a = to_dmatrix(p.matrix()).map(|v| Complex64::new(v, 0.0));
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut centers = Vec::new();
    let mut columns: Vec<Vec<Complex64>> = Vec::new();
    for c in &clusters {
        let mu = c.iter().sum::<Complex64>() / c.len() as f64;
        let shifted = &a - &id * mu;
        let mut power = id.clone();
        for _ in 0..c.len() {
            power = &power * &shifted;
        }
        let basis = smallest_right_singular(power, c.len());
        centers.push((mu, c.len(), columns.len()));
        columns.extend(basis);
    }
    let basis = DMatrix::from_fn(n, n, |i, j| columns[j][i]);
    let rhs = nalgebra::DVector::from_iterator(n, x.iter().map(|&v| Complex64::new(v, 0.0)));
    let coeffs = basis
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numeric("generalized eigenbasis is singular".into()))?;
    let xnorm = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(f64::MIN_POSITIVE);
    let pnorm = p.matrix().max_abs().max(1.0);
    let mut components = Vec::new();
    for (mu, k, start) in centers {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for j in start..start + k {
            for (i, vi) in v.iter_mut().enumerate() {
                *vi += columns[j][i] * coeffs[j];
            }
        }
        let norm = v.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        if norm <= 1e-9 * xnorm {
            continue;
        }
        let shifted = &a - &id * mu;
        let mut w = nalgebra::DVector::from_vec(v.clone());
        let mut order = k;
        for m in 1..=k {
            w = &shifted * w;
            let wn = w.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
            if wn <= 1e-6 * norm * pnorm.powi(m as i32) {
                order = m;
                break;
            }
        }
        components.push(Component {
            lambda: snap_real(mu, tol),
            multiplicity: k,
            vector: v,
            order,
        });
    }
    Ok(GeneralizedDecomposition { components, merged })
}
