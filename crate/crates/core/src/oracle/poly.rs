//! Exact polynomials over the rationals, minimal polynomials of vectors, and
//! the rank-based index/order oracles built on them.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::linalg::{rank, solve_any};
use crate::matrix::Matrix;
use crate::scalar::{Field, Rational};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn one() -> Self {
        Poly(vec![Rational::one()])
    }

    /// `t − r`.
    pub fn linear(r: &Rational) -> Self {
        Poly(vec![-r.clone(), Rational::one()])
    }

    /// `t^k − c`.
    pub fn binomial(k: usize, c: &Rational) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[0] = -c.clone();
        v[k] = v[k].clone() + Rational::one();
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Poly(self.0.iter().map(|c| c.clone() / l.clone()).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return (Poly(Vec::new()), self.clone());
        }
        let dl = d.lead();
        let shift = r.len() - d.0.len();
        let mut quot = vec![Rational::zero(); shift + 1];
        for k in (0..=shift).rev() {
            let c = r[k + d.0.len() - 1].clone() / dl.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                r[k + j] = r[k + j].clone() - c.clone() * dj.clone();
            }
            quot[k] = c;
        }
        (Poly::new(quot), Poly::new(r))
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.divrem(self).1.is_zero()
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * Rational::from_int(i as i64))
                .collect(),
        )
    }

    /// Product of the distinct irreducible factors (over `Q`).
    pub fn squarefree(&self) -> Poly {
        if self.degree() == 0 {
            return Poly::one();
        }
        self.divrem(&self.gcd(&self.derivative())).0.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Multiplicity of the rational root `r`.
    pub fn multiplicity(&self, r: &Rational) -> usize {
        let lin = Poly::linear(r);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() && p.degree() > 0 && p.eval(r).is_zero() {
            p = p.divrem(&lin).0;
            k += 1;
        }
        k
    }

    /// Floating-point roots via companion-matrix eigenvalues.
    pub fn roots(&self) -> Vec<Complex64> {
        let d = self.degree();
        if self.is_zero() || d == 0 {
            return Vec::new();
        }
        let m = self.monic();
        let c: Vec<f64> = m.0.iter().map(|v| v.to_f64()).collect();
        let comp = DMatrix::from_fn(d, d, |i, j| {
            if j == d - 1 {
                -c[i]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        comp.complex_eigenvalues().iter().copied().collect()
    }
}

/// Minimal polynomial of `x` with respect to `a`: the monic `p` of least
/// degree with `p(a) x = 0`. Its roots are exactly the eigenvalues whose
/// generalized-eigenvector components of `x` are nonzero, with multiplicity
/// equal to the order of that component.
pub fn minimal_polynomial(a: &Matrix<Rational>, x: &[Rational]) -> Poly {
    let n = a.rows();
    if x.iter().all(|e| e.is_zero()) {
        return Poly::one();
    }
    let mut krylov = vec![x.to_vec()];
    let mut v = a.mul_vec(x);
    loop {
        let basis = Matrix::from_fn(n, krylov.len(), |i, j| krylov[j][i].clone());
        if let Some(c) = solve_any(&basis, &v) {
            let mut coeffs: Vec<Rational> = c.into_iter().map(|e| -e).collect();
            coeffs.push(Rational::one());
            return Poly::new(coeffs);
        }
        assert!(krylov.len() < n, "Krylov sequence exceeds the dimension");
        krylov.push(v.clone());
        v = a.mul_vec(&v);
    }
}

/// Spectral radius of `a` restricted to the cyclic space of `x`.
pub fn krylov_local_rho(a: &Matrix<Rational>, x: &[Rational]) -> f64 {
    minimal_polynomial(a, x)
        .squarefree()
        .roots()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Order of the `lambda`-component of `x`: its multiplicity as a root of the
/// minimal polynomial of `x`.
pub fn component_order(a: &Matrix<Rational>, x: &[Rational], lambda: &Rational) -> usize {
    minimal_polynomial(a, x).multiplicity(lambda)
}

/// Index of `lambda` by ranks: the least `k` with
/// `rank (A − λI)^k = rank (A − λI)^{k+1}`.
pub fn index_by_rank(a: &Matrix<Rational>, lambda: &Rational) -> usize {
    let b = a.shift(lambda);
    let mut power = Matrix::identity(a.rows());
    let mut prev = rank(&power);
    for k in 0..=a.rows() {
        power = power.mul(&b);
        let r = rank(&power);
        if r == prev {
            return k;
        }
        prev = r;
    }
    a.rows()
}

/// Order of the `lambda`-component of `x` by ranks: the least `m` with
/// `(A − λI)^m x` in the range of `(A − λI)^n`, the complementary invariant
/// subspace.
pub fn order_by_rank(a: &Matrix<Rational>, x: &[Rational], lambda: &Rational) -> usize {
    let n = a.rows();
    let b = a.shift(lambda);
    let range = b.pow(n);
    let mut v = x.to_vec();
    for m in 0..=n {
        if solve_any(&range, &v).is_some() {
            return m;
        }
        v = b.mul_vec(&v);
    }
    n
}

/// Peripheral structure of `x` at modulus `rho` (a positive rational): the
/// order of the `rho`-component, and the largest order among components at
/// other eigenvalues of modulus exactly `rho` (`None` if there are none).
///
/// Every such eigenvalue of a nonnegative matrix is `rho·ω` with `ω^k = 1` for
/// some `k ≤ n`, so the peripheral part is found exactly through gcds with
/// `t^k − rho^k`.
pub fn peripheral_orders(
    a: &Matrix<Rational>,
    x: &[Rational],
    rho: &Rational,
) -> (usize, Option<usize>) {
    let n = a.rows();
    let minpoly = minimal_polynomial(a, x);
    let ord = minpoly.multiplicity(rho);
    let rest = minpoly.divrem(&Poly::linear(rho).pow(ord)).0;
    let mut cyclic = Poly::one();
    let mut rk = Rational::one();
    for k in 1..=n {
        rk *= rho.clone();
        cyclic = cyclic.mul(&Poly::binomial(k, &rk));
    }
    let shared = rest.gcd(&cyclic);
    if shared.degree() == 0 {
        return (ord, None);
    }
    let phi = shared.squarefree();
    let part = rest.gcd(&phi.pow(n));
    let max = (1..=n).find(|&m| part.divides(&phi.pow(m))).unwrap_or(n);
    (ord, Some(max))
}
