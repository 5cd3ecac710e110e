//! Numeric scalars.
//!
//! Every algorithm in the crate is generic over [`Field`], which is implemented
//! for exact rationals ([`Rational`]) and binary64 floats. The mode of a
//! computation is fixed by its type parameter, so rational and float values can
//! never meet inside one computation.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Mode::Rational),
            "float" => Ok(Mode::Float),
            other => Err(Error::Input(format!("unknown mode `{other}`"))),
        }
    }
}

pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// `None` for non-finite input.
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    /// Exact rational value. Floats convert through their binary expansion.
    fn to_rational(&self) -> Option<Rational>;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    /// Rational mode emits canonical `"p/q"` strings, float mode plain numbers.
    fn to_json(&self) -> serde_json::Value;

    fn is_exact() -> bool {
        Self::MODE == Mode::Rational
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

impl Field for Rational {
    const MODE: Mode = Mode::Rational;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_f64(v: f64) -> Option<Self> {
        Rational::from_float(v)
    }

    fn to_f64(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                // Huge numerator or denominator: scale both down first.
                let shift = self.numer().bits().max(self.denom().bits()).saturating_sub(1000);
                let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
                let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

impl Field for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        <Rational as Field>::to_f64(r)
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<Rational> {
        Rational::from_float(*self)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

/// Parses `"p/q"`, `"p"` or a decimal such as `"0.25"` or `"-1.5e-3"` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Input(format!("cannot parse `{s}` as a rational"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Input(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Best rational approximations of `x` with denominator at most `max_denom`,
/// from the continued-fraction expansion, most accurate last.
pub fn convergents(x: f64, max_denom: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let a_int = match BigInt::from_f64(a) {
            Some(v) => v,
            None => break,
        };
        let h2 = &a_int * &h1 + &h0;
        let k2 = &a_int * &k1 + &k0;
        if k2 > BigInt::from(max_denom) {
            break;
        }
        out.push(Rational::new(h2.clone(), k2.clone()));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = rest - a;
        if frac.abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    out
}

/// Tolerances used by float-mode comparisons. Rational-mode comparisons are
/// always exact and ignore these values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Residual and sign decisions.
    pub eq_tol: f64,
    /// Eigenvalue comparisons.
    pub eig_tol: f64,
    /// Iteration cap for power-type methods.
    pub power_iters: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eq_tol: 1e-9,
            eig_tol: 1e-8,
            power_iters: 10_000,
        }
    }
}

impl Tolerance {
    pub fn new(eq_tol: f64, eig_tol: f64, power_iters: usize) -> Result<Self> {
        if !(eq_tol > 0.0 && eig_tol > 0.0 && power_iters > 0) {
            return Err(Error::Input("tolerances must be strictly positive".into()));
        }
        Ok(Tolerance {
            eq_tol,
            eig_tol,
            power_iters,
        })
    }

    /// Sign of `v`, treating `|v| <= eq_tol` as zero in float mode.
    pub fn sign<T: Field>(&self, v: &T) -> Ordering {
        if T::is_exact() {
            v.partial_cmp(&T::zero()).unwrap_or(Ordering::Equal)
        } else {
            let x = v.to_f64();
            if x.abs() <= self.eq_tol {
                Ordering::Equal
            } else if x > 0.0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
    }

    pub fn is_zero<T: Field>(&self, v: &T) -> bool {
        self.sign(v) == Ordering::Equal
    }

    /// Eigenvalue comparison: exact in rational mode, otherwise equal when
    /// `|a-b| <= eig_tol * max(1,|a|,|b|)`.
    pub fn eig_cmp<T: Field>(&self, a: &T, b: &T) -> Ordering {
        if T::is_exact() {
            a.partial_cmp(b).unwrap_or(Ordering::Equal)
        } else {
            let (x, y) = (a.to_f64(), b.to_f64());
            let scale = 1f64.max(x.abs()).max(y.abs());
            if (x - y).abs() <= self.eig_tol * scale {
                Ordering::Equal
            } else if x < y {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    }

    pub fn eig_eq<T: Field>(&self, a: &T, b: &T) -> bool {
        self.eig_cmp(a, b) == Ordering::Equal
    }

    pub fn eig_lt<T: Field>(&self, a: &T, b: &T) -> bool {
        self.eig_cmp(a, b) == Ordering::Less
    }

    pub fn eig_le<T: Field>(&self, a: &T, b: &T) -> bool {
        self.eig_cmp(a, b) != Ordering::Greater
    }
}

/// `(ρ_x, ord(x))` of a vector relative to a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPair<T> {
    pub rho: T,
    pub ord: usize,
}

impl<T: Field> SpectralPair<T> {
    pub fn new(rho: T, ord: usize) -> Self {
        SpectralPair { rho, ord }
    }

    pub fn zero() -> Self {
        SpectralPair {
            rho: T::zero(),
            ord: 0,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "rho": self.rho.to_json(), "ord": self.ord })
    }
}

/// Lexicographic order on spectral pairs.
pub fn lex_leq<T: Field>(a: &SpectralPair<T>, b: &SpectralPair<T>) -> bool {
    a.rho < b.rho || (a.rho == b.rho && a.ord <= b.ord)
}

/// [`lex_leq`] with float radii compared under `tol.eig_tol`.
pub fn lex_leq_tol<T: Field>(a: &SpectralPair<T>, b: &SpectralPair<T>, tol: &Tolerance) -> bool {
    match tol.eig_cmp(&a.rho, &b.rho) {
        Ordering::Less => true,
        Ordering::Equal => a.ord <= b.ord,
        Ordering::Greater => false,
    }
}
