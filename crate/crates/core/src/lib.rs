//! Nonnegative solutions of `(λI − P)x = b` and `(P − λI)x = b` over the
//! nonnegative orthant, with the Perron–Frobenius class apparatus behind them.

pub mod alternating;
pub mod checks;
pub mod classes;
pub mod collatz_wielandt;
pub mod eq_type1;
pub mod eq_type2;
pub mod error;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod matrix;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
