//! Independent ground truth: exact LP feasibility, dense spectra, minimal
//! polynomials and generalized eigenspaces. None of the decision procedures in
//! the rest of the crate route through these; tests compare against them.

pub mod eig;
pub mod lp;
pub mod poly;
pub mod queries;

pub use eig::{eig_all, snap_real};
pub use lp::{lp_feasible, LpFeasibility, LpOutcome, LpProblem};
pub use poly::{
    component_order, index_by_rank, krylov_local_rho, minimal_polynomial, order_by_rank,
    peripheral_orders, Poly,
};
