//! Independent Fredholm/Nyström solver used to cross-validate the spectral
//! solution.

pub mod compare;
pub mod kernels;
pub mod legendre;
pub mod nystrom;

pub use compare::{compare_solutions, Discrepancy, JumpFieldSource, SampledField, SpectralField};
pub use kernels::{green_g, green_g_t, green_g_tt, green_k, hilbert_green_t, omega1};
pub use legendre::{GaussLegendre, LegendreOperators};
pub use nystrom::{
    nystrom_solve, nystrom_solve_mode, operator_norms, OperatorNorms, OracleSolution, DEFAULT_ORACLE_NODES,
};
