//! Dirichlet principal eigenvalues on truncated intervals, domain sweeps,
//! RK4 initial value problems and Rayleigh quotients.

mod eigen;
mod grid;
mod ivp;
mod rayleigh;
pub mod tridiag;

pub use eigen::{
    default_spacing, dirichlet_principal_eigenvalue, extrapolated_eigenvalue, eigenvalue_sweep, EigenResult, SweepPoint,
    BISECTION_TOL, INVERSE_ITERATION_MAX, INVERSE_ITERATION_TOL,
};
pub use grid::Grid;
pub use ivp::{solve_ivp, IvpSolution, BLOW_UP};
pub use rayleigh::{discrete_rayleigh_quotient, rayleigh_quotient};
