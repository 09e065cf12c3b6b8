//! The constrained energy, its minimization, and the Weinstein quotient.

mod energy;
mod solver;
mod weinstein;

pub use energy::{energy, energy_gradient, project_to_sphere, EnergyBreakdown, EnergyFunctional};
pub use solver::{solve_pc, ConstraintMode, InitKind, SolveConfig, SolveResult};
pub use weinstein::{
    check_gn_inequality, gn_constant, gn_theta, minimize_weinstein, weinstein_quotient, weinstein_trials, GnCheck,
    WeinsteinConfig, WeinsteinResult, GN_SLACK,
};
