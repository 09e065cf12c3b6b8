//! Pseudospectral tools for mass-constrained fractional variational problems.
//!
//! The central problem is
//!
//! ```text
//! I_c = inf { ½|∇_s u|²₂ − ∫F(|x|, u) : ∫u² = c² }
//! ```
//!
//! on a periodic box in one or two dimensions, where `|∇_s u|²₂` is the
//! quadratic form of the fractional Laplacian `(−Δ)^s`. Besides the solver
//! the crate ships the discrete inequalities that make symmetric minimizers
//! plausible (Pólya–Szegő, Riesz-type rearrangement), the sharp
//! Gagliardo–Nirenberg constant via the Weinstein quotient, and diagnostics
//! for the sub/critical/supercritical trichotomy.
//!
//! ```
//! use fracvar::{solve_pc, GridSpec, NonlinearitySpec, SolveConfig};
//!
//! let grid = GridSpec::line(128, 30.0)?;
//! let spec = NonlinearitySpec::pure_power(1.0, 1.0)?;
//! let mut config = SolveConfig::new(grid, 0.5, spec, 1.0);
//! config.max_iters = 50;
//! let result = solve_pc(&config)?;
//! assert!(result.energy.total < 0.0);
//! # Ok::<(), fracvar::Error>(())
//! ```

pub mod diagnostics;
mod error;
pub mod fields;
pub mod gagliardo;
mod grid;
pub mod nonlinearity;
pub mod rearrange;
mod rng;
pub mod spectral;
pub mod variational;

pub use error::{Error, Result};
pub use fields::Profile;
pub use grid::{Field, GridSpec, EDGE_BAND_START, EDGE_MASS_LIMIT};
pub use nonlinearity::{Integrand, NonlinearityKind, NonlinearitySpec};
pub use rng::SplitMix64;
pub use spectral::{dirichlet_energy, fractional_laplacian, lp_norm, mass, FractionalOperator};
pub use variational::{
    energy, minimize_weinstein, solve_pc, weinstein_quotient, ConstraintMode, EnergyBreakdown, InitKind, SolveConfig,
    SolveResult, WeinsteinConfig,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/discretization.md")]
    mod discretization {}
    #[doc = include_str!("../../../book/src/nonlinearities.md")]
    mod nonlinearities {}
    #[doc = include_str!("../../../book/src/rearrangement.md")]
    mod rearrangement {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/weinstein.md")]
    mod weinstein {}
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    mod diagnostics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
