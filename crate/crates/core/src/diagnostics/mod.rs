//! Regime classification, coercivity bounds, the dilation family and the
//! mass scan.

mod coercivity;
mod regime;
mod scaling;
mod scan;

pub use coercivity::{
    coercivity_lower_bound, critical_kinetic_coefficient, critical_lower_bound, critical_mass_bound,
    critical_mass_literal, optimal_epsilon, CoercivityParams,
};
pub use regime::{
    alpha_max_frank_lenzmann, classify_regime, regime_of, ExtendedReal, Regime, RegimeReport, Scalar, REGIME_MARGIN,
};
pub use scaling::{fit_slope, log_spaced, scaling_family, ScalingRow, ScalingTable, MIN_POINTS_ACROSS};
pub use scan::{scan_mass, ScanRow, ScanTable, SCAN_MARGIN_FLOOR};
