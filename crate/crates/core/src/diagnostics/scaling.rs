//! The mass-preserving dilation family `u_λ = λ^{N/2} φ(λ|x|)`.
//!
//! Along it the kinetic part scales like `λ^{2s}` and a pure-power potential
//! like `λ^{Nℓ/2}`, so the sign of `2s − Nℓ/2` decides whether the energy is
//! eventually increasing or unbounded below.

use serde::Serialize;

use crate::error::{check_param, Result};
use crate::fields::Profile;
use crate::grid::GridSpec;
use crate::nonlinearity::{Integrand, NonlinearitySpec};
use crate::spectral::mass;
use crate::variational::{EnergyBreakdown, EnergyFunctional};

/// Fewer grid points than this across the compressed width is flagged.
pub const MIN_POINTS_ACROSS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingRow {
    pub lambda: f64,
    pub energy: EnergyBreakdown,
    pub under_resolved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of `log kinetic` against `log λ`.
    pub kinetic_slope: f64,
    /// Same for `log potential`; `None` when some potential is not positive.
    pub potential_slope: Option<f64>,
    /// Whether the total energy decreases strictly over the last five rows.
    pub tail_decreasing: bool,
    pub warnings: Vec<String>,
}

impl ScalingTable {
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("lambda,kinetic,potential,total\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                r.lambda, r.energy.kinetic, r.energy.potential, r.energy.total
            ));
        }
        out
    }

    pub fn last_total(&self) -> Option<f64> {
        self.rows.last().map(|r| r.energy.total)
    }
}

/// Ordinary least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// `count` points from `lo` to `hi`, equally spaced in `log λ`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| if i + 1 == count { hi } else { (a + (b - a) * i as f64 / (count - 1) as f64).exp() }).collect()
}

/// Evaluates the energy along the family, each member rescaled onto
/// `∫u² = c²` to absorb truncation error.
///
/// `s = 1` is accepted for classical cross-checks.
pub fn scaling_family(
    grid: GridSpec,
    profile: Profile,
    s: f64,
    spec: &NonlinearitySpec,
    c: f64,
    lambdas: &[f64],
) -> Result<ScalingTable> {
    check_param(!lambdas.is_empty(), "lambdas", || "empty λ grid".into())?;
    check_param(lambdas.iter().all(|&l| l >= 1.0 && l.is_finite()), "lambdas", || "every λ must be >= 1".into())?;
    check_param(c > 0.0 && c.is_finite(), "c", || format!("{c} must be > 0"))?;
    let integrand: &dyn Integrand = spec;
    let functional = EnergyFunctional::new(grid, s, integrand)?;
    let mut warnings = Vec::new();
    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let u = profile.dilated(grid, lambda)?;
        let u = u.scaled(c / mass(&u).sqrt());
        let across = 2.0 / (lambda * grid.spacing());
        let under_resolved = across < MIN_POINTS_ACROSS;
        if under_resolved {
            warnings.push(format!("lambda = {lambda}: only {across:.1} grid points across the profile width"));
        }
        if u.truncation_suspect() {
            warnings.push(format!("lambda = {lambda}: profile reaches the edge band"));
        }
        rows.push(ScalingRow { lambda, energy: functional.energy(&u)?, under_resolved });
    }
    let logl: Vec<f64> = rows.iter().map(|r| r.lambda.ln()).collect();
    let (kinetic_slope, potential_slope) = if rows.len() >= 2 {
        let logk: Vec<f64> = rows.iter().map(|r| r.energy.kinetic.ln()).collect();
        let pot = rows
            .iter()
            .all(|r| r.energy.potential > 0.0)
            .then(|| fit_slope(&logl, &rows.iter().map(|r| r.energy.potential.ln()).collect::<Vec<_>>()));
        (fit_slope(&logl, &logk), pot)
    } else {
        warnings.push("single lambda: slopes undefined".into());
        (f64::NAN, None)
    };
    let tail = &rows[rows.len().saturating_sub(5)..];
    let tail_decreasing = tail.len() >= 2 && tail.windows(2).all(|w| w[1].energy.total < w[0].energy.total);
    Ok(ScalingTable { rows, kinetic_slope, potential_slope, tail_decreasing, warnings })
}
