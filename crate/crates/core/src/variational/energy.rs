use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec};
use crate::nonlinearity::Integrand;
use crate::spectral::{mass, FractionalOperator};

/// `E(u) = ½|∇_s u|²₂ − ∫F(|x|, u)` split into its parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// `½ |∇_s u|²₂`
    pub kinetic: f64,
    /// `∫F(|x|, u)`
    pub potential: f64,
    /// `kinetic − potential`
    pub total: f64,
    /// `∫u²`
    pub mass: f64,
}

impl EnergyBreakdown {
    /// The fractional Dirichlet energy `|∇_s u|²₂ = 2 · kinetic`.
    pub fn dirichlet(&self) -> f64 {
        2.0 * self.kinetic
    }
}

/// Energy and gradient evaluator for one (grid, s, F) triple.
pub struct EnergyFunctional<'a> {
    op: FractionalOperator,
    spec: &'a dyn Integrand,
    radii: Vec<f64>,
}

impl<'a> EnergyFunctional<'a> {
    pub fn new(grid: GridSpec, s: f64, spec: &'a dyn Integrand) -> Result<Self> {
        let op = FractionalOperator::new(grid, s)?;
        let radii = (0..grid.len()).map(|site| grid.radius(site)).collect();
        Ok(Self { op, spec, radii })
    }

    pub fn operator(&self) -> &FractionalOperator {
        &self.op
    }

    fn potential(&self, u: &Field) -> f64 {
        let sum: f64 = u.values().iter().zip(&self.radii).map(|(&t, &r)| self.spec.primitive(r, t)).sum();
        sum * u.grid().cell_volume()
    }

    pub fn energy(&self, u: &Field) -> Result<EnergyBreakdown> {
        let kinetic = 0.5 * self.op.dirichlet_energy(u)?;
        let potential = self.potential(u);
        Ok(EnergyBreakdown { kinetic, potential, total: kinetic - potential, mass: mass(u) })
    }

    /// L² gradient `(−Δ)^s u − f(|x|, u)`.
    pub fn gradient(&self, u: &Field) -> Result<Field> {
        let lap = self.op.apply(u)?;
        let values = lap
            .values()
            .iter()
            .zip(u.values())
            .zip(&self.radii)
            .map(|((l, &t), &r)| l - self.spec.density(r, t))
            .collect();
        Field::new(*u.grid(), values)
    }
}

pub fn energy(u: &Field, s: f64, spec: &dyn Integrand) -> Result<EnergyBreakdown> {
    EnergyFunctional::new(*u.grid(), s, spec)?.energy(u)
}

pub fn energy_gradient(u: &Field, s: f64, spec: &dyn Integrand) -> Result<Field> {
    EnergyFunctional::new(*u.grid(), s, spec)?.gradient(u)
}

/// Rescales `u` onto the mass sphere `∫u² = c²`.
pub fn project_to_sphere(u: &Field, c: f64) -> Result<Field> {
    let m = mass(u);
    if m == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(u.scaled(c / m.sqrt()))
}
