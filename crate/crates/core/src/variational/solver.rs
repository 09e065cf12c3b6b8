//! Projected gradient flow for the mass-constrained problem.
//!
//! Each iteration takes the L² gradient `g = (−Δ)^s u − f(|x|, u)`, turns
//! it into a descent direction tangent to the sphere `∫u² = c²` and steps
//! back onto the sphere. The step starts at `config.step` and is halved
//! until the energy does not increase, so the accepted energies form a
//! non-increasing sequence. Every `symmetrize_every` iterations the iterate
//! is replaced by its Schwarz symmetrization when that does not raise the
//! energy.
//!
//! With `precondition` set (the default) the direction is the gradient in
//! the metric of `σ + (−Δ)^s`, `σ` being the current Lagrange multiplier
//! in absolute value. This removes the `|k|_max^{2s}` stiffness that
//! otherwise forces steps so small that, near the minimizer, the energy
//! decrease per step drops below rounding. When no preconditioned step
//! decreases the energy, a plain gradient step with the explicit stable
//! step `1.9/|k|_max^{2s}` is tried before giving up.
//!
//! In ball mode the constraint set is `{u ≥ 0, ∫u² ≤ c²}`; the step is a
//! gradient step followed by the exact projection onto that set (clip
//! negatives, then shrink onto the ball if needed).

use serde::{Deserialize, Serialize};

use super::energy::{EnergyBreakdown, EnergyFunctional};
use super::weinstein::{gn_constant, minimize_weinstein, WeinsteinConfig};
use crate::diagnostics::{critical_mass_bound, regime_of, Regime};
use crate::error::{check_param, Error, Result};
use crate::fields::gaussian;
use crate::grid::{Field, GridSpec};
use crate::nonlinearity::{Integrand, NonlinearityKind, NonlinearitySpec};
use crate::rearrange::SiteOrder;
use crate::rng::SplitMix64;
use crate::spectral::mass;

/// Steps below this abort the backtracking.
pub const MIN_STEP: f64 = 1e-12;
/// Window (in iterations) for the energy stagnation test.
pub const ENERGY_WINDOW: usize = 10;
/// Energies below this magnitude are compared in absolute terms.
pub const ENERGY_FLOOR: f64 = 1e-12;
/// Relative amplitude of the symmetry-breaking noise in `SeededNoise`.
pub const NOISE_AMPLITUDE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    /// Gaussian of width L/10 centred at the origin.
    Gaussian,
    /// The constant field.
    Constant,
    /// Gaussian plus uniform noise of amplitude 1e−2 · max.
    SeededNoise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintMode {
    /// `∫u² = c²`
    Sphere,
    /// `u ≥ 0, ∫u² ≤ c²`
    Ball,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub grid: GridSpec,
    pub s: f64,
    pub spec: NonlinearitySpec,
    pub c: f64,
    /// First trial step of every backtracking search.
    pub step: f64,
    /// Use the `σ + (−Δ)^s` metric for the descent direction.
    pub precondition: bool,
    pub max_iters: usize,
    pub tol_energy: f64,
    pub tol_residual: f64,
    /// Symmetrize every k-th iterate; 0 disables.
    pub symmetrize_every: usize,
    pub seed: u64,
    pub init: InitKind,
    pub inequality_mode: ConstraintMode,
    /// Admits `s = 1` (classical Laplacian) for analytic cross-checks.
    pub oracle_mode: bool,
    /// Recorded only: the flow itself is single-threaded.
    pub threads: usize,
    /// Norm-form Gagliardo–Nirenberg constant used by the critical-mass
    /// check; computed on the solve grid (N = 1) when absent.
    pub gn_constant: Option<f64>,
}

impl SolveConfig {
    pub fn new(grid: GridSpec, s: f64, spec: NonlinearitySpec, c: f64) -> Self {
        Self {
            grid,
            s,
            spec,
            c,
            step: 1.0,
            precondition: true,
            max_iters: 200_000,
            tol_energy: 1e-12,
            tol_residual: 1e-6,
            symmetrize_every: 10,
            seed: 0,
            init: InitKind::Gaussian,
            inequality_mode: ConstraintMode::Sphere,
            oracle_mode: false,
            threads: 1,
            gn_constant: None,
        }
    }

    /// `1.9 / (|k|_max)^{2s}`, just inside the stability limit of the
    /// kinetic part for unpreconditioned steps.
    pub fn default_step(grid: &GridSpec, s: f64) -> f64 {
        let kmax = std::f64::consts::PI * grid.n() as f64 / grid.box_length();
        let kmax_sq = grid.dim() as f64 * kmax * kmax;
        1.9 / kmax_sq.powf(s)
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.s;
        if self.oracle_mode {
            check_param(s > 0.0 && s <= 1.0, "s", || format!("{s} not in (0, 1]"))?;
        } else {
            check_param(s > 0.0 && s < 1.0, "s", || format!("{s} not in (0, 1); s = 1 needs oracle_mode"))?;
        }
        check_param(self.c > 0.0 && self.c.is_finite(), "c", || format!("{} must be > 0", self.c))?;
        check_param(self.step > 0.0 && self.step.is_finite(), "step", || format!("{} must be > 0", self.step))?;
        check_param(self.tol_energy > 0.0, "tol_energy", || format!("{} must be > 0", self.tol_energy))?;
        check_param(self.tol_residual > 0.0, "tol_residual", || format!("{} must be > 0", self.tol_residual))?;
        Ok(())
    }

    /// Refuses supercritical exponents and critical ones above the mass bound.
    pub fn check_regime(&self) -> Result<()> {
        if self.spec.kind() == NonlinearityKind::Zero {
            return Ok(());
        }
        let ell = self.spec.ell();
        let dim = self.grid.dim();
        check_param(ell > 0.0, "ell", || format!("{ell} must be > 0"))?;
        match regime_of(ell, self.s, dim) {
            Regime::Subcritical => Ok(()),
            Regime::Supercritical => Err(Error::Regime(format!(
                "supercritical: ell = {ell} > 4s/N = {}; the infimum is -infinity (see the scaling family)",
                4.0 * self.s / dim as f64
            ))),
            Regime::Critical => {
                let kprime = match self.gn_constant {
                    Some(k) => k,
                    None if dim == 1 => {
                        let mut wc = WeinsteinConfig::new(self.grid, self.s, ell);
                        wc.seed = self.seed;
                        gn_constant(minimize_weinstein(&wc)?.j_min, ell)?
                    }
                    None => {
                        return Err(Error::Regime(
                            "critical exponent in two dimensions needs an explicit gn_constant".into(),
                        ))
                    }
                };
                let integral = kprime.powf(ell + 2.0);
                let bound = critical_mass_bound(self.spec.growth_constant(), integral, dim, self.s)?;
                if self.c < bound {
                    Ok(())
                } else {
                    Err(Error::Regime(format!("critical: c = {} is not below the mass bound {bound}", self.c)))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub minimizer: Field,
    pub energy: EnergyBreakdown,
    pub iterations: usize,
    pub converged: bool,
    /// `⟨∇E(u), u⟩ / c²` at exit.
    pub lagrange_multiplier: f64,
    /// `‖u − u*‖₂ / ‖u‖₂` at exit.
    pub symmetry_defect: f64,
    pub truncation_warning: bool,
    /// Projected-gradient norm (sphere) or gradient-mapping norm (ball) at exit.
    pub residual: f64,
    /// Energy of the initial field and of every accepted iterate.
    pub trace: Vec<EnergyBreakdown>,
}

fn initial_field(config: &SolveConfig) -> Result<Field> {
    let grid = config.grid;
    let base = match config.init {
        InitKind::Constant => Field::constant(grid, 1.0)?,
        InitKind::Gaussian | InitKind::SeededNoise => gaussian(grid, [0.0, 0.0], grid.box_length() / 10.0)?,
    };
    let base = if config.init == InitKind::SeededNoise {
        let mut rng = SplitMix64::new(config.seed);
        let amp = NOISE_AMPLITUDE * base.max_abs();
        let noisy = base.values().iter().map(|v| v + amp * rng.uniform(-1.0, 1.0)).collect();
        Field::new(grid, noisy)?
    } else {
        base
    };
    let target = match config.inequality_mode {
        ConstraintMode::Sphere => config.c,
        // start strictly inside the ball so the flow has to find the boundary
        ConstraintMode::Ball => 0.5 * config.c,
    };
    let m = mass(&base);
    let u = base.scaled(target / m.sqrt());
    match config.inequality_mode {
        ConstraintMode::Sphere => Ok(u),
        ConstraintMode::Ball => project_to_ball(&u, config.c),
    }
}

fn project_to_ball(u: &Field, c: f64) -> Result<Field> {
    let clipped = u.map(|v| v.max(0.0))?;
    let m = mass(&clipped);
    if m > c * c {
        Ok(clipped.scaled(c / m.sqrt()))
    } else {
        Ok(clipped)
    }
}

/// `g − (⟨g,u⟩/⟨u,u⟩) u`
fn tangential(g: &Field, u: &Field) -> Result<Field> {
    let uu = u.dot(u)?;
    if uu == 0.0 {
        return Ok(g.clone());
    }
    g.axpy(-g.dot(u)? / uu, u)
}

struct Flow<'a> {
    config: &'a SolveConfig,
    functional: EnergyFunctional<'a>,
    plain_step: f64,
}

impl Flow<'_> {
    fn take_step(&self, u: &Field, direction: &Field, tau: f64) -> Result<Field> {
        let moved = u.axpy(-tau, direction)?;
        match self.config.inequality_mode {
            ConstraintMode::Sphere => super::energy::project_to_sphere(&moved, self.config.c),
            ConstraintMode::Ball => project_to_ball(&moved, self.config.c),
        }
    }

    /// Stationarity residual at `u`: the tangential gradient norm on the
    /// sphere, the gradient-mapping norm on the ball.
    fn residual(&self, u: &Field, g: &Field) -> Result<f64> {
        match self.config.inequality_mode {
            ConstraintMode::Sphere => Ok(tangential(g, u)?.norm_l2()),
            ConstraintMode::Ball => {
                let tau = self.plain_step;
                let probe = self.take_step(u, g, tau)?;
                Ok(u.axpy(-1.0, &probe)?.norm_l2() / tau)
            }
        }
    }

    /// Plain descent direction.
    fn plain_direction(&self, u: &Field, g: &Field) -> Result<Field> {
        match self.config.inequality_mode {
            ConstraintMode::Sphere => tangential(g, u),
            ConstraintMode::Ball => Ok(g.clone()),
        }
    }

    /// On the ball, the mass constraint is active when `u` sits on the
    /// sphere and the gradient pulls outwards.
    fn on_active_sphere(&self, u: &Field, g: &Field) -> Result<bool> {
        let c2 = self.config.c * self.config.c;
        Ok(mass(u) >= c2 * (1.0 - 1e-10) && g.dot(u)? < 0.0)
    }

    /// Descent direction in the `σ + (−Δ)^s` metric.
    fn preconditioned_direction(&self, u: &Field, g: &Field) -> Result<Field> {
        let op = self.functional.operator();
        let uu = u.dot(u)?;
        let mu = if uu > 0.0 { g.dot(u)? / uu } else { 0.0 };
        let sigma = mu.abs().max(op.spectral_gap());
        let d = op.resolvent(g, sigma)?;
        let tangent = match self.config.inequality_mode {
            ConstraintMode::Sphere => true,
            ConstraintMode::Ball => self.on_active_sphere(u, g)?,
        };
        if !tangent {
            return Ok(d);
        }
        // remove the part along u so that ⟨direction, u⟩ = 0
        let w = op.resolvent(u, sigma)?;
        let wu = w.dot(u)?;
        if wu == 0.0 {
            return Ok(d);
        }
        d.axpy(-d.dot(u)? / wu, &w)
    }

    /// Backtracking from `tau0` until the energy does not increase.
    fn search(
        &self,
        u: &Field,
        e: &EnergyBreakdown,
        dir: &Field,
        tau0: f64,
    ) -> Result<Option<(Field, EnergyBreakdown)>> {
        let mut tau = tau0;
        while tau >= MIN_STEP {
            let cand = self.take_step(u, dir, tau)?;
            let ec = self.functional.energy(&cand)?;
            if ec.total <= e.total {
                return Ok(Some((cand, ec)));
            }
            tau *= 0.5;
        }
        Ok(None)
    }

    fn step(&self, u: &Field, e: &EnergyBreakdown, g: &Field) -> Result<Option<(Field, EnergyBreakdown)>> {
        if self.config.precondition {
            let dir = self.preconditioned_direction(u, g)?;
            if let Some(found) = self.search(u, e, &dir, self.config.step)? {
                return Ok(Some(found));
            }
            return self.search(u, e, &self.plain_direction(u, g)?, self.plain_step);
        }
        self.search(u, e, &self.plain_direction(u, g)?, self.config.step)
    }
}

fn energy_settled(trace: &[EnergyBreakdown], tol: f64) -> bool {
    if trace.len() <= ENERGY_WINDOW {
        return false;
    }
    let last = trace[trace.len() - 1].total;
    let prev = trace[trace.len() - 1 - ENERGY_WINDOW].total;
    (last - prev).abs() <= tol * last.abs().max(ENERGY_FLOOR)
}

/// Minimizes `E` over the mass sphere (or the relaxed ball).
///
/// Non-convergence is not an error: the best iterate is returned with
/// `converged = false`.
pub fn solve_pc(config: &SolveConfig) -> Result<SolveResult> {
    config.validate()?;
    config.check_regime()?;
    let spec: &dyn Integrand = &config.spec;
    let flow = Flow {
        config,
        functional: EnergyFunctional::new(config.grid, config.s, spec)?,
        plain_step: SolveConfig::default_step(&config.grid, config.s),
    };
    let order = SiteOrder::new(config.grid);

    let mut u = initial_field(config)?;
    let mut e = flow.functional.energy(&u)?;
    let mut trace = vec![e];
    let mut iterations = 0;
    let mut converged = false;

    loop {
        let g = flow.functional.gradient(&u)?;
        let residual = flow.residual(&u, &g)?;
        if residual < config.tol_residual && energy_settled(&trace, config.tol_energy) {
            converged = true;
            break;
        }
        if iterations >= config.max_iters {
            break;
        }
        let Some((next, en)) = flow.step(&u, &e, &g)? else {
            // No step of size >= MIN_STEP lowers E: the energy is stationary
            // to rounding, so only the residual decides.
            converged = residual < config.tol_residual;
            break;
        };
        u = next;
        e = en;
        iterations += 1;
        let k = config.symmetrize_every;
        if k > 0 && iterations % k == 0 {
            let sym = order.symmetrize(&u)?;
            let sym = match config.inequality_mode {
                ConstraintMode::Sphere => super::energy::project_to_sphere(&sym, config.c)?,
                ConstraintMode::Ball => sym,
            };
            let es = flow.functional.energy(&sym)?;
            if es.total <= e.total {
                u = sym;
                e = es;
            }
        }
        trace.push(e);
    }

    let g = flow.functional.gradient(&u)?;
    let residual = flow.residual(&u, &g)?;
    let lagrange_multiplier = g.dot(&u)? / (config.c * config.c);
    let symmetry_defect = {
        let norm = u.norm_l2();
        if norm == 0.0 {
            0.0
        } else {
            u.axpy(-1.0, &order.symmetrize(&u)?)?.norm_l2() / norm
        }
    };
    Ok(SolveResult {
        truncation_warning: u.truncation_suspect(),
        minimizer: u,
        energy: e,
        iterations,
        converged,
        lagrange_multiplier,
        symmetry_defect,
        residual,
        trace,
    })
}
