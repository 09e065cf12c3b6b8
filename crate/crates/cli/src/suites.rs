//! Seeded verification suites.
//!
//! Trial `i` of a run with base seed `S` draws everything from a fresh
//! splitmix64 stream seeded with `S + i`, so a failure is reproduced by
//! rerunning with `--seed S+i --trials 1`.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use fracvar::fields::{bump_mixture, random_nonnegative};
use fracvar::nonlinearity::{check_supermodular, Quadruple};
use fracvar::rearrange::{
    check_lp_invariance, check_mass_invariance, check_polya_szego, check_radial_decay, check_riesz, schwarz_symmetrize,
};
use fracvar::variational::{check_gn_inequality, gn_constant, EnergyFunctional};
use fracvar::{mass, minimize_weinstein, GridSpec, Integrand, NonlinearitySpec, SplitMix64, WeinsteinConfig};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    PolyaSzego,
    Riesz,
    Gn,
    Supermodular,
    Gradient,
    Decay,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::PolyaSzego, Suite::Riesz, Suite::Gn, Suite::Supermodular, Suite::Gradient, Suite::Decay];

    pub fn name(self) -> &'static str {
        match self {
            Suite::PolyaSzego => "polya-szego",
            Suite::Riesz => "riesz",
            Suite::Gn => "gn",
            Suite::Supermodular => "supermodular",
            Suite::Gradient => "gradient",
            Suite::Decay => "decay",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    /// Replace the supermodular integrand by one whose weight increases in r.
    pub adversarial: bool,
    /// Order used by the gn suite.
    pub s: f64,
    /// Exponent used by the gn suite.
    pub alpha: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { adversarial: false, s: 0.5, alpha: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub seed: u64,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteVerdict {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub pass: bool,
    pub failures: Vec<Failure>,
    /// Suite-wide constants, e.g. the `K′` used by the gn suite.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub context: Value,
}

pub const PS_GRID: (usize, f64) = (256, 20.0);
pub const PS_ORDERS: [f64; 3] = [0.3, 0.5, 0.7];
pub const LP_EXPONENTS: [f64; 5] = [1.0, 1.5, 3.0, 4.0, 6.0];
pub const GN_GRID: (usize, f64) = (1024, 60.0);
pub const GRADIENT_GRID: (usize, f64) = (256, 30.0);
const GRADIENT_STEP: f64 = 1e-5;
const GRADIENT_TOL: f64 = 1e-6;
const QUADRUPLES_PER_TRIAL: usize = 100;

fn line((n, l): (usize, f64)) -> GridSpec {
    GridSpec::line(n, l).expect("suite grids are valid")
}

fn json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Weight `1 − e^{−r}` grows with the radius, which breaks supermodularity.
struct IncreasingWeight;

impl Integrand for IncreasingWeight {
    fn primitive(&self, r: f64, t: f64) -> f64 {
        (1.0 - (-r).exp()) * t.abs().powi(3) / 3.0
    }
    fn density(&self, r: f64, t: f64) -> f64 {
        (1.0 - (-r).exp()) * t * t.abs()
    }
    fn ell(&self) -> f64 {
        1.0
    }
    fn growth_constant(&self) -> f64 {
        1.0 / 3.0
    }
}

pub fn run_suite(suite: Suite, trials: usize, seed: u64, options: SuiteOptions) -> CliResult<SuiteVerdict> {
    if trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    let mut context = Value::Null;
    let kprime = if suite == Suite::Gn {
        let mut wc = WeinsteinConfig::new(line(GN_GRID), options.s, options.alpha);
        wc.seed = seed;
        let w = minimize_weinstein(&wc)?;
        let k = gn_constant(w.j_min, options.alpha)?;
        context =
            json!({ "s": options.s, "alpha": options.alpha, "j_min": w.j_min, "kprime": k, "converged": w.converged });
        k
    } else {
        0.0
    };
    let mut failures = Vec::new();
    for i in 0..trials {
        let trial_seed = seed.wrapping_add(i as u64);
        let mut rng = SplitMix64::new(trial_seed);
        let witness = match suite {
            Suite::PolyaSzego => polya_szego_trial(&mut rng)?,
            Suite::Riesz => riesz_trial(&mut rng)?,
            Suite::Gn => {
                let u = bump_mixture(line(GN_GRID), &mut rng, true);
                let check = check_gn_inequality(&u, options.s, options.alpha, kprime)?;
                (!check.pass).then(|| json(&check))
            }
            Suite::Supermodular => supermodular_trial(&mut rng, options.adversarial)?,
            Suite::Gradient => gradient_trial(&mut rng)?,
            Suite::Decay => {
                let u = schwarz_symmetrize(&random_nonnegative(line(PS_GRID), &mut rng));
                let report = check_radial_decay(&u, mass(&u).sqrt())?;
                (!report.pass).then(|| json(&report))
            }
        };
        if let Some(witness) = witness {
            failures.push(Failure { seed: trial_seed, witness });
        }
    }
    Ok(SuiteVerdict { suite, trials, seed, pass: failures.is_empty(), failures, context })
}

fn polya_szego_trial(rng: &mut SplitMix64) -> CliResult<Option<Value>> {
    let u = random_nonnegative(line(PS_GRID), rng);
    for s in PS_ORDERS {
        let report = check_polya_szego(&u, s)?;
        if !report.pass {
            return Ok(Some(json!({ "s": s, "report": report })));
        }
    }
    Ok(None)
}

fn riesz_trial(rng: &mut SplitMix64) -> CliResult<Option<Value>> {
    let spec = NonlinearitySpec::weighted_power(1.0, 1.0, 1.0)?;
    let u = random_nonnegative(line(PS_GRID), rng);
    let riesz = check_riesz(&u, &spec)?;
    if !riesz.pass {
        return Ok(Some(json!({ "riesz": riesz })));
    }
    let m = check_mass_invariance(&u);
    if !m.pass {
        return Ok(Some(json!({ "mass": m })));
    }
    for p in LP_EXPONENTS {
        let check = check_lp_invariance(&u, p)?;
        if !check.pass {
            return Ok(Some(json!({ "p": p, "norm": check })));
        }
    }
    Ok(None)
}

fn supermodular_trial(rng: &mut SplitMix64, adversarial: bool) -> CliResult<Option<Value>> {
    let spec = NonlinearitySpec::weighted_power(rng.uniform(0.2, 3.0), rng.uniform(0.5, 2.0), rng.uniform(0.0, 2.0))?;
    let quads: Vec<Quadruple> = (0..QUADRUPLES_PER_TRIAL)
        .map(|_| {
            let r = rng.uniform(0.0, 20.0);
            let a = rng.uniform(0.0, 5.0);
            Quadruple::new(r, r + rng.uniform(0.01, 20.0), a, a + rng.uniform(0.01, 5.0))
        })
        .collect();
    let verdict = if adversarial {
        check_supermodular(&IncreasingWeight, &quads, false)?
    } else {
        check_supermodular(&spec, &quads, false)?
    };
    Ok(verdict.witness().map(json))
}

fn gradient_trial(rng: &mut SplitMix64) -> CliResult<Option<Value>> {
    let grid = line(GRADIENT_GRID);
    let s = rng.uniform(0.2, 0.95);
    let spec = NonlinearitySpec::weighted_power(rng.uniform(0.5, 3.0), rng.uniform(0.5, 2.0), rng.uniform(0.0, 1.0))?;
    let f = EnergyFunctional::new(grid, s, &spec)?;
    let u = bump_mixture(grid, rng, true);
    let v = bump_mixture(grid, rng, true);
    let g = f.gradient(&u)?;
    let analytic = g.dot(&v)?;
    let plus = f.energy(&u.axpy(GRADIENT_STEP, &v)?)?.total;
    let minus = f.energy(&u.axpy(-GRADIENT_STEP, &v)?)?.total;
    let numeric = (plus - minus) / (2.0 * GRADIENT_STEP);
    // relative to the pairing, floored by the Cauchy–Schwarz scale
    let scale = analytic.abs().max(1e-6 * g.norm_l2() * v.norm_l2());
    let error = (analytic - numeric).abs() / scale;
    Ok((error > GRADIENT_TOL)
        .then(|| json!({ "s": s, "spec": spec, "analytic": analytic, "numeric": numeric, "relative_error": error })))
}
