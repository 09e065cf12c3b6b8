//! Analytic profiles and seeded random field families.
//!
//! The random families all keep the edge band empty (or exponentially
//! small), so they satisfy the truncation precondition of the lattice
//! Gagliardo sum.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{Field, GridSpec, EDGE_BAND_START};
use crate::rng::SplitMix64;

/// Radial profiles that can be sampled exactly at any dilation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `e^{−|x|²/2}`
    Gaussian,
    /// `sech |x|`
    Sech,
}

impl Profile {
    pub fn eval(self, r: f64) -> f64 {
        match self {
            Profile::Gaussian => (-0.5 * r * r).exp(),
            Profile::Sech => 1.0 / r.cosh(),
        }
    }

    /// `λ^{N/2} φ(λ|x|)` sampled on the grid.
    pub fn dilated(self, grid: GridSpec, lambda: f64) -> Result<Field> {
        let amp = lambda.powf(grid.dim() as f64 / 2.0);
        Field::radial(grid, |r| amp * self.eval(lambda * r))
    }
}

impl std::str::FromStr for Profile {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "gaussian" => Ok(Profile::Gaussian),
            "sech" => Ok(Profile::Sech),
            other => Err(format!("unknown profile `{other}` (expected gaussian or sech)")),
        }
    }
}

/// Gaussian `e^{−|x − x0|²/(2σ²)}`.
pub fn gaussian(grid: GridSpec, center: [f64; 2], sigma: f64) -> Result<Field> {
    Field::from_fn(grid, |x| {
        let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
        (-0.5 * r2 / (sigma * sigma)).exp()
    })
}

fn interior_limit(grid: &GridSpec) -> f64 {
    EDGE_BAND_START * grid.box_length()
}

/// i.i.d. uniform values on `[0, 1)` at every site outside the edge band.
pub fn rough_nonnegative(grid: GridSpec, rng: &mut SplitMix64) -> Field {
    let values = (0..grid.len()).map(|site| if grid.in_edge_band(site) { 0.0 } else { rng.next_f64() }).collect();
    Field::new(grid, values).expect("finite")
}

/// A handful of isolated spikes with random heights.
pub fn sparse_spikes(grid: GridSpec, rng: &mut SplitMix64) -> Field {
    let mut values = vec![0.0; grid.len()];
    let count = 1 + rng.below(6);
    let interior: Vec<usize> = (0..grid.len()).filter(|&s| !grid.in_edge_band(s)).collect();
    for _ in 0..count {
        let site = interior[rng.below(interior.len())];
        values[site] = rng.uniform(0.1, 1.0);
    }
    Field::new(grid, values).expect("finite")
}

/// Sum of 1–4 Gaussian bumps with centers in the inner half of the box.
///
/// With `signed` the amplitudes lie in `[−1, 1]`, otherwise in `[0.2, 1]`.
pub fn bump_mixture(grid: GridSpec, rng: &mut SplitMix64, signed: bool) -> Field {
    let l = grid.box_length();
    let count = 1 + rng.below(4);
    let bumps: Vec<([f64; 2], f64, f64)> = (0..count)
        .map(|_| {
            let c = [rng.uniform(-0.2 * l, 0.2 * l), rng.uniform(-0.2 * l, 0.2 * l)];
            let sigma = rng.uniform(0.02 * l, 0.05 * l);
            let amp = if signed { rng.uniform(-1.0, 1.0) } else { rng.uniform(0.2, 1.0) };
            (c, sigma, amp)
        })
        .collect();
    let lim = interior_limit(&grid);
    Field::from_fn(grid, |x| {
        if x.iter().any(|v| v.abs() > lim) {
            return 0.0;
        }
        bumps
            .iter()
            .map(|(c, sigma, amp)| {
                let r2: f64 = x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum();
                amp * (-0.5 * r2 / (sigma * sigma)).exp()
            })
            .sum()
    })
    .expect("finite")
}

/// One of the nonnegative families, chosen by the stream.
pub fn random_nonnegative(grid: GridSpec, rng: &mut SplitMix64) -> Field {
    match rng.below(3) {
        0 => rough_nonnegative(grid, rng),
        1 => sparse_spikes(grid, rng),
        _ => bump_mixture(grid, rng, false),
    }
}
