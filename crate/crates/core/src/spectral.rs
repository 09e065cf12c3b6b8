//! Fourier-multiplier fractional Laplacian and the basic norms.
//!
//! Transform convention: `û_k = h^N Σ_j u_j e^{-i k·x_j}`. With it the
//! fractional Dirichlet energy is `(1/L^N) Σ_k |k|^{2s} |û_k|²` and Parseval
//! reads `mass(u) = (1/L^N) Σ_k |û_k|²`. The phase `e^{i k L/2}` from the
//! centered sites has unit modulus, so it drops out of every quantity below
//! and the raw DFT can be used directly.

use std::cell::RefCell;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{check_param, Error, Result};
use crate::grid::{Field, GridSpec};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Unnormalized N-dimensional DFT in place (rows, then columns).
fn transform(grid: &GridSpec, data: &mut [Complex64], inverse: bool) {
    let n = grid.n();
    let fft = plan(n, inverse);
    fft.process(data);
    if grid.dim() == 2 {
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for c in 0..n {
            for r in 0..n {
                col[r] = data[r * n + c];
            }
            fft.process(&mut col);
            for r in 0..n {
                data[r * n + c] = col[r];
            }
        }
    }
}

fn raw_dft(u: &Field) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = u.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(u.grid(), &mut data, false);
    data
}

/// Fourier coefficients `û_k` under the crate convention, in FFT bin order.
pub fn spectrum(u: &Field) -> Vec<Complex64> {
    let w = u.grid().cell_volume();
    raw_dft(u).into_iter().map(|z| z * w).collect()
}

fn check_finite(u: &Field) -> Result<()> {
    match u.values().iter().position(|v| !v.is_finite()) {
        Some(site) => Err(Error::NonFinite { site }),
        None => Ok(()),
    }
}

/// The multiplier `|k|^{2s}` tabulated for one grid.
///
/// Reuse one instance when the same (grid, s) pair is applied many times,
/// as the solver does.
#[derive(Debug, Clone)]
pub struct FractionalOperator {
    grid: GridSpec,
    s: f64,
    multiplier: Vec<f64>,
}

impl FractionalOperator {
    /// `s` may equal 1 here: the classical Laplacian is the oracle boundary case.
    pub fn new(grid: GridSpec, s: f64) -> Result<Self> {
        check_param(s > 0.0 && s <= 1.0, "s", || format!("{s} not in (0, 1]"))?;
        let multiplier = grid.wavenumber_sq().into_iter().map(|k2| k2.powf(s)).collect();
        Ok(Self { grid, s, multiplier })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn order(&self) -> f64 {
        self.s
    }

    /// Largest multiplier value, `(|k|_max)^{2s}`.
    pub fn spectral_radius(&self) -> f64 {
        self.multiplier.iter().cloned().fold(0.0, f64::max)
    }

    fn check(&self, u: &Field) -> Result<()> {
        if *u.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        check_finite(u)
    }

    /// `(−Δ)^s u`.
    pub fn apply(&self, u: &Field) -> Result<Field> {
        self.check(u)?;
        let mut data = raw_dft(u);
        for (z, m) in data.iter_mut().zip(&self.multiplier) {
            *z *= *m;
        }
        transform(&self.grid, &mut data, true);
        let scale = 1.0 / self.grid.len() as f64;
        let values = data.iter().map(|z| z.re * scale).collect::<Vec<_>>();
        debug_assert!({
            let top = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
            data.iter().all(|z| (z.im * scale).abs() <= 1e-10 * top.max(1.0))
        });
        Ok(Field::from_parts(self.grid, values))
    }

    /// `(σ + (−Δ)^s)^{-1} u` for a shift `σ > 0`.
    pub fn resolvent(&self, u: &Field, sigma: f64) -> Result<Field> {
        self.check(u)?;
        check_param(sigma > 0.0 && sigma.is_finite(), "sigma", || format!("{sigma} must be > 0"))?;
        let mut data = raw_dft(u);
        for (z, m) in data.iter_mut().zip(&self.multiplier) {
            *z /= sigma + m;
        }
        transform(&self.grid, &mut data, true);
        let scale = 1.0 / self.grid.len() as f64;
        Ok(Field::from_parts(self.grid, data.iter().map(|z| z.re * scale).collect()))
    }

    /// Smallest nonzero multiplier, `(2π/L)^{2s}`.
    pub fn spectral_gap(&self) -> f64 {
        (2.0 * std::f64::consts::PI / self.grid.box_length()).powf(2.0 * self.s)
    }

    /// `|∇_s u|²₂ = (1/L^N) Σ_k |k|^{2s} |û_k|²`.
    pub fn dirichlet_energy(&self, u: &Field) -> Result<f64> {
        self.check(u)?;
        let w = self.grid.cell_volume();
        let sum: f64 = raw_dft(u).iter().zip(&self.multiplier).map(|(z, m)| m * z.norm_sqr()).sum();
        Ok(sum * w * w / self.grid.volume())
    }
}

pub fn fractional_laplacian(u: &Field, s: f64) -> Result<Field> {
    FractionalOperator::new(*u.grid(), s)?.apply(u)
}

pub fn dirichlet_energy(u: &Field, s: f64) -> Result<f64> {
    FractionalOperator::new(*u.grid(), s)?.dirichlet_energy(u)
}

/// `∫u² ≈ h^N Σ_j u_j²`.
pub fn mass(u: &Field) -> f64 {
    let s: f64 = u.values().iter().map(|v| v * v).sum();
    s * u.grid().cell_volume()
}

/// `(h^N Σ_j |u_j|^p)^{1/p}` for `p ≥ 1`.
pub fn lp_norm(u: &Field, p: f64) -> Result<f64> {
    check_param(p >= 1.0 && p.is_finite(), "p", || format!("{p} < 1"))?;
    let s: f64 = u.values().iter().map(|v| v.abs().powf(p)).sum();
    Ok((s * u.grid().cell_volume()).powf(1.0 / p))
}

/// `(1/L^N) Σ_k |û_k|²`, the Fourier side of Parseval.
pub fn spectral_mass(u: &Field) -> f64 {
    let sum: f64 = spectrum(u).iter().map(|z| z.norm_sqr()).sum();
    sum / u.grid().volume()
}
