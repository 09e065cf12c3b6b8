//! Lower bounds for the energy on the mass sphere.
//!
//! Writing `D = |∇_s u|²₂` and `C` for the constant in the integral form
//! `∫|u|^{ℓ+2} ≤ C c^{(1−θ)(ℓ+2)} D^{θ(ℓ+2)/2}` of the Gagliardo–Nirenberg
//! inequality (`C = K′^{ℓ+2}` for the norm-form constant `K′`), the growth
//! bound and Young's inequality with exponents `p = 4s/(Nℓ)`, `q = p/(p−1)`
//! give, for every `u` with `∫u² = c²`,
//!
//! `E(u) ≥ (½ − KCε^p/p) D − Kc² − (KC/(qε^q)) c^{q(1−θ)(ℓ+2)}`.
//!
//! At the critical exponent `θ(ℓ+2)/2 = 1` and no Young step is needed:
//! `E(u) ≥ (½ − KC c^{4s/N}) D − Kc²`.

use serde::Serialize;

use super::regime::{regime_of, Regime};
use crate::error::{check_param, Error, Result};
use crate::variational::gn_theta;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoercivityParams {
    /// Growth constant of the integrand.
    #[serde(rename = "K")]
    pub k: f64,
    /// Integral-form Gagliardo–Nirenberg constant `C = K′^{ℓ+2}`.
    #[serde(rename = "C")]
    pub gn: f64,
    pub epsilon: f64,
    pub p: f64,
    pub q: f64,
    pub theta: f64,
    pub ell: f64,
}

impl CoercivityParams {
    /// Requires a subcritical exponent, `ℓ < 4s/N`, so that `p > 1`.
    pub fn new(k: f64, gn: f64, epsilon: f64, dim: usize, s: f64, ell: f64) -> Result<Self> {
        check_param(k >= 0.0 && k.is_finite(), "K", || format!("{k} must be >= 0"))?;
        check_param(gn > 0.0 && gn.is_finite(), "C", || format!("{gn} must be > 0"))?;
        check_param(epsilon > 0.0 && epsilon.is_finite(), "epsilon", || format!("{epsilon} must be > 0"))?;
        check_param(s > 0.0 && s <= 1.0, "s", || format!("{s} not in (0, 1]"))?;
        check_param(ell > 0.0, "ell", || format!("{ell} must be > 0"))?;
        if regime_of(ell, s, dim) != Regime::Subcritical {
            return Err(Error::Regime(format!("Young splitting needs ell < 4s/N, got ell = {ell}")));
        }
        let p = 4.0 * s / (dim as f64 * ell);
        Ok(Self { k, gn, epsilon, p, q: p / (p - 1.0), theta: gn_theta(dim, s, ell), ell })
    }

    /// Same, with ε maximizing the bound at the given `c` and `D`
    /// (see [`optimal_epsilon`]).
    pub fn optimized(k: f64, gn: f64, dim: usize, s: f64, ell: f64, c: f64, dirichlet: f64) -> Result<Self> {
        let mut params = Self::new(k, gn, 1.0, dim, s, ell)?;
        params.epsilon = optimal_epsilon(&params, c, dirichlet);
        Ok(params)
    }

    /// `½ − KCε^p/p`
    pub fn kinetic_coefficient(&self) -> f64 {
        0.5 - self.k * self.gn * self.epsilon.powf(self.p) / self.p
    }

    /// The ε at which the kinetic coefficient vanishes (`∞` when `K = 0`).
    pub fn epsilon_max(&self) -> f64 {
        (self.p / (2.0 * self.k * self.gn)).powf(1.0 / self.p)
    }

    /// `q(1 − θ)(ℓ + 2)`
    pub fn mass_exponent(&self) -> f64 {
        self.q * (1.0 - self.theta) * (self.ell + 2.0)
    }
}

/// The bound evaluated at mass level `c` and Dirichlet energy `D`.
pub fn coercivity_lower_bound(params: &CoercivityParams, c: f64, dirichlet: f64) -> f64 {
    let kc = params.k * params.gn;
    let tail = if c == 0.0 || kc == 0.0 {
        0.0
    } else {
        kc / (params.q * params.epsilon.powf(params.q)) * c.powf(params.mass_exponent())
    };
    params.kinetic_coefficient() * dirichlet - params.k * c * c - tail
}

/// The ε in `(0, ε_max]` maximizing the bound for given `(K, C, c, D)`.
///
/// The bound is concave in `log ε` with its stationary point at
/// `ε^{p+q} = c^{q(1−θ)(ℓ+2)} / D`, so the maximizer is that point clipped
/// to `ε_max`.
pub fn optimal_epsilon(params: &CoercivityParams, c: f64, dirichlet: f64) -> f64 {
    let cap = params.epsilon_max();
    if params.k * params.gn == 0.0 {
        return 1.0;
    }
    if c == 0.0 {
        // tail vanishes; any small ε gives the coefficient ½ in the limit
        return if cap.is_finite() { 1e-6 * cap } else { 1.0 };
    }
    let x = c.powf(params.mass_exponent());
    let stationary = if dirichlet > 0.0 { (x / dirichlet).powf(1.0 / (params.p + params.q)) } else { f64::INFINITY };
    let eps = stationary.min(cap);
    if eps.is_finite() {
        eps
    } else {
        1.0
    }
}

/// `c* = (1/(2KC))^{N/(4s)}`: the kinetic coefficient `½ − KC c^{4s/N}` of
/// the critical bound is positive exactly for `c < c*`.
pub fn critical_mass_bound(k: f64, gn: f64, dim: usize, s: f64) -> Result<f64> {
    check_param(k > 0.0 && k.is_finite(), "K", || format!("{k} must be > 0"))?;
    check_param(gn > 0.0 && gn.is_finite(), "C", || format!("{gn} must be > 0"))?;
    check_param(s > 0.0 && s <= 1.0, "s", || format!("{s} not in (0, 1]"))?;
    Ok((1.0 / (2.0 * k * gn)).powf(dim as f64 / (4.0 * s)))
}

/// `(1/(2KC))^{4/N}`, the threshold with the exponent inverted, kept for
/// side-by-side reporting.
pub fn critical_mass_literal(k: f64, gn: f64, dim: usize) -> f64 {
    (1.0 / (2.0 * k * gn)).powf(4.0 / dim as f64)
}

/// `½ − KC c^{4s/N}`
pub fn critical_kinetic_coefficient(k: f64, gn: f64, dim: usize, s: f64, c: f64) -> f64 {
    0.5 - k * gn * c.powf(4.0 * s / dim as f64)
}

/// `(½ − KC c^{4s/N}) D − Kc²`
pub fn critical_lower_bound(k: f64, gn: f64, dim: usize, s: f64, c: f64, dirichlet: f64) -> f64 {
    critical_kinetic_coefficient(k, gn, dim, s, c) * dirichlet - k * c * c
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponents() {
        for (dim, s, ell) in [(1, 0.5, 1.0), (1, 0.7, 0.3), (2, 0.9, 1.1)] {
            let p = CoercivityParams::new(1.0, 1.0, 1.0, dim, s, ell).unwrap();
            assert_relative_eq!(1.0 / p.p + 1.0 / p.q, 1.0, epsilon = 1e-12);
            assert_relative_eq!(p.p * p.theta * (ell + 2.0) / 2.0, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn substitution_example() {
        let p = CoercivityParams::new(1.0, 1.0, 1.0, 1, 0.5, 1.0).unwrap();
        assert_relative_eq!(p.p, 2.0, epsilon = 1e-15);
        assert_relative_eq!(p.q, 2.0, epsilon = 1e-15);
        assert_relative_eq!(p.theta, 1.0 / 3.0, epsilon = 1e-15);
        for d in [0.0, 1.0, 17.0] {
            assert_relative_eq!(coercivity_lower_bound(&p, 1.0, d), -1.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn vanishing_mass_and_zero_growth() {
        let p = CoercivityParams::new(1.0, 1.0, 0.1, 1, 0.5, 1.0).unwrap();
        let b = coercivity_lower_bound(&p, 0.0, 3.0);
        assert_relative_eq!(b, (0.5 - 0.005) * 3.0, epsilon = 1e-12);
        let z = CoercivityParams::new(0.0, 1.0, 1.0, 1, 0.5, 1.0).unwrap();
        assert_eq!(coercivity_lower_bound(&z, 2.0, 3.0), 1.5);
        assert_eq!(optimal_epsilon(&z, 2.0, 3.0), 1.0);
    }

    #[test]
    fn optimal_epsilon_beats_neighbours() {
        let base = CoercivityParams::new(0.3, 2.0, 1.0, 1, 0.6, 0.8).unwrap();
        for (c, d) in [(1.0, 5.0), (0.5, 100.0), (2.0, 0.01)] {
            let eps = optimal_epsilon(&base, c, d);
            assert!(eps > 0.0 && eps <= base.epsilon_max());
            let at = |e: f64| coercivity_lower_bound(&CoercivityParams { epsilon: e, ..base }, c, d);
            let best = at(eps);
            for f in [0.5, 0.9, 0.99, 1.01, 1.1, 2.0] {
                if eps * f <= base.epsilon_max() {
                    assert!(at(eps * f) <= best + 1e-12);
                }
            }
        }
    }

    #[test]
    fn critical_threshold() {
        assert_relative_eq!(critical_mass_bound(0.5, 0.5, 1, 1.0).unwrap(), 2f64.powf(0.25), epsilon = 1e-15);
        assert_relative_eq!(critical_mass_bound(1.0, 1.0, 2, 1.0).unwrap(), 0.5f64.sqrt(), epsilon = 1e-15);
        let c = critical_mass_bound(0.25, 3.0, 1, 0.5).unwrap();
        assert!(critical_kinetic_coefficient(0.25, 3.0, 1, 0.5, c).abs() < 1e-15);
        assert!(critical_kinetic_coefficient(0.25, 3.0, 1, 0.5, 0.9 * c) > 0.0);
        assert!(critical_kinetic_coefficient(0.25, 3.0, 1, 0.5, 1.1 * c) < 0.0);
        assert_relative_eq!(critical_mass_literal(0.5, 0.5, 1), 16.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_non_subcritical() {
        assert!(matches!(CoercivityParams::new(1.0, 1.0, 1.0, 1, 0.5, 2.0), Err(Error::Regime(_))));
        assert!(CoercivityParams::new(1.0, 1.0, 0.0, 1, 0.5, 1.0).is_err());
    }
}
