//! Real-space Gagliardo double sum, an independent check on the spectral energy.
//!
//! The field is extended by zero outside the box (no periodic images) and the
//! double integral `∫∫ |u(x) − u(y)|² / |x − y|^{1+2s}` is summed over the
//! lattice `hℤ × hℤ`. Pairs with both sites inside the box are summed
//! directly; pairs with one site outside contribute `u_i² K(d)` and are
//! collapsed into Hurwitz zeta tails. The result is proportional to the
//! spectral Dirichlet energy up to an (unpinned) constant and to
//! discretization error.
//!
//! Because the lattice sum is exact on `hℤ`, the discrete rearrangement
//! inequality applies to it without any tolerance beyond rounding.

use crate::error::{check_param, Error, Result};
use crate::grid::{Field, EDGE_MASS_LIMIT};

/// Bernoulli numbers B_2, B_4, …, B_16.
const BERNOULLI: [f64; 8] =
    [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0];

/// Hurwitz zeta `ζ(σ, a) = Σ_{k≥0} (a + k)^{-σ}` for `σ > 1`, `a > 0`.
///
/// Direct summation of the first terms followed by an Euler–Maclaurin tail.
pub fn hurwitz_zeta(sigma: f64, a: f64) -> f64 {
    assert!(sigma > 1.0 && a > 0.0, "hurwitz_zeta needs sigma > 1, a > 0");
    const DIRECT: usize = 16;
    let mut sum = 0.0;
    for k in 0..DIRECT {
        sum += (a + k as f64).powf(-sigma);
    }
    let b = a + DIRECT as f64;
    sum += b.powf(1.0 - sigma) / (sigma - 1.0) + 0.5 * b.powf(-sigma);
    // rising factorial σ(σ+1)…(σ+2j−2) / (2j)!, times b^{-σ-2j+1}
    let mut coeff = sigma;
    let mut fact = 2.0;
    let mut pow = b.powf(-sigma - 1.0);
    for (j, bern) in BERNOULLI.iter().enumerate() {
        let term = bern * coeff / fact * pow;
        sum += term;
        let m = 2.0 * (j + 1) as f64;
        coeff *= (sigma + m - 1.0) * (sigma + m);
        fact *= (m + 1.0) * (m + 2.0);
        pow /= b * b;
    }
    sum
}

/// `h² Σ_{i≠j} |u_i − u_j|² / |x_i − x_j|^{1+2s}` over the zero-extended field.
///
/// One-dimensional grids only (the cost is quadratic in `n`), and the field
/// must keep its edge-band mass fraction below `1e-6`.
pub fn gagliardo_seminorm(u: &Field, s: f64) -> Result<f64> {
    let grid = u.grid();
    if grid.dim() != 1 {
        return Err(Error::Dimension(1));
    }
    check_param(s > 0.0 && s < 1.0, "s", || format!("{s} not in (0, 1)"))?;
    let fraction = u.edge_mass_fraction();
    if fraction > EDGE_MASS_LIMIT {
        return Err(Error::EdgeMass { fraction, limit: EDGE_MASS_LIMIT });
    }
    Ok(lattice_sum(u.values(), s) * grid.spacing().powf(1.0 - 2.0 * s))
}

/// The dimensionless lattice part: in-box pairs plus exterior tails.
pub(crate) fn lattice_sum(v: &[f64], s: f64) -> f64 {
    let n = v.len();
    let sigma = 1.0 + 2.0 * s;
    let mut interior = 0.0;
    for d in 1..n {
        let k = (d as f64).powf(-sigma);
        let diff: f64 = v[..n - d].iter().zip(&v[d..]).map(|(a, b)| (a - b) * (a - b)).sum();
        interior += k * diff;
    }
    let mut exterior = 0.0;
    for (i, x) in v.iter().enumerate() {
        if *x != 0.0 {
            let tail = hurwitz_zeta(sigma, (i + 1) as f64) + hurwitz_zeta(sigma, (n - i) as f64);
            exterior += x * x * tail;
        }
    }
    2.0 * (interior + exterior)
}
