//! Mass-subcritical / critical / supercritical classification.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{check_param, Error, Result};

/// Relative margin used when the threshold comparison is done in floats.
pub const REGIME_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        })
    }
}

/// A parameter given either exactly (as a fraction or terminating decimal)
/// or as a plain float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Exact(Ratio<i64>),
    Float(f64),
}

impl Scalar {
    pub fn value(&self) -> f64 {
        match self {
            Scalar::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Scalar::Float(x) => *x,
        }
    }

    fn exact(&self) -> Option<Ratio<i64>> {
        match self {
            Scalar::Exact(r) => Some(*r),
            Scalar::Float(_) => None,
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<Ratio<i64>> for Scalar {
    fn from(r: Ratio<i64>) -> Self {
        Scalar::Exact(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Exact(Ratio::from_integer(n))
    }
}

fn parse_decimal(s: &str) -> Option<Ratio<i64>> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let digits: i64 = format!("{int}{frac}").parse().ok()?;
    let r = Ratio::new(digits, 10i64.checked_pow(frac.len() as u32)?);
    Some(if neg { -r } else { r })
}

impl FromStr for Scalar {
    type Err = String;

    /// `"3/4"` and `"0.75"` parse exactly; anything else `f64` accepts
    /// (exponent notation, `inf`) parses as a float.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|e| format!("bad numerator in `{s}`: {e}"))?;
            let d: i64 = d.trim().parse().map_err(|e| format!("bad denominator in `{s}`: {e}"))?;
            if d == 0 {
                return Err(format!("zero denominator in `{s}`"));
            }
            return Ok(Scalar::Exact(Ratio::new(n, d)));
        }
        if let Some(r) = parse_decimal(s) {
            return Ok(Scalar::Exact(r));
        }
        s.parse::<f64>().map(Scalar::Float).map_err(|e| format!("`{s}` is not a number: {e}"))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// A real number or `+∞`; serializes as a JSON number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(x) => x,
            ExtendedReal::Infinity => f64::INFINITY,
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(x) => ser.serialize_f64(*x),
            ExtendedReal::Infinity => ser.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    /// `4s/N`
    pub threshold_ell: f64,
    /// Whether the comparison was done in exact rational arithmetic.
    pub exact: bool,
    /// `4s/(1 − 2s)` for `s < ½`, `∞` otherwise (one dimension only).
    pub alpha_max_fl: Option<ExtendedReal>,
    /// `4s` (one dimension only).
    pub alpha_max_paper: Option<f64>,
    /// Critical mass `c*`, filled in by callers that know `K` and `K′`.
    pub critical_mass: Option<f64>,
}

impl RegimeReport {
    pub fn with_critical_mass(mut self, c_star: f64) -> Self {
        if self.regime == Regime::Critical {
            self.critical_mass = Some(c_star);
        }
        self
    }
}

fn float_regime(ell: f64, threshold: f64) -> Regime {
    let margin = REGIME_MARGIN * threshold.abs().max(1.0);
    if (ell - threshold).abs() <= margin {
        Regime::Critical
    } else if ell < threshold {
        Regime::Subcritical
    } else {
        Regime::Supercritical
    }
}

/// Float classification without domain checks on `s`, so that the solver can
/// classify its `s = 1` oracle runs too.
pub fn regime_of(ell: f64, s: f64, dim: usize) -> Regime {
    float_regime(ell, 4.0 * s / dim as f64)
}

fn check_domain(ell: f64, s: f64, dim: usize) -> Result<()> {
    check_param(ell > 0.0 && ell.is_finite(), "ell", || format!("{ell} must be > 0"))?;
    check_param(s > 0.0 && s < 1.0, "s", || format!("{s} not in (0, 1)"))?;
    if dim != 1 && dim != 2 {
        return Err(Error::Parameter { name: "N", reason: format!("{dim} not in {{1, 2}}") });
    }
    Ok(())
}

/// `4s/(1 − 2s)` for `0 < s < ½`, `∞` for `½ ≤ s < 1`.
pub fn alpha_max_frank_lenzmann(s: f64) -> Result<ExtendedReal> {
    check_param(s > 0.0 && s < 1.0, "s", || format!("{s} not in (0, 1)"))?;
    Ok(if s < 0.5 { ExtendedReal::Finite(4.0 * s / (1.0 - 2.0 * s)) } else { ExtendedReal::Infinity })
}

fn alpha_max_exact(s: Ratio<i64>) -> ExtendedReal {
    let half = Ratio::new(1, 2);
    if s < half {
        let v = Ratio::from_integer(4) * s / (Ratio::from_integer(1) - Ratio::from_integer(2) * s);
        ExtendedReal::Finite(*v.numer() as f64 / *v.denom() as f64)
    } else {
        ExtendedReal::Infinity
    }
}

/// Compares `ℓ` with `4s/N`, exactly when both are [`Scalar::Exact`].
pub fn classify_regime(ell: impl Into<Scalar>, s: impl Into<Scalar>, dim: usize) -> Result<RegimeReport> {
    let (ell, s) = (ell.into(), s.into());
    check_domain(ell.value(), s.value(), dim)?;
    let threshold = 4.0 * s.value() / dim as f64;
    let (regime, exact) = match (ell.exact(), s.exact()) {
        (Some(l), Some(sr)) => {
            let lhs = l * Ratio::from_integer(dim as i64);
            let rhs = sr * Ratio::from_integer(4);
            let regime = match lhs.cmp(&rhs) {
                std::cmp::Ordering::Less => Regime::Subcritical,
                std::cmp::Ordering::Equal => Regime::Critical,
                std::cmp::Ordering::Greater => Regime::Supercritical,
            };
            (regime, true)
        }
        _ => (float_regime(ell.value(), threshold), false),
    };
    let (alpha_max_fl, alpha_max_paper) = if dim == 1 {
        let fl = match s.exact() {
            Some(sr) => alpha_max_exact(sr),
            None => alpha_max_frank_lenzmann(s.value())?,
        };
        (Some(fl), Some(4.0 * s.value()))
    } else {
        (None, None)
    };
    Ok(RegimeReport { regime, threshold_ell: threshold, exact, alpha_max_fl, alpha_max_paper, critical_mass: None })
}
