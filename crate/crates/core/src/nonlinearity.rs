//! Integrands `F(r, t)` and sampled checkers for the growth, vanishing and
//! supermodularity hypotheses.
//!
//! The built-in family is [`NonlinearitySpec`]: pure powers
//! `a|t|^{ℓ+2}/(ℓ+2)`, radially weighted powers `a e^{−ωr}|t|^{ℓ+2}/(ℓ+2)`
//! and the zero integrand. All of them are even in `t`, continuous in `r`,
//! and nonincreasing in `r`, so every hypothesis holds analytically. The
//! checkers accept any [`Integrand`] so that tests can feed them integrands
//! that break one hypothesis at a time.

use serde::{Deserialize, Serialize};

use crate::error::{check_param, Error, Result};
use crate::grid::Field;

/// Radii at which the growth bound is sampled.
pub const GROWTH_RADII: [f64; 3] = [0.0, 1.0, 10.0];

/// An integrand `F(r, t)` together with its density `f = ∂F/∂t`.
///
/// Implementations may assume `r ≥ 0`.
pub trait Integrand: Send + Sync {
    fn primitive(&self, r: f64, t: f64) -> f64;
    fn density(&self, r: f64, t: f64) -> f64;
    /// The exponent ℓ in the claimed growth bound `K(t² + t^{ℓ+2})`.
    fn ell(&self) -> f64;
    /// The claimed growth constant K.
    fn growth_constant(&self) -> f64;
    /// Closed-form vanishing witness `(R0, t0)` for a given ε, if known.
    fn vanishing_witness(&self, _epsilon: f64) -> Option<VanishingWitness> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonlinearityKind {
    PurePower,
    WeightedPower,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct NonlinearitySpec {
    kind: NonlinearityKind,
    ell: f64,
    amplitude: f64,
    weight_rate: f64,
    k: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: NonlinearityKind,
    ell: f64,
    #[serde(default = "one")]
    amplitude: f64,
    #[serde(default)]
    weight_rate: f64,
    #[serde(rename = "K")]
    k: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawSpec> for NonlinearitySpec {
    type Error = Error;
    fn try_from(r: RawSpec) -> Result<Self> {
        NonlinearitySpec::new(r.kind, r.ell, r.amplitude, r.weight_rate, r.k)
    }
}

impl From<NonlinearitySpec> for RawSpec {
    fn from(s: NonlinearitySpec) -> Self {
        RawSpec { kind: s.kind, ell: s.ell, amplitude: s.amplitude, weight_rate: s.weight_rate, k: s.k }
    }
}

impl NonlinearitySpec {
    /// `ell = 0` is accepted (a weighted quadratic); problem-level entry
    /// points require `ell > 0` through the regime check.
    pub fn new(kind: NonlinearityKind, ell: f64, amplitude: f64, weight_rate: f64, k: f64) -> Result<Self> {
        check_param(ell.is_finite() && ell >= 0.0, "ell", || format!("{ell} must be >= 0"))?;
        check_param(amplitude.is_finite() && amplitude > 0.0, "amplitude", || format!("{amplitude} must be > 0"))?;
        check_param(weight_rate.is_finite() && weight_rate >= 0.0, "weight_rate", || {
            format!("{weight_rate} must be >= 0")
        })?;
        check_param(k.is_finite() && k >= 0.0, "K", || format!("{k} must be >= 0"))?;
        Ok(Self { kind, ell, amplitude, weight_rate, k })
    }

    /// `a|t|^{ℓ+2}/(ℓ+2)` with the tightest growth constant `K = a/(ℓ+2)`.
    pub fn pure_power(ell: f64, amplitude: f64) -> Result<Self> {
        Self::new(NonlinearityKind::PurePower, ell, amplitude, 0.0, amplitude / (ell + 2.0))
    }

    pub fn weighted_power(ell: f64, amplitude: f64, weight_rate: f64) -> Result<Self> {
        Self::new(NonlinearityKind::WeightedPower, ell, amplitude, weight_rate, amplitude / (ell + 2.0))
    }

    pub fn zero() -> Self {
        Self { kind: NonlinearityKind::Zero, ell: 1.0, amplitude: 1.0, weight_rate: 0.0, k: 0.0 }
    }

    pub fn with_growth_constant(mut self, k: f64) -> Result<Self> {
        check_param(k.is_finite() && k >= 0.0, "K", || format!("{k} must be >= 0"))?;
        self.k = k;
        Ok(self)
    }

    pub fn kind(&self) -> NonlinearityKind {
        self.kind
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn weight_rate(&self) -> f64 {
        self.weight_rate
    }

    fn weight(&self, r: f64) -> f64 {
        match self.kind {
            NonlinearityKind::WeightedPower => (-self.weight_rate * r).exp(),
            _ => 1.0,
        }
    }

    /// F(r, t), rejecting negative radii.
    pub fn eval(&self, r: f64, t: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.primitive(r, t))
    }

    /// f(r, t) = ∂F/∂t, rejecting negative radii.
    pub fn eval_density(&self, r: f64, t: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.density(r, t))
    }
}

fn check_radius(r: f64) -> Result<()> {
    check_param(r >= 0.0, "r", || format!("{r} is negative"))
}

impl Integrand for NonlinearitySpec {
    fn primitive(&self, r: f64, t: f64) -> f64 {
        if self.kind == NonlinearityKind::Zero {
            return 0.0;
        }
        let e = self.ell + 2.0;
        self.amplitude * self.weight(r) * t.abs().powf(e) / e
    }

    fn density(&self, r: f64, t: f64) -> f64 {
        if self.kind == NonlinearityKind::Zero || t == 0.0 {
            return 0.0;
        }
        self.amplitude * self.weight(r) * t.abs().powf(self.ell + 1.0) * t.signum()
    }

    fn ell(&self) -> f64 {
        self.ell
    }

    fn growth_constant(&self) -> f64 {
        self.k
    }

    fn vanishing_witness(&self, epsilon: f64) -> Option<VanishingWitness> {
        match self.kind {
            NonlinearityKind::Zero => Some(VanishingWitness { r0: 0.0, t0: f64::INFINITY }),
            // a w(r) t^ℓ/(ℓ+2) ≤ ε  ⇐  t ≤ (ε(ℓ+2)/a)^{1/ℓ}, using w ≤ 1
            _ if self.ell > 0.0 => Some(VanishingWitness {
                r0: 0.0,
                t0: (epsilon * (self.ell + 2.0) / self.amplitude).powf(1.0 / self.ell),
            }),
            // ℓ = 0 weighted: a e^{−ωr}/2 ≤ ε for r ≥ R0
            _ if self.kind == NonlinearityKind::WeightedPower && self.weight_rate > 0.0 => {
                let r0 = ((self.amplitude / (2.0 * epsilon)).ln() / self.weight_rate).max(0.0);
                Some(VanishingWitness { r0, t0: 1.0 })
            }
            _ => None,
        }
    }
}

/// `∫F(|x|, u) ≈ h^N Σ_j F(|x_j|, u_j)`.
pub fn potential_energy(u: &Field, spec: &dyn Integrand) -> f64 {
    let grid = u.grid();
    let sum: f64 = u.values().iter().enumerate().map(|(site, &t)| spec.primitive(grid.radius(site), t)).sum();
    sum * grid.cell_volume()
}

/// Outcome of a sampled hypothesis check, carrying a witness on failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Verdict<W> {
    Pass,
    Fail(W),
}

impl<W> Verdict<W> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthViolation {
    pub r: f64,
    pub t: f64,
    pub value: f64,
    pub bound: f64,
}

/// Growth hypothesis: `0 ≤ F(r,t) ≤ K(t² + t^{ℓ+2})` at every sampled
/// `t` and `r ∈ {0, 1, 10}`. Reports the first violation found.
pub fn check_growth(spec: &dyn Integrand, t_samples: &[f64]) -> Result<Verdict<GrowthViolation>> {
    check_param(!t_samples.is_empty(), "t_samples", || "empty sample set".into())?;
    let k = spec.growth_constant();
    let e = spec.ell() + 2.0;
    for &t in t_samples {
        check_param(t >= 0.0, "t_samples", || format!("{t} is negative"))?;
        for r in GROWTH_RADII {
            let value = spec.primitive(r, t);
            let bound = k * (t * t + t.powf(e));
            if !(value >= 0.0 && value <= bound) {
                return Ok(Verdict::Fail(GrowthViolation { r, t, value, bound }));
            }
        }
    }
    Ok(Verdict::Pass)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VanishingWitness {
    pub r0: f64,
    pub t0: f64,
}

const VANISHING_T_STEPS: usize = 64;
const VANISHING_R_OFFSETS: [f64; 5] = [0.0, 1.0, 10.0, 100.0, 1000.0];

fn vanishing_holds(spec: &dyn Integrand, epsilon: f64, w: VanishingWitness) -> bool {
    let t_top = if w.t0.is_finite() { w.t0 } else { 1e3 };
    VANISHING_R_OFFSETS.iter().all(|dr| {
        let r = w.r0 + dr;
        (0..=VANISHING_T_STEPS).all(|j| {
            let t = t_top * j as f64 / VANISHING_T_STEPS as f64;
            spec.primitive(r, t) <= epsilon * t * t * (1.0 + 1e-12)
        })
    })
}

/// Vanishing hypothesis: find `(R0, t0)` with `F(r,t) ≤ εt²` for `r ≥ R0`,
/// `0 ≤ t ≤ t0`.
///
/// Uses the integrand's closed-form witness when it has one, otherwise
/// searches `t0 ∈ {2^{-k}}`, `R0 ∈ {0, 10^j}`. Every returned pair is
/// re-verified on a sample grid; `None` means no witness was found.
pub fn check_vanishing(spec: &dyn Integrand, epsilon: f64) -> Result<Option<VanishingWitness>> {
    check_param(epsilon > 0.0 && epsilon.is_finite(), "epsilon", || format!("{epsilon} must be > 0"))?;
    if let Some(w) = spec.vanishing_witness(epsilon) {
        if vanishing_holds(spec, epsilon, w) {
            return Ok(Some(w));
        }
    }
    for r0 in [0.0, 1.0, 10.0, 100.0, 1000.0, 1e4] {
        for k in 0..48 {
            let w = VanishingWitness { r0, t0: 0.5f64.powi(k) };
            if vanishing_holds(spec, epsilon, w) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// A point `(r, R, a, A)` with `r < R` and `a < A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadruple {
    pub r: f64,
    pub big_r: f64,
    pub a: f64,
    pub big_a: f64,
}

impl Quadruple {
    pub fn new(r: f64, big_r: f64, a: f64, big_a: f64) -> Self {
        Self { r, big_r, a, big_a }
    }

    fn validate(&self) -> Result<()> {
        if self.r >= 0.0 && self.r < self.big_r && self.a < self.big_a {
            Ok(())
        } else {
            Err(Error::MalformedQuadruple { r: self.r, big_r: self.big_r, a: self.a, big_a: self.big_a })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupermodularViolation {
    pub quadruple: Quadruple,
    /// F(r,A) + F(R,a)
    pub lhs: f64,
    /// F(r,a) + F(R,A)
    pub rhs: f64,
}

/// Supermodularity of `(v, y) ↦ F(1/v, y)`:
/// `F(r,A) + F(R,a) ≥ F(r,a) + F(R,A)` for `r < R`, `a < A`.
///
/// With `strict` the inequality must be strict on every quadruple.
pub fn check_supermodular(
    spec: &dyn Integrand,
    quadruples: &[Quadruple],
    strict: bool,
) -> Result<Verdict<SupermodularViolation>> {
    for q in quadruples {
        q.validate()?;
    }
    for q in quadruples {
        let lhs = spec.primitive(q.r, q.big_a) + spec.primitive(q.big_r, q.a);
        let rhs = spec.primitive(q.r, q.a) + spec.primitive(q.big_r, q.big_a);
        let ok = if strict { lhs > rhs } else { lhs >= rhs };
        if !ok {
            return Ok(Verdict::Fail(SupermodularViolation { quadruple: *q, lhs, rhs }));
        }
    }
    Ok(Verdict::Pass)
}

/// Quadruples used as the precondition for the rearrangement checks:
/// radii in {0, 0.5, 1, 2, 5, 10, 50}, values in {0, 0.1, 0.5, 1, 2, 5, 10}.
pub fn canonical_quadruples() -> Vec<Quadruple> {
    const R: [f64; 7] = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0];
    const T: [f64; 7] = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
    let mut out = Vec::new();
    for (i, &r) in R.iter().enumerate() {
        for &big_r in &R[i + 1..] {
            for (j, &a) in T.iter().enumerate() {
                for &big_a in &T[j + 1..] {
                    out.push(Quadruple::new(r, big_r, a, big_a));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Claims ℓ = 1 but grows like t⁶.
    struct Misdeclared;
    impl Integrand for Misdeclared {
        fn primitive(&self, _r: f64, t: f64) -> f64 {
            t.abs().powi(6)
        }
        fn density(&self, _r: f64, t: f64) -> f64 {
            6.0 * t.powi(5)
        }
        fn ell(&self) -> f64 {
            1.0
        }
        fn growth_constant(&self) -> f64 {
            1.0
        }
    }

    /// F(r,t) = t², which has a genuine quadratic part.
    struct Quadratic;
    impl Integrand for Quadratic {
        fn primitive(&self, _r: f64, t: f64) -> f64 {
            t * t
        }
        fn density(&self, _r: f64, t: f64) -> f64 {
            2.0 * t
        }
        fn ell(&self) -> f64 {
            1.0
        }
        fn growth_constant(&self) -> f64 {
            1.0
        }
    }

    /// e^{+r} t²/2: increasing weight.
    struct Increasing;
    impl Integrand for Increasing {
        fn primitive(&self, r: f64, t: f64) -> f64 {
            r.exp() * t * t / 2.0
        }
        fn density(&self, r: f64, t: f64) -> f64 {
            r.exp() * t
        }
        fn ell(&self) -> f64 {
            0.0
        }
        fn growth_constant(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn primitive_values() {
        let p = NonlinearitySpec::pure_power(1.0, 1.0).unwrap();
        assert_relative_eq!(p.eval(0.0, 1.0).unwrap(), 1.0 / 3.0, max_relative = 1e-15);
        let w = NonlinearitySpec::weighted_power(0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(w.eval(1.0, 2.0).unwrap(), 2.0 * (-1.0f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(w.eval(1.0, 2.0).unwrap(), 0.735_758_882_342_885, max_relative = 1e-12);
        for spec in [p, w, NonlinearitySpec::zero()] {
            assert_eq!(spec.eval(3.0, 0.0).unwrap(), 0.0);
            assert_eq!(spec.eval_density(3.0, 0.0).unwrap(), 0.0);
            assert!(spec.eval(-1.0, 1.0).is_err());
            assert!(spec.eval_density(-1.0, 1.0).is_err());
        }
    }

    #[test]
    fn density_values() {
        let p = NonlinearitySpec::pure_power(2.0, 1.0).unwrap();
        assert_eq!(p.eval_density(5.0, 2.0).unwrap(), 8.0);
        assert_eq!(p.eval_density(5.0, -2.0).unwrap(), -8.0);
        let w = NonlinearitySpec::weighted_power(2.0, 1.0, 1.0).unwrap();
        assert_eq!(w.eval_density(0.0, 1.7).unwrap(), p.eval_density(0.0, 1.7).unwrap());
    }

    #[test]
    fn density_matches_finite_differences() {
        let specs = [
            NonlinearitySpec::pure_power(1.0, 1.0).unwrap(),
            NonlinearitySpec::pure_power(0.5, 2.0).unwrap(),
            NonlinearitySpec::weighted_power(1.5, 0.7, 0.3).unwrap(),
        ];
        for spec in &specs {
            for &t in &[0.1f64, 0.37, 1.0, 2.5, 10.0, -0.4, -7.0] {
                let eps = 1e-6 * t.abs();
                let fd = (spec.primitive(1.3, t + eps) - spec.primitive(1.3, t - eps)) / (2.0 * eps);
                assert_relative_eq!(spec.density(1.3, t), fd, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn potential_of_constant() {
        let g = crate::grid::GridSpec::line(16, 1.0).unwrap();
        let u = Field::constant(g, 1.0).unwrap();
        let p = NonlinearitySpec::pure_power(1.0, 1.0).unwrap();
        assert_relative_eq!(potential_energy(&u, &p), 1.0 / 3.0, max_relative = 1e-14);
        assert_eq!(potential_energy(&u, &NonlinearitySpec::zero()), 0.0);
    }

    #[test]
    fn growth_checks() {
        let samples = [0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0];
        let p = NonlinearitySpec::pure_power(1.0, 1.0).unwrap().with_growth_constant(1.0).unwrap();
        assert!(check_growth(&p, &samples).unwrap().passed());
        assert!(check_growth(&NonlinearitySpec::zero(), &samples).unwrap().passed());
        match check_growth(&Misdeclared, &[10.0]).unwrap() {
            Verdict::Fail(w) => {
                assert_eq!(w.t, 10.0);
                assert_eq!(w.value, 1e6);
                assert_eq!(w.bound, 1100.0);
            }
            Verdict::Pass => panic!("misdeclared exponent must fail"),
        }
        assert!(check_growth(&p, &[]).is_err());
    }

    #[test]
    fn vanishing_checks() {
        let p = NonlinearitySpec::pure_power(1.0, 1.0).unwrap();
        let w = check_vanishing(&p, 0.1).unwrap().unwrap();
        assert_eq!(w.r0, 0.0);
        assert_relative_eq!(w.t0, 0.3, max_relative = 1e-14);
        assert_eq!(check_vanishing(&Quadratic, 0.1).unwrap(), None);
        let wp = NonlinearitySpec::weighted_power(1.0, 1.0, 1.0).unwrap();
        let ww = check_vanishing(&wp, 0.05).unwrap().unwrap();
        for r in [ww.r0, ww.r0 + 0.5, ww.r0 + 20.0] {
            for j in 0..=10 {
                let t = ww.t0 * j as f64 / 10.0;
                assert!(wp.primitive(r, t) <= 0.05 * t * t * (1.0 + 1e-12));
            }
        }
        // ℓ = 0 weighted quadratic vanishes only at large radius
        let w0 = NonlinearitySpec::weighted_power(0.0, 1.0, 1.0).unwrap();
        let ww0 = check_vanishing(&w0, 0.01).unwrap().unwrap();
        assert!(ww0.r0 > 3.9);
        assert!(check_vanishing(&p, 0.0).is_err());
    }

    #[test]
    fn supermodular_checks() {
        let q = [Quadruple::new(0.0, 1.0, 1.0, 2.0)];
        let p = NonlinearitySpec::pure_power(1.0, 1.0).unwrap();
        assert!(check_supermodular(&p, &q, false).unwrap().passed());
        assert!(!check_supermodular(&p, &q, true).unwrap().passed());
        let w = NonlinearitySpec::weighted_power(0.0, 1.0, 1.0).unwrap();
        assert!(check_supermodular(&w, &q, true).unwrap().passed());
        let lhs = w.primitive(0.0, 2.0) + w.primitive(1.0, 1.0);
        let rhs = w.primitive(0.0, 1.0) + w.primitive(1.0, 2.0);
        assert_relative_eq!(lhs, 2.183_939_720_585_721, max_relative = 1e-12);
        assert_relative_eq!(rhs, 1.235_758_882_342_885, max_relative = 1e-12);
        match check_supermodular(&Increasing, &q, false).unwrap() {
            Verdict::Fail(v) => assert_eq!(v.quadruple, q[0]),
            Verdict::Pass => panic!("increasing weight must fail"),
        }
        assert!(check_supermodular(&p, &[Quadruple::new(1.0, 0.0, 1.0, 2.0)], false).is_err());
        assert!(check_supermodular(&w, &canonical_quadruples(), false).unwrap().passed());
    }

    #[test]
    fn json_interface() {
        let spec: NonlinearitySpec =
            serde_json::from_str(r#"{"kind":"weighted_power","ell":1.0,"amplitude":2.0,"weight_rate":0.5,"K":1.0}"#)
                .unwrap();
        assert_eq!(spec.kind(), NonlinearityKind::WeightedPower);
        assert_eq!(spec.weight_rate(), 0.5);
        assert_eq!(spec.growth_constant(), 1.0);
        let back = serde_json::to_value(spec).unwrap();
        assert_eq!(back["K"], 1.0);
        assert_eq!(back["kind"], "weighted_power");
        assert!(serde_json::from_str::<NonlinearitySpec>(r#"{"kind":"pure_power","ell":1,"K":1,"extra":2}"#).is_err());
        assert!(serde_json::from_str::<NonlinearitySpec>(r#"{"kind":"pure_power","ell":-1,"K":1}"#).is_err());
    }
}
