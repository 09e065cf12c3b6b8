use approx::assert_relative_eq;
use proptest::prelude::*;

use fracvar::nonlinearity::{
    canonical_quadruples, check_growth, check_supermodular, check_vanishing, potential_energy, Quadruple,
};
use fracvar::*;

fn specs() -> Vec<NonlinearitySpec> {
    vec![
        NonlinearitySpec::pure_power(1.0, 1.0).unwrap(),
        NonlinearitySpec::pure_power(0.4, 2.5).unwrap(),
        NonlinearitySpec::weighted_power(2.0, 1.0, 0.3).unwrap(),
        NonlinearitySpec::weighted_power(0.5, 0.7, 1.5).unwrap(),
    ]
}

/// Composite Simpson rule on `[0, t]` with `panels` (even) subintervals.
fn simpson(f: impl Fn(f64) -> f64, t: f64, panels: usize) -> f64 {
    let h = t / panels as f64;
    let inner: f64 = (1..panels).map(|i| if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h)).sum();
    (f(0.0) + inner + f(t)) * h / 3.0
}

#[test]
fn primitive_is_the_integral_of_the_density() {
    for spec in specs() {
        for r in [0.0, 0.7, 4.0] {
            for t in [-2.0, -0.3, 0.5, 1.0, 3.0] {
                let integral = simpson(|y| spec.eval_density(r, y).unwrap(), t, 10_000);
                let direct = spec.eval(r, t).unwrap();
                assert_relative_eq!(integral, direct, max_relative = 1e-9, epsilon = 1e-14);
            }
        }
    }
}

#[test]
fn gaussian_potential_converges_under_refinement() {
    // a∫|e^{−x²}|³/3 dx = (a/3)√(π/3) for the pure cubic.
    let spec = NonlinearitySpec::pure_power(1.0, 1.5).unwrap();
    let exact = 0.5 * (std::f64::consts::PI / 3.0).sqrt();
    for n in [256, 1024, 4096] {
        let grid = GridSpec::line(n, 30.0).unwrap();
        let u = Field::from_fn(grid, |x| (-x[0] * x[0]).exp()).unwrap();
        assert_relative_eq!(potential_energy(&u, &spec), exact, max_relative = 1e-8);
    }
}

#[test]
fn weighted_potential_matches_quadrature() {
    // ∫ e^{−ω|x|} e^{−3x²}/3 dx, reference by Simpson on [0, 10] doubled.
    let spec = NonlinearitySpec::weighted_power(1.0, 1.0, 0.8).unwrap();
    let reference = 2.0 * simpson(|x| (-0.8 * x).exp() * (-3.0 * x * x).exp() / 3.0, 10.0, 200_000);
    let grid = GridSpec::line(8192, 40.0).unwrap();
    let u = Field::from_fn(grid, |x| (-x[0] * x[0]).exp()).unwrap();
    // the kink of e^{−ω|x|} at the origin limits the rectangle rule to O(h²)
    assert_relative_eq!(potential_energy(&u, &spec), reference, max_relative = 1e-5);
}

#[test]
fn built_in_integrands_satisfy_every_hypothesis() {
    let samples: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
    for spec in specs() {
        assert!(check_growth(&spec, &samples).unwrap().passed());
        for eps in [1.0, 1e-2, 1e-6] {
            assert!(check_vanishing(&spec, eps).unwrap().is_some());
        }
        assert!(check_supermodular(&spec, &canonical_quadruples(), false).unwrap().passed());
    }
}

#[test]
fn understated_growth_constant_is_caught() {
    let spec = NonlinearitySpec::pure_power(1.0, 1.0).unwrap().with_growth_constant(0.1).unwrap();
    let verdict = check_growth(&spec, &[0.5, 1.0, 2.0]).unwrap();
    let w = verdict.witness().expect("violation");
    assert!(w.value > w.bound);
}

#[test]
fn weighted_power_is_strictly_supermodular_off_the_axes() {
    let spec = NonlinearitySpec::weighted_power(1.0, 1.0, 0.5).unwrap();
    let quads: Vec<Quadruple> = canonical_quadruples().into_iter().filter(|q| q.big_r <= 10.0).collect();
    assert!(check_supermodular(&spec, &quads, true).unwrap().passed());
    // pure powers do not depend on r, so only equality holds
    let flat = NonlinearitySpec::pure_power(1.0, 1.0).unwrap();
    assert!(!check_supermodular(&flat, &quads, true).unwrap().passed());
}

proptest! {
    #[test]
    fn integrands_are_even(t in -50.0f64..50.0, r in 0.0f64..20.0, i in 0usize..4) {
        let spec = specs()[i];
        prop_assert_eq!(spec.eval(r, t).unwrap(), spec.eval(r, -t).unwrap());
        prop_assert_eq!(spec.eval_density(r, t).unwrap(), -spec.eval_density(r, -t).unwrap());
    }

    #[test]
    fn integrands_are_nonincreasing_in_r(t in -10.0f64..10.0, r in 0.0f64..20.0, dr in 0.0f64..5.0, i in 0usize..4) {
        let spec = specs()[i];
        prop_assert!(spec.eval(r + dr, t).unwrap() <= spec.eval(r, t).unwrap());
    }
}
