//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::time::Instant;

use fracvar::diagnostics::*;
use fracvar::fields::bump_mixture;
use fracvar::rearrange::{EXACT_SLACK, SPECTRAL_SLACK_1D};
use fracvar::variational::{gn_constant, EnergyFunctional};
use fracvar::*;
use fracvar_cli::session::{soliton_config, verification_session, Session};
use fracvar_cli::{run_suite, Suite, SuiteOptions};

type Outcome = Result<(bool, String), String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

const SESSION_SEED: u64 = 2024;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn suite(suite: Suite, trials: usize, seed: u64) -> Outcome {
    let v = run_suite(suite, trials, seed, SuiteOptions::default()).map_err(err)?;
    let seeds: Vec<u64> = v.failures.iter().map(|f| f.seed).collect();
    Ok((v.pass, format!("{} trials from seed {seed}, failing seeds {seeds:?}", v.trials)))
}

fn polya_szego() -> Outcome {
    let (pass, detail) = suite(Suite::PolyaSzego, 200, 42)?;
    Ok((pass, format!("{detail}; Gagliardo slack {EXACT_SLACK:e}, spectral slack {SPECTRAL_SLACK_1D:e}")))
}

fn riesz() -> Outcome {
    let (pass, detail) = suite(Suite::Riesz, 200, 7)?;
    Ok((pass, format!("{detail}; slack {EXACT_SLACK:e}")))
}

fn soliton() -> Outcome {
    let rc = soliton_config();
    let start = Instant::now();
    let result = solve_pc(&rc.solve_config()).map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    let e_err = (result.energy.total + 2.0 / 3.0).abs() / (2.0 / 3.0);
    let u = &result.minimizer;
    let grid = *u.grid();
    let (i0, sign) = (u.argmax(), u.values()[u.argmax()].signum());
    let x0 = grid.position(i0)[0];
    let linf = (0..grid.len())
        .map(|j| (sign * u.values()[j] - 2f64.sqrt() / (grid.position(j)[0] - x0).cosh()).abs())
        .fold(0.0, f64::max);
    let pass = result.converged && e_err < 1e-3 && linf < 1e-3 && secs < 60.0;
    Ok((
        pass,
        format!(
            "E = {:.12} (rel err {e_err:.2e} < 1e-3), L∞ to √2 sech {linf:.2e} < 1e-3, {secs:.2} s < 60 s",
            result.energy.total
        ),
    ))
}

fn gradient() -> Outcome {
    let grid = GridSpec::line(256, 30.0).map_err(err)?;
    let spec = NonlinearitySpec::weighted_power(1.5, 1.2, 0.4).map_err(err)?;
    let f = EnergyFunctional::new(grid, 0.6, &spec).map_err(err)?;
    let mut rng = SplitMix64::new(11);
    let eta = 1e-5;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let u = bump_mixture(grid, &mut rng, true);
        let v = bump_mixture(grid, &mut rng, true);
        let analytic = f.gradient(&u).and_then(|g| g.dot(&v)).map_err(err)?;
        let plus = f.energy(&u.axpy(eta, &v).map_err(err)?).map_err(err)?.total;
        let minus = f.energy(&u.axpy(-eta, &v).map_err(err)?).map_err(err)?.total;
        let numeric = (plus - minus) / (2.0 * eta);
        worst = worst.max((analytic - numeric).abs() / analytic.abs());
    }
    let (pass, detail) = suite(Suite::Gradient, 10, 11)?;
    Ok((worst <= 1e-6 && pass, format!("worst relative error {worst:.2e} <= 1e-6 over 10 pairs; suite: {detail}")))
}

fn scaling() -> Outcome {
    let grid = GridSpec::line(16384, 160.0).map_err(err)?;
    let lambdas = log_spaced(1.0, 64.0, 10);
    let mut pass = true;
    let mut detail = Vec::new();
    for (s, ell) in [(0.5, 1.0), (0.7, 0.6)] {
        let spec = NonlinearitySpec::pure_power(ell, 1.0).map_err(err)?;
        let t = scaling_family(grid, Profile::Gaussian, s, &spec, 1.0, &lambdas).map_err(err)?;
        let dk = (t.kinetic_slope - 2.0 * s).abs();
        let dp = t.potential_slope.map_or(f64::INFINITY, |p| (p - ell / 2.0).abs());
        pass &= dk <= 1e-3 && dp <= 1e-3;
        detail.push(format!("s={s} ℓ={ell}: |Δkin| {dk:.1e}, |Δpot| {dp:.1e}"));
    }
    let spec = NonlinearitySpec::pure_power(3.0, 1.0).map_err(err)?;
    let t = scaling_family(grid, Profile::Gaussian, 0.5, &spec, 4.0, &lambdas).map_err(err)?;
    let last = t.last_total().unwrap_or(f64::NAN);
    pass &= last < -1e3 && t.tail_decreasing;
    detail.push(format!("supercritical last total {last:.4e} < -1e3, tail decreasing {}", t.tail_decreasing));
    Ok((pass, format!("{} (tol 1e-3)", detail.join("; "))))
}

fn regimes() -> Outcome {
    let mut mismatches = Vec::new();
    for ell in [1i64, 2, 3] {
        for (num, den) in [(1i64, 4i64), (1, 2), (3, 4)] {
            let expected = match (ell * den).cmp(&(4 * num)) {
                std::cmp::Ordering::Less => Regime::Subcritical,
                std::cmp::Ordering::Equal => Regime::Critical,
                std::cmp::Ordering::Greater => Regime::Supercritical,
            };
            let s: Scalar = format!("{num}/{den}").parse().map_err(err)?;
            let r = classify_regime(Scalar::from(ell), s, 1).map_err(err)?;
            let sv = num as f64 / den as f64;
            let fl =
                if 2 * num < den { ExtendedReal::Finite(4.0 * sv / (1.0 - 2.0 * sv)) } else { ExtendedReal::Infinity };
            if r.regime != expected || !r.exact || r.alpha_max_fl != Some(fl) || r.alpha_max_paper != Some(4.0 * sv) {
                mismatches.push(format!("ℓ={ell}, s={num}/{den}"));
            }
        }
    }
    Ok((mismatches.is_empty(), format!("9 cases, exact rational comparison, mismatches {mismatches:?}")))
}

fn coercivity(session: &Session) -> Outcome {
    let mut checked = 0;
    let mut violations = Vec::new();
    for solve in &session.solves {
        let config = solve.config.solve_config();
        let ell = config.spec.ell();
        let wc = WeinsteinConfig::new(config.grid, config.s, ell);
        let kprime = minimize_weinstein(&wc).and_then(|w| gn_constant(w.j_min, ell)).map_err(err)?;
        let gn = kprime.powf(ell + 2.0);
        let k = config.spec.growth_constant();
        for (i, e) in solve.result.trace.iter().enumerate() {
            let c = e.mass.sqrt();
            let params =
                CoercivityParams::optimized(k, gn, config.grid.dim(), config.s, ell, c, e.dirichlet()).map_err(err)?;
            let bound = coercivity_lower_bound(&params, c, e.dirichlet());
            checked += 1;
            if e.total < bound {
                violations.push(format!("{} iterate {i}: {} < {bound}", solve.name, e.total));
            }
        }
    }
    Ok((
        violations.is_empty() && checked > 0,
        format!("{checked} iterates over {} session solves, violations {violations:?}", session.solves.len()),
    ))
}

fn critical_mass() -> Outcome {
    let (s, ell) = (0.5, 2.0);
    let grid = GridSpec::line(1024, 60.0).map_err(err)?;
    let spec = NonlinearitySpec::pure_power(ell, 1.0).map_err(err)?;
    let w = minimize_weinstein(&WeinsteinConfig::new(grid, s, ell)).map_err(err)?;
    let kprime = gn_constant(w.j_min, ell).map_err(err)?;
    let gn = kprime.powf(ell + 2.0);
    let k = spec.growth_constant();
    let c_star = critical_mass_bound(k, gn, 1, s).map_err(err)?;

    let mut config = SolveConfig::new(grid, s, spec, 0.5 * c_star);
    config.gn_constant = Some(kprime);
    let result = solve_pc(&config).map_err(err)?;
    let below = result
        .trace
        .iter()
        .filter(|e| e.total < critical_lower_bound(k, gn, 1, s, 0.5 * c_star, e.dirichlet()))
        .count();

    let big = GridSpec::line(16384, 160.0).map_err(err)?;
    let t = scaling_family(big, Profile::Gaussian, s, &spec, 4.0 * c_star, &log_spaced(1.0, 64.0, 10)).map_err(err)?;
    let last = t.last_total().unwrap_or(f64::NAN);
    let mass_ok = t.rows.iter().all(|r| (r.energy.mass - 16.0 * c_star * c_star).abs() <= 1e-10 * r.energy.mass);
    Ok((
        below == 0 && last < -100.0 && mass_ok,
        format!(
            "c* = {c_star:.10}; 0.5c*: {} iterates, {below} below the bound; 4c*: E = {last:.4e} < -100 on S_c",
            result.trace.len()
        ),
    ))
}

fn scan() -> Outcome {
    let grid = GridSpec::line(256, 40.0).map_err(err)?;
    let mut base = SolveConfig::new(grid, 0.5, NonlinearitySpec::pure_power(1.0, 1.0).map_err(err)?, 1.0);
    base.threads = 2;
    let levels = [0.5, 1.0, 1.5, 2.0];
    let table = scan_mass(&base, &levels).map_err(err)?;
    let min_gap = table.rows.windows(2).map(|w| w[0].infimum - w[1].infimum).fold(f64::INFINITY, f64::min);
    let control = scan_mass(&SolveConfig { spec: NonlinearitySpec::zero(), ..base.clone() }, &levels).map_err(err)?;
    let pass =
        table.verdict() == "PASS" && table.all_converged && min_gap > base.tol_energy && control.verdict() == "FAIL";
    Ok((
        pass,
        format!(
            "Ĩ_c = {:?}; min gap {min_gap:.3e} > tol_energy {:e}; zero control {}",
            table.rows.iter().map(|r| format!("{:.6}", r.infimum)).collect::<Vec<_>>(),
            base.tol_energy,
            control.verdict()
        ),
    ))
}

fn weinstein() -> Outcome {
    let small = GridSpec::line(256, 30.0).map_err(err)?;
    let u = fracvar::fields::gaussian(small, [0.3, 0.0], 1.2).map_err(err)?;
    let mut amp: f64 = 0.0;
    for (s, alpha) in [(0.5, 2.0), (0.3, 1.0), (0.8, 0.7)] {
        let a = weinstein_quotient(&u, s, alpha).map_err(err)?;
        let b = weinstein_quotient(&u.scaled(3.0), s, alpha).map_err(err)?;
        amp = amp.max((a - b).abs() / a);
    }
    let long = GridSpec::line(1 << 18, 8192.0).map_err(err)?;
    let mut dil: f64 = 0.0;
    for profile in [Profile::Gaussian, Profile::Sech] {
        let u1 = profile.dilated(long, 1.0).map_err(err)?;
        let u2 = profile.dilated(long, 2.0).map_err(err)?;
        for (s, alpha) in [(0.5, 2.0), (0.75, 1.0)] {
            let a = weinstein_quotient(&u1, s, alpha).map_err(err)?;
            let b = weinstein_quotient(&u2, s, alpha).map_err(err)?;
            dil = dil.max((a - b).abs() / a);
        }
    }
    let grid = GridSpec::line(1024, 60.0).map_err(err)?;
    let w = minimize_weinstein(&WeinsteinConfig::new(grid, 0.5, 2.0)).map_err(err)?;
    let above = w.trial_values.iter().filter(|&&t| w.j_min > t).count();
    let pass = amp <= 1e-10 && dil <= 1e-6 && w.trial_values.len() == 50 && above == 0;
    Ok((
        pass,
        format!(
            "amplitude drift {amp:.1e} <= 1e-10, dilation drift {dil:.1e} <= 1e-6, J_min {:.10} vs {} trials ({above} below it)",
            w.j_min,
            w.trial_values.len()
        ),
    ))
}

fn determinism(first: &Session) -> Outcome {
    let second = verification_session(SESSION_SEED).map_err(err)?;
    let differing: Vec<&String> = first
        .payloads
        .iter()
        .filter(|(name, text)| second.payloads.get(*name) != Some(*text))
        .map(|(name, _)| name)
        .collect();
    let bytes: usize = first.payloads.values().map(String::len).sum();
    let pass = differing.is_empty() && first.payloads.len() == second.payloads.len();
    Ok((pass, format!("{} payloads, {bytes} bytes, differing {differing:?}", first.payloads.len())))
}

fn main() {
    let session = verification_session(SESSION_SEED);
    let criteria: Vec<(&str, Check)> = vec![
        ("Pólya–Szegő suite", Box::new(polya_szego)),
        ("Riesz/supermodularity suite", Box::new(riesz)),
        ("soliton oracle", Box::new(soliton)),
        ("gradient consistency", Box::new(gradient)),
        ("scaling-law certificate", Box::new(scaling)),
        ("regime trichotomy", Box::new(regimes)),
        ("coercivity certificate", Box::new(|| coercivity(session.as_ref().map_err(|e| format!("session: {e}"))?))),
        ("critical-mass behaviour", Box::new(critical_mass)),
        ("strict decrease of the mass scan", Box::new(scan)),
        ("Weinstein invariances", Box::new(weinstein)),
        ("determinism", Box::new(|| determinism(session.as_ref().map_err(|e| format!("session: {e}"))?))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("{verdict} {:>2} {name}: {detail} [{:.1} s]", i + 1, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
