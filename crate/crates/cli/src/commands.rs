//! One function per subcommand. Each returns the bundle it wrote and the
//! text for stdout; non-convergence and failed suites are outcomes with a
//! nonzero code, not errors, so their reports are still emitted.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::value::RawValue;

use fracvar::diagnostics::{
    classify_regime, critical_mass_bound, log_spaced, scaling_family, scan_mass, RegimeReport, Scalar, ScalingRow,
    ScanRow,
};
use fracvar::variational::gn_constant;
use fracvar::Integrand;
use fracvar::{
    minimize_weinstein, solve_pc, EnergyBreakdown, GridSpec, Profile, SolveConfig, SolveResult, WeinsteinConfig,
};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::report::{to_json, Bundle};
use crate::suites::{run_suite, SuiteOptions};
use crate::Command;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub bundle: Bundle,
}

pub fn execute(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Solve { config, out } => {
            let (rc, raw) = RunConfig::load(&config)?;
            let (outcome, _) = solve(&rc, &raw)?;
            finish(outcome, out.as_deref().unwrap_or(&rc.output.dir), "solve")
        }
        Command::Regime { ell, s, dim, k, gn_constant } => regime(&ell, &s, dim, k, gn_constant),
        Command::Verify { suite, trials, seed, adversarial, s, alpha, out } => {
            let verdict = run_suite(suite, trials, seed, SuiteOptions { adversarial, s, alpha })?;
            let text = to_json(&verdict);
            if let Some(path) = out {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(&path, &text)?;
            }
            let code = if verdict.pass { 0 } else { 4 };
            Ok(Outcome { code, stdout: text, bundle: Bundle::default() })
        }
        Command::Gn { s, alpha, n, box_length, seed, trials, out } => {
            let grid = GridSpec::line(n, box_length)?;
            finish(gn(grid, s, alpha, seed, trials)?, &out, "gn")
        }
        Command::Scaling { config, profile, lambda_grid, out } => {
            let (rc, raw) = RunConfig::load(&config)?;
            let profile: Profile = profile.parse().map_err(CliError::Config)?;
            let lambdas = parse_grid(&lambda_grid, Spacing::Log)?;
            finish(scaling(&rc, &raw, profile, &lambdas)?, out.as_deref().unwrap_or(&rc.output.dir), "scaling")
        }
        Command::Scan { config, c_grid, out } => {
            let (rc, raw) = RunConfig::load(&config)?;
            let grid = parse_grid(&c_grid, Spacing::Linear)?;
            finish(scan(&rc, &raw, &grid)?, out.as_deref().unwrap_or(&rc.output.dir), "scan")
        }
    }
}

fn finish(outcome: Outcome, dir: &Path, command: &str) -> CliResult<Outcome> {
    outcome.bundle.write(dir, command)?;
    Ok(outcome)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `lo:hi:count` or `a,b,c,…`.
pub fn parse_grid(text: &str, spacing: Spacing) -> CliResult<Vec<f64>> {
    let bad = |what: &str| CliError::Config(format!("grid `{text}`: {what}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected lo:hi:count"));
        }
        let (lo, hi) = (num(parts[0])?, num(parts[1])?);
        let count: usize = parts[2].trim().parse().map_err(|_| bad("count is not an integer"))?;
        if count == 0 || !lo.is_finite() || !hi.is_finite() || lo > hi || (count > 1 && lo == hi) {
            return Err(bad("need lo < hi and count >= 1"));
        }
        match spacing {
            Spacing::Log if lo <= 0.0 => return Err(bad("log spacing needs lo > 0")),
            Spacing::Log => log_spaced(lo, hi, count),
            Spacing::Linear if count == 1 => vec![lo],
            Spacing::Linear => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
        }
    } else {
        text.split(',').map(num).collect::<CliResult<Vec<f64>>>()?
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("non-finite value"));
    }
    Ok(values)
}

#[derive(Serialize)]
struct SolveReport<'a> {
    command: &'static str,
    regime: Option<RegimeReport>,
    energy: EnergyBreakdown,
    iterations: usize,
    converged: bool,
    residual: f64,
    lagrange_multiplier: f64,
    symmetry_defect: f64,
    truncation_warning: bool,
    threads: usize,
    config_echo: &'a RawValue,
}

fn regime_of_config(config: &SolveConfig) -> Option<RegimeReport> {
    let ell = config.spec.ell();
    (ell > 0.0).then(|| classify_regime(ell, config.s, config.grid.dim()).ok()).flatten()
}

/// `iteration,kinetic,potential,total,mass`
pub fn trace_csv(trace: &[EnergyBreakdown]) -> String {
    let mut out = String::from("iteration,kinetic,potential,total,mass\n");
    for (i, e) in trace.iter().enumerate() {
        let _ = writeln!(out, "{i},{:.17e},{:.17e},{:.17e},{:.17e}", e.kinetic, e.potential, e.total, e.mass);
    }
    out
}

/// Runs the solver and assembles `result.json`, `profile.csv` and
/// `trace.csv` as the output section asks.
pub fn solve(rc: &RunConfig, raw: &RawValue) -> CliResult<(Outcome, SolveResult)> {
    let config = rc.solve_config();
    let result = solve_pc(&config)?;
    let report = SolveReport {
        command: "solve",
        regime: regime_of_config(&config),
        energy: result.energy,
        iterations: result.iterations,
        converged: result.converged,
        residual: result.residual,
        lagrange_multiplier: result.lagrange_multiplier,
        symmetry_defect: result.symmetry_defect,
        truncation_warning: result.truncation_warning,
        threads: config.threads,
        config_echo: raw,
    };
    let text = to_json(&report);
    let mut bundle = Bundle::default();
    if rc.output.emit_json {
        bundle.add("result.json", text.clone());
    }
    if rc.output.emit_profile {
        bundle.add("profile.csv", result.minimizer.to_csv_string());
    }
    bundle.add("trace.csv", trace_csv(&result.trace));
    let code = if result.converged { 0 } else { 3 };
    Ok((Outcome { code, stdout: text, bundle }, result))
}

pub fn regime(ell: &str, s: &str, dim: usize, k: Option<f64>, kprime: Option<f64>) -> CliResult<Outcome> {
    let ell_v: Scalar = ell.parse().map_err(|e| CliError::Config(format!("--ell: {e}")))?;
    let s_v: Scalar = s.parse().map_err(|e| CliError::Config(format!("--s: {e}")))?;
    let mut report = classify_regime(ell_v, s_v, dim).map_err(|e| CliError::Config(e.to_string()))?;
    if let (Some(k), Some(kp)) = (k, kprime) {
        let c_star = critical_mass_bound(k, kp.powf(ell_v.value() + 2.0), dim, s_v.value())
            .map_err(|e| CliError::Config(e.to_string()))?;
        report = report.with_critical_mass(c_star);
    }
    Ok(Outcome { code: 0, stdout: to_json(&report), bundle: Bundle::default() })
}

#[derive(Serialize)]
struct GnReport {
    command: &'static str,
    grid: GridSpec,
    s: f64,
    alpha: f64,
    seed: u64,
    j_min: f64,
    kprime: f64,
    converged: bool,
    residual: f64,
    iterations: usize,
    best_trial: f64,
    trial_values: Vec<f64>,
}

pub fn gn(grid: GridSpec, s: f64, alpha: f64, seed: u64, trials: usize) -> CliResult<Outcome> {
    let mut wc = WeinsteinConfig::new(grid, s, alpha);
    wc.seed = seed;
    wc.trials = trials;
    let w = minimize_weinstein(&wc)?;
    let report = GnReport {
        command: "gn",
        grid,
        s,
        alpha,
        seed,
        j_min: w.j_min,
        kprime: gn_constant(w.j_min, alpha)?,
        converged: w.converged,
        residual: w.residual,
        iterations: w.iterations,
        best_trial: w.trial_values.iter().copied().fold(f64::INFINITY, f64::min),
        trial_values: w.trial_values,
    };
    let text = to_json(&report);
    let mut bundle = Bundle::default();
    bundle.add("gn.json", text.clone());
    bundle.add("profile.csv", w.profile.to_csv_string());
    Ok(Outcome { code: if w.converged { 0 } else { 3 }, stdout: text, bundle })
}

#[derive(Serialize)]
struct ScalingReport<'a> {
    command: &'static str,
    profile: Profile,
    regime: Option<RegimeReport>,
    kinetic_slope: f64,
    potential_slope: Option<f64>,
    tail_decreasing: bool,
    last_total: Option<f64>,
    warnings: &'a [String],
    rows: &'a [ScalingRow],
    config_echo: &'a RawValue,
}

pub fn scaling(rc: &RunConfig, raw: &RawValue, profile: Profile, lambdas: &[f64]) -> CliResult<Outcome> {
    let config = rc.solve_config();
    let table = scaling_family(config.grid, profile, config.s, &config.spec, config.c, lambdas)?;
    let report = ScalingReport {
        command: "scaling",
        profile,
        regime: regime_of_config(&config),
        kinetic_slope: table.kinetic_slope,
        potential_slope: table.potential_slope,
        tail_decreasing: table.tail_decreasing,
        last_total: table.last_total(),
        warnings: &table.warnings,
        rows: &table.rows,
        config_echo: raw,
    };
    let text = to_json(&report);
    let mut bundle = Bundle::default();
    bundle.add("scaling.csv", table.to_csv_string());
    if rc.output.emit_json {
        bundle.add("scaling.json", text.clone());
    }
    Ok(Outcome { code: 0, stdout: text, bundle })
}

#[derive(Serialize)]
struct ScanReport<'a> {
    command: &'static str,
    verdict: &'static str,
    strictly_decreasing: bool,
    weakly_decreasing: bool,
    all_converged: bool,
    warnings: &'a [String],
    rows: &'a [ScanRow],
    threads: usize,
    config_echo: &'a RawValue,
}

/// The verdict is data: a FAIL scan still exits 0. Only unconverged
/// members give 3.
pub fn scan(rc: &RunConfig, raw: &RawValue, c_grid: &[f64]) -> CliResult<Outcome> {
    let config = rc.solve_config();
    let table = scan_mass(&config, c_grid)?;
    let report = ScanReport {
        command: "scan",
        verdict: table.verdict(),
        strictly_decreasing: table.strictly_decreasing,
        weakly_decreasing: table.weakly_decreasing,
        all_converged: table.all_converged,
        warnings: &table.warnings,
        rows: &table.rows,
        threads: config.threads,
        config_echo: raw,
    };
    let text = to_json(&report);
    let mut bundle = Bundle::default();
    bundle.add("scan.csv", table.to_csv_string());
    if rc.output.emit_json {
        bundle.add("scan.json", text.clone());
    }
    Ok(Outcome { code: if table.all_converged { 0 } else { 3 }, stdout: text, bundle })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_parse_both_forms() {
        assert_eq!(parse_grid("0.5,1,1.5", Spacing::Linear).unwrap(), vec![0.5, 1.0, 1.5]);
        assert_eq!(parse_grid("0.5:2:4", Spacing::Linear).unwrap(), vec![0.5, 1.0, 1.5, 2.0]);
        let l = parse_grid("1:64:7", Spacing::Log).unwrap();
        assert_eq!(l.len(), 7);
        assert!((l[1] - 2.0).abs() < 1e-12 && l[6] == 64.0);
        for bad in ["1:2", "a,b", "2:1:3", "0:4:3", "1:4:0"] {
            assert!(parse_grid(bad, Spacing::Log).is_err(), "{bad}");
        }
    }

    #[test]
    fn regime_fills_critical_mass_only_when_critical() {
        let out = regime("2", "1/2", 1, Some(0.25), Some(1.0)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["regime"], "critical");
        assert!((v["critical_mass"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let sub = regime("1", "1/2", 1, Some(0.25), Some(1.0)).unwrap();
        assert!(sub.stdout.contains("\"critical_mass\": null"));
        assert!(regime("x", "1/2", 1, None, None).is_err());
    }
}
