//! A fixed verification session: every suite, the nine regime cases and a
//! representative run of each command, collected as named payloads.
//!
//! Two sessions with the same seed must produce identical payloads.

use std::collections::BTreeMap;

use fracvar::{GridSpec, InitKind, NonlinearitySpec, Profile, SolveResult};

use crate::commands::{gn, regime, scaling, scan, solve};
use crate::config::{OutputSection, ProblemSection, RunConfig, SolverSection};
use crate::error::CliResult;
use crate::report::to_json;
use crate::suites::{run_suite, Suite, SuiteOptions};

/// Trials per suite in a session.
pub const SESSION_TRIALS: [(Suite, usize); 6] = [
    (Suite::PolyaSzego, 20),
    (Suite::Riesz, 20),
    (Suite::Gn, 10),
    (Suite::Supermodular, 20),
    (Suite::Gradient, 10),
    (Suite::Decay, 20),
];

pub struct SessionSolve {
    pub name: String,
    pub config: RunConfig,
    pub result: SolveResult,
}

pub struct Session {
    pub payloads: BTreeMap<String, String>,
    pub solves: Vec<SessionSolve>,
    pub suite_failures: usize,
}

fn run_config(grid: GridSpec, s: f64, c: f64, spec: NonlinearitySpec, solver: SolverSection) -> RunConfig {
    RunConfig {
        grid,
        problem: ProblemSection { s, c, nonlinearity: spec, oracle_mode: s == 1.0, gn_constant: None },
        solver,
        output: OutputSection::default(),
    }
}

/// The soliton oracle: `s = 1`, `ℓ = 2`, `c = 2` on `L = 40`, `n = 1024`.
pub fn soliton_config() -> RunConfig {
    let grid = GridSpec::line(1024, 40.0).expect("valid grid");
    let spec = NonlinearitySpec::pure_power(2.0, 1.0).expect("valid spec");
    run_config(grid, 1.0, 2.0, spec, SolverSection::default())
}

/// Subcritical `s = ½`, `ℓ = 1` from seeded noise.
pub fn subcritical_config(c: f64, seed: u64) -> RunConfig {
    let grid = GridSpec::line(512, 60.0).expect("valid grid");
    let spec = NonlinearitySpec::pure_power(1.0, 1.0).expect("valid spec");
    let solver = SolverSection { seed: Some(seed), init: Some(InitKind::SeededNoise), ..Default::default() };
    run_config(grid, 0.5, c, spec, solver)
}

/// Round-trips a config through its JSON text, as the binary would.
fn reparse(rc: &RunConfig) -> CliResult<(RunConfig, Box<serde_json::value::RawValue>)> {
    RunConfig::parse(&to_json(rc))
}

pub fn verification_session(seed: u64) -> CliResult<Session> {
    let mut payloads = BTreeMap::new();
    let mut solves = Vec::new();
    let mut suite_failures = 0;

    for (suite, trials) in SESSION_TRIALS {
        let verdict = run_suite(suite, trials, seed, SuiteOptions::default())?;
        suite_failures += verdict.failures.len();
        payloads.insert(format!("verify/{}.json", suite.name()), to_json(&verdict));
    }

    for ell in ["1", "2", "3"] {
        for s in ["1/4", "1/2", "3/4"] {
            let out = regime(ell, s, 1, None, None)?;
            payloads.insert(format!("regime/ell{ell}_s{}.json", s.replace('/', "-")), out.stdout);
        }
    }

    let mut named = vec![("soliton".to_string(), soliton_config())];
    for c in [0.5, 1.0, 2.0] {
        named.push((format!("subcritical_c{c}"), subcritical_config(c, seed)));
    }
    for (name, rc) in named {
        let (rc, raw) = reparse(&rc)?;
        let (outcome, result) = solve(&rc, &raw)?;
        for (file, text) in outcome.bundle.files {
            payloads.insert(format!("solve/{name}/{file}"), text);
        }
        solves.push(SessionSolve { name, config: rc, result });
    }

    let gn_out = gn(GridSpec::line(1024, 60.0)?, 0.5, 2.0, seed, 50)?;
    for (file, text) in gn_out.bundle.files {
        payloads.insert(format!("gn/{file}"), text);
    }

    let demo = run_config(
        GridSpec::line(16384, 160.0)?,
        0.5,
        4.0,
        NonlinearitySpec::pure_power(3.0, 1.0)?,
        SolverSection::default(),
    );
    let (demo, raw) = reparse(&demo)?;
    let lambdas = fracvar::diagnostics::log_spaced(1.0, 64.0, 10);
    for (file, text) in scaling(&demo, &raw, Profile::Gaussian, &lambdas)?.bundle.files {
        payloads.insert(format!("scaling/{file}"), text);
    }

    let base = run_config(
        GridSpec::line(256, 40.0)?,
        0.5,
        1.0,
        NonlinearitySpec::pure_power(1.0, 1.0)?,
        SolverSection { threads: Some(2), ..Default::default() },
    );
    let (base, raw) = reparse(&base)?;
    for (file, text) in scan(&base, &raw, &[0.5, 1.0, 1.5, 2.0])?.bundle.files {
        payloads.insert(format!("scan/{file}"), text);
    }

    Ok(Session { payloads, solves, suite_failures })
}
