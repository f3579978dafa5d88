//! Verification runs, sweeps and their CSV output.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::config::{ScenarioConfig, SweepKey};
use crate::optim::OptimizerOptions;
use crate::risk::{evaluate_theorem, RiskReport, VerifyOptions, Violation};

pub const CSV_HEADER: [&str; 10] = [
    "scenario",
    "alpha",
    "estimator",
    "risk",
    "bayes_risk",
    "gap_direct",
    "gap_identity",
    "residual",
    "opt_trace_dist",
    "wall_time_s",
];

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub scenario: String,
    pub alpha: f64,
    pub estimator: String,
    pub risk: f64,
    pub bayes_risk: f64,
    pub gap_direct: f64,
    pub gap_identity: f64,
    pub residual: f64,
    pub opt_trace_dist: f64,
    /// Wall time of the whole α block; 0 when timing is disabled.
    pub wall_time_s: f64,
}

impl ResultRow {
    /// Numbers use 17 significant digits so every double round-trips.
    pub fn record(&self) -> [String; 10] {
        let f = |v: f64| format!("{v:.16e}");
        [
            self.scenario.clone(),
            f(self.alpha),
            self.estimator.clone(),
            f(self.risk),
            f(self.bayes_risk),
            f(self.gap_direct),
            f(self.gap_identity),
            f(self.residual),
            f(self.opt_trace_dist),
            f(self.wall_time_s),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub optimizer: OptimizerOptions,
    pub inject_suboptimal_bayes: bool,
    /// Record wall times; disable for byte-identical output across runs.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            optimizer: OptimizerOptions::default(),
            inject_suboptimal_bayes: false,
            timing: true,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOutcome {
    pub rows: Vec<ResultRow>,
    pub reports: Vec<(String, RiskReport)>,
}

impl RunOutcome {
    pub fn violations(&self) -> impl Iterator<Item = &Violation> {
        self.reports.iter().flat_map(|(_, r)| &r.violations)
    }

    pub fn passed(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_OK
        } else {
            EXIT_VERIFICATION
        }
    }

    /// The first violation as a [`Error::VerificationFailure`].
    pub fn failure(&self) -> Option<Error> {
        self.violations().next().map(Violation::to_error)
    }

    fn extend(&mut self, other: RunOutcome) {
        self.rows.extend(other.rows);
        self.reports.extend(other.reports);
    }
}

fn sorted_alphas(config: &ScenarioConfig) -> Vec<f64> {
    let mut alphas = config.alphas.clone();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    alphas
}

/// Verifies the theorem for every α of the config, in ascending order.
///
/// Assertion failures are recorded in the outcome rather than returned as errors.
pub fn run(config: &ScenarioConfig, options: &RunOptions) -> Result<RunOutcome> {
    let scenario = config.build_scenario()?;
    let alphas = sorted_alphas(config)
        .into_iter()
        .map(crate::divergence::Alpha::new)
        .collect::<Result<Vec<_>>>()?;
    let verify = VerifyOptions {
        zoo: config.zoo_options(),
        optimizer: options.optimizer.clone(),
        inject_suboptimal_bayes: options.inject_suboptimal_bayes,
    };
    let reports = evaluate_theorem(&scenario, &alphas, &verify)?;
    let mut rows = Vec::new();
    for report in &reports {
        let wall_time_s = if options.timing {
            report.wall_time.as_secs_f64()
        } else {
            0.0
        };
        for e in &report.estimators {
            rows.push(ResultRow {
                scenario: config.id.clone(),
                alpha: report.alpha,
                estimator: e.name.clone(),
                risk: e.risk,
                bayes_risk: report.bayes_risk,
                gap_direct: e.gap_direct,
                gap_identity: e.gap_identity,
                residual: e.residual,
                opt_trace_dist: e.optimizer_distance,
                wall_time_s,
            });
        }
    }
    Ok(RunOutcome {
        rows,
        reports: reports
            .into_iter()
            .map(|r| (config.id.clone(), r))
            .collect(),
    })
}

/// One [`run`] block per value of `key`; α values are visited in ascending order.
pub fn sweep(
    config: &ScenarioConfig,
    key: SweepKey,
    values: &[f64],
    options: &RunOptions,
) -> Result<RunOutcome> {
    if values.is_empty() {
        return Err(Error::Validation("sweep needs at least one value".into()));
    }
    let mut values = values.to_vec();
    if key == SweepKey::Alpha {
        values.sort_by(f64::total_cmp);
        values.dedup();
    }
    let configs = values
        .iter()
        .map(|&v| config.with_value(key, v))
        .collect::<Result<Vec<_>>>()?;
    let mut outcome = RunOutcome::default();
    for c in &configs {
        outcome.extend(run(c, options)?);
    }
    Ok(outcome)
}

pub fn write_csv<W: Write>(rows: &[ResultRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    write_csv(rows, std::fs::File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::parse_config_str;

    const SMALL: &str = "\
[scenario]
id = small
[model]
family = diagonal_qubit
grid_size = 3
n = 1
[povm]
kind = computational
[run]
alphas = 0.5, -1
perturbations = 2
rates = 0.1
";

    fn quick() -> RunOptions {
        RunOptions {
            timing: false,
            ..RunOptions::default()
        }
    }

    #[test]
    fn rows_follow_alpha_then_zoo_order() {
        let c = parse_config_str(SMALL).unwrap();
        let out = run(&c, &quick()).unwrap();
        assert!(out.passed());
        assert_eq!(out.exit_code(), EXIT_OK);
        // bayes + 3 baselines + 2 perturbations, per alpha
        assert_eq!(out.rows.len(), 12);
        assert_eq!(out.rows[0].alpha, -1.0);
        assert_eq!(out.rows[6].alpha, 0.5);
        assert_eq!(out.rows[0].estimator, "bayes");
        assert_eq!(out.rows[1].estimator, "plugin_mode");
        assert!(out
            .rows
            .iter()
            .all(|r| r.residual >= 0.0 && r.risk.is_finite()));
    }

    #[test]
    fn csv_is_byte_stable() {
        let c = parse_config_str(SMALL).unwrap();
        let render = || {
            let mut buf = Vec::new();
            write_csv(&run(&c, &quick()).unwrap().rows, &mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let first = render();
        assert_eq!(first, render());
        assert_eq!(
            first.lines().next().unwrap(),
            "scenario,alpha,estimator,risk,bayes_risk,gap_direct,gap_identity,residual,opt_trace_dist,wall_time_s"
        );
    }

    #[test]
    fn numbers_round_trip() {
        let row = ResultRow {
            scenario: "s".into(),
            alpha: -0.1,
            estimator: "e".into(),
            risk: 0.1 + 0.2,
            bayes_risk: 1.0 / 3.0,
            gap_direct: f64::MIN_POSITIVE,
            gap_identity: -2.5e-300,
            residual: 0.0,
            opt_trace_dist: 1e-5,
            wall_time_s: 0.0,
        };
        let rec = row.record();
        let values = [
            row.alpha,
            row.risk,
            row.bayes_risk,
            row.gap_direct,
            row.gap_identity,
        ];
        for (text, v) in [&rec[1], &rec[3], &rec[4], &rec[5], &rec[6]]
            .iter()
            .zip(values)
        {
            assert_eq!(text.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn injected_corruption_fails() {
        let c = parse_config_str(SMALL).unwrap();
        let out = run(
            &c,
            &RunOptions {
                inject_suboptimal_bayes: true,
                ..quick()
            },
        )
        .unwrap();
        assert_eq!(out.exit_code(), EXIT_VERIFICATION);
        assert!(matches!(
            out.failure(),
            Some(Error::VerificationFailure { .. })
        ));
    }

    #[test]
    fn single_value_sweep_matches_run() {
        let c = parse_config_str(SMALL).unwrap();
        let swept = sweep(&c, SweepKey::Alpha, &[0.5], &quick()).unwrap();
        let direct = run(&c.with_value(SweepKey::Alpha, 0.5).unwrap(), &quick()).unwrap();
        assert_eq!(swept.rows, direct.rows);
    }

    #[test]
    fn sweep_over_n_renames_blocks() {
        let c = parse_config_str(SMALL).unwrap();
        let out = sweep(&c, SweepKey::N, &[1.0, 2.0], &quick()).unwrap();
        assert_eq!(out.rows.len(), 24);
        assert_eq!(out.rows[0].scenario, "small_N1");
        assert_eq!(out.rows[12].scenario, "small_N2");
        assert!(sweep(&c, SweepKey::N, &[], &quick()).is_err());
    }
}
