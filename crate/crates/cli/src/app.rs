use std::io::Write;

use qteleport_core::experiments::{
    all_passed, coverage_report_with_tolerance, random_trials, sweep_theta, CheckResult, SweepRow,
    TrialSummary, DEFAULT_CHECK_TOL,
};
use qteleport_core::protocol::{
    lueders_spec, run_protocol, PremeasurementSpec, ProtocolReport, QubitState,
};
use qteleport_core::tensor::{ComplexMatrix, ComplexVector, DensityOperator};

use crate::args::{parse_args, CliConfig, Command, Format};
use crate::chi_file::load_chi_file;
use crate::emit::{csv, fmt_real, Json};
use crate::error::CliError;

pub const TOL_ENV: &str = "QTELEPORT_TOL";

pub const SWEEP_HEADER: [&str; 5] = [
    "theta",
    "fidelity_pipeline",
    "fidelity_closed_form",
    "coincidence_expectation",
    "abs_gap",
];

/// Exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
}

/// Parses the tolerance override; `None` means the default.
pub fn check_tolerance(raw: Option<&str>) -> Result<f64, CliError> {
    match raw {
        None => Ok(DEFAULT_CHECK_TOL),
        Some(s) => match s.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
            _ => Err(CliError::Usage(format!(
                "{TOL_ENV} must be a finite nonnegative number, got {s:?}"
            ))),
        },
    }
}

/// Runs the CLI and returns the process exit status.
pub fn run_cli<I, T>(
    argv: I,
    tol_env: Option<&str>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match execute(argv, tol_env, stdout, stderr) {
        Ok(code) => code,
        Err(CliError::Info(text)) => {
            let _ = write!(stdout, "{text}");
            exit::OK
        }
        Err(err) => {
            let line = err.to_string().replace('\n', " ");
            let _ = writeln!(stderr, "error: {line}");
            err.exit_code()
        }
    }
}

fn execute<I, T>(
    argv: I,
    tol_env: Option<&str>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = parse_args(argv)?;
    let tol = check_tolerance(tol_env)?;
    if let Some(factor) = config.renormalization.filter(|&f| f != 1.0) {
        writeln!(
            stderr,
            "note: input amplitudes renormalized by factor {}",
            fmt_real(factor)
        )?;
    }
    let spec = match &config.chi_file {
        Some(path) => load_chi_file(path)?,
        None => lueders_spec(),
    };

    let (text, code) = match config.command {
        Command::Run => {
            let report = run_protocol(state(&config), &spec, config.theta)?;
            let checks = coverage_report_with_tolerance(&report, tol)?;
            let code = if all_passed(&checks) {
                exit::OK
            } else {
                exit::CHECK_FAILED
            };
            let text = match config.format {
                Format::Json => run_document(&config, tol, &report, &checks).render(),
                Format::Csv => checks_csv(&checks),
            };
            (text, code)
        }
        Command::SweepTheta => {
            let points = config.points.expect("validated");
            let rows = sweep_theta(state(&config), &spec, points)?;
            let text = match config.format {
                Format::Json => sweep_document(&config, tol, &spec, &rows).render(),
                Format::Csv => sweep_csv(&rows),
            };
            (text, exit::OK)
        }
        Command::RandomTrials => {
            let trials = config.trials.expect("validated");
            let summary = random_trials(trials, config.seed, config.randomize_chi)?;
            let text = match config.format {
                Format::Json => trials_document(&config, tol, &summary).render(),
                Format::Csv => trials_csv(&config, &summary),
            };
            (text, exit::OK)
        }
        Command::ShowState => {
            let report = run_protocol(state(&config), &spec, config.theta)?;
            let text = match config.format {
                Format::Json => show_state_document(&config, tol, &report).render(),
                Format::Csv => show_state_csv(&report),
            };
            (text, exit::OK)
        }
    };

    match &config.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(code)
}

fn state(config: &CliConfig) -> &QubitState {
    config.state.as_ref().expect("validated")
}

fn metadata(config: &CliConfig, tol: f64) -> Json {
    Json::object([
        ("tool", Json::str("qteleport")),
        ("version", Json::str(env!("CARGO_PKG_VERSION"))),
        ("command", Json::str(config.command.name())),
        ("check_tolerance", Json::Real(tol)),
    ])
}

fn vector_json(v: &ComplexVector) -> Json {
    Json::Array(v.iter().map(|&z| Json::complex(z)).collect())
}

fn matrix_json(m: &ComplexMatrix) -> Json {
    Json::Array(
        (0..m.rows())
            .map(|i| Json::Array(m.row(i).into_iter().map(Json::complex).collect()))
            .collect(),
    )
}

fn density_json(rho: &DensityOperator) -> Json {
    matrix_json(rho.matrix())
}

fn state_json(phi: &QubitState) -> Json {
    Json::object([("a", Json::complex(phi.a())), ("b", Json::complex(phi.b()))])
}

fn spec_json(spec: &PremeasurementSpec) -> Json {
    Json::object([
        ("label", Json::str(spec.label())),
        (
            "chi",
            Json::Array(spec.chi().iter().map(vector_json).collect()),
        ),
    ])
}

fn check_json(c: &CheckResult) -> Json {
    Json::object([
        ("name", Json::str(c.name)),
        ("value", Json::opt_real(c.value)),
        ("expected", Json::opt_real(c.expected)),
        ("residual", Json::Real(c.residual)),
        ("passed", Json::Bool(c.passed)),
    ])
}

fn run_document(
    config: &CliConfig,
    tol: f64,
    report: &ProtocolReport,
    checks: &[CheckResult],
) -> Json {
    let mut reduced: Vec<(String, Json)> = report
        .reduced
        .named()
        .into_iter()
        .map(|(name, rho)| (name.to_string(), density_json(rho)))
        .collect();
    reduced.push(("T3_final".to_string(), density_json(&report.t3_final)));
    Json::object([
        ("metadata", metadata(config, tol)),
        ("input", state_json(&report.input)),
        ("spec", spec_json(&report.spec)),
        ("theta", Json::opt_real(report.theta)),
        ("fidelity_after_U", Json::Real(report.fidelity_after_u)),
        ("fidelity_final", Json::Real(report.fidelity_final)),
        (
            "coincidence_expectation",
            Json::Real(report.coincidence_expectation),
        ),
        (
            "premeasurement_unitarity_defect",
            Json::Real(report.premeasurement_defect),
        ),
        (
            "total_state_after_U",
            vector_json(&report.total_state_after_u),
        ),
        ("total_state_final", vector_json(&report.total_state_final)),
        ("reduced", Json::Object(reduced)),
        (
            "checks",
            Json::Array(checks.iter().map(check_json).collect()),
        ),
        ("all_passed", Json::Bool(all_passed(checks))),
    ])
}

fn opt_field(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

fn checks_csv(checks: &[CheckResult]) -> String {
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                opt_field(c.value),
                opt_field(c.expected),
                fmt_real(c.residual),
                c.passed.to_string(),
            ]
        })
        .collect();
    csv(&["name", "value", "expected", "residual", "passed"], &rows)
}

fn sweep_document(
    config: &CliConfig,
    tol: f64,
    spec: &PremeasurementSpec,
    rows: &[SweepRow],
) -> Json {
    let rows_json = rows
        .iter()
        .map(|r| {
            Json::object([
                ("theta", Json::Real(r.theta)),
                ("fidelity_pipeline", Json::Real(r.fidelity_pipeline)),
                ("fidelity_closed_form", Json::Real(r.fidelity_closed_form)),
                (
                    "coincidence_expectation",
                    Json::Real(r.coincidence_expectation),
                ),
                ("abs_gap", Json::Real(r.abs_gap)),
            ])
        })
        .collect();
    Json::object([
        ("metadata", metadata(config, tol)),
        ("input", state_json(state(config))),
        ("spec", spec_json(spec)),
        ("points", Json::Int(rows.len() as u64)),
        ("rows", Json::Array(rows_json)),
    ])
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            [
                r.theta,
                r.fidelity_pipeline,
                r.fidelity_closed_form,
                r.coincidence_expectation,
                r.abs_gap,
            ]
            .into_iter()
            .map(fmt_real)
            .collect()
        })
        .collect();
    csv(&SWEEP_HEADER, &rows)
}

fn trials_document(config: &CliConfig, tol: f64, s: &TrialSummary) -> Json {
    Json::object([
        ("metadata", metadata(config, tol)),
        ("n_trials", Json::Int(s.n_trials as u64)),
        ("seed", Json::Int(s.seed)),
        ("randomize_chi", Json::Bool(config.randomize_chi)),
        ("min_fidelity", Json::Real(s.min_fidelity)),
        ("max_fidelity", Json::Real(s.max_fidelity)),
        ("mean_fidelity", Json::Real(s.mean_fidelity)),
        ("max_unitarity_defect", Json::Real(s.max_unitarity_defect)),
        ("max_state_deviation", Json::Real(s.max_state_deviation)),
    ])
}

fn trials_csv(config: &CliConfig, s: &TrialSummary) -> String {
    let row = vec![
        s.n_trials.to_string(),
        s.seed.to_string(),
        config.randomize_chi.to_string(),
        fmt_real(s.min_fidelity),
        fmt_real(s.max_fidelity),
        fmt_real(s.mean_fidelity),
        fmt_real(s.max_unitarity_defect),
        fmt_real(s.max_state_deviation),
    ];
    csv(
        &[
            "n_trials",
            "seed",
            "randomize_chi",
            "min_fidelity",
            "max_fidelity",
            "mean_fidelity",
            "max_unitarity_defect",
            "max_state_deviation",
        ],
        &[row],
    )
}

/// `η_i|s1 s2 s3⟩` for flattened index `k` of `[4, 2, 2, 2]`.
pub fn basis_label(k: usize) -> String {
    let sign = |bit: usize| if bit == 0 { '+' } else { '-' };
    format!(
        "η_{}|{} {} {}⟩",
        k / 8 + 1,
        sign((k >> 2) & 1),
        sign((k >> 1) & 1),
        sign(k & 1)
    )
}

fn show_state_document(config: &CliConfig, tol: f64, report: &ProtocolReport) -> Json {
    let amplitudes = (0..report.total_state_after_u.dim())
        .map(|k| {
            Json::object([
                ("label", Json::str(basis_label(k))),
                ("after_U", Json::complex(report.total_state_after_u[k])),
                ("final", Json::complex(report.total_state_final[k])),
            ])
        })
        .collect();
    Json::object([
        ("metadata", metadata(config, tol)),
        ("input", state_json(&report.input)),
        ("spec", spec_json(&report.spec)),
        ("theta", Json::opt_real(report.theta)),
        ("amplitudes", Json::Array(amplitudes)),
    ])
}

fn show_state_csv(report: &ProtocolReport) -> String {
    let rows: Vec<Vec<String>> = (0..report.total_state_after_u.dim())
        .map(|k| {
            let (u, f) = (report.total_state_after_u[k], report.total_state_final[k]);
            vec![
                basis_label(k),
                fmt_real(u.re),
                fmt_real(u.im),
                fmt_real(f.re),
                fmt_real(f.im),
            ]
        })
        .collect();
    csv(
        &["label", "after_U_re", "after_U_im", "final_re", "final_im"],
        &rows,
    )
}
