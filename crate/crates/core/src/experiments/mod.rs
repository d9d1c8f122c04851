//! Batch studies over the protocol: θ sweeps, randomized trials and the
//! per-run check bundle.

mod exec;

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::protocol::{
    correction_branches, fidelity_theta_closed_form, lueders_spec, run_protocol, theta_mixture,
    PremeasurementSpec, ProtocolReport, QubitState,
};
use crate::tensor::{haar_random_qubit_from, projector, random_unit_vector, ComplexMatrix};

pub use exec::Execution;

/// Default tolerance for [`coverage_report`].
pub const DEFAULT_CHECK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub fidelity_pipeline: f64,
    pub fidelity_closed_form: f64,
    pub coincidence_expectation: f64,
    pub abs_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSummary {
    pub n_trials: usize,
    pub min_fidelity: f64,
    pub max_fidelity: f64,
    pub mean_fidelity: f64,
    pub max_unitarity_defect: f64,
    /// Largest entrywise `|T3_final − P[φ]|` over all trials.
    pub max_state_deviation: f64,
    pub seed: u64,
}

/// Outcome of one named check in a [`coverage_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    /// Observed scalar, for scalar checks.
    pub value: Option<f64>,
    /// Reference scalar, for scalar checks.
    pub expected: Option<f64>,
    /// `|value − expected|`, or the max entrywise deviation for operator checks.
    pub residual: f64,
    pub passed: bool,
}

/// Uniform grid `θ_k = 2πk / n_points`, `k = 0..n_points`.
pub fn theta_grid(n_points: usize) -> Vec<f64> {
    (0..n_points)
        .map(|k| TAU * k as f64 / n_points as f64)
        .collect()
}

pub fn sweep_theta(
    phi: &QubitState,
    spec: &PremeasurementSpec,
    n_points: usize,
) -> Result<Vec<SweepRow>> {
    sweep_theta_with(phi, spec, n_points, Execution::default())
}

pub fn sweep_theta_with(
    phi: &QubitState,
    spec: &PremeasurementSpec,
    n_points: usize,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    if n_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "sweep needs at least 2 points, got {n_points}"
        )));
    }
    let grid = theta_grid(n_points);
    exec::map_indexed(n_points, exec, |k| {
        let theta = grid[k];
        let report = run_protocol(phi, spec, Some(theta))?;
        let closed = fidelity_theta_closed_form(phi, theta);
        Ok(SweepRow {
            theta,
            fidelity_pipeline: report.fidelity_final,
            fidelity_closed_form: closed,
            coincidence_expectation: report.coincidence_expectation,
            abs_gap: (report.fidelity_final - closed).abs(),
        })
    })
    .into_iter()
    .collect()
}

/// Four independent complex-Gaussian unit vectors in `C^4`; not orthogonalized.
pub fn random_spec(rng: &mut ChaCha8Rng) -> PremeasurementSpec {
    let chi = std::array::from_fn(|_| random_unit_vector(rng, 4));
    PremeasurementSpec::new(chi, "random").expect("normalized draws")
}

struct Trial {
    fidelity: f64,
    defect: f64,
    deviation: f64,
}

fn run_trial(seed: u64, index: usize, randomize_chi: bool) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let phi = QubitState::from_vector(&haar_random_qubit_from(&mut rng))?;
    let spec = if randomize_chi {
        random_spec(&mut rng)
    } else {
        lueders_spec()
    };
    let report = run_protocol(&phi, &spec, None)?;
    let target = projector(&phi.to_vector())?;
    Ok(Trial {
        fidelity: report.fidelity_final,
        defect: report.premeasurement_defect,
        deviation: report.t3_final.matrix().max_abs_diff(&target),
    })
}

pub fn random_trials(n: usize, seed: u64, randomize_chi: bool) -> Result<TrialSummary> {
    random_trials_with(n, seed, randomize_chi, Execution::default())
}

/// Runs `n` independent plain-correction trials. Trial `i` draws from the
/// ChaCha8 stream `i` of `seed`, so results do not depend on scheduling.
pub fn random_trials_with(
    n: usize,
    seed: u64,
    randomize_chi: bool,
    exec: Execution,
) -> Result<TrialSummary> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let trials = exec::map_indexed(n, exec, |i| run_trial(seed, i, randomize_chi))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut summary = TrialSummary {
        n_trials: n,
        min_fidelity: f64::INFINITY,
        max_fidelity: f64::NEG_INFINITY,
        mean_fidelity: 0.0,
        max_unitarity_defect: 0.0,
        max_state_deviation: 0.0,
        seed,
    };
    let mut sum = 0.0;
    for t in &trials {
        summary.min_fidelity = summary.min_fidelity.min(t.fidelity);
        summary.max_fidelity = summary.max_fidelity.max(t.fidelity);
        summary.max_unitarity_defect = summary.max_unitarity_defect.max(t.defect);
        summary.max_state_deviation = summary.max_state_deviation.max(t.deviation);
        sum += t.fidelity;
    }
    // Keep min ≤ mean ≤ max despite rounding in the sum.
    summary.mean_fidelity = (sum / n as f64).clamp(summary.min_fidelity, summary.max_fidelity);
    Ok(summary)
}

fn scalar_check(name: &'static str, value: f64, expected: f64, tol: f64) -> CheckResult {
    let residual = (value - expected).abs();
    CheckResult {
        name,
        value: Some(value),
        expected: Some(expected),
        residual,
        passed: residual <= tol,
    }
}

fn operator_check(name: &'static str, residual: f64, tol: f64) -> CheckResult {
    CheckResult {
        name,
        value: None,
        expected: None,
        residual,
        passed: residual <= tol,
    }
}

/// Max over `i, j` of `|⟨η_iχ_i| T012 |η_jχ_j⟩ − ¼⟨φ_j|φ_i⟩|`.
pub fn t012_coefficient_residual(report: &ProtocolReport) -> f64 {
    let branches = correction_branches(&report.input);
    let phis = branches.as_array();
    let t012 = report.reduced.t012.matrix();
    let pointers: Vec<_> = (1..=4).map(|i| report.spec.pointer_state(i)).collect();
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let element = t012.sandwich(&pointers[i], &pointers[j]);
            let expected = phis[j].inner(phis[i]) * 0.25;
            worst = worst.max((element - expected).norm());
        }
    }
    worst
}

/// Exact probe marginal `¼ Σ_ij ⟨χ_j|χ_i⟩⟨φ_j|φ_i⟩ |η_i⟩⟨η_j|`.
///
/// This is `I/4` exactly when the targets `χ_i` are orthonormal; otherwise
/// the off-diagonal terms survive.
pub fn probe_marginal_closed_form(phi: &QubitState, spec: &PremeasurementSpec) -> ComplexMatrix {
    let branches = correction_branches(phi);
    let phis = branches.as_array();
    let chi = spec.chi();
    ComplexMatrix::from_fn(4, 4, |i, j| {
        chi[j].inner(&chi[i]) * phis[j].inner(phis[i]) * 0.25
    })
}

pub fn coverage_report(report: &ProtocolReport) -> Result<Vec<CheckResult>> {
    coverage_report_with_tolerance(report, DEFAULT_CHECK_TOL)
}

/// Evaluates the closed-form expectations for one run.
pub fn coverage_report_with_tolerance(
    report: &ProtocolReport,
    tol: f64,
) -> Result<Vec<CheckResult>> {
    let phi = &report.input;
    let half = ComplexMatrix::identity(2).scale_real(0.5);

    let theta = report.theta.unwrap_or(0.0);
    let expected_final = if phi.is_degenerate() {
        1.0
    } else {
        fidelity_theta_closed_form(phi, theta)
    };
    let t3_final_reference = theta_mixture(phi, theta)?;
    let probe_check = if report.spec.is_orthonormal() {
        let quarter = ComplexMatrix::identity(4).scale_real(0.25);
        operator_check(
            "T0=I/4",
            report.reduced.t0.matrix().max_abs_diff(&quarter),
            tol,
        )
    } else {
        let reference = probe_marginal_closed_form(phi, &report.spec);
        operator_check(
            "T0=closed_form",
            report.reduced.t0.matrix().max_abs_diff(&reference),
            tol,
        )
    };

    Ok(vec![
        probe_check,
        operator_check(
            "T3=I/2",
            report.reduced.t3.matrix().max_abs_diff(&half),
            tol,
        ),
        scalar_check("fidelity_after_U=1/2", report.fidelity_after_u, 0.5, tol),
        scalar_check("fidelity_final", report.fidelity_final, expected_final, tol),
        operator_check(
            "T3_final=closed_form",
            report
                .t3_final
                .matrix()
                .max_abs_diff(t3_final_reference.matrix()),
            tol,
        ),
        scalar_check("coincidence=3/4", report.coincidence_expectation, 0.75, tol),
        operator_check("T012_coefficients", t012_coefficient_residual(report), tol),
    ])
}

/// `true` when every check passed.
pub fn all_passed(checks: &[CheckResult]) -> bool {
    checks.iter().all(|c| c.passed)
}
