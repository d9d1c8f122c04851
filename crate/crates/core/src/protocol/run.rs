use super::{
    bell_basis, canonical_theta, coincidence_observable, correction_unitary, eta,
    perturbed_correction_unitary, premeasurement_unitary, protocol_shape, PremeasurementSpec,
    QubitState, ANCILLA, INPUT, PROBE, TARGET,
};
use crate::error::Result;
use crate::tensor::{
    embed, fidelity, partial_trace, ComplexMatrix, ComplexVector, DensityOperator,
};

/// Reductions of the post-premeasurement state.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedStates {
    pub t0: DensityOperator,
    pub t3: DensityOperator,
    pub t12: DensityOperator,
    pub t012: DensityOperator,
    pub t123: DensityOperator,
}

impl ReducedStates {
    /// `(name, operator)` pairs in a fixed order.
    pub fn named(&self) -> [(&'static str, &DensityOperator); 5] {
        [
            ("T0", &self.t0),
            ("T3", &self.t3),
            ("T12", &self.t12),
            ("T012", &self.t012),
            ("T123", &self.t123),
        ]
    }
}

/// Everything produced by one run of the protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolReport {
    pub input: QubitState,
    pub spec: PremeasurementSpec,
    /// Canonical `θ ∈ [0, 2π)` when the perturbed correction was used.
    pub theta: Option<f64>,
    pub total_state_after_u: ComplexVector,
    pub total_state_final: ComplexVector,
    pub reduced: ReducedStates,
    pub t3_final: DensityOperator,
    pub fidelity_after_u: f64,
    pub fidelity_final: f64,
    pub coincidence_expectation: f64,
    /// `max |U†U − I|` of the premeasurement unitary used in this run.
    pub premeasurement_defect: f64,
}

fn initial_state(phi: &QubitState) -> ComplexVector {
    eta(1).kron(&phi.to_vector()).kron(&bell_basis().psi_minus)
}

fn apply_premeasurement(u: &ComplexMatrix, phi: &QubitState) -> Result<ComplexVector> {
    let lifted = embed(u, &[PROBE, INPUT, ANCILLA], &protocol_shape())?;
    Ok(lifted.apply(&initial_state(phi)))
}

/// `(U ⊗ I3)(η1 ⊗ φ ⊗ Ψ⁻₂₃)`.
pub fn post_measurement_state(
    phi: &QubitState,
    spec: &PremeasurementSpec,
) -> Result<ComplexVector> {
    apply_premeasurement(&premeasurement_unitary(spec)?, phi)
}

/// `T0, T3, T12, T012, T123` from a normalized 32-dim total state.
pub fn reduced_states(total: &ComplexVector) -> Result<ReducedStates> {
    let rho = DensityOperator::pure(total, protocol_shape())?;
    Ok(ReducedStates {
        t0: partial_trace(&rho, &[PROBE])?,
        t3: partial_trace(&rho, &[TARGET])?,
        t12: partial_trace(&rho, &[INPUT, ANCILLA])?,
        t012: partial_trace(&rho, &[PROBE, INPUT, ANCILLA])?,
        t123: partial_trace(&rho, &[INPUT, ANCILLA, TARGET])?,
    })
}

/// Premeasurement followed by the conditional correction (`W`, or the
/// perturbed `W_θ` when `theta` is given).
pub fn run_protocol(
    phi: &QubitState,
    spec: &PremeasurementSpec,
    theta: Option<f64>,
) -> Result<ProtocolReport> {
    let theta = theta.map(canonical_theta).transpose()?;
    let shape = protocol_shape();
    let target = phi.to_vector();

    let u = premeasurement_unitary(spec)?;
    let after_u = apply_premeasurement(&u, phi)?;
    let reduced = reduced_states(&after_u)?;
    let fidelity_after_u = fidelity(&target, &reduced.t3)?;

    let w = match theta {
        Some(t) => perturbed_correction_unitary(t)?,
        None => correction_unitary(),
    };
    let final_state = embed(&w, &[PROBE, TARGET], &shape)?.apply(&after_u);
    let rho_final = DensityOperator::pure(&final_state, shape.clone())?;
    let t3_final = partial_trace(&rho_final, &[TARGET])?;
    let fidelity_final = fidelity(&target, &t3_final)?;

    let a = embed(&coincidence_observable(phi), &[PROBE, TARGET], &shape)?;
    let coincidence_expectation = a.sandwich(&final_state, &final_state).re;

    Ok(ProtocolReport {
        input: *phi,
        spec: spec.clone(),
        theta,
        total_state_after_u: after_u,
        total_state_final: final_state,
        reduced,
        t3_final,
        fidelity_after_u,
        fidelity_final,
        coincidence_expectation,
        premeasurement_defect: u.unitarity_defect(),
    })
}
