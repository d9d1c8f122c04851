//! The teleportation protocol as a sequence of unitaries on
//! `H0 ⊗ H1 ⊗ H2 ⊗ H3 = C^4 ⊗ C^2 ⊗ C^2 ⊗ C^2`.
//!
//! Factor 0 is the measuring probe with pointer basis `η1..η4` (the
//! canonical basis of `C^4`), factor 1 holds the unknown input qubit, and
//! factors 2 and 3 start in the singlet `Ψ⁻`. The qubit basis is
//! `|+⟩ = (1, 0)`, `|−⟩ = (0, 1)`.
//!
//! The premeasurement `U` couples the probe to the Bell content of
//! `(1, 2)`; the correction `W` acts on `(0, 3)` conditioned on the probe.
//! Nothing is ever sampled: every quantity is computed from the pure total
//! state and its partial traces.

mod bell;
mod correction;
mod run;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{haar_random_qubit, ComplexVector, TensorShape, TOL_NORM};

pub use bell::{bell_basis, lueders_spec, premeasurement_unitary, BellBasis, PremeasurementSpec};
pub use correction::{
    coincidence_observable, correction_branches, correction_unitary, fidelity_theta_closed_form,
    perturbed_correction_unitary, theta_mixture, CorrectionBranches,
};
pub use run::{
    post_measurement_state, reduced_states, run_protocol, ProtocolReport, ReducedStates,
};

pub const PROBE: usize = 0;
pub const INPUT: usize = 1;
pub const ANCILLA: usize = 2;
pub const TARGET: usize = 3;

/// Dimension of the probe space.
pub const PROBE_DIM: usize = 4;

/// `[4, 2, 2, 2]`.
pub fn protocol_shape() -> TensorShape {
    TensorShape::new(vec![PROBE_DIM, 2, 2, 2]).expect("static shape")
}

/// Probe pointer state `η_i` for `i` in `1..=4`.
pub fn eta(i: usize) -> ComplexVector {
    assert!(
        (1..=PROBE_DIM).contains(&i),
        "probe index {i} outside 1..=4"
    );
    ComplexVector::basis(PROBE_DIM, i - 1)
}

/// `φ = a|+⟩ + b|−⟩` with `|a|² + |b|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    a: Complex64,
    b: Complex64,
}

impl QubitState {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { a, b })
    }

    /// Rescales `(a, b)` to unit norm.
    pub fn normalized(a: Complex64, b: Complex64) -> Result<Self> {
        let v = ComplexVector::new(vec![a, b]).normalized()?;
        Ok(Self { a: v[0], b: v[1] })
    }

    pub fn from_vector(v: &ComplexVector) -> Result<Self> {
        if v.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: v.dim(),
            });
        }
        Self::new(v[0], v[1])
    }

    pub fn plus() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn minus() -> Self {
        Self {
            a: Complex64::new(0.0, 0.0),
            b: Complex64::new(1.0, 0.0),
        }
    }

    pub fn haar(seed: u64) -> Self {
        let v = haar_random_qubit(seed);
        Self { a: v[0], b: v[1] }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::new(vec![self.a, self.b])
    }

    /// `e^{iα} φ`.
    pub fn with_global_phase(&self, alpha: f64) -> Self {
        let p = Complex64::from_polar(1.0, alpha);
        Self {
            a: self.a * p,
            b: self.b * p,
        }
    }

    /// True when one amplitude vanishes, so the θ-perturbation is a pure phase.
    pub fn is_degenerate(&self) -> bool {
        self.a.norm() <= TOL_NORM || self.b.norm() <= TOL_NORM
    }
}

/// Reduces `theta` into `[0, 2π)`.
pub fn canonical_theta(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::NonFiniteParameter(theta));
    }
    let t = theta.rem_euclid(std::f64::consts::TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    Ok(if t >= std::f64::consts::TAU { 0.0 } else { t })
}
