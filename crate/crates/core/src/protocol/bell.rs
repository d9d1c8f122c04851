use std::f64::consts::FRAC_1_SQRT_2;

use super::{eta, PROBE_DIM};
use crate::error::{Error, Result};
use crate::tensor::{complete_to_unitary, kron, ComplexMatrix, ComplexVector, TOL_NORM};

/// `(Ψ⁺, Ψ⁻, Φ⁺, Φ⁻)` in the ordering `|++⟩, |+−⟩, |−+⟩, |−−⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellBasis {
    pub psi_plus: ComplexVector,
    pub psi_minus: ComplexVector,
    pub phi_plus: ComplexVector,
    pub phi_minus: ComplexVector,
}

impl BellBasis {
    /// The four vectors in protocol order.
    pub fn as_array(&self) -> [&ComplexVector; 4] {
        [
            &self.psi_plus,
            &self.psi_minus,
            &self.phi_plus,
            &self.phi_minus,
        ]
    }

    /// Matrix whose columns are the Bell vectors in protocol order.
    pub fn change_of_basis(&self) -> ComplexMatrix {
        let cols: Vec<ComplexVector> = self.as_array().into_iter().cloned().collect();
        ComplexMatrix::from_columns(&cols).expect("four 4-dim columns")
    }
}

pub fn bell_basis() -> BellBasis {
    let s = FRAC_1_SQRT_2;
    BellBasis {
        psi_plus: ComplexVector::from_real(&[0.0, s, s, 0.0]),
        psi_minus: ComplexVector::from_real(&[0.0, s, -s, 0.0]),
        phi_plus: ComplexVector::from_real(&[s, 0.0, 0.0, s]),
        phi_minus: ComplexVector::from_real(&[s, 0.0, 0.0, -s]),
    }
}

/// The four post-interaction target states `χ1..χ4` on `H1 ⊗ H2`.
///
/// Each must be a unit vector; they need not be mutually orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct PremeasurementSpec {
    chi: [ComplexVector; 4],
    label: String,
}

impl PremeasurementSpec {
    pub fn new(chi: [ComplexVector; 4], label: impl Into<String>) -> Result<Self> {
        for v in &chi {
            if v.dim() != 4 {
                return Err(Error::DimensionMismatch {
                    expected: 4,
                    found: v.dim(),
                });
            }
            v.check_unit()?;
        }
        Ok(Self {
            chi,
            label: label.into(),
        })
    }

    pub fn chi(&self) -> &[ComplexVector; 4] {
        &self.chi
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Whether the targets are mutually orthogonal (within [`TOL_NORM`]).
    pub fn is_orthonormal(&self) -> bool {
        self.chi.iter().enumerate().all(|(i, u)| {
            self.chi[i + 1..]
                .iter()
                .all(|v| u.inner(v).norm() <= TOL_NORM)
        })
    }

    /// `η_i ⊗ χ_i` for `i` in `1..=4`.
    pub fn pointer_state(&self, i: usize) -> ComplexVector {
        eta(i).kron(&self.chi[i - 1])
    }
}

/// The von Neumann-Lüders choice `χ_i = (Ψ⁺, Ψ⁻, Φ⁺, Φ⁻)_i`.
pub fn lueders_spec() -> PremeasurementSpec {
    let bell = bell_basis();
    PremeasurementSpec {
        chi: [bell.psi_plus, bell.psi_minus, bell.phi_plus, bell.phi_minus],
        label: "lueders".to_string(),
    }
}

/// The 16×16 premeasurement unitary on `H0 ⊗ H1 ⊗ H2`.
///
/// On the slice `η1 ⊗ Bell_i` it maps to `η_i ⊗ χ_i`. Elsewhere it is
/// fixed by the canonical completion: with `B = I4 ⊗ [Bell columns]` and
/// `V` the completion of the columns `e_i ↦ η_i ⊗ χ_i`, `U = V B†`.
pub fn premeasurement_unitary(spec: &PremeasurementSpec) -> Result<ComplexMatrix> {
    let columns: Vec<(usize, ComplexVector)> =
        (1..=4).map(|i| (i - 1, spec.pointer_state(i))).collect();
    let v = complete_to_unitary(&columns)?;
    let b = kron(
        &ComplexMatrix::identity(PROBE_DIM),
        &bell_basis().change_of_basis(),
    );
    Ok(&v * &b.dagger())
}
