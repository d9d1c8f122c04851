use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{projector, ComplexMatrix, ComplexVector, TensorShape, TOL_NORM};
use crate::error::{Error, Result};

/// A positive semidefinite, unit-trace operator on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    shape: TensorShape,
}

impl DensityOperator {
    /// Validates hermiticity, unit trace and positivity (all within
    /// [`TOL_NORM`]).
    pub fn new(matrix: ComplexMatrix, shape: TensorShape) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != shape.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: shape.total_dim(),
                found: matrix.rows(),
            });
        }
        let herm = matrix.hermiticity_defect();
        if herm > TOL_NORM {
            return Err(Error::NotDensityOperator(format!(
                "not Hermitian (defect {herm:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TOL_NORM {
            return Err(Error::NotDensityOperator(format!(
                "trace is {trace}, expected 1"
            )));
        }
        let rho = Self { matrix, shape };
        let min_eig = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -TOL_NORM {
            return Err(Error::NotDensityOperator(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(rho)
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_parts(matrix: ComplexMatrix, shape: TensorShape) -> Self {
        debug_assert_eq!(matrix.rows(), shape.total_dim());
        Self { matrix, shape }
    }

    /// `P[v]` for a unit vector `v`.
    pub fn pure(v: &ComplexVector, shape: TensorShape) -> Result<Self> {
        if v.dim() != shape.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: shape.total_dim(),
                found: v.dim(),
            });
        }
        Ok(Self::from_parts(projector(v)?, shape))
    }

    /// `I / d`.
    pub fn maximally_mixed(shape: TensorShape) -> Self {
        let d = shape.total_dim();
        Self::from_parts(ComplexMatrix::identity(d).scale_real(1.0 / d as f64), shape)
    }

    /// Convex combination `Σ wᵢ P[vᵢ]`. Weights must be nonnegative and sum to 1.
    pub fn mixture(terms: &[(f64, &ComplexVector)], shape: TensorShape) -> Result<Self> {
        let d = shape.total_dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for &(w, v) in terms {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "mixture weight {w} is not valid"
                )));
            }
            if v.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.dim(),
                });
            }
            acc = acc.add(&projector(v)?.scale_real(w));
        }
        Self::new(acc, shape)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn shape(&self) -> &TensorShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.dim();
        let herm = DMatrix::from_fn(n, n, |i, j| {
            (self.matrix[(i, j)] + self.matrix[(j, i)].conj()) * 0.5
        });
        let mut eig: Vec<f64> = SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eig.sort_by(f64::total_cmp);
        eig
    }
}

/// `tr(P[φ] ρ) = ⟨φ|ρ|φ⟩`, clamped to `[0, 1]`.
pub fn fidelity(phi: &ComplexVector, rho: &DensityOperator) -> Result<f64> {
    if phi.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: phi.dim(),
        });
    }
    phi.check_unit()?;
    Ok(rho.matrix().sandwich(phi, phi).re.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qubit() -> TensorShape {
        TensorShape::flat(2)
    }

    #[test]
    fn fidelity_with_own_projector_is_one() {
        let v = ComplexVector::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        let rho = DensityOperator::pure(&v, qubit()).unwrap();
        assert!((fidelity(&v, &rho).unwrap() - 1.0).abs() <= TOL_NORM);
    }

    #[test]
    fn fidelity_with_maximally_mixed_is_half() {
        let v = ComplexVector::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        let rho = DensityOperator::maximally_mixed(qubit());
        assert!((fidelity(&v, &rho).unwrap() - 0.5).abs() <= TOL_NORM);
    }

    #[test]
    fn fidelity_of_orthogonal_states_is_zero() {
        let rho = DensityOperator::pure(&ComplexVector::basis(2, 1), qubit()).unwrap();
        assert_eq!(fidelity(&ComplexVector::basis(2, 0), &rho).unwrap(), 0.0);
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let rho = DensityOperator::maximally_mixed(TensorShape::flat(4));
        assert_eq!(
            fidelity(&ComplexVector::basis(2, 0), &rho),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 2
            })
        );
    }

    #[test]
    fn new_rejects_bad_operators() {
        let shape = qubit();
        let not_herm = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.3, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        )
        .unwrap();
        assert!(DensityOperator::new(not_herm, shape.clone()).is_err());

        let bad_trace = ComplexMatrix::identity(2);
        assert!(DensityOperator::new(bad_trace, shape.clone()).is_err());

        let negative =
            ComplexMatrix::diagonal(&[Complex64::new(1.5, 0.0), Complex64::new(-0.5, 0.0)]);
        let err = DensityOperator::new(negative, shape).unwrap_err();
        assert!(matches!(err, Error::NotDensityOperator(ref m) if m.contains("negative")));
    }

    #[test]
    fn eigenvalues_of_mixture() {
        let plus = ComplexVector::basis(2, 0);
        let minus = ComplexVector::basis(2, 1);
        let rho = DensityOperator::mixture(&[(0.75, &plus), (0.25, &minus)], qubit()).unwrap();
        let eig = rho.eigenvalues();
        assert!((eig[0] - 0.25).abs() < 1e-14 && (eig[1] - 0.75).abs() < 1e-14);
        assert!((rho.purity() - 0.625).abs() < 1e-14);
    }
}
