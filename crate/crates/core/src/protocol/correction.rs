use num_complex::Complex64;

use super::{canonical_theta, eta, QubitState};
use crate::error::Result;
use crate::tensor::{projector, ComplexMatrix, ComplexVector, DensityOperator, TensorShape};

/// Target-qubit factor accompanying each probe pointer after `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionBranches {
    pub phi1: ComplexVector,
    pub phi2: ComplexVector,
    pub phi3: ComplexVector,
    pub phi4: ComplexVector,
}

impl CorrectionBranches {
    pub fn as_array(&self) -> [&ComplexVector; 4] {
        [&self.phi1, &self.phi2, &self.phi3, &self.phi4]
    }
}

/// `φ1 = −a|+⟩ + b|−⟩`, `φ2 = −φ`, `φ3 = a|−⟩ − b|+⟩`, `φ4 = a|−⟩ + b|+⟩`.
pub fn correction_branches(phi: &QubitState) -> CorrectionBranches {
    let (a, b) = (phi.a(), phi.b());
    let v = |plus: Complex64, minus: Complex64| ComplexVector::new(vec![plus, minus]);
    CorrectionBranches {
        phi1: v(-a, b),
        phi2: v(-a, -b),
        phi3: v(-b, a),
        phi4: v(b, a),
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Block `i` of the correction: the 2×2 action on the target when the
/// probe reads `η_i`. Columns are the images of `|+⟩` and `|−⟩`.
fn correction_block(i: usize) -> [[Complex64; 2]; 2] {
    let (z, p, m) = (c(0.0), c(1.0), c(-1.0));
    match i {
        // |+⟩ ↦ −|+⟩, |−⟩ ↦ |−⟩
        1 => [[m, z], [z, p]],
        // |+⟩ ↦ −|+⟩, |−⟩ ↦ −|−⟩
        2 => [[m, z], [z, m]],
        // |+⟩ ↦ −|−⟩, |−⟩ ↦ |+⟩
        3 => [[z, p], [m, z]],
        // |+⟩ ↦ |−⟩, |−⟩ ↦ |+⟩
        4 => [[z, p], [p, z]],
        _ => unreachable!("probe index {i}"),
    }
}

fn block_diagonal(phase_on_eta2_plus: Complex64) -> ComplexMatrix {
    let mut w = ComplexMatrix::zeros(8, 8);
    for i in 1..=4 {
        let block = correction_block(i);
        let base = 2 * (i - 1);
        for (r, row) in block.iter().enumerate() {
            for (s, &val) in row.iter().enumerate() {
                w[(base + r, base + s)] = val;
            }
        }
    }
    w[(2, 2)] *= phase_on_eta2_plus;
    w
}

/// The 8×8 conditional correction on `H0 ⊗ H3`.
pub fn correction_unitary() -> ComplexMatrix {
    block_diagonal(c(1.0))
}

/// The correction with `η2|+⟩ ↦ −e^{iθ} η2|+⟩`; every other entry as in
/// [`correction_unitary`].
pub fn perturbed_correction_unitary(theta: f64) -> Result<ComplexMatrix> {
    let theta = canonical_theta(theta)?;
    Ok(block_diagonal(Complex64::from_polar(1.0, theta)))
}

/// `φ_θ = e^{iθ} a|+⟩ + b|−⟩`.
pub(crate) fn perturbed_branch(phi: &QubitState, theta: f64) -> ComplexVector {
    ComplexVector::new(vec![Complex64::from_polar(1.0, theta) * phi.a(), phi.b()])
}

/// Closed form `¾ P[φ] + ¼ P[φ_θ]`, built without running the pipeline.
pub fn theta_mixture(phi: &QubitState, theta: f64) -> Result<DensityOperator> {
    let theta = canonical_theta(theta)?;
    let target = phi.to_vector();
    let perturbed = perturbed_branch(phi, theta);
    DensityOperator::mixture(&[(0.75, &target), (0.25, &perturbed)], TensorShape::flat(2))
}

/// `¾ + ¼ · | |a|² e^{iθ} + |b|² |²`.
pub fn fidelity_theta_closed_form(phi: &QubitState, theta: f64) -> f64 {
    let overlap = Complex64::from_polar(phi.a().norm_sqr(), theta) + phi.b().norm_sqr();
    0.75 + 0.25 * overlap.norm_sqr()
}

/// `A = P[η1 φ] + P[η3 φ] + P[η4 φ]` on `H0 ⊗ H3`.
pub fn coincidence_observable(phi: &QubitState) -> ComplexMatrix {
    let target = phi.to_vector();
    [1, 3, 4]
        .into_iter()
        .map(|i| projector(&eta(i).kron(&target)).expect("product of unit vectors"))
        .fold(ComplexMatrix::zeros(8, 8), |acc, p| acc.add(&p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{TOL_NORM, TOL_UNITARY};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn basis8(i: usize, s: usize) -> ComplexVector {
        eta(i).kron(&ComplexVector::basis(2, s))
    }

    #[test]
    fn branches_for_plus() {
        let br = correction_branches(&QubitState::plus());
        let plus = ComplexVector::basis(2, 0);
        let minus = ComplexVector::basis(2, 1);
        assert_eq!(br.phi1, plus.scale(c(-1.0)));
        assert_eq!(br.phi2, plus.scale(c(-1.0)));
        assert_eq!(br.phi3, minus);
        assert_eq!(br.phi4, minus);
    }

    #[test]
    fn branch_overlap_matches_expansion() {
        let phi = QubitState::haar(11);
        let br = correction_branches(&phi);
        assert!((br.phi1.norm() - 1.0).abs() <= TOL_NORM);
        let expected = phi.a().norm_sqr() - phi.b().norm_sqr();
        assert!((br.phi1.inner(&br.phi2) - c(expected)).norm() <= TOL_NORM);
    }

    #[test]
    fn w_table_rows() {
        let w = correction_unitary();
        assert_eq!(w.apply(&basis8(3, 0)), basis8(3, 1).scale(c(-1.0)));
        assert_eq!(w.apply(&basis8(4, 0)), basis8(4, 1));
        assert!(w.unitarity_defect() <= TOL_UNITARY);
    }

    #[test]
    fn w_theta_zero_is_w() {
        assert_eq!(
            perturbed_correction_unitary(0.0).unwrap(),
            correction_unitary()
        );
    }

    #[test]
    fn w_theta_quarter_turn() {
        let w = perturbed_correction_unitary(FRAC_PI_2).unwrap();
        let out = w.apply(&basis8(2, 0));
        let expected = basis8(2, 0).scale(Complex64::new(0.0, -1.0));
        assert!(out.max_abs_diff(&expected) <= TOL_NORM);
    }

    #[test]
    fn w_theta_unitary() {
        for theta in [0.1, 1.0, PI, 5.5] {
            assert!(
                perturbed_correction_unitary(theta)
                    .unwrap()
                    .unitarity_defect()
                    <= TOL_UNITARY
            );
        }
        assert!(perturbed_correction_unitary(f64::NAN).is_err());
    }

    #[test]
    fn mixture_limits() {
        let phi = QubitState::haar(5);
        let p = projector(&phi.to_vector()).unwrap();
        assert!(theta_mixture(&phi, 0.0).unwrap().matrix().max_abs_diff(&p) <= TOL_NORM);

        let only_minus = QubitState::minus();
        let pm = projector(&only_minus.to_vector()).unwrap();
        for theta in [0.3, 2.0, 4.0] {
            let m = theta_mixture(&only_minus, theta).unwrap();
            assert!(m.matrix().max_abs_diff(&pm) <= TOL_NORM);
        }
    }

    #[test]
    fn mixture_at_pi_on_balanced_state() {
        let s = FRAC_1_SQRT_2;
        let phi = QubitState::new(c(s), c(s)).unwrap();
        let m = theta_mixture(&phi, PI).unwrap();
        assert!((m.trace() - c(1.0)).norm() <= TOL_NORM);
        // φ and φ_π are orthogonal here, so the spectrum is exactly {¼, ¾}.
        let eig = m.eigenvalues();
        assert!((eig[0] - 0.25).abs() <= 1e-12 && (eig[1] - 0.75).abs() <= 1e-12);
    }

    #[test]
    fn closed_form_values() {
        let s = FRAC_1_SQRT_2;
        assert!((fidelity_theta_closed_form(&QubitState::haar(3), 0.0) - 1.0).abs() <= TOL_NORM);
        for theta in [0.5, 2.0, PI] {
            assert!(
                (fidelity_theta_closed_form(&QubitState::plus(), theta) - 1.0).abs() <= TOL_NORM
            );
        }
        let balanced = QubitState::new(c(s), c(s)).unwrap();
        assert!((fidelity_theta_closed_form(&balanced, PI) - 0.75).abs() <= TOL_NORM);
    }

    #[test]
    fn coincidence_is_rank_three_projector() {
        let a = coincidence_observable(&QubitState::haar(8));
        assert!((&a * &a).max_abs_diff(&a) <= TOL_NORM);
        assert!((a.trace() - c(3.0)).norm() <= TOL_NORM);
    }
}
