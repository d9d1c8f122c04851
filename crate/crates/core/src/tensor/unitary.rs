use num_complex::Complex64;

use super::{ComplexMatrix, ComplexVector, TOL_NORM};
use crate::error::{Error, Result};

/// Residual norm below which a projected basis vector is treated as null.
const NULL_THRESHOLD: f64 = 10.0 * TOL_NORM;

/// Builds a unitary whose column `k` equals `v` for every supplied `(k, v)`.
///
/// The remaining columns come from Gram-Schmidt over the canonical basis
/// `e_0, e_1, ...` in ascending order, skipping vectors whose residual
/// falls below `10·TOL_NORM`. They fill the unspecified column slots in
/// ascending order, so the result is fully deterministic.
pub fn complete_to_unitary(partial_columns: &[(usize, ComplexVector)]) -> Result<ComplexMatrix> {
    let dim = match partial_columns.first() {
        Some((_, v)) => v.dim(),
        None => {
            return Err(Error::InvalidArgument(
                "at least one column is required to fix the dimension".into(),
            ))
        }
    };

    let mut slots: Vec<Option<ComplexVector>> = vec![None; dim];
    for (k, v) in partial_columns {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        if *k >= dim {
            return Err(Error::InvalidArgument(format!(
                "column index {k} out of range for dimension {dim}"
            )));
        }
        if slots[*k].is_some() {
            return Err(Error::InvalidArgument(format!(
                "column {k} specified twice"
            )));
        }
        slots[*k] = Some(v.clone());
    }

    let given: Vec<&ComplexVector> = partial_columns.iter().map(|(_, v)| v).collect();
    let deviation = gram_deviation(&given);
    if deviation > TOL_NORM {
        return Err(Error::NotOrthonormalInput { deviation });
    }

    let needed = dim - given.len();
    let mut basis: Vec<ComplexVector> = given.into_iter().cloned().collect();
    let mut extra = Vec::with_capacity(needed);
    for k in 0..dim {
        if extra.len() == needed {
            break;
        }
        let mut v = ComplexVector::basis(dim, k);
        // Two passes of classical Gram-Schmidt keep the result orthogonal
        // to working precision.
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.inner(&v);
                v = v.sub(&b.scale(overlap));
            }
        }
        if v.norm() < NULL_THRESHOLD {
            continue;
        }
        let v = v.normalized()?;
        basis.push(v.clone());
        extra.push(v);
    }
    if extra.len() != needed {
        return Err(Error::CompletionFailure {
            found: dim - needed + extra.len(),
            needed: dim,
        });
    }

    let mut extra = extra.into_iter();
    let columns: Vec<ComplexVector> = slots
        .into_iter()
        .map(|slot| slot.unwrap_or_else(|| extra.next().expect("counted above")))
        .collect();
    ComplexMatrix::from_columns(&columns)
}

/// `max |⟨vᵢ|vⱼ⟩ − δᵢⱼ|`.
fn gram_deviation(vectors: &[&ComplexVector]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let target = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((a.inner(b) - target).norm());
        }
    }
    worst
}
