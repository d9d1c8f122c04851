use super::{ComplexMatrix, ComplexVector, DensityOperator, TensorShape, ZERO};
use crate::error::{Error, Result};

/// Kronecker product: `(a ⊗ b)[i·b.rows + k, j·b.cols + l] = a[i,j]·b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

/// `|v⟩⟨v|` for a unit vector `v`.
pub fn projector(v: &ComplexVector) -> Result<ComplexMatrix> {
    v.check_unit()?;
    Ok(ComplexMatrix::from_fn(v.dim(), v.dim(), |i, j| {
        v[i] * v[j].conj()
    }))
}

/// Flattened offsets contributed by every multi-index over `factors`.
///
/// Because the flattened index is a sum of `digit * stride` terms, the full
/// index of a basis state splits into an offset from one group of factors
/// plus an offset from the complementary group. The first listed factor is
/// the most significant digit of the returned enumeration.
fn offsets(shape: &TensorShape, factors: &[usize]) -> Vec<usize> {
    let strides = shape.strides();
    let mut out = vec![0usize];
    for &f in factors {
        let (d, stride) = (shape.dims()[f], strides[f]);
        out = out
            .iter()
            .flat_map(|&base| (0..d).map(move |digit| base + digit * stride))
            .collect();
    }
    out
}

fn complement(shape: &TensorShape, factors: &[usize]) -> Vec<usize> {
    (0..shape.num_factors())
        .filter(|f| !factors.contains(f))
        .collect()
}

fn validate_factor_list(shape: &TensorShape, factors: &[usize]) -> Result<()> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument(
            "factor list must be nonempty".into(),
        ));
    }
    for (n, &f) in factors.iter().enumerate() {
        shape.check_factor(f)?;
        if factors[..n].contains(&f) {
            return Err(Error::InvalidArgument(format!("factor {f} listed twice")));
        }
    }
    Ok(())
}

/// Partial trace of a square matrix interpreted under `shape`, keeping
/// `keep` (already sorted and validated).
pub(crate) fn partial_trace_matrix(
    m: &ComplexMatrix,
    shape: &TensorShape,
    keep: &[usize],
) -> ComplexMatrix {
    let kept = offsets(shape, keep);
    let traced = offsets(shape, &complement(shape, keep));
    ComplexMatrix::from_fn(kept.len(), kept.len(), |r, c| {
        traced.iter().map(|&t| m[(kept[r] + t, kept[c] + t)]).sum()
    })
}

/// Reduces `rho` to the factors in `keep`, which come out in ascending
/// factor order regardless of how they were listed.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let shape = rho.shape();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    validate_factor_list(shape, &keep)?;
    let reduced = partial_trace_matrix(rho.matrix(), shape, &keep);
    Ok(DensityOperator::from_parts(reduced, shape.select(&keep)?))
}

/// Lifts `op` to the full space of `shape`, acting on `positions` (in the
/// listed order) and as the identity on every other factor.
///
/// Equivalent to `P (op ⊗ I) P†` where `P` permutes the listed factors to
/// the front.
pub fn embed(
    op: &ComplexMatrix,
    positions: &[usize],
    shape: &TensorShape,
) -> Result<ComplexMatrix> {
    validate_factor_list(shape, positions)?;
    let sub_dim: usize = positions.iter().map(|&p| shape.dims()[p]).product();
    if !op.is_square() {
        return Err(Error::DimensionMismatch {
            expected: op.rows(),
            found: op.cols(),
        });
    }
    if op.rows() != sub_dim {
        return Err(Error::DimensionMismatch {
            expected: sub_dim,
            found: op.rows(),
        });
    }

    let acted = offsets(shape, positions);
    let spectator = offsets(shape, &complement(shape, positions));
    let n = shape.total_dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for &s in &spectator {
        for (p, &rp) in acted.iter().enumerate() {
            for (q, &rq) in acted.iter().enumerate() {
                let z = op[(p, q)];
                if z != ZERO {
                    out[(rp + s, rq + s)] = z;
                }
            }
        }
    }
    Ok(out)
}
