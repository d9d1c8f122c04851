//! Tensor-core operations checked against independent brute-force oracles.

use num_complex::Complex64;
use proptest::prelude::*;
use qteleport_core::tensor::{
    embed, fidelity, haar_random_qubit, kron, partial_trace, projector, random_unit_vector,
    ComplexMatrix, ComplexVector, DensityOperator, TensorShape, TOL_NORM,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Random mixed state: normalized `G G†`.
fn random_density(rng: &mut ChaCha8Rng, shape: &TensorShape) -> DensityOperator {
    let n = shape.total_dim();
    let g = random_matrix(rng, n, n);
    let m = &g * &g.dagger();
    let tr = m.trace().re;
    let m = m.scale_real(1.0 / tr);
    // Symmetrize away rounding before validation.
    let m = m.add(&m.dagger()).scale_real(0.5);
    DensityOperator::new(m, shape.clone()).unwrap()
}

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

fn undigits(ds: &[usize], dims: &[usize]) -> usize {
    ds.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

/// Sum over every (row, column) pair of the full space, keeping entries
/// whose traced-out digits agree.
fn partial_trace_oracle(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> ComplexMatrix {
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let kd: usize = kept_dims.iter().product();
    let n: usize = dims.iter().product();
    let mut out = ComplexMatrix::zeros(kd, kd);
    for i in 0..n {
        let di = digits(i, dims);
        for j in 0..n {
            let dj = digits(j, dims);
            let traced_agree = (0..dims.len())
                .filter(|f| !keep.contains(f))
                .all(|f| di[f] == dj[f]);
            if !traced_agree {
                continue;
            }
            let r = undigits(&keep.iter().map(|&k| di[k]).collect::<Vec<_>>(), &kept_dims);
            let c = undigits(&keep.iter().map(|&k| dj[k]).collect::<Vec<_>>(), &kept_dims);
            out[(r, c)] += m[(i, j)];
        }
    }
    out
}

/// Embedding by explicit permutation: `P (op ⊗ I) P†`, with `P` the
/// permutation matrix moving the listed factors to the front.
fn embed_oracle(op: &ComplexMatrix, positions: &[usize], dims: &[usize]) -> ComplexMatrix {
    let rest: Vec<usize> = (0..dims.len()).filter(|f| !positions.contains(f)).collect();
    let order: Vec<usize> = positions.iter().chain(&rest).copied().collect();
    let perm_dims: Vec<usize> = order.iter().map(|&f| dims[f]).collect();
    let n: usize = dims.iter().product();
    let rest_dim: usize = rest.iter().map(|&f| dims[f]).product();
    let lifted = kron(op, &ComplexMatrix::identity(rest_dim));
    // P maps permuted-order basis index -> original basis index.
    let p = ComplexMatrix::from_fn(n, n, |orig, permuted| {
        let pd = digits(permuted, &perm_dims);
        let mut od = vec![0; dims.len()];
        for (slot, &f) in order.iter().enumerate() {
            od[f] = pd[slot];
        }
        if undigits(&od, dims) == orig {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    &(&p * &lifted) * &p.dagger()
}

#[test]
fn kron_matches_index_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let a = random_matrix(&mut rng, 2, 2);
    let b = random_matrix(&mut rng, 2, 2);
    let k = kron(&a, &b);
    for i in 0..2 {
        for j in 0..2 {
            for r in 0..2 {
                for s in 0..2 {
                    assert_eq!(k[(i * 2 + r, j * 2 + s)], a[(i, j)] * b[(r, s)]);
                }
            }
        }
    }
}

#[test]
fn kron_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let a = random_matrix(&mut rng, 2, 3);
    let b = random_matrix(&mut rng, 3, 2);
    let c = random_matrix(&mut rng, 2, 2);
    let left = kron(&kron(&a, &b), &c);
    let right = kron(&a, &kron(&b, &c));
    assert!(left.max_abs_diff(&right) <= TOL_NORM);
}

#[test]
fn dagger_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let a = random_matrix(&mut rng, 3, 5);
    assert_eq!(a.dagger().dagger(), a);
}

#[test]
fn projector_is_idempotent_with_unit_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..10 {
        let v = random_unit_vector(&mut rng, 4);
        let p = projector(&v).unwrap();
        assert!((&p * &p).max_abs_diff(&p) <= TOL_NORM);
        assert!(p.hermiticity_defect() <= TOL_NORM);
        assert!((p.trace().re - 1.0).abs() <= TOL_NORM);
    }
}

#[test]
fn partial_trace_matches_oracle_on_all_subsets() {
    let shapes: [&[usize]; 4] = [&[2, 2], &[2, 3], &[4, 2, 2], &[4, 2, 2, 2]];
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for dims in shapes {
        let shape = TensorShape::new(dims.to_vec()).unwrap();
        let rho = random_density(&mut rng, &shape);
        let nf = dims.len();
        for mask in 1..(1u32 << nf) {
            let keep: Vec<usize> = (0..nf).filter(|f| mask & (1 << f) != 0).collect();
            let fast = partial_trace(&rho, &keep).unwrap();
            let slow = partial_trace_oracle(rho.matrix(), dims, &keep);
            assert!(
                fast.matrix().max_abs_diff(&slow) <= TOL_NORM,
                "dims {dims:?} keep {keep:?}"
            );
            assert!((fast.trace() - rho.trace()).norm() <= TOL_NORM);
        }
    }
}

#[test]
fn partial_trace_of_product_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let phi = random_unit_vector(&mut rng, 2);
    let psi = random_unit_vector(&mut rng, 4);
    let rho =
        DensityOperator::pure(&phi.kron(&psi), TensorShape::new(vec![2, 4]).unwrap()).unwrap();
    let reduced = partial_trace(&rho, &[0]).unwrap();
    assert!(reduced.matrix().max_abs_diff(&projector(&phi).unwrap()) <= TOL_NORM);
}

#[test]
fn embed_matches_permutation_oracle() {
    let dims = [4usize, 2, 2, 2];
    let shape = TensorShape::new(dims.to_vec()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let cases: [&[usize]; 6] = [&[0, 3], &[3, 0], &[1], &[0, 1, 2], &[2, 1], &[3, 1, 0]];
    for positions in cases {
        let d: usize = positions.iter().map(|&p| dims[p]).product();
        let op = random_matrix(&mut rng, d, d);
        let fast = embed(&op, positions, &shape).unwrap();
        let slow = embed_oracle(&op, positions, &dims);
        assert!(
            fast.max_abs_diff(&slow) <= TOL_NORM,
            "positions {positions:?}"
        );
    }
}

#[test]
fn embeddings_on_disjoint_factors_commute() {
    let shape = TensorShape::new(vec![4, 2, 2, 2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..5 {
        let a = embed(&random_matrix(&mut rng, 8, 8), &[0, 3], &shape).unwrap();
        let b = embed(&random_matrix(&mut rng, 4, 4), &[2, 1], &shape).unwrap();
        assert!((&a * &b).max_abs_diff(&(&b * &a)) <= 1e-12);
    }
}

#[test]
fn haar_qubit_average_is_maximally_mixed() {
    let n = 10_000u64;
    let mut acc = ComplexMatrix::zeros(2, 2);
    for seed in 0..n {
        acc = acc.add(&projector(&haar_random_qubit(seed)).unwrap());
    }
    let mean = acc.scale_real(1.0 / n as f64);
    let target = ComplexMatrix::identity(2).scale_real(0.5);
    assert!(mean.max_abs_diff(&target) <= 0.02, "{mean}");
}

proptest! {
    #[test]
    fn fidelity_ignores_global_phase(seed in any::<u64>(), alpha in -10.0f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = TensorShape::flat(2);
        let rho = random_density(&mut rng, &shape);
        let phi = random_unit_vector(&mut rng, 2);
        let rotated = phi.scale(Complex64::from_polar(1.0, alpha));
        let f0 = fidelity(&phi, &rho).unwrap();
        let f1 = fidelity(&rotated, &rho).unwrap();
        prop_assert!((f0 - f1).abs() <= TOL_NORM);
    }

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>(), mask in 1u32..16) {
        let shape = TensorShape::new(vec![4, 2, 2, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_unit_vector(&mut rng, 32);
        let rho = DensityOperator::pure(&v, shape).unwrap();
        let keep: Vec<usize> = (0..4).filter(|f| mask & (1 << f) != 0).collect();
        let reduced = partial_trace(&rho, &keep).unwrap();
        prop_assert!((reduced.trace() - Complex64::new(1.0, 0.0)).norm() <= TOL_NORM);
        prop_assert!(reduced.eigenvalues()[0] >= -TOL_NORM);
    }

    #[test]
    fn kron_vectors_agree_with_column_kron(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unit_vector(&mut rng, 3);
        let v = random_unit_vector(&mut rng, 2);
        let as_matrix = kron(&u.to_column(), &v.to_column()).column(0);
        prop_assert_eq!(u.kron(&v), as_matrix);
    }
}

#[test]
fn haar_vectors_have_unit_norm() {
    for seed in [0, 1, 42, u64::MAX] {
        let v: ComplexVector = haar_random_qubit(seed);
        assert!((v.norm() - 1.0).abs() <= TOL_NORM);
    }
}
