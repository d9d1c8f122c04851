use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::ComplexVector;

/// Haar-distributed unit vector in `C^dim`: independent standard normal
/// real and imaginary parts, then normalized.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexVector {
    loop {
        let v: ComplexVector = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        // A zero draw has probability zero; resample rather than fail.
        if let Ok(v) = v.normalized() {
            return v;
        }
    }
}

pub fn haar_random_qubit_from<R: Rng + ?Sized>(rng: &mut R) -> ComplexVector {
    random_unit_vector(rng, 2)
}

/// Deterministic Haar-random qubit for a given seed.
pub fn haar_random_qubit(seed: u64) -> ComplexVector {
    haar_random_qubit_from(&mut ChaCha8Rng::seed_from_u64(seed))
}
