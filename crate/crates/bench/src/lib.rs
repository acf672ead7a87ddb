//! Fixtures shared by the benchmarks.

use f2coh::bundles::{assemble_equivariant_seeds, AssembledBundle};
use f2coh::catalog::bundle;
use f2coh::linalg::{BitMatrix, BitVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..rows)
        .map(|_| BitVec::from_indices(cols, (0..cols).filter(|_| rng.gen_bool(0.5))))
        .collect();
    BitMatrix::from_rows(cols, rows)
}

/// The non-equivariant run of a catalog bundle.
pub fn bundle_run(name: &str, n: Option<usize>, bound: u32) -> AssembledBundle {
    let spec = bundle(name, n, None).unwrap().spec.non_equivariant();
    assemble_equivariant_seeds(&spec, bound).unwrap()
}
