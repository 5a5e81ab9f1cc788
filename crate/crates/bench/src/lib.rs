//! Seeded fixtures shared by the benchmarks.

use cecot_core::gen::random_complex;
use cecot_core::{CatParams, Complex, Mat, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn square_matrix(p: u64, n: usize, seed: u64) -> Mat {
    let fld = PrimeField::new(p).expect("prime");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
    Mat::from_vec(fld, n, n, data).expect("n × n entries")
}

/// A complex on `window + 1` degrees starting at `-1`.
pub fn complex(p: u64, m: usize, window: usize, maxdim: usize, seed: u64) -> Complex {
    let params = CatParams::from_ints(p, m).expect("valid parameters");
    random_complex(params, -1, window + 1, maxdim, &mut ChaCha8Rng::seed_from_u64(seed))
}
