//! Seeded random generation: complex Gaussians, Haar vectors and unitaries.
//!
//! Every stochastic routine takes an explicit seed. Independent streams are
//! split off a seed by ChaCha stream id, so restart `k` sees the same numbers
//! no matter how many restarts run.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::tensor::C64;

pub type StateRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> StateRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Stream `index` of the generator seeded by `seed`.
pub fn split(seed: u64, index: u64) -> StateRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_gaussian(rng: &mut StateRng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed unit vector in `C^dim`.
pub fn haar_vector(dim: usize, rng: &mut StateRng) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-150 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Haar-distributed `dim × dim` unitary (QR of a Ginibre matrix with the
/// phases of `R`'s diagonal absorbed into `Q`).
pub fn haar_unitary(dim: usize, rng: &mut StateRng) -> DMatrix<C64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}
