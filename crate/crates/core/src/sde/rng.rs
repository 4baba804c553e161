use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::C64;

pub type TrajectoryRng = ChaCha8Rng;

/// Independent stream for trajectory `index`: the ChaCha key comes from
/// `seed` and the stream id is the index, so streams never overlap and any
/// trajectory can be regenerated on its own.
pub fn trajectory_rng(seed: u64, index: u64) -> TrajectoryRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Six complex Wiener increments over a step of length `dt`, each
/// `(ξ₁ + iξ₂) √(dt/2)` with standard normal `ξ`, so that
/// `E[dW* dW] = dt` and `E[dW dW] = 0`.
pub fn complex_wiener<R: rand::Rng + ?Sized>(rng: &mut R, dt: f64) -> [C64; 6] {
    let s = (0.5 * dt).sqrt();
    std::array::from_fn(|_| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re * s, im * s)
    })
}
