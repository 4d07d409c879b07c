//! Reproducible random streams.
//!
//! Every stochastic routine takes one 64-bit seed. Work is cut into fixed
//! blocks and block `i` draws from ChaCha20 stream `i` of that seed, so the
//! output does not depend on how blocks are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Gamma, Normal};

use crate::error::{Error, Result};

/// Trials per independently seeded block.
pub const BLOCK: usize = 1000;

/// Generator for stream `stream` of `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Half-open index ranges of the blocks covering `n` items.
pub fn blocks(n: usize) -> impl Iterator<Item = (u64, std::ops::Range<usize>)> {
    (0..n.div_ceil(BLOCK)).map(move |b| (b as u64, b * BLOCK..((b + 1) * BLOCK).min(n)))
}

/// Normal sampler, allowing zero standard deviation.
pub fn normal(mean: f64, sd: f64) -> Result<Normal<f64>> {
    Normal::new(mean, sd).map_err(|e| Error::Domain(format!("normal({mean}, {sd}): {e}")))
}

/// Sample variance of n normal draws scaled to its gamma law: shape α, mean κ.
pub fn scaled_variance(alpha: f64, kappa: f64) -> Result<Gamma<f64>> {
    Gamma::new(alpha, kappa / alpha).map_err(|e| Error::Domain(format!("gamma({alpha}, {kappa}/{alpha}): {e}")))
}

/// Draws one value from a distribution; keeps call sites short.
pub fn draw<D: Distribution<f64>, R: rand::Rng + ?Sized>(d: &D, rng: &mut R) -> f64 {
    d.sample(rng)
}
