//! Seeded band-limited quaternion noise.
//!
//! Random quaternion coefficients on the dual-grid nodes with `|w| ≤ w_max/2` are summed as a
//! trigonometric polynomial `Σ e^{i s·u} c e^{j t·v}` (the quadrature inverse QFT, evaluable
//! off-grid) and multiplied by a Gaussian envelope of width `L/5`, so the signal is negligible
//! at the box edge and its spectrum stays well inside the Nyquist band.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::expr::SignalExpr;
use crate::grid::{point, GridSpec, Lattice};
use crate::quaternion::Quaternion;

#[derive(Clone, Debug)]
pub struct BandLimitedNoise {
    d: usize,
    /// `(w, c)` pairs with `w ∈ ℝ^{2d}`.
    terms: Vec<(Vec<f64>, Quaternion)>,
    envelope_rate: f64,
    amplitude: f64,
}

impl BandLimitedNoise {
    /// Draws coefficients from stream `stream` of `seed` and scales to unit discrete norm on `grid`.
    pub fn generate(grid: &GridSpec, seed: u64, stream: u64) -> Result<Self> {
        grid.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let dual = grid.dual();
        let w_max = -dual.origin();
        let radius = 0.5 * w_max;
        let mut terms = Vec::new();
        for k in 0..dual.len() {
            let w = point(&dual, k);
            let r2: f64 = w.iter().map(|v| v * v).sum();
            if r2 <= radius * radius {
                let c = Quaternion::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                );
                terms.push((w, c));
            }
        }
        let sigma = grid.half_extent / 5.0;
        let mut noise = Self { d: grid.d, terms, envelope_rate: 0.5 / (sigma * sigma), amplitude: 1.0 };
        let norm = SignalExpr::Noise(Arc::new(noise.clone())).sample(grid)?.norm2();
        noise.amplitude = 1.0 / norm;
        Ok(noise)
    }

    pub fn eval(&self, x: &[f64]) -> Quaternion {
        let d = self.d;
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let env = self.amplitude * (-self.envelope_rate * r2).exp();
        let mut acc = Quaternion::ZERO;
        for (w, c) in &self.terms {
            let su: f64 = x[..d].iter().zip(&w[..d]).map(|(a, b)| a * b).sum();
            let tv: f64 = x[d..].iter().zip(&w[d..]).map(|(a, b)| a * b).sum();
            acc += Quaternion::exp_i(su) * *c * Quaternion::exp_j(tv);
        }
        acc * env
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

/// One unit-norm noise signal.
pub fn band_limited(grid: &GridSpec, seed: u64, stream: u64) -> Result<SignalExpr> {
    Ok(SignalExpr::Noise(Arc::new(BandLimitedNoise::generate(grid, seed, stream)?)))
}

/// The `index`-th (signal, window) pair for `seed`.
pub fn band_limited_pair(grid: &GridSpec, seed: u64, index: u64) -> Result<(SignalExpr, SignalExpr)> {
    Ok((band_limited(grid, seed, 2 * index)?, band_limited(grid, seed, 2 * index + 1)?))
}
