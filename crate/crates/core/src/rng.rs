//! Addressable random streams.
//!
//! A [`RngStream`] is a `(seed, stream_id)` address into ChaCha8's 2⁶⁴
//! independent streams. Monte Carlo code derives one stream per
//! `(cell, trial)` with [`RngStream::substream`], so results do not depend on
//! how trials are scheduled across threads.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Child stream identified by `label`. Deterministic, and distinct labels
    /// give unrelated stream ids.
    pub fn substream(&self, label: u64) -> Self {
        Self {
            seed: self.seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(label.wrapping_add(0x9E37_79B9_7F4A_7C15))),
        }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn generator(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// `rows × cols` matrix of i.i.d. complex Gaussians with `E|x|² = variance`,
    /// drawn from the start of this stream.
    pub fn gaussian_matrix(&self, rows: usize, cols: usize, variance: f64) -> DenseMatrix {
        gaussian_matrix(&mut self.generator(), rows, cols, variance)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Circularly-symmetric complex Gaussian with `E|x|² = 1`: real and
/// imaginary parts independent `N(0, 1/2)`.
pub fn standard_complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Row-major fill, real part drawn before imaginary part for each entry.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, variance: f64) -> DenseMatrix {
    let sd = variance.sqrt();
    DenseMatrix::from_fn(rows, cols, |_, _| standard_complex_gaussian(rng) * sd)
}

/// Uniformly distributed unit vector in `ℂᴺ` (normalized complex Gaussian).
pub fn uniform_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| standard_complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}
