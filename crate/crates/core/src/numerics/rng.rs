use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

use super::{CVector, Real};
use crate::error::{Error, Result};

/// Derives independent per-entity streams from one global seed.
///
/// A child seed is `SHA-256(global_seed_le ‖ path)`, so adding a new entity
/// never shifts the streams of existing ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedTree {
    global: u64,
}

impl SeedTree {
    pub fn new(global: u64) -> Self {
        Self { global }
    }

    pub fn global(&self) -> u64 {
        self.global
    }

    pub fn stream(&self, path: &str) -> RngStream {
        let mut hasher = Sha256::new();
        hasher.update(self.global.to_le_bytes());
        hasher.update(path.as_bytes());
        let seed: [u8; 32] = hasher.finalize().into();
        RngStream {
            path: path.to_owned(),
            rng: ChaCha12Rng::from_seed(seed),
        }
    }
}

/// Named, single-owner pseudo-random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    path: String,
    rng: ChaCha12Rng,
}

impl RngStream {
    /// Stream keyed directly by a seed, outside any [`SeedTree`].
    pub fn from_seed(seed: u64) -> Self {
        SeedTree::new(seed).stream("")
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform index in `[0, n)`. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index range must be nonempty");
        self.rng.random_range(0..n)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// One CN(0, 1) sample: real and imaginary parts each N(0, 1/2).
    pub fn complex_normal<T: Real>(&mut self) -> Complex<T> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let re = self.standard_normal() * s;
        let im = self.standard_normal() * s;
        Complex::new(T::lit(re), T::lit(im))
    }

    /// `n` i.i.d. circularly-symmetric standard complex Gaussian entries.
    pub fn complex_gaussian<T: Real>(&mut self, n: usize) -> Result<CVector<T>> {
        if n == 0 {
            return Err(Error::invalid("complex_gaussian needs n >= 1"));
        }
        Ok(CVector::from_vec((0..n).map(|_| self.complex_normal()).collect()))
    }

    /// Uniform sample of `amount` distinct indices from `[0, len)`.
    pub fn sample_indices(&mut self, len: usize, amount: usize) -> Vec<usize> {
        rand::seq::index::sample(&mut self.rng, len, amount).into_vec()
    }
}
