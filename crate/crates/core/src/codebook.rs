//! Discrete design spaces: the UE power set and the RVQ combiner / IRS
//! codebooks, plus codebook-based maximum ratio combining.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CVector, Real, RngStream};
use crate::signal::IrsBeamformer;

/// Geometric power levels `p_min·e^{iΔ}`, `Δ = (ln p_max − ln p_min)/(size−1)`, linear mW.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSet<T> {
    values: Vec<T>,
}

impl<T: Real> PowerSet<T> {
    pub fn build(p_min: T, p_max: T, size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::invalid("power set needs at least two levels"));
        }
        if !(p_min > T::zero() && p_min < p_max && p_max.is_finite()) {
            return Err(Error::invalid("power set needs 0 < p_min < p_max"));
        }
        let step = (p_max.ln() - p_min.ln()) / T::lit((size - 1) as f64);
        let mut values: Vec<T> = (0..size)
            .map(|i| p_min * (step * T::lit(i as f64)).exp())
            .collect();
        values[size - 1] = p_max;
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, index: usize) -> T {
        self.values[index]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// Index of the level closest to `target` in linear scale; ties go low.
    pub fn nearest_index(&self, target: T) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if (*v - target).abs() < (self.values[best] - target).abs() {
                best = i;
            }
        }
        best
    }
}

pub fn build_power_set<T: Real>(p_min: T, p_max: T, size: usize) -> Result<PowerSet<T>> {
    PowerSet::build(p_min, p_max, size)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodebookKind {
    Combiner,
    Irs,
}

/// Ordered list of codewords addressed by dense 0-based indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codebook<T> {
    kind: CodebookKind,
    words: Vec<CVector<T>>,
}

impl<T: Real> Codebook<T> {
    pub fn kind(&self) -> CodebookKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, index: usize) -> &CVector<T> {
        &self.words[index]
    }

    pub fn words(&self) -> &[CVector<T>] {
        &self.words
    }

    pub fn dim(&self) -> usize {
        self.words.first().map_or(0, |w| w.len())
    }

    /// Codeword `index` of an IRS codebook as a beamformer.
    pub fn beamformer(&self, index: usize) -> IrsBeamformer<T> {
        IrsBeamformer::new(self.words[index].clone()).expect("IRS codewords are unit modulus")
    }

    /// Smallest index maximizing `|𝒵(i)^H h|²`.
    pub fn mrc_select(&self, h: &CVector<T>) -> Result<usize> {
        if self.words.is_empty() {
            return Err(Error::invalid("MRC over an empty codebook"));
        }
        let mut best = 0;
        let mut best_score = T::neg_infinity();
        for (i, w) in self.words.iter().enumerate() {
            let score = w.dot(h)?.norm_sqr();
            if score > best_score {
                best = i;
                best_score = score;
            }
        }
        Ok(best)
    }
}

/// RVQ combiner codebook: normalized CN(0, I) vectors of length `antennas`.
pub fn build_combiner_codebook<T: Real>(antennas: usize, size: usize, stream: &mut RngStream) -> Result<Codebook<T>> {
    if antennas == 0 || size == 0 {
        return Err(Error::invalid("combiner codebook needs M >= 1 and size >= 1"));
    }
    let words = (0..size)
        .map(|_| stream.complex_gaussian::<T>(antennas)?.normalized())
        .collect::<Result<Vec<_>>>()?;
    Ok(Codebook {
        kind: CodebookKind::Combiner,
        words,
    })
}

/// IRS codebook with unit-modulus entries `e^{j2πθ}`, `θ ~ U[0, 1)`.
pub fn build_irs_codebook<T: Real>(elements: usize, size: usize, stream: &mut RngStream) -> Result<Codebook<T>> {
    if elements == 0 || size == 0 {
        return Err(Error::invalid("IRS codebook needs N >= 1 and size >= 1"));
    }
    let two_pi = T::lit(2.0) * T::PI();
    let words = (0..size)
        .map(|_| {
            CVector::from_vec(
                (0..elements)
                    .map(|_| Complex::from_polar(T::one(), two_pi * T::lit(stream.uniform())))
                    .collect(),
            )
        })
        .collect();
    Ok(Codebook {
        kind: CodebookKind::Irs,
        words,
    })
}
