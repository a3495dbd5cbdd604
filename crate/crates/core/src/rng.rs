//! Seeded random source used by presets and the property suites.
//!
//! The stream is ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64`). Uniform
//! doubles are built here as `(next_u64 >> 11) · 2⁻⁵³`, so the values depend
//! only on the ChaCha keystream and never on a library's float conversion.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::hardy::HardySeries;

pub struct SeededRng {
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn integer(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        lo + (self.inner.next_u64() % span) as usize
    }

    /// Uniform on the closed unit disc: radius `√U₁`, angle `2πU₂`.
    pub fn unit_disc(&mut self) -> Complex64 {
        let r = self.uniform().sqrt();
        let angle = 2.0 * std::f64::consts::PI * self.uniform();
        Complex64::from_polar(r, angle)
    }

    /// Random series of the given degree with unit-disc coefficients scaled by `e^{−ρk}`.
    pub fn analytic_series(&mut self, degree: usize, rho: f64) -> HardySeries {
        let coeffs = (0..=degree)
            .map(|k| self.unit_disc() * (-rho * k as f64).exp())
            .collect();
        HardySeries::from_vec_unchecked(coeffs)
    }
}
