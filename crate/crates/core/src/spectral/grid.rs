use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Periodic grid of `n` points on `[0, length)`.
///
/// Carries the FFT plans so that every field on the grid can transform
/// without replanning. Cloning is cheap (reference counted).
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    n: usize,
    length: f64,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "point count must be a power of two >= 8, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "period must be positive and finite, got {length}"
            )));
        }
        let scale = 2.0 * std::f64::consts::PI / length;
        let wavenumbers = (0..n)
            .map(|j| {
                let signed = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
                signed as f64 * scale
            })
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Self {
            inner: Arc::new(GridInner {
                n,
                length,
                wavenumbers,
                forward,
                inverse,
            }),
        })
    }

    /// The 2π-periodic grid with `n` points.
    pub fn periodic(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * std::f64::consts::PI)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.inner.n
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.inner.length
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.inner.length / self.inner.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n()).map(move |i| self.x(i))
    }

    /// Wavenumbers in FFT order: `0, 1, .., n/2-1, -n/2, .., -1` times `2π/L`.
    #[inline]
    pub fn wavenumbers(&self) -> &[f64] {
        &self.inner.wavenumbers
    }

    #[inline]
    pub fn nyquist_index(&self) -> usize {
        self.inner.n / 2
    }

    /// Largest resolved |k|, i.e. the Nyquist wavenumber.
    pub fn max_wavenumber(&self) -> f64 {
        std::f64::consts::PI * self.inner.n as f64 / self.inner.length
    }

    /// Smallest nonzero |k|.
    pub fn min_wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.inner.length
    }

    /// FFT index of the integer mode `m` (in units of `2π/L`).
    pub fn mode_index(&self, m: i64) -> Option<usize> {
        let n = self.n() as i64;
        if m >= n / 2 || m < -n / 2 {
            return None;
        }
        Some(m.rem_euclid(n) as usize)
    }

    /// Unnormalized forward transform in place.
    pub(crate) fn fft(&self, buf: &mut [Complex64]) {
        self.inner.forward.process(buf);
    }

    /// Inverse transform in place, normalized by `1/n`.
    pub(crate) fn ifft(&self, buf: &mut [Complex64]) {
        self.inner.inverse.process(buf);
        let s = 1.0 / self.inner.n as f64;
        for c in buf.iter_mut() {
            *c *= s;
        }
    }

    /// Same grid with twice the points on the same period.
    pub fn refined(&self) -> Result<Self> {
        Self::new(2 * self.n(), self.length())
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n == other.inner.n
                && self.inner.length.to_bits() == other.inner.length.to_bits())
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.inner.n)
            .field("length", &self.inner.length)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(4, 1.0).is_err());
        assert!(Grid::new(12, 1.0).is_err());
        assert!(Grid::new(16, 0.0).is_err());
        assert!(Grid::new(16, f64::NAN).is_err());
    }

    #[test]
    fn spacing_is_exact() {
        for &n in &[8usize, 64, 1024] {
            let g = Grid::periodic(n).unwrap();
            assert_eq!(g.dx() * n as f64, g.length());
        }
    }

    #[test]
    fn wavenumbers_pair_up() {
        let g = Grid::new(16, 3.0).unwrap();
        let k = g.wavenumbers();
        assert_eq!(k[0], 0.0);
        for j in 1..8 {
            assert_eq!(k[j], -k[16 - j]);
        }
        assert!(k[8] < 0.0);
        assert_eq!(g.mode_index(-8), Some(8));
        assert_eq!(g.mode_index(8), None);
    }
}
