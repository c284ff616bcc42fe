use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::Grid;
use crate::error::{Error, Result};

/// Real samples `f(x_i)` on a periodic grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RealField {
    grid: Grid,
    values: Vec<f64>,
}

/// Complex samples on a periodic grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    values: Vec<Complex64>,
}

impl RealField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.n(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("real field"));
        }
        Ok(Self { grid, values })
    }

    /// Skips validation. Callers guarantee length and finiteness.
    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        Self { grid, values }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_raw(grid.clone(), vec![0.0; grid.n()])
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        Self::from_raw(grid.clone(), vec![c; grid.n()])
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(grid.clone(), grid.points().map(f).collect())
    }

    /// Field from an unnormalized DFT; the imaginary part of the inverse is dropped.
    pub fn from_spectrum(grid: &Grid, mut spectrum: Vec<Complex64>) -> Self {
        grid.ifft(&mut spectrum);
        Self::from_raw(grid.clone(), spectrum.into_iter().map(|c| c.re).collect())
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Unnormalized DFT in FFT order.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.grid.fft(&mut buf);
        buf
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        Self::from_raw(
            self.grid.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn minus_mean(&self) -> Self {
        let m = self.mean();
        self.map(|v| v - m)
    }

    /// `∫ f g dx` by the grid rule (exact for trigonometric polynomials).
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * self.grid.dx()
    }

    pub fn l2_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.grid.dx()
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn to_complex(&self) -> ComplexField {
        ComplexField::from_raw(
            self.grid.clone(),
            self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }
}

impl ComplexField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.n(),
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite("complex field"));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_raw(grid: Grid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        Self { grid, values }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_raw(grid.clone(), vec![Complex64::new(0.0, 0.0); grid.n()])
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> Complex64) -> Self {
        Self::from_raw(grid.clone(), grid.points().map(f).collect())
    }

    pub fn from_parts(re: &RealField, im: &RealField) -> Self {
        assert_eq!(re.grid, im.grid, "fields live on different grids");
        Self::from_raw(
            re.grid.clone(),
            re.values
                .iter()
                .zip(&im.values)
                .map(|(&a, &b)| Complex64::new(a, b))
                .collect(),
        )
    }

    pub fn from_spectrum(grid: &Grid, mut spectrum: Vec<Complex64>) -> Self {
        grid.ifft(&mut spectrum);
        Self::from_raw(grid.clone(), spectrum)
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut buf = self.values.clone();
        self.grid.fft(&mut buf);
        buf
    }

    pub fn re(&self) -> RealField {
        RealField::from_raw(self.grid.clone(), self.values.iter().map(|c| c.re).collect())
    }

    pub fn im(&self) -> RealField {
        RealField::from_raw(self.grid.clone(), self.values.iter().map(|c| c.im).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_raw(self.grid.clone(), self.values.iter().map(|&v| s * v).collect())
    }

    pub fn dot(&self, other: &Self) -> Complex64 {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.dx()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

macro_rules! impl_binops {
    ($field:ty) => {
        impl Add for &$field {
            type Output = $field;
            fn add(self, rhs: Self) -> $field {
                assert_eq!(self.grid, rhs.grid, "fields live on different grids");
                <$field>::from_raw(
                    self.grid.clone(),
                    self.values.iter().zip(&rhs.values).map(|(&a, &b)| a + b).collect(),
                )
            }
        }

        impl Sub for &$field {
            type Output = $field;
            fn sub(self, rhs: Self) -> $field {
                assert_eq!(self.grid, rhs.grid, "fields live on different grids");
                <$field>::from_raw(
                    self.grid.clone(),
                    self.values.iter().zip(&rhs.values).map(|(&a, &b)| a - b).collect(),
                )
            }
        }

        impl Mul for &$field {
            type Output = $field;
            fn mul(self, rhs: Self) -> $field {
                assert_eq!(self.grid, rhs.grid, "fields live on different grids");
                <$field>::from_raw(
                    self.grid.clone(),
                    self.values.iter().zip(&rhs.values).map(|(&a, &b)| a * b).collect(),
                )
            }
        }

        impl Neg for &$field {
            type Output = $field;
            fn neg(self) -> $field {
                <$field>::from_raw(self.grid.clone(), self.values.iter().map(|&a| -a).collect())
            }
        }

        impl Add for $field {
            type Output = $field;
            fn add(self, rhs: Self) -> $field {
                &self + &rhs
            }
        }

        impl Sub for $field {
            type Output = $field;
            fn sub(self, rhs: Self) -> $field {
                &self - &rhs
            }
        }

        impl Mul for $field {
            type Output = $field;
            fn mul(self, rhs: Self) -> $field {
                &self * &rhs
            }
        }

        impl Neg for $field {
            type Output = $field;
            fn neg(self) -> $field {
                -&self
            }
        }
    };
}

impl_binops!(RealField);
impl_binops!(ComplexField);
