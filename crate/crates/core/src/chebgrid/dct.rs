//! Chebyshev coefficient transform (type-I cosine transform) on `n + 1`
//! Chebyshev points, evaluated through a length-`2n` FFT of the even extension.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{cheb_derivative_coeffs, ChebSeries};
use crate::error::{Error, Result};

/// Reusable transform plan for a fixed `n`.
#[derive(Clone)]
pub struct ChebTransform {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for ChebTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChebTransform").field("n", &self.n).finish()
    }
}

impl ChebTransform {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "cosine transform needs at least 3 points, got {}",
                n + 1
            )));
        }
        let fft = FftPlanner::new().plan_fft_forward(2 * n);
        Ok(Self { n, fft })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Y_j = a_0 + (-1)^j a_n + 2 sum_{k=1}^{n-1} a_k cos(pi j k / n)`.
    fn even_extension_fft(&self, a: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut buf: Vec<Complex<f64>> = Vec::with_capacity(2 * n);
        buf.extend(a.iter().map(|&v| Complex::new(v, 0.0)));
        buf.extend(a[1..n].iter().rev().map(|&v| Complex::new(v, 0.0)));
        self.fft.process(&mut buf);
        buf[..=n].iter().map(|c| c.re).collect()
    }

    pub fn forward(&self, samples: &[f64]) -> Result<ChebSeries> {
        self.check_len(samples.len())?;
        let n = self.n;
        let y = self.even_extension_fft(samples);
        let scale = 1.0 / n as f64;
        let mut coeffs: Vec<f64> = y.iter().map(|v| v * scale).collect();
        coeffs[0] *= 0.5;
        coeffs[n] *= 0.5;
        ChebSeries::new(coeffs)
    }

    pub fn inverse(&self, series: &ChebSeries) -> Result<Vec<f64>> {
        self.check_len(series.coeffs.len())?;
        let n = self.n;
        let c = &series.coeffs;
        let y = self.even_extension_fft(c);
        Ok(y.iter()
            .enumerate()
            .map(|(j, v)| {
                let tail = if j % 2 == 0 { c[n] } else { -c[n] };
                0.5 * (v + c[0] + tail)
            })
            .collect())
    }

    /// `m`-th derivative at the nodes.
    pub fn differentiate(&self, samples: &[f64], m: usize) -> Result<Vec<f64>> {
        let mut series = self.forward(samples)?;
        for _ in 0..m {
            series.coeffs = cheb_derivative_coeffs(&series.coeffs);
        }
        self.inverse(&series.resized(self.n + 1))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n + 1 {
            return Err(Error::LengthMismatch {
                expected: self.n + 1,
                actual: len,
            });
        }
        Ok(())
    }
}

/// Chebyshev coefficients of the interpolant through samples at the
/// Chebyshev points `x_j = cos(j pi / n)`.
pub fn cheb_transform(samples: &[f64]) -> Result<ChebSeries> {
    if samples.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "cosine transform needs at least 3 points, got {}",
            samples.len()
        )));
    }
    ChebTransform::new(samples.len() - 1)?.forward(samples)
}

/// Values at the Chebyshev points of a series with `n + 1` coefficients.
pub fn cheb_inverse(series: &ChebSeries) -> Result<Vec<f64>> {
    ChebTransform::new(series.coeffs.len().saturating_sub(1))?.inverse(series)
}
