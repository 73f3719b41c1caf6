//! Uniform 1D spatial grid with its spectral (momentum) companion.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Uniform spatial lattice of `n_points` cells centred on the origin, together
/// with the FFT wavenumbers of the same size.
///
/// `x[j] = -length/2 + j·dx`; `k` follows the standard FFT ordering
/// (`k[0] = 0`, positive frequencies first, then negative), so `max|k| = π/dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n_points: usize,
    length: f64,
    dx: f64,
    x: Vec<f64>,
    k: Vec<f64>,
}

impl Grid {
    /// Build a grid. `n_points` must be a power of two (≥ 8) and `length`
    /// positive.
    pub fn new(n_points: usize, length: f64) -> Result<Arc<Self>> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::Config(format!(
                "n_points must be a power of two >= 8, got {n_points}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::Config(format!("length must be positive, got {length}")));
        }
        let n = n_points;
        let dx = length / n as f64;
        let x: Vec<f64> = (0..n).map(|j| -length / 2.0 + j as f64 * dx).collect();
        let dk = 2.0 * PI / length;
        let k: Vec<f64> = (0..n)
            .map(|j| {
                let m = if j <= n / 2 - 1 { j as f64 } else { j as f64 - n as f64 };
                m * dk
            })
            .collect();
        Ok(Arc::new(Self { n_points: n, length, dx, x, k }))
    }

    /// Grid used throughout the reference figures: 512 sites, total length 9.3.
    pub fn default_physics() -> Arc<Self> {
        Self::new(512, 9.3).expect("default grid parameters are valid")
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Spectral wavenumbers in FFT ordering.
    pub fn k(&self) -> &[f64] {
        &self.k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid::new(500, 9.3).is_err());
        assert!(Grid::new(4, 9.3).is_err());
        assert!(Grid::new(512, 0.0).is_err());
        assert!(Grid::new(512, -1.0).is_err());
    }

    #[test]
    fn small_grid_coordinates() {
        let g = Grid::new(8, 8.0).unwrap();
        assert_eq!(g.dx(), 1.0);
        let expect = [-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
        for (a, b) in g.x().iter().zip(expect.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn default_grid_spacing() {
        let g = Grid::default_physics();
        assert!((g.dx() - 9.3 / 512.0).abs() < 1e-15);
        assert!((g.dx() - 0.018164).abs() < 1e-6);
        let sum: f64 = (0..g.n_points()).map(|_| g.dx()).sum();
        assert!((sum - g.length()).abs() < 1e-12);
    }

    // Independent oracle for the wavenumbers: the textbook fftfreq layout.
    fn fftfreq(n: usize, d: f64) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for j in 0..=(n / 2 - 1) {
            out[j] = j as f64 / (d * n as f64);
        }
        for j in n / 2..n {
            out[j] = (j as f64 - n as f64) / (d * n as f64);
        }
        out
    }

    #[test]
    fn wavenumbers_match_fftfreq_oracle() {
        let g = Grid::new(512, 9.3).unwrap();
        let freqs = fftfreq(512, g.dx());
        for (k, f) in g.k().iter().zip(freqs.iter()) {
            assert!((k - 2.0 * PI * f).abs() < 1e-12);
        }
        assert_eq!(g.k()[0], 0.0);
        let kmax = g.k().iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
        assert!((kmax - PI / g.dx()).abs() < 1e-9);
        assert!((kmax - 172.96).abs() < 0.02);
    }
}
