//! Complex wavefunction on a [`Grid`].

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Complex amplitudes on a grid. The squared norm `Σ|ψ_j|²·dx` is the total
/// occupation probability; under bare projective measurements it decays below
/// one, so unit norm is not an invariant of this type.
#[derive(Debug, Clone)]
pub struct Wavefunction {
    grid: Arc<Grid>,
    amps: Vec<Complex64>,
}

impl Wavefunction {
    pub fn new(grid: Arc<Grid>, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.n_points() {
            return Err(Error::Usage(format!(
                "amplitude count {} does not match grid size {}",
                amps.len(),
                grid.n_points()
            )));
        }
        if !amps.iter().all(|a| a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::Usage("non-finite amplitude".into()));
        }
        Ok(Self { grid, amps })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.n_points();
        Self { grid, amps: vec![Complex64::default(); n] }
    }

    /// Sample a (possibly complex-valued) function of x on the grid.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> Complex64) -> Self {
        let amps = grid.x().iter().map(|&x| f(x)).collect();
        Self { grid, amps }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// `Σ|ψ_j|²·dx`.
    pub fn norm_sq(&self) -> f64 {
        let s: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
        s * self.grid.dx()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `|ψ_j|²` sampled on the grid.
    pub fn density(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    /// Rescale to unit norm. Zero-norm states cannot be normalised.
    pub fn renormalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DegenerateState);
        }
        self.scale(Complex64::new(1.0 / n, 0.0));
        Ok(())
    }

    /// Complex conjugate (time reversal of the state).
    pub fn conjugate(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            amps: self.amps.iter().map(|a| a.conj()).collect(),
        }
    }

    pub(crate) fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }
}
