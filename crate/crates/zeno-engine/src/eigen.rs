//! Harmonic-oscillator eigenstates on the grid.
//!
//! The eigenstate of `H = p²/2 + (f·x)²/2` at level `n` is
//! `φₙ(x; f) = f^{1/4}·uₙ(√f·x)` where `uₙ` are the unit-frequency Hermite
//! functions. The `uₙ` are generated by the three-term recurrence on
//! *normalised* Hermite functions,
//!
//! ```text
//! u₀(ξ) = π^{-1/4} e^{-ξ²/2}
//! u₁(ξ) = √2 ξ u₀(ξ)
//! uₙ₊₁(ξ) = √(2/(n+1)) ξ uₙ(ξ) - √(n/(n+1)) uₙ₋₁(ξ)
//! ```
//!
//! which avoids the factorial overflow of the polynomial form and is stable
//! far beyond the level cutoffs used here.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::ops;
use crate::state::Wavefunction;

/// Discretisation tolerance: an eigenstate whose on-grid norm deviates from 1
/// by more than this does not fit the box and is rejected.
pub const RESOLUTION_TOL: f64 = 1e-6;

/// Default level cutoff for population accounting.
pub const DEFAULT_N_MAX: usize = 32;

fn check_f(f: f64) -> Result<()> {
    if !(f > 0.0) || !f.is_finite() {
        return Err(Error::Domain(format!("trap frequency must be positive, got {f}")));
    }
    Ok(())
}

/// Real-valued Hermite-function ladder evaluated at `ξ = √f·x` on the grid,
/// scaled by `f^{1/4}`. Returns levels `0..=n`.
fn hermite_ladder(grid: &Grid, n: usize, f: f64) -> Vec<Vec<f64>> {
    let sqrt_f = f.sqrt();
    let scale = f.powf(0.25) / std::f64::consts::PI.powf(0.25);
    let mut levels: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let u0: Vec<f64> = grid
        .x()
        .iter()
        .map(|&x| {
            let xi = sqrt_f * x;
            scale * (-xi * xi / 2.0).exp()
        })
        .collect();
    levels.push(u0);
    if n >= 1 {
        let u1: Vec<f64> = grid
            .x()
            .iter()
            .zip(levels[0].iter())
            .map(|(&x, &u)| std::f64::consts::SQRT_2 * (sqrt_f * x) * u)
            .collect();
        levels.push(u1);
    }
    for m in 1..n {
        let a = (2.0 / (m as f64 + 1.0)).sqrt();
        let b = (m as f64 / (m as f64 + 1.0)).sqrt();
        let next: Vec<f64> = grid
            .x()
            .iter()
            .enumerate()
            .map(|(j, &x)| a * (sqrt_f * x) * levels[m][j] - b * levels[m - 1][j])
            .collect();
        levels.push(next);
    }
    levels
}

fn grid_norm_sq(grid: &Grid, u: &[f64]) -> f64 {
    u.iter().map(|v| v * v).sum::<f64>() * grid.dx()
}

/// Discretised eigenstate `φₙ(x; f)`, renormalised to unit norm on the grid.
///
/// Fails with [`Error::Resolution`] when the state does not fit the box to
/// within [`RESOLUTION_TOL`] before renormalisation.
pub fn eigenstate(grid: &Arc<Grid>, n: usize, f: f64) -> Result<Wavefunction> {
    check_f(f)?;
    let levels = hermite_ladder(grid, n, f);
    eigenstate_from_ladder(grid, n, f, &levels[n])
}

fn eigenstate_from_ladder(grid: &Arc<Grid>, n: usize, f: f64, u: &[f64]) -> Result<Wavefunction> {
    let norm_sq = grid_norm_sq(grid, u);
    let norm_dev = (norm_sq.sqrt() - 1.0).abs();
    if norm_dev > RESOLUTION_TOL {
        return Err(Error::Resolution { n, f, norm_dev });
    }
    let inv = 1.0 / norm_sq.sqrt();
    let amps = u.iter().map(|&v| Complex64::new(v * inv, 0.0)).collect();
    Wavefunction::new(grid.clone(), amps)
}

/// Level populations of `ψ` in the instantaneous eigenbasis at frequency `f`.
///
/// Populations use the absolute convention: `Pₙ = |⟨φₙ|ψ⟩|²` with no division
/// by `‖ψ‖²`, so a projector-depleted state reports fractional populations.
#[derive(Debug, Clone)]
pub struct Populations {
    /// `p[n] = Pₙ` for `n = 0..=n_max`. Levels beyond the grid's resolution
    /// window are left at zero and accounted for in `residual`.
    pub p: Vec<f64>,
    /// `‖ψ‖² - Σ Pₙ`: weight outside the computed levels.
    pub residual: f64,
    /// Number of levels actually resolved on the grid (`<= n_max + 1`).
    pub resolved: usize,
}

impl Populations {
    /// `Σ Eₙ(f)·Pₙ` over the resolved levels.
    pub fn energy(&self, f: f64) -> f64 {
        self.p
            .iter()
            .enumerate()
            .map(|(n, &p)| f * (n as f64 + 0.5) * p)
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }
}

/// Compute `P₀..P_{n_max}` plus the residual weight.
///
/// Levels are resolved in ascending order; the first level that no longer fits
/// the grid truncates the window (its weight lands in `residual`).
pub fn populations(psi: &Wavefunction, f: f64, n_max: usize) -> Result<Populations> {
    check_f(f)?;
    if n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let grid = psi.grid();
    let levels = hermite_ladder(grid, n_max, f);
    let mut p = vec![0.0; n_max + 1];
    let mut resolved = 0;
    for (n, u) in levels.iter().enumerate() {
        match eigenstate_from_ladder(grid, n, f, u) {
            Ok(phi) => {
                p[n] = ops::inner(&phi, psi).norm_sqr();
                resolved = n + 1;
            }
            Err(Error::Resolution { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let residual = psi.norm_sq() - p.iter().sum::<f64>();
    Ok(Populations { p, residual, resolved })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn big_grid() -> Arc<Grid> {
        // Wide enough to resolve n <= 10 at f = 1 (turning point + tails).
        Grid::new(512, 16.0).unwrap()
    }

    #[test]
    fn ground_state_variance() {
        let grid = Grid::default_physics();
        let phi0 = eigenstate(&grid, 0, 1.0).unwrap();
        let x2: f64 = grid
            .x()
            .iter()
            .zip(phi0.amps())
            .map(|(&x, a)| x * x * a.norm_sqr())
            .sum::<f64>()
            * grid.dx();
        // Tail truncation on the 9.3-length box costs ~1e-9.
        assert_abs_diff_eq!(x2, 0.5, epsilon = 5e-9);
    }

    #[test]
    fn excited_state_variance_scales_with_f() {
        // <n|x²|n> = (2n+1)/(2f), checked by grid quadrature.
        let grid = Grid::default_physics();
        let phi = eigenstate(&grid, 1, 5.0).unwrap();
        let x2: f64 = grid
            .x()
            .iter()
            .zip(phi.amps())
            .map(|(&x, a)| x * x * a.norm_sqr())
            .sum::<f64>()
            * grid.dx();
        assert_abs_diff_eq!(x2, 3.0 / 10.0, epsilon = 1e-9);
    }

    #[test]
    fn orthogonality() {
        // 1e-10 orthogonality needs a box that resolves both tails; the
        // default 9.3 box leaves ~1e-9 of phi2's mass outside.
        let grid = big_grid();
        let phi0 = eigenstate(&grid, 0, 1.0).unwrap();
        let phi2 = eigenstate(&grid, 2, 1.0).unwrap();
        assert!(ops::inner(&phi0, &phi2).norm() <= 1e-10);
        let small = Grid::default_physics();
        let a = eigenstate(&small, 0, 1.0).unwrap();
        let b = eigenstate(&small, 2, 1.0).unwrap();
        assert!(ops::inner(&a, &b).norm() <= 5e-9);
    }

    #[test]
    fn under_resolved_state_errors() {
        let grid = Grid::default_physics();
        // Level 20 at f = 1 has its turning point far outside the box.
        match eigenstate(&grid, 20, 1.0) {
            Err(Error::Resolution { n: 20, .. }) => {}
            other => panic!("expected resolution error, got {other:?}"),
        }
    }

    #[test]
    fn populations_of_pure_eigenstate() {
        let grid = big_grid();
        let phi0 = eigenstate(&grid, 0, 1.0).unwrap();
        let pops = populations(&phi0, 1.0, 8).unwrap();
        assert_abs_diff_eq!(pops.p[0], 1.0, epsilon = 1e-12);
        for n in 1..=8 {
            assert!(pops.p[n] <= 1e-12);
        }
        assert!(pops.residual >= -1e-9);
        assert!(pops.residual.abs() < 1e-9);
    }

    #[test]
    fn populations_scale_quadratically() {
        let grid = big_grid();
        let mut phi1 = eigenstate(&grid, 1, 2.0).unwrap();
        phi1.scale(Complex64::new(0.6, 0.0));
        let pops = populations(&phi1, 2.0, 8).unwrap();
        assert_abs_diff_eq!(pops.p[1], 0.36, epsilon = 1e-12);
    }

    #[test]
    fn frequency_quench_populations() {
        // Ground state of f=1 analysed at f=4: P₀ = 2√(f₁f₂)/(f₁+f₂) = 0.8,
        // P₂ = P₀·((f₂-f₁)/(f₁+f₂))²·1/2 = 0.144, odd levels vanish by parity.
        let grid = big_grid();
        let phi0 = eigenstate(&grid, 0, 1.0).unwrap();
        let pops = populations(&phi0, 4.0, 16).unwrap();
        assert_abs_diff_eq!(pops.p[0], 0.8, epsilon = 1e-9);
        assert_abs_diff_eq!(pops.p[2], 0.144, epsilon = 1e-9);
        for n in (1..16).step_by(2) {
            assert!(pops.p[n] < 1e-12, "odd level {n} should be empty");
        }
        assert!(pops.total() <= 1.0 + 1e-9);
    }

    #[test]
    fn quench_population_matches_quadrature_oracle() {
        // Independent oracle: closed-form Gaussians integrated on the grid.
        let grid = big_grid();
        let f1 = 1.0;
        let f2 = 4.0;
        let phi0_f1: Vec<f64> = grid
            .x()
            .iter()
            .map(|&x| (f1 / std::f64::consts::PI).powf(0.25) * (-f1 * x * x / 2.0).exp())
            .collect();
        let phi0_f2: Vec<f64> = grid
            .x()
            .iter()
            .map(|&x| (f2 / std::f64::consts::PI).powf(0.25) * (-f2 * x * x / 2.0).exp())
            .collect();
        let overlap: f64 = phi0_f1
            .iter()
            .zip(phi0_f2.iter())
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * grid.dx();
        assert_abs_diff_eq!(overlap * overlap, 0.8, epsilon = 1e-9);
    }
}
