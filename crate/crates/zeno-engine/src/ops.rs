//! Operator algebra on wavefunctions: overlaps, ladder operators, selective
//! projection and energy expectation values.
//!
//! The momentum operator is applied spectrally (`p̂ψ = IFFT(k·FFTψ)`), which is
//! exact for band-limited states and matches the accuracy of the split-step
//! propagator.

use num_complex::Complex64;

use crate::eigen;
use crate::error::{Error, Result};
use crate::spectral::FftPair;
use crate::state::Wavefunction;

/// Discretised overlap `⟨bra|ket⟩ = Σ conj(bra_j)·ket_j·dx`.
pub fn inner(bra: &Wavefunction, ket: &Wavefunction) -> Complex64 {
    assert!(
        bra.same_grid(ket),
        "inner product between states on different grids"
    );
    let s: Complex64 = bra
        .amps()
        .iter()
        .zip(ket.amps())
        .map(|(b, k)| b.conj() * k)
        .sum();
    s * bra.grid().dx()
}

/// Checked variant of [`inner`] for callers that cannot guarantee matching
/// grids statically.
pub fn try_inner(bra: &Wavefunction, ket: &Wavefunction) -> Result<Complex64> {
    if !bra.same_grid(ket) {
        return Err(Error::Usage("inner product between states on different grids".into()));
    }
    Ok(inner(bra, ket))
}

/// Raising or lowering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Raise,
    Lower,
}

/// Spatial derivative `∂ψ/∂x` computed spectrally.
fn derivative(psi: &Wavefunction) -> Vec<Complex64> {
    let grid = psi.grid();
    let n = grid.n_points();
    let mut fft = FftPair::new(n);
    let mut buf = psi.amps().to_vec();
    fft.forward(&mut buf);
    let inv_n = 1.0 / n as f64;
    let nyquist = n / 2;
    for (j, (b, &k)) in buf.iter_mut().zip(grid.k()).enumerate() {
        // The Nyquist mode has no well-defined sign; drop it from the
        // derivative as usual.
        let kk = if j == nyquist { 0.0 } else { k };
        *b *= Complex64::new(0.0, kk * inv_n);
    }
    fft.inverse(&mut buf);
    buf
}

/// Apply the generalised ladder operator at frequency `f`:
/// `a†(f) = (√f·x̂ - i·p̂/√f)/√2`, `a(f) = (√f·x̂ + i·p̂/√f)/√2`,
/// with no renormalisation (`a†|n⟩ = √(n+1)|n+1⟩` changes the norm).
pub fn apply_ladder(psi: &Wavefunction, f: f64, dir: Ladder) -> Result<Wavefunction> {
    if !(f > 0.0) {
        return Err(Error::Domain(format!("trap frequency must be positive, got {f}")));
    }
    let grid = psi.grid().clone();
    let dpsi = derivative(psi);
    let sqrt_f = f.sqrt();
    let inv_sqrt_2 = std::f64::consts::FRAC_1_SQRT_2;
    // -i·p̂ψ = -∂ψ/∂x, +i·p̂ψ = +∂ψ/∂x
    let sign = match dir {
        Ladder::Raise => -1.0,
        Ladder::Lower => 1.0,
    };
    let amps: Vec<Complex64> = grid
        .x()
        .iter()
        .zip(psi.amps().iter().zip(dpsi.iter()))
        .map(|(&x, (&a, &d))| inv_sqrt_2 * (sqrt_f * x * a + sign * d / sqrt_f))
        .collect();
    Wavefunction::new(grid, amps)
}

/// Bare projection onto the instantaneous eigenstate `|n(f)⟩`:
/// `ψ' = ⟨φₙ|ψ⟩·φₙ` with no renormalisation. The returned survival is the
/// conditional single-shot probability `|⟨φₙ|ψ⟩|²/‖ψ‖²`.
pub fn project(psi: &Wavefunction, n: usize, f: f64) -> Result<(Wavefunction, f64)> {
    let norm_sq = psi.norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::DegenerateState);
    }
    let phi = eigen::eigenstate(psi.grid(), n, f)?;
    let overlap = inner(&phi, psi);
    let mut projected = phi;
    projected.scale(overlap);
    let survival = overlap.norm_sqr() / norm_sq;
    Ok((projected, survival))
}

/// Energy expectation `⟨ψ|H(f)|ψ⟩` with `H = p̂²/2 + (f·x)²/2`, *not* divided
/// by the norm: a depleted state carries proportionally less energy.
pub fn mean_energy(psi: &Wavefunction, f: f64) -> f64 {
    let grid = psi.grid();
    let n = grid.n_points();
    let mut fft = FftPair::new(n);
    let mut buf = psi.amps().to_vec();
    fft.forward(&mut buf);
    // Parseval: Σ|ψ_j|²·dx = (dx/N)·Σ|ψ̂_k|²
    let kinetic: f64 = buf
        .iter()
        .zip(grid.k())
        .map(|(b, &k)| 0.5 * k * k * b.norm_sqr())
        .sum::<f64>()
        * grid.dx()
        / n as f64;
    let potential: f64 = psi
        .amps()
        .iter()
        .zip(grid.x())
        .map(|(a, &x)| 0.5 * (f * x) * (f * x) * a.norm_sqr())
        .sum::<f64>()
        * grid.dx();
    kinetic + potential
}
