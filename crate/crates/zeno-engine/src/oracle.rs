//! Independent eigenbasis integrator used to cross-validate the split-step
//! propagator.
//!
//! Expanding `ψ(t) = Σₙ cₙ(t)·φₙ(f(t))` in the instantaneous eigenbasis of the
//! ramped harmonic Hamiltonian gives the coupled amplitude equations
//!
//! ```text
//! ċₘ = -i·c·f(t)·(m + 1/2)·cₘ
//!      - (ḟ/4f)·[√((m+1)(m+2))·c_{m+2} - √(m(m-1))·c_{m-2}]
//! ```
//!
//! (the frequency scaling of the eigenstates couples only levels of equal
//! parity, two apart). The system is truncated at `n_max` and integrated with
//! a classical fourth-order Runge-Kutta scheme. Nothing here touches the grid
//! or the FFT, so agreement with the split-step route is a genuine
//! cross-method check.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::propagate::{StepParams, StrokeSteps};
use crate::protocol::TrapProtocol;

/// Largest supported truncation level.
pub const MAX_LEVEL: usize = 32;

/// Residual population allowed in the two topmost levels before the
/// truncation is declared invalid.
pub const TRUNCATION_TOL: f64 = 1e-6;

fn rhs(
    out: &mut [Complex64],
    amps: &[Complex64],
    f: f64,
    f_dot: f64,
    prefactor: f64,
) {
    let n = amps.len();
    let g = f_dot / (4.0 * f);
    for m in 0..n {
        let e_m = f * (m as f64 + 0.5);
        let mut d = Complex64::new(0.0, -prefactor * e_m) * amps[m];
        if m + 2 < n {
            let up = (((m + 1) * (m + 2)) as f64).sqrt();
            d -= g * up * amps[m + 2];
        }
        if m >= 2 {
            let down = ((m * (m - 1)) as f64).sqrt();
            d += g * down * amps[m - 2];
        }
        out[m] = d;
    }
}

/// Integrate the truncated amplitude equations from `t = 0` to the end of the
/// protocol. `initial` holds `c₀..c_{n_max}`.
pub fn evolve_eigenbasis(
    initial: &[Complex64],
    protocol: &TrapProtocol,
    step: StepParams,
    n_max: usize,
) -> Result<Vec<Complex64>> {
    if n_max > MAX_LEVEL {
        return Err(Error::Config(format!("n_max must be at most {MAX_LEVEL}, got {n_max}")));
    }
    if initial.len() != n_max + 1 {
        return Err(Error::Usage(format!(
            "initial amplitudes must have length n_max + 1 = {}, got {}",
            n_max + 1,
            initial.len()
        )));
    }

    let n = n_max + 1;
    let c = step.unit().prefactor();
    let f_dot = protocol.f_dot();
    let steps = StrokeSteps::plan(protocol.duration(), step.dt());

    let mut amps = initial.to_vec();
    let mut k1 = vec![Complex64::default(); n];
    let mut k2 = vec![Complex64::default(); n];
    let mut k3 = vec![Complex64::default(); n];
    let mut k4 = vec![Complex64::default(); n];
    let mut tmp = vec![Complex64::default(); n];

    let n_steps = steps.n_steps();
    for i in 0..n_steps {
        let t = steps.boundary(i);
        let dt = if i < steps.n_full { steps.dt } else { steps.last_dt.unwrap() };
        let f0 = protocol.frequency_at(t);
        let fm = protocol.frequency_at(t + dt / 2.0);
        let f1 = protocol.frequency_at(t + dt);

        rhs(&mut k1, &amps, f0, f_dot, c);
        for j in 0..n {
            tmp[j] = amps[j] + 0.5 * dt * k1[j];
        }
        rhs(&mut k2, &tmp, fm, f_dot, c);
        for j in 0..n {
            tmp[j] = amps[j] + 0.5 * dt * k2[j];
        }
        rhs(&mut k3, &tmp, fm, f_dot, c);
        for j in 0..n {
            tmp[j] = amps[j] + dt * k3[j];
        }
        rhs(&mut k4, &tmp, f1, f_dot, c);
        for j in 0..n {
            amps[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }

    let residual = amps[n - 1].norm_sqr() + if n >= 2 { amps[n - 2].norm_sqr() } else { 0.0 };
    if residual > TRUNCATION_TOL {
        return Err(Error::OracleInvalid { residual });
    }
    Ok(amps)
}

/// Amplitude vector for a pure level `n`.
pub fn level_amplitudes(n: usize, n_max: usize) -> Vec<Complex64> {
    let mut amps = vec![Complex64::default(); n_max + 1];
    amps[n] = Complex64::new(1.0, 0.0);
    amps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::UnitConvention;
    use approx::assert_abs_diff_eq;

    #[test]
    fn static_trap_accumulates_exact_phases() {
        let protocol = TrapProtocol::constant(1.0, 1e-3).unwrap();
        let step = StepParams::new(1e-5, UnitConvention::PER_OMEGA).unwrap();
        let mut initial = level_amplitudes(0, 4);
        initial[2] = Complex64::new(0.6, 0.0);
        initial[0] = Complex64::new(0.8, 0.0);
        let out = evolve_eigenbasis(&initial, &protocol, step, 4).unwrap();
        for (m, (a0, a)) in initial.iter().zip(out.iter()).enumerate() {
            let expect = a0 * Complex64::from_polar(1.0, -(m as f64 + 0.5) * 1e-3);
            assert_abs_diff_eq!(a.re, expect.re, epsilon = 1e-10);
            assert_abs_diff_eq!(a.im, expect.im, epsilon = 1e-10);
        }
    }

    #[test]
    fn adiabatic_limit_keeps_the_ground_state() {
        // K = 2 over T = 10 is deeply adiabatic: P₀(T) >= 1 - 1e-4.
        let protocol = TrapProtocol::linear(1.0, 2.0, 10.0).unwrap();
        let step = StepParams::new(1e-3, UnitConvention::PER_F).unwrap();
        let initial = level_amplitudes(0, 16);
        let out = evolve_eigenbasis(&initial, &protocol, step, 16).unwrap();
        assert!(out[0].norm_sqr() >= 1.0 - 1e-4);
    }

    #[test]
    fn rejects_oversized_truncation() {
        let protocol = TrapProtocol::constant(1.0, 1e-3).unwrap();
        let step = StepParams::default_physics();
        let initial = level_amplitudes(0, 40);
        assert!(evolve_eigenbasis(&initial, &protocol, step, 40).is_err());
    }

    #[test]
    fn flags_truncation_overflow() {
        // A violent quench from level 30 immediately spills into the top of
        // the truncated ladder.
        let protocol = TrapProtocol::linear(1.0, 10.0, 1e-3).unwrap();
        let step = StepParams::default_physics();
        let initial = level_amplitudes(30, 32);
        match evolve_eigenbasis(&initial, &protocol, step, 32) {
            Err(Error::OracleInvalid { .. }) => {}
            other => panic!("expected oracle-invalid, got {other:?}"),
        }
    }
}
