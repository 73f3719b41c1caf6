//! Second-order Strang split-step propagation under the time-dependent
//! harmonic Hamiltonian `H(t) = p̂²/2 + (f(t)·x)²/2`.
//!
//! One step over `dt` applies a half potential kick evaluated at `f(t)`, a
//! full kinetic step, and a half potential kick evaluated at `f(t+dt)`. Both
//! factors are diagonal (in position and momentum space respectively) so the
//! step is exactly unitary; the evaluation of `f` at the step endpoints keeps
//! the scheme second order for time-dependent ramps without midpoint
//! bookkeeping.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::protocol::TrapProtocol;
use crate::spectral::FftPair;
use crate::state::Wavefunction;
use crate::units::UnitConvention;

/// Time step and unit convention for the propagator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    dt: f64,
    unit: UnitConvention,
}

impl StepParams {
    /// `dt` must be positive and at most 1e-3 (coarser steps grossly
    /// under-resolve the evolution phase `c·E·dt`).
    pub fn new(dt: f64, unit: UnitConvention) -> Result<Self> {
        if !(dt > 0.0) || dt > 1e-3 {
            return Err(Error::Config(format!("dt must be in (0, 1e-3], got {dt}")));
        }
        Ok(Self { dt, unit })
    }

    /// Reference step size 1e-5 in the per-f convention.
    pub fn default_physics() -> Self {
        Self { dt: 1e-5, unit: UnitConvention::PER_F }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn unit(&self) -> UnitConvention {
        self.unit
    }

    pub fn with_dt(self, dt: f64) -> Result<Self> {
        Self::new(dt, self.unit)
    }

    pub fn with_unit(self, unit: UnitConvention) -> Self {
        Self { dt: self.dt, unit }
    }
}

struct Stepper {
    fft: FftPair,
    /// exp(-i·c·k²/2·dt)/N for the nominal dt, with the inverse-FFT scaling
    /// folded in.
    kinetic: Vec<Complex64>,
    /// -c·x²/4: multiply by f²·dt to get the half-kick phase.
    half_kick_base: Vec<f64>,
    kinetic_dt: f64,
    prefactor: f64,
    n: usize,
}

impl Stepper {
    fn new(psi: &Wavefunction, step: StepParams) -> Self {
        let grid = psi.grid();
        let n = grid.n_points();
        let c = step.unit.prefactor();
        let mut s = Self {
            fft: FftPair::new(n),
            kinetic: Vec::new(),
            half_kick_base: grid.x().iter().map(|&x| -c * x * x / 4.0).collect(),
            kinetic_dt: f64::NAN,
            prefactor: c,
            n,
        };
        s.prepare_kinetic(psi, step.dt);
        s
    }

    fn prepare_kinetic(&mut self, psi: &Wavefunction, dt: f64) {
        if self.kinetic_dt == dt {
            return;
        }
        let c = self.prefactor;
        let inv_n = 1.0 / self.n as f64;
        self.kinetic = psi
            .grid()
            .k()
            .iter()
            .map(|&k| Complex64::from_polar(inv_n, -c * k * k / 2.0 * dt))
            .collect();
        self.kinetic_dt = dt;
    }

    fn half_kick(&self, psi: &mut Wavefunction, f: f64, dt: f64) {
        let ff_dt = f * f * dt;
        for (a, &b) in psi.amps_mut().iter_mut().zip(&self.half_kick_base) {
            let (sin, cos) = (b * ff_dt).sin_cos();
            *a *= Complex64::new(cos, sin);
        }
    }

    fn step(&mut self, psi: &mut Wavefunction, f_left: f64, f_right: f64, dt: f64) {
        self.prepare_kinetic(psi, dt);
        self.half_kick(psi, f_left, dt);
        self.fft.forward(psi.amps_mut());
        for (a, &k) in psi.amps_mut().iter_mut().zip(&self.kinetic) {
            *a *= k;
        }
        self.fft.inverse(psi.amps_mut());
        self.half_kick(psi, f_right, dt);
    }
}

/// One Strang step from stroke-local time `t` to `t + dt`.
pub fn split_step(
    psi: Wavefunction,
    protocol: &TrapProtocol,
    t: f64,
    step: StepParams,
) -> Result<Wavefunction> {
    if t + step.dt > protocol.duration() + 1e-12 {
        return Err(Error::Usage(format!(
            "step from t = {t} over dt = {} exceeds the stroke duration {}",
            step.dt,
            protocol.duration()
        )));
    }
    let mut psi = psi;
    let mut stepper = Stepper::new(&psi, step);
    stepper.step(
        &mut psi,
        protocol.frequency_at(t),
        protocol.frequency_at(t + step.dt),
        step.dt,
    );
    Ok(psi)
}

/// Time grid of a stroke: `n_full` whole steps of `dt` plus an optional
/// shortened final step landing exactly on `T`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StrokeSteps {
    pub n_full: usize,
    pub last_dt: Option<f64>,
    pub dt: f64,
    pub duration: f64,
}

impl StrokeSteps {
    pub fn plan(duration: f64, dt: f64) -> Self {
        let ratio = duration / dt;
        let rounded = ratio.round();
        if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) && rounded >= 1.0 {
            Self { n_full: rounded as usize, last_dt: None, dt, duration }
        } else {
            let n_full = ratio.floor() as usize;
            let last = duration - n_full as f64 * dt;
            Self { n_full, last_dt: Some(last), dt, duration }
        }
    }

    /// Number of sub-steps (full plus the shortened one, if any).
    pub fn n_steps(&self) -> usize {
        self.n_full + usize::from(self.last_dt.is_some())
    }

    /// Time of step boundary `i` (`0 ..= n_steps`).
    pub fn boundary(&self, i: usize) -> f64 {
        if i >= self.n_steps() {
            self.duration
        } else {
            i as f64 * self.dt
        }
    }

    /// Nearest step boundary to time `t`.
    pub fn quantize(&self, t: f64) -> usize {
        let i = (t / self.dt).round() as usize;
        i.min(self.n_steps())
    }
}

/// Propagate from `t = 0` to `t = T` with no observers.
pub fn evolve(psi: Wavefunction, protocol: &TrapProtocol, step: StepParams) -> Result<Wavefunction> {
    evolve_observed(psi, protocol, step, &[], |_, _, _| Ok(()))
}

/// Propagate from `t = 0` to `t = T`, invoking `observer(event_index, t, ψ)`
/// at the scheduled times, each quantized to the nearest step boundary.
///
/// Events that share a boundary fire in schedule order; events at `t = 0` fire
/// before the first step. `T` need not be an integer multiple of `dt`: the
/// final step is shortened to land exactly on `T`.
pub fn evolve_observed<F>(
    psi: Wavefunction,
    protocol: &TrapProtocol,
    step: StepParams,
    times: &[f64],
    mut observer: F,
) -> Result<Wavefunction>
where
    F: FnMut(usize, f64, &mut Wavefunction) -> Result<()>,
{
    let duration = protocol.duration();
    let steps = StrokeSteps::plan(duration, step.dt);

    let mut events: Vec<(usize, usize)> = Vec::with_capacity(times.len());
    for (id, &t) in times.iter().enumerate() {
        if !(-1e-12..=duration + 1e-12).contains(&t) {
            return Err(Error::Config(format!(
                "observer scheduled at t = {t} outside [0, {duration}]"
            )));
        }
        events.push((steps.quantize(t.max(0.0)), id));
    }
    events.sort_by_key(|&(boundary, id)| (boundary, id));
    let mut next_event = 0;

    let mut psi = psi;
    let mut stepper = Stepper::new(&psi, step);
    let n_steps = steps.n_steps();
    for i in 0..=n_steps {
        let t_i = steps.boundary(i);
        while next_event < events.len() && events[next_event].0 == i {
            observer(events[next_event].1, t_i, &mut psi)?;
            next_event += 1;
        }
        if i < n_steps {
            let dt_i = if i < steps.n_full { steps.dt } else { steps.last_dt.unwrap() };
            stepper.step(
                &mut psi,
                protocol.frequency_at(t_i),
                protocol.frequency_at(t_i + dt_i),
                dt_i,
            );
        }
    }

    // Spectral propagation assumes the state never reaches the periodic
    // boundary; a visible edge amplitude means the box is too small.
    debug_assert!(
        psi.amps()[0].norm() < 1e-3 && psi.amps()[psi.amps().len() - 1].norm() < 1e-3,
        "wavefunction reached the grid edge"
    );
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{eigenstate, populations};
    use crate::grid::Grid;
    use crate::ops::inner;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stationary_state_stays_put() {
        let grid = Grid::default_physics();
        let phi0 = eigenstate(&grid, 0, 1.0).unwrap();
        let protocol = TrapProtocol::constant(1.0, 1e-3).unwrap();
        let step = StepParams::default_physics();
        let out = evolve(phi0, &protocol, step).unwrap();
        let pops = populations(&out, 1.0, 4).unwrap();
        assert_abs_diff_eq!(pops.p[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn norm_is_preserved() {
        let grid = Grid::default_physics();
        let phi0 = eigenstate(&grid, 0, 1.0).unwrap();
        let before = phi0.norm();
        let protocol = TrapProtocol::linear(1.0, 5.0, 1e-3).unwrap();
        let out = evolve(phi0, &protocol, StepParams::default_physics()).unwrap();
        assert_abs_diff_eq!(out.norm(), before, epsilon = 1e-12);
    }

    #[test]
    fn phase_advances_at_ground_state_energy() {
        // per-omega units: ψ(t) = e^{-i·E₀·t}·φ₀ with E₀ = 1/2.
        let grid = Grid::default_physics();
        let phi0 = eigenstate(&grid, 0, 1.0).unwrap();
        let t_final = 1e-3;
        let protocol = TrapProtocol::constant(1.0, t_final).unwrap();
        let step = StepParams::new(1e-5, UnitConvention::PER_OMEGA).unwrap();
        let out = evolve(phi0.clone(), &protocol, step).unwrap();
        let overlap = inner(&phi0, &out);
        let expect = Complex64::from_polar(1.0, -0.5 * t_final);
        assert_abs_diff_eq!(overlap.re, expect.re, epsilon = 1e-9);
        assert_abs_diff_eq!(overlap.im, expect.im, epsilon = 1e-9);
    }

    #[test]
    fn rejects_step_beyond_duration() {
        let grid = Grid::default_physics();
        let phi0 = eigenstate(&grid, 0, 1.0).unwrap();
        let protocol = TrapProtocol::constant(1.0, 1e-5).unwrap();
        let step = StepParams::default_physics();
        assert!(split_step(phi0, &protocol, 1e-5, step).is_err());
    }

    #[test]
    fn rejects_observer_outside_stroke() {
        let grid = Grid::default_physics();
        let phi0 = eigenstate(&grid, 0, 1.0).unwrap();
        let protocol = TrapProtocol::constant(1.0, 1e-4).unwrap();
        let step = StepParams::default_physics();
        let err = evolve_observed(phi0, &protocol, step, &[2e-4], |_, _, _| Ok(()));
        assert!(err.is_err());
    }

    #[test]
    fn partial_final_step_lands_on_duration() {
        let steps = StrokeSteps::plan(1.05e-4, 1e-5);
        assert_eq!(steps.n_full, 10);
        assert!(steps.last_dt.is_some());
        assert_eq!(steps.n_steps(), 11);
        assert_abs_diff_eq!(steps.boundary(11), 1.05e-4, epsilon = 1e-18);

        let exact = StrokeSteps::plan(1e-4, 1e-5);
        assert_eq!(exact.n_full, 10);
        assert!(exact.last_dt.is_none());
    }

    #[test]
    fn flat_ramp_keeps_populations() {
        let grid = Grid::default_physics();
        let phi1 = eigenstate(&grid, 1, 1.0).unwrap();
        let protocol = TrapProtocol::constant(1.0, 2e-3).unwrap();
        let out = evolve(phi1, &protocol, StepParams::default_physics()).unwrap();
        let pops = populations(&out, 1.0, 4).unwrap();
        // phi1's truncated tail on the default box dephases at the 1e-9 level
        assert_abs_diff_eq!(pops.p[1], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn time_reversal_retraces_the_ramp() {
        let grid = Grid::default_physics();
        let phi0 = eigenstate(&grid, 0, 1.0).unwrap();
        let step = StepParams::default_physics();
        let forward = TrapProtocol::linear(1.0, 5.0, 5e-3).unwrap();
        let psi1 = evolve(phi0.clone(), &forward, step).unwrap();
        let psi2 = evolve(psi1.conjugate(), &forward.reversed(), step).unwrap();
        let fidelity = inner(&psi2.conjugate(), &phi0).norm();
        assert_abs_diff_eq!(fidelity, 1.0, epsilon = 1e-6);
    }
}
