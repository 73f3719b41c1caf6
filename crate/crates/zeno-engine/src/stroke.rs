//! A single Zeno stroke: a trap ramp with `M` selective projective
//! measurements onto the instantaneous target eigenstate.
//!
//! Measurements happen at `t_k = k·T/M` for `k = 1..M`: measuring at `t = 0`
//! would be a no-op on an eigenstate, and the final measurement landing
//! exactly on `T` makes the bare-mode norm equal to the cumulative survival
//! probability.

use crate::eigen::{self, Populations};
use crate::error::{Error, Result};
use crate::ops;
use crate::propagate::{evolve_observed, StepParams};
use crate::protocol::TrapProtocol;
use crate::state::Wavefunction;

/// What happens to the state after each projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenormMode {
    /// Apply the projector literally; the norm tracks cumulative survival.
    #[default]
    Bare,
    /// Renormalise after each projection (post-selected trajectory).
    PostSelected,
}

/// Configuration of one Zeno stroke.
#[derive(Debug, Clone)]
pub struct ZenoConfig {
    /// Level the projector targets.
    pub target: usize,
    /// Number of measurements `M`; 0 means a plain measurement-free ramp.
    pub measurements: usize,
    pub renorm: RenormMode,
    /// Steps between population/density snapshots; `None` records only the
    /// stroke endpoints.
    pub record_stride: Option<usize>,
    /// Also record `|ψ(x)|²` at each snapshot.
    pub record_density: bool,
    /// Level cutoff for recorded populations.
    pub n_max: usize,
}

impl ZenoConfig {
    pub fn new(target: usize, measurements: usize) -> Self {
        Self {
            target,
            measurements,
            renorm: RenormMode::Bare,
            record_stride: None,
            record_density: false,
            n_max: eigen::DEFAULT_N_MAX,
        }
    }
}

/// Populations snapshot in the instantaneous basis `f(t)`.
#[derive(Debug, Clone)]
pub struct PopulationSample {
    pub t: f64,
    pub f: f64,
    pub populations: Populations,
}

/// `|ψ(x)|²` snapshot.
#[derive(Debug, Clone)]
pub struct DensitySample {
    pub t: f64,
    pub density: Vec<f64>,
}

/// Outcome of a completed stroke.
#[derive(Debug, Clone)]
pub struct StrokeResult {
    pub psi_final: Wavefunction,
    /// Product of per-measurement conditional survival probabilities.
    pub survival: f64,
    /// `⟨H(f_end)⟩(end) - ⟨H(f_start)⟩(start)`.
    pub work: f64,
    pub population_trace: Vec<PopulationSample>,
    pub density_trace: Vec<DensitySample>,
    /// Energy removed by the projections (diagnostic; not part of Q or W).
    pub back_action_energy: f64,
}

impl StrokeResult {
    /// Cumulative survival probability of the stroke.
    pub fn survival_of(&self) -> f64 {
        self.survival
    }
}

/// Conditional survival below this marks an orthogonal hit: the projected
/// state is numerically pure roundoff and the trajectory is over.
pub const ORTHOGONAL_SURVIVAL_FLOOR: f64 = 1e-12;

/// Record carried by a degenerate-trajectory abort.
#[derive(Debug, Clone)]
pub struct PartialStroke {
    pub survival: f64,
    pub measurements_done: usize,
    pub measurements_scheduled: usize,
    pub population_trace: Vec<PopulationSample>,
    pub density_trace: Vec<DensitySample>,
}

/// Run one Zeno stroke.
///
/// Alternates evolution segments of duration `T/M` with projections onto the
/// instantaneous eigenstate `|target(f(t_k))⟩`. In [`RenormMode::Bare`] the
/// projected, unnormalised state continues; in [`RenormMode::PostSelected`]
/// the state is renormalised after every projection while the conditional
/// survival product accumulates separately.
pub fn zeno_stroke(
    psi: Wavefunction,
    protocol: &TrapProtocol,
    cfg: &ZenoConfig,
    step: StepParams,
) -> Result<StrokeResult> {
    // The target must be resolved across the whole ramp; the endpoints are
    // the extremes of the frequency range.
    eigen::eigenstate(psi.grid(), cfg.target, protocol.f_start())?;
    eigen::eigenstate(psi.grid(), cfg.target, protocol.f_end())?;

    let duration = protocol.duration();
    let m = cfg.measurements;
    let tau = duration / m.max(1) as f64;

    // Event schedule: measurement events first (ids 0..m), then snapshot
    // events, so a snapshot sharing a boundary with a measurement sees the
    // post-projection state.
    let mut times: Vec<f64> = (1..=m).map(|k| k as f64 * tau).collect();
    let record_from = times.len();
    let mut record_times: Vec<f64> = Vec::new();
    if let Some(stride) = cfg.record_stride {
        let stride_t = stride.max(1) as f64 * step.dt();
        let mut t = 0.0;
        while t < duration - 1e-15 {
            record_times.push(t);
            t += stride_t;
        }
    } else {
        record_times.push(0.0);
    }
    record_times.push(duration);
    times.extend_from_slice(&record_times);

    let energy_start = ops::mean_energy(&psi, protocol.f_start());

    let mut survival = 1.0f64;
    let mut measurements_done = 0usize;
    let mut back_action = 0.0f64;
    let mut population_trace: Vec<PopulationSample> = Vec::new();
    let mut density_trace: Vec<DensitySample> = Vec::new();

    let outcome = evolve_observed(psi, protocol, step, &times, |id, t, psi| {
        let f = protocol.frequency_at(t);
        if id < record_from {
            let e_before = ops::mean_energy(psi, f);
            let (projected, s) = ops::project(psi, cfg.target, f)?;
            *psi = projected;
            survival *= s;
            measurements_done += 1;
            back_action += e_before - ops::mean_energy(psi, f);
            if s < ORTHOGONAL_SURVIVAL_FLOOR {
                survival = 0.0;
                return Err(Error::DegenerateState);
            }
            if cfg.renorm == RenormMode::PostSelected {
                psi.renormalize()?;
            }
        } else {
            population_trace.push(PopulationSample {
                t,
                f,
                populations: eigen::populations(psi, f, cfg.n_max)?,
            });
            if cfg.record_density {
                density_trace.push(DensitySample { t, density: psi.density() });
            }
        }
        Ok(())
    });

    match outcome {
        Ok(psi_final) => {
            let work = ops::mean_energy(&psi_final, protocol.f_end()) - energy_start;
            Ok(StrokeResult {
                psi_final,
                survival,
                work,
                population_trace,
                density_trace,
                back_action_energy: back_action,
            })
        }
        Err(Error::DegenerateState) => {
            Err(Error::DegenerateTrajectory(Box::new(PartialStroke {
                survival,
                measurements_done,
                measurements_scheduled: m,
                population_trace,
                density_trace,
            })))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::ops::inner;
    use approx::assert_abs_diff_eq;

    fn step() -> StepParams {
        StepParams::default_physics()
    }

    #[test]
    fn flat_ramp_is_inert() {
        let grid = Grid::default_physics();
        let phi0 = eigen::eigenstate(&grid, 0, 1.0).unwrap();
        let protocol = TrapProtocol::constant(1.0, 1e-3).unwrap();
        let cfg = ZenoConfig::new(0, 7);
        let result = zeno_stroke(phi0.clone(), &protocol, &cfg, step()).unwrap();
        assert_abs_diff_eq!(result.survival, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(result.work, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(inner(&phi0, &result.psi_final).norm(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn flat_ramp_independent_of_measurement_count() {
        let grid = Grid::default_physics();
        let phi1 = eigen::eigenstate(&grid, 1, 1.0).unwrap();
        let protocol = TrapProtocol::constant(1.0, 1e-3).unwrap();
        for m in [0, 1, 10] {
            let cfg = ZenoConfig::new(1, m);
            let result = zeno_stroke(phi1.clone(), &protocol, &cfg, step()).unwrap();
            assert_abs_diff_eq!(result.survival, 1.0, epsilon = 1e-8);
            assert!(inner(&phi1, &result.psi_final).norm() > 1.0 - 1e-8);
        }
    }

    #[test]
    fn bare_norm_equals_survival() {
        let grid = Grid::default_physics();
        let phi1 = eigen::eigenstate(&grid, 1, 1.0).unwrap();
        let protocol = TrapProtocol::linear(1.0, 2.0, 5e-3).unwrap();
        let cfg = ZenoConfig::new(1, 5);
        let result = zeno_stroke(phi1, &protocol, &cfg, step()).unwrap();
        assert!(result.survival < 1.0);
        assert_abs_diff_eq!(result.psi_final.norm_sq(), result.survival, epsilon = 1e-9);
    }

    #[test]
    fn post_selected_keeps_unit_norm() {
        let grid = Grid::default_physics();
        let phi1 = eigen::eigenstate(&grid, 1, 1.0).unwrap();
        let protocol = TrapProtocol::linear(1.0, 2.0, 5e-3).unwrap();
        let mut cfg = ZenoConfig::new(1, 5);
        cfg.renorm = RenormMode::PostSelected;
        let result = zeno_stroke(phi1, &protocol, &cfg, step()).unwrap();
        assert!(result.survival < 1.0);
        assert_abs_diff_eq!(result.psi_final.norm_sq(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn degenerate_trajectory_aborts_with_record() {
        let grid = Grid::default_physics();
        // Target level 1 while sitting in level 0 of a static trap: the first
        // projection annihilates the state.
        let phi0 = eigen::eigenstate(&grid, 0, 1.0).unwrap();
        let protocol = TrapProtocol::constant(1.0, 1e-3).unwrap();
        let cfg = ZenoConfig::new(1, 4);
        match zeno_stroke(phi0, &protocol, &cfg, step()) {
            Err(Error::DegenerateTrajectory(partial)) => {
                assert_eq!(partial.measurements_done, 1);
                assert_eq!(partial.measurements_scheduled, 4);
                assert_abs_diff_eq!(partial.survival, 0.0);
            }
            other => panic!("expected degenerate trajectory, got {other:?}"),
        }
    }

    #[test]
    fn records_snapshots_at_stride_boundaries() {
        let grid = Grid::default_physics();
        let phi0 = eigen::eigenstate(&grid, 0, 1.0).unwrap();
        let protocol = TrapProtocol::linear(1.0, 2.0, 1e-3).unwrap();
        let mut cfg = ZenoConfig::new(0, 2);
        cfg.record_stride = Some(25);
        cfg.record_density = true;
        let result = zeno_stroke(phi0, &protocol, &cfg, step()).unwrap();
        // 100 steps / 25 + final boundary
        assert_eq!(result.population_trace.len(), 5);
        assert_eq!(result.density_trace.len(), 5);
        assert_abs_diff_eq!(result.population_trace[0].t, 0.0);
        assert_abs_diff_eq!(result.population_trace[4].t, 1e-3);
        assert_eq!(result.density_trace[0].density.len(), 512);
    }
}
