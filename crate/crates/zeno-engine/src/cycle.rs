//! Otto-type thermodynamic cycles built from Zeno strokes and instantaneous
//! ladder-operator strokes.
//!
//! Heat-pump cycle (inverse Otto): `A→D` raise at `f = 1` (absorb a photon of
//! energy 1), `D→C` Zeno compression targeting level 1, `C→B` lower at `f = K`
//! (emit a photon of energy K), `B→A` Zeno expansion targeting level 0.
//!
//! Engine cycle (Otto): `A→B` Zeno compression targeting level 0, `B→C` raise
//! at `f = K` (absorb heat), `C→D` Zeno expansion targeting level 1, `D→A`
//! lower at `f = 1` (release heat).
//!
//! Heat is accounted from endpoint populations, `Q = Σₙ Eₙ·ΔPₙ`, in the
//! absolute (unrenormalised) convention; work is attributed to the Zeno
//! strokes through endpoint energy expectations.

use std::sync::Arc;

use crate::eigen::{self, Populations};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::ops::{self, Ladder};
use crate::propagate::StepParams;
use crate::protocol::TrapProtocol;
use crate::state::Wavefunction;
use crate::stroke::{zeno_stroke, DensitySample, PopulationSample, RenormMode, ZenoConfig};

/// Which machine the cycle realises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MachineMode {
    /// Inverse Otto cycle pumping heat from `f = 1` to `f = K`.
    #[default]
    HeatPump,
    /// Otto engine extracting work between the two frequencies.
    Engine,
}

/// Full cycle configuration.
#[derive(Debug, Clone)]
pub struct CycleParams {
    /// Compression ratio `K > 1`.
    pub compression: f64,
    /// Duration of each Zeno stroke.
    pub stroke_duration: f64,
    /// Measurements per Zeno stroke.
    pub measurements: usize,
    pub step: StepParams,
    pub n_cycles: usize,
    pub mode: MachineMode,
    pub renorm: RenormMode,
    /// Renormalise after each ladder stroke (off by default: the π-pulse is
    /// modelled as the literal operator application).
    pub ladder_renorm: bool,
    pub n_max: usize,
    pub record_stride: Option<usize>,
    pub record_density: bool,
}

impl CycleParams {
    pub fn new(compression: f64, stroke_duration: f64, measurements: usize, step: StepParams) -> Result<Self> {
        let params = Self {
            compression,
            stroke_duration,
            measurements,
            step,
            n_cycles: 1,
            mode: MachineMode::HeatPump,
            renorm: RenormMode::Bare,
            ladder_renorm: false,
            n_max: eigen::DEFAULT_N_MAX,
            record_stride: None,
            record_density: false,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.compression > 1.0) {
            return Err(Error::Config(format!("K must exceed 1, got {}", self.compression)));
        }
        if !(self.stroke_duration > 0.0) {
            return Err(Error::Config(format!(
                "stroke duration must be positive, got {}",
                self.stroke_duration
            )));
        }
        if self.n_cycles == 0 {
            return Err(Error::Config("n_cycles must be at least 1".into()));
        }
        Ok(())
    }

    fn zeno_config(&self, target: usize) -> ZenoConfig {
        ZenoConfig {
            target,
            measurements: self.measurements,
            renorm: self.renorm,
            record_stride: self.record_stride,
            record_density: self.record_density,
            n_max: self.n_max,
        }
    }
}

/// `M = round(Ω·T)`, at least one measurement.
pub fn measurements_from_omega(omega: f64, stroke_duration: f64) -> usize {
    ((omega * stroke_duration).round() as isize).max(1) as usize
}

/// Per-cycle thermodynamic ledger.
#[derive(Debug, Clone)]
pub struct CycleRecord {
    /// Cycle number, starting at 1.
    pub index: usize,
    pub q_in: f64,
    pub q_out: f64,
    /// Work of the up-ramp (compression) Zeno stroke.
    pub work_compress: f64,
    /// Work of the down-ramp (expansion) Zeno stroke.
    pub work_expand: f64,
    /// ξ for the heat pump, η for the engine; `None` when the denominator
    /// vanished and the cycle is excluded from averages.
    pub figure_of_merit: Option<f64>,
    /// Cumulative survival of the two Zeno strokes, in stroke order.
    pub survival: (f64, f64),
    pub pops_a: Populations,
    pub pops_b: Populations,
    pub pops_c: Populations,
    pub pops_d: Populations,
    pub norm_end: f64,
    /// Energy removed by projections over both strokes (diagnostic).
    pub back_action_energy: f64,
    /// `Q_in + Q_out + W_net - ΔE` over the cycle; first-law closure check.
    pub closure_residual: f64,
    /// Population snapshots with cycle-local times in `[0, 2T]`.
    pub population_trace: Vec<PopulationSample>,
    pub density_trace: Vec<DensitySample>,
}

const DENOMINATOR_FLOOR: f64 = 1e-12;

fn shift_traces(
    record: &mut CycleRecord,
    pops: Vec<PopulationSample>,
    dens: Vec<DensitySample>,
    offset: f64,
) {
    record.population_trace.extend(pops.into_iter().map(|mut s| {
        s.t += offset;
        s
    }));
    record.density_trace.extend(dens.into_iter().map(|mut s| {
        s.t += offset;
        s
    }));
}

fn apply_ladder_stroke(
    psi: &Wavefunction,
    f: f64,
    dir: Ladder,
    renorm: bool,
) -> Result<Wavefunction> {
    let mut out = ops::apply_ladder(psi, f, dir)?;
    if renorm {
        out.renormalize()?;
    }
    Ok(out)
}

/// One heat-pump cycle starting (and ending) at the point `A` of Fig-style
/// diagrams: trap at `f = 1`, working fluid near the ground state.
pub fn heat_pump_cycle(
    psi: Wavefunction,
    params: &CycleParams,
) -> Result<(Wavefunction, CycleRecord)> {
    params.validate()?;
    let k = params.compression;
    let t = params.stroke_duration;
    let n_max = params.n_max;

    let energy_a = ops::mean_energy(&psi, 1.0);
    let pops_a = eigen::populations(&psi, 1.0, n_max)?;

    // A→D: absorb a photon of energy 1.
    let psi = apply_ladder_stroke(&psi, 1.0, Ladder::Raise, params.ladder_renorm)?;
    let pops_d = eigen::populations(&psi, 1.0, n_max)?;
    let q_in = pops_d.energy(1.0) - pops_a.energy(1.0);

    // D→C: Zeno compression in level 1.
    let up = TrapProtocol::linear(1.0, k, t)?;
    let stroke1 = zeno_stroke(psi, &up, &params.zeno_config(1), params.step)?;
    let pops_c = eigen::populations(&stroke1.psi_final, k, n_max)?;

    // C→B: emit a photon of energy K.
    let psi = apply_ladder_stroke(&stroke1.psi_final, k, Ladder::Lower, params.ladder_renorm)?;
    let pops_b = eigen::populations(&psi, k, n_max)?;
    let q_out = pops_b.energy(k) - pops_c.energy(k);

    // B→A: Zeno expansion in level 0.
    let down = TrapProtocol::linear(k, 1.0, t)?;
    let stroke2 = zeno_stroke(psi, &down, &params.zeno_config(0), params.step)?;

    let energy_end = ops::mean_energy(&stroke2.psi_final, 1.0);
    let w_net = stroke1.work + stroke2.work;
    let denominator = q_out + q_in;
    let figure = (denominator.abs() >= DENOMINATOR_FLOOR).then(|| q_out / denominator);

    let mut record = CycleRecord {
        index: 0,
        q_in,
        q_out,
        work_compress: stroke1.work,
        work_expand: stroke2.work,
        figure_of_merit: figure,
        survival: (stroke1.survival, stroke2.survival),
        pops_a,
        pops_b,
        pops_c,
        pops_d,
        norm_end: stroke2.psi_final.norm_sq(),
        back_action_energy: stroke1.back_action_energy + stroke2.back_action_energy,
        closure_residual: q_in + q_out + w_net - (energy_end - energy_a),
        population_trace: Vec::new(),
        density_trace: Vec::new(),
    };
    shift_traces(&mut record, stroke1.population_trace, stroke1.density_trace, 0.0);
    shift_traces(&mut record, stroke2.population_trace, stroke2.density_trace, t);
    Ok((stroke2.psi_final, record))
}

/// One engine cycle starting at `A`: trap at `f = 1`, fluid near the ground
/// state.
pub fn engine_cycle(
    psi: Wavefunction,
    params: &CycleParams,
) -> Result<(Wavefunction, CycleRecord)> {
    params.validate()?;
    let k = params.compression;
    let t = params.stroke_duration;
    let n_max = params.n_max;

    let energy_a = ops::mean_energy(&psi, 1.0);
    let pops_a = eigen::populations(&psi, 1.0, n_max)?;

    // A→B: Zeno compression in level 0.
    let up = TrapProtocol::linear(1.0, k, t)?;
    let stroke1 = zeno_stroke(psi, &up, &params.zeno_config(0), params.step)?;
    let pops_b = eigen::populations(&stroke1.psi_final, k, n_max)?;

    // B→C: absorb heat from the hot side.
    let psi = apply_ladder_stroke(&stroke1.psi_final, k, Ladder::Raise, params.ladder_renorm)?;
    let pops_c = eigen::populations(&psi, k, n_max)?;
    let q_in = pops_c.energy(k) - pops_b.energy(k);

    // C→D: Zeno expansion in level 1.
    let down = TrapProtocol::linear(k, 1.0, t)?;
    let stroke2 = zeno_stroke(psi, &down, &params.zeno_config(1), params.step)?;
    let pops_d = eigen::populations(&stroke2.psi_final, 1.0, n_max)?;

    // D→A: release heat to the cold side.
    let psi = apply_ladder_stroke(&stroke2.psi_final, 1.0, Ladder::Lower, params.ladder_renorm)?;
    let pops_a_next = eigen::populations(&psi, 1.0, n_max)?;
    let q_out = pops_a_next.energy(1.0) - pops_d.energy(1.0);

    let energy_end = ops::mean_energy(&psi, 1.0);
    let w_net = stroke1.work + stroke2.work;
    let figure = (q_in.abs() >= DENOMINATOR_FLOOR).then(|| (q_in + q_out) / q_in);

    let mut record = CycleRecord {
        index: 0,
        q_in,
        q_out,
        work_compress: stroke1.work,
        work_expand: stroke2.work,
        figure_of_merit: figure,
        survival: (stroke1.survival, stroke2.survival),
        pops_a,
        pops_b,
        pops_c,
        pops_d,
        norm_end: psi.norm_sq(),
        back_action_energy: stroke1.back_action_energy + stroke2.back_action_energy,
        closure_residual: q_in + q_out + w_net - (energy_end - energy_a),
        population_trace: Vec::new(),
        density_trace: Vec::new(),
    };
    shift_traces(&mut record, stroke1.population_trace, stroke1.density_trace, 0.0);
    shift_traces(&mut record, stroke2.population_trace, stroke2.density_trace, t);
    Ok((psi, record))
}

/// Result of a multi-cycle run.
#[derive(Debug)]
pub struct CycleRun {
    pub records: Vec<CycleRecord>,
    /// Arithmetic mean of ξ (or η) over the non-excluded cycles.
    pub mean_figure: f64,
    /// Cycles excluded because their denominator vanished.
    pub excluded: usize,
    /// Set when the run stopped early on a degenerate trajectory.
    pub aborted: Option<String>,
    pub final_state: Wavefunction,
}

/// Run `n_cycles` consecutive cycles from the prepared ground state, carrying
/// the state over between cycles with no reset.
pub fn run_cycles(grid: &Arc<Grid>, params: &CycleParams) -> Result<CycleRun> {
    params.validate()?;
    let mut psi = eigen::eigenstate(grid, 0, 1.0)?;
    let mut records = Vec::with_capacity(params.n_cycles);
    let mut aborted = None;

    for index in 1..=params.n_cycles {
        let outcome = match params.mode {
            MachineMode::HeatPump => heat_pump_cycle(psi.clone(), params),
            MachineMode::Engine => engine_cycle(psi.clone(), params),
        };
        match outcome {
            Ok((next, mut record)) => {
                record.index = index;
                records.push(record);
                psi = next;
            }
            Err(Error::DegenerateTrajectory(partial)) => {
                aborted = Some(format!(
                    "cycle {index} aborted after {} of {} measurements",
                    partial.measurements_done, partial.measurements_scheduled
                ));
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let figures: Vec<f64> = records.iter().filter_map(|r| r.figure_of_merit).collect();
    if figures.is_empty() {
        return Err(Error::RunFailed(format!(
            "no usable cycles: {} excluded, aborted: {}",
            records.len(),
            aborted.as_deref().unwrap_or("no")
        )));
    }
    let excluded = records.iter().filter(|r| r.figure_of_merit.is_none()).count();
    let mean_figure = figures.iter().sum::<f64>() / figures.len() as f64;
    Ok(CycleRun { records, mean_figure, excluded, aborted, final_state: psi })
}

/// Optimal heat-pump coefficient of performance, `ξ_opt = K/(K-1)`.
pub fn cop_optimal(k: f64) -> Result<f64> {
    if !(k > 1.0) {
        return Err(Error::Domain(format!("K must exceed 1, got {k}")));
    }
    Ok(k / (k - 1.0))
}

/// Ideal Otto efficiency with these strokes, `η_opt = (K-1)/K`.
pub fn eta_optimal(k: f64) -> Result<f64> {
    if !(k > 1.0) {
        return Err(Error::Domain(format!("K must exceed 1, got {k}")));
    }
    Ok((k - 1.0) / k)
}
