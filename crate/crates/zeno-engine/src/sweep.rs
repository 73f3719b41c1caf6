//! Parameter sweeps over (K, T, M) grids.
//!
//! Points are independent work items executed by a bounded worker pool; the
//! result table is ordered by (K, T, M) regardless of completion order, and a
//! failing point is recorded in its row rather than aborting the sweep.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use crate::cycle::{cop_optimal, eta_optimal, run_cycles, CycleParams, MachineMode};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::predict::adiabaticity_parameter;

/// Sweep definition: the cartesian product of the three value lists, run with
/// the template's remaining parameters.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub k_values: Vec<f64>,
    pub t_values: Vec<f64>,
    pub m_values: Vec<usize>,
    /// Template for everything but (K, T, M); its `n_cycles` is ignored in
    /// favour of `cycles_per_point`.
    pub template: CycleParams,
    pub cycles_per_point: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k_values.is_empty() || self.t_values.is_empty() || self.m_values.is_empty() {
            return Err(Error::Config("sweep value lists must be non-empty".into()));
        }
        if self.cycles_per_point == 0 {
            return Err(Error::Config("cycles_per_point must be at least 1".into()));
        }
        for &k in &self.k_values {
            if !(k > 1.0) {
                return Err(Error::Config(format!("K must exceed 1, got {k}")));
            }
        }
        for &t in &self.t_values {
            if !(t > 0.0) {
                return Err(Error::Config(format!("T must be positive, got {t}")));
            }
        }
        Ok(())
    }

    /// Points in (K, T, M) order.
    fn points(&self) -> Vec<(f64, f64, usize)> {
        let mut ks = self.k_values.clone();
        let mut ts = self.t_values.clone();
        let mut ms = self.m_values.clone();
        ks.sort_by(f64::total_cmp);
        ts.sort_by(f64::total_cmp);
        ms.sort_unstable();
        let mut out = Vec::with_capacity(ks.len() * ts.len() * ms.len());
        for &k in &ks {
            for &t in &ts {
                for &m in &ms {
                    out.push((k, t, m));
                }
            }
        }
        out
    }
}

/// One row of the sweep table.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub compression: f64,
    pub stroke_duration: f64,
    pub measurements: usize,
    /// `Ω·T`, numerically equal to the measurement count.
    pub omega_t: f64,
    /// Mean ξ (or η) over the point's cycles; NaN when the point failed.
    pub figure_mean: f64,
    /// `ξ_opt = K/(K-1)` (or `η_opt = (K-1)/K` in engine mode).
    pub figure_optimal: f64,
    /// `figure_optimal - figure_mean`.
    pub gap: f64,
    /// Mean per-stroke survival over all strokes of the point.
    pub mean_survival: f64,
    /// `(K-1)/(M·T)`.
    pub adiab_param: f64,
    /// Excluded or missing cycles at this point.
    pub failed_cycles: usize,
    /// True when the whole point failed to produce a figure of merit.
    pub failed: bool,
}

/// Ordered sweep results.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub mode: MachineMode,
    pub rows: Vec<SweepRow>,
}

fn run_point(grid: &Arc<Grid>, spec: &SweepSpec, k: f64, t: f64, m: usize) -> SweepRow {
    let optimal = match spec.template.mode {
        MachineMode::HeatPump => cop_optimal(k),
        MachineMode::Engine => eta_optimal(k),
    }
    .expect("validated K > 1");
    let adiab = adiabaticity_parameter(k, m, t);

    let mut params = spec.template.clone();
    params.compression = k;
    params.stroke_duration = t;
    params.measurements = m;
    params.n_cycles = spec.cycles_per_point;
    params.record_stride = None;
    params.record_density = false;

    match run_cycles(grid, &params) {
        Ok(run) => {
            let survivals: f64 = run
                .records
                .iter()
                .map(|r| (r.survival.0 + r.survival.1) / 2.0)
                .sum();
            let mean_survival = survivals / run.records.len() as f64;
            SweepRow {
                compression: k,
                stroke_duration: t,
                measurements: m,
                omega_t: m as f64,
                figure_mean: run.mean_figure,
                figure_optimal: optimal,
                gap: optimal - run.mean_figure,
                mean_survival,
                adiab_param: adiab,
                failed_cycles: spec.cycles_per_point - run.records.len() + run.excluded,
                failed: false,
            }
        }
        Err(_) => SweepRow {
            compression: k,
            stroke_duration: t,
            measurements: m,
            omega_t: m as f64,
            figure_mean: f64::NAN,
            figure_optimal: optimal,
            gap: f64::NAN,
            mean_survival: f64::NAN,
            adiab_param: adiab,
            failed_cycles: spec.cycles_per_point,
            failed: true,
        },
    }
}

/// Execute the sweep on `threads` workers (at least one).
pub fn run_sweep(grid: &Arc<Grid>, spec: &SweepSpec, threads: usize) -> Result<SweepTable> {
    spec.validate()?;
    spec.template.validate()?;
    let points = spec.points();
    let slots: Vec<OnceLock<SweepRow>> = points.iter().map(|_| OnceLock::new()).collect();
    let cursor = AtomicUsize::new(0);
    let workers = threads.max(1).min(points.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= points.len() {
                    break;
                }
                let (k, t, m) = points[i];
                let row = run_point(grid, spec, k, t, m);
                slots[i].set(row).expect("each slot is filled once");
            });
        }
    });

    let rows = slots
        .into_iter()
        .map(|slot| slot.into_inner().expect("all points executed"))
        .collect();
    Ok(SweepTable { mode: spec.template.mode, rows })
}
