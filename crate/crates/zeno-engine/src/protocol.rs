//! Trap-frequency schedules.

use crate::error::{Error, Result};

/// Time-dependent trap frequency over one stroke. Only linear ramps are
/// supported: `f(t) = f_start + (f_end - f_start)·t/T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapProtocol {
    f_start: f64,
    f_end: f64,
    duration: f64,
}

impl TrapProtocol {
    pub fn linear(f_start: f64, f_end: f64, duration: f64) -> Result<Self> {
        if !(f_start > 0.0) || !(f_end > 0.0) {
            return Err(Error::Config(format!(
                "trap frequencies must be positive, got f_start = {f_start}, f_end = {f_end}"
            )));
        }
        if !(duration > 0.0) || !duration.is_finite() {
            return Err(Error::Config(format!("stroke duration must be positive, got {duration}")));
        }
        Ok(Self { f_start, f_end, duration })
    }

    /// Constant-frequency protocol (a "ramp" with `f_end = f_start`).
    pub fn constant(f: f64, duration: f64) -> Result<Self> {
        Self::linear(f, f, duration)
    }

    pub fn f_start(&self) -> f64 {
        self.f_start
    }

    pub fn f_end(&self) -> f64 {
        self.f_end
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Frequency at stroke-local time `t`, clamped to the ramp endpoints.
    pub fn frequency_at(&self, t: f64) -> f64 {
        let s = (t / self.duration).clamp(0.0, 1.0);
        self.f_start + (self.f_end - self.f_start) * s
    }

    /// Constant ramp rate `ḟ = (f_end - f_start)/T`.
    pub fn f_dot(&self) -> f64 {
        (self.f_end - self.f_start) / self.duration
    }

    /// The same ramp traversed backwards.
    pub fn reversed(&self) -> Self {
        Self { f_start: self.f_end, f_end: self.f_start, duration: self.duration }
    }
}
