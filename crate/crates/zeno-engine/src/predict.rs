//! Closed-form predictors for leakage and Zeno survival.
//!
//! During a ramp, `Ḣ = f·ḟ·x²` couples the occupied level `k` only to its
//! parity-allowed neighbours `k ± 2` (`⟨k|x²|k±1⟩ = 0` exactly). At short
//! times the leaked population grows quadratically,
//!
//! ```text
//! P_{k±2}(t) ≈ (Ḣ_{k,k±2} / ω_{k,k±2})²·t²
//!            = (ḟ/4f)²·[(k+1)(k+2) or k(k-1)]·t²
//! ```
//!
//! using `⟨k|x²|k+2⟩ = √((k+1)(k+2))/(2f)` and `ω_{k,k±2} = ±2f`. Both `Ḣ`
//! and `ω` carry the same unit-convention prefactor, so the estimate is
//! convention-free.

use crate::error::{Error, Result};
use crate::protocol::TrapProtocol;

fn leakage_coefficient(level: usize, f: f64, f_dot: f64) -> f64 {
    let k = level as f64;
    let up = (k + 1.0) * (k + 2.0);
    let down = k * (k - 1.0); // zero for k < 2
    (f_dot / (4.0 * f)).powi(2) * (up + down)
}

/// Perturbative leakage out of `level` after evolving for a short time `t`
/// from the start of the protocol, with the coupling coefficient evaluated at
/// the protocol's initial frequency.
pub fn leakage_estimate(level: usize, protocol: &TrapProtocol, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    Ok(leakage_coefficient(level, protocol.f_start(), protocol.f_dot()) * t * t)
}

/// Zeno survival estimate after `m` measurements: the product over the
/// inter-measurement intervals of `1 - P_leak(τ)`, `τ = T/m`, with the leakage
/// coefficient evaluated at each interval's starting frequency.
///
/// Errors with [`Error::PredictorOutOfRange`] when any interval's leakage
/// reaches 1 (the short-time expansion no longer applies).
pub fn zeno_survival_estimate(level: usize, protocol: &TrapProtocol, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("survival estimate needs at least one measurement".into()));
    }
    let tau = protocol.duration() / m as f64;
    let f_dot = protocol.f_dot();
    let mut survival = 1.0;
    for i in 0..m {
        let f = protocol.frequency_at(i as f64 * tau);
        let leak = leakage_coefficient(level, f, f_dot) * tau * tau;
        if leak >= 1.0 {
            return Err(Error::PredictorOutOfRange { leakage: leak });
        }
        survival *= 1.0 - leak;
    }
    Ok(survival.clamp(0.0, 1.0))
}

/// `(K-1)/(M·T) = ḟ/M`: the relaxed adiabaticity parameter. Zeno strokes are
/// near-ideal when this is small (≲ 0.1).
pub fn adiabaticity_parameter(compression: f64, measurements: usize, stroke_duration: f64) -> f64 {
    (compression - 1.0) / (measurements.max(1) as f64 * stroke_duration)
}
