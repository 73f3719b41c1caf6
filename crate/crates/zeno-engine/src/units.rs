//! Unit conventions.
//!
//! All quantities are dimensionless. Distances are measured in units of the
//! oscillator length at the reference frequency, energies in units of `2πħf`.
//! What remains free is the time base: with time in units of `1/f` the
//! Schrödinger equation reads `i ∂ψ/∂t = 2π·H ψ`, with time in units of `1/ω`
//! (`ω = 2πf`) the prefactor is 1. The prefactor multiplies every evolution
//! phase and is carried by [`UnitConvention`].

use std::f64::consts::TAU;

/// Choice of time unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TimeBase {
    /// Time in units of `1/f`; evolution prefactor `c = 2π`.
    #[default]
    PerF,
    /// Time in units of `1/ω`; evolution prefactor `c = 1`.
    PerOmega,
}

/// Time-base convention together with the evolution prefactor it implies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct UnitConvention {
    pub time_base: TimeBase,
}

impl UnitConvention {
    pub const PER_F: Self = Self { time_base: TimeBase::PerF };
    pub const PER_OMEGA: Self = Self { time_base: TimeBase::PerOmega };

    /// Prefactor `c` in `i ∂ψ/∂t = c·H ψ`.
    pub fn prefactor(self) -> f64 {
        match self.time_base {
            TimeBase::PerF => TAU,
            TimeBase::PerOmega => 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefactors() {
        assert_eq!(UnitConvention::PER_F.prefactor(), TAU);
        assert_eq!(UnitConvention::PER_OMEGA.prefactor(), 1.0);
        assert_eq!(UnitConvention::default(), UnitConvention::PER_F);
    }
}
