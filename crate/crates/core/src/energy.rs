//! First-order radio energy model.
//!
//! Transmission cost has an electronics term linear in payload size and an
//! amplifier term that switches between free-space (`d²`) and multipath
//! (`d⁴`) attenuation at the crossover distance `d0 = sqrt(eps_fs/eps_mp)`:
//!
//! ```text
//! E_tx(l, d) = l·E_elec + l·eps_fs·d²   if d < d0
//!              l·E_elec + l·eps_mp·d⁴   otherwise
//! E_rx(l)    = l·E_elec
//! E_da(l, n) = l·n·E_da                 (aggregating n signals)
//! ```
//!
//! The two amplifier branches agree exactly at `d = d0`, so cost is a
//! continuous, strictly increasing function of distance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radio hardware constants, all in SI units (joules, bits, meters).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioEnergyParams {
    /// Electronics energy per bit, transmit and receive (J/bit).
    pub e_elec: f64,
    /// Free-space amplifier energy (J/bit/m²), used below `d0`.
    pub eps_fs: f64,
    /// Multipath amplifier energy (J/bit/m⁴), used at and above `d0`.
    pub eps_mp: f64,
    /// Data aggregation energy per bit per signal (J/bit/signal).
    pub e_da: f64,
}

impl Default for RadioEnergyParams {
    /// Standard 50 nJ/bit electronics, 10 pJ/bit/m² free-space and
    /// 0.0013 pJ/bit/m⁴ multipath amplifiers, 5 nJ/bit aggregation.
    fn default() -> Self {
        Self {
            e_elec: 50e-9,
            eps_fs: 10e-12,
            eps_mp: 0.0013e-12,
            e_da: 5e-9,
        }
    }
}

impl RadioEnergyParams {
    /// Builds a parameter set, rejecting non-finite or non-positive values.
    pub fn new(e_elec: f64, eps_fs: f64, eps_mp: f64, e_da: f64) -> Result<Self> {
        let params = Self {
            e_elec,
            eps_fs,
            eps_mp,
            e_da,
        };
        params.validate()?;
        Ok(params)
    }

    /// Checks that every constant is finite and strictly positive.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("e_elec", self.e_elec),
            ("eps_fs", self.eps_fs),
            ("eps_mp", self.eps_mp),
            ("e_da", self.e_da),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::Config(format!(
                    "{name}: must be finite and > 0, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Crossover distance between the free-space and multipath branches.
    pub fn d0(&self) -> f64 {
        (self.eps_fs / self.eps_mp).sqrt()
    }

    /// Energy to transmit `bits` over `distance` meters.
    ///
    /// Fails if `distance` is negative or not finite.
    pub fn tx_energy(&self, bits: u32, distance: f64) -> Result<f64> {
        if !distance.is_finite() || distance < 0.0 {
            return Err(Error::Argument(format!(
                "distance: must be finite and >= 0, got {distance}"
            )));
        }
        let l = bits as f64;
        let amp = if distance < self.d0() {
            self.eps_fs * distance * distance
        } else {
            let d2 = distance * distance;
            self.eps_mp * d2 * d2
        };
        Ok(l * self.e_elec + l * amp)
    }

    /// Energy to receive `bits`.
    pub fn rx_energy(&self, bits: u32) -> f64 {
        bits as f64 * self.e_elec
    }

    /// Energy to aggregate `n_signals` packets of `bits` each into one.
    pub fn aggregation_energy(&self, bits: u32, n_signals: u32) -> f64 {
        bits as f64 * n_signals as f64 * self.e_da
    }
}
