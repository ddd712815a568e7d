//! Built-in particle parameter sets (PDG-style constants).

use crate::meson::{CpViolation, MesonParams};
use crate::scalar::ScalarParams;
use crate::units::mev_to_per_sec;
use crate::{Error, Result};

/// A measured decoherence rate with asymmetric errors, all in s^-1.
#[derive(Debug, Clone, Copy)]
pub struct MeasuredLambda {
    pub central: f64,
    pub err_lo: f64,
    pub err_hi: f64,
}

/// The channel a preset instantiates.
#[derive(Debug, Clone)]
pub enum PresetChannel {
    Meson(MesonParams),
    Scalar(ScalarParams),
}

/// A named particle with its physical constants.
#[derive(Debug, Clone)]
pub struct ParticlePreset {
    pub name: &'static str,
    pub channel: PresetChannel,
    /// CP-violation parameter (mesons; trivial for scalars).
    pub epsilon: CpViolation,
    /// Particle mass in MeV.
    pub mass_mev: f64,
    /// Experimental decoherence rate, when one has been reported.
    pub measured_lambda: Option<MeasuredLambda>,
    pub note: &'static str,
}

/// Neutral-kaon mean lifetime of the short-lived eigenstate, s.
pub const K0_TAU_S: f64 = 0.8953e-10;
/// Neutral-kaon mean lifetime of the long-lived eigenstate, s.
pub const K0_TAU_L: f64 = 5.18e-8;
/// Neutral-kaon mass splitting, s^-1.
pub const K0_DELTA_M: f64 = 0.5292e10;
/// Neutral-kaon CP-violation overlap.
pub const K0_DELTA_L: f64 = 3.27e-3;
/// Neutral-kaon mass, MeV.
pub const K0_MASS_MEV: f64 = 497.648;

/// B-meson lifetime (both eigenstates), s.
pub const B0_TAU: f64 = 1.536e-12;
/// B-meson mass splitting, s^-1.
pub const B0_DELTA_M: f64 = 0.502e12;
/// B-meson CP-violation overlap.
pub const B0_DELTA_L: f64 = 1.0e-3;
/// B-meson mass, MeV.
pub const B0_MASS_MEV: f64 = 5279.4;

/// Neutral-pion mean lifetime, s.
pub const PI0_TAU: f64 = 8.4e-17;
/// Neutral-pion mass, MeV.
pub const PI0_MASS_MEV: f64 = 134.9766;

impl ParticlePreset {
    /// The K0 channel with its measured decoherence window.
    pub fn k0() -> Self {
        let params = MesonParams::new(1.0 / K0_TAU_S, 1.0 / K0_TAU_L, K0_DELTA_M, K0_DELTA_L, 0.0)
            .expect("K0 constants are valid");
        Self {
            name: "K0",
            channel: PresetChannel::Meson(params),
            epsilon: CpViolation::from_delta_l(K0_DELTA_L).expect("K0 delta_L in range"),
            mass_mev: K0_MASS_MEV,
            measured_lambda: Some(MeasuredLambda {
                central: 2.80e9,
                err_lo: 3.30e9,
                err_hi: 3.80e9,
            }),
            note: "neutral kaon, PDG-style constants",
        }
    }

    /// The B0 channel (equal widths) with its measured decoherence window.
    pub fn b0() -> Self {
        let params = MesonParams::new(1.0 / B0_TAU, 1.0 / B0_TAU, B0_DELTA_M, B0_DELTA_L, 0.0)
            .expect("B0 constants are valid");
        Self {
            name: "B0",
            channel: PresetChannel::Meson(params),
            epsilon: CpViolation::from_delta_l(B0_DELTA_L).expect("B0 delta_L in range"),
            mass_mev: B0_MASS_MEV,
            measured_lambda: Some(MeasuredLambda {
                central: -0.71e11,
                err_lo: 1.15e11,
                err_hi: 1.15e11,
            }),
            note: "neutral B meson, equal-width approximation",
        }
    }

    /// The neutral pion as a two-level decay channel (no decoherence).
    pub fn pi0() -> Self {
        let params =
            ScalarParams::superselected(1.0 / PI0_TAU, mev_to_per_sec(PI0_MASS_MEV))
                .expect("pi0 constants are valid");
        Self {
            name: "pi0",
            channel: PresetChannel::Scalar(params),
            epsilon: CpViolation::from_delta_l(0.0).expect("trivial"),
            mass_mev: PI0_MASS_MEV,
            measured_lambda: None,
            note: "neutral pion, pure decay channel",
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "k0" => Ok(Self::k0()),
            "b0" => Ok(Self::b0()),
            "pi0" => Ok(Self::pi0()),
            other => Err(Error::InvalidParameter(format!("unknown preset '{other}'"))),
        }
    }

    /// The meson parameters, or an error for scalar presets.
    pub fn meson_params(&self) -> Result<MesonParams> {
        match &self.channel {
            PresetChannel::Meson(p) => Ok(*p),
            PresetChannel::Scalar(_) => Err(Error::InvalidParameter(format!(
                "preset '{}' is not a meson channel",
                self.name
            ))),
        }
    }
}
