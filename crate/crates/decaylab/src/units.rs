//! Unit conversions between MeV and angular frequency (s^-1).

/// hbar in MeV s (CODATA).
pub const HBAR_MEV_S: f64 = 6.58211915e-22;

/// Convert an energy or rate quoted in MeV to s^-1.
pub fn mev_to_per_sec(x_mev: f64) -> f64 {
    x_mev / HBAR_MEV_S
}

/// Convert a rate in s^-1 to MeV.
pub fn per_sec_to_mev(x: f64) -> f64 {
    x * HBAR_MEV_S
}
