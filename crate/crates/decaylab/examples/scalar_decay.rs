//! Exponential decay of a neutral pion: closed-form propagation of the
//! two-level particle-vacuum channel and the Geiger-Nutall survival law.

use decaylab::presets::{ParticlePreset, PresetChannel};
use decaylab::scalar::{evolve_scalar_general, survival_probability, ScalarState};

fn main() {
    let preset = ParticlePreset::pi0();
    let PresetChannel::Scalar(params) = preset.channel else {
        unreachable!("pi0 is a scalar channel");
    };
    let tau = 1.0 / params.gamma;

    println!("neutral pion, tau = {:.3e} s", tau);
    println!("{:>12}  {:>12}  {:>12}", "t/tau", "rho_11", "survival");
    for k in 0..=10 {
        let t = tau * k as f64 / 2.0;
        let state = evolve_scalar_general(&ScalarState::particle(), &params, t)
            .expect("valid evolution");
        let survival = survival_probability(params.gamma, t);
        println!(
            "{:>12.2}  {:>12.6}  {:>12.6}",
            t / tau,
            state.matrix()[(0, 0)].re,
            survival
        );
    }
}
