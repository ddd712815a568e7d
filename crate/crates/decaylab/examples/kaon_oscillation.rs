//! Strangeness oscillation of a neutral kaon: detection probabilities and
//! the strangeness expectation value of an initial K0 over a few short
//! lifetimes.

use decaylab::meson::{detection_probabilities, prepare_tilde, strangeness_expectation, StateKind};
use decaylab::presets::ParticlePreset;

fn main() {
    let preset = ParticlePreset::k0();
    let params = preset.meson_params().expect("K0 is a meson preset");
    let rho0 = prepare_tilde(StateKind::K0, params.delta_l).expect("valid initial state");
    let tau_s = 1.0 / params.gamma_s;

    println!("neutral kaon starting as K0, delta_L = {}", params.delta_l);
    println!(
        "{:>8}  {:>10}  {:>10}  {:>10}  {:>10}",
        "t/tau_S", "p_K0", "p_K0bar", "p_vacuum", "<S>"
    );
    for k in 0..=20 {
        let t = tau_s * k as f64 / 4.0;
        let probs = detection_probabilities(&rho0, &params, t).expect("valid time");
        let s = strangeness_expectation(&rho0, &params, t).expect("valid time");
        println!(
            "{:>8.2}  {:>10.6}  {:>10.6}  {:>10.6}  {:>10.6}",
            t / tau_s,
            probs.p_k0,
            probs.p_k0_bar,
            probs.p_vacuum,
            s
        );
    }
}
