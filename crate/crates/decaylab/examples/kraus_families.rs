//! Operator-sum representations of both channels: the scalar amplitude
//! damping set and the six-operator meson set in the nonorthogonal dyad
//! representation, with their completeness residuals and equivalence to the
//! closed-form propagators.

use decaylab::dynamics::{apply_kraus, completeness_residual};
use decaylab::meson::{evolve_tilde, kraus_breve, prepare_tilde, StateKind};
use decaylab::presets::ParticlePreset;
use decaylab::scalar::{evolve_scalar_general, scalar_kraus_superselected, ScalarState};

fn main() {
    // scalar channel: two-operator amplitude damping
    let gamma = 1.0 / 8.4e-17;
    let t = 1.0 / gamma;
    let ks = scalar_kraus_superselected(gamma, 0.0, t);
    let state = ScalarState::particle();
    let via_kraus = apply_kraus(state.matrix(), &ks).expect("dims match");
    let closed = evolve_scalar_general(
        &state,
        &decaylab::scalar::ScalarParams::superselected(gamma, 0.0).unwrap(),
        t,
    )
    .unwrap();
    println!("scalar channel at t = 1/Gamma:");
    println!("  operators:            {}", ks.operators.len());
    println!("  completeness residual {:.3e}", completeness_residual(&ks));
    println!(
        "  |Kraus - closed form| {:.3e}",
        via_kraus.sub(closed.matrix()).frobenius_norm()
    );

    // meson channel: six operators against the Gram metric
    let mut params = ParticlePreset::k0().meson_params().unwrap();
    params.lambda = 1e10;
    let t = 1.0 / params.gamma_s;
    let ks = kraus_breve(&params, t).expect("completely positive at t");
    let rho0 = prepare_tilde(StateKind::K0, params.delta_l).unwrap();
    let via_kraus = apply_kraus(rho0.matrix(), &ks).unwrap();
    let closed = evolve_tilde(&rho0, &params, t).unwrap();
    println!("meson channel at t = tau_S, lambda = {:.1e}:", params.lambda);
    println!("  operators:            {}", ks.operators.len());
    println!("  completeness residual {:.3e}", completeness_residual(&ks));
    println!(
        "  |Kraus - closed form| {:.3e}",
        via_kraus.sub(closed.matrix()).frobenius_norm()
    );
}
