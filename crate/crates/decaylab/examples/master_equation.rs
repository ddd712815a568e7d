//! Lindblad master-equation integration as a numerical cross-check of the
//! closed-form meson propagator: evolve an initial K0 by RK4 and compare.

use decaylab::dynamics::integrate_master;
use decaylab::meson::{evolve_tilde, meson_lindblad, prepare_tilde, CpViolation, StateKind};
use decaylab::presets::ParticlePreset;

fn main() {
    let mut params = ParticlePreset::k0().meson_params().unwrap();
    params.lambda = 5e9;
    let e = CpViolation::from_delta_l(params.delta_l).unwrap();
    let model = meson_lindblad(&params, &e).expect("valid generator");
    println!(
        "Lindblad model: {} jump operators, Hermitian H",
        model.lindblad_ops.len()
    );

    let rho0 = prepare_tilde(StateKind::K0, params.delta_l).unwrap();
    let rho0_cp = rho0.to_orthonormal(&e);
    let tau_s = 1.0 / params.gamma_s;

    println!("{:>8}  {:>12}  {:>12}", "t/tau_S", "steps", "max defect");
    for &(frac, steps) in &[(0.5, 20_000), (1.0, 50_000), (2.0, 100_000)] {
        let t = frac * tau_s;
        let rk4 = integrate_master(&model, &rho0_cp, t, steps).expect("valid integration");
        let closed = evolve_tilde(&rho0, &params, t).unwrap().to_orthonormal(&e);
        println!(
            "{:>8.1}  {:>12}  {:>12.3e}",
            frac,
            steps,
            rk4.sub(&closed).max_abs()
        );
    }
}
