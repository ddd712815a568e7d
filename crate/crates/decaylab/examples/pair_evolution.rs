//! Two noninteracting neutral kaons evolved as a product channel: the
//! antisymmetric K0/K0bar pair state, trace preservation, and factorization
//! on product states.

use decaylab::dynamics::tensor_evolve_pair;
use decaylab::linalg::CMatrix;
use decaylab::meson::{kraus_orthonormal, prepare_tilde, CpViolation, StateKind};
use decaylab::presets::ParticlePreset;
use num_complex::Complex64;

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn main() {
    let params = ParticlePreset::k0().meson_params().unwrap();
    let e = CpViolation::from_delta_l(params.delta_l).unwrap();
    let tau_s = 1.0 / params.gamma_s;

    // antisymmetric pure state (|K0>|K0bar> - |K0bar>|K0>)/sqrt(2), written
    // in the orthonormal CP basis where K0 = (1, 1, 0)/sqrt(2)
    let s = 1.0 / 2.0f64.sqrt();
    let k0 = [cx(s), cx(s), cx(0.0)];
    let k0bar = [cx(s), cx(-s), cx(0.0)];
    let mut psi = vec![Complex64::default(); 9];
    for i in 0..3 {
        for j in 0..3 {
            psi[3 * i + j] = (k0[i] * k0bar[j] - k0bar[i] * k0[j]) * s;
        }
    }
    let rho_pair = CMatrix::outer(&psi, &psi);

    println!("antisymmetric kaon pair, trace over time:");
    for k in 0..=5 {
        let t = tau_s * k as f64;
        let out = tensor_evolve_pair(&rho_pair, &params, &params, &e, &e, t).unwrap();
        // joint vacuum-vacuum population sits at index (8, 8)
        println!(
            "  t = {:>4.1} tau_S: trace = {:.12}, p(vac, vac) = {:.6}",
            k as f64,
            out.trace().re,
            out[(8, 8)].re
        );
    }

    // factorization: product input evolves to the product of the one-body outputs
    let a = prepare_tilde(StateKind::Ks, params.delta_l).unwrap().to_orthonormal(&e);
    let b = prepare_tilde(StateKind::Kl, params.delta_l).unwrap().to_orthonormal(&e);
    let t = 2.0 * tau_s;
    let joint = tensor_evolve_pair(&a.kron(&b), &params, &params, &e, &e, t).unwrap();
    let ks = kraus_orthonormal(&params, &e, t).unwrap();
    let single = |rho: &CMatrix| decaylab::dynamics::apply_kraus(rho, &ks).unwrap();
    let product = single(&a).kron(&single(&b));
    println!(
        "factorization defect on a product state: {:.3e}",
        joint.sub(&product).frobenius_norm()
    );
}
