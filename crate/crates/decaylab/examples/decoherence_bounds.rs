//! Complete-positivity bounds on the decoherence rate: t_plus, lambda_max,
//! the first-order closed form, and the comparison with measured values for
//! both meson presets.

use decaylab::bounds::{experimental_lambda_check, lambda_max, necessary_delta_bound};
use decaylab::presets::ParticlePreset;

fn main() {
    for preset in [ParticlePreset::k0(), ParticlePreset::b0()] {
        let params = preset.meson_params().unwrap();
        let nb = necessary_delta_bound(&params);
        let report = lambda_max(&params).expect("necessary condition holds");
        println!("{}:", preset.name);
        println!("  necessary bound on delta_L  {:.4e} (ok: {})", nb.bound, nb.ok);
        println!("  t_plus                      {:.6e} s", report.t_plus);
        println!("  lambda_max                  {:.6e} 1/s", report.lambda_max);
        println!(
            "  lambda_max (first order)    {:.6e} 1/s",
            report.lambda_max_first_order
        );
        if let Some(ml) = preset.measured_lambda {
            let inside =
                experimental_lambda_check(report.lambda_max, ml.central, ml.err_lo, ml.err_hi);
            println!(
                "  measured lambda             {:.3e} (+{:.3e}/-{:.3e}) 1/s -> {}",
                ml.central,
                ml.err_hi,
                ml.err_lo,
                if inside { "inside the allowed range" } else { "outside" }
            );
        }
    }
}
