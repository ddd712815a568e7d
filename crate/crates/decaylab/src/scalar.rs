//! Two-level (particle plus vacuum) channel of an unstable pseudoscalar.
//!
//! Basis: `|pi> = (1, 0)^T`, `|0> = (0, 1)^T`.  The population decays as
//! `exp(-t Gamma)`; the particle--vacuum coherence is fed by the coefficients
//! `A12(t)` and `A11(t)` fixed by the semigroup composition law.  With the
//! superselection rule in force the channel is a time-dependent amplitude
//! damping operation and the survival probability follows the Geiger--Nutall
//! law.

use num_complex::Complex64;

use crate::dynamics::{KrausSet, LindbladModel};
use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Relative width of the degenerate-branch window around `lambda = Gamma`,
/// `mu = 0` where the generic `A11` expression has a removable 0/0.
const DEGENERATE_EPS: f64 = 1e-9;

/// Physical parameters of the scalar channel.  All rates in s^-1.
#[derive(Debug, Clone, Copy)]
pub struct ScalarParams {
    /// Decay width Gamma.
    pub gamma: f64,
    /// Mass as angular frequency; also the phase rate of the coherence.
    pub mass_freq: f64,
    /// Decoherence parameter lambda >= 0.
    pub lambda: f64,
    /// Phase rate of `A12`; consistency with the phenomenological evolution
    /// requires `mu = mass_freq`, which the constructor enforces.
    pub mu: f64,
    /// Complex coherence-transfer amplitude.
    pub z: Complex64,
}

impl ScalarParams {
    /// Validated constructor; sets `mu = mass_freq` and checks that `z`
    /// keeps the channel completely positive at all times.
    pub fn new(gamma: f64, mass_freq: f64, lambda: f64, z: Complex64) -> Result<Self> {
        let p = Self {
            gamma,
            mass_freq,
            lambda,
            mu: mass_freq,
            z,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with the superselection rule applied (`z = 0`, `lambda = 0`).
    pub fn superselected(gamma: f64, mass_freq: f64) -> Result<Self> {
        Self::new(gamma, mass_freq, 0.0, Complex64::new(0.0, 0.0))
    }

    /// Bypass validation; for probing non-CP parameter choices.
    pub fn new_unchecked(gamma: f64, mass_freq: f64, lambda: f64, mu: f64, z: Complex64) -> Self {
        Self {
            gamma,
            mass_freq,
            lambda,
            mu,
            z,
        }
    }

    /// Check the parameter constraints, including the coherence-transfer
    /// bound on `z` sampled over a log-spaced time grid plus its small-time
    /// limit (equivalent to `alpha <= 1` for the Lindblad family).
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) {
            return Err(Error::InvalidParameter("gamma must be positive".into()));
        }
        if self.lambda < 0.0 {
            return Err(Error::InvalidParameter("lambda must be nonnegative".into()));
        }
        if self.mu < 0.0 {
            return Err(Error::InvalidParameter("mu must be nonnegative".into()));
        }
        if self.lambda == 0.0 && self.z.norm() > 0.0 {
            return Err(Error::InvalidParameter("lambda = 0 requires z = 0".into()));
        }
        if self.z.norm() > 0.0 {
            // small-t limit of the positivity bound
            if self.lindblad_alpha() > 1.0 + 1e-12 {
                return Err(Error::ZTooLarge);
            }
            // log-spaced grid over [1e-3/Gamma, 20/Gamma]
            for k in 0..64 {
                let t = 1e-3 / self.gamma * (20.0 / 1e-3f64).powf(k as f64 / 63.0);
                if !scalar_positivity_ok(self, t)? {
                    return Err(Error::ZTooLarge);
                }
            }
        }
        Ok(())
    }

    fn degenerate(&self) -> bool {
        (self.lambda - self.gamma).abs() <= DEGENERATE_EPS * self.gamma
            && self.mu.abs() <= DEGENERATE_EPS * self.gamma
    }

    fn lindblad_alpha(&self) -> f64 {
        let zn = self.z.norm_sqr();
        if self.degenerate() {
            zn / (self.gamma * self.gamma)
        } else {
            zn * (4.0 * self.mass_freq * self.mass_freq
                + (self.gamma - self.lambda).powi(2))
                / (4.0 * self.gamma * self.lambda)
        }
    }
}

/// Density matrix of the particle-vacuum system in the `{|pi>, |0>}` basis.
#[derive(Debug, Clone)]
pub struct ScalarState {
    matrix: CMatrix,
}

impl ScalarState {
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if matrix.dim() != 2 {
            return Err(Error::DimMismatch(matrix.dim(), 2));
        }
        if !matrix.is_hermitian(1e-12 * matrix.frobenius_norm().max(1.0)) {
            return Err(Error::NotHermitian);
        }
        if (matrix.trace().re - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("trace must be 1".into()));
        }
        if !matrix.is_psd(1e-12)? {
            return Err(Error::InvalidParameter("state not positive".into()));
        }
        Ok(Self { matrix })
    }

    /// `|pi><pi|`.
    pub fn particle() -> Self {
        Self {
            matrix: CMatrix::diag_real(&[1.0, 0.0]),
        }
    }

    /// `|0><0|`.
    pub fn vacuum() -> Self {
        Self {
            matrix: CMatrix::diag_real(&[0.0, 1.0]),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Coefficients feeding the particle--vacuum coherence.
#[derive(Debug, Clone, Copy)]
pub struct ScalarCoefficients {
    pub a11: Complex64,
    pub a12: Complex64,
}

/// `A12(t) = exp(-t[(Gamma + lambda)/2 + i mu])` and the matching `A11(t)`,
/// switching to the `z t exp(-t Gamma)` branch at the degenerate point.
pub fn scalar_coefficients(p: &ScalarParams, t: f64) -> Result<ScalarCoefficients> {
    if t < 0.0 {
        return Err(Error::NegativeTime);
    }
    let decay = Complex64::new(-t * (p.gamma + p.lambda) / 2.0, -t * p.mu).exp();
    let a11 = if p.degenerate() {
        p.z * t * (-t * p.gamma).exp()
    } else {
        p.z * (Complex64::new((-t * p.gamma).exp(), 0.0) - decay)
    };
    Ok(ScalarCoefficients { a11, a12: decay })
}

/// Closed-form propagator of the general (pre-superselection) channel.
pub fn evolve_scalar_general(rho0: &ScalarState, p: &ScalarParams, t: f64) -> Result<ScalarState> {
    let m = evolve_scalar_matrix(rho0.matrix(), p, t)?;
    Ok(ScalarState { matrix: m })
}

/// Same propagator acting on a raw 2x2 matrix (used by the cross-check
/// machinery, which also feeds it non-validated inputs).
pub fn evolve_scalar_matrix(rho0: &CMatrix, p: &ScalarParams, t: f64) -> Result<CMatrix> {
    let c = scalar_coefficients(p, t)?;
    let r11 = rho0[(0, 0)];
    let r12 = rho0[(0, 1)];
    let r22 = rho0[(1, 1)];
    let decay = (-t * p.gamma).exp();
    let mut out = CMatrix::zeros(2);
    out[(0, 0)] = r11 * decay;
    out[(0, 1)] = c.a12 * r12 + c.a11 * r11;
    out[(1, 0)] = out[(0, 1)].conj();
    out[(1, 1)] = r22 + r11 * (1.0 - decay);
    Ok(out)
}

/// 4x4 Choi matrix of the channel at time `t`.
pub fn scalar_choi(p: &ScalarParams, t: f64) -> Result<CMatrix> {
    let c = scalar_coefficients(p, t)?;
    let decay = (-t * p.gamma).exp();
    let mut m = CMatrix::zeros(4);
    m[(0, 0)] = Complex64::new(decay, 0.0);
    m[(0, 1)] = c.a11;
    m[(0, 3)] = c.a12;
    m[(1, 0)] = c.a11.conj();
    m[(1, 1)] = Complex64::new(1.0 - decay, 0.0);
    m[(3, 0)] = c.a12.conj();
    m[(3, 3)] = Complex64::new(1.0, 0.0);
    Ok(m)
}

/// Analytic complete-positivity conditions on `A11`, `A12`.
pub fn scalar_positivity_ok(p: &ScalarParams, t: f64) -> Result<bool> {
    let c = scalar_coefficients(p, t)?;
    let decay = (-t * p.gamma).exp();
    let tol = 1e-12;
    let cond_a = c.a12.norm_sqr() <= decay + tol;
    let cond_b = c.a11.norm_sqr() <= (1.0 - decay) * (decay - c.a12.norm_sqr()) + tol;
    Ok(cond_a && cond_b)
}

fn ket_bra(i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(2);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

/// Three-operator Kraus set of the general channel.  Falls back to the
/// superselected two-operator set at `lambda = 0`, which is its limit.
pub fn scalar_kraus_general(p: &ScalarParams, t: f64) -> Result<KrausSet> {
    if p.lambda == 0.0 {
        return Ok(scalar_kraus_superselected(p.gamma, p.mass_freq, t));
    }
    if t <= 0.0 {
        return Err(Error::InvalidParameter(
            "general Kraus set needs t > 0".into(),
        ));
    }
    let c = scalar_coefficients(p, t)?;
    let decay = (-t * p.gamma).exp();
    let dephase = 1.0 - (-t * p.lambda).exp();

    let e0 = ket_bra(0, 0).scale(c.a12).add(&ket_bra(1, 1));
    let radicand = 1.0 - decay - c.a11.norm_sqr() / decay / dephase;
    if radicand < -1e-13 {
        return Err(Error::NotCompletelyPositive { t, radicand });
    }
    let e1 = ket_bra(1, 0).scale_re(radicand.max(0.0).sqrt());
    let e2 = ket_bra(0, 0)
        .scale_re(decay.sqrt() * dephase.sqrt())
        .add(&ket_bra(1, 0).scale(c.a11.conj() / (decay.sqrt() * dephase.sqrt())));
    Ok(KrausSet::orthonormal(vec![e0, e1, e2]))
}

/// Two-operator amplitude-damping Kraus set of the superselected channel.
pub fn scalar_kraus_superselected(gamma: f64, mass_freq: f64, t: f64) -> KrausSet {
    let phase = Complex64::new(-t * gamma / 2.0, -t * mass_freq).exp();
    let e0 = ket_bra(0, 0).scale(phase).add(&ket_bra(1, 1));
    let e1 = ket_bra(1, 0).scale_re((1.0 - (-t * gamma).exp()).sqrt());
    KrausSet::orthonormal(vec![e0, e1])
}

/// Lindblad generators of the scalar channel.
///
/// For `lambda = 0` this is the superselected model
/// `{H = m |pi><pi|, L1 = sqrt(Gamma) |0><pi|}`.  Otherwise the dissipator
/// carries a second operator transferring population-coherence at rate set
/// by `z`; the transfer coefficient is fixed so the generator reproduces the
/// closed-form propagator including its phase.
pub fn scalar_lindblad(p: &ScalarParams) -> Result<LindbladModel> {
    let h = ket_bra(0, 0).scale_re(p.mass_freq);
    if p.lambda == 0.0 {
        let l1 = ket_bra(1, 0).scale_re(p.gamma.sqrt());
        return Ok(LindbladModel {
            hamiltonian: h,
            lindblad_ops: vec![l1],
        });
    }
    let alpha = p.lindblad_alpha();
    if alpha > 1.0 + 1e-12 {
        return Err(Error::ZTooLarge);
    }
    // beta = dA11/dt at t = 0; |beta|^2 = Gamma lambda alpha
    let beta = if p.degenerate() {
        p.z
    } else {
        p.z * Complex64::new((p.lambda - p.gamma) / 2.0, p.mass_freq)
    };
    let l1 = ket_bra(1, 0).scale_re((p.gamma * (1.0 - alpha).max(0.0)).sqrt());
    let l2 = ket_bra(0, 0)
        .scale_re(p.lambda.sqrt())
        .add(&ket_bra(1, 0).scale(beta.conj() / p.lambda.sqrt()));
    Ok(LindbladModel {
        hamiltonian: h,
        lindblad_ops: vec![l1, l2],
    })
}

/// Geiger--Nutall survival probability `exp(-t Gamma)`.
pub fn survival_probability(gamma: f64, t: f64) -> f64 {
    (-t * gamma).exp()
}
