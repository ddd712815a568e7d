//! Three-level channel of a neutral meson (K0 or B0) plus vacuum.
//!
//! Three matrix representations of the same density operator are in play:
//!
//! * the orthonormal CP basis `{|K1>, |K2>, |0>}` -- ordinary matrix
//!   elements, plain trace, plain positivity;
//! * the orthonormal strangeness basis `{|K0>, |K0bar>, |0>}`;
//! * the "tilde" coefficient matrix over the nonorthogonal dyads
//!   `{|K_S>, |K_L>, |0>}` -- NOT matrix elements; traces and Kraus
//!   completeness in this representation are taken against the Gram matrix
//!   `g = V^dag V`.
//!
//! The propagator is diagonal in the tilde representation, which is why the
//! channel is stated there; conversions go through `rho = V rho_tilde V^dag`.

use num_complex::Complex64;

use crate::dynamics::{KrausSet, LindbladModel};
use crate::linalg::CMatrix;
use crate::{Error, Result};

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Physical parameters of the meson channel.  All rates in s^-1.
#[derive(Debug, Clone, Copy)]
pub struct MesonParams {
    /// Decay width of the short-lived eigenstate.
    pub gamma_s: f64,
    /// Decay width of the long-lived eigenstate.
    pub gamma_l: f64,
    /// Mass splitting `m_L - m_S` as angular frequency.
    pub delta_m: f64,
    /// Overlap `<K_S|K_L>` (dimensionless CP-violation measure).
    pub delta_l: f64,
    /// Decoherence parameter.
    pub lambda: f64,
    /// Mean mass as angular frequency; enters only the global phases of the
    /// (vanishing) vacuum-coherence coefficients, so it defaults to 0.
    pub mean_mass_freq: f64,
}

impl MesonParams {
    pub fn new(
        gamma_s: f64,
        gamma_l: f64,
        delta_m: f64,
        delta_l: f64,
        lambda: f64,
    ) -> Result<Self> {
        let p = Self {
            gamma_s,
            gamma_l,
            delta_m,
            delta_l,
            lambda,
            mean_mass_freq: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_mean_mass_freq(mut self, m: f64) -> Self {
        self.mean_mass_freq = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_s > 0.0 && self.gamma_l > 0.0) {
            return Err(Error::InvalidParameter("decay widths must be positive".into()));
        }
        if self.lambda < 0.0 {
            return Err(Error::InvalidParameter("lambda must be nonnegative".into()));
        }
        if !(0.0..1.0).contains(&self.delta_l) {
            return Err(Error::InvalidParameter("delta_L must be in [0, 1)".into()));
        }
        if self.delta_m < 0.0 {
            return Err(Error::InvalidParameter("delta_m must be nonnegative".into()));
        }
        Ok(())
    }

    /// Mean width `(Gamma_S + Gamma_L)/2`.
    pub fn gamma(&self) -> f64 {
        0.5 * (self.gamma_s + self.gamma_l)
    }

    /// Width splitting `Gamma_S - Gamma_L`.
    pub fn delta_gamma(&self) -> f64 {
        self.gamma_s - self.gamma_l
    }

    pub fn m_s(&self) -> f64 {
        self.mean_mass_freq - self.delta_m / 2.0
    }

    pub fn m_l(&self) -> f64 {
        self.mean_mass_freq + self.delta_m / 2.0
    }
}

/// Complex CP-violation parameter `epsilon`.
#[derive(Debug, Clone, Copy)]
pub struct CpViolation {
    epsilon: Complex64,
}

impl CpViolation {
    pub fn new(epsilon: Complex64) -> Result<Self> {
        if epsilon.norm() >= 1.0 {
            return Err(Error::InvalidParameter("|epsilon| must be < 1".into()));
        }
        Ok(Self { epsilon })
    }

    /// The real solution of `delta_L = 2 eps / (1 + eps^2)` with `eps < 1`.
    pub fn from_delta_l(delta_l: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&delta_l) {
            return Err(Error::InvalidParameter("delta_L must be in [0, 1)".into()));
        }
        // (1 - sqrt(1 - d^2))/d, in the cancellation-free form
        let eps = delta_l / (1.0 + (1.0 - delta_l * delta_l).sqrt());
        Ok(Self {
            epsilon: cx(eps, 0.0),
        })
    }

    pub fn epsilon(&self) -> Complex64 {
        self.epsilon
    }
}

/// `delta_L = 2 Re(eps) / (1 + |eps|^2)`.
pub fn delta_l_from_epsilon(e: &CpViolation) -> f64 {
    2.0 * e.epsilon.re / (1.0 + e.epsilon.norm_sqr())
}

/// The four meson basis vectors as components in the orthonormal
/// strangeness basis `{|K0>, |K0bar>, |0>}`.
#[derive(Debug, Clone)]
pub struct BasisVectors {
    pub k1: [Complex64; 3],
    pub k2: [Complex64; 3],
    pub ks: [Complex64; 3],
    pub kl: [Complex64; 3],
}

pub fn basis_vectors(e: &CpViolation) -> BasisVectors {
    let s = 1.0 / 2.0f64.sqrt();
    let k1 = [cx(s, 0.0), cx(s, 0.0), cx(0.0, 0.0)];
    let k2 = [cx(s, 0.0), cx(-s, 0.0), cx(0.0, 0.0)];
    let n = 1.0 / (1.0 + e.epsilon.norm_sqr()).sqrt();
    let mut ks = [cx(0.0, 0.0); 3];
    let mut kl = [cx(0.0, 0.0); 3];
    for i in 0..3 {
        ks[i] = (k1[i] + e.epsilon * k2[i]) * n;
        kl[i] = (e.epsilon * k1[i] + k2[i]) * n;
    }
    BasisVectors { k1, k2, ks, kl }
}

/// Transformation `rho = V rho_tilde V^dag` into the orthonormal CP basis.
pub fn v_matrix(e: &CpViolation) -> CMatrix {
    let n = 1.0 / (1.0 + e.epsilon.norm_sqr()).sqrt();
    let mut v = CMatrix::zeros(3);
    v[(0, 0)] = cx(n, 0.0);
    v[(0, 1)] = e.epsilon * n;
    v[(1, 0)] = e.epsilon * n;
    v[(1, 1)] = cx(n, 0.0);
    v[(2, 2)] = cx(1.0, 0.0);
    v
}

/// Gram matrix `g = V^dag V` of the tilde representation.
pub fn g_matrix(delta_l: f64) -> CMatrix {
    let mut g = CMatrix::identity(3);
    g[(0, 1)] = cx(delta_l, 0.0);
    g[(1, 0)] = cx(delta_l, 0.0);
    g
}

fn g_inverse(delta_l: f64) -> CMatrix {
    let d = 1.0 - delta_l * delta_l;
    let mut g = CMatrix::zeros(3);
    g[(0, 0)] = cx(1.0 / d, 0.0);
    g[(1, 1)] = cx(1.0 / d, 0.0);
    g[(0, 1)] = cx(-delta_l / d, 0.0);
    g[(1, 0)] = cx(-delta_l / d, 0.0);
    g[(2, 2)] = cx(1.0, 0.0);
    g
}

/// Coefficient matrix over the `{S, L, 0}` dyads, restricted to physical
/// (superselected) states.
#[derive(Debug, Clone)]
pub struct TildeState {
    matrix: CMatrix,
    delta_l: f64,
}

impl TildeState {
    pub fn new(matrix: CMatrix, delta_l: f64) -> Result<Self> {
        if matrix.dim() != 3 {
            return Err(Error::DimMismatch(matrix.dim(), 3));
        }
        let scale = matrix.frobenius_norm().max(1.0);
        if !matrix.is_hermitian(1e-12 * scale) {
            return Err(Error::NotHermitian);
        }
        if matrix[(0, 2)].norm() > 1e-12 * scale || matrix[(1, 2)].norm() > 1e-12 * scale {
            return Err(Error::SuperselectionViolated);
        }
        let state = Self { matrix, delta_l };
        if (state.metric_trace() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("metric trace must be 1".into()));
        }
        let e = CpViolation::from_delta_l(delta_l)?;
        if !state.to_orthonormal(&e).is_psd(1e-12)? {
            return Err(Error::InvalidParameter("state not positive".into()));
        }
        Ok(state)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn delta_l(&self) -> f64 {
        self.delta_l
    }

    /// `tr(rho_tilde g)`, the physical trace.
    pub fn metric_trace(&self) -> f64 {
        self.matrix
            .matmul(&g_matrix(self.delta_l))
            .trace()
            .re
    }

    /// Matrix elements in the orthonormal CP basis, `V rho_tilde V^dag`.
    pub fn to_orthonormal(&self, e: &CpViolation) -> CMatrix {
        let v = v_matrix(e);
        v.matmul(&self.matrix).matmul(&v.adjoint())
    }
}

/// Initial-state presets for the meson channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    K0,
    K0Bar,
    Ks,
    Kl,
    K1,
    K2,
    Vacuum,
}

impl std::str::FromStr for StateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k0" => Ok(Self::K0),
            "k0bar" | "kbar0" | "k0b" => Ok(Self::K0Bar),
            "ks" => Ok(Self::Ks),
            "kl" => Ok(Self::Kl),
            "k1" => Ok(Self::K1),
            "k2" => Ok(Self::K2),
            "vacuum" | "vac" => Ok(Self::Vacuum),
            other => Err(Error::InvalidParameter(format!(
                "unknown initial state '{other}'"
            ))),
        }
    }
}

/// Build the tilde-representation density coefficients of a pure initial
/// state.  The strangeness eigenstates are expanded in the `S/L` dyads with
/// the real `epsilon` branch matching `delta_l`.
pub fn prepare_tilde(kind: StateKind, delta_l: f64) -> Result<TildeState> {
    if !(0.0..1.0).contains(&delta_l) {
        return Err(Error::InvalidParameter("delta_L must be in [0, 1)".into()));
    }
    // amplitudes (c_S, c_L, c_0) of |psi> = c_S |K_S> + c_L |K_L> + c_0 |0>
    let eps = CpViolation::from_delta_l(delta_l)?.epsilon().re;
    let n = (1.0 + eps * eps).sqrt();
    let amps: [Complex64; 3] = match kind {
        StateKind::Ks => [cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)],
        StateKind::Kl => [cx(0.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)],
        StateKind::Vacuum => [cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)],
        StateKind::K0 => {
            let k = 1.0 / (2.0 * (1.0 + delta_l)).sqrt();
            [cx(k, 0.0), cx(k, 0.0), cx(0.0, 0.0)]
        }
        StateKind::K0Bar => {
            let k = 1.0 / (2.0 * (1.0 - delta_l)).sqrt();
            [cx(k, 0.0), cx(-k, 0.0), cx(0.0, 0.0)]
        }
        StateKind::K1 => {
            let f = n / (1.0 - eps * eps);
            [cx(f, 0.0), cx(-eps * f, 0.0), cx(0.0, 0.0)]
        }
        StateKind::K2 => {
            let f = n / (1.0 - eps * eps);
            [cx(-eps * f, 0.0), cx(f, 0.0), cx(0.0, 0.0)]
        }
    };
    let mut m = CMatrix::zeros(3);
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = amps[i] * amps[j].conj();
        }
    }
    TildeState::new(m, delta_l)
}

/// The solved time-dependent coefficient functions of the general map.
#[derive(Debug, Clone, Copy)]
pub struct Coefficients {
    pub a_sl: Complex64,
    pub b_s0: Complex64,
    pub c_l0: Complex64,
    pub d_ss: f64,
    pub d_ll: f64,
    pub d_sl: Complex64,
}

pub fn coefficient_functions(p: &MesonParams, t: f64) -> Result<Coefficients> {
    if t < 0.0 {
        return Err(Error::NegativeTime);
    }
    let a_sl = cx(-t * (p.gamma() + p.lambda), t * p.delta_m).exp();
    let b_s0 = cx(-t * (p.gamma_s / 2.0 + p.lambda), -t * p.m_s()).exp();
    let c_l0 = cx(-t * (p.gamma_l / 2.0 + p.lambda), -t * p.m_l()).exp();
    let d_ss = 1.0 - (-t * p.gamma_s).exp();
    let d_ll = 1.0 - (-t * p.gamma_l).exp();
    let d_sl = (cx(1.0, 0.0) - a_sl) * p.delta_l;
    Ok(Coefficients {
        a_sl,
        b_s0,
        c_l0,
        d_ss,
        d_ll,
        d_sl,
    })
}

/// Closed-form propagator in the tilde representation.
pub fn evolve_tilde(rho0: &TildeState, p: &MesonParams, t: f64) -> Result<TildeState> {
    let c = coefficient_functions(p, t)?;
    let m0 = rho0.matrix();
    let mut m = CMatrix::zeros(3);
    m[(0, 0)] = m0[(0, 0)] * (-t * p.gamma_s).exp();
    m[(1, 1)] = m0[(1, 1)] * (-t * p.gamma_l).exp();
    m[(0, 1)] = m0[(0, 1)] * c.a_sl;
    m[(1, 0)] = m[(0, 1)].conj();
    let cross = (cx(1.0, 0.0) - c.a_sl) * m0[(0, 1)];
    m[(2, 2)] = cx(
        c.d_ss * m0[(0, 0)].re
            + c.d_ll * m0[(1, 1)].re
            + 2.0 * p.delta_l * cross.re
            + m0[(2, 2)].re,
        0.0,
    );
    Ok(TildeState {
        matrix: m,
        delta_l: rho0.delta_l,
    })
}

/// Six-operator Kraus family in the tilde representation (completeness
/// metric `g`).  Operators that vanish in the `lambda -> 0` limit are
/// dropped instead of branching.
pub fn kraus_breve(p: &MesonParams, t: f64) -> Result<KrausSet> {
    if t <= 0.0 {
        return Err(Error::InvalidParameter("Kraus family needs t > 0".into()));
    }
    let dl = p.delta_l;
    let one_m_es = 1.0 - (-t * p.gamma_s).exp();
    let one_m_el = 1.0 - (-t * p.gamma_l).exp();
    let a_sl = cx(-t * (p.gamma() + p.lambda), t * p.delta_m).exp();
    let one_m_a = cx(1.0, 0.0) - a_sl;
    let dephase = (1.0 - (-t * p.lambda).exp()).sqrt();

    let mut e0 = CMatrix::zeros(3);
    e0[(0, 0)] = cx(-t * (p.gamma_s + p.lambda) / 2.0, -t * p.m_s()).exp();
    e0[(1, 1)] = cx(-t * (p.gamma_l + p.lambda) / 2.0, -t * p.m_l()).exp();
    e0[(2, 2)] = cx((-t * p.lambda / 2.0).exp(), 0.0);

    let radicand = one_m_es - dl * dl * one_m_a.norm_sqr() / one_m_el;
    if radicand < -1e-13 {
        return Err(Error::NotCompletelyPositive { t, radicand });
    }
    let mut e1 = CMatrix::zeros(3);
    e1[(2, 0)] = cx(radicand.max(0.0).sqrt(), 0.0);

    let mut e2 = CMatrix::zeros(3);
    e2[(2, 0)] = one_m_a * dl / one_m_el.sqrt();
    e2[(2, 1)] = cx(one_m_el.sqrt(), 0.0);

    let mut e3 = CMatrix::zeros(3);
    e3[(0, 0)] = cx((-t * p.gamma_s / 2.0).exp() * dephase, 0.0);
    let mut e4 = CMatrix::zeros(3);
    e4[(1, 1)] = cx((-t * p.gamma_l / 2.0).exp() * dephase, 0.0);
    let mut e5 = CMatrix::zeros(3);
    e5[(2, 2)] = cx(dephase, 0.0);

    let operators = [e0, e1, e2, e3, e4, e5]
        .into_iter()
        .filter(|m| m.frobenius_norm() >= 1e-15)
        .collect();
    Ok(KrausSet::with_metric(operators, g_matrix(dl)))
}

/// Kraus family in the orthonormal CP basis, `E_i = V E_breve_i V^-1`.
pub fn kraus_orthonormal(p: &MesonParams, e: &CpViolation, t: f64) -> Result<KrausSet> {
    let breve = kraus_breve(p, t)?;
    let v = v_matrix(e);
    let v_inv = v.inverse()?;
    let ops = breve
        .operators
        .iter()
        .map(|k| v.matmul(k).matmul(&v_inv))
        .collect();
    Ok(KrausSet::orthonormal(ops))
}

/// Dyad-decomposition coefficient matrices `E_tilde_i = E_breve_i g^-1`.
pub fn kraus_dyad(p: &MesonParams, t: f64) -> Result<Vec<CMatrix>> {
    let breve = kraus_breve(p, t)?;
    let gi = g_inverse(p.delta_l);
    Ok(breve.operators.iter().map(|k| k.matmul(&gi)).collect())
}

/// Lindblad generators of the meson channel, mapped from the dyad
/// decomposition into the orthonormal CP basis through `V`.
pub fn meson_lindblad(p: &MesonParams, e: &CpViolation) -> Result<LindbladModel> {
    let dl = p.delta_l;
    let denom = 1.0 - dl * dl;
    let gl_sqrt = p.gamma_l.sqrt();
    let mix = cx(p.gamma() + p.lambda, -p.delta_m);

    let l1_radicand = p.gamma_s - dl * dl * mix.norm_sqr() / p.gamma_l;
    if l1_radicand < 0.0 {
        return Err(Error::LindbladInvalid);
    }
    // dyad coefficient matrices; rows/cols ordered (S, L, 0)
    let mut l1 = CMatrix::zeros(3);
    l1[(2, 0)] = cx(l1_radicand.sqrt() / denom, 0.0);
    l1[(2, 1)] = cx(-dl * l1_radicand.sqrt() / denom, 0.0);

    let mut l2 = CMatrix::zeros(3);
    l2[(2, 1)] = (cx(gl_sqrt, 0.0) - mix * (dl * dl / gl_sqrt)) / denom;
    l2[(2, 0)] = (cx(gl_sqrt, 0.0) - mix / gl_sqrt) * (-dl / denom);

    let sqrt_lambda = p.lambda.sqrt();
    let mut l3 = CMatrix::zeros(3);
    l3[(0, 0)] = cx(sqrt_lambda / denom, 0.0);
    l3[(0, 1)] = cx(-dl * sqrt_lambda / denom, 0.0);
    let mut l4 = CMatrix::zeros(3);
    l4[(1, 1)] = cx(sqrt_lambda / denom, 0.0);
    l4[(1, 0)] = cx(-dl * sqrt_lambda / denom, 0.0);
    let mut l5 = CMatrix::zeros(3);
    l5[(2, 2)] = cx(sqrt_lambda, 0.0);

    let mut h = CMatrix::zeros(3);
    h[(0, 0)] = cx(p.m_s() / denom, 0.0);
    h[(1, 1)] = cx(p.m_l() / denom, 0.0);
    h[(0, 1)] = cx(p.mean_mass_freq, -p.delta_gamma() / 4.0) * (-dl / denom);
    h[(1, 0)] = cx(p.mean_mass_freq, p.delta_gamma() / 4.0) * (-dl / denom);

    // map dyad coefficients C -> V C V^dag (dyads |b_i><b_j| with b = V e)
    let v = v_matrix(e);
    let to_ortho = |c: &CMatrix| v.matmul(c).matmul(&v.adjoint());
    let lindblad_ops = [l1, l2, l3, l4, l5]
        .iter()
        .map(&to_ortho)
        .filter(|m| m.frobenius_norm() >= 1e-15)
        .collect();
    Ok(LindbladModel {
        hamiltonian: to_ortho(&h).hermitize(),
        lindblad_ops,
    })
}

/// Detection probabilities at time `t` starting from `rho0`.
#[derive(Debug, Clone, Copy)]
pub struct DetectionProbabilities {
    pub p_k0: f64,
    pub p_k0_bar: f64,
    pub p_vacuum: f64,
}

pub fn detection_probabilities(
    rho0: &TildeState,
    p: &MesonParams,
    t: f64,
) -> Result<DetectionProbabilities> {
    let c = coefficient_functions(p, t)?;
    let m0 = rho0.matrix();
    let diag = (-t * p.gamma_s).exp() * m0[(0, 0)].re + (-t * p.gamma_l).exp() * m0[(1, 1)].re;
    let osc = 2.0 * (c.a_sl * m0[(0, 1)]).re;
    let p_k0 = 0.5 * (1.0 + p.delta_l) * (diag + osc);
    let p_k0_bar = 0.5 * (1.0 - p.delta_l) * (diag - osc);
    Ok(DetectionProbabilities {
        p_k0,
        p_k0_bar,
        p_vacuum: 1.0 - p_k0 - p_k0_bar,
    })
}

/// Expectation value of the strangeness operator at time `t`.
pub fn strangeness_expectation(rho0: &TildeState, p: &MesonParams, t: f64) -> Result<f64> {
    let c = coefficient_functions(p, t)?;
    let m0 = rho0.matrix();
    let diag = (-t * p.gamma_s).exp() * m0[(0, 0)].re + (-t * p.gamma_l).exp() * m0[(1, 1)].re;
    Ok(p.delta_l * diag + 2.0 * (c.a_sl * m0[(0, 1)]).re)
}

/// 9x9 Choi matrix of the tilde-representation map with the solved
/// coefficient functions.  PSD iff the channel is completely positive at `t`.
pub fn meson_choi(p: &MesonParams, t: f64) -> Result<CMatrix> {
    let c = coefficient_functions(p, t)?;
    let mut m = CMatrix::zeros(9);
    m[(0, 0)] = cx((-t * p.gamma_s).exp(), 0.0);
    m[(4, 4)] = cx((-t * p.gamma_l).exp(), 0.0);
    m[(8, 8)] = cx(1.0, 0.0);
    m[(0, 4)] = c.a_sl;
    m[(4, 0)] = c.a_sl.conj();
    m[(0, 8)] = c.b_s0;
    m[(8, 0)] = c.b_s0.conj();
    m[(4, 8)] = c.c_l0;
    m[(8, 4)] = c.c_l0.conj();
    m[(2, 2)] = cx(c.d_ss, 0.0);
    m[(5, 5)] = cx(c.d_ll, 0.0);
    m[(2, 5)] = c.d_sl;
    m[(5, 2)] = c.d_sl.conj();
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{apply_kraus, completeness_residual, integrate_master};
    use crate::linalg::sandwich;

    fn kaon_like() -> MesonParams {
        MesonParams::new(1.0 / 0.8953e-10, 1.0 / 5.18e-8, 0.5292e10, 3.27e-3, 0.0).unwrap()
    }

    #[test]
    fn delta_l_examples() {
        assert_eq!(
            delta_l_from_epsilon(&CpViolation::new(cx(0.0, 0.0)).unwrap()),
            0.0
        );
        assert_eq!(
            delta_l_from_epsilon(&CpViolation::new(cx(0.0, 0.3)).unwrap()),
            0.0
        );
        // Re(eps)/(1+|eps|^2) = 0.5e-3 gives delta_L = 1.0e-3
        let e = CpViolation::from_delta_l(1.0e-3).unwrap();
        assert!((delta_l_from_epsilon(&e) - 1.0e-3).abs() < 1e-15);
        assert!((e.epsilon().re - 0.5e-3).abs() < 1e-9);
    }

    #[test]
    fn basis_vector_overlaps() {
        let e = CpViolation::from_delta_l(3.27e-3).unwrap();
        let b = basis_vectors(&e);
        let dot = |x: &[Complex64; 3], y: &[Complex64; 3]| -> Complex64 {
            x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
        };
        assert!((dot(&b.ks, &b.ks).re - 1.0).abs() < 1e-14);
        assert!((dot(&b.kl, &b.kl).re - 1.0).abs() < 1e-14);
        assert!((dot(&b.ks, &b.kl).re - 3.27e-3).abs() < 1e-14);
        // eps = 0 collapses K_S, K_L onto the CP eigenstates
        let b0 = basis_vectors(&CpViolation::new(cx(0.0, 0.0)).unwrap());
        assert_eq!(b0.ks, b0.k1);
        assert_eq!(b0.kl, b0.k2);
        // Re(eps) = 1.635e-3 reproduces the overlap 3.27e-3
        let e2 = CpViolation::new(cx(1.635e-3, 0.0)).unwrap();
        let b2 = basis_vectors(&e2);
        assert!((dot(&b2.ks, &b2.kl).re - 3.27e-3).abs() < 1e-6);
    }

    #[test]
    fn gram_matrix_from_v() {
        let e = CpViolation::new(cx(2e-3, 5e-4)).unwrap();
        let v = v_matrix(&e);
        let g = v.adjoint().matmul(&v);
        let dl = delta_l_from_epsilon(&e);
        assert!(g.sub(&g_matrix(dl)).frobenius_norm() < 1e-14);
        // det(g) = 1 - delta_L^2 on the meson block
        let expect = 1.0 - dl * dl;
        let det = (g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)]).re;
        assert!((det - expect).abs() < 1e-15);
        // eps = 0: V = I, g = I
        let v0 = v_matrix(&CpViolation::new(cx(0.0, 0.0)).unwrap());
        assert!(v0.sub(&CMatrix::identity(3)).frobenius_norm() == 0.0);
    }

    #[test]
    fn metric_trace_equals_plain_trace_of_orthonormal() {
        let e = CpViolation::from_delta_l(0.2).unwrap();
        let st = prepare_tilde(StateKind::K0, 0.2).unwrap();
        let tr = st.to_orthonormal(&e).trace().re;
        assert!((tr - st.metric_trace()).abs() < 1e-13);
    }

    #[test]
    fn prepare_tilde_presets() {
        let dl = 3.27e-3;
        for kind in [
            StateKind::K0,
            StateKind::K0Bar,
            StateKind::Ks,
            StateKind::Kl,
            StateKind::K1,
            StateKind::K2,
            StateKind::Vacuum,
        ] {
            let st = prepare_tilde(kind, dl).unwrap();
            assert!((st.metric_trace() - 1.0).abs() < 1e-12, "{kind:?}");
        }
        let k0 = prepare_tilde(StateKind::K0, dl).unwrap();
        let expect = 1.0 / (2.0 * (1.0 + dl));
        assert!((k0.matrix()[(0, 0)].re - expect).abs() < 1e-15);
        assert!((k0.matrix()[(0, 1)].re - expect).abs() < 1e-15);
        let k0b = prepare_tilde(StateKind::K0Bar, dl).unwrap();
        let expect = 1.0 / (2.0 * (1.0 - dl));
        assert!((k0b.matrix()[(0, 0)].re - expect).abs() < 1e-15);
        assert!((k0b.matrix()[(0, 1)].re + expect).abs() < 1e-15);
    }

    #[test]
    fn vacuum_is_fixed_point() {
        let p = kaon_like();
        let vac = prepare_tilde(StateKind::Vacuum, p.delta_l).unwrap();
        for &t in &[0.0, 0.8953e-10, 5.18e-8] {
            let out = evolve_tilde(&vac, &p, t).unwrap();
            assert!(out.matrix().sub(vac.matrix()).frobenius_norm() < 1e-15);
        }
    }

    #[test]
    fn coefficient_initial_conditions_and_bound() {
        let p = kaon_like();
        let c = coefficient_functions(&p, 0.0).unwrap();
        assert_eq!(c.a_sl, cx(1.0, 0.0));
        assert_eq!(c.b_s0, cx(1.0, 0.0));
        assert_eq!(c.c_l0, cx(1.0, 0.0));
        assert_eq!(c.d_ss, 0.0);
        assert_eq!(c.d_sl, cx(0.0, 0.0));
        for k in 1..50 {
            let t = 0.8953e-10 * k as f64 / 10.0;
            let c = coefficient_functions(&p, t).unwrap();
            assert!(c.a_sl.norm_sqr() <= (-t * (p.gamma_s + p.gamma_l)).exp() + 1e-15);
        }
    }

    #[test]
    fn short_lived_population_decay() {
        let p = kaon_like();
        let ks = prepare_tilde(StateKind::Ks, p.delta_l).unwrap();
        let out = evolve_tilde(&ks, &p, 0.8953e-10).unwrap();
        assert!((out.matrix()[(0, 0)].re - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn evolve_consistent_with_probabilities() {
        let p = kaon_like();
        let k0 = prepare_tilde(StateKind::K0, p.delta_l).unwrap();
        let t = 0.8953e-10;
        let out = evolve_tilde(&k0, &p, t).unwrap();
        let probs = detection_probabilities(&k0, &p, t).unwrap();
        let vac = out.matrix()[(2, 2)].re;
        assert!((vac - probs.p_vacuum).abs() < 1e-12);
    }

    #[test]
    fn metric_trace_preserved() {
        let p = kaon_like();
        let k0 = prepare_tilde(StateKind::K0, p.delta_l).unwrap();
        for k in 0..20 {
            let t = 5.18e-8 * k as f64 / 2.0;
            let out = evolve_tilde(&k0, &p, t).unwrap();
            assert!((out.metric_trace() - 1.0).abs() <= 1e-13);
        }
    }

    #[test]
    fn breve_kraus_complete_and_equivalent() {
        let mut p = kaon_like();
        p.lambda = 1e10;
        let t = 0.8953e-10;
        let ks = kraus_breve(&p, t).unwrap();
        assert!(completeness_residual(&ks) <= 1e-11);
        let k0 = prepare_tilde(StateKind::K0, p.delta_l).unwrap();
        let via_kraus = apply_kraus(k0.matrix(), &ks).unwrap();
        let closed = evolve_tilde(&k0, &p, t).unwrap();
        assert!(via_kraus.sub(closed.matrix()).frobenius_norm() <= 1e-11);
    }

    #[test]
    fn breve_kraus_small_time_limit() {
        let p = kaon_like();
        let t = 1e-16;
        let ks = kraus_breve(&p, t).unwrap();
        assert!(ks.operators[0].sub(&CMatrix::identity(3)).frobenius_norm() < 1e-5);
        for op in &ks.operators[1..] {
            assert!(op.frobenius_norm() < 1e-2);
        }
    }

    #[test]
    fn orthonormal_kraus_identity_completeness() {
        let mut p = kaon_like();
        p.lambda = 1e10;
        let e = CpViolation::from_delta_l(p.delta_l).unwrap();
        let ks = kraus_orthonormal(&p, &e, 0.8953e-10).unwrap();
        assert!(completeness_residual(&ks) <= 1e-11);
        // eps = 0 collapses E_i onto E_breve_i
        let mut p0 = p;
        p0.delta_l = 0.0;
        let e0 = CpViolation::new(cx(0.0, 0.0)).unwrap();
        let a = kraus_orthonormal(&p0, &e0, 1e-10).unwrap();
        let b = kraus_breve(&p0, 1e-10).unwrap();
        for (x, y) in a.operators.iter().zip(&b.operators) {
            assert!(x.sub(y).frobenius_norm() < 1e-13);
        }
    }

    #[test]
    fn dyad_kraus_matches_explicit_forms() {
        // compare E_tilde = E_breve g^-1 with the explicit dyad expressions
        let mut p = kaon_like();
        p.lambda = 0.7e10;
        let dl = p.delta_l;
        let denom = 1.0 - dl * dl;
        for k in 1..=10 {
            let t = 0.8953e-10 * k as f64 * 0.37;
            let tilde = kraus_dyad(&p, t).unwrap();
            let one_m_el = 1.0 - (-t * p.gamma_l).exp();
            let a_sl = cx(-t * (p.gamma() + p.lambda), t * p.delta_m).exp();
            let one_m_a = cx(1.0, 0.0) - a_sl;

            // E_tilde_0
            let es = cx(-t * (p.gamma_s + p.lambda) / 2.0, -t * p.m_s()).exp();
            let el = cx(-t * (p.gamma_l + p.lambda) / 2.0, -t * p.m_l()).exp();
            let mut e0 = CMatrix::zeros(3);
            e0[(0, 0)] = es / denom;
            e0[(1, 1)] = el / denom;
            e0[(0, 1)] = es * (-dl / denom);
            e0[(1, 0)] = el * (-dl / denom);
            e0[(2, 2)] = cx((-t * p.lambda / 2.0).exp(), 0.0);
            assert!(tilde[0].sub(&e0).frobenius_norm() < 1e-10, "t = {t}");

            // E_tilde_2 off-diagonal row
            let sq = one_m_el.sqrt();
            let mut e2 = CMatrix::zeros(3);
            e2[(2, 1)] = (cx(sq, 0.0) - one_m_a * (dl * dl / sq)) / denom;
            e2[(2, 0)] = (cx(sq, 0.0) - one_m_a / sq) * (-dl / denom);
            assert!(tilde[2].sub(&e2).frobenius_norm() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn lindblad_reduces_to_two_damping_channels() {
        let p = MesonParams::new(2.0, 1.0, 3.0, 0.0, 0.0).unwrap();
        let e = CpViolation::new(cx(0.0, 0.0)).unwrap();
        let model = meson_lindblad(&p, &e).unwrap();
        assert_eq!(model.lindblad_ops.len(), 2);
        assert!((model.lindblad_ops[0][(2, 0)].re - 2.0f64.sqrt()).abs() < 1e-15);
        assert!((model.lindblad_ops[1][(2, 1)].re - 1.0).abs() < 1e-15);
        // H diagonal
        assert!(model.hamiltonian[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn hamiltonian_masses_and_cpt() {
        let p = kaon_like().with_mean_mass_freq(7.56e23);
        let e = CpViolation::from_delta_l(p.delta_l).unwrap();
        let model = meson_lindblad(&p, &e).unwrap();
        // strangeness basis -> CP basis: |K0> = (K1 + K2)/sqrt(2)
        let s = 1.0 / 2.0f64.sqrt();
        let k0 = [cx(s, 0.0), cx(s, 0.0), cx(0.0, 0.0)];
        let k0bar = [cx(s, 0.0), cx(-s, 0.0), cx(0.0, 0.0)];
        let m_k0 = sandwich(&k0, &model.hamiltonian, &k0).re;
        let m_k0bar = sandwich(&k0bar, &model.hamiltonian, &k0bar).re;
        assert!((m_k0 - p.mean_mass_freq).abs() <= 1e-12 * p.mean_mass_freq);
        assert!((m_k0 - m_k0bar).abs() <= 1e-12 * p.mean_mass_freq);
        // mass splitting checked at zero mean mass, where the difference of
        // the sandwiches is free of large-number cancellation
        let p0 = kaon_like();
        let model0 = meson_lindblad(&p0, &e).unwrap();
        let v = v_matrix(&e);
        let ks_vec = [v[(0, 0)], v[(1, 0)], v[(2, 0)]];
        let kl_vec = [v[(0, 1)], v[(1, 1)], v[(2, 1)]];
        let m_l = sandwich(&kl_vec, &model0.hamiltonian, &kl_vec).re;
        let m_s = sandwich(&ks_vec, &model0.hamiltonian, &ks_vec).re;
        assert!((m_l - m_s - p0.delta_m).abs() <= 1e-9 * p0.delta_m);
        assert!((m_l - p0.delta_m / 2.0).abs() <= 1e-9 * p0.delta_m);
    }

    #[test]
    fn lindblad_matches_closed_form() {
        let mut p = kaon_like();
        p.lambda = 1e10;
        let e = CpViolation::from_delta_l(p.delta_l).unwrap();
        let model = meson_lindblad(&p, &e).unwrap();
        let k0 = prepare_tilde(StateKind::K0, p.delta_l).unwrap();
        let rho0 = k0.to_orthonormal(&e);
        let t = 0.8953e-10;
        let rk4 = integrate_master(&model, &rho0, t, 100_000).unwrap();
        let closed = evolve_tilde(&k0, &p, t).unwrap().to_orthonormal(&e);
        let err = rk4.sub(&closed).max_abs();
        assert!(err <= 1e-7, "err = {err}");
    }

    #[test]
    fn probabilities_initial_and_oscillation() {
        let p = kaon_like();
        let k0 = prepare_tilde(StateKind::K0, p.delta_l).unwrap();
        let probs = detection_probabilities(&k0, &p, 0.0).unwrap();
        assert!((probs.p_k0 - 1.0).abs() < 1e-14);
        assert!(probs.p_k0_bar.abs() < 1e-14);
        assert!(probs.p_vacuum.abs() < 1e-14);
        // equal widths, no CP violation: p_K0 = e^{-t Gamma} cos^2(t dm / 2)
        let p2 = MesonParams::new(2.0, 2.0, 3.0, 0.0, 0.0).unwrap();
        let k0 = prepare_tilde(StateKind::K0, 0.0).unwrap();
        for k in 1..10 {
            let t = 0.3 * k as f64;
            let probs = detection_probabilities(&k0, &p2, t).unwrap();
            let expect = (-2.0 * t).exp() * (1.5 * t).cos().powi(2);
            assert!((probs.p_k0 - expect).abs() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn strangeness_values() {
        let p = kaon_like();
        let k0 = prepare_tilde(StateKind::K0, p.delta_l).unwrap();
        assert!((strangeness_expectation(&k0, &p, 0.0).unwrap() - 1.0).abs() < 1e-14);
        // initial K_S: only the delta_L-weighted diagonal survives
        let ks = prepare_tilde(StateKind::Ks, p.delta_l).unwrap();
        let t = 0.8953e-10;
        let expect = p.delta_l * (-t * p.gamma_s).exp() * ks.matrix()[(0, 0)].re;
        assert!((strangeness_expectation(&ks, &p, t).unwrap() - expect).abs() < 1e-15);
        // far future: everything decayed
        let late = strangeness_expectation(&k0, &p, 20.0 * 5.18e-8).unwrap();
        assert!(late.abs() < 1e-10);
    }

    #[test]
    fn superselection_violation_rejected() {
        let mut m = prepare_tilde(StateKind::K0, 0.1).unwrap().matrix().clone();
        m[(0, 2)] = cx(0.1, 0.0);
        m[(2, 0)] = cx(0.1, 0.0);
        assert!(matches!(
            TildeState::new(m, 0.1),
            Err(Error::SuperselectionViolated)
        ));
    }

    #[test]
    fn reduction_to_scalar_channels_at_zero_overlap() {
        use crate::scalar::{evolve_scalar_matrix, ScalarParams};
        let p = MesonParams::new(2.0, 0.5, 0.0, 0.0, 0.0).unwrap();
        let mut m = CMatrix::zeros(3);
        m[(0, 0)] = cx(0.4, 0.0);
        m[(1, 1)] = cx(0.35, 0.0);
        m[(2, 2)] = cx(0.25, 0.0);
        let st = TildeState::new(m, 0.0).unwrap();
        let t = 0.9;
        let out = evolve_tilde(&st, &p, t).unwrap();
        // S sector behaves as a scalar channel of width Gamma_S
        let ps = ScalarParams::superselected(2.0, 0.0).unwrap();
        let s_in = CMatrix::from_vec(
            2,
            vec![cx(0.4, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.6, 0.0)],
        )
        .unwrap();
        let s_out = evolve_scalar_matrix(&s_in, &ps, t).unwrap();
        assert!((out.matrix()[(0, 0)].re - s_out[(0, 0)].re).abs() <= 1e-12);
        let pl = ScalarParams::superselected(0.5, 0.0).unwrap();
        let l_in = CMatrix::from_vec(
            2,
            vec![cx(0.35, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.65, 0.0)],
        )
        .unwrap();
        let l_out = evolve_scalar_matrix(&l_in, &pl, t).unwrap();
        assert!((out.matrix()[(1, 1)].re - l_out[(0, 0)].re).abs() <= 1e-12);
    }

    #[test]
    fn choi_structure() {
        let p = kaon_like();
        // lambda = 0 keeps the map completely positive at all sampled times
        for k in 1..50 {
            let t = 10f64.powf(-14.0 + 8.0 * k as f64 / 49.0);
            let choi = meson_choi(&p, t).unwrap();
            assert!(choi.is_psd(1e-12).unwrap(), "t = {t}");
        }
    }
}
