//! Representation-independent channel machinery.
//!
//! A [`KrausSet`] carries the metric of its representation: the identity for
//! orthonormal bases, the Gram matrix `g` for the nonorthogonal short/long
//! dyad representation of the meson channel.  Trace preservation is the
//! completeness relation `sum_i K_i^dag metric K_i = metric`.

use num_complex::Complex64;

use crate::linalg::CMatrix;
use crate::meson::{self, CpViolation, MesonParams};
use crate::{Error, Result};

/// Operator-sum representation of a channel.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub operators: Vec<CMatrix>,
    pub metric: CMatrix,
}

impl KrausSet {
    /// Set in an orthonormal representation (identity metric).
    pub fn orthonormal(operators: Vec<CMatrix>) -> Self {
        let dim = operators.first().map_or(0, |k| k.dim());
        Self {
            operators,
            metric: CMatrix::identity(dim),
        }
    }

    pub fn with_metric(operators: Vec<CMatrix>, metric: CMatrix) -> Self {
        Self { operators, metric }
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }
}

/// `sum_i K_i rho K_i^dag`.
pub fn apply_kraus(state: &CMatrix, ks: &KrausSet) -> Result<CMatrix> {
    if state.dim() != ks.dim() {
        return Err(Error::DimMismatch(state.dim(), ks.dim()));
    }
    let mut out = CMatrix::zeros(state.dim());
    for k in &ks.operators {
        out = out.add(&k.matmul(state).matmul(&k.adjoint()));
    }
    Ok(out)
}

/// Frobenius norm of `sum_i K_i^dag metric K_i - metric`.
pub fn completeness_residual(ks: &KrausSet) -> f64 {
    let mut sum = CMatrix::zeros(ks.dim());
    for k in &ks.operators {
        sum = sum.add(&k.adjoint().matmul(&ks.metric).matmul(k));
    }
    sum.sub(&ks.metric).frobenius_norm()
}

/// Generator of a Lindblad master equation,
/// `drho/dt = -i[H, rho] + {K, rho} + sum_i L_i rho L_i^dag`
/// with `K = -1/2 sum_i L_i^dag L_i`.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    pub hamiltonian: CMatrix,
    pub lindblad_ops: Vec<CMatrix>,
}

impl LindbladModel {
    /// `K = -1/2 sum_i L_i^dag L_i`.
    pub fn damping_operator(&self) -> CMatrix {
        let mut k = CMatrix::zeros(self.hamiltonian.dim());
        for l in &self.lindblad_ops {
            k = k.add(&l.adjoint().matmul(l));
        }
        k.scale_re(-0.5)
    }

    fn rhs(&self, k: &CMatrix, rho: &CMatrix) -> CMatrix {
        let mut out = self
            .hamiltonian
            .commutator(rho)
            .scale(Complex64::new(0.0, -1.0));
        out = out.add(&k.anticommutator(rho));
        for l in &self.lindblad_ops {
            out = out.add(&l.matmul(rho).matmul(&l.adjoint()));
        }
        out
    }
}

/// Fixed-step classical RK4 integration of the master equation.
///
/// The state is re-Hermitized each step so roundoff cannot leak into
/// eigenvalue-based positivity checks downstream.
pub fn integrate_master(
    model: &LindbladModel,
    rho0: &CMatrix,
    t: f64,
    steps: usize,
) -> Result<CMatrix> {
    if t < 0.0 {
        return Err(Error::NegativeTime);
    }
    if !rho0.is_hermitian(1e-12 * rho0.frobenius_norm().max(1.0)) {
        return Err(Error::NotHermitian);
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let steps = steps.max(1);
    let h = t / steps as f64;
    let k_op = model.damping_operator();
    let mut rho = rho0.clone();
    for _ in 0..steps {
        let k1 = model.rhs(&k_op, &rho);
        let k2 = model.rhs(&k_op, &rho.add(&k1.scale_re(h / 2.0)));
        let k3 = model.rhs(&k_op, &rho.add(&k2.scale_re(h / 2.0)));
        let k4 = model.rhs(&k_op, &rho.add(&k3.scale_re(h)));
        let incr = k1
            .add(&k2.scale_re(2.0))
            .add(&k3.scale_re(2.0))
            .add(&k4)
            .scale_re(h / 6.0);
        rho = rho.add(&incr).hermitize();
    }
    Ok(rho)
}

/// `|| E(E(state, t1), t2) - E(state, t1 + t2) ||_F` for a candidate
/// semigroup evolver.
pub fn semigroup_residual<F>(evolver: F, state: &CMatrix, t1: f64, t2: f64) -> f64
where
    F: Fn(&CMatrix, f64) -> CMatrix,
{
    let two_step = evolver(&evolver(state, t1), t2);
    let one_step = evolver(state, t1 + t2);
    two_step.sub(&one_step).frobenius_norm()
}

/// Evolve a two-particle state (9x9, orthonormal representation) under the
/// product channel `{E_i (x) F_j}` of two noninteracting mesons.
pub fn tensor_evolve_pair(
    state12: &CMatrix,
    p_a: &MesonParams,
    p_b: &MesonParams,
    e_a: &CpViolation,
    e_b: &CpViolation,
    t: f64,
) -> Result<CMatrix> {
    if state12.dim() != 9 {
        return Err(Error::DimMismatch(state12.dim(), 9));
    }
    if t == 0.0 {
        return Ok(state12.clone());
    }
    let ka = meson::kraus_orthonormal(p_a, e_a, t)?;
    let kb = meson::kraus_orthonormal(p_b, e_b, t)?;
    let mut ops = Vec::with_capacity(ka.operators.len() * kb.operators.len());
    for ea in &ka.operators {
        for fb in &kb.operators {
            ops.push(ea.kron(fb));
        }
    }
    apply_kraus(state12, &KrausSet::orthonormal(ops))
}
