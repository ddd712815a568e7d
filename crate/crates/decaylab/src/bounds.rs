//! Complete-positivity constraints on the meson decoherence parameter.
//!
//! The channel is completely positive at time `t` iff
//! `delta_L^2 (1 - 2 e^{-t(Gamma+lambda)} cos(t dm) + e^{-2t(Gamma+lambda)})
//!  <= (1 - e^{-t Gamma_S})(1 - e^{-t Gamma_L})`.
//! Demanding this for all `t >= 0` bounds `lambda` from above by the infimum
//! `lambda_max` of the per-time upper bound over `(0, t_plus]`, where
//! `t_plus` is the last time the upper bound is active.
//!
//! All discriminant values here follow the `Delta / delta_L^2` convention:
//! [`discriminant`] returns the bracketed, delta-independent-looking quantity
//! `(1 - e^{-t Gamma_S})(1 - e^{-t Gamma_L}) - delta_L^2 sin^2(t dm)`.

use rayon::prelude::*;

use crate::meson::MesonParams;
use crate::{Error, Result};

/// Everything `lambda_max` learns about a parameter set.
#[derive(Debug, Clone)]
pub struct BoundReport {
    /// Last time at which the upper bound on `lambda` is active (s).
    pub t_plus: f64,
    /// Infimum of the upper bound over `(0, t_plus]` (s^-1).
    pub lambda_max: f64,
    /// First-order closed form `sqrt(Gamma_S Gamma_L - delta_L^2 dm^2)/delta_L - Gamma`.
    pub lambda_max_first_order: f64,
    /// Whether `delta_L <= sqrt(Gamma_S Gamma_L)/dm` holds.
    pub necessary_ok: bool,
    /// `sqrt(Gamma_S Gamma_L)/dm - delta_L`.
    pub necessary_margin: f64,
    /// Samples `(t, lower_bound, upper_bound)` over `(0, t_plus]`.
    pub grid: Vec<(f64, f64, f64)>,
}

/// Both sides of the complete-positivity inequality at time `t`.
#[derive(Debug, Clone, Copy)]
pub struct CpInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

pub fn cp_inequality(p: &MesonParams, t: f64) -> Result<CpInequality> {
    if t < 0.0 {
        return Err(Error::NegativeTime);
    }
    let x = (-t * (p.gamma() + p.lambda)).exp();
    let lhs = p.delta_l * p.delta_l * (1.0 - 2.0 * x * (t * p.delta_m).cos() + x * x);
    let rhs = (1.0 - (-t * p.gamma_s).exp()) * (1.0 - (-t * p.gamma_l).exp());
    Ok(CpInequality {
        lhs,
        rhs,
        ok: lhs <= rhs + 1e-15,
    })
}

/// `(1 - e^{-t Gamma_S})(1 - e^{-t Gamma_L}) - delta_L^2 sin^2(t dm)`,
/// i.e. the quadratic discriminant divided by `delta_L^2`.  Independent of
/// `lambda`; nonnegativity is required for real per-time bounds.
pub fn discriminant(p: &MesonParams, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::NegativeTime);
    }
    let s = (t * p.delta_m).sin();
    Ok((1.0 - (-t * p.gamma_s).exp()) * (1.0 - (-t * p.gamma_l).exp())
        - p.delta_l * p.delta_l * s * s)
}

/// The necessary condition `delta_L <= sqrt(Gamma_S Gamma_L)/dm`.
#[derive(Debug, Clone, Copy)]
pub struct NecessaryBound {
    pub bound: f64,
    pub ok: bool,
}

pub fn necessary_delta_bound(p: &MesonParams) -> NecessaryBound {
    let bound = if p.delta_m == 0.0 {
        f64::INFINITY
    } else {
        (p.gamma_s * p.gamma_l).sqrt() / p.delta_m
    };
    NecessaryBound {
        bound,
        ok: p.delta_l <= bound,
    }
}

/// `sqrt(discriminant)/delta_L`, clamped at zero.
fn sqrt_disc_over_delta(p: &MesonParams, t: f64) -> f64 {
    let d = discriminant(p, t).unwrap_or(0.0).max(0.0);
    d.sqrt() / p.delta_l
}

/// `cos(t dm) - sqrt(discriminant)/delta_L`; positive on `(0, t_plus)` and
/// zero at `t_plus`.
fn active_expression(p: &MesonParams, t: f64) -> f64 {
    (t * p.delta_m).cos() - sqrt_disc_over_delta(p, t)
}

/// Last time at which the upper bound on `lambda` is active: the smallest
/// positive root of `cos(t dm) = sqrt(discriminant)/delta_L`, bracketed by
/// interval doubling and refined by bisection to relative 1e-10.
pub fn t_plus(p: &MesonParams) -> Result<f64> {
    if p.delta_l == 0.0 {
        return Err(Error::NoTPlus);
    }
    let nb = necessary_delta_bound(p);
    if !nb.ok {
        return Err(Error::InvalidParameter(format!(
            "delta_L = {} exceeds the necessary bound {}",
            p.delta_l, nb.bound
        )));
    }
    let scale = if p.delta_m > 0.0 {
        1.0 / p.delta_m
    } else {
        1.0 / p.gamma_s.min(p.gamma_l)
    };
    let mut lo = 1e-6 * scale;
    if active_expression(p, lo) <= 0.0 {
        return Err(Error::NoTPlus);
    }
    let limit = if p.delta_m > 0.0 {
        2.0 * std::f64::consts::PI / p.delta_m
    } else {
        f64::INFINITY
    };
    let mut hi = lo;
    for _ in 0..200 {
        hi *= 2.0;
        if active_expression(p, hi) <= 0.0 {
            break;
        }
        if hi > limit {
            return Err(Error::NoTPlus);
        }
    }
    if active_expression(p, hi) > 0.0 {
        return Err(Error::NoTPlus);
    }
    while (hi - lo) > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if active_expression(p, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Per-time bounds on `lambda`.
#[derive(Debug, Clone, Copy)]
pub struct LambdaBounds {
    pub lower: f64,
    /// `+inf` once the constraint is inactive (`t >= t_plus`).
    pub upper: f64,
}

pub fn lambda_bounds_at(p: &MesonParams, t: f64) -> Result<LambdaBounds> {
    if t <= 0.0 {
        return Err(Error::InvalidParameter("bounds need t > 0".into()));
    }
    let s = sqrt_disc_over_delta(p, t);
    // 1 - cos(t dm), evaluated without cancellation
    let y = 2.0 * (0.5 * t * p.delta_m).sin().powi(2);
    // lower: -(1/t) ln(cos + s) - Gamma = -(1/t) ln(1 + (s - y)) - Gamma
    let lower = if s - y > -1.0 {
        -(s - y).ln_1p() / t - p.gamma()
    } else {
        f64::NEG_INFINITY
    };
    // upper: -(1/t) ln(cos - s) - Gamma = -(1/t) ln(1 - (y + s)) - Gamma
    let upper = if y + s < 1.0 {
        -(-(y + s)).ln_1p() / t - p.gamma()
    } else {
        f64::INFINITY
    };
    Ok(LambdaBounds { lower, upper })
}

/// First-order closed form of the infimum,
/// `sqrt(Gamma_S Gamma_L - delta_L^2 dm^2)/delta_L - Gamma`.
pub fn lambda_max_first_order(p: &MesonParams) -> f64 {
    if p.delta_l == 0.0 {
        return f64::INFINITY;
    }
    (p.gamma_s * p.gamma_l - p.delta_l * p.delta_l * p.delta_m * p.delta_m).sqrt() / p.delta_l
        - p.gamma()
}

const GRID_POINTS: usize = 2048;
const REPORT_SAMPLES: usize = 256;

/// Infimum over `(0, t_plus]` of the per-time upper bound, with the full
/// diagnostic report.  Dense log-grid scan followed by golden-section
/// refinement to relative 1e-6.
pub fn lambda_max(p: &MesonParams) -> Result<BoundReport> {
    let nb = necessary_delta_bound(p);
    if p.delta_l == 0.0 {
        return Ok(BoundReport {
            t_plus: f64::INFINITY,
            lambda_max: f64::INFINITY,
            lambda_max_first_order: f64::INFINITY,
            necessary_ok: nb.ok,
            necessary_margin: f64::INFINITY,
            grid: Vec::new(),
        });
    }
    let tp = t_plus(p)?;
    let upper_at = |t: f64| lambda_bounds_at(p, t).map_or(f64::INFINITY, |b| b.upper);

    let t_lo = 1e-8 * tp;
    let log_lo = t_lo.ln();
    let log_hi = tp.ln();
    let grid_t: Vec<f64> = (0..GRID_POINTS)
        .map(|i| (log_lo + (log_hi - log_lo) * i as f64 / (GRID_POINTS - 1) as f64).exp())
        .collect();
    let values: Vec<f64> = grid_t.par_iter().map(|&t| upper_at(t)).collect();
    let (i_min, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty grid");

    // golden-section refinement between the neighbors of the grid minimum
    let mut a = grid_t[i_min.saturating_sub(1)];
    let mut b = grid_t[(i_min + 1).min(GRID_POINTS - 1)];
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = upper_at(x1);
    let mut f2 = upper_at(x2);
    while (b - a) > 1e-6 * b {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = upper_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = upper_at(x2);
        }
    }
    let refined = upper_at(0.5 * (a + b));
    let lam_max = values[i_min].min(refined);

    let grid = (0..REPORT_SAMPLES)
        .map(|i| {
            let t = (log_lo + (log_hi - log_lo) * i as f64 / (REPORT_SAMPLES - 1) as f64).exp();
            let bnd = lambda_bounds_at(p, t).expect("t > 0 on report grid");
            (t, bnd.lower, bnd.upper)
        })
        .collect();

    Ok(BoundReport {
        t_plus: tp,
        lambda_max: lam_max,
        lambda_max_first_order: lambda_max_first_order(p),
        necessary_ok: nb.ok,
        necessary_margin: nb.bound - p.delta_l,
        grid,
    })
}

/// Whether a measured value `lambda +err_hi/-err_lo` is compatible with the
/// allowed range `[0, lambda_max]` (interval intersection).
pub fn experimental_lambda_check(
    lambda_max: f64,
    lambda_measured: f64,
    err_lo: f64,
    err_hi: f64,
) -> bool {
    let lo = lambda_measured - err_lo.abs();
    let hi = lambda_measured + err_hi.abs();
    hi >= 0.0 && lo <= lambda_max
}
