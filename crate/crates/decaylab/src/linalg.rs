//! Minimal dense complex-matrix layer.
//!
//! Everything in this crate lives in dimension 2, 3, 4 or 9 (tensor products
//! of the meson channel), so a plain row-major `Vec<Complex64>` with direct
//! `O(n^3)` kernels is the right tool.  Hermitian eigenvalues come from cyclic
//! Jacobi rotations; no external solver is involved.

use num_complex::Complex64;

use crate::{Error, Result};

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_vec(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch(entries.len(), dim * dim));
        }
        Ok(Self { dim, data: entries })
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        Self::diag(
            &entries
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>(),
        )
    }

    /// Outer product `v w^dag` of two column vectors.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        assert_eq!(v.len(), w.len());
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * w[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self { dim: self.dim, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self { dim: self.dim, data }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.matmul(other).add(&other.matmul(self))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Kronecker (tensor) product; the right factor varies fastest.
    pub fn kron(&self, other: &Self) -> Self {
        let (na, nb) = (self.dim, other.dim);
        let n = na * nb;
        let mut out = Self::zeros(n);
        for i in 0..na {
            for j in 0..na {
                let a = self[(i, j)];
                for k in 0..nb {
                    for l in 0..nb {
                        out[(i * nb + k, j * nb + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// `(M + M^dag)/2`.
    pub fn hermitize(&self) -> Self {
        self.add(&self.adjoint()).scale_re(0.5)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.sub(&self.adjoint()).frobenius_norm() <= tol
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a[(i, col)]
                        .norm()
                        .partial_cmp(&a[(j, col)].norm())
                        .unwrap()
                })
                .unwrap();
            if a[(pivot, col)].norm() == 0.0 {
                return Err(Error::Singular);
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                    inv.data.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[(i, col)];
                if f.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let ac = a[(col, j)];
                    let ic = inv[(col, j)];
                    a[(i, j)] -= f * ac;
                    inv[(i, j)] -= f * ic;
                }
            }
        }
        Ok(inv)
    }

    fn check_hermitian(&self) -> Result<()> {
        let tau = 1e-10 * self.frobenius_norm().max(f64::MIN_POSITIVE);
        if self.is_hermitian(tau) {
            Ok(())
        } else {
            Err(Error::NotHermitian)
        }
    }

    /// Eigendecomposition `M = Q diag(w) Q^dag` of a Hermitian matrix by
    /// cyclic complex Jacobi rotations.  Eigenvalues ascending, eigenvectors
    /// in the columns of `Q`.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, CMatrix)> {
        self.check_hermitian()?;
        let n = self.dim;
        let mut a = self.hermitize();
        let mut q = Self::identity(n);
        let thresh = 1e-14 * a.frobenius_norm();
        for _sweep in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for r in p + 1..n {
                    off += 2.0 * a[(p, r)].norm_sqr();
                }
            }
            if off.sqrt() <= thresh {
                break;
            }
            for p in 0..n {
                for r in p + 1..n {
                    let apq = a[(p, r)];
                    let mag = apq.norm();
                    if mag == 0.0 {
                        continue;
                    }
                    let phase = apq / mag;
                    let app = a[(p, p)].re;
                    let aqq = a[(r, r)].re;
                    let tau = (aqq - app) / (2.0 * mag);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // rows p, r of A <- U^dag A
                    for j in 0..n {
                        let xp = a[(p, j)];
                        let xq = a[(r, j)];
                        a[(p, j)] = xp * c - xq * s * phase;
                        a[(r, j)] = xp * s * phase.conj() + xq * c;
                    }
                    // columns p, r of A <- A U, and of Q <- Q U
                    for i in 0..n {
                        let xp = a[(i, p)];
                        let xq = a[(i, r)];
                        a[(i, p)] = xp * c - xq * s * phase.conj();
                        a[(i, r)] = xp * s * phase + xq * c;
                        let yp = q[(i, p)];
                        let yq = q[(i, r)];
                        q[(i, p)] = yp * c - yq * s * phase.conj();
                        q[(i, r)] = yp * s * phase + yq * c;
                    }
                }
            }
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
        let w: Vec<f64> = idx.iter().map(|&i| a[(i, i)].re).collect();
        let mut qs = Self::zeros(n);
        for (new, &old) in idx.iter().enumerate() {
            for i in 0..n {
                qs[(i, new)] = q[(i, old)];
            }
        }
        Ok((w, qs))
    }

    /// All eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.hermitian_eigen()?.0)
    }

    /// `true` iff the smallest eigenvalue is at least `-tol`.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        let w = self.hermitian_eigenvalues()?;
        Ok(w.first().map_or(true, |&min| min >= -tol))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.hermitian_eigenvalues()?[0])
    }

    /// Apply to a column vector.
    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// `<psi| M |phi>` for column vectors in the same basis as `M`.
pub fn sandwich(psi: &[Complex64], m: &CMatrix, phi: &[Complex64]) -> Complex64 {
    let mv = m.apply_vec(phi);
    psi.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
}
