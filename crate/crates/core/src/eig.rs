//! Cyclic Jacobi diagonalization of small dense symmetric matrices.
//!
//! Dimensions up to 64 are supported; the covariance matrices this crate
//! produces are (n+1) x (n+1) with n a handful. Sweeps visit (p, q) pairs in
//! a fixed row-major order, so results are deterministic.

use crate::error::{Error, Result};
use crate::real::Real;

/// Dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<R> {
    pub dim: usize,
    pub data: Vec<R>,
}

impl<R: Real> SymMatrix<R> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![R::zero(); dim * dim] }
    }

    pub fn from_rows(rows: &[Vec<R>]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.len(), dim);
            data.extend_from_slice(r);
        }
        Self { dim, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> R {
        self.data[i * self.dim + j]
    }

    /// Sets the `(i, j)` and `(j, i)` entries.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    /// Frobenius norm.
    pub fn norm(&self) -> R {
        self.data.iter().fold(R::zero(), |acc, &v| acc + v * v).sqrt()
    }

    pub fn max_asymmetry(&self) -> R {
        let mut worst = R::zero();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let d = (self.get(i, j) - self.get(j, i)).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// `Q A Q^T` for an orthogonal `Q` given row-major.
    pub fn congruence(&self, q: &[Vec<R>]) -> SymMatrix<R> {
        let d = self.dim;
        let mut out = SymMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = R::zero();
                for a in 0..d {
                    for b in 0..d {
                        acc += q[i][a] * self.get(a, b) * q[j][b];
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

/// Result of [`eig_sym`]: descending eigenvalues with matching unit
/// eigenvectors (column `k` of `vectors` pairs with `values[k]`).
#[derive(Debug, Clone)]
pub struct EigenDecomposition<R> {
    pub values: Vec<R>,
    /// `vectors[k]` is the k-th eigenvector.
    pub vectors: Vec<Vec<R>>,
}

/// Diagonalizes a symmetric matrix by cyclic Jacobi rotations.
///
/// Iterates fixed-order sweeps until the off-diagonal Frobenius norm drops
/// below `1e-14 * ||A||`. Eigenvalues are returned in descending order and
/// each eigenvector's sign is fixed so its first component of non-negligible
/// magnitude is positive.
pub fn eig_sym<R: Real>(a: &SymMatrix<R>) -> Result<EigenDecomposition<R>> {
    let n = a.dim;
    if n > 64 {
        return Err(Error::EigDimensionCap(n));
    }
    let norm = a.norm();
    let sym_tol = R::from_f64_(1e-10) * norm;
    let asym = a.max_asymmetry();
    if asym > sym_tol && norm > R::zero() {
        return Err(Error::NotSymmetric(asym.to_f64().unwrap_or(f64::NAN)));
    }

    // work on a plain dense copy (the rotations pass through transient
    // non-symmetric states)
    let mut m = a.data.clone();
    // symmetrize residual rounding
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (m[i * n + j] + m[j * n + i]) / R::from_usize_(2);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    let mut vecs: Vec<Vec<R>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { R::one() } else { R::zero() }).collect())
        .collect();

    let off_tol = R::from_f64_(1e-14) * norm;
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut off = R::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[i * n + j] * m[i * n + j];
            }
        }
        let off = (off + off).sqrt();
        if off <= off_tol || norm == R::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == R::zero() {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (R::from_usize_(2) * apq);
                // smaller-root tangent for stability
                let t = {
                    let s = if theta >= R::zero() { R::one() } else { -R::one() };
                    s / (theta.abs() + (theta * theta + R::one()).sqrt())
                };
                let c = R::one() / (t * t + R::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for v in vecs.iter_mut() {
                    let vp = v[p];
                    let vq = v[q];
                    v[p] = c * vp - s * vq;
                    v[q] = s * vp + c * vq;
                }
            }
        }
    }

    // vecs[k][i]: component i of... careful: we rotated coordinates; the
    // eigenvector for diagonal slot j is the column j of the accumulated
    // rotation, i.e. (vecs[0][j], .., vecs[n-1][j]).
    let mut pairs: Vec<(R, Vec<R>)> = (0..n)
        .map(|j| {
            let v: Vec<R> = (0..n).map(|i| vecs[i][j]).collect();
            (m[j * n + j], v)
        })
        .collect();
    // descending, stable for ties
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));

    let thresh = R::from_f64_(1e-12);
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for (val, mut v) in pairs {
        if let Some(first) = v.iter().find(|c| c.abs() > thresh) {
            if *first < R::zero() {
                for c in v.iter_mut() {
                    *c = -*c;
                }
            }
        }
        values.push(val);
        vectors.push(v);
    }
    Ok(EigenDecomposition { values, vectors })
}
