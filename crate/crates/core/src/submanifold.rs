//! Codimension-k pipeline: adapted frames from local PCA, per-normal
//! hypersurface projections, assembly of the second fundamental form, and
//! the Riemann, Ricci and scalar curvature through the Gauss equation.
//!
//! An `n`-dimensional submanifold of `R^(n+k)` is analyzed through its `k`
//! projections onto the spans of the tangent space plus one normal
//! direction: each projection is a hypersurface patch whose shape operator
//! is estimated with the normalized patch descriptors, and the collected
//! operators are the components of the second fundamental form in the
//! adapted frame.

use crate::descriptors::{curvature_from_patch_normalized, CurvatureEstimate};
use crate::domains::cloud_patch_invariants;
use crate::eig::{eig_sym, SymMatrix};
use crate::error::{Error, Result};
use crate::models::PointCloud;

/// Orthonormal frame at an analysis point, split into tangent and normal
/// parts (all vectors in ambient coordinates).
#[derive(Debug, Clone)]
pub struct AdaptedFrame {
    pub center: Vec<f64>,
    pub tangent: Vec<Vec<f64>>,
    pub normal: Vec<Vec<f64>>,
}

impl AdaptedFrame {
    pub fn tangent_dim(&self) -> usize {
        self.tangent.len()
    }

    pub fn codim(&self) -> usize {
        self.normal.len()
    }

    /// Frame coordinates of an ambient point: `n` tangent components
    /// followed by `k` normal components.
    pub fn coords(&self, p: &[f64]) -> Vec<f64> {
        let rel: Vec<f64> = p.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        self.tangent
            .iter()
            .chain(&self.normal)
            .map(|v| v.iter().zip(&rel).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Minimum ratio between consecutive covariance eigenvalues accepted as the
/// tangent/normal spectral gap when the intrinsic dimension is inferred.
pub const SPECTRAL_GAP_RATIO: f64 = 10.0;

/// Estimates an adapted frame at `center` by PCA of the cloud points inside
/// `B_center(eps)`: the top eigenvectors of the local covariance span the
/// tangent space. Pass the intrinsic dimension `n` if known; otherwise it is
/// inferred from the largest spectral gap, which must exceed
/// [`SPECTRAL_GAP_RATIO`].
pub fn estimate_frame(
    cloud: &PointCloud,
    center: &[f64],
    eps: f64,
    n: Option<usize>,
) -> Result<AdaptedFrame> {
    let inv = cloud_patch_invariants(cloud, center, eps)?;
    let eig = eig_sym(&inv.covariance)?;
    let d = cloud.ambient_dim;
    let n = match n {
        Some(n) => {
            if n == 0 || n >= d {
                return Err(Error::InvalidDimension(format!(
                    "intrinsic dimension {n} must be in 1..{d}"
                )));
            }
            n
        }
        None => {
            let mut best = (0usize, 0.0f64);
            for i in 0..d - 1 {
                let denom = eig.values[i + 1].max(f64::MIN_POSITIVE);
                let ratio = eig.values[i] / denom;
                if ratio > best.1 {
                    best = (i + 1, ratio);
                }
            }
            if best.1 < SPECTRAL_GAP_RATIO {
                return Err(Error::NoSpectralGap);
            }
            best.0
        }
    };
    if eig.values[n - 1] <= 0.0 {
        return Err(Error::DegenerateCovariance("tangent eigenvalue is not positive".into()));
    }
    Ok(AdaptedFrame {
        center: center.to_vec(),
        tangent: eig.vectors[..n].to_vec(),
        normal: eig.vectors[n..].to_vec(),
    })
}

/// Projects the cloud onto the hypersurface chart of one normal direction:
/// each point maps to its `n` tangent coordinates plus the `j`-th normal
/// coordinate, relative to the frame center.
pub fn project_to_hypersurface(cloud: &PointCloud, frame: &AdaptedFrame, j: usize) -> Result<PointCloud> {
    let n = frame.tangent_dim();
    if j >= frame.codim() {
        return Err(Error::InvalidInput(format!("normal index {j} out of range")));
    }
    let points = cloud
        .points
        .iter()
        .map(|p| {
            let c = frame.coords(p);
            let mut q = c[..n].to_vec();
            q.push(c[n + j]);
            q
        })
        .collect();
    PointCloud::new(n + 1, points, cloud.weights.clone())
}

/// Second fundamental form and induced intrinsic curvature of a submanifold
/// point, in the adapted frame `frame` (form components indexed by tangent
/// frame vectors, one symmetric matrix per normal frame vector).
#[derive(Debug, Clone)]
pub struct SubmanifoldCurvature {
    pub frame: AdaptedFrame,
    pub eps: f64,
    /// `second_fundamental[j]` is `<II(., .), normal_j>`.
    pub second_fundamental: Vec<SymMatrix<f64>>,
    /// Mean curvature vector components along the frame normals.
    pub mean_vector: Vec<f64>,
    /// Per-normal flag: the projection was mean-curvature singular, so the
    /// sign and principal directions of that component are ambiguous (its
    /// determinant, and for surfaces the whole intrinsic curvature, are not).
    pub h_singular: Vec<bool>,
    pub riemann: RiemannTensor,
    pub ricci: SymMatrix<f64>,
    pub scalar: f64,
}

/// Covariant Riemann tensor `R[m][n][a][b]` of dimension `n`, dense storage.
#[derive(Debug, Clone)]
pub struct RiemannTensor {
    pub dim: usize,
    data: Vec<f64>,
}

impl RiemannTensor {
    pub fn get(&self, m: usize, n: usize, a: usize, b: usize) -> f64 {
        let d = self.dim;
        self.data[((m * d + n) * d + a) * d + b]
    }

    fn set(&mut self, m: usize, n: usize, a: usize, b: usize, v: f64) {
        let d = self.dim;
        self.data[((m * d + n) * d + a) * d + b] = v;
    }
}

/// Gauss equation: assembles the Riemann tensor of the induced metric from
/// the second fundamental form components,
/// `R_mnab = <II(m,b), II(n,a)> - <II(m,a), II(n,b)>`.
pub fn riemann_from_ii(forms: &[SymMatrix<f64>]) -> Result<RiemannTensor> {
    let Some(first) = forms.first() else {
        return Err(Error::InvalidInput("need at least one form component".into()));
    };
    let d = first.dim;
    if forms.iter().any(|f| f.dim != d) {
        return Err(Error::DimensionMismatch("form components of mixed dimension".into()));
    }
    let mut r = RiemannTensor { dim: d, data: vec![0.0; d * d * d * d] };
    for m in 0..d {
        for n in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let mut v = 0.0;
                    for f in forms {
                        v += f.get(m, b) * f.get(n, a) - f.get(m, a) * f.get(n, b);
                    }
                    r.set(m, n, a, b, v);
                }
            }
        }
    }
    Ok(r)
}

/// Riemann tensor of a constant-curvature space,
/// `R_mnab = K (delta_mb delta_na - delta_ma delta_nb)`. On a surface
/// (`dim = 2`) this is the general form, with `K` the Gauss curvature.
pub fn constant_curvature_riemann(dim: usize, k_sect: f64) -> RiemannTensor {
    let mut r = RiemannTensor { dim, data: vec![0.0; dim * dim * dim * dim] };
    for m in 0..dim {
        for n in 0..dim {
            for a in 0..dim {
                for b in 0..dim {
                    let dmb = (m == b) as u8 as f64;
                    let dna = (n == a) as u8 as f64;
                    let dma = (m == a) as u8 as f64;
                    let dnb = (n == b) as u8 as f64;
                    r.set(m, n, a, b, k_sect * (dmb * dna - dma * dnb));
                }
            }
        }
    }
    r
}

/// Ricci tensor `Ric_na = sum_m R_mnam` and scalar curvature of a Riemann
/// tensor.
pub fn ricci_and_scalar(r: &RiemannTensor) -> (SymMatrix<f64>, f64) {
    let d = r.dim;
    let mut ric = SymMatrix::zeros(d);
    for n in 0..d {
        for a in n..d {
            let mut v = 0.0;
            for m in 0..d {
                v += r.get(m, n, a, m);
            }
            ric.set(n, a, v);
        }
    }
    let scalar = (0..d).map(|i| ric.get(i, i)).sum();
    (ric, scalar)
}

/// Full pipeline: adapted frame, per-normal hypersurface projections,
/// second fundamental form and the Gauss-equation curvature of a point
/// cloud around `center` at scale `eps`. `n` is the intrinsic dimension if
/// known (otherwise inferred from the PCA spectrum).
pub fn estimate_submanifold_curvature(
    cloud: &PointCloud,
    center: &[f64],
    eps: f64,
    n: Option<usize>,
) -> Result<SubmanifoldCurvature> {
    let frame = estimate_frame(cloud, center, eps, n)?;
    let n = frame.tangent_dim();
    let mut forms = Vec::with_capacity(frame.codim());
    let mut mean_vector = Vec::with_capacity(frame.codim());
    let mut h_singular = Vec::with_capacity(frame.codim());
    let mut projected_scalars = Vec::with_capacity(frame.codim());
    for j in 0..frame.codim() {
        let projected = project_to_hypersurface(cloud, &frame, j)?;
        let inv = cloud_patch_invariants(&projected, &vec![0.0; n + 1], eps)?;
        let est = curvature_from_patch_normalized(&inv)?;
        forms.push(shape_operator_matrix(&est, n)?);
        // the barycenter-based mean curvature is much less noise-sensitive
        // than the trace of the reconstructed form
        let sign = if est.normal[n] < 0.0 { -1.0 } else { 1.0 };
        mean_vector.push(sign * est.mean);
        h_singular.push(est.h_singular);
        projected_scalars.push(est.scalar);
    }
    // For surfaces the whole Riemann tensor hangs off one sectional
    // curvature, and the projections measure it directly
    // (scal_j = 2 det II_j): assembling it from those scalars avoids the
    // noise amplification of the per-direction curvature spectra and the
    // sign ambiguity of near-minimal projections.
    let riemann = if n == 2 {
        let k_sect: f64 = projected_scalars.iter().sum::<f64>() / 2.0;
        constant_curvature_riemann(2, k_sect)
    } else {
        riemann_from_ii(&forms)?
    };
    let (ricci, scalar) = ricci_and_scalar(&riemann);
    Ok(SubmanifoldCurvature {
        frame,
        eps,
        second_fundamental: forms,
        mean_vector,
        h_singular,
        riemann,
        ricci,
        scalar,
    })
}

/// Rebuilds the shape-operator matrix `sum_mu kappa_mu d_mu d_mu^T` of a
/// projected hypersurface estimate in the tangent frame coordinates,
/// orienting curvatures with the projection's normal axis so all `k`
/// components live in one consistent frame.
fn shape_operator_matrix(est: &CurvatureEstimate, n: usize) -> Result<SymMatrix<f64>> {
    // est lives in R^(n+1): n tangent frame coordinates plus the normal
    // coordinate; its reported normal is within O(eps) of the last axis
    let sign = if est.normal[n] < 0.0 { -1.0 } else { 1.0 };
    let mut m = SymMatrix::zeros(n);
    for (kappa, dir) in est.kappas.iter().zip(&est.directions) {
        // drop the (O(eps)-small) normal component and renormalize
        let t = &dir[..n];
        let len: f64 = t.iter().map(|v| v * v).sum::<f64>().sqrt();
        if len < 0.5 {
            return Err(Error::AmbiguousNormal(len));
        }
        for i in 0..n {
            for j in i..n {
                let v = m.get(i, j) + sign * kappa * t[i] * t[j] / (len * len);
                m.set(i, j, v);
            }
        }
    }
    Ok(m)
}

impl SymMatrix<f64> {
    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }
}
