//! Synthetic hypersurfaces and codimension-k graph submanifolds with exact
//! curvature oracles, area-uniform sampling and an inside/outside classifier.
//!
//! All models sit in standard position: the analysis point `p` is the
//! coordinate origin, the tangent space is spanned by the first `n` axes and
//! the normal direction(s) by the remaining ones.
//!
//! Orientation convention: the normal `N` is the positive last axis, and
//! `V+` is the side `N` points into, i.e. `z > z_surface(x)`. For spheres
//! the interior is the `V+` side, so every principal curvature of a sphere
//! is `+1/R`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Exact curvature data of a model at a point.
#[derive(Debug, Clone)]
pub struct CurvatureOracle {
    pub kappas: Vec<f64>,
    /// Orthonormal principal directions, one per kappa.
    pub directions: Vec<Vec<f64>>,
    /// Unit normal, oriented into `V+`.
    pub normal: Vec<f64>,
    pub mean: f64,
    pub scalar: f64,
}

impl CurvatureOracle {
    fn new(kappas: Vec<f64>, directions: Vec<Vec<f64>>, normal: Vec<f64>) -> Self {
        let mean = kappas.iter().sum();
        let mut scalar = 0.0;
        for i in 0..kappas.len() {
            for j in (i + 1)..kappas.len() {
                scalar += 2.0 * kappas[i] * kappas[j];
            }
        }
        Self { kappas, directions, normal, mean, scalar }
    }
}

/// Finite set of ambient points, with optional positive weights.
#[derive(Debug, Clone)]
pub struct PointCloud {
    pub ambient_dim: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Option<Vec<f64>>,
}

impl PointCloud {
    pub fn new(ambient_dim: usize, points: Vec<Vec<f64>>, weights: Option<Vec<f64>>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidDimension("ambient_dim must be >= 1".into()));
        }
        if let Some(bad) = points.iter().find(|p| p.len() != ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "point has length {}, expected {ambient_dim}",
                bad.len()
            )));
        }
        if let Some(w) = &weights {
            if w.len() != points.len() {
                return Err(Error::DimensionMismatch("weights/points length mismatch".into()));
            }
            if w.iter().any(|&x| !(x > 0.0)) {
                return Err(Error::InvalidInput("weights must be positive".into()));
            }
        }
        Ok(Self { ambient_dim, points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Sparse polynomial in `n` variables: a list of `(exponents, coefficient)`
/// monomials. Used for the cubic/quartic corrections of graph models.
#[derive(Debug, Clone, Default)]
pub struct Polynomial {
    pub terms: Vec<(Vec<u32>, f64)>,
}

impl Polynomial {
    pub fn monomial(exps: Vec<u32>, coeff: f64) -> Self {
        Self { terms: vec![(exps, coeff)] }
    }

    pub fn plus_monomial(mut self, exps: Vec<u32>, coeff: f64) -> Self {
        self.terms.push((exps, coeff));
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c == 0.0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn grad(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (e, c) in &self.terms {
            for mu in 0..x.len() {
                if e[mu] == 0 {
                    continue;
                }
                let mut t = *c * e[mu] as f64;
                for (nu, (xi, &ei)) in x.iter().zip(e).enumerate() {
                    let p = if nu == mu { ei - 1 } else { ei };
                    for _ in 0..p {
                        t *= xi;
                    }
                }
                out[mu] += t;
            }
        }
    }

    /// Sum over terms of |coeff| * e_mu * rho^(deg-1): an upper bound for
    /// |d/dx_mu| on the ball of radius rho.
    fn grad_bound(&self, mu: usize, rho: f64) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            if e.len() > mu && e[mu] > 0 {
                let deg: u32 = e.iter().sum();
                acc += c.abs() * e[mu] as f64 * rho.powi(deg as i32 - 1);
            }
        }
        acc
    }
}

/// Analytic hypersurface in `R^(n+1)` with known curvature.
#[derive(Debug, Clone)]
pub enum HypersurfaceModel {
    /// Local graph `z(x) = 1/2 sum kappa_mu x_mu^2 + higher(x)` over the
    /// tangent chart, valid on `|x| <= chart_radius`.
    Graph { kappas: Vec<f64>, higher: Polynomial, chart_radius: f64 },
    /// Sphere of radius `R` through the origin, centered at `R e_{n+1}`.
    Sphere { tangent_dim: usize, radius: f64 },
}

impl HypersurfaceModel {
    pub fn graph(kappas: Vec<f64>) -> Result<Self> {
        Self::graph_with_higher(kappas, Polynomial::default())
    }

    pub fn graph_with_higher(kappas: Vec<f64>, higher: Polynomial) -> Result<Self> {
        if kappas.is_empty() {
            return Err(Error::InvalidDimension("graph needs at least one tangent dimension".into()));
        }
        if kappas.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidInput("graph coefficients must be finite".into()));
        }
        for (e, c) in &higher.terms {
            if e.len() != kappas.len() {
                return Err(Error::DimensionMismatch("higher-order exponent length".into()));
            }
            let deg: u32 = e.iter().sum();
            if !(3..=4).contains(&deg) {
                return Err(Error::InvalidInput("higher-order terms must have degree 3 or 4".into()));
            }
            if !c.is_finite() {
                return Err(Error::InvalidInput("graph coefficients must be finite".into()));
            }
        }
        let mut scale = kappas.iter().fold(0.0f64, |a, k| a.max(k.abs()));
        scale = scale.max(higher.terms.iter().map(|(_, c)| c.abs()).sum());
        let chart_radius = if scale > 0.0 { 0.5 / scale } else { f64::MAX };
        Ok(Self::Graph { kappas, higher, chart_radius })
    }

    pub fn with_chart_radius(self, chart_radius: f64) -> Result<Self> {
        match self {
            Self::Graph { kappas, higher, .. } => {
                if !(chart_radius > 0.0) {
                    return Err(Error::InvalidRadius("chart radius must be positive".into()));
                }
                Ok(Self::Graph { kappas, higher, chart_radius })
            }
            s => Ok(s),
        }
    }

    pub fn sphere(ambient_dim: usize, radius: f64) -> Result<Self> {
        if ambient_dim < 2 {
            return Err(Error::InvalidDimension("sphere needs ambient dimension >= 2".into()));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidRadius("sphere radius must be positive".into()));
        }
        Ok(Self::Sphere { tangent_dim: ambient_dim - 1, radius })
    }

    pub fn tangent_dim(&self) -> usize {
        match self {
            Self::Graph { kappas, .. } => kappas.len(),
            Self::Sphere { tangent_dim, .. } => *tangent_dim,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.tangent_dim() + 1
    }

    pub fn chart_radius(&self) -> f64 {
        match self {
            Self::Graph { chart_radius, .. } => *chart_radius,
            Self::Sphere { radius, .. } => 0.9 * radius,
        }
    }

    /// Largest scale the integral-invariant operations accept.
    pub fn max_eps(&self) -> f64 {
        0.8 * self.chart_radius()
    }

    pub fn check_eps(&self, eps: f64) -> Result<()> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidRadius(format!("eps must be positive, got {eps}")));
        }
        if eps > self.max_eps() {
            return Err(Error::ChartViolation(format!(
                "eps {eps} beyond 0.8 x chart radius {}",
                self.chart_radius()
            )));
        }
        Ok(())
    }

    /// Graph height over the tangent chart (also defined for spheres, as the
    /// local graph of the lower cap).
    pub fn height(&self, x: &[f64]) -> Result<f64> {
        let rho2: f64 = x.iter().map(|v| v * v).sum();
        let r = self.chart_radius();
        if rho2 > r * r * (1.0 + 1e-12) {
            return Err(Error::ChartViolation(format!(
                "|x| = {} beyond chart radius {r}",
                rho2.sqrt()
            )));
        }
        Ok(self.height_unchecked(x))
    }

    pub(crate) fn height_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            Self::Graph { kappas, higher, .. } => {
                let mut z = 0.0;
                for (k, xi) in kappas.iter().zip(x) {
                    z += 0.5 * k * xi * xi;
                }
                if !higher.is_zero() {
                    z += higher.eval(x);
                }
                z
            }
            Self::Sphere { radius, .. } => {
                let rho2: f64 = x.iter().map(|v| v * v).sum();
                // R - sqrt(R^2 - rho^2), the cap through the origin
                let r = *radius;
                rho2 / (r + (r * r - rho2).max(0.0).sqrt())
            }
        }
    }

    /// Tangent gradient of the height function.
    pub(crate) fn height_gradient(&self, x: &[f64], out: &mut [f64]) {
        match self {
            Self::Graph { kappas, higher, .. } => {
                for mu in 0..x.len() {
                    out[mu] = kappas[mu] * x[mu];
                }
                if !higher.is_zero() {
                    let mut g = vec![0.0; x.len()];
                    higher.grad(x, &mut g);
                    for mu in 0..x.len() {
                        out[mu] += g[mu];
                    }
                }
            }
            Self::Sphere { radius, .. } => {
                let rho2: f64 = x.iter().map(|v| v * v).sum();
                let denom = (radius * radius - rho2).max(1e-300).sqrt();
                for mu in 0..x.len() {
                    out[mu] = x[mu] / denom;
                }
            }
        }
    }

    /// Upper bound for `sqrt(det g) = sqrt(1 + |grad z|^2)` on `|x| <= rho`.
    fn sqrt_det_g_bound(&self, rho: f64) -> f64 {
        match self {
            Self::Graph { kappas, higher, .. } => {
                let mut acc = 1.0;
                for (mu, k) in kappas.iter().enumerate() {
                    let b = k.abs() * rho + higher.grad_bound(mu, rho);
                    acc += b * b;
                }
                acc.sqrt()
            }
            Self::Sphere { radius, .. } => {
                let denom = (radius * radius - rho * rho).max(1e-300);
                (1.0 + rho * rho / denom).sqrt()
            }
        }
    }

    /// Evaluates the graph height; rejects for non-graph models.
    pub fn graph_eval(&self, x: &[f64]) -> Result<f64> {
        match self {
            Self::Graph { kappas, .. } => {
                if x.len() != kappas.len() {
                    return Err(Error::DimensionMismatch("tangent vector length".into()));
                }
                self.height(x)
            }
            Self::Sphere { .. } => Err(Error::NotAGraphModel),
        }
    }

    /// Exact curvature data at a surface point.
    ///
    /// Graph models answer at the base point (origin) only; spheres anywhere.
    pub fn exact_curvatures(&self, p: &[f64]) -> Result<CurvatureOracle> {
        let d = self.ambient_dim();
        if p.len() != d {
            return Err(Error::DimensionMismatch("point length".into()));
        }
        match self {
            Self::Graph { kappas, .. } => {
                let dist: f64 = p.iter().map(|v| v * v).sum::<f64>().sqrt();
                if dist > 1e-9 {
                    return Err(Error::NotOnSurface(dist));
                }
                let n = kappas.len();
                let directions = (0..n).map(|i| unit_axis(d, i)).collect();
                Ok(CurvatureOracle::new(kappas.clone(), directions, unit_axis(d, n)))
            }
            Self::Sphere { tangent_dim, radius } => {
                let n = *tangent_dim;
                let center = sphere_center(d, *radius);
                let mut radial: Vec<f64> = p.iter().zip(&center).map(|(a, b)| a - b).collect();
                let dist = norm(&radial);
                if (dist - radius).abs() > 1e-9 * radius {
                    return Err(Error::NotOnSurface((dist - radius).abs()));
                }
                for v in radial.iter_mut() {
                    *v /= dist;
                }
                // inward normal
                let normal: Vec<f64> = radial.iter().map(|v| -v).collect();
                let directions = orthonormal_complement(&radial);
                Ok(CurvatureOracle::new(vec![1.0 / radius; n], directions, normal))
            }
        }
    }

    /// Which side of the surface an ambient point lies on: `+1` for the `V+`
    /// side (the side the normal points into), `-1` for the other, `0` on the
    /// surface within tolerance.
    pub fn side_classifier(&self, point: &[f64]) -> Result<i8> {
        if point.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch("point length".into()));
        }
        let diff = match self {
            Self::Graph { .. } => {
                let (x, z) = point.split_at(self.tangent_dim());
                z[0] - self.height(x)?
            }
            Self::Sphere { tangent_dim, radius } => {
                let center = sphere_center(tangent_dim + 1, *radius);
                let dist = point.iter().zip(&center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                radius - dist
            }
        };
        let tol = 1e-12 * (1.0 + point.iter().map(|v| v.abs()).fold(0.0, f64::max));
        Ok(if diff > tol {
            1
        } else if diff < -tol {
            -1
        } else {
            0
        })
    }

    /// Samples `count` points of the patch `S ∩ B_p(eps)` around the base
    /// point, uniformly with respect to the surface area measure.
    ///
    /// Reproducibility: the generator is ChaCha8 keyed by `seed`
    /// (`ChaCha8Rng::seed_from_u64`); tangent candidates are drawn uniformly
    /// in the tangent ball (unit-cube rejection through rand's standard
    /// `f64` conversion) and accepted with probability
    /// `sqrt(det g) / sqrt(det g)_max`, so a fixed seed gives a fixed cloud.
    pub fn sample_patch(&self, eps: f64, count: usize, seed: u64) -> Result<PointCloud> {
        if count == 0 {
            return Err(Error::InvalidInput("count must be >= 1".into()));
        }
        self.check_eps(eps)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self {
            Self::Graph { .. } => self.sample_patch_graph(eps, count, &mut rng),
            Self::Sphere { tangent_dim, radius } => {
                sample_sphere_cap(*tangent_dim, *radius, eps, count, &mut rng)
            }
        }
    }

    fn sample_patch_graph(&self, eps: f64, count: usize, rng: &mut ChaCha8Rng) -> Result<PointCloud> {
        let n = self.tangent_dim();
        let bound = self.sqrt_det_g_bound(eps);
        let mut points = Vec::with_capacity(count);
        let mut x = vec![0.0; n];
        let mut grad = vec![0.0; n];
        let max_tries = 10_000usize.saturating_mul(count).max(1_000_000);
        let mut tries = 0usize;
        while points.len() < count {
            tries += 1;
            if tries > max_tries {
                return Err(Error::ChartViolation("patch sampling acceptance too low".into()));
            }
            // uniform in the tangent eps-ball by cube rejection
            let mut rho2 = 0.0;
            for xi in x.iter_mut() {
                *xi = eps * (2.0 * rng.gen::<f64>() - 1.0);
                rho2 += *xi * *xi;
            }
            if rho2 > eps * eps {
                continue;
            }
            let z = self.height_unchecked(&x);
            if rho2 + z * z > eps * eps {
                continue;
            }
            self.height_gradient(&x, &mut grad);
            let g = 1.0 + grad.iter().map(|v| v * v).sum::<f64>();
            if rng.gen::<f64>() * bound > g.sqrt() {
                continue;
            }
            let mut p = Vec::with_capacity(n + 1);
            p.extend_from_slice(&x);
            p.push(z);
            points.push(p);
        }
        PointCloud::new(n + 1, points, None)
    }
}

/// Uniform sample of the spherical cap `{X on the sphere: |X - p| <= eps}`
/// in standard position: polar angle by rejection against `sin^(n-1)`,
/// transverse direction by normalized Gaussians.
fn sample_sphere_cap(
    n: usize,
    radius: f64,
    eps: f64,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PointCloud> {
    let theta_max = 2.0 * (eps / (2.0 * radius)).asin();
    let sin_max = theta_max.sin();
    let center = sphere_center(n + 1, radius);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let theta = loop {
            let t = theta_max * rng.gen::<f64>();
            if rng.gen::<f64>() <= (t.sin() / sin_max).powi(n as i32 - 1) {
                break t;
            }
        };
        let dir = random_unit_vector(n, rng);
        // radial axis at the base point is -e_{n+1}
        let mut p = vec![0.0; n + 1];
        for i in 0..n {
            p[i] = radius * theta.sin() * dir[i];
        }
        p[n] = center[n] - radius * theta.cos();
        // snap back onto the sphere
        let mut d: Vec<f64> = p.iter().zip(&center).map(|(a, b)| a - b).collect();
        let len = norm(&d);
        for v in d.iter_mut() {
            *v *= radius / len;
        }
        let point: Vec<f64> = center.iter().zip(&d).map(|(c, v)| c + v).collect();
        points.push(point);
    }
    PointCloud::new(n + 1, points, None)
}

/// Codimension-k graph submanifold `x -> (x, 1/2 x^T A_1 x, .., 1/2 x^T A_k x)`
/// in standard position; the Hessians `A_j` are the exact second fundamental
/// form components at the origin.
#[derive(Debug, Clone)]
pub struct GraphSubmanifold {
    pub tangent_dim: usize,
    /// One symmetric `n x n` Hessian per normal direction.
    pub hessians: Vec<Vec<Vec<f64>>>,
}

impl GraphSubmanifold {
    pub fn new(tangent_dim: usize, hessians: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if tangent_dim == 0 || hessians.is_empty() {
            return Err(Error::InvalidDimension("need n >= 1 and k >= 1".into()));
        }
        for h in &hessians {
            if h.len() != tangent_dim || h.iter().any(|r| r.len() != tangent_dim) {
                return Err(Error::DimensionMismatch("hessian shape".into()));
            }
            for i in 0..tangent_dim {
                for j in 0..tangent_dim {
                    if (h[i][j] - h[j][i]).abs() > 1e-12 {
                        return Err(Error::InvalidInput("hessians must be symmetric".into()));
                    }
                }
            }
        }
        Ok(Self { tangent_dim, hessians })
    }

    /// The standard codimension-2 example `(x, y) -> (x, y, (x^2-y^2)/2, xy)`.
    pub fn codim2_quadratic() -> Self {
        Self::new(
            2,
            vec![
                vec![vec![1.0, 0.0], vec![0.0, -1.0]],
                vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            ],
        )
        .unwrap()
    }

    pub fn codim(&self) -> usize {
        self.hessians.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.tangent_dim + self.codim()
    }

    pub fn heights(&self, x: &[f64]) -> Vec<f64> {
        self.hessians
            .iter()
            .map(|h| {
                let mut z = 0.0;
                for i in 0..self.tangent_dim {
                    for j in 0..self.tangent_dim {
                        z += 0.5 * h[i][j] * x[i] * x[j];
                    }
                }
                z
            })
            .collect()
    }

    pub fn chart_radius(&self) -> f64 {
        let scale = self
            .hessians
            .iter()
            .map(|h| h.iter().flatten().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0f64, f64::max);
        if scale > 0.0 {
            0.5 / scale
        } else {
            f64::MAX
        }
    }

    /// Area-uniform sample of `M ∩ B_p(eps)`; same rejection scheme and RNG
    /// as the hypersurface sampler.
    pub fn sample_patch(&self, eps: f64, count: usize, seed: u64) -> Result<PointCloud> {
        if count == 0 {
            return Err(Error::InvalidInput("count must be >= 1".into()));
        }
        if !(eps > 0.0) || eps > 0.8 * self.chart_radius() {
            return Err(Error::ChartViolation(format!("eps {eps} outside chart")));
        }
        let n = self.tangent_dim;
        let k = self.codim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // det(I + sum_j (A_j x)(A_j x)^T) <= (1 + tr/n)^n with tr <= sum ||A_j||_F^2 eps^2
        let tr_bound: f64 = self
            .hessians
            .iter()
            .map(|h| h.iter().flatten().map(|v| v * v).sum::<f64>())
            .sum::<f64>()
            * eps
            * eps;
        let bound = (1.0 + tr_bound / n as f64).powi(n as i32).sqrt();
        let mut points = Vec::with_capacity(count);
        let mut x = vec![0.0; n];
        let max_tries = 10_000usize.saturating_mul(count).max(1_000_000);
        let mut tries = 0usize;
        while points.len() < count {
            tries += 1;
            if tries > max_tries {
                return Err(Error::ChartViolation("submanifold sampling acceptance too low".into()));
            }
            let mut rho2 = 0.0;
            for xi in x.iter_mut() {
                *xi = eps * (2.0 * rng.gen::<f64>() - 1.0);
                rho2 += *xi * *xi;
            }
            if rho2 > eps * eps {
                continue;
            }
            let f = self.heights(&x);
            let z2: f64 = f.iter().map(|v| v * v).sum();
            if rho2 + z2 > eps * eps {
                continue;
            }
            // metric g = I + sum_j grad f_j grad f_j^T
            let mut g = vec![vec![0.0; n]; n];
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = 1.0;
            }
            for h in &self.hessians {
                let mut grad = vec![0.0; n];
                for i in 0..n {
                    for j in 0..n {
                        grad[i] += h[i][j] * x[j];
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        g[i][j] += grad[i] * grad[j];
                    }
                }
            }
            let det = det_small(&mut g);
            if rng.gen::<f64>() * bound > det.sqrt() {
                continue;
            }
            let mut p = Vec::with_capacity(n + k);
            p.extend_from_slice(&x);
            p.extend_from_slice(&f);
            points.push(p);
        }
        PointCloud::new(n + k, points, None)
    }
}

fn det_small(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        for r in (col + 1)..n {
            if m[r][col].abs() > m[pivot][col].abs() {
                pivot = r;
            }
        }
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for r in (col + 1)..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    det
}

pub(crate) fn sphere_center(ambient_dim: usize, radius: f64) -> Vec<f64> {
    let mut c = vec![0.0; ambient_dim];
    c[ambient_dim - 1] = radius;
    c
}

pub(crate) fn unit_axis(dim: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn random_unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| gaussian(rng)).collect();
        let len = norm(&v);
        if len > 1e-8 {
            return v.into_iter().map(|x| x / len).collect();
        }
    }
}

/// Box-Muller on the ChaCha stream.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Orthonormal basis of the hyperplane orthogonal to `axis` (unit vector),
/// by Gram-Schmidt over the coordinate axes.
pub(crate) fn orthonormal_complement(axis: &[f64]) -> Vec<Vec<f64>> {
    let d = axis.len();
    let mut basis: Vec<Vec<f64>> = vec![axis.to_vec()];
    for i in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = unit_axis(d, i);
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
        let len = norm(&v);
        if len > 1e-8 {
            basis.push(v.into_iter().map(|x| x / len).collect());
        }
    }
    basis.remove(0);
    basis
}
