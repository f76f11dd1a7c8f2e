//! Direct numerical integration of the PCA integral invariants — volume,
//! barycenter and covariance — over the two kernel domains cut out of a small
//! ball `B_p(eps)` by a model hypersurface: the solid spherical component
//! `V+_p(eps)` and the surface patch `D_p(eps)`. Also computes the discrete
//! analogues for weighted point clouds.
//!
//! These integrators are deliberately independent of the closed-form
//! expansions in [`crate::asymptotics`]: they only see the model through its
//! height function, gradient and side classifier, so the two layers can be
//! checked against each other.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eig::SymMatrix;
use crate::error::{Error, Result};
use crate::models::{GraphSubmanifold, HypersurfaceModel, PointCloud};

/// Which kernel domain a set of invariants was measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    /// Surface patch `D_p(eps)` with the `n`-dimensional area measure.
    Patch,
    /// Solid component `V+_p(eps)` with the `(n+1)`-volume measure.
    Component,
}

/// Volume, barycenter and covariance of a kernel domain at scale `eps`.
///
/// The barycenter is relative to the analysis point `p`; the covariance is
/// the second moment about the computed barycenter. When `normalized` is set
/// (point clouds without a known area) the moments are per unit measure and
/// `volume` is 1.
#[derive(Debug, Clone)]
pub struct IntegralInvariants {
    pub domain_kind: DomainKind,
    pub eps: f64,
    pub volume: f64,
    pub barycenter: Vec<f64>,
    pub covariance: SymMatrix<f64>,
    pub normalized: bool,
    /// Standard error of the volume for Monte Carlo paths.
    pub volume_se: Option<f64>,
}

impl IntegralInvariants {
    pub fn ambient_dim(&self) -> usize {
        self.barycenter.len()
    }
}

/// Accuracy knobs of the quadrature and quasi-Monte-Carlo integrators.
#[derive(Debug, Clone)]
pub struct QuadratureConfig {
    /// Nodes per angular axis of the sphere rule.
    pub angular: usize,
    /// Gauss-Legendre nodes per radial segment.
    pub radial: usize,
    /// Relative tolerance of the node-doubling refinement.
    pub rel_tol: f64,
    /// Refinement rounds before giving up (each round doubles the counts).
    pub max_refinements: u32,
    /// Sample count of the quasi-Monte-Carlo path.
    pub mc_points: usize,
    pub seed: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            angular: 24,
            radial: 24,
            rel_tol: 1e-12,
            max_refinements: 4,
            mc_points: 200_000,
            seed: 0,
        }
    }
}

// ---------------------------------------------------------------------------
// building blocks: Gauss-Legendre, sphere rules, deterministic summation
// ---------------------------------------------------------------------------

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre polynomial from the Chebyshev guess.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Maps a `[-1, 1]` rule onto `[a, b]`.
pub fn gl_on_interval(rule: &[(f64, f64)], a: f64, b: f64) -> Vec<(f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.iter().map(|&(x, w)| (mid + half * x, half * w)).collect()
}

/// Quadrature rule on the unit sphere `S^(d-1)`: unit points and weights
/// summing to the sphere area. `m` controls the nodes per angular axis.
///
/// `d = 1` is the two-point set; `d = 2` the trapezoidal rule on the circle
/// (exact for trigonometric polynomials of degree < m); `d >= 3` a tensor
/// product of a Gauss-Legendre rule in the polar angle (the analytic
/// `sin^(d-2)` factor folded into the weights, so the error decays
/// exponentially in `m`) with the rule one dimension down.
pub fn sphere_rule(d: usize, m: usize) -> Vec<(Vec<f64>, f64)> {
    assert!(d >= 1 && m >= 2);
    match d {
        1 => vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)],
        2 => {
            let w = 2.0 * std::f64::consts::PI / m as f64;
            (0..m)
                .map(|i| {
                    let t = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                    (vec![t.cos(), t.sin()], w)
                })
                .collect()
        }
        _ => {
            let sub = sphere_rule(d - 1, m);
            let gl = gauss_legendre(m);
            let mut out = Vec::with_capacity(sub.len() * m);
            for &(phi, wp) in &gl_on_interval(&gl, 0.0, std::f64::consts::PI) {
                let (s, c) = phi.sin_cos();
                let fold = s.powi(d as i32 - 2);
                for (omega, wo) in &sub {
                    let mut p: Vec<f64> = omega.iter().map(|v| v * s).collect();
                    p.push(c);
                    out.push((p, wp * fold * wo));
                }
            }
            out
        }
    }
}

/// Deterministic pairwise (binary-tree) summation in the order given.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Streaming pairwise summation with a fixed binary-counter reduction order,
/// equivalent to [`pairwise_sum`] over the pushed sequence.
struct PairwiseAccumulator {
    levels: Vec<Option<f64>>,
}

impl PairwiseAccumulator {
    fn new() -> Self {
        Self { levels: Vec::new() }
    }

    fn push(&mut self, mut v: f64) {
        let mut level = 0;
        loop {
            if level == self.levels.len() {
                self.levels.push(Some(v));
                return;
            }
            match self.levels[level].take() {
                None => {
                    self.levels[level] = Some(v);
                    return;
                }
                Some(u) => {
                    v += u;
                    level += 1;
                }
            }
        }
    }

    fn total(&self) -> f64 {
        self.levels.iter().flatten().sum()
    }
}

/// Accumulates volume plus first and second ambient moments.
struct MomentAccumulator {
    dim: usize,
    m0: PairwiseAccumulator,
    m1: Vec<PairwiseAccumulator>,
    m2: Vec<PairwiseAccumulator>, // packed upper triangle, row-major
}

impl MomentAccumulator {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            m0: PairwiseAccumulator::new(),
            m1: (0..dim).map(|_| PairwiseAccumulator::new()).collect(),
            m2: (0..dim * (dim + 1) / 2).map(|_| PairwiseAccumulator::new()).collect(),
        }
    }

    /// Point mass `w` at `x`.
    fn push_point(&mut self, x: &[f64], w: f64) {
        self.m0.push(w);
        let mut k = 0;
        for i in 0..self.dim {
            self.m1[i].push(w * x[i]);
            for j in i..self.dim {
                self.m2[k].push(w * x[i] * x[j]);
                k += 1;
            }
        }
    }

    /// A vertical column `{(x_t, z) : z in [a, b]}` with tangent part `x_t`
    /// (length `dim - 1`) and cross-section weight `w`; the z-moments of the
    /// segment are closed-form.
    fn push_column(&mut self, x_t: &[f64], a: f64, b: f64, w: f64) {
        let c0 = b - a;
        let c1 = 0.5 * (b * b - a * a);
        let c2 = (b * b * b - a * a * a) / 3.0;
        let zi = self.dim - 1;
        self.m0.push(w * c0);
        let mut k = 0;
        for i in 0..self.dim {
            let xi = if i == zi { c1 } else { c0 * x_t[i] };
            self.m1[i].push(w * xi);
            for j in i..self.dim {
                let v = if i == zi {
                    c2
                } else if j == zi {
                    c1 * x_t[i]
                } else {
                    c0 * x_t[i] * x_t[j]
                };
                self.m2[k].push(w * v);
                k += 1;
            }
        }
    }

    fn finish(
        self,
        domain_kind: DomainKind,
        eps: f64,
        normalized: bool,
        volume_se: Option<f64>,
    ) -> Result<IntegralInvariants> {
        let vol = self.m0.total();
        if !(vol > 0.0) {
            return Err(Error::DegenerateCovariance("empty domain (zero measure)".into()));
        }
        let bary: Vec<f64> = self.m1.iter().map(|a| a.total() / vol).collect();
        let mut cov = SymMatrix::zeros(self.dim);
        let mut k = 0;
        for i in 0..self.dim {
            for j in i..self.dim {
                let raw = self.m2[k].total();
                let c = raw - vol * bary[i] * bary[j];
                cov.set(i, j, if normalized { c / vol } else { c });
                k += 1;
            }
        }
        Ok(IntegralInvariants {
            domain_kind,
            eps,
            volume: if normalized { 1.0 } else { vol },
            barycenter: bary,
            covariance: cov,
            normalized,
            volume_se,
        })
    }
}

// ---------------------------------------------------------------------------
// boundary geometry
// ---------------------------------------------------------------------------

/// Radius at which the surface graph leaves the ball along the unit tangent
/// direction `dir`: the first root of `rho^2 + h(rho dir)^2 = eps^2`,
/// located by bisection to 1e-13.
pub fn boundary_radius(model: &HypersurfaceModel, eps: f64, dir: &[f64]) -> Result<f64> {
    model.check_eps(eps)?;
    if dir.len() != model.tangent_dim() {
        return Err(Error::DimensionMismatch("direction length".into()));
    }
    let f = |rho: f64| {
        let x: Vec<f64> = dir.iter().map(|v| v * rho).collect();
        let h = model.height_unchecked(&x);
        rho * rho + h * h - eps * eps
    };
    let (mut lo, mut hi) = (0.0, eps);
    if f(hi) < 0.0 {
        // graph stays strictly inside at rho = eps: impossible since
        // rho^2 alone reaches eps^2; guard for rounding
        return Ok(eps);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Polar angle (from the positive normal axis) at which the sphere
/// `|X| = eps` crosses the surface along the tangent direction `dir`:
/// the root of `eps cos(theta) = h(eps sin(theta) dir)`.
fn crossing_angle(model: &HypersurfaceModel, eps: f64, dir: &[f64]) -> f64 {
    let f = |theta: f64| {
        let x: Vec<f64> = dir.iter().map(|v| v * eps * theta.sin()).collect();
        eps * theta.cos() - model.height_unchecked(&x)
    };
    let (mut lo, mut hi) = (0.0, std::f64::consts::PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// quadrature paths
// ---------------------------------------------------------------------------

fn refine<F>(config: &QuadratureConfig, mut run: F) -> Result<IntegralInvariants>
where
    F: FnMut(usize, usize) -> Result<IntegralInvariants>,
{
    let (mut angular, mut radial) = (config.angular, config.radial);
    let mut prev = run(angular, radial)?;
    let mut last_change = f64::INFINITY;
    for _ in 0..config.max_refinements {
        angular *= 2;
        radial *= 2;
        let next = run(angular, radial)?;
        last_change = invariant_distance(&prev, &next);
        let bary = next.barycenter.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let scale = next
            .volume
            .abs()
            .max(next.covariance.norm())
            .max(bary)
            .max(f64::MIN_POSITIVE);
        if last_change <= config.rel_tol * scale {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence { tolerance: config.rel_tol, change: last_change })
}

fn invariant_distance(a: &IntegralInvariants, b: &IntegralInvariants) -> f64 {
    let mut d = (a.volume - b.volume).abs();
    for (x, y) in a.barycenter.iter().zip(&b.barycenter) {
        d = d.max((x - y).abs());
    }
    let dim = a.ambient_dim();
    for i in 0..dim {
        for j in i..dim {
            d = d.max((a.covariance.get(i, j) - b.covariance.get(i, j)).abs());
        }
    }
    d
}

/// Integral invariants of the surface patch `D_p(eps)` by tensor quadrature:
/// a sphere rule over tangent directions times a radial Gauss-Legendre rule
/// on `[0, r(direction)]`, with the area element `rho^(n-1) sqrt(1+|grad|^2)`.
pub fn patch_invariants(
    model: &HypersurfaceModel,
    eps: f64,
    config: &QuadratureConfig,
) -> Result<IntegralInvariants> {
    model.check_eps(eps)?;
    let n = model.tangent_dim();
    refine(config, |angular, radial| {
        let dirs = sphere_rule(n, angular);
        let gl = gauss_legendre(radial);
        let mut acc = MomentAccumulator::new(n + 1);
        let mut grad = vec![0.0; n];
        let mut point = vec![0.0; n + 1];
        for (dir, w_dir) in &dirs {
            let r = boundary_radius(model, eps, dir)?;
            for &(rho, w_rho) in &gl_on_interval(&gl, 0.0, r) {
                for (i, d) in dir.iter().enumerate() {
                    point[i] = d * rho;
                }
                let x = &point[..n];
                let z = model.height_unchecked(x);
                model.height_gradient(x, &mut grad);
                let area = (1.0 + grad.iter().map(|g| g * g).sum::<f64>()).sqrt();
                let w = w_dir * w_rho * rho.powi(n as i32 - 1) * area;
                point[n] = z;
                acc.push_point(&point, w);
            }
        }
        acc.finish(DomainKind::Patch, eps, false, None)
    })
}

/// Integral invariants of the solid component `V+_p(eps)` by cylindrical
/// quadrature. For each tangent direction the radial coordinate is
/// substituted `rho = eps sin(psi)` so the column height stays smooth at the
/// equator; columns run from the graph up to the sphere while the direction
/// is inside the crossing radius, and cover the full chord beyond it when
/// the surface has exited through the lower hemisphere.
pub fn component_invariants(
    model: &HypersurfaceModel,
    eps: f64,
    config: &QuadratureConfig,
) -> Result<IntegralInvariants> {
    model.check_eps(eps)?;
    let n = model.tangent_dim();
    refine(config, |angular, radial| {
        let dirs = sphere_rule(n, angular);
        let gl = gauss_legendre(radial);
        let mut acc = MomentAccumulator::new(n + 1);
        let mut x = vec![0.0; n];
        for (dir, w_dir) in &dirs {
            let r = boundary_radius(model, eps, dir)?;
            let psi_r = (r / eps).min(1.0).asin();
            let mut column_segment = |psi_rule: &[(f64, f64)], full_chord: bool| {
                for &(psi, w_psi) in psi_rule {
                    let rho = eps * psi.sin();
                    let top = eps * psi.cos();
                    for (i, d) in dir.iter().enumerate() {
                        x[i] = d * rho;
                    }
                    let bottom = if full_chord { -top } else { model.height_unchecked(&x) };
                    if bottom >= top {
                        continue;
                    }
                    // dV = rho^{n-1} drho dOmega dz, drho = eps cos(psi) dpsi
                    let w = w_dir * w_psi * rho.powi(n as i32 - 1) * eps * psi.cos();
                    acc.push_column(&x, bottom, top, w);
                }
            };
            column_segment(&gl_on_interval(&gl, 0.0, psi_r), false);
            if psi_r < std::f64::consts::FRAC_PI_2 - 1e-12 {
                // beyond the crossing the column is the full chord exactly
                // when the surface left the ball through the lower half
                let hx: Vec<f64> = dir.iter().map(|v| v * r).collect();
                if model.height_unchecked(&hx) < 0.0 {
                    column_segment(
                        &gl_on_interval(&gl, psi_r, std::f64::consts::FRAC_PI_2),
                        true,
                    );
                }
            }
        }
        acc.finish(DomainKind::Component, eps, false, None)
    })
}

/// Spherical measure of `V+ ∩ S_p(eps)`, the shell cap cut off the sphere of
/// radius `eps` by the surface. Used to cross-check the scale derivative of
/// the component volume.
pub fn component_shell_measure(
    model: &HypersurfaceModel,
    eps: f64,
    config: &QuadratureConfig,
) -> Result<f64> {
    model.check_eps(eps)?;
    let n = model.tangent_dim();
    let dirs = sphere_rule(n, config.angular * 2);
    let gl = gauss_legendre(config.radial * 2);
    let mut acc = PairwiseAccumulator::new();
    for (dir, w_dir) in &dirs {
        let theta_c = crossing_angle(model, eps, dir);
        for &(theta, w_t) in &gl_on_interval(&gl, 0.0, theta_c) {
            acc.push(w_dir * w_t * eps.powi(n as i32) * theta.sin().powi(n as i32 - 1));
        }
    }
    Ok(acc.total())
}

// ---------------------------------------------------------------------------
// quasi-Monte-Carlo path
// ---------------------------------------------------------------------------

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 0.0;
    let mut denom = 1.0;
    while i > 0 {
        denom *= base as f64;
        inv += (i % base) as f64 / denom;
        i /= base;
    }
    inv
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Component invariants by quasi-Monte-Carlo: a Halton sequence in the
/// bounding cube, filtered to the ball and classified with
/// [`HypersurfaceModel::side_classifier`]. The sample is split into 16
/// consecutive batches to report a standard error for the volume.
pub fn component_invariants_qmc(
    model: &HypersurfaceModel,
    eps: f64,
    config: &QuadratureConfig,
) -> Result<IntegralInvariants> {
    model.check_eps(eps)?;
    let d = model.ambient_dim();
    if d > PRIMES.len() {
        return Err(Error::InvalidDimension(format!(
            "QMC path supports ambient dimension <= {}",
            PRIMES.len()
        )));
    }
    let batches = 16usize;
    let per_batch = (config.mc_points / batches).max(1);
    let total = per_batch * batches;
    let cube = (2.0 * eps).powi(d as i32);
    let mut acc = MomentAccumulator::new(d);
    let mut batch_vols = Vec::with_capacity(batches);
    let mut x = vec![0.0; d];
    let mut idx: u64 = 0;
    for _ in 0..batches {
        let mut inside = 0usize;
        for _ in 0..per_batch {
            idx += 1;
            let mut r2 = 0.0;
            for (j, xi) in x.iter_mut().enumerate() {
                *xi = eps * (2.0 * radical_inverse(idx, PRIMES[j]) - 1.0);
                r2 += *xi * *xi;
            }
            if r2 > eps * eps {
                continue;
            }
            if model.side_classifier(&x)? >= 0 {
                inside += 1;
                acc.push_point(&x, 1.0);
            }
        }
        batch_vols.push(cube * inside as f64 / per_batch as f64);
    }
    let vol_mean = pairwise_sum(&batch_vols) / batches as f64;
    let var = batch_vols.iter().map(|v| (v - vol_mean) * (v - vol_mean)).sum::<f64>()
        / (batches as f64 - 1.0);
    let se = (var / batches as f64).sqrt();
    // counting measure -> Lebesgue: each accepted point carries cube / total
    let weight = cube / total as f64;
    let mut inv = acc.finish(DomainKind::Component, eps, false, Some(se))?;
    inv.volume *= weight;
    let dim = inv.ambient_dim();
    for i in 0..dim {
        for j in i..dim {
            let v = inv.covariance.get(i, j);
            inv.covariance.set(i, j, v * weight);
        }
    }
    Ok(inv)
}

/// Monte-Carlo estimate of a monomial integral over the eps-ball, with a
/// Cranley-Patterson random shift of the Halton sequence per batch. Returns
/// `(estimate, standard error)`.
pub fn mc_ball_monomial(
    dim: usize,
    eps: f64,
    exponents: &[u32],
    points: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if dim == 0 || dim > PRIMES.len() {
        return Err(Error::InvalidDimension(format!(
            "MC path supports dimension 1..={}",
            PRIMES.len()
        )));
    }
    if exponents.len() != dim {
        return Err(Error::ExponentMismatch { expected: dim, got: exponents.len() });
    }
    let batches = 16usize;
    let per_batch = (points / batches).max(1);
    let cube = (2.0 * eps).powi(dim as i32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut batch_means = Vec::with_capacity(batches);
    let mut x = vec![0.0; dim];
    for b in 0..batches {
        let shift: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
        let mut acc = PairwiseAccumulator::new();
        for i in 0..per_batch {
            let idx = (b * per_batch + i + 1) as u64;
            let mut r2 = 0.0;
            for j in 0..dim {
                let u = (radical_inverse(idx, PRIMES[j]) + shift[j]).fract();
                x[j] = eps * (2.0 * u - 1.0);
                r2 += x[j] * x[j];
            }
            if r2 > eps * eps {
                continue;
            }
            let mut f = 1.0;
            for (xi, &e) in x.iter().zip(exponents) {
                for _ in 0..e {
                    f *= xi;
                }
            }
            acc.push(f);
        }
        batch_means.push(cube * acc.total() / per_batch as f64);
    }
    let mean = pairwise_sum(&batch_means) / batches as f64;
    let var = batch_means.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (batches as f64 - 1.0);
    Ok((mean, (var / batches as f64).sqrt()))
}

// ---------------------------------------------------------------------------
// point clouds
// ---------------------------------------------------------------------------

/// Discrete, measure-normalized invariants of the cloud points inside the
/// ball `B_center(eps)`: weighted barycenter (relative to `center`) and
/// covariance about the barycenter, both per unit total weight. `volume` is
/// set to 1 and `normalized` flagged, since a bare cloud carries no area.
pub fn cloud_patch_invariants(
    cloud: &PointCloud,
    center: &[f64],
    eps: f64,
) -> Result<IntegralInvariants> {
    let d = cloud.ambient_dim;
    if center.len() != d {
        return Err(Error::DimensionMismatch("center length".into()));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidRadius(format!("eps must be positive, got {eps}")));
    }
    let mut acc = MomentAccumulator::new(d);
    let mut found = 0usize;
    let mut total_w = 0.0;
    let mut rel = vec![0.0; d];
    for (i, p) in cloud.points.iter().enumerate() {
        let mut r2 = 0.0;
        for j in 0..d {
            rel[j] = p[j] - center[j];
            r2 += rel[j] * rel[j];
        }
        if r2 > eps * eps {
            continue;
        }
        let w = cloud.weights.as_ref().map_or(1.0, |ws| ws[i]);
        total_w += w;
        found += 1;
        acc.push_point(&rel, w);
    }
    let needed = d + 2;
    if found < needed {
        return Err(Error::TooFewNeighbors { needed, found });
    }
    if !(total_w > 0.0) {
        return Err(Error::ZeroWeight);
    }
    acc.finish(DomainKind::Patch, eps, true, None)
}

/// Convenience: invariants of a sampled model patch, normalized like
/// [`cloud_patch_invariants`] at the model base point.
pub fn sampled_patch_invariants(
    model: &HypersurfaceModel,
    eps: f64,
    count: usize,
    seed: u64,
) -> Result<IntegralInvariants> {
    let cloud = model.sample_patch(eps, count, seed)?;
    cloud_patch_invariants(&cloud, &vec![0.0; model.ambient_dim()], eps)
}

/// Same for a codimension-k graph submanifold sample.
pub fn sampled_submanifold_invariants(
    model: &GraphSubmanifold,
    eps: f64,
    count: usize,
    seed: u64,
) -> Result<IntegralInvariants> {
    let cloud = model.sample_patch(eps, count, seed)?;
    cloud_patch_invariants(&cloud, &vec![0.0; model.ambient_dim()], eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::eig_sym;
    use crate::models::Polynomial;
    use std::f64::consts::PI;

    fn fast_config() -> QuadratureConfig {
        QuadratureConfig { angular: 16, radial: 16, ..Default::default() }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(8);
        // exact through degree 15
        for k in 0..=15u32 {
            let est: f64 = rule.iter().map(|&(x, w)| w * x.powi(k as i32)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((est - exact).abs() < 1e-13, "degree {k}: {est} vs {exact}");
        }
    }

    #[test]
    fn sphere_rule_total_weight_is_area() {
        // |S^{d-1}| = 2, 2 pi, 4 pi, 2 pi^2
        let areas = [2.0, 2.0 * PI, 4.0 * PI, 2.0 * PI * PI];
        for (d, &area) in (1..=4).zip(&areas) {
            let rule = sphere_rule(d, 12);
            let total: f64 = rule.iter().map(|(_, w)| w).sum();
            assert!((total - area).abs() < 1e-10, "d={d}: {total} vs {area}");
            for (p, _) in &rule {
                let len: f64 = p.iter().map(|v| v * v).sum::<f64>();
                assert!((len - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sphere_rule_quadratic_moments() {
        // integral of x_i^2 over S^{d-1} is area / d
        for d in 2..=4usize {
            let rule = sphere_rule(d, 16);
            let area: f64 = rule.iter().map(|(_, w)| w).sum();
            for i in 0..d {
                let m: f64 = rule.iter().map(|(p, w)| w * p[i] * p[i]).sum();
                assert!((m - area / d as f64).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn pairwise_matches_naive() {
        let v: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin()).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-9);
        let mut acc = PairwiseAccumulator::new();
        for &x in &v {
            acc.push(x);
        }
        // the streaming reduction groups terms differently but is itself
        // deterministic and equally accurate
        assert!((acc.total() - naive).abs() < 1e-9);
        let mut acc2 = PairwiseAccumulator::new();
        for &x in &v {
            acc2.push(x);
        }
        assert_eq!(acc.total(), acc2.total());
    }

    #[test]
    fn boundary_radius_closed_forms() {
        let flat = HypersurfaceModel::graph(vec![0.0, 0.0]).unwrap();
        let r = boundary_radius(&flat, 0.3, &[1.0, 0.0]).unwrap();
        assert!((r - 0.3).abs() < 1e-13);

        // z = x^2/2 along the x-axis: rho^2 = 2(sqrt(1+eps^2) - 1)
        let par = HypersurfaceModel::graph(vec![1.0]).unwrap();
        let eps = 0.35;
        let r = boundary_radius(&par, eps, &[1.0]).unwrap();
        let exact = (2.0 * ((1.0f64 + eps * eps).sqrt() - 1.0)).sqrt();
        assert!((r - exact).abs() < 1e-12);

        // unit sphere: chordal radius eps sqrt(1 - eps^2/4)
        let sph = HypersurfaceModel::sphere(3, 1.0).unwrap();
        let r = boundary_radius(&sph, 0.2, &[1.0, 0.0]).unwrap();
        let exact = 0.2 * (1.0f64 - 0.01).sqrt();
        assert!((r - exact).abs() < 1e-12, "{r} vs {exact}");
        assert!((exact - 0.19899).abs() < 1e-5);
    }

    #[test]
    fn boundary_radius_matches_expansion() {
        // r = eps - kappa(dir)^2 eps^3 / 8 + O(eps^5)
        let m = HypersurfaceModel::graph(vec![2.0, -1.0]).unwrap();
        let dir = [0.6, 0.8];
        let kappa_dir = 2.0 * 0.36 - 1.0 * 0.64; // normal curvature along dir
        for eps in [0.02, 0.01, 0.005] {
            let r = boundary_radius(&m, eps, &dir).unwrap();
            let pred = eps - kappa_dir * kappa_dir * eps.powi(3) / 8.0;
            assert!((r - pred).abs() < 2.0 * eps.powi(5), "eps {eps}");
        }
    }

    #[test]
    fn flat_patch_moments() {
        let m = HypersurfaceModel::graph(vec![0.0, 0.0]).unwrap();
        let inv = patch_invariants(&m, 0.5, &fast_config()).unwrap();
        assert!((inv.volume - PI * 0.25).abs() < 1e-12);
        assert!(inv.barycenter.iter().all(|b| b.abs() < 1e-13));
        // disk second moment: pi eps^4 / 4 per tangent axis
        let t = PI * 0.5f64.powi(4) / 4.0;
        assert!((inv.covariance.get(0, 0) - t).abs() < 1e-12, "{}", inv.covariance.get(0, 0));
        assert!((inv.covariance.get(1, 1) - t).abs() < 1e-12);
        assert!(inv.covariance.get(2, 2).abs() < 1e-15);
        assert!((t - 0.049087).abs() < 1e-6);
    }

    #[test]
    fn sphere_cap_patch_exact_moments() {
        // unit sphere, chord eps: area = pi eps^2, mean height eps^2/4,
        // normal covariance eigenvalue pi eps^6 / 48 (hat-box theorem)
        let m = HypersurfaceModel::sphere(3, 1.0).unwrap();
        let eps = 0.4;
        let inv = patch_invariants(&m, eps, &fast_config()).unwrap();
        assert!((inv.volume - PI * eps * eps).abs() < 1e-11);
        assert!((inv.barycenter[2] - eps * eps / 4.0).abs() < 1e-12);
        assert!(inv.barycenter[0].abs() < 1e-13 && inv.barycenter[1].abs() < 1e-13);
        let lam3 = inv.covariance.get(2, 2);
        assert!((lam3 - PI * eps.powi(6) / 48.0).abs() < 1e-12, "{lam3}");
    }

    #[test]
    fn flat_component_moments() {
        // half ball of radius 1 in R^3
        let m = HypersurfaceModel::graph(vec![0.0, 0.0]).unwrap();
        let inv = component_invariants(&m, 1.0, &fast_config()).unwrap();
        assert!((inv.volume - 2.0 * PI / 3.0).abs() < 1e-11);
        assert!((inv.barycenter[2] - 0.375).abs() < 1e-12);
        let eig = eig_sym(&inv.covariance).unwrap();
        let tangent = 2.0 * PI / 15.0;
        let normal = 2.0 * PI / 15.0 - 3.0 * PI / 32.0;
        assert!((eig.values[0] - tangent).abs() < 1e-11);
        assert!((eig.values[1] - tangent).abs() < 1e-11);
        assert!((eig.values[2] - normal).abs() < 1e-11, "{}", eig.values[2]);
        assert!((normal - 0.1243547).abs() < 1e-6);
    }

    #[test]
    fn lens_volume_exact() {
        // unit sphere, eps = 0.2: V+ is the lens of volume
        // (2 pi / 3) eps^3 - (pi / 4) eps^4
        let m = HypersurfaceModel::sphere(3, 1.0).unwrap();
        let eps = 0.2;
        let inv = component_invariants(&m, eps, &fast_config()).unwrap();
        let exact = 2.0 * PI / 3.0 * eps.powi(3) - PI / 4.0 * eps.powi(4);
        assert!((inv.volume - exact).abs() < 1e-12, "{} vs {exact}", inv.volume);
        assert!((exact - 0.0154985).abs() < 1e-7);
    }

    #[test]
    fn component_volume_monotone_in_eps() {
        let m = HypersurfaceModel::graph(vec![1.5, -0.5]).unwrap();
        let cfg = fast_config();
        let mut last = 0.0;
        for eps in [0.05, 0.1, 0.15, 0.2] {
            let v = component_invariants(&m, eps, &cfg).unwrap().volume;
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn kappa_permutation_equivariance() {
        // swapping the two principal curvatures swaps the tangent axes
        let cfg = fast_config();
        let a = patch_invariants(&HypersurfaceModel::graph(vec![2.0, 0.5]).unwrap(), 0.15, &cfg)
            .unwrap();
        let b = patch_invariants(&HypersurfaceModel::graph(vec![0.5, 2.0]).unwrap(), 0.15, &cfg)
            .unwrap();
        assert!((a.volume - b.volume).abs() < 1e-13);
        assert!((a.covariance.get(0, 0) - b.covariance.get(1, 1)).abs() < 1e-13);
        assert!((a.covariance.get(2, 2) - b.covariance.get(2, 2)).abs() < 1e-13);
    }

    #[test]
    fn covariance_is_psd() {
        let m = HypersurfaceModel::graph_with_higher(
            vec![1.0, -2.0],
            Polynomial::monomial(vec![2, 1], 0.4),
        )
        .unwrap();
        for inv in [
            patch_invariants(&m, 0.12, &fast_config()).unwrap(),
            component_invariants(&m, 0.12, &fast_config()).unwrap(),
        ] {
            let eig = eig_sym(&inv.covariance).unwrap();
            assert!(eig.values.iter().all(|&l| l > -1e-15), "{:?}", eig.values);
        }
    }

    #[test]
    fn qmc_component_agrees_with_quadrature() {
        let m = HypersurfaceModel::graph(vec![1.0, 0.5]).unwrap();
        let eps = 0.25;
        let quad = component_invariants(&m, eps, &fast_config()).unwrap();
        let qmc = component_invariants_qmc(&m, eps, &QuadratureConfig::default()).unwrap();
        let se = qmc.volume_se.unwrap();
        assert!(se > 0.0);
        assert!((qmc.volume - quad.volume).abs() < 4.0 * se + 1e-9,
            "qmc {} quad {} se {se}", qmc.volume, quad.volume);
    }

    #[test]
    fn shell_measure_matches_volume_derivative() {
        let m = HypersurfaceModel::graph(vec![2.0, 1.0]).unwrap();
        let cfg = fast_config();
        let eps = 0.15;
        let h = 1e-3;
        let vp = component_invariants(&m, eps + h, &cfg).unwrap().volume;
        let vm = component_invariants(&m, eps - h, &cfg).unwrap().volume;
        let deriv = (vp - vm) / (2.0 * h);
        let shell = component_shell_measure(&m, eps, &cfg).unwrap();
        assert!((deriv - shell).abs() < 0.01 * shell.abs(), "{deriv} vs {shell}");
    }

    #[test]
    fn shell_measure_flat_leading_terms() {
        // flat graph in R^3: half sphere area 2 pi eps^2; sphere model R=1
        // drops to 2 pi eps^2 - pi eps^3 at leading orders
        let flat = HypersurfaceModel::graph(vec![0.0, 0.0]).unwrap();
        let s = component_shell_measure(&flat, 0.3, &fast_config()).unwrap();
        assert!((s - 2.0 * PI * 0.09).abs() < 1e-10);
        let sph = HypersurfaceModel::sphere(3, 1.0).unwrap();
        let eps = 0.2;
        let s = component_shell_measure(&sph, eps, &fast_config()).unwrap();
        let expect = 2.0 * PI * eps * eps - PI * eps.powi(3);
        assert!((s - expect).abs() < 2.0 * eps.powi(4), "{s} vs {expect}");
    }

    #[test]
    fn mc_ball_monomial_brackets_exact() {
        use crate::sphere_integrals::{monomial_ball_integral, MonomialExponents};
        let eps = 0.7;
        let exps = MonomialExponents::new(vec![2, 0, 0]).unwrap();
        let exact: f64 = monomial_ball_integral::<f64>(3, &exps, eps).unwrap();
        let (est, se) = mc_ball_monomial(3, eps, &[2, 0, 0], 100_000, 1).unwrap();
        assert!((est - exact).abs() < 4.0 * se, "{est} vs {exact} (se {se})");
    }

    #[test]
    fn cloud_moments_basics() {
        // collinear cloud: covariance has rank 1
        let pts: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 * 0.01, 0.0, 0.0]).collect();
        let cloud = PointCloud::new(3, pts, None).unwrap();
        let inv = cloud_patch_invariants(&cloud, &[0.1, 0.0, 0.0], 0.5).unwrap();
        let eig = eig_sym(&inv.covariance).unwrap();
        assert!(eig.values[0] > 1e-6);
        assert!(eig.values[1].abs() < 1e-15 && eig.values[2].abs() < 1e-15);
        assert!(inv.normalized);

        // too few neighbors
        let err = cloud_patch_invariants(&cloud, &[10.0, 0.0, 0.0], 0.1);
        assert!(matches!(err, Err(Error::TooFewNeighbors { .. })));
    }

    #[test]
    fn sampled_cap_normal_eigenvalue() {
        // normalized lambda_3 of a unit-sphere cap is eps^4/48 + O(eps^6)
        let m = HypersurfaceModel::sphere(3, 1.0).unwrap();
        let eps = 0.3;
        let inv = sampled_patch_invariants(&m, eps, 200_000, 9).unwrap();
        let eig = eig_sym(&inv.covariance).unwrap();
        let lam3 = eig.values[2];
        let expect = eps.powi(4) / 48.0;
        assert!((lam3 - expect).abs() < 0.05 * expect, "{lam3} vs {expect}");
    }

    #[test]
    fn cloud_duplication_invariance() {
        let m = HypersurfaceModel::graph(vec![1.0, 2.0]).unwrap();
        let base = m.sample_patch(0.2, 500, 13).unwrap();
        let mut doubled_pts = base.points.clone();
        doubled_pts.extend(base.points.iter().cloned());
        let doubled = PointCloud::new(3, doubled_pts, None).unwrap();
        let c = vec![0.0; 3];
        let a = cloud_patch_invariants(&base, &c, 0.2).unwrap();
        let b = cloud_patch_invariants(&doubled, &c, 0.2).unwrap();
        for i in 0..3 {
            assert!((a.barycenter[i] - b.barycenter[i]).abs() < 1e-14);
            for j in i..3 {
                assert!((a.covariance.get(i, j) - b.covariance.get(i, j)).abs() < 1e-14);
            }
        }
    }
}
