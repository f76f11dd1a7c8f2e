//! Truncated closed-form expansions of the integral invariants of the two
//! kernel domains in terms of the scale `eps` and the principal curvatures
//! `kappa_1..kappa_n` at the analysis point.
//!
//! Every quantity is first assembled as a short polynomial in `eps`
//! ([`Series`]), so the invariants of the spherical shell `V+ ∩ S_p(eps)`
//! fall out by term-by-term differentiation in the scale.
//!
//! Conventions: `n` is the hypersurface dimension (ambient `n + 1`),
//! `H = sum kappa_mu` the (unnormalized) mean curvature and
//! `scal = H^2 - sum kappa_mu^2` the scalar curvature of the hypersurface.
//!
//! Retained orders, as errors in `eps` relative to the leading term:
//! volumes to relative order `eps^2` (absolute `eps^(n+3)` for the component,
//! `eps^(n+2)` for the patch), covariance eigenvalues to relative order
//! `eps^2` past their curvature corrections (absolute `eps^(n+5)`).

use crate::real::Real;
use crate::sphere_integrals::unit_ball_volume;

/// Sparse polynomial in the scale: a list of `(coefficient, power)` pairs.
#[derive(Debug, Clone)]
pub struct Series<R> {
    pub terms: Vec<(R, i32)>,
}

impl<R: Real> Series<R> {
    pub fn eval(&self, eps: R) -> R {
        let mut acc = R::zero();
        for &(c, p) in &self.terms {
            acc += c * eps.powi(p);
        }
        acc
    }

    /// d/d(eps), term by term.
    pub fn derivative(&self) -> Series<R> {
        Series {
            terms: self
                .terms
                .iter()
                .filter(|&&(_, p)| p != 0)
                .map(|&(c, p)| (c * R::from_f64_(p as f64), p - 1))
                .collect(),
        }
    }
}

/// The expansions of volume, normal first moment and covariance eigenvalues
/// of one kernel domain, as polynomials in the scale.
#[derive(Debug, Clone)]
pub struct InvariantSeries<R> {
    /// Domain measure.
    pub volume: Series<R>,
    /// First moment along the normal axis (volume times the barycenter
    /// height); tangent moments vanish at this order.
    pub normal_moment: Series<R>,
    /// Covariance eigenvalue attached to the principal direction `mu`.
    pub tangent_eigenvalues: Vec<Series<R>>,
    /// Covariance eigenvalue of the (near-)normal eigenvector.
    pub normal_eigenvalue: Series<R>,
}

/// The same invariants evaluated at one scale.
#[derive(Debug, Clone)]
pub struct AsymptoticInvariants<R> {
    pub volume: R,
    /// Barycenter offset along the normal, `s_z`.
    pub barycenter_normal: R,
    pub tangent_eigenvalues: Vec<R>,
    pub normal_eigenvalue: R,
}

impl<R: Real> InvariantSeries<R> {
    pub fn at(&self, eps: R) -> AsymptoticInvariants<R> {
        let volume = self.volume.eval(eps);
        AsymptoticInvariants {
            volume,
            barycenter_normal: self.normal_moment.eval(eps) / volume,
            tangent_eigenvalues: self.tangent_eigenvalues.iter().map(|s| s.eval(eps)).collect(),
            normal_eigenvalue: self.normal_eigenvalue.eval(eps),
        }
    }

    /// Scale-derivative of every series: the invariants of the spherical
    /// shell `V+ ∩ S_p(eps)` (for the component family).
    pub fn shell(&self) -> InvariantSeries<R> {
        InvariantSeries {
            volume: self.volume.derivative(),
            normal_moment: self.normal_moment.derivative(),
            tangent_eigenvalues: self.tangent_eigenvalues.iter().map(|s| s.derivative()).collect(),
            normal_eigenvalue: self.normal_eigenvalue.derivative(),
        }
    }
}

fn mean_curvature<R: Real>(kappas: &[R]) -> R {
    let mut h = R::zero();
    for &k in kappas {
        h += k;
    }
    h
}

fn scalar_curvature<R: Real>(kappas: &[R]) -> R {
    let h = mean_curvature(kappas);
    let mut sq = R::zero();
    for &k in kappas {
        sq += k * k;
    }
    h * h - sq
}

/// Expansions for the solid component `V+_p(eps)`, with `kappas` the
/// principal curvatures (positive when the surface bends away from `V+`,
/// e.g. `+1/R` on every axis for a sphere with `V+` its interior).
///
/// With `c_n` the unit `n`-ball volume and `H` the mean curvature:
/// volume `c_(n+1) eps^(n+1) / 2 - c_n H eps^(n+2) / (2(n+2))`; normal first
/// moment `c_n eps^(n+2) / (n+2)` exactly at this order; tangent eigenvalue
/// `c_(n+1) eps^(n+3) / (2(n+3)) - c_n (2 kappa_mu + H) eps^(n+4) /
/// (2(n+2)(n+4))`; the normal eigenvalue replaces the curvature correction
/// by the barycenter-drift term `2 c_n^2 / c_(n+1) (n+2)^-2 eps^(n+3)`
/// with its own `H` correction one order down.
pub fn component_series<R: Real>(n: usize, kappas: &[R]) -> InvariantSeries<R> {
    assert_eq!(kappas.len(), n);
    let cn: R = unit_ball_volume(n);
    let cn1: R = unit_ball_volume(n + 1);
    let h = mean_curvature(kappas);
    let nf = R::from_usize_(n);
    let two = R::from_f64_(2.0);
    let np2 = nf + two;
    let np3 = np2 + R::one();
    let np4 = np3 + R::one();
    let ni = n as i32;

    let volume = Series {
        terms: vec![
            (cn1 / two, ni + 1),
            (-(cn * h) / (two * np2), ni + 2),
        ],
    };
    // M_z = V * s_z; with s_z = 2 (Vn/Vn1) eps^2/(n+2) (1 + (Vn/Vn1) eps^2 H/(n+2))
    // and V as above the product telescopes to c_n eps^(n+2)/(n+2) + O(two orders down)
    let normal_moment = Series {
        terms: vec![(cn / np2, ni + 2)],
    };
    let lead = cn1 / (two * np3);
    let tangent_eigenvalues = kappas
        .iter()
        .map(|&k| Series {
            terms: vec![
                (lead, ni + 3),
                (-(cn * (two * k + h)) / (two * np2 * np4), ni + 4),
            ],
        })
        .collect();
    let drift = two * cn * cn / (cn1 * np2 * np2);
    let normal_eigenvalue = Series {
        terms: vec![
            (lead, ni + 3),
            (-drift, ni + 3),
            (-drift * (cn / cn1) * h / np2, ni + 4),
        ],
    };
    // merge the two eps^(n+3) terms of the normal eigenvalue
    let normal_eigenvalue = Series {
        terms: vec![
            (lead - drift, ni + 3),
            (normal_eigenvalue.terms[2].0, ni + 4),
        ],
    };
    InvariantSeries { volume, normal_moment, tangent_eigenvalues, normal_eigenvalue }
}

/// Expansions for the surface patch `D_p(eps)`.
///
/// With `c_n` the unit `n`-ball volume, `H` the mean curvature and `scal`
/// the scalar curvature: area `c_n eps^n (1 + (H^2 - 2 scal) eps^2 /
/// (8(n+2)))`; normal first moment `area x H eps^2 / (2(n+2))` at leading
/// order; tangent eigenvalue `c_n eps^n [eps^2/(n+2) + (H^2 - 2 scal -
/// 4 H kappa_mu) eps^4 / (8(n+2)(n+4))]`; normal eigenvalue
/// `c_n eps^(n+4) ((n+1) H^2/(n+2) - scal) / (2(n+2)(n+4))`.
pub fn patch_series<R: Real>(n: usize, kappas: &[R]) -> InvariantSeries<R> {
    assert_eq!(kappas.len(), n);
    let cn: R = unit_ball_volume(n);
    let h = mean_curvature(kappas);
    let scal = scalar_curvature(kappas);
    let nf = R::from_usize_(n);
    let two = R::from_f64_(2.0);
    let four = R::from_f64_(4.0);
    let eight = R::from_f64_(8.0);
    let np1 = nf + R::one();
    let np2 = nf + two;
    let np4 = np2 + two;
    let ni = n as i32;

    let corr = (h * h - two * scal) / (eight * np2);
    let volume = Series {
        terms: vec![(cn, ni), (cn * corr, ni + 2)],
    };
    // s_z = H eps^2 / (2(n+2)) against the leading area
    let normal_moment = Series {
        terms: vec![(cn * h / (two * np2), ni + 2)],
    };
    let tangent_eigenvalues = kappas
        .iter()
        .map(|&k| Series {
            terms: vec![
                (cn / np2, ni + 2),
                (cn * (h * h - two * scal - four * h * k) / (eight * np2 * np4), ni + 4),
            ],
        })
        .collect();
    let normal_eigenvalue = Series {
        terms: vec![(cn * (np1 * h * h / np2 - scal) / (two * np2 * np4), ni + 4)],
    };
    InvariantSeries { volume, normal_moment, tangent_eigenvalues, normal_eigenvalue }
}

/// Convenience: component invariants evaluated at one scale.
pub fn component_invariants_at<R: Real>(n: usize, eps: R, kappas: &[R]) -> AsymptoticInvariants<R> {
    component_series(n, kappas).at(eps)
}

/// Convenience: patch invariants evaluated at one scale.
pub fn patch_invariants_at<R: Real>(n: usize, eps: R, kappas: &[R]) -> AsymptoticInvariants<R> {
    patch_series(n, kappas).at(eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn flat_component_is_exact_half_ball() {
        let inv = component_invariants_at::<f64>(2, 1.0, &[0.0, 0.0]);
        assert!((inv.volume - 2.0 * PI / 3.0).abs() < 1e-14);
        assert!((inv.barycenter_normal - 0.375).abs() < 1e-14);
        for lam in &inv.tangent_eigenvalues {
            assert!((lam - 2.0 * PI / 15.0).abs() < 1e-14);
        }
        let expect = 2.0 * PI / 15.0 - 3.0 * PI / 32.0;
        assert!((inv.normal_eigenvalue - expect).abs() < 1e-14);
        assert!((expect - 0.1243547).abs() < 1e-6);
    }

    #[test]
    fn flat_patch_is_exact_disk() {
        let inv = patch_invariants_at::<f64>(2, 0.5, &[0.0, 0.0]);
        assert!((inv.volume - PI * 0.25).abs() < 1e-15);
        assert_eq!(inv.barycenter_normal, 0.0);
        let t = PI * 0.5f64.powi(4) / 4.0;
        for lam in &inv.tangent_eigenvalues {
            assert!((lam - t).abs() < 1e-15);
        }
        assert_eq!(inv.normal_eigenvalue, 0.0);
    }

    #[test]
    fn sphere_component_volume_matches_lens() {
        // unit sphere: exact lens volume (2 pi/3) eps^3 - (pi/4) eps^4
        let eps = 0.2;
        let inv = component_invariants_at::<f64>(2, eps, &[1.0, 1.0]);
        let exact = 2.0 * PI / 3.0 * eps.powi(3) - PI / 4.0 * eps.powi(4);
        assert!((inv.volume - exact).abs() < 1e-15, "{} vs {exact}", inv.volume);
    }

    #[test]
    fn sphere_patch_matches_cap() {
        // unit sphere cap: area = pi eps^2 exactly; the area series carries
        // a spurious O(eps^4) only at the next truncated order
        let eps = 0.2;
        let inv = patch_invariants_at::<f64>(2, eps, &[1.0, 1.0]);
        assert!((inv.volume - PI * eps * eps).abs() < 2.0 * eps.powi(6));
        // hat-box mean height eps^2/4; series gives H eps^2/(2(n+2)) = eps^2/4
        assert!((inv.barycenter_normal - eps * eps / 4.0).abs() < 1e-15);
        // normal eigenvalue (per unit area) eps^4/48: series pi eps^6/48
        assert!((inv.normal_eigenvalue - PI * eps.powi(6) / 48.0).abs() < 1e-18);
    }

    #[test]
    fn shell_rates() {
        // sphere component: dV/deps = 2 pi eps^2 - pi eps^3
        let shell = component_series::<f64>(2, &[1.0, 1.0]).shell();
        let eps = 0.2f64;
        let rate = shell.volume.eval(eps);
        assert!((rate - (2.0 * PI * eps * eps - PI * eps.powi(3))).abs() < 1e-15);
        // normal moment rate is curvature-free: eps^(n+1) c_n
        let m = shell.normal_moment.eval(eps);
        assert!((m - PI * eps.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn shell_h_cancellation() {
        // kappas (t, -t) have H = 0: the shell volume rate equals the flat one
        let curved = component_series::<f64>(2, &[0.7, -0.7]).shell();
        let flat = component_series::<f64>(2, &[0.0, 0.0]).shell();
        for eps in [0.1, 0.2, 0.4] {
            assert!((curved.volume.eval(eps) - flat.volume.eval(eps)).abs() < 1e-15);
        }
    }

    #[test]
    fn works_in_f32() {
        let inv = component_invariants_at::<f32>(2, 1.0f32, &[0.0, 0.0]);
        assert!((inv.volume - 2.0 * std::f32::consts::PI / 3.0).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn permutation_symmetry(
            k1 in -2.0f64..2.0, k2 in -2.0f64..2.0, k3 in -2.0f64..2.0,
            eps in 0.01f64..0.3,
        ) {
            let a = patch_invariants_at(3, eps, &[k1, k2, k3]);
            let b = patch_invariants_at(3, eps, &[k3, k1, k2]);
            prop_assert!((a.volume - b.volume).abs() < 1e-15);
            prop_assert!((a.normal_eigenvalue - b.normal_eigenvalue).abs() < 1e-18);
            prop_assert!((a.tangent_eigenvalues[0] - b.tangent_eigenvalues[1]).abs() < 1e-15);
            let c = component_invariants_at(3, eps, &[k1, k2, k3]);
            let d = component_invariants_at(3, eps, &[k2, k1, k3]);
            prop_assert!((c.volume - d.volume).abs() < 1e-15);
            prop_assert!((c.tangent_eigenvalues[2] - d.tangent_eigenvalues[2]).abs() < 1e-15);
        }

        #[test]
        fn component_volume_below_half_ball_for_convex(
            k in 0.1f64..2.0, eps in 0.01f64..0.2,
        ) {
            // positive curvature bends the surface away from V+, shrinking it
            let inv = component_invariants_at(2, eps, &[k, k]);
            let half = 2.0 * PI / 3.0 * eps.powi(3);
            prop_assert!(inv.volume < half);
        }
    }
}
