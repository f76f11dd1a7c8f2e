//! Exact integrals of coordinate monomials over unit spheres, balls and
//! half-balls in `R^n`.
//!
//! For even exponents `alpha_1..alpha_n` the sphere integral is
//! `2 * Gamma(b_1)..Gamma(b_n) / Gamma(b_1+..+b_n)` with `b_i = (alpha_i+1)/2`,
//! and any odd exponent makes it vanish; the ball integral scales the sphere
//! value by `eps^(n+sum(alpha)) / (n+sum(alpha))`.
//!
//! All Gamma arguments are half-integers, so every value here is an exact
//! rational times an integer or half-integer power of pi. The rational part
//! is carried in `BigRational` exactly and converted to the output scalar
//! only at the very end; no general-purpose Gamma is ever evaluated.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::real::Real;

/// Largest supported total degree; the asymptotics never need more than 6.
pub const MAX_DEGREE: usize = 32;

/// Exponents `alpha_1..alpha_n` of a coordinate monomial; `n` is the length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialExponents(Vec<u32>);

impl MonomialExponents {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidDimension("exponent list must be non-empty".into()));
        }
        let degree: usize = exponents.iter().map(|&a| a as usize).sum();
        if degree > MAX_DEGREE {
            return Err(Error::DegreeCap(degree));
        }
        Ok(Self(exponents))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }
}

/// Value of `Gamma(k/2)` for `k >= 1` as an exact rational times
/// an optional factor of `sqrt(pi)`.
fn gamma_half(k: u32) -> (BigRational, bool) {
    assert!(k >= 1);
    if k == 1 {
        return (BigRational::one(), true); // Gamma(1/2) = sqrt(pi)
    }
    if k == 2 {
        return (BigRational::one(), false); // Gamma(1) = 1
    }
    // Gamma(k/2) = (k-2)/2 * Gamma((k-2)/2)
    let (prev, sqrt_pi) = gamma_half(k - 2);
    let factor = BigRational::new(BigInt::from(k - 2), BigInt::from(2));
    (prev * factor, sqrt_pi)
}

/// Exact value as `rational * pi^pi_pow * sqrt(pi)^sqrt_pi` (sqrt_pi in {0,1}).
#[derive(Debug, Clone)]
struct ExactValue {
    rational: BigRational,
    pi_pow: u32,
    sqrt_pi: bool,
}

impl ExactValue {
    fn zero() -> Self {
        Self { rational: BigRational::new(BigInt::from(0), BigInt::from(1)), pi_pow: 0, sqrt_pi: false }
    }

    fn to_real<R: Real>(&self) -> R {
        let num = self.rational.numer().to_f64().expect("rational numerator overflows f64");
        let den = self.rational.denom().to_f64().expect("rational denominator overflows f64");
        let mut v = R::from_f64_(num) / R::from_f64_(den);
        for _ in 0..self.pi_pow {
            v = v * R::pi();
        }
        if self.sqrt_pi {
            v = v * R::pi().sqrt();
        }
        v
    }
}

/// Sphere integral of the monomial, exact-form core.
fn sphere_integral_exact(n: usize, exps: &MonomialExponents) -> Result<ExactValue> {
    check_dims(n, exps)?;
    if exps.exponents().iter().any(|&a| a % 2 == 1) {
        return Ok(ExactValue::zero());
    }
    let mut coeff = BigRational::one();
    let mut sqrt_pis: u32 = 0;
    for &a in exps.exponents() {
        let (c, s) = gamma_half(a + 1);
        coeff *= c;
        if s {
            sqrt_pis += 1;
        }
    }
    let k_den = exps.degree() as u32 + n as u32;
    let (den, den_sqrt) = gamma_half(k_den);
    coeff /= den;
    coeff *= BigRational::from(BigInt::from(2));
    let total_sqrt = sqrt_pis as i32 - if den_sqrt { 1 } else { 0 };
    debug_assert!(total_sqrt >= 0);
    Ok(ExactValue {
        rational: coeff,
        pi_pow: (total_sqrt / 2) as u32,
        sqrt_pi: total_sqrt % 2 == 1,
    })
}

fn check_dims(n: usize, exps: &MonomialExponents) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be >= 1".into()));
    }
    if exps.dim() != n {
        return Err(Error::ExponentMismatch { expected: n, got: exps.dim() });
    }
    Ok(())
}

/// `C_{alpha} = int_{S^{n-1}} x_1^a1 .. x_n^an dS`.
pub fn monomial_sphere_integral<R: Real>(n: usize, exps: &MonomialExponents) -> Result<R> {
    Ok(sphere_integral_exact(n, exps)?.to_real())
}

/// `D_{alpha} = int_{B^n(eps)} x_1^a1 .. x_n^an dx = eps^(n+|a|)/(n+|a|) C_{alpha}`.
pub fn monomial_ball_integral<R: Real>(n: usize, exps: &MonomialExponents, eps: R) -> Result<R> {
    check_dims(n, exps)?;
    if !(eps > R::zero()) {
        return Err(Error::InvalidRadius("eps must be positive".into()));
    }
    let sphere: R = monomial_sphere_integral(n, exps)?;
    let total = n + exps.degree();
    Ok(eps.powi(total as i32) / R::from_usize_(total) * sphere)
}

/// Volume of the `n`-ball of radius `eps`: `V_n(eps) = eps^n pi^(n/2)/Gamma(n/2+1)`.
pub fn ball_volume<R: Real>(n: usize, eps: R) -> Result<R> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be >= 1".into()));
    }
    if !(eps > R::zero()) {
        return Err(Error::InvalidRadius("eps must be positive".into()));
    }
    Ok(eps.powi(n as i32) * unit_ball_volume::<R>(n))
}

/// `C_2 = V_n(1)`, the coefficient every expansion is expressed through.
pub fn unit_ball_volume<R: Real>(n: usize) -> R {
    // pi^(n/2)/Gamma(n/2+1), assembled from the half-integer recursion.
    let (den, den_sqrt) = gamma_half(n as u32 + 2);
    let num = den.denom().to_f64().unwrap();
    let d = den.numer().to_f64().unwrap();
    let mut v = R::from_f64_(num) / R::from_f64_(d);
    let sqrt_pis = n as i32 - if den_sqrt { 1 } else { 0 };
    debug_assert!(sqrt_pis >= 0);
    for _ in 0..sqrt_pis / 2 {
        v = v * R::pi();
    }
    if sqrt_pis % 2 == 1 {
        v = v * R::pi().sqrt();
    }
    v
}

/// Area of the unit sphere `S^{n-1}` in `R^n`: `S_{n-1} = n C_2`.
pub fn sphere_area<R: Real>(n: usize) -> Result<R> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be >= 1".into()));
    }
    Ok(R::from_usize_(n) * unit_ball_volume::<R>(n))
}

/// Monomial integral over the half-ball `{x in B^n(eps): x_1 >= 0}`.
///
/// Even exponents give half the full-ball value; an odd exponent on any
/// coordinate other than the first gives zero; an odd first exponent keeps
/// the Gamma-product formula with `b_1` an integer and no leading factor 2.
pub fn monomial_half_ball_integral<R: Real>(n: usize, exps: &MonomialExponents, eps: R) -> Result<R> {
    check_dims(n, exps)?;
    if !(eps > R::zero()) {
        return Err(Error::InvalidRadius("eps must be positive".into()));
    }
    let e = exps.exponents();
    if e.iter().skip(1).any(|&a| a % 2 == 1) {
        return Ok(R::zero());
    }
    if e[0] % 2 == 0 {
        let full: R = monomial_ball_integral(n, exps, eps)?;
        return Ok(full / R::from_usize_(2));
    }
    // odd first exponent
    let mut coeff = BigRational::one();
    let mut sqrt_pis: u32 = 0;
    for &a in e {
        let (c, s) = gamma_half(a + 1);
        coeff *= c;
        if s {
            sqrt_pis += 1;
        }
    }
    let k_den = exps.degree() as u32 + n as u32;
    let (den, den_sqrt) = gamma_half(k_den);
    coeff /= den;
    let total_sqrt = sqrt_pis as i32 - if den_sqrt { 1 } else { 0 };
    debug_assert!(total_sqrt >= 0);
    let sphere_part = ExactValue {
        rational: coeff,
        pi_pow: (total_sqrt / 2) as u32,
        sqrt_pi: total_sqrt % 2 == 1,
    }
    .to_real::<R>();
    let total = n + exps.degree();
    Ok(eps.powi(total as i32) / R::from_usize_(total) * sphere_part)
}

/// `D_1^{(n)} = int_{B+(eps)} x_1 dx`; in ambient dimension `n+1` this is
/// the exact half-ball first moment `eps^2 V_n(eps) / (n+2)` of the expansions.
pub fn half_ball_first_moment<R: Real>(n: usize, eps: R) -> Result<R> {
    if n < 2 {
        return Err(Error::InvalidDimension("half-ball first moment needs n >= 2".into()));
    }
    let mut e = vec![0u32; n];
    e[0] = 1;
    monomial_half_ball_integral(n, &MonomialExponents::new(e)?, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn exps(e: &[u32]) -> MonomialExponents {
        MonomialExponents::new(e.to_vec()).unwrap()
    }

    #[test]
    fn sphere_examples() {
        let v: f64 = monomial_sphere_integral(2, &exps(&[2, 0])).unwrap();
        assert!((v - PI).abs() < 1e-15);
        let v: f64 = monomial_sphere_integral(3, &exps(&[1, 0, 0])).unwrap();
        assert_eq!(v, 0.0);
        // adaptive-quadrature oracle of x^2 over S^2 gives 4*pi/3
        let v: f64 = monomial_sphere_integral(3, &exps(&[2, 0, 0])).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn ball_examples() {
        let v: f64 = monomial_ball_integral(2, &exps(&[2, 0]), 1.0).unwrap();
        assert!((v - PI / 4.0).abs() < 1e-15);
        let v: f64 = monomial_ball_integral(2, &exps(&[0, 0]), 2.0).unwrap();
        assert!((v - 4.0 * PI).abs() < 1e-13);
        // Monte Carlo oracle (frozen): int x^2 y^2 over unit ball in R^3
        let v: f64 = monomial_ball_integral(3, &exps(&[2, 2, 0]), 1.0).unwrap();
        assert!((v - 4.0 * PI / 105.0).abs() < 1e-15);
    }

    #[test]
    fn volumes_and_areas() {
        assert!((ball_volume::<f64>(3, 1.0).unwrap() - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((sphere_area::<f64>(2).unwrap() - 2.0 * PI).abs() < 1e-15);
        // recursion oracle V_n = V_{n-2} * 2 pi / n
        assert!((ball_volume::<f64>(4, 1.0).unwrap() - PI * PI / 2.0).abs() < 1e-14);
        // consistency with the zero-exponent ball integral
        for n in 1..=8 {
            let z = MonomialExponents::new(vec![0; n]).unwrap();
            let a: f64 = monomial_ball_integral(n, &z, 0.7).unwrap();
            let b: f64 = ball_volume(n, 0.7).unwrap();
            assert!((a - b).abs() < 1e-13 * b.abs());
        }
    }

    #[test]
    fn half_ball_first_moments() {
        // 1-D quadrature oracle: int_0^1 z pi (1 - z^2) dz = pi/4
        assert!((half_ball_first_moment::<f64>(3, 1.0).unwrap() - PI / 4.0).abs() < 1e-15);
        // int x over half unit disk = 2/3
        assert!((half_ball_first_moment::<f64>(2, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        // scaling eps^{n+1}
        assert!((half_ball_first_moment::<f64>(3, 2.0).unwrap() - 4.0 * PI).abs() < 1e-13);
        // D_1^{(n+1)} = eps^2 V_n(eps)/(n+2)
        for n in 1..=6 {
            let eps = 0.37;
            let lhs: f64 = half_ball_first_moment(n + 1, eps).unwrap();
            let rhs = eps * eps * ball_volume::<f64>(n, eps).unwrap() / (n as f64 + 2.0);
            assert!((lhs - rhs).abs() < 1e-14 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn monomial_ratio_identities() {
        for n in 1..=10usize {
            let c2: f64 = monomial_sphere_integral(n, &padded(n, &[2])).unwrap();
            let c4: f64 = monomial_sphere_integral(n, &padded(n, &[4])).unwrap();
            let nf = n as f64;
            assert!((c4 - 3.0 * c2 / (nf + 2.0)).abs() < 1e-14 * c2);
            if n >= 2 {
                let c22: f64 = monomial_sphere_integral(n, &padded(n, &[2, 2])).unwrap();
                assert!((c4 - 3.0 * c22).abs() < 1e-14 * c2);
                assert!((c22 - c2 / (nf + 2.0)).abs() < 1e-14 * c2);
                let c6: f64 = monomial_sphere_integral(n, &padded(n, &[6])).unwrap();
                let c24: f64 = monomial_sphere_integral(n, &padded(n, &[2, 4])).unwrap();
                assert!((c6 - 15.0 * c2 / ((nf + 2.0) * (nf + 4.0))).abs() < 1e-14 * c2);
                assert!((c6 - 5.0 * c24).abs() < 1e-14 * c2);
                if n >= 3 {
                    let c222: f64 = monomial_sphere_integral(n, &padded(n, &[2, 2, 2])).unwrap();
                    assert!((c24 - 3.0 * c222).abs() < 1e-14 * c2);
                    assert!((c6 - 15.0 * c222).abs() < 1e-14 * c2);
                }
            }
        }
    }

    fn padded(n: usize, head: &[u32]) -> MonomialExponents {
        let mut e = head.to_vec();
        assert!(e.len() <= n);
        e.resize(n, 0);
        MonomialExponents::new(e).unwrap()
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(MonomialExponents::new(vec![]).is_err());
        assert!(MonomialExponents::new(vec![33]).is_err());
        assert!(monomial_sphere_integral::<f64>(0, &exps(&[2])).is_err());
        assert!(monomial_sphere_integral::<f64>(3, &exps(&[2, 0])).is_err());
        assert!(monomial_ball_integral::<f64>(2, &exps(&[2, 0]), 0.0).is_err());
        assert!(monomial_ball_integral::<f64>(2, &exps(&[2, 0]), -1.0).is_err());
        assert!(half_ball_first_moment::<f64>(1, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn permutation_symmetry(e in proptest::collection::vec(0u32..5, 1..6), rot in 0usize..5) {
            let n = e.len();
            let total: u32 = e.iter().sum();
            prop_assume!(total as usize <= MAX_DEGREE);
            let mut rotated = e.clone();
            rotated.rotate_left(rot % n);
            let a: f64 = monomial_sphere_integral(n, &MonomialExponents::new(e).unwrap()).unwrap();
            let b: f64 = monomial_sphere_integral(n, &MonomialExponents::new(rotated).unwrap()).unwrap();
            prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1.0));
        }

        #[test]
        fn ball_scaling_law(e in proptest::collection::vec(0u32..4, 1..5),
                            eps in 0.1f64..2.0, lambda in 0.2f64..3.0) {
            let n = e.len();
            let total: usize = e.iter().map(|&a| a as usize).sum();
            let m = MonomialExponents::new(e).unwrap();
            let base: f64 = monomial_ball_integral(n, &m, eps).unwrap();
            let scaled: f64 = monomial_ball_integral(n, &m, lambda * eps).unwrap();
            let predicted = lambda.powi((n + total) as i32) * base;
            prop_assert!((scaled - predicted).abs() <= 1e-10 * predicted.abs().max(1e-12));
        }

        #[test]
        fn odd_exponent_vanishes(idx in 0usize..4, e in proptest::collection::vec(0u32..4, 4)) {
            let mut e = e;
            e[idx] = 2 * e[idx] + 1;
            let m = MonomialExponents::new(e).unwrap();
            let s: f64 = monomial_sphere_integral(4, &m).unwrap();
            let b: f64 = monomial_ball_integral(4, &m, 0.8).unwrap();
            prop_assert_eq!(s, 0.0);
            prop_assert_eq!(b, 0.0);
        }
    }
}
