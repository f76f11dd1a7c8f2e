//! Curvature descriptors of embedded submanifolds from PCA integral invariants.
//!
//! The library estimates principal curvatures, principal and normal directions,
//! mean and scalar curvature, and (for higher codimension) the second
//! fundamental form and Riemann tensor of a submanifold, from the volume,
//! barycenter and covariance matrix of two kinds of local kernel domains:
//! the spherical component `V+_p(eps)` cut off a small ball by a hypersurface
//! and the hypersurface patch `D_p(eps)` inside the ball.
//!
//! Modules, bottom-up:
//! - [`sphere_integrals`]: exact monomial integrals over spheres, balls and
//!   half-balls, the constants every asymptotic formula is built from.
//! - [`models`]: synthetic hypersurfaces and codimension-k graphs with exact
//!   curvature oracles, area-uniform sampling and an inside/outside classifier.
//! - [`domains`]: direct numerical integration of the invariants over both
//!   domain kinds, plus discrete moments of point clouds.
//! - [`asymptotics`]: the truncated closed-form expansions of those invariants
//!   in terms of `(n, eps, kappa_1..kappa_n)`.
//! - [`descriptors`]: inversion of the expansions into curvature estimates at
//!   scale, and the small symmetric eigensolver they require.
//! - [`submanifold`]: the codimension-k pipeline through hypersurface
//!   projections and the Gauss equation.
//!
//! The scalar-generic parts (`sphere_integrals`, `asymptotics`, `eig`) work
//! with any [`Real`]; quadrature, sampling and I/O are fixed to `f64`.

pub mod asymptotics;
pub mod cli;
pub mod descriptors;
pub mod domains;
pub mod eig;
pub mod error;
pub mod io;
pub mod models;
pub mod real;
pub mod sphere_integrals;
pub mod submanifold;

pub use error::Error;
pub use real::Real;

/// Default scalar type of the numerical (quadrature / sampling) layers.
pub type Scalar = f64;

/// Concrete aliases for the scalar-generic result types.
pub type AsymptoticInvariants64 = asymptotics::AsymptoticInvariants<f64>;
pub type EigenDecomposition64 = eig::EigenDecomposition<f64>;
