//! Workbench for non-CSC extremal (HCMU) metrics with one or two singularities
//! on the 2-sphere.
//!
//! The crate is organized around the construction pipeline:
//!
//! * [`classify`] enumerates the admissible singularity configurations
//!   (cone angles, saddle/extremal roles, counts of smooth extrema).
//! * [`hurwitz`] decides realizability of branched-cover data, both by
//!   arithmetic criteria and by exhaustive permutation search at small degree.
//! * [`oneform`] numerically constructs the character 1-form of a metric:
//!   pole locations, residues, and the polynomial pair realizing them.
//! * [`curvature`] integrates the curvature ODE: the antiderivative of the
//!   cubic factor, its monotone inverse, the log-distance potential, and the
//!   metric density in both charts of the sphere.
//! * [`validate`] is the verification harness: quadrature of area and energy
//!   integrals, Gauss-Bonnet, cone-angle regression, finite-difference
//!   curvature consistency, and calibration of the energy-formula constant.

pub mod classify;
pub mod hurwitz;
pub mod curvature;
pub mod oneform;
pub mod poly;
pub mod validate;

pub use num_complex::Complex64;
