//! Curvature, Jordan data and geodesic completeness for signature (2,2)
//! Walker metrics.
//!
//! A Walker metric on R^4 has `g(∂1,∂3) = g(∂2,∂4) = 1` and free entries
//! `ψ33, ψ34, ψ44` in the lower block. This crate computes its curvature
//! exactly at rational points, classifies Jacobi and conformal Jacobi
//! operators by their exact minimal polynomials, integrates geodesics with
//! finite-time blowup detection, and replays a catalog of example metrics.

pub mod expression;

pub use expression::{parse, Coord, Point4, Poly4, Rational};
pub mod catalog;
pub mod dynamics;
pub mod geometry;
pub mod random;
pub mod spectral;

pub use geometry::{CurvatureReport, WalkerMetric};
