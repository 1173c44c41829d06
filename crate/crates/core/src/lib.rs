//! Numerical synthetic Lorentzian comparison geometry.
//!
//! The crate covers the two-dimensional model planes of constant curvature,
//! finite Lorentzian pre-length spaces with their axioms and generators,
//! timelike curvature-bound checkers (four-point, ε-μ midpoint and triangle
//! conditions), Minkowski cones over metric spaces, and a laboratory for
//! angles, directions and tangent-cone blow-ups on analytic spacetimes.
//!
//! All kernels are generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the bottom of this file fix the working precision to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cone;
pub mod curvcheck;
pub mod directions;
pub mod error;
pub mod hyperbolic;
pub mod lorspace;
pub mod model2d;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Scalar, Vec3};

pub type Ambient = lorspace::AmbientSpec<f64>;
pub type Curvature = model2d::CurvatureParam<f64>;
pub type Direction = directions::DirectionSample<f64>;
pub type MetricSpace = cone::FiniteMetricSpace<f64>;
pub type Quadruple = curvcheck::QuadrupleTaus<f64>;
pub type Sides = model2d::TriangleSides<f64>;
pub type Space = lorspace::FiniteLorentzSpace<f64>;
