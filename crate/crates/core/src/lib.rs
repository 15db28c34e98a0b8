//! Cone-separation machinery and Henig global proper efficiency for finite
//! point clouds in finite-dimensional normed spaces.
//!
//! The crate is organized around the pipeline: normed-space primitives
//! ([`space`]), cone representations and augmented dual classification
//! ([`cones`]), the two dilating-cone families ([`dilation`]), the strict
//! separation property and its Bishop-Phelps witnesses ([`separation`]),
//! Pareto/Henig classification of point clouds ([`efficiency`]), and the
//! section-shrinking and density experiments ([`density`]).
//!
//! Planar (2-D) inputs take exact closed-form paths; higher dimensions use
//! mesh sampling with certified covering slack wherever a certificate is
//! claimed.

pub mod cones;
pub mod density;
pub mod dilation;
pub mod efficiency;
pub mod error;
pub mod fixtures;
pub mod sampling;
pub mod separation;
pub mod space;

mod lp;
mod planar;
mod qp;

pub use error::{Error, Result};
pub use space::{Functional, Norm, Point, Space};
