//! Caustics by reflection in circular and elliptic billiard tables.
//!
//! A point source `O` inside a conic table emits a pencil of rays. After `n`
//! reflections off the boundary the rays form a one-parameter family of lines
//! whose envelope is the `n`-th caustic by reflection. This crate builds those
//! families, computes their envelopes (including points at infinity), locates
//! and classifies cusps, and predicts four of them from the confocal conics
//! through the source.
//!
//! Rays are oriented lines written in support coordinates `(alpha, p)`: the
//! direction is `(cos alpha, sin alpha)` and a point `(x, y)` lies on the ray
//! iff `x sin alpha - y cos alpha = p`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod axis;
pub mod cusp;
mod error;
pub mod family;
pub mod geometry;
pub mod jet;
pub mod refraction;
pub mod roots;

pub use error::{CausticError, ReflectFailure};
pub use geometry::{
    ConfocalKind, ConfocalParam, ConicTable, EnvelopePoint, Point, Ray, TangentRay,
};

pub type Result<T, E = CausticError> = core::result::Result<T, E>;
