//! Exact tropical machinery for plane curves with prescribed multiple points.
//!
//! The crate is `no_std` (with `alloc`) and purely computational: lattice
//! polygons and their widths, Laurent scalars with the `-min exponent`
//! valuation, regular dual subdivisions and tropical curves, influence
//! regions of points, floor configurations, closed-form area bounds,
//! fraction-free multiplicity systems with detropicalization, and
//! jet-evaluation codes. File formats and the command line live in the
//! `tropinfl` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod codes;
pub mod field;
pub mod influence;
pub mod lattice;
pub mod linalg;
pub mod pipeline;
pub mod poly;
pub mod position;
pub mod puiseux;
pub mod solver;
pub mod tropical;

/// Exact rational used for geometry: valuations, curve coordinates, areas.
pub type Rational = num_rational::Ratio<i128>;
