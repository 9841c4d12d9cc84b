//! Command line front end: argument parsing, JSON shapes, polynomial text
//! and SVG figures.

pub mod cli;
pub mod dto;
pub mod svg;
pub mod text;

pub use cli::{run, Outcome};
