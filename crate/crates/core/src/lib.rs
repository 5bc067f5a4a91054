//! Knot diagrams, the Kauffman bracket and Jones polynomial, Tait graphs,
//! and quasi-alternating obstructions and certificates.

pub mod bracket;
pub mod corpus;
pub mod cyclotomic;
pub mod diagram;
pub mod laurent;
pub mod qa;
pub mod tait;

pub use diagram::{parse_pd, Diagram, DiagramError, Smoothing};
pub use laurent::{HalfInt, HalfLaurent};
