//! Projections of surfaces at P3(c)-points: jets, surface geometry, germ
//! recognition, locus tracing, cross-ratio invariants, BDE dynamics and the
//! multi-local region atlas.

pub mod adjacency;
pub mod atlas;
pub mod bde;
pub mod cli;
pub mod cross_ratio;
pub mod germ;
pub mod io;
pub mod jet;
pub mod locus;
pub mod portrait;
pub mod report;
pub mod scalar;
pub mod surface;
pub mod svg;
pub mod verify;
