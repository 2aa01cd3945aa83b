//! Graphs cellularly embedded in closed surfaces, as signed rotation systems.
//!
//! The crate traces faces and classifies the carrier surface, contracts edges
//! and splits vertices, decides (3, α)-sparsity, evaluates the girth
//! inequalities over superfaces, enumerates contraction-minimal members of
//! the triangulation families and probes generic 3-rigidity.

pub mod build;
pub mod census;
pub mod girth;
pub mod io;
pub mod map;
pub mod rigidity;
pub mod sparsity;
pub mod surgery;

pub use map::{CanonicalCode, EmbeddedGraph, FaceWalk, Faces, MapError, MapTables, SurfaceClass};
