//! Convex real projective structures on surfaces: Fock–Goncharov
//! coordinates, holonomy, McShane-type identities, Hilbert geometry and
//! volume bounds for moduli spaces.

pub mod cli;
pub mod configurations;
pub mod curves;
pub mod error;
pub mod hilbert_geometry;
pub mod holonomy;
pub mod mcshane;
pub mod projective_core;
pub mod volume;

pub use error::{Error, Result};
