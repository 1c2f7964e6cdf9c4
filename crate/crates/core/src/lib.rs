//! Exact invariants for Lagrangian intersections: inertia and Maslov indices,
//! intersection degrees, 𝔽₂ sublevel persistence and interval sheaves on ℝ.

pub mod matrix;
pub mod rational;
pub mod symplinalg;
pub mod maslov;
pub mod sample;
pub mod degrees;
pub mod flathomology;
pub mod intervalsheaves;
pub mod harness;
