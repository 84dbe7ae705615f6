//! Star-shaped graph hypersurfaces in warped products `dr² + λ(r)² g_{S^{n−1}}`.
//!
//! The crate covers warping profiles and their structural conditions
//! ([`profile`]), finite-difference calculus on the round fiber ([`fiber`]),
//! curvature of radial graphs ([`surface`]), elementary symmetric functions of
//! the principal curvatures ([`symfunc`]), the Heintze–Karcher and
//! Minkowski-type integral inequalities ([`inequalities`]) and a Newton solver
//! for constant `σ_p` graphs ([`solver`]).

pub mod error;
pub mod export;
pub mod fiber;
pub mod inequalities;
pub mod profile;
pub mod surface;
pub mod quad;
pub mod solver;
pub mod symfunc;

pub use error::{Error, Result};
