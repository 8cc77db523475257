//! Spectral laboratory for the generalized surface quasi-geostrophic
//! equation on the periodic box, with a polar-coordinate toolkit for
//! radial and near-radial data.
//!
//! The active scalar theta(x, t) is advected by the nonlocal velocity
//! v = grad^perp psi, psi = -L^{gamma-1} theta, gamma in (-1, 1), where
//! L^alpha is the Fourier multiplier |xi|^alpha. gamma -> 1 approaches
//! the perpendicular-gradient (vortex patch) regime; gamma = 0 is the
//! classical surface quasi-geostrophic case.

pub mod checkpoint;
pub mod error;
pub mod experiments;
pub mod field;
pub mod fit;
pub mod grid;
pub mod operators;
pub mod pseudosolution;
pub mod quadrature;
pub mod radial;
pub mod sobolev;
pub mod solver;

pub use error::{Error, Result};
pub use field::SpectralField;
pub use grid::GridSpec;
