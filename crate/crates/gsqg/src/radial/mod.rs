//! Polar-coordinate toolkit: radial profiles, free-space velocity
//! quadrature, and the two-scale construction of steep rotation data.

pub mod construct;
pub mod profile;
pub mod velocity;

pub use construct::{
    construct_f1, construct_f2, construct_g, hdot_norm_embedded, make_seed_bump, make_seed_ring,
    sobolev_norm_embedded, F1Construction, F2_ANNULUS,
};
pub use profile::RadialProfile;
pub use velocity::{
    angular_velocity, differential_rotation, oscillatory_velocity, oscillatory_velocity_ring,
    perturbation_velocity_polar, velocity_constant, VelocityComponent,
};

/// Knobs for the free-space quadrature routines. The defaults resolve the
/// kernels of this module to about 1e-8 relative on smooth data; the
/// `verified` entry points re-run at refined settings and reject results
/// that fail to self-converge.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Gauss-Legendre nodes per radial panel.
    pub radial_nodes: usize,
    /// Gauss-Legendre nodes per angular panel.
    pub angular_nodes: usize,
    /// First-panel width for graded subdivisions, relative to the local scale.
    pub split_radius: f64,
    /// Excision radius for principal-value kernels, relative to the
    /// evaluation radius.
    pub pv_epsilon: f64,
    /// Relative disagreement between base and refined runs that the
    /// `verified` entry points tolerate.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial_nodes: 32,
            angular_nodes: 24,
            split_radius: 0.1,
            pv_epsilon: 1e-4,
            tolerance: 1e-6,
        }
    }
}

impl QuadratureSpec {
    /// Same rule with more nodes and a tighter excision, for self-checks.
    pub fn refined(&self) -> Self {
        Self {
            radial_nodes: self.radial_nodes + self.radial_nodes / 2,
            angular_nodes: self.angular_nodes + self.angular_nodes / 2,
            split_radius: 0.5 * self.split_radius,
            pv_epsilon: 0.5 * self.pv_epsilon,
            tolerance: self.tolerance,
        }
    }
}
