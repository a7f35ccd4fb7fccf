//! Minimal (Steiner) networks on the unit sphere and in the plane, with
//! calibration-based certificates of length-minimality.
//!
//! - [`sphere`]: exact-formula spherical geometry (exp/log maps, geodesic
//!   arcs and balls, spherical trigonometry, the `arccos(5/6)` admissibility
//!   bound).
//! - [`hex`]: the triangular lattice, the hexagonal norm, and the dual
//!   comass for constant matrix forms.
//! - [`network`]: abstract graphs, embedded networks, the minimal-network
//!   conditions, and 1-rectifiable currents with lattice coefficients.
//! - [`solver`]: planar Weiszfeld and spherical Riemannian descent for the
//!   3-terminal Fermat junction, with 120-degree certification.
//! - [`calibration`]: the planar identity calibration and the spherical
//!   branch calibration `df`, with numerical axiom verification.
//! - [`harness`]: competitor sweeps, the calibrated-current inequality
//!   chain, and the grid-search oracle.

pub mod calibration;
pub mod error;
pub mod harness;
pub mod hex;
pub mod linalg;
pub mod network;
pub mod quad;
pub mod solver;
pub mod sphere;

pub use error::{Error, Result};
