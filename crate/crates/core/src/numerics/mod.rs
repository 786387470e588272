//! Numerical kernels: polynomial roots, adaptive ODE integration, contours
//! and winding numbers, real-line root finding.

mod contour;
mod eigen;
mod ode;
mod poly;
mod roots;

pub use contour::{
    winding_adaptive, winding_number, Contour, ContourPiece, ContourScan, ContourVertex, Piece,
    SegmentLabel, MAX_CONTOUR_SAMPLES, REFINE_PHASE_JUMP,
};
pub use eigen::{eigenvalues, eigenvector};
pub use ode::{integrate, OdeOptions, Termination, Trajectory, DEFAULT_BLOW_UP_NORM};
pub use poly::{count_roots_positive_real, polynomial_roots, Polynomial};
pub use roots::{find_real_roots, refine_complex_zero, RealRootScan};

/// Default distance from the imaginary axis below which a spatial eigenvalue
/// is treated as lying on a Fredholm border.
pub const NEAR_AXIS_MARGIN: f64 = 1e-9;
