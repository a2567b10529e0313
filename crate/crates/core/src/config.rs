//! Numerical tolerances shared by every predicate.
//!
//! Exact-arithmetic statements (a vector is positive, an eigenvalue is
//! simple, a point is in the spectrum) are decided against these margins.

use serde::{Deserialize, Serialize};

/// Relative residual accepted for linear solves.
pub const SOLVE_RTOL: f64 = 1e-12;
/// Spectral equality tolerance, relative to `|A|`.
pub const SPECTRAL_TOL: f64 = 1e-8;
/// Eigenvalues closer than this (relative to `|A|`) form a cluster.
pub const CLUSTER_TOL: f64 = 1e-7;
/// Absolute margin for entrywise sign decisions.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Default number of trapezoid nodes on a contour.
pub const CONTOUR_NODES: usize = 128;
/// Minimum eigenvalue gap (relative to `|A|`) tolerated along an eigencurve.
pub const CONTINUATION_GAP: f64 = 1e-6;
/// `|tA|_1` beyond which the matrix exponential refuses to run.
pub const EXPM_NORM_CAP: f64 = 1e4;
/// Reciprocal condition below which `lambda I - A` counts as singular.
pub const SINGULAR_RCOND: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub solve_rtol: f64,
    pub spectral_tol: f64,
    pub cluster_tol: f64,
    pub positivity_tol: f64,
    pub contour_nodes: usize,
    pub continuation_gap: f64,
    pub expm_norm_cap: f64,
    /// Points per decade of the geometric mesh used for `lambda -> lambda0` scans.
    pub lambda_mesh_per_decade: usize,
    /// Number of decades the resolvent scan reaches towards `lambda0`.
    pub lambda_mesh_decades: usize,
    /// Number of log-spaced points of the time mesh.
    pub time_mesh_points: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            solve_rtol: SOLVE_RTOL,
            spectral_tol: SPECTRAL_TOL,
            cluster_tol: CLUSTER_TOL,
            positivity_tol: POSITIVITY_TOL,
            contour_nodes: CONTOUR_NODES,
            continuation_gap: CONTINUATION_GAP,
            expm_norm_cap: EXPM_NORM_CAP,
            lambda_mesh_per_decade: 64,
            lambda_mesh_decades: 6,
            time_mesh_points: 256,
        }
    }
}
