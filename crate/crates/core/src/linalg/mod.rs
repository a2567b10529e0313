//! Dense complex linear algebra.

mod contour;
mod eigen;
mod expm;
mod matrix;
mod resolvent;

pub use contour::{circle_nodes, spectral_projection, spectral_projection_with};
pub use eigen::{eigensystem, eigensystem_with, EigenFlags, EigenSystem};
pub use expm::{expm, expm_capped, expm_eigen, Propagator};
pub use matrix::{
    inner, norm2, ones, operator_norm, pair, re_parts, real_vec, scalars_to_json, unit, DenseMatrix, MatrixJson,
    ScalarJson,
};
pub use resolvent::{resolvent, resolvent_real, resolvent_residual, solve};
