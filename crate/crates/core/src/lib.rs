//! Eventual positivity of matrix semigroups and resolvents.

pub mod config;
pub mod error;
pub mod linalg;
pub mod models;
pub mod perturbation;
pub mod positivity;
pub mod random;
pub mod rank_one;

pub use config::Config;
pub use error::{Error, ErrorClass, Result};
pub use linalg::{DenseMatrix, EigenSystem};
pub use positivity::{ConeVector, PositivityReport, Verdict};
pub use models::{DiscretizedModel, ModelKind};
pub use perturbation::{EigenCurvePoint, PerturbationCertificate};
pub use rank_one::Rank1;
