//! Perturbation radii, Neumann-series resolvents, eigencurves and openness probes.

mod eigencurve;
mod halfplane;
mod openness;
mod radius;

pub use eigencurve::{eigencurve, eigencurve_csv, eigencurve_with, EigenCurvePoint, Gauge};
pub use halfplane::{
    check_quantitative_theorem, check_quantitative_theorem_with, halfplane_sup_norm, halfplane_sup_norm_with,
    HalfplaneEstimate, HalfplaneStrategy, QuantitativeReport, QUANTITATIVE_MESH,
};
pub use openness::{
    decreasing_trend, generator_radius, generator_radius_with, openness_probe, openness_probe_with,
    projection_continuity, projection_continuity_with, ContinuityRow, GeneratorRadius, OpennessReport,
};
pub use radius::{
    certify_multiplication_perturbation, certify_multiplication_perturbation_with, certify_resolvent_perturbation,
    certify_resolvent_perturbation_with, eigenvalue_radius, eigenvalue_radius_with, neumann_resolvent,
    NeumannResolvent, PerturbationCertificate,
};
