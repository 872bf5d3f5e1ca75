//! Numerical tolerances shared by every module.

/// Unit trace / unit norm / probability sums.
pub const NORM: f64 = 1e-9;
/// Hermiticity, entry-wise.
pub const HERM: f64 = 1e-9;
/// Unitarity and completeness relations, entry-wise.
pub const UNIT: f64 = 1e-8;
/// Eigenvalues in `[-EIG, 0)` are clamped to zero; below that is an error.
pub const EIG: f64 = 1e-9;
/// Reconstructions and identities between two computed quantities.
pub const RECON: f64 = 1e-7;
/// Outcomes with smaller probability carry no post-measurement state.
pub const PROB: f64 = 1e-12;
/// Pure-state inputs within this distance of unit norm are renormalized.
pub const RENORMALIZE: f64 = 1e-6;
