//! Pressure-like quantities: block sums, `D_n(y)` sums, `Γ`, and exact
//! values at periodic points.

pub mod count;
pub mod estimators;
pub mod fiber;
pub mod gamma;
pub mod logspace;
pub mod periodic;
pub mod transfer;

pub use count::{count_paths, count_paths_at, count_paths_profile, count_preimage_blocks_exact};
pub use estimators::{
    corollary_estimator, estimate_point, estimate_word, estimator_phi, estimator_psi, estimator_psi_tilde, estimator_t,
    log_s, log_s_profile, Estimator,
};
pub use fiber::{
    dn_count, dn_count_profile, dn_log_weight, dn_log_weight_profile, dn_widened_count, dn_widened_stabilization,
    FiberSets,
};
pub use gamma::{gamma, gamma_word};
pub use logspace::{log_add, log_sum_exp, ScaledVec};
pub use periodic::{
    periodic_values, periodic_values_blocks, periodic_values_compact, LogMatrix, PeriodicRoute, PeriodicValues,
    SpectralEstimate, WeightedFiberMatrix,
};
pub use transfer::{WeightMode, WeightedPaths};
