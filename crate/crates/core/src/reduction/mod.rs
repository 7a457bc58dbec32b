//! The two reduction stages, their composition, and equilibrium recovery.

mod bimatrixify;
mod full;
mod linearize;
mod mapping;
mod params;

pub use bimatrixify::{
    bimatrixify, normalization, recover_from_bimatrix, Bimatrixification,
};
pub use full::{recover_full, reduce_full, reduce_full_with_budget, FullReduction};
pub use linearize::{
    linearize, linearize_at, linearize_with_budget, recover_from_polymatrix, Linearization,
};
pub use mapping::{GameMapping, Normalization, Stage};
pub use params::{
    alpha, bimatrix_eps, linearization_eps, linearized_players, payoff_error_squared,
    player_budget, ReductionParams, DEFAULT_PLAYER_BUDGET, PLAYER_BUDGET_VAR,
};
