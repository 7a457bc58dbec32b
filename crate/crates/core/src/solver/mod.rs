//! Independent equilibrium oracles used to exercise recovery and to check
//! gadget guarantees.

mod brute;
mod grid;
mod lift;
mod lp;
mod support;

pub use brute::{brute_force_normal_nash, DEFAULT_FALLBACK_CAP};
pub use grid::{
    bimatrix_grid, block_masses, grid_enumerate, simplex_grid, simplex_grid_size, BimatrixGrid,
    GridClass, GridConfig, GridEnumeration, DEFAULT_GRID_CAP,
};
pub use lift::{lift_to_bimatrix, LiftMode};
pub use lp::{feasible_point, Constraint};
pub use support::{support_enumeration, support_enumeration_with_cap, DEFAULT_SUPPORT_CAP};

use num_traits::Zero;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    ExactNash,
    EpsWsne(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverResult {
    pub profile: crate::profile::MixedProfile,
    pub certificate: Certificate,
    pub method: &'static str,
}

impl SolverResult {
    /// The eps at which the profile is guaranteed to verify.
    pub fn certified_eps(&self) -> Rational {
        match &self.certificate {
            Certificate::ExactNash => Rational::zero(),
            Certificate::EpsWsne(e) => e.clone(),
        }
    }
}
