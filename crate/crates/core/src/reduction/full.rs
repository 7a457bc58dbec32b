//! Both stages composed.

use super::bimatrixify::{bimatrixify, Bimatrixification};
use super::linearize::{linearize_with_budget, Linearization};
use super::mapping::GameMapping;
use super::params::{player_budget, ReductionParams};
use crate::error::Result;
use crate::game::NormalFormGame;
use crate::mult::Construction;
use crate::profile::MixedProfile;
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct FullReduction {
    pub linearization: Linearization,
    pub bimatrix: Bimatrixification,
    /// Source game to the bimatrix game.
    pub mapping: GameMapping,
    /// The complete ledger `eps_k -> eps_m -> eps_2`.
    pub params: ReductionParams,
}

impl FullReduction {
    /// Lifts a source profile to the polymatrix game. Turning that into a
    /// bimatrix profile is [`crate::solver::lift_to_bimatrix`].
    pub fn lift(&self, source: &MixedProfile) -> Result<MixedProfile> {
        self.linearization.lift(source)
    }
}

pub fn reduce_full(
    game: &NormalFormGame,
    eps_k: &Rational,
    construction: Construction,
) -> Result<FullReduction> {
    reduce_full_with_budget(game, eps_k, construction, player_budget()?)
}

pub fn reduce_full_with_budget(
    game: &NormalFormGame,
    eps_k: &Rational,
    construction: Construction,
    budget: usize,
) -> Result<FullReduction> {
    let linearization = linearize_with_budget(game, eps_k, construction, budget)?;
    let bimatrix = bimatrixify(&linearization.game, &linearization.params.eps_m)?;
    let mapping = linearization.mapping.compose(&bimatrix.mapping)?;
    let params = ReductionParams {
        m: bimatrix.params.m,
        total_strategies: bimatrix.params.total_strategies,
        eps_2: bimatrix.params.eps_2.clone(),
        alpha: bimatrix.params.alpha.clone(),
        eps_2_normalized: bimatrix.params.eps_2_normalized.clone(),
        ..linearization.params.clone()
    };
    Ok(FullReduction {
        linearization,
        bimatrix,
        mapping,
        params,
    })
}

/// Recovers a source profile from a profile of the final bimatrix game.
pub fn recover_full(mapping: &GameMapping, profile: &MixedProfile) -> Result<MixedProfile> {
    mapping.recover(profile)
}
