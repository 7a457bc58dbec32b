//! k-player normal form to polymatrix: every product of opponents'
//! probabilities is computed by a multiplication gadget whose output player
//! (a mediator) carries the corresponding payoff column.

use std::collections::BTreeMap;

use super::mapping::{GameMapping, Stage};
use super::params::{
    check_budget, linearization_eps, linearized_players, payoff_error_squared, player_budget,
    ReductionParams,
};
use crate::error::{Error, Result};
use crate::game::{Game, NormalFormGame, PlayerRole, PolymatrixGame, Role};
use crate::gadget::{build_copy, lift_circuit, GadgetCircuit, Wire};
use crate::matrix::Matrix;
use crate::mult::{build_mult_chain, Construction};
use crate::profile::{unlinear_index, MixedProfile};
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct Linearization {
    pub game: PolymatrixGame,
    pub mapping: GameMapping,
    pub params: ReductionParams,
    /// The gadget circuit the game was combined from.
    pub circuit: GadgetCircuit,
    /// `mediators[i][c]` carries column `c` of player `i`'s payoff matrix.
    pub mediators: Vec<Vec<usize>>,
}

impl Linearization {
    /// Extends a profile of the source game to the whole polymatrix game by
    /// lifting every gadget exactly.
    pub fn lift(&self, source: &MixedProfile) -> Result<MixedProfile> {
        source.check_shape(&self.mapping.source_counts)?;
        let fixed: BTreeMap<_, _> = source.strategies().iter().cloned().enumerate().collect();
        lift_circuit(&self.circuit, &fixed)
    }

    pub fn num_originals(&self) -> usize {
        self.mapping.source_counts.len()
    }
}

/// Linearizes at the accuracy derived from `eps_k`, within the player budget
/// from the environment.
pub fn linearize(
    game: &NormalFormGame,
    eps_k: &Rational,
    construction: Construction,
) -> Result<Linearization> {
    linearize_with_budget(game, eps_k, construction, player_budget()?)
}

pub fn linearize_with_budget(
    game: &NormalFormGame,
    eps_k: &Rational,
    construction: Construction,
    budget: usize,
) -> Result<Linearization> {
    let k = game.num_players();
    let n = game.max_strategies();
    let (eps_m, capped) = linearization_eps(eps_k, k, n, construction)?;
    let mut params = ReductionParams {
        construction: Some(construction),
        eps_k: Some(eps_k.clone()),
        k: Some(k),
        n: Some(n),
        eps_m: eps_m.clone(),
        eps_m_capped: Some(capped),
        ..Default::default()
    };
    let mut lin = linearize_at(game, &eps_m, construction, budget)?;
    params.payoff_error_squared = lin.params.payoff_error_squared.take();
    params.m = lin.params.m;
    params.total_strategies = lin.params.total_strategies;
    lin.params = params;
    Ok(lin)
}

/// Linearizes with every gadget built at the given `eps_m` directly.
pub fn linearize_at(
    game: &NormalFormGame,
    eps_m: &Rational,
    construction: Construction,
    budget: usize,
) -> Result<Linearization> {
    let counts = game.strategy_counts().to_vec();
    let k = counts.len();
    if k < 2 {
        return Err(Error::param("linearization needs at least two players"));
    }
    if let Some(i) = counts.iter().position(|&n| n < 2) {
        return Err(Error::param(format!(
            "player {i} has a single strategy; polymatrix players need two"
        )));
    }
    construction.check_eps(eps_m)?;
    check_budget(linearized_players(&counts, eps_m, construction)?, budget)?;

    let mut c = GadgetCircuit::new();
    for (i, &n) in counts.iter().enumerate() {
        c.add_player(n, PlayerRole::new(Role::Original, format!("player {i}")));
    }
    let mut mediators = Vec::with_capacity(k);
    for i in 0..k {
        let others: Vec<usize> = (0..k).filter(|&j| j != i).collect();
        let other_counts: Vec<usize> = others.iter().map(|&j| counts[j]).collect();
        let columns: usize = other_counts.iter().product();
        let payoff = game.payoff_matrix(i);
        let mut row = Vec::with_capacity(columns);
        for col in 0..columns {
            let profile = unlinear_index(&other_counts, col);
            let taps: Vec<Wire> = others
                .iter()
                .zip(&profile)
                .map(|(&j, &s)| Wire::tap(j, s))
                .collect();
            let q = if let [only] = taps.as_slice() {
                build_copy(&mut c, *only)?
            } else {
                build_mult_chain(&mut c, &taps, eps_m, construction)?
            };
            c.set_role(
                q.player,
                PlayerRole::new(Role::Mediator, format!("q{i}{profile:?}")),
            );
            let mut m = Matrix::zeros(counts[i], 2);
            for j in 0..counts[i] {
                m.set(j, 1, payoff.get(j, col).clone());
            }
            c.add_edge(i, q.player, m)?;
            row.push(q.player);
        }
        mediators.push(row);
    }
    let poly = c.combine()?;
    let mapping = GameMapping::new(
        Stage::Linearize,
        counts.clone(),
        poly.strategy_counts().to_vec(),
        (0..k).collect(),
        counts.iter().map(|&n| (0..n).collect()).collect(),
    )?;
    let n = game.max_strategies();
    let params = ReductionParams {
        construction: Some(construction),
        k: Some(k),
        n: Some(n),
        payoff_error_squared: Some(payoff_error_squared(eps_m, k, n, construction)?),
        eps_m: eps_m.clone(),
        m: Some(poly.num_players()),
        total_strategies: Some(poly.total_strategies()),
        ..Default::default()
    };
    Ok(Linearization {
        game: poly,
        mapping,
        params,
        circuit: c,
        mediators,
    })
}

/// The first k strategies of a polymatrix profile, checked against the game
/// and mapping.
pub fn recover_from_polymatrix(
    game: &PolymatrixGame,
    profile: &MixedProfile,
    mapping: &GameMapping,
) -> Result<MixedProfile> {
    if mapping.target_counts != game.strategy_counts() {
        return Err(Error::MappingMismatch(
            "mapping target does not match the polymatrix game".into(),
        ));
    }
    mapping.recover(profile)
}
