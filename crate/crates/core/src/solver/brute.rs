//! Exhaustive search for normal-form games.

use num_traits::Zero;

use super::grid::{simplex_grid, simplex_grid_size};
use super::{Certificate, SolverResult};
use crate::error::Result;
use crate::game::{Game, NormalFormGame};
use crate::profile::{unlinear_index, MixedProfile, MixedStrategy};
use crate::rational::Rational;
use crate::verify::realized_eps;

/// Profiles searched in the mixed fallback before giving up on the grid.
pub const DEFAULT_FALLBACK_CAP: u128 = 200_000;

/// First pure Nash equilibrium in linear profile order; failing that, the
/// grid profile (step `fallback_step`) with the smallest realized eps. If
/// the grid is too large, the uniform profile is certified instead.
pub fn brute_force_normal_nash(game: &NormalFormGame, fallback_step: &Rational) -> Result<SolverResult> {
    let counts = game.strategy_counts().to_vec();
    let total: usize = counts.iter().product();
    for index in 0..total {
        let choice = unlinear_index(&counts, index);
        if is_pure_nash(game, &choice) {
            return Ok(SolverResult {
                profile: MixedProfile::pure(&counts, &choice),
                certificate: Certificate::ExactNash,
                method: "brute-force",
            });
        }
    }

    let mut grid_size: u128 = 1;
    for &n in &counts {
        grid_size = grid_size.saturating_mul(simplex_grid_size(n, fallback_step)?);
    }
    if grid_size > DEFAULT_FALLBACK_CAP {
        let profile = MixedProfile::new(counts.iter().map(|&n| MixedStrategy::uniform(n)).collect());
        return certify(game, profile, "uniform");
    }
    let grids = counts
        .iter()
        .map(|&n| simplex_grid(n, fallback_step))
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = grids.iter().map(Vec::len).collect();
    let mut best: Option<(Rational, MixedProfile)> = None;
    for index in 0..grid_size as usize {
        let pick = unlinear_index(&sizes, index);
        let profile = MixedProfile::new(pick.iter().zip(&grids).map(|(&k, g)| g[k].clone()).collect());
        let eps = realized_eps(game, &profile)?;
        if best.as_ref().is_none_or(|(b, _)| eps < *b) {
            let done = eps.is_zero();
            best = Some((eps, profile));
            if done {
                break;
            }
        }
    }
    let (_, profile) = best.expect("the grid is never empty");
    certify(game, profile, "brute-force-grid")
}

fn certify(game: &NormalFormGame, profile: MixedProfile, method: &'static str) -> Result<SolverResult> {
    let eps = realized_eps(game, &profile)?;
    let certificate = if eps.is_zero() {
        Certificate::ExactNash
    } else {
        Certificate::EpsWsne(eps)
    };
    Ok(SolverResult {
        profile,
        certificate,
        method,
    })
}

fn is_pure_nash(game: &NormalFormGame, choice: &[usize]) -> bool {
    let mut dev = choice.to_vec();
    (0..choice.len()).all(|i| {
        let current = game.payoff(i, choice).clone();
        let counts = game.strategy_counts();
        (0..counts[i]).all(|j| {
            dev[i] = j;
            let ok = *game.payoff(i, &dev) <= current;
            dev[i] = choice[i];
            ok
        })
    })
}
