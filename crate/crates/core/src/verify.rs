//! The ε-well-supported Nash check, done in exact arithmetic.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::game::Game;
use crate::profile::MixedProfile;
use crate::rational::Rational;

/// True iff `payoffs[j] >= max(payoffs) - eps`.
pub fn is_eps_best_response(payoffs: &[Rational], j: usize, eps: &Rational) -> Result<bool> {
    if j >= payoffs.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            limit: payoffs.len(),
        });
    }
    if eps.is_negative() {
        return Err(Error::param("eps must be non-negative"));
    }
    Ok(&payoffs[j] + eps >= max_entry(payoffs))
}

/// Largest entry; zero for an empty slice.
pub fn max_entry(v: &[Rational]) -> Rational {
    v.iter().max().cloned().unwrap_or_else(Rational::zero)
}

/// Supported strategies of one player that are not ε-best responses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerReport {
    pub player: usize,
    /// Clamped players are not checked.
    pub clamped: bool,
    pub violations: Vec<usize>,
    /// `max(u) - min_{j in support} u[j]`: the smallest ε this player meets.
    pub regret: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub eps: Rational,
    pub players: Vec<PlayerReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.players.iter().all(|p| p.violations.is_empty())
    }

    /// Smallest ε at which the (unclamped part of the) profile is a WSNE.
    pub fn realized_eps(&self) -> Rational {
        self.players
            .iter()
            .filter(|p| !p.clamped)
            .map(|p| p.regret.clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn failing_players(&self) -> Vec<usize> {
        self.players
            .iter()
            .filter(|p| !p.violations.is_empty())
            .map(|p| p.player)
            .collect()
    }
}

pub fn verify_wsne<G: Game + ?Sized>(
    game: &G,
    profile: &MixedProfile,
    eps: &Rational,
) -> Result<VerificationReport> {
    verify_wsne_clamped(game, profile, eps, &BTreeSet::new())
}

/// As [`verify_wsne`], but players in `clamped` have externally fixed
/// strategies and are exempt from the best-response condition.
pub fn verify_wsne_clamped<G: Game + ?Sized>(
    game: &G,
    profile: &MixedProfile,
    eps: &Rational,
    clamped: &BTreeSet<usize>,
) -> Result<VerificationReport> {
    if eps.is_negative() {
        return Err(Error::param("eps must be non-negative"));
    }
    profile.check_shape(game.strategy_counts())?;
    let mut players = Vec::with_capacity(game.num_players());
    for i in 0..game.num_players() {
        if clamped.contains(&i) {
            players.push(PlayerReport {
                player: i,
                clamped: true,
                violations: Vec::new(),
                regret: Rational::zero(),
            });
            continue;
        }
        let u = game.expected_payoffs(i, profile)?;
        players.push(player_report(i, &u, profile, eps));
    }
    Ok(VerificationReport {
        eps: eps.clone(),
        players,
    })
}

fn player_report(i: usize, u: &[Rational], profile: &MixedProfile, eps: &Rational) -> PlayerReport {
    let best = max_entry(u);
    let mut violations = Vec::new();
    let mut regret = Rational::zero();
    for j in profile.strategy(i).support() {
        let gap = &best - &u[j];
        if &gap > eps {
            violations.push(j);
        }
        if gap > regret {
            regret = gap;
        }
    }
    PlayerReport {
        player: i,
        clamped: false,
        violations,
        regret,
    }
}

/// Smallest ε for which `profile` is an ε-WSNE of `game`.
pub fn realized_eps<G: Game + ?Sized>(game: &G, profile: &MixedProfile) -> Result<Rational> {
    Ok(verify_wsne(game, profile, &Rational::zero())?.realized_eps())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::BimatrixGame;
    use crate::matrix::{Matrix, SparseMatrix};
    use crate::profile::MixedStrategy;
    use crate::rational::{int, ratio};

    fn pennies() -> BimatrixGame {
        let a = Matrix::from_rows(vec![vec![int(1), int(0)], vec![int(0), int(1)]]).unwrap();
        let b = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        BimatrixGame::new(SparseMatrix::from_dense(&a), SparseMatrix::from_dense(&b)).unwrap()
    }

    #[test]
    fn best_response_comparisons() {
        let v = vec![ratio(3, 10), ratio(35, 100)];
        assert!(is_eps_best_response(&v, 0, &ratio(5, 100)).unwrap());
        assert!(!is_eps_best_response(&v, 0, &ratio(4, 100)).unwrap());
        let flat = vec![ratio(1, 3); 3];
        assert!(is_eps_best_response(&flat, 2, &int(0)).unwrap());
        let zeta = ratio(1, 2);
        let p1 = ratio(7, 10);
        assert!(!is_eps_best_response(&[zeta, p1], 0, &ratio(1, 10)).unwrap());
        assert!(is_eps_best_response(&flat, 3, &int(0)).is_err());
    }

    #[test]
    fn matching_pennies() {
        let g = pennies();
        let mixed = MixedProfile::new(vec![MixedStrategy::uniform(2), MixedStrategy::uniform(2)]);
        assert!(verify_wsne(&g, &mixed, &int(0)).unwrap().passed());

        let skew = MixedProfile::new(vec![MixedStrategy::pure(2, 0), MixedStrategy::uniform(2)]);
        let report = verify_wsne(&g, &skew, &ratio(1, 2)).unwrap();
        assert!(!report.passed());
        assert_eq!(report.failing_players(), vec![1]);
        assert_eq!(report.players[1].violations, vec![0]);
        assert_eq!(report.realized_eps(), int(1));
    }

    #[test]
    fn clamped_players_are_skipped() {
        let g = pennies();
        let skew = MixedProfile::new(vec![MixedStrategy::pure(2, 0), MixedStrategy::uniform(2)]);
        let clamped: BTreeSet<usize> = [1].into_iter().collect();
        assert!(verify_wsne_clamped(&g, &skew, &int(0), &clamped).unwrap().passed());
    }
}
