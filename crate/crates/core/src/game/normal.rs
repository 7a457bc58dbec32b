use num_traits::{One, Zero};

use super::{check_player, Game};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::profile::{joint_distribution, MixedProfile};
use crate::rational::{format, Rational};

/// A k-player game in normal form.
///
/// `payoffs[i]` has one row per strategy of player `i` and one column per
/// pure profile of the other players, linearized with the lowest-numbered
/// remaining player most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormGame {
    counts: Vec<usize>,
    payoffs: Vec<Matrix>,
}

impl NormalFormGame {
    pub fn new(counts: Vec<usize>, payoffs: Vec<Matrix>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::dims("a game needs at least one player"));
        }
        if counts.contains(&0) {
            return Err(Error::dims("every player needs at least one strategy"));
        }
        if payoffs.len() != counts.len() {
            return Err(Error::dims(format!(
                "{} payoff matrices for {} players",
                payoffs.len(),
                counts.len()
            )));
        }
        let (zero, one) = (Rational::zero(), Rational::one());
        for (i, m) in payoffs.iter().enumerate() {
            let opp = opponent_profiles(&counts, i);
            if m.rows() != counts[i] || m.cols() != opp {
                return Err(Error::dims(format!(
                    "player {i} payoff matrix is {}x{}, expected {}x{opp}",
                    m.rows(),
                    m.cols(),
                    counts[i]
                )));
            }
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    let v = m.get(r, c);
                    if *v < zero || *v > one {
                        return Err(Error::PayoffOutOfRange {
                            value: format(v),
                            location: format!("player {i} [{r}, {c}]"),
                            low: "0".into(),
                            high: "1".into(),
                        });
                    }
                }
            }
        }
        Ok(NormalFormGame { counts, payoffs })
    }

    /// Builds a game from a payoff function over full pure profiles.
    pub fn from_fn(counts: Vec<usize>, f: impl Fn(usize, &[usize]) -> Rational) -> Result<Self> {
        let mut payoffs = Vec::with_capacity(counts.len());
        for i in 0..counts.len() {
            let others: Vec<usize> = other_counts(&counts, i);
            let cols = others.iter().product();
            let mut m = Matrix::zeros(counts[i], cols);
            for c in 0..cols {
                let rest = crate::profile::unlinear_index(&others, c);
                for j in 0..counts[i] {
                    let mut full = rest.clone();
                    full.insert(i, j);
                    m.set(j, c, f(i, &full));
                }
            }
            payoffs.push(m);
        }
        NormalFormGame::new(counts, payoffs)
    }

    pub fn payoff_matrix(&self, player: usize) -> &Matrix {
        &self.payoffs[player]
    }

    /// Largest strategy count.
    pub fn max_strategies(&self) -> usize {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Payoff to `player` at a full pure profile.
    pub fn payoff(&self, player: usize, profile: &[usize]) -> &Rational {
        let others = other_counts(&self.counts, player);
        let rest: Vec<usize> = (0..self.counts.len())
            .filter(|&i| i != player)
            .map(|i| profile[i])
            .collect();
        let col = crate::profile::linear_index(&others, &rest);
        self.payoffs[player].get(profile[player], col)
    }
}

pub(crate) fn other_counts(counts: &[usize], player: usize) -> Vec<usize> {
    counts
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != player)
        .map(|(_, &n)| n)
        .collect()
}

fn opponent_profiles(counts: &[usize], player: usize) -> usize {
    other_counts(counts, player).iter().product()
}

impl Game for NormalFormGame {
    fn strategy_counts(&self) -> &[usize] {
        &self.counts
    }

    fn expected_payoffs(&self, player: usize, profile: &MixedProfile) -> Result<Vec<Rational>> {
        check_player(player, self.counts.len())?;
        profile.check_shape(&self.counts)?;
        let joint = joint_distribution(profile, Some(player))?;
        self.payoffs[player].mul_vec(&joint.probs)
    }
}
