//! Mixed strategies, profiles and joint distributions.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A probability vector over one player's pure strategies.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedStrategy {
    probs: Vec<Rational>,
}

impl MixedStrategy {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidStrategy("empty probability vector".into()));
        }
        if let Some(p) = probs.iter().find(|p| p.is_negative()) {
            return Err(Error::InvalidStrategy(format!("negative probability {p}")));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidStrategy(format!("probabilities sum to {total}")));
        }
        Ok(MixedStrategy { probs })
    }

    pub fn pure(n: usize, j: usize) -> Self {
        assert!(j < n, "pure strategy {j} out of {n}");
        let mut probs = vec![Rational::zero(); n];
        probs[j] = Rational::one();
        MixedStrategy { probs }
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        let p = Rational::new(1.into(), (n as i64).into());
        MixedStrategy { probs: vec![p; n] }
    }

    /// Binary player representing `value`: plays strategy 1 with that probability.
    pub fn binary(value: Rational) -> Result<Self> {
        MixedStrategy::new(vec![Rational::one() - &value, value])
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, j: usize) -> &Rational {
        &self.probs[j]
    }

    pub fn into_probs(self) -> Vec<Rational> {
        self.probs
    }

    pub fn support(&self) -> Vec<usize> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(j, _)| j)
            .collect()
    }

    /// Value represented by a binary player.
    pub fn value(&self) -> &Rational {
        &self.probs[self.probs.len() - 1]
    }
}

/// One mixed strategy per player, in player order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedProfile {
    strategies: Vec<MixedStrategy>,
}

impl MixedProfile {
    pub fn new(strategies: Vec<MixedStrategy>) -> Self {
        MixedProfile { strategies }
    }

    pub fn pure(counts: &[usize], choice: &[usize]) -> Self {
        MixedProfile::new(
            counts
                .iter()
                .zip(choice)
                .map(|(&n, &j)| MixedStrategy::pure(n, j))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    pub fn strategies(&self) -> &[MixedStrategy] {
        &self.strategies
    }

    pub fn strategy(&self, i: usize) -> &MixedStrategy {
        &self.strategies[i]
    }

    pub fn into_strategies(self) -> Vec<MixedStrategy> {
        self.strategies
    }

    pub fn check_shape(&self, counts: &[usize]) -> Result<()> {
        if self.strategies.len() != counts.len() {
            return Err(Error::dims(format!(
                "profile has {} strategies for {} players",
                self.strategies.len(),
                counts.len()
            )));
        }
        for (i, (s, &n)) in self.strategies.iter().zip(counts).enumerate() {
            if s.len() != n {
                return Err(Error::dims(format!(
                    "player {i} has {n} strategies but the profile gives {}",
                    s.len()
                )));
            }
        }
        Ok(())
    }
}

/// Probabilities of all pure profiles of a player subset.
///
/// Pure profiles are linearized with the lowest-numbered included player
/// most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    pub players: Vec<usize>,
    pub probs: Vec<Rational>,
}

pub fn joint_distribution(profile: &MixedProfile, exclude: Option<usize>) -> Result<JointDistribution> {
    if let Some(x) = exclude {
        if x >= profile.len() {
            return Err(Error::IndexOutOfRange {
                index: x,
                limit: profile.len(),
            });
        }
    }
    let players: Vec<usize> = (0..profile.len()).filter(|&i| Some(i) != exclude).collect();
    let mut probs = vec![Rational::one()];
    for &i in &players {
        let s = profile.strategy(i);
        let mut next = Vec::with_capacity(probs.len() * s.len());
        for acc in &probs {
            for p in s.probs() {
                next.push(acc * p);
            }
        }
        probs = next;
    }
    Ok(JointDistribution { players, probs })
}

/// Mixed-radix index of a pure profile over `counts`, first entry most significant.
pub fn linear_index(counts: &[usize], choice: &[usize]) -> usize {
    counts
        .iter()
        .zip(choice)
        .fold(0, |acc, (&n, &s)| acc * n + s)
}

/// Inverse of [`linear_index`].
pub fn unlinear_index(counts: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; counts.len()];
    for (slot, &n) in out.iter_mut().zip(counts).rev() {
        *slot = index % n;
        index /= n;
    }
    out
}
