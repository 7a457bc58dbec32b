//! The player and strategy correspondence between a source game and the
//! game a reduction produced from it.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{MixedProfile, MixedStrategy};
use crate::rational::{text, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    /// k-player normal form to polymatrix.
    Linearize,
    /// Polymatrix to bimatrix.
    Bimatrix,
    /// Both stages composed.
    Full,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Linearize => "linearize",
            Stage::Bimatrix => "bimatrix",
            Stage::Full => "full",
        }
    }
}

/// Payoffs of the paired game are `(x + shift) * scale` of the raw ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    #[serde(with = "text")]
    pub shift: Rational,
    #[serde(with = "text")]
    pub scale: Rational,
}

/// Source player `i` is played by target player `player_map[i]`, and its
/// strategy `j` by that player's strategy `strategy_maps[i][j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameMapping {
    pub stage: Stage,
    pub source_counts: Vec<usize>,
    pub target_counts: Vec<usize>,
    pub player_map: Vec<usize>,
    pub strategy_maps: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Normalization>,
}

impl GameMapping {
    pub fn new(
        stage: Stage,
        source_counts: Vec<usize>,
        target_counts: Vec<usize>,
        player_map: Vec<usize>,
        strategy_maps: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let m = GameMapping {
            stage,
            source_counts,
            target_counts,
            player_map,
            strategy_maps,
            blocks: None,
            normalization: None,
        };
        m.validate()?;
        Ok(m)
    }

    /// Checks that the player map is total and every strategy map is
    /// injective, with disjoint images for players sharing a target.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::MappingMismatch(msg));
        let k = self.source_counts.len();
        if self.player_map.len() != k || self.strategy_maps.len() != k {
            return bad(format!(
                "{} source players but {} player and {} strategy maps",
                k,
                self.player_map.len(),
                self.strategy_maps.len()
            ));
        }
        let mut used: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.target_counts.len()];
        for i in 0..k {
            let t = self.player_map[i];
            if t >= self.target_counts.len() {
                return bad(format!("source player {i} maps to missing target player {t}"));
            }
            let h = &self.strategy_maps[i];
            if h.len() != self.source_counts[i] {
                return bad(format!(
                    "strategy map of player {i} has {} entries, expected {}",
                    h.len(),
                    self.source_counts[i]
                ));
            }
            for &s in h {
                if s >= self.target_counts[t] {
                    return bad(format!("player {i} maps a strategy to {s}, beyond {}", self.target_counts[t]));
                }
                if !used[t].insert(s) {
                    return bad(format!("target strategy {s} of player {t} is hit twice"));
                }
            }
        }
        if let Some(blocks) = &self.blocks {
            if blocks.iter().sum::<usize>() != self.target_counts.iter().copied().max().unwrap_or(0) {
                return bad(format!("block sizes {blocks:?} do not match the target game"));
            }
        }
        Ok(())
    }

    /// `next` after `self`: source of `self` to target of `next`.
    pub fn compose(&self, next: &GameMapping) -> Result<GameMapping> {
        if self.target_counts != next.source_counts {
            return Err(Error::MappingMismatch(
                "the first mapping's target is not the second mapping's source".into(),
            ));
        }
        let player_map = self.player_map.iter().map(|&t| next.player_map[t]).collect();
        let strategy_maps = self
            .strategy_maps
            .iter()
            .zip(&self.player_map)
            .map(|(h, &t)| h.iter().map(|&s| next.strategy_maps[t][s]).collect())
            .collect();
        let mut m = GameMapping::new(
            Stage::Full,
            self.source_counts.clone(),
            next.target_counts.clone(),
            player_map,
            strategy_maps,
        )?;
        m.blocks = next.blocks.clone();
        m.normalization = next.normalization.clone();
        Ok(m)
    }

    /// Renormalizes each source player's image in the target profile.
    ///
    /// Fails with `ZeroBlockMass` when a source player's image carries no
    /// probability at all.
    pub fn recover(&self, target: &MixedProfile) -> Result<MixedProfile> {
        target
            .check_shape(&self.target_counts)
            .map_err(|e| Error::MappingMismatch(e.to_string()))?;
        let strategies = self
            .strategy_maps
            .iter()
            .zip(&self.player_map)
            .enumerate()
            .map(|(i, (h, &t))| {
                let s = target.strategy(t);
                let picked: Vec<Rational> = h.iter().map(|&j| s.prob(j).clone()).collect();
                let mass = picked.iter().fold(Rational::zero(), |acc, p| acc + p);
                if mass.is_zero() {
                    return Err(Error::ZeroBlockMass { block: i });
                }
                MixedStrategy::new(picked.into_iter().map(|p| p / &mass).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MixedProfile::new(strategies))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn blocks_mapping() -> GameMapping {
        GameMapping::new(
            Stage::Bimatrix,
            vec![2, 2],
            vec![4, 4],
            vec![1, 1],
            vec![vec![0, 1], vec![2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn recover_normalizes_blocks() {
        let y = MixedStrategy::new(vec![ratio(3, 10), ratio(2, 10), ratio(1, 4), ratio(1, 4)]).unwrap();
        let p = MixedProfile::new(vec![MixedStrategy::uniform(4), y]);
        let r = blocks_mapping().recover(&p).unwrap();
        assert_eq!(r.strategy(0).probs(), &[ratio(3, 5), ratio(2, 5)]);
        assert_eq!(r.strategy(1).probs(), &[ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn zero_block() {
        let y = MixedStrategy::new(vec![ratio(1, 2), ratio(1, 2), ratio(0, 1), ratio(0, 1)]).unwrap();
        let p = MixedProfile::new(vec![MixedStrategy::uniform(4), y]);
        assert_eq!(
            blocks_mapping().recover(&p),
            Err(Error::ZeroBlockMass { block: 1 })
        );
    }

    #[test]
    fn validation() {
        assert!(GameMapping::new(Stage::Bimatrix, vec![2], vec![3, 3], vec![2], vec![vec![0, 1]]).is_err());
        assert!(GameMapping::new(Stage::Bimatrix, vec![2], vec![3, 3], vec![1], vec![vec![0, 0]]).is_err());
        assert!(GameMapping::new(Stage::Bimatrix, vec![2, 2], vec![3, 3], vec![1, 1], vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(GameMapping::new(Stage::Bimatrix, vec![2], vec![3, 3], vec![1], vec![vec![0, 3]]).is_err());
    }

    #[test]
    fn composition() {
        let first = GameMapping::new(
            Stage::Linearize,
            vec![2, 2],
            vec![2, 2, 2],
            vec![0, 1],
            vec![vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        let second = GameMapping::new(
            Stage::Bimatrix,
            vec![2, 2, 2],
            vec![6, 6],
            vec![1, 1, 1],
            vec![vec![0, 1], vec![2, 3], vec![4, 5]],
        )
        .unwrap();
        let full = first.compose(&second).unwrap();
        assert_eq!(full.stage, Stage::Full);
        assert_eq!(full.player_map, vec![1, 1]);
        assert_eq!(full.strategy_maps, vec![vec![0, 1], vec![2, 3]]);
        assert!(second.compose(&first).is_err());
    }
}
