//! Polymatrix to bimatrix: the leader's matrix has very negative diagonal
//! blocks and the polymatrix edges off the diagonal; the imitator's matrix is
//! the identity.

use num_traits::One;

use super::mapping::{GameMapping, Normalization, Stage};
use super::params::{alpha, bimatrix_eps, ReductionParams};
use crate::error::{Error, Result};
use crate::game::{BimatrixGame, Game, PolymatrixGame};
use crate::matrix::SparseMatrix;
use crate::profile::MixedProfile;
use crate::rational::{int, Rational};

#[derive(Debug, Clone)]
pub struct Bimatrixification {
    /// Payoffs in `[-alpha, 2]`.
    pub game: BimatrixGame,
    pub mapping: GameMapping,
    pub params: ReductionParams,
}

impl Bimatrixification {
    /// The same game with payoffs mapped affinely onto `[0, 1]`.
    pub fn normalized_game(&self) -> BimatrixGame {
        let n = self
            .mapping
            .normalization
            .clone()
            .unwrap_or_else(|| normalization(self.params.alpha.as_ref().expect("alpha is set")));
        self.game.affine(&n.shift, &n.scale)
    }

    /// The mapping to pair with [`Self::normalized_game`].
    pub fn normalized_mapping(&self) -> GameMapping {
        let mut m = self.mapping.clone();
        m.normalization = Some(normalization(self.params.alpha.as_ref().expect("alpha is set")));
        m
    }
}

/// `x -> (x + alpha) / (alpha + 2)`, which maps `[-alpha, 2]` onto `[0, 1]`.
pub fn normalization(alpha: &Rational) -> Normalization {
    Normalization {
        shift: alpha.clone(),
        scale: Rational::one() / (alpha + int(2)),
    }
}

pub fn bimatrixify(game: &PolymatrixGame, eps_m: &Rational) -> Result<Bimatrixification> {
    let counts = game.strategy_counts().to_vec();
    let m = counts.len();
    let total = game.total_strategies();
    let eps_2 = bimatrix_eps(eps_m, total)?;
    let alpha = alpha(m, &eps_2);
    let offsets: Vec<usize> = counts
        .iter()
        .scan(0, |acc, &n| {
            let start = *acc;
            *acc += n;
            Some(start)
        })
        .collect();

    let mut a = SparseMatrix::zeros(total, total);
    let neg = -alpha.clone();
    for (i, &n) in counts.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                a.set(offsets[i] + r, offsets[i] + c, neg.clone());
            }
        }
    }
    for (&(i, j), edge) in game.edges() {
        for r in 0..edge.rows() {
            for c in 0..edge.cols() {
                a.set(offsets[i] + r, offsets[j] + c, edge.get(r, c).clone());
            }
        }
    }
    let g2 = BimatrixGame::new(a, SparseMatrix::identity(total))?
        .with_blocks(counts.clone(), Some(alpha.clone()))?;

    let mut mapping = GameMapping::new(
        Stage::Bimatrix,
        counts.clone(),
        vec![total, total],
        vec![1; m],
        counts
            .iter()
            .zip(&offsets)
            .map(|(&n, &off)| (off..off + n).collect())
            .collect(),
    )?;
    mapping.blocks = Some(counts);
    let eps_2_normalized = &eps_2 / (&alpha + int(2));
    let params = ReductionParams {
        eps_m: eps_m.clone(),
        m: Some(m),
        total_strategies: Some(total),
        eps_2: Some(eps_2),
        alpha: Some(alpha),
        eps_2_normalized: Some(eps_2_normalized),
        ..Default::default()
    };
    Ok(Bimatrixification {
        game: g2,
        mapping,
        params,
    })
}

/// Normalizes each block of the imitator's strategy.
pub fn recover_from_bimatrix(
    game: &BimatrixGame,
    profile: &MixedProfile,
    mapping: &GameMapping,
) -> Result<MixedProfile> {
    let blocks = game
        .blocks()
        .ok_or_else(|| Error::MappingMismatch("the bimatrix game has no block structure".into()))?;
    if mapping.target_counts != game.strategy_counts() || mapping.blocks.as_deref() != Some(blocks) {
        return Err(Error::MappingMismatch(
            "mapping does not describe this bimatrix game".into(),
        ));
    }
    mapping.recover(profile)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::game::PlayerRole;
    use crate::matrix::Matrix;
    use crate::profile::MixedStrategy;
    use crate::rational::ratio;

    fn two_by_two() -> PolymatrixGame {
        let mut edges = BTreeMap::new();
        edges.insert(
            (0, 1),
            Matrix::from_rows(vec![vec![int(1), int(0)], vec![int(0), ratio(1, 2)]]).unwrap(),
        );
        PolymatrixGame::new(vec![2, 2], edges, vec![PlayerRole::plain(); 2]).unwrap()
    }

    #[test]
    fn block_layout() {
        let r = bimatrixify(&two_by_two(), &ratio(1, 2)).unwrap();
        assert_eq!(r.params.total_strategies, Some(4));
        assert_eq!(r.params.eps_2, Some(ratio(1, 8)));
        assert_eq!(r.params.alpha, Some(int(256)));
        let a = r.game.a();
        assert_eq!(a.get(0, 0), &int(-256));
        assert_eq!(a.get(3, 2), &int(-256));
        assert_eq!(a.get(0, 2), &int(1));
        assert_eq!(a.get(1, 3), &ratio(1, 2));
        assert_eq!(a.get(2, 0), &int(0));
        assert_eq!(r.game.b().to_dense(), Matrix::identity(4));
        assert_eq!(r.mapping.strategy_maps, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn zero_game_has_only_diagonal_blocks() {
        let g = PolymatrixGame::new(vec![2, 3], BTreeMap::new(), vec![PlayerRole::plain(); 2]).unwrap();
        let r = bimatrixify(&g, &ratio(1, 10)).unwrap();
        assert_eq!(r.game.a().explicit_entries().count(), 4 + 9);
    }

    #[test]
    fn normalized_range() {
        let r = bimatrixify(&two_by_two(), &ratio(1, 2)).unwrap();
        let (lo, hi) = r.normalized_game().a().min_max().unwrap();
        assert!(lo >= int(0) && hi <= int(1));
        assert_eq!(lo, int(0));
        assert_eq!(r.normalized_mapping().normalization.unwrap().shift, int(256));
    }

    #[test]
    fn recovery() {
        let r = bimatrixify(&two_by_two(), &ratio(1, 2)).unwrap();
        let y = MixedStrategy::new(vec![ratio(3, 10), ratio(2, 10), ratio(1, 4), ratio(1, 4)]).unwrap();
        let p = MixedProfile::new(vec![MixedStrategy::uniform(4), y]);
        let back = recover_from_bimatrix(&r.game, &p, &r.mapping).unwrap();
        assert_eq!(back.strategy(0).probs(), &[ratio(3, 5), ratio(2, 5)]);
        let zero = MixedStrategy::new(vec![int(1), int(0), int(0), int(0)]).unwrap();
        let p = MixedProfile::new(vec![MixedStrategy::uniform(4), zero]);
        assert_eq!(
            recover_from_bimatrix(&r.game, &p, &r.mapping),
            Err(Error::ZeroBlockMass { block: 1 })
        );
    }

    #[test]
    fn rejects_eps_out_of_range() {
        assert!(bimatrixify(&two_by_two(), &int(1)).is_err());
    }
}
