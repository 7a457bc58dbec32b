use super::{check_player, Game};
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::profile::MixedProfile;
use crate::rational::Rational;

/// Two-player game with `N x N` payoff matrices `A` (row player) and `B`
/// (column player). Block sizes and `alpha` are present on games built from
/// a polymatrix game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimatrixGame {
    counts: [usize; 2],
    a: SparseMatrix,
    b: SparseMatrix,
    blocks: Option<Vec<usize>>,
    alpha: Option<Rational>,
}

impl BimatrixGame {
    pub fn new(a: SparseMatrix, b: SparseMatrix) -> Result<Self> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::dims(format!(
                "A is {}x{} but B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::dims("empty bimatrix game"));
        }
        Ok(BimatrixGame {
            counts: [a.rows(), a.cols()],
            a,
            b,
            blocks: None,
            alpha: None,
        })
    }

    pub fn with_blocks(mut self, blocks: Vec<usize>, alpha: Option<Rational>) -> Result<Self> {
        if self.counts[0] != self.counts[1] {
            return Err(Error::dims("block structure needs a square game"));
        }
        if blocks.iter().sum::<usize>() != self.counts[0] || blocks.contains(&0) {
            return Err(Error::dims(format!(
                "block sizes {:?} do not partition {} strategies",
                blocks, self.counts[0]
            )));
        }
        self.blocks = Some(blocks);
        self.alpha = alpha;
        Ok(self)
    }

    pub fn a(&self) -> &SparseMatrix {
        &self.a
    }

    pub fn b(&self) -> &SparseMatrix {
        &self.b
    }

    pub fn size(&self) -> usize {
        self.counts[0]
    }

    pub fn blocks(&self) -> Option<&[usize]> {
        self.blocks.as_deref()
    }

    pub fn alpha(&self) -> Option<&Rational> {
        self.alpha.as_ref()
    }

    /// Start offset of each block.
    pub fn block_offsets(&self) -> Option<Vec<usize>> {
        self.blocks.as_ref().map(|b| {
            b.iter()
                .scan(0, |acc, &n| {
                    let start = *acc;
                    *acc += n;
                    Some(start)
                })
                .collect()
        })
    }

    /// Same game with every payoff mapped by `x -> (x + shift) * scale`.
    pub fn affine(&self, shift: &Rational, scale: &Rational) -> BimatrixGame {
        BimatrixGame {
            counts: self.counts,
            a: self.a.affine(shift, scale),
            b: self.b.affine(shift, scale),
            blocks: self.blocks.clone(),
            alpha: self.alpha.clone(),
        }
    }
}

impl Game for BimatrixGame {
    fn strategy_counts(&self) -> &[usize] {
        &self.counts
    }

    fn expected_payoffs(&self, player: usize, profile: &MixedProfile) -> Result<Vec<Rational>> {
        check_player(player, 2)?;
        profile.check_shape(&self.counts)?;
        match player {
            0 => self.a.mul_vec(profile.strategy(1).probs()),
            _ => self.b.mul_vec_transposed(profile.strategy(0).probs()),
        }
    }
}
