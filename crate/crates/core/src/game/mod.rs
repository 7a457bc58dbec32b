//! The three game classes and the expected-payoff interface they share.

mod bimatrix;
mod normal;
mod polymatrix;

pub use bimatrix::BimatrixGame;
pub use normal::NormalFormGame;
pub use polymatrix::{PlayerRole, PolymatrixGame, Role};

use crate::error::Result;
use crate::profile::MixedProfile;
use crate::rational::Rational;

/// Anything whose players have expected payoff vectors under a mixed profile.
pub trait Game {
    fn strategy_counts(&self) -> &[usize];

    fn num_players(&self) -> usize {
        self.strategy_counts().len()
    }

    /// Expected payoff of each pure strategy of `player` against the other
    /// players' strategies in `profile`. The player's own entry is ignored.
    fn expected_payoffs(&self, player: usize, profile: &MixedProfile) -> Result<Vec<Rational>>;
}

/// A game of any of the three classes.
// Games are built once and passed by reference; boxing buys nothing.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyGame {
    Normal(NormalFormGame),
    Polymatrix(PolymatrixGame),
    Bimatrix(BimatrixGame),
}

impl AnyGame {
    pub fn class_name(&self) -> &'static str {
        match self {
            AnyGame::Normal(_) => "normal",
            AnyGame::Polymatrix(_) => "polymatrix",
            AnyGame::Bimatrix(_) => "bimatrix",
        }
    }
}

impl Game for AnyGame {
    fn strategy_counts(&self) -> &[usize] {
        match self {
            AnyGame::Normal(g) => g.strategy_counts(),
            AnyGame::Polymatrix(g) => g.strategy_counts(),
            AnyGame::Bimatrix(g) => g.strategy_counts(),
        }
    }

    fn expected_payoffs(&self, player: usize, profile: &MixedProfile) -> Result<Vec<Rational>> {
        match self {
            AnyGame::Normal(g) => g.expected_payoffs(player, profile),
            AnyGame::Polymatrix(g) => g.expected_payoffs(player, profile),
            AnyGame::Bimatrix(g) => g.expected_payoffs(player, profile),
        }
    }
}

pub(crate) fn check_player(player: usize, count: usize) -> Result<()> {
    if player >= count {
        return Err(crate::error::Error::IndexOutOfRange {
            index: player,
            limit: count,
        });
    }
    Ok(())
}
