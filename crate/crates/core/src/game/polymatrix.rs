use std::collections::BTreeMap;

use num_traits::Zero;

use super::{check_player, Game};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::profile::MixedProfile;
use crate::rational::{format, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Original,
    Mediator,
    GadgetAux,
    Plain,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Original => "original",
            Role::Mediator => "mediator",
            Role::GadgetAux => "gadget",
            Role::Plain => "plain",
        }
    }

    pub fn parse(s: &str) -> Result<Role> {
        Ok(match s {
            "original" => Role::Original,
            "mediator" => Role::Mediator,
            "gadget" => Role::GadgetAux,
            "plain" => Role::Plain,
            other => return Err(Error::Parse(format!("unknown role {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlayerRole {
    pub role: Role,
    pub provenance: Option<String>,
}

impl PlayerRole {
    pub fn plain() -> Self {
        PlayerRole {
            role: Role::Plain,
            provenance: None,
        }
    }

    pub fn new(role: Role, provenance: impl Into<String>) -> Self {
        PlayerRole {
            role,
            provenance: Some(provenance.into()),
        }
    }
}

/// Polymatrix game: each player's payoff is the sum of bilateral games.
///
/// `edges[(i, j)]` is player `i`'s payoff matrix against player `j`
/// (`n_i x n_j`). All-zero matrices are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolymatrixGame {
    counts: Vec<usize>,
    edges: BTreeMap<(usize, usize), Matrix>,
    roles: Vec<PlayerRole>,
}

impl PolymatrixGame {
    pub fn payoff_low() -> Rational {
        int(-1)
    }

    pub fn payoff_high() -> Rational {
        int(2)
    }

    pub fn new(
        counts: Vec<usize>,
        edges: BTreeMap<(usize, usize), Matrix>,
        roles: Vec<PlayerRole>,
    ) -> Result<Self> {
        if roles.len() != counts.len() {
            return Err(Error::dims(format!(
                "{} roles for {} players",
                roles.len(),
                counts.len()
            )));
        }
        if let Some(i) = counts.iter().position(|&n| n < 2) {
            return Err(Error::dims(format!(
                "polymatrix player {i} has {} strategies; at least 2 required",
                counts[i]
            )));
        }
        let (low, high) = (Self::payoff_low(), Self::payoff_high());
        let mut kept = BTreeMap::new();
        for ((i, j), m) in edges {
            if i == j {
                return Err(Error::dims(format!("self-edge on player {i}")));
            }
            check_player(i, counts.len())?;
            check_player(j, counts.len())?;
            if m.rows() != counts[i] || m.cols() != counts[j] {
                return Err(Error::dims(format!(
                    "edge ({i}, {j}) is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    counts[i],
                    counts[j]
                )));
            }
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    let v = m.get(r, c);
                    if *v < low || *v > high {
                        return Err(Error::PayoffOutOfRange {
                            value: format(v),
                            location: format!("edge ({i}, {j}) [{r}, {c}]"),
                            low: format(&low),
                            high: format(&high),
                        });
                    }
                }
            }
            if !m.is_zero() {
                kept.insert((i, j), m);
            }
        }
        Ok(PolymatrixGame {
            counts,
            edges: kept,
            roles,
        })
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.edges
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<&Matrix> {
        self.edges.get(&(i, j))
    }

    /// Players whose strategies enter `player`'s payoff, with the matrices.
    pub fn out_edges(&self, player: usize) -> impl Iterator<Item = (usize, &Matrix)> {
        self.edges
            .range((player, 0)..(player + 1, 0))
            .map(|(&(_, j), m)| (j, m))
    }

    pub fn roles(&self) -> &[PlayerRole] {
        &self.roles
    }

    pub fn role(&self, player: usize) -> &PlayerRole {
        &self.roles[player]
    }

    pub fn total_strategies(&self) -> usize {
        self.counts.iter().sum()
    }
}

impl Game for PolymatrixGame {
    fn strategy_counts(&self) -> &[usize] {
        &self.counts
    }

    fn expected_payoffs(&self, player: usize, profile: &MixedProfile) -> Result<Vec<Rational>> {
        check_player(player, self.counts.len())?;
        profile.check_shape(&self.counts)?;
        let mut out = vec![Rational::zero(); self.counts[player]];
        for (j, m) in self.out_edges(player) {
            m.mul_vec_into(profile.strategy(j).probs(), &mut out);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::MixedStrategy;
    use crate::rational::ratio;

    fn m2(a: [[i64; 2]; 2]) -> Matrix {
        Matrix::from_rows(a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn threshold_style_payoffs() {
        let zeta = ratio(1, 2);
        let mut edges = BTreeMap::new();
        edges.insert(
            (1, 0),
            Matrix::from_rows(vec![vec![zeta.clone(), zeta.clone()], vec![int(0), int(1)]]).unwrap(),
        );
        let g = PolymatrixGame::new(vec![2, 2], edges, vec![PlayerRole::plain(); 2]).unwrap();
        let p1 = ratio(7, 10);
        let profile = MixedProfile::new(vec![
            MixedStrategy::binary(p1.clone()).unwrap(),
            MixedStrategy::uniform(2),
        ]);
        assert_eq!(g.expected_payoffs(1, &profile).unwrap(), vec![zeta, p1]);
        assert_eq!(g.expected_payoffs(0, &profile).unwrap(), vec![int(0), int(0)]);
    }

    #[test]
    fn validation() {
        let mut edges = BTreeMap::new();
        edges.insert((0, 0), m2([[1, 0], [0, 1]]));
        assert!(PolymatrixGame::new(vec![2], edges, vec![PlayerRole::plain()]).is_err());

        let mut edges = BTreeMap::new();
        edges.insert((0, 1), m2([[3, 0], [0, 1]]));
        assert!(matches!(
            PolymatrixGame::new(vec![2, 2], edges, vec![PlayerRole::plain(); 2]),
            Err(Error::PayoffOutOfRange { .. })
        ));

        assert!(PolymatrixGame::new(vec![1, 2], BTreeMap::new(), vec![PlayerRole::plain(); 2]).is_err());

        let mut edges = BTreeMap::new();
        edges.insert((0, 1), m2([[0, 0], [0, 0]]));
        let g = PolymatrixGame::new(vec![2, 2], edges, vec![PlayerRole::plain(); 2]).unwrap();
        assert!(g.edges().is_empty());
    }
}
