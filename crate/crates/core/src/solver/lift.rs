//! Turning a polymatrix profile into a candidate bimatrix profile.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::BimatrixGame;
use crate::profile::{MixedProfile, MixedStrategy};
use crate::rational::{int, Rational};
use crate::verify::max_entry;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftMode {
    /// `y` puts mass `1/m` on each block and `x = y`.
    Uniform,
    /// Block masses are nudged so the leader's best payoff is the same in
    /// every block, and `x` is uniform over the support of `y`.
    Balanced,
}

/// Candidate `(x, y)` for a polymatrix profile. This is a witness generator,
/// not a proof: the caller must verify the result.
pub fn lift_to_bimatrix(
    game: &BimatrixGame,
    profile: &MixedProfile,
    mode: LiftMode,
) -> Result<MixedProfile> {
    let blocks = game
        .blocks()
        .ok_or_else(|| Error::MappingMismatch("the bimatrix game has no block structure".into()))?;
    profile.check_shape(blocks)?;
    let m = blocks.len();
    let uniform_mass = Rational::one() / int(m as i64);
    let weighted = |masses: &[Rational]| -> Vec<Rational> {
        profile
            .strategies()
            .iter()
            .zip(masses)
            .flat_map(|(s, w)| s.probs().iter().map(move |p| p * w))
            .collect()
    };
    let y0 = weighted(&vec![uniform_mass.clone(); m]);
    let y = match mode {
        LiftMode::Uniform => {
            let s = MixedStrategy::new(y0)?;
            return Ok(MixedProfile::new(vec![s.clone(), s]));
        }
        LiftMode::Balanced => {
            let alpha = game
                .alpha()
                .ok_or_else(|| Error::MappingMismatch("the bimatrix game has no alpha".into()))?;
            let payoff = game.a().mul_vec(&y0)?;
            let mut best = Vec::with_capacity(m);
            let mut start = 0;
            for &n in blocks {
                best.push(max_entry(&payoff[start..start + n]));
                start += n;
            }
            let mean = best.iter().fold(Rational::zero(), |acc, b| acc + b) / int(m as i64);
            // Raising block i's mass by d lowers its rows by alpha * d.
            let masses: Vec<Rational> = best.iter().map(|b| &uniform_mass + (b - &mean) / alpha).collect();
            if let Some(i) = masses.iter().position(|w| *w <= Rational::zero()) {
                return Err(Error::param(format!("balancing leaves block {i} without mass")));
            }
            weighted(&masses)
        }
    };
    let support: Vec<usize> = (0..y.len()).filter(|&j| !y[j].is_zero()).collect();
    let share = Rational::one() / int(support.len() as i64);
    let mut x = vec![Rational::zero(); y.len()];
    for &j in &support {
        x[j] = share.clone();
    }
    Ok(MixedProfile::new(vec![MixedStrategy::new(x)?, MixedStrategy::new(y)?]))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::game::{PlayerRole, PolymatrixGame};
    use crate::matrix::Matrix;
    use crate::rational::ratio;
    use crate::reduction::bimatrixify;
    use crate::verify::verify_wsne;

    fn coordination() -> PolymatrixGame {
        let mut edges = BTreeMap::new();
        edges.insert((0, 1), Matrix::identity(2));
        edges.insert((1, 0), Matrix::from_rows(vec![vec![ratio(1, 2), int(0)], vec![int(0), int(1)]]).unwrap());
        PolymatrixGame::new(vec![2, 2], edges, vec![PlayerRole::plain(); 2]).unwrap()
    }

    #[test]
    fn uniform_profile_lifts_uniformly() {
        let r = bimatrixify(&coordination(), &ratio(1, 2)).unwrap();
        let p = MixedProfile::new(vec![MixedStrategy::uniform(2), MixedStrategy::uniform(2)]);
        let lifted = lift_to_bimatrix(&r.game, &p, LiftMode::Uniform).unwrap();
        assert_eq!(lifted.strategy(1).probs(), vec![ratio(1, 4); 4].as_slice());
        assert_eq!(lifted.strategy(0), lifted.strategy(1));
    }

    #[test]
    fn pure_blocks_get_equal_mass() {
        let r = bimatrixify(&coordination(), &ratio(1, 2)).unwrap();
        let p = MixedProfile::pure(&[2, 2], &[1, 1]);
        let lifted = lift_to_bimatrix(&r.game, &p, LiftMode::Uniform).unwrap();
        assert_eq!(lifted.strategy(1).probs(), &[int(0), ratio(1, 2), int(0), ratio(1, 2)]);
    }

    #[test]
    fn balanced_lift_of_exact_equilibrium_verifies() {
        let g = coordination();
        let r = bimatrixify(&g, &ratio(1, 2)).unwrap();
        let p = MixedProfile::pure(&[2, 2], &[0, 0]);
        assert!(verify_wsne(&g, &p, &int(0)).unwrap().passed());
        let lifted = lift_to_bimatrix(&r.game, &p, LiftMode::Balanced).unwrap();
        let eps_2 = r.params.eps_2.clone().unwrap();
        assert!(verify_wsne(&r.game, &lifted, &eps_2).unwrap().passed());
        // The uniform witness fails here: the blocks' best payoffs differ.
        let naive = lift_to_bimatrix(&r.game, &p, LiftMode::Uniform).unwrap();
        assert!(!verify_wsne(&r.game, &naive, &eps_2).unwrap().passed());
    }
}
