//! Seedable generators for random games and profiles with small-denominator
//! rational payoffs.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::Result;
use crate::game::{BimatrixGame, NormalFormGame, PlayerRole, PolymatrixGame};
use crate::matrix::{Matrix, SparseMatrix};
use crate::profile::{MixedProfile, MixedStrategy};
use crate::rational::{ratio, Rational};

/// Uniform on `{0, 1/den, ..., 1}`.
pub fn unit_rational<R: Rng + ?Sized>(rng: &mut R, den: i64) -> Rational {
    ratio(rng.gen_range(0..=den), den)
}

fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, den: i64) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, unit_rational(rng, den));
        }
    }
    m
}

pub fn normal_game<R: Rng + ?Sized>(rng: &mut R, counts: &[usize], den: i64) -> Result<NormalFormGame> {
    let payoffs = (0..counts.len())
        .map(|i| {
            let cols = counts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &n)| n)
                .product();
            matrix(rng, counts[i], cols, den)
        })
        .collect();
    NormalFormGame::new(counts.to_vec(), payoffs)
}

/// Every ordered pair of players gets a random edge with entries in `[0, 1]`.
pub fn polymatrix_game<R: Rng + ?Sized>(rng: &mut R, counts: &[usize], den: i64) -> Result<PolymatrixGame> {
    let mut edges = BTreeMap::new();
    for i in 0..counts.len() {
        for j in 0..counts.len() {
            if i != j {
                edges.insert((i, j), matrix(rng, counts[i], counts[j], den));
            }
        }
    }
    PolymatrixGame::new(counts.to_vec(), edges, vec![PlayerRole::plain(); counts.len()])
}

pub fn bimatrix_game<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, den: i64) -> Result<BimatrixGame> {
    BimatrixGame::new(
        SparseMatrix::from_dense(&matrix(rng, rows, cols, den)),
        SparseMatrix::from_dense(&matrix(rng, rows, cols, den)),
    )
}

/// Payoffs uniform on `[0, 1/2]` except 1 for every player at `nash`, which
/// is therefore a strict pure equilibrium.
pub fn pure_nash_game<R: Rng + ?Sized>(
    rng: &mut R,
    counts: &[usize],
    nash: &[usize],
    den: i64,
) -> Result<NormalFormGame> {
    let table: Vec<Vec<Rational>> = (0..counts.len())
        .map(|_| {
            (0..counts.iter().product::<usize>())
                .map(|_| ratio(rng.gen_range(0..=den), 2 * den))
                .collect()
        })
        .collect();
    NormalFormGame::from_fn(counts.to_vec(), |i, s| {
        if s == nash {
            ratio(1, 1)
        } else {
            table[i][crate::profile::linear_index(counts, s)].clone()
        }
    })
}

/// Random mixed strategy with probabilities that are multiples of `1/den`.
pub fn strategy<R: Rng + ?Sized>(rng: &mut R, n: usize, den: i64) -> Result<MixedStrategy> {
    let mut cuts: Vec<i64> = (0..n.saturating_sub(1)).map(|_| rng.gen_range(0..=den)).collect();
    cuts.sort_unstable();
    let mut probs = Vec::with_capacity(n);
    let mut prev = 0;
    for c in cuts.into_iter().chain([den]) {
        probs.push(ratio(c - prev, den));
        prev = c;
    }
    MixedStrategy::new(probs)
}

pub fn profile<R: Rng + ?Sized>(rng: &mut R, counts: &[usize], den: i64) -> Result<MixedProfile> {
    Ok(MixedProfile::new(
        counts.iter().map(|&n| strategy(rng, n, den)).collect::<Result<_>>()?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Game;
    use crate::rational::int;
    use rand::SeedableRng;

    #[test]
    fn pure_nash_is_strict() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let g = pure_nash_game(&mut rng, &[2, 2, 2], &[1, 0, 1], 10).unwrap();
        for i in 0..3 {
            assert_eq!(g.payoff(i, &[1, 0, 1]), &int(1));
            let mut dev = vec![1, 0, 1];
            dev[i] = 1 - dev[i];
            assert!(*g.payoff(i, &dev) <= ratio(1, 2));
        }
    }

    #[test]
    fn generators_are_seeded() {
        let make = || {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
            (
                normal_game(&mut rng, &[2, 3], 7).unwrap(),
                polymatrix_game(&mut rng, &[2, 2, 2], 5).unwrap(),
                profile(&mut rng, &[3, 4], 12).unwrap(),
            )
        };
        assert_eq!(make(), make());
        let (_, poly, p) = make();
        assert_eq!(poly.num_players(), 3);
        assert_eq!(p.strategy(1).len(), 4);
    }
}
