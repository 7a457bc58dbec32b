//! Deterministic fixtures shared by the benchmarks.

use nashreduce_core::rational::ratio;
use nashreduce_core::{random, BimatrixGame, NormalFormGame, PolymatrixGame, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DEN: i64 = 10;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random normal-form game with the given strategy counts.
pub fn normal(counts: &[usize], seed: u64) -> NormalFormGame {
    random::normal_game(&mut rng(seed), counts, DEN).expect("valid counts")
}

/// Random complete-graph polymatrix game.
pub fn polymatrix(counts: &[usize], seed: u64) -> PolymatrixGame {
    random::polymatrix_game(&mut rng(seed), counts, DEN).expect("valid counts")
}

/// Random `n x n` bimatrix game.
pub fn bimatrix(n: usize, seed: u64) -> BimatrixGame {
    random::bimatrix_game(&mut rng(seed), n, n, DEN).expect("valid size")
}

/// Target accuracy for the reduction benchmarks.
pub fn coarse_eps() -> Rational {
    ratio(1, 10)
}
