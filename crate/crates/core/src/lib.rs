//! Exact reductions from k-player normal-form games to bimatrix games via
//! polymatrix games, built from gadget sub-games, with recovery of
//! approximate equilibria and the oracles needed to check every step.

pub mod error;
pub mod game;
pub mod gadget;
pub mod io;
pub mod matrix;
pub mod mult;
pub mod profile;
pub mod random;
pub mod rational;
pub mod reduction;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use game::{AnyGame, BimatrixGame, Game, NormalFormGame, PlayerRole, PolymatrixGame, Role};
pub use matrix::{Matrix, SparseMatrix};
pub use mult::{Construction, MultParams};
pub use profile::{MixedProfile, MixedStrategy};
pub use rational::Rational;
pub use reduction::{
    bimatrixify, linearize, recover_from_bimatrix, recover_from_polymatrix, recover_full,
    reduce_full, GameMapping, ReductionParams,
};
pub use solver::{Certificate, SolverResult};
pub use verify::{verify_wsne, verify_wsne_clamped, VerificationReport};
