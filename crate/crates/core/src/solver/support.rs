//! Support enumeration for bimatrix games with exact rational arithmetic.

use num_traits::{One, Zero};

use super::lp::{feasible_point, probably_feasible, Constraint};
use super::{Certificate, SolverResult};
use crate::error::{Error, Result};
use crate::game::BimatrixGame;
use crate::matrix::Matrix;
use crate::profile::{MixedProfile, MixedStrategy};
use crate::rational::{int, Rational};
use crate::verify::verify_wsne;

pub const DEFAULT_SUPPORT_CAP: usize = 12;

/// First exact Nash equilibrium in support order: by total support size,
/// then row support size, then lexicographically (rows before columns).
///
/// Each support pair is decided by two feasibility LPs, so degenerate games
/// need no special treatment; the LP returns a vertex of the equilibrium
/// polytope for that support pair. Pairs are screened in floating point
/// before the exact solve; a pair the screen wrongly rejects can only move
/// the answer later in the order, never make it inexact.
pub fn support_enumeration(game: &BimatrixGame) -> Result<SolverResult> {
    support_enumeration_with_cap(game, DEFAULT_SUPPORT_CAP)
}

pub fn support_enumeration_with_cap(game: &BimatrixGame, cap: usize) -> Result<SolverResult> {
    let (rows, cols) = (game.a().rows(), game.a().cols());
    if rows.max(cols) > cap {
        return Err(Error::CapExceeded {
            size: format!("{rows}x{cols}"),
            cap: cap.to_string(),
        });
    }
    let a = game.a().to_dense();
    // Column player's payoffs with the roles of rows and columns swapped.
    let bt = transpose(&game.b().to_dense());
    // Screen support pairs in floating point first; if rounding hid every
    // equilibrium, search again exactly.
    for screened in [true, false] {
        if let Some(profile) = search(&a, &bt, screened)? {
            if !verify_wsne(game, &profile, &Rational::zero())?.passed() {
                return Err(Error::NoEquilibriumFound(
                    "support enumeration produced a profile that is not a Nash equilibrium".into(),
                ));
            }
            return Ok(SolverResult {
                profile,
                certificate: Certificate::ExactNash,
                method: "support-enum",
            });
        }
    }
    Err(Error::NoEquilibriumFound(format!(
        "no support pair of the {rows}x{cols} game admits an equilibrium"
    )))
}

fn search(a: &Matrix, bt: &Matrix, screened: bool) -> Result<Option<MixedProfile>> {
    let (rows, cols) = (a.rows(), a.cols());
    for total in 2..=rows + cols {
        for size_i in total.saturating_sub(cols).max(1)..=rows.min(total - 1) {
            let size_j = total - size_i;
            for i_set in combinations(rows, size_i) {
                for j_set in combinations(cols, size_j) {
                    let ys = indifference_system(a, &i_set, &j_set);
                    let xs = indifference_system(bt, &j_set, &i_set);
                    if screened && !(probably_feasible(ys.0, &ys.1) && probably_feasible(xs.0, &xs.1)) {
                        continue;
                    }
                    let Some(y) = feasible_point(ys.0, &ys.1) else {
                        continue;
                    };
                    let Some(x) = feasible_point(xs.0, &xs.1) else {
                        continue;
                    };
                    let x = spread(&x, &i_set, rows);
                    let y = spread(&y, &j_set, cols);
                    return Ok(Some(MixedProfile::new(vec![MixedStrategy::new(x)?, MixedStrategy::new(y)?])));
                }
            }
        }
    }
    Ok(None)
}

fn spread(weights: &[Rational], own: &[usize], n: usize) -> Vec<Rational> {
    let mut full = vec![Rational::zero(); n];
    for (k, &c) in own.iter().enumerate() {
        full[c] = weights[k].clone();
    }
    full
}

/// Constraints on a mixed strategy over `own` (the columns of `payoff`)
/// making every row in `best` optimal against it, among all rows. The
/// variables are the weights on `own`, then `v+` and `v-` for the optimum.
fn indifference_system(payoff: &Matrix, best: &[usize], own: &[usize]) -> (usize, Vec<Constraint>) {
    let vars = own.len() + 2;
    let mut cs = Vec::with_capacity(payoff.rows() + 1);
    let mut sum = vec![Rational::one(); own.len()];
    sum.extend([Rational::zero(), Rational::zero()]);
    cs.push(Constraint::eq(sum, Rational::one()));
    for r in 0..payoff.rows() {
        let mut coeffs: Vec<Rational> = own.iter().map(|&c| payoff.get(r, c).clone()).collect();
        coeffs.extend([int(-1), int(1)]);
        if best.contains(&r) {
            cs.push(Constraint::eq(coeffs, Rational::zero()));
        } else {
            cs.push(Constraint::le(coeffs, Rational::zero()));
        }
    }
    (vars, cs)
}

fn transpose(m: &Matrix) -> Matrix {
    let mut t = Matrix::zeros(m.cols(), m.rows());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            t.set(c, r, m.get(r, c).clone());
        }
    }
    t
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}
