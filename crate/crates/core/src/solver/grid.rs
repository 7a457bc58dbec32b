//! Exhaustive enumeration of well-supported equilibria on a probability grid.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, Game};
use crate::profile::{MixedProfile, MixedStrategy};
use crate::rational::{format, int, Rational};
use crate::verify::{max_entry, verify_wsne_clamped};

pub const DEFAULT_GRID_CAP: u128 = 10_000_000;

/// Every mixed strategy over `n` actions whose probabilities are multiples
/// of `step`, in lexicographic order of the probability vectors, descending
/// (the first is pure on strategy 0).
pub fn simplex_grid(n: usize, step: &Rational) -> Result<Vec<MixedStrategy>> {
    let q = grid_denominator(step)?;
    let mut out = Vec::new();
    let mut parts = vec![0u64; n];
    compositions(q, 0, &mut parts, &mut |p| {
        out.push(MixedStrategy::new(p.iter().map(|&c| Rational::new(c.into(), q.into())).collect()));
    });
    out.into_iter().collect()
}

/// Number of points `simplex_grid(n, step)` would produce.
pub fn simplex_grid_size(n: usize, step: &Rational) -> Result<u128> {
    let q = grid_denominator(step)? as u128;
    if n == 0 {
        return Ok(0);
    }
    // C(q + n - 1, n - 1), computed incrementally so it stays exact.
    let mut c: u128 = 1;
    for i in 1..n as u128 {
        c = c
            .checked_mul(q + i)
            .map(|v| v / i)
            .ok_or_else(|| Error::param("grid size overflows"))?;
    }
    Ok(c)
}

fn grid_denominator(step: &Rational) -> Result<u64> {
    if *step <= Rational::zero() || *step > Rational::one() {
        return Err(Error::param(format!("grid step {} must lie in (0, 1]", format(step))));
    }
    let inv = step.recip();
    if !inv.is_integer() {
        return Err(Error::param(format!("grid step {} must be 1/q", format(step))));
    }
    u64::try_from(inv.to_integer()).map_err(|_| Error::param("grid step too fine"))
}

fn compositions(left: u64, pos: usize, parts: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if pos + 1 == parts.len() {
        parts[pos] = left;
        f(parts);
        return;
    }
    for c in (0..=left).rev() {
        parts[pos] = c;
        compositions(left - c, pos + 1, parts, f);
    }
}

/// What to enumerate: the grid step, which players skip the best-response
/// check, and which players are pinned to a given strategy (these are also
/// exempt from the check).
#[derive(Debug, Clone)]
pub struct GridConfig {
    pub eps: Rational,
    pub step: Rational,
    pub clamped: BTreeSet<usize>,
    pub fixed: BTreeMap<usize, MixedStrategy>,
    pub cap: u128,
}

impl GridConfig {
    pub fn new(eps: Rational, step: Rational) -> Self {
        GridConfig {
            eps,
            step,
            clamped: BTreeSet::new(),
            fixed: BTreeMap::new(),
            cap: DEFAULT_GRID_CAP,
        }
    }

    pub fn clamp(mut self, player: usize) -> Self {
        self.clamped.insert(player);
        self
    }

    pub fn fix(mut self, player: usize, strategy: MixedStrategy) -> Self {
        self.fixed.insert(player, strategy);
        self
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }
}

/// Lazily yields every grid profile the verifier accepts, in odometer order
/// (the last player varies fastest).
pub struct GridEnumeration<'g, G: Game + ?Sized> {
    game: &'g G,
    eps: Rational,
    exempt: BTreeSet<usize>,
    candidates: Vec<Vec<MixedStrategy>>,
    cursor: Option<Vec<usize>>,
}

pub fn grid_enumerate<'g, G: Game + ?Sized>(
    game: &'g G,
    config: &GridConfig,
) -> Result<GridEnumeration<'g, G>> {
    let counts = game.strategy_counts();
    let mut total: u128 = 1;
    let mut candidates = Vec::with_capacity(counts.len());
    for (p, &n) in counts.iter().enumerate() {
        let list = match config.fixed.get(&p) {
            Some(s) if s.len() == n => vec![s.clone()],
            Some(_) => return Err(Error::dims(format!("fixed strategy for player {p} has the wrong length"))),
            None => {
                let size = simplex_grid_size(n, &config.step)?;
                total = total.saturating_mul(size);
                if total > config.cap {
                    break;
                }
                simplex_grid(n, &config.step)?
            }
        };
        candidates.push(list);
    }
    if total > config.cap {
        return Err(Error::CapExceeded {
            size: format!("more than {}", config.cap),
            cap: config.cap.to_string(),
        });
    }
    let mut exempt = config.clamped.clone();
    exempt.extend(config.fixed.keys().copied());
    Ok(GridEnumeration {
        game,
        eps: config.eps.clone(),
        exempt,
        cursor: Some(vec![0; candidates.len()]),
        candidates,
    })
}

impl<G: Game + ?Sized> GridEnumeration<'_, G> {
    fn advance(&mut self) {
        let Some(cur) = self.cursor.as_mut() else {
            return;
        };
        for p in (0..cur.len()).rev() {
            cur[p] += 1;
            if cur[p] < self.candidates[p].len() {
                return;
            }
            cur[p] = 0;
        }
        self.cursor = None;
    }
}

impl<G: Game + ?Sized> Iterator for GridEnumeration<'_, G> {
    type Item = Result<MixedProfile>;

    fn next(&mut self) -> Option<Self::Item> {
        while let Some(cur) = self.cursor.clone() {
            self.advance();
            let profile = MixedProfile::new(
                cur.iter()
                    .enumerate()
                    .map(|(p, &k)| self.candidates[p][k].clone())
                    .collect(),
            );
            match verify_wsne_clamped(self.game, &profile, &self.eps, &self.exempt) {
                Ok(r) if r.passed() => return Some(Ok(profile)),
                Ok(_) => {}
                Err(e) => return Some(Err(e)),
            }
        }
        None
    }
}

/// Grid strategies of one player that share a support and a set of
/// eps-best responses for the opponent.
#[derive(Debug, Clone)]
pub struct GridClass {
    pub support: u64,
    /// Opponent strategies that are eps-best responses to every member.
    pub responses: u64,
    pub members: Vec<MixedStrategy>,
}

/// Grid ε-WSNE of a bimatrix game in factored form: a profile `(x, y)` is
/// an equilibrium iff `x`'s support lies in `y`'s responses and vice versa,
/// which only depends on the classes of `x` and `y`.
#[derive(Debug, Clone)]
pub struct BimatrixGrid {
    pub rows: Vec<GridClass>,
    pub cols: Vec<GridClass>,
    /// Compatible `(row class, column class)` pairs.
    pub pairs: Vec<(usize, usize)>,
}

impl BimatrixGrid {
    /// Total number of equilibrium profiles on the grid.
    pub fn count(&self) -> u128 {
        self.pairs
            .iter()
            .map(|&(r, c)| self.rows[r].members.len() as u128 * self.cols[c].members.len() as u128)
            .sum()
    }

    /// Every equilibrium profile, pair by pair.
    pub fn profiles(&self) -> impl Iterator<Item = MixedProfile> + '_ {
        self.pairs.iter().flat_map(move |&(r, c)| {
            self.rows[r].members.iter().flat_map(move |x| {
                self.cols[c]
                    .members
                    .iter()
                    .map(move |y| MixedProfile::new(vec![x.clone(), y.clone()]))
            })
        })
    }
}

/// Grid enumeration specialised to bimatrix games. The cap bounds the
/// number of grid strategies per player rather than profiles.
pub fn bimatrix_grid(game: &BimatrixGame, eps: &Rational, step: &Rational, cap: u128) -> Result<BimatrixGrid> {
    let (rows, cols) = (game.a().rows(), game.a().cols());
    if rows.max(cols) > 64 {
        return Err(Error::CapExceeded {
            size: format!("{rows}x{cols}"),
            cap: "64 strategies".into(),
        });
    }
    for n in [rows, cols] {
        let size = simplex_grid_size(n, step)?;
        if size > cap {
            return Err(Error::CapExceeded {
                size: size.to_string(),
                cap: cap.to_string(),
            });
        }
    }
    // Row player's strategies x: the column player's payoffs are B^T x.
    let row_classes = classify(simplex_grid(rows, step)?, eps, |x| {
        game.b().mul_vec_transposed(x.probs())
    })?;
    let col_classes = classify(simplex_grid(cols, step)?, eps, |y| game.a().mul_vec(y.probs()))?;
    let mut pairs = Vec::new();
    for (ri, r) in row_classes.iter().enumerate() {
        for (ci, c) in col_classes.iter().enumerate() {
            if r.support & !c.responses == 0 && c.support & !r.responses == 0 {
                pairs.push((ri, ci));
            }
        }
    }
    Ok(BimatrixGrid {
        rows: row_classes,
        cols: col_classes,
        pairs,
    })
}

fn classify(
    points: Vec<MixedStrategy>,
    eps: &Rational,
    opponent_payoffs: impl Fn(&MixedStrategy) -> Result<Vec<Rational>>,
) -> Result<Vec<GridClass>> {
    let mut classes: BTreeMap<(u64, u64), Vec<MixedStrategy>> = BTreeMap::new();
    for s in points {
        let support = mask(s.probs().iter().map(|p| !p.is_zero()));
        let u = opponent_payoffs(&s)?;
        let floor = max_entry(&u) - eps;
        let responses = mask(u.iter().map(|v| *v >= floor));
        classes.entry((support, responses)).or_default().push(s);
    }
    Ok(classes
        .into_iter()
        .map(|((support, responses), members)| GridClass {
            support,
            responses,
            members,
        })
        .collect())
}

fn mask(bits: impl Iterator<Item = bool>) -> u64 {
    bits.enumerate()
        .fold(0, |acc, (i, b)| if b { acc | (1 << i) } else { acc })
}

/// Total probability of each block of a strategy.
pub fn block_masses(strategy: &MixedStrategy, blocks: &[usize]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(blocks.len());
    let mut start = 0;
    for &n in blocks {
        out.push(
            strategy.probs()[start..start + n]
                .iter()
                .fold(int(0), |acc, p| acc + p),
        );
        start += n;
    }
    out
}
