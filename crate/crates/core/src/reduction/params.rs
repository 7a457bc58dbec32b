//! Parameter chaining from the k-player accuracy down to the bimatrix one.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mult::{chain_size, Construction};
use crate::rational::{approx, display, format, int, text, Rational};

pub const DEFAULT_PLAYER_BUDGET: usize = 10_000_000;
pub const PLAYER_BUDGET_VAR: &str = "NASHREDUCE_PLAYER_BUDGET";

/// Player budget from `NASHREDUCE_PLAYER_BUDGET`, or the default.
pub fn player_budget() -> Result<usize> {
    match std::env::var(PLAYER_BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{PLAYER_BUDGET_VAR}={v:?} is not a player count"))),
        Err(_) => Ok(DEFAULT_PLAYER_BUDGET),
    }
}

/// Every quantity a reduction derived, in the order it was derived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ReductionParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<Construction>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "text::option")]
    pub eps_k: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(with = "text")]
    pub eps_m: Rational,
    /// Whether `eps_m` was capped at the construction's `eps0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_m_capped: Option<bool>,
    /// Square of the per-entry payoff distortion `n^(k-1) d k eps_m^c`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "text::option")]
    pub payoff_error_squared: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "N")]
    pub total_strategies: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "text::option")]
    pub eps_2: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "text::option")]
    pub alpha: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "text::option")]
    pub eps_2_normalized: Option<Rational>,
}

impl ReductionParams {
    /// The accuracy a profile of the final game must reach.
    pub fn target_eps(&self, normalized: bool) -> &Rational {
        let eps = if normalized {
            self.eps_2_normalized.as_ref()
        } else {
            self.eps_2.as_ref()
        };
        eps.unwrap_or(&self.eps_m)
    }

    /// The accuracy guaranteed for recovered profiles of the source game.
    pub fn source_eps(&self) -> &Rational {
        self.eps_k.as_ref().unwrap_or(&self.eps_m)
    }

    /// Human-readable ledger, one quantity per line.
    pub fn report(&self) -> String {
        let mut out = String::new();
        let mut line = |name: &str, value: String| {
            out.push_str(&format!("{name:<20} {value}\n"));
        };
        let show = |r: &Rational| format!("{} (~{:.6e})", display(r), approx(r));
        if let Some(c) = self.construction {
            line("construction", c.name().to_string());
        }
        if let Some(k) = self.k {
            line("k", k.to_string());
        }
        if let Some(n) = self.n {
            line("n", n.to_string());
        }
        if let Some(e) = &self.eps_k {
            line("eps_k", show(e));
        }
        let branch = match self.eps_m_capped {
            Some(true) => " [eps0 branch]",
            Some(false) => " [formula branch]",
            None => "",
        };
        line("eps_m", format!("{}{branch}", show(&self.eps_m)));
        if let Some(d) = &self.payoff_error_squared {
            line("payoff_error^2", show(d));
        }
        if let Some(m) = self.m {
            line("m", m.to_string());
        }
        if let Some(n) = self.total_strategies {
            line("N", n.to_string());
        }
        if let Some(e) = &self.eps_2 {
            line("eps_2", show(e));
        }
        if let Some(a) = &self.alpha {
            line("alpha", show(a));
        }
        if let Some(e) = &self.eps_2_normalized {
            line("eps_2 (normalized)", show(e));
        }
        out
    }
}

fn check_unit_open(name: &str, eps: &Rational) -> Result<()> {
    if *eps <= Rational::zero() || *eps >= Rational::one() {
        return Err(Error::param(format!("{name} must lie in (0, 1), got {}", format(eps))));
    }
    Ok(())
}

/// `min{(eps_k / (3 n^(k-1) d k))^(1/c), eps0}` and whether the cap applied.
pub fn linearization_eps(
    eps_k: &Rational,
    k: usize,
    n: usize,
    construction: Construction,
) -> Result<(Rational, bool)> {
    check_unit_open("eps_k", eps_k)?;
    if k < 2 {
        return Err(Error::param("linearization needs at least two players"));
    }
    let p = construction.params();
    let denom = int(3) * opponent_power(n, k)? * &p.d * int(k as i64);
    let base = eps_k / denom;
    // c is 1 or 1/2, so the 1/c power is the identity or a square.
    let raised = if p.c == int(1) { base } else { &base * &base };
    Ok(if raised > p.eps0 {
        (p.eps0, true)
    } else {
        (raised, false)
    })
}

/// `n^(k-1)` as a rational.
fn opponent_power(n: usize, k: usize) -> Result<Rational> {
    let n = i64::try_from(n).map_err(|_| Error::param("strategy count too large"))?;
    Ok((1..k).fold(int(1), |acc, _| acc * int(n)))
}

/// Square of `n^(k-1) d k eps_m^c`.
pub fn payoff_error_squared(
    eps_m: &Rational,
    k: usize,
    n: usize,
    construction: Construction,
) -> Result<Rational> {
    let p = construction.params();
    let coeff = opponent_power(n, k)? * &p.d * int(k as i64);
    Ok(match construction {
        Construction::UnaryPoly => {
            let e = coeff * eps_m;
            &e * &e
        }
        Construction::BinaryLog => &coeff * &coeff * eps_m,
    })
}

/// `eps_m / N`.
pub fn bimatrix_eps(eps_m: &Rational, total_strategies: usize) -> Result<Rational> {
    check_unit_open("eps_m", eps_m)?;
    if total_strategies == 0 {
        return Err(Error::param("the polymatrix game has no strategies"));
    }
    Ok(eps_m / int(total_strategies as i64))
}

/// `8 m^2 / eps_2`.
pub fn alpha(m: usize, eps_2: &Rational) -> Rational {
    let m = int(m as i64);
    int(8) * &m * &m / eps_2
}

/// Players of the linearized game: the originals, plus one multiplication
/// chain (or copy gadget, for two players) per mediator.
pub fn linearized_players(
    counts: &[usize],
    eps_m: &Rational,
    construction: Construction,
) -> Result<usize> {
    let k = counts.len();
    let per_mediator = if k == 2 {
        2
    } else {
        chain_size(k - 1, eps_m, construction)?
    };
    let mut total = k;
    for i in 0..k {
        let mediators = counts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .try_fold(1usize, |acc, (_, &n)| acc.checked_mul(n));
        total = mediators
            .and_then(|q| q.checked_mul(per_mediator))
            .and_then(|x| x.checked_add(total))
            .unwrap_or(usize::MAX);
    }
    Ok(total)
}

pub(crate) fn check_budget(estimate: usize, budget: usize) -> Result<()> {
    if estimate > budget {
        return Err(Error::BudgetExceeded {
            estimate: if estimate == usize::MAX {
                "more than usize::MAX".into()
            } else {
                estimate.to_string()
            },
            budget,
        });
    }
    Ok(())
}
