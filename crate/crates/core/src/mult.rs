//! Linear multiplication gadgets: the unary (polynomial size) and binary
//! (logarithmic size) constructions, and chains of them for m-way products.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadget::{
    build_and, build_assign, build_bit_extract, build_mask, build_max, build_median, build_minus,
    build_scale, build_scaled_sum, build_threshold_unclamped, far_from_grid, GadgetCircuit,
    GadgetKind, Wire,
};
use crate::rational::{ceil_to_u64, int, pow2_neg, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Unary encoding: size O(1/ε²), error 19ε.
    UnaryPoly,
    /// Bit extraction with median-of-three: size O(log 1/ε), error 3√ε.
    BinaryLog,
}

/// `(eps0, c, d)` such that an m-input chain at `eps` is accurate to
/// `d * m * eps^c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultParams {
    pub construction: Construction,
    pub eps0: Rational,
    pub c: Rational,
    pub d: Rational,
    pub size: &'static str,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::UnaryPoly => "unary",
            Construction::BinaryLog => "log",
        }
    }

    pub fn parse(s: &str) -> Result<Construction> {
        match s {
            "unary" | "unary-poly" => Ok(Construction::UnaryPoly),
            "log" | "binary-log" => Ok(Construction::BinaryLog),
            other => Err(Error::Parse(format!("unknown construction {other:?}"))),
        }
    }

    pub fn params(self) -> MultParams {
        match self {
            Construction::UnaryPoly => MultParams {
                construction: self,
                eps0: ratio(1, 4),
                c: int(1),
                d: int(19),
                size: "x^2",
            },
            Construction::BinaryLog => MultParams {
                construction: self,
                eps0: ratio(1, 100_000),
                c: ratio(1, 2),
                d: int(3),
                size: "log x",
            },
        }
    }

    /// Whether a two-input gadget of this construction can be built at `eps`.
    pub fn check_eps(self, eps: &Rational) -> Result<()> {
        if *eps <= Rational::zero() {
            return Err(Error::param("eps must be positive"));
        }
        let eps0 = self.params().eps0;
        let ok = match self {
            Construction::UnaryPoly => *eps < eps0,
            Construction::BinaryLog => *eps <= eps0,
        };
        if !ok {
            return Err(Error::param(format!(
                "{} multiplication needs eps {} {}",
                self.name(),
                if self == Construction::UnaryPoly { "<" } else { "<=" },
                crate::rational::format(&eps0)
            )));
        }
        Ok(())
    }

    /// Players added by one two-input gadget at `eps`.
    pub fn size(self, eps: &Rational) -> Result<usize> {
        match self {
            Construction::UnaryPoly => unary_size(eps),
            Construction::BinaryLog => Ok(robust_size(beta_for(eps)?)),
        }
    }
}

pub fn unary_tau(eps: &Rational) -> Rational {
    int(3) * eps
}

/// Number of unary cells per input, `ceil(1/tau)`.
pub fn unary_cells(eps: &Rational) -> Result<usize> {
    if *eps <= Rational::zero() {
        return Err(Error::param("eps must be positive"));
    }
    ceil_to_u64(&unary_tau(eps).recip())
        .and_then(|k| usize::try_from(k).ok())
        .ok_or_else(|| Error::param("eps too small"))
}

/// `K^2` AND cells, `2K` thresholds and the final scaled sum (2 players).
pub fn unary_size(eps: &Rational) -> Result<usize> {
    let k = unary_cells(eps)?;
    k.checked_mul(k)
        .and_then(|kk| kk.checked_add(2 * k + 2))
        .ok_or_else(|| Error::param("unary gadget too large"))
}

/// Player handles of a unary multiplier, exposed for inspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryLayout {
    pub v1: Vec<Wire>,
    pub v2: Vec<Wire>,
    /// `u[i][j] = AND(v1[i], v2[j])`.
    pub u: Vec<Vec<Wire>>,
    pub output: Wire,
}

pub fn build_mult_unary_layout(
    c: &mut GadgetCircuit,
    a: Wire,
    b: Wire,
    eps: &Rational,
) -> Result<UnaryLayout> {
    Construction::UnaryPoly.check_eps(eps)?;
    let tau = unary_tau(eps);
    let k = unary_cells(eps)?;
    let id = c.begin(GadgetKind::MultUnary(eps.clone()), vec![a, b]);
    // The last threshold exceeds 1 when 1/tau is not an integer.
    let encode = |c: &mut GadgetCircuit, x: Wire| -> Result<Vec<Wire>> {
        (1..=k)
            .map(|i| build_threshold_unclamped(c, x, int(i as i64) * &tau))
            .collect()
    };
    let v1 = encode(c, a)?;
    let v2 = encode(c, b)?;
    let mut u = Vec::with_capacity(k);
    for &x in &v1 {
        u.push(
            v2.iter()
                .map(|&y| build_and(c, x, y))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let cells: Vec<Wire> = u.iter().flatten().copied().collect();
    let output = build_scaled_sum(c, &cells, &tau * &tau)?;
    c.finish(id, vec![output.player]);
    Ok(UnaryLayout { v1, v2, u, output })
}

pub fn build_mult_unary(c: &mut GadgetCircuit, a: Wire, b: Wire, eps: &Rational) -> Result<Wire> {
    Ok(build_mult_unary_layout(c, a, b, eps)?.output)
}

/// Bit depth `beta`: the smallest integer with `4^beta * eps >= 1`, i.e.
/// `ceil(log2(1/eps) / 2)`.
pub fn beta_for(eps: &Rational) -> Result<u32> {
    if *eps <= Rational::zero() || *eps > Rational::one() {
        return Err(Error::param("eps must lie in (0, 1]"));
    }
    let mut beta = 0u32;
    let mut scaled = eps.clone();
    while scaled < Rational::one() {
        beta += 1;
        scaled *= int(4);
        if beta > 200 {
            return Err(Error::param("eps too small"));
        }
    }
    Ok(beta.max(1))
}

/// Distance from multiples of `2^-beta` within which the brittle gadget
/// promises nothing: `3 beta eps`.
pub fn brittle_margin(eps: &Rational) -> Result<Rational> {
    Ok(int(3 * i64::from(beta_for(eps)?)) * eps)
}

/// True when `x` is within the brittle margin of a multiple of `2^-beta`.
pub fn in_brittle_zone(x: &Rational, eps: &Rational) -> Result<bool> {
    Ok(!far_from_grid(x, beta_for(eps)?, &brittle_margin(eps)?))
}

pub fn bit_extract_size(beta: u32) -> usize {
    5 * beta as usize - 2
}

/// Bit extraction plus `beta` scales, `beta` masks and the final sum.
pub fn brittle_size(beta: u32) -> usize {
    9 * beta as usize
}

/// Three brittle multipliers, three assignments, two subtractions, one max
/// and one median.
pub fn robust_size(beta: u32) -> usize {
    3 * brittle_size(beta) + 3 * 2 + 2 * 2 + 7 + 40
}

pub fn build_mult_brittle(c: &mut GadgetCircuit, a: Wire, b: Wire, eps: &Rational) -> Result<Wire> {
    if *eps <= Rational::zero() || *eps > ratio(1, 1000) {
        return Err(Error::param("brittle multiplication needs 0 < eps <= 1/1000"));
    }
    let beta = beta_for(eps)?;
    if int(6 * i64::from(beta)) * eps >= pow2_neg(beta) {
        return Err(Error::param(format!(
            "6 beta eps >= 2^-beta for beta = {beta}; no input is far from the grid"
        )));
    }
    let id = c.begin(GadgetKind::MultBrittle(eps.clone()), vec![a, b]);
    let bits = build_bit_extract(c, a, beta)?;
    let mut terms = Vec::with_capacity(bits.len());
    for (i, &bit) in bits.iter().enumerate() {
        let scaled = build_scale(c, b, pow2_neg(i as u32 + 1))?;
        terms.push(build_mask(c, bit, scaled)?);
    }
    let p = build_scaled_sum(c, &terms, Rational::one())?;
    c.finish(id, vec![p.player]);
    Ok(p)
}

/// Spacing between the three perturbed copies of the first input.
pub fn robust_delta(eps: &Rational) -> Result<Rational> {
    Ok(int(7 * i64::from(beta_for(eps)?)) * eps)
}

pub fn build_mult_robust(c: &mut GadgetCircuit, a: Wire, b: Wire, eps: &Rational) -> Result<Wire> {
    Construction::BinaryLog.check_eps(eps)?;
    build_mult_robust_unchecked(c, a, b, eps)
}

/// The robust construction without the `eps <= 1e-5` requirement. The
/// product guarantee is only promised under that requirement; this exists
/// for size studies at coarser `eps`.
pub fn build_mult_robust_unchecked(
    c: &mut GadgetCircuit,
    a: Wire,
    b: Wire,
    eps: &Rational,
) -> Result<Wire> {
    let delta = robust_delta(eps)?;
    let floor = int(2) * &delta + int(7) * eps;
    if floor > Rational::one() {
        return Err(Error::param("2 delta + 7 eps exceeds 1; eps too large"));
    }
    let id = c.begin(GadgetKind::MultRobust(eps.clone()), vec![a, b]);
    let c1 = build_assign(c, floor)?;
    let lifted = build_max(c, a, c1)?;
    let c2 = build_assign(c, delta.clone())?;
    let c3 = build_assign(c, int(2) * &delta)?;
    let d1 = build_minus(c, c2, lifted)?;
    let d2 = build_minus(c, c3, lifted)?;
    let w1 = build_mult_brittle(c, lifted, b, eps)?;
    let w2 = build_mult_brittle(c, d1, b, eps)?;
    let w3 = build_mult_brittle(c, d2, b, eps)?;
    let p = build_median(c, w1, w2, w3)?;
    c.finish(id, vec![p.player]);
    Ok(p)
}

pub fn build_mult(
    c: &mut GadgetCircuit,
    a: Wire,
    b: Wire,
    eps: &Rational,
    construction: Construction,
) -> Result<Wire> {
    match construction {
        Construction::UnaryPoly => build_mult_unary(c, a, b, eps),
        Construction::BinaryLog => build_mult_robust(c, a, b, eps),
    }
}

/// Product of all inputs, multiplied left to right. One input is passed
/// through unchanged (no players are added).
pub fn build_mult_chain(
    c: &mut GadgetCircuit,
    inputs: &[Wire],
    eps: &Rational,
    construction: Construction,
) -> Result<Wire> {
    construction.check_eps(eps)?;
    match inputs {
        [] => Err(Error::param("a product needs at least one input")),
        [only] => Ok(*only),
        [first, rest @ ..] => {
            let kind = GadgetKind::MultChain {
                eps: eps.clone(),
                arity: inputs.len(),
                construction,
            };
            let id = c.begin(kind, inputs.to_vec());
            let mut acc = *first;
            for &x in rest {
                acc = build_mult(c, acc, x, eps, construction)?;
            }
            c.finish(id, vec![acc.player]);
            Ok(acc)
        }
    }
}

/// Players added by an m-input chain.
pub fn chain_size(m: usize, eps: &Rational, construction: Construction) -> Result<usize> {
    Ok(m.saturating_sub(1) * construction.size(eps)?)
}

/// `d * m * eps^c`, squared when `c = 1/2` so it stays rational.
pub fn chain_error_squared(m: usize, eps: &Rational, construction: Construction) -> Rational {
    let p = construction.params();
    let dm = &p.d * int(m as i64);
    match construction {
        Construction::UnaryPoly => {
            let e = dm * eps;
            &e * &e
        }
        Construction::BinaryLog => &dm * &dm * eps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::lift_circuit_values;
    use crate::rational::within;
    use crate::verify::verify_wsne_clamped;
    use std::collections::BTreeMap;

    fn lifted_product(
        eps: &Rational,
        construction: Construction,
        x: Rational,
        y: Rational,
    ) -> (Rational, usize) {
        let mut c = GadgetCircuit::new();
        let a = c.add_input("a");
        let b = c.add_input("b");
        let p = build_mult(&mut c, a, b, eps, construction).unwrap();
        let given = BTreeMap::from([(a.player, x), (b.player, y)]);
        let prof = lift_circuit_values(&c, &given).unwrap();
        let game = c.combine().unwrap();
        let report = verify_wsne_clamped(&game, &prof, eps, &c.free_players()).unwrap();
        assert!(report.passed());
        (prof.strategy(p.player).value().clone(), c.num_players() - 2)
    }

    #[test]
    fn beta_rounding() {
        assert_eq!(beta_for(&ratio(1, 4)).unwrap(), 1);
        assert_eq!(beta_for(&ratio(1, 1000)).unwrap(), 5);
        assert_eq!(beta_for(&ratio(1, 1_000_000)).unwrap(), 10);
        assert_eq!(beta_for(&ratio(1, 100_000_000)).unwrap(), 14);
        assert!(beta_for(&Rational::zero()).is_err());
    }

    #[test]
    fn unary_sizes_and_error() {
        let eps = ratio(1, 20);
        assert_eq!(unary_cells(&eps).unwrap(), 7);
        assert_eq!(unary_size(&eps).unwrap(), 65);
        for (x, y) in [(ratio(1, 3), ratio(5, 7)), (int(1), int(1)), (int(0), ratio(1, 2))] {
            let (p, size) = lifted_product(&eps, Construction::UnaryPoly, x.clone(), y.clone());
            assert_eq!(size, 65);
            assert!(within(&p, &(x * y), &(int(19) * &eps)));
        }
        let mut c = GadgetCircuit::new();
        let a = c.add_input("a");
        assert!(build_mult_unary(&mut c, a, a, &ratio(1, 4)).is_err());
    }

    #[test]
    fn robust_size_matches_build() {
        let eps = ratio(1, 1_000_000);
        let (p, size) = lifted_product(&eps, Construction::BinaryLog, ratio(2, 3), ratio(3, 4));
        assert_eq!(size, robust_size(10));
        let err = &p - ratio(1, 2);
        assert!(&err * &err <= int(9) * &eps);
    }

    #[test]
    fn robust_preconditions() {
        let mut c = GadgetCircuit::new();
        let a = c.add_input("a");
        let b = c.add_input("b");
        assert!(build_mult_robust(&mut c, a, b, &ratio(1, 10_000)).is_err());
        let before = c.num_players();
        build_mult_robust_unchecked(&mut c, a, b, &ratio(1, 10_000)).unwrap();
        assert_eq!(c.num_players() - before, robust_size(7));
        assert!(build_mult_brittle(&mut c, a, b, &ratio(1, 100)).is_err());
    }

    #[test]
    fn brittle_zone() {
        let eps = ratio(1, 10_000);
        // beta = 7, margin = 21/10000
        assert!(in_brittle_zone(&ratio(5, 8), &eps).unwrap());
        assert!(!in_brittle_zone(&(ratio(5, 8) + ratio(1, 256)), &eps).unwrap());
    }

    #[test]
    fn chains() {
        let eps = ratio(1, 20);
        let mut c = GadgetCircuit::new();
        let xs: Vec<Wire> = (0..3).map(|i| c.add_input(format!("x{i}"))).collect();
        assert_eq!(build_mult_chain(&mut c, &xs[..1], &eps, Construction::UnaryPoly).unwrap(), xs[0]);
        assert_eq!(c.num_players(), 3);
        build_mult_chain(&mut c, &xs, &eps, Construction::UnaryPoly).unwrap();
        assert_eq!(c.num_players() - 3, chain_size(3, &eps, Construction::UnaryPoly).unwrap());
        assert!(build_mult_chain(&mut c, &[], &eps, Construction::UnaryPoly).is_err());
        assert_eq!(chain_error_squared(3, &ratio(1, 100), Construction::UnaryPoly), ratio(57 * 57, 10_000));
    }
}
