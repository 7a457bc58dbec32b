//! Gadget constructors. Each takes input wires and returns the output wire.

use num_traits::{One, Zero};

use super::circuit::{GadgetCircuit, GadgetKind, Wire};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::{int, pow2_neg, ratio, Rational};

fn m2(a: Rational, b: Rational, c: Rational, d: Rational) -> Matrix {
    Matrix::from_rows(vec![vec![a, b], vec![c, d]]).expect("2x2")
}

fn z() -> Rational {
    Rational::zero()
}

fn o() -> Rational {
    Rational::one()
}

/// `M^{W,P}` shared by every gadget with a W/P pair: W earns `p` on strategy 0.
fn w_against_p() -> Matrix {
    m2(z(), o(), z(), z())
}

fn check_unit(zeta: &Rational, what: &str) -> Result<()> {
    if *zeta < z() || *zeta > o() {
        return Err(Error::param(format!("{what} parameter must lie in [0, 1]")));
    }
    Ok(())
}

fn check_wires(c: &GadgetCircuit, inputs: &[Wire]) -> Result<()> {
    for w in inputs {
        let n = *c
            .strategy_counts()
            .get(w.player)
            .ok_or(Error::IndexOutOfRange {
                index: w.player,
                limit: c.num_players(),
            })?;
        if w.strategy >= n {
            return Err(Error::IndexOutOfRange {
                index: w.strategy,
                limit: n,
            });
        }
    }
    Ok(())
}

/// Emits a primitive gadget. With `output` set, that existing player is used
/// as the output instead of a fresh one.
fn emit(
    c: &mut GadgetCircuit,
    kind: GadgetKind,
    inputs: &[Wire],
    output: Option<usize>,
) -> Result<Wire> {
    debug_assert!(kind.is_primitive());
    if inputs.len() != kind.arity() {
        return Err(Error::param(format!(
            "{} takes {} inputs, got {}",
            kind.name(),
            kind.arity(),
            inputs.len()
        )));
    }
    check_wires(c, inputs)?;
    if let Some(p) = output {
        if c.strategy_counts().get(p) != Some(&2) {
            return Err(Error::param(format!("output player {p} must be binary")));
        }
        if inputs.iter().any(|w| w.player == p) {
            return Err(Error::param(format!("player {p} cannot be its own input")));
        }
    }
    let id = c.begin(kind.clone(), inputs.to_vec());
    let p = match output {
        Some(p) => p,
        None => c.gadget_player(id, "P"),
    };
    match &kind {
        GadgetKind::Threshold(zeta) => {
            c.add_tap_edge(p, inputs[0], &m2(zeta.clone(), zeta.clone(), z(), o()))?;
        }
        GadgetKind::And => {
            // Row 0 earns 3/8 per input so the two together give 3/4.
            for &w in inputs {
                c.add_tap_edge(p, w, &m2(ratio(3, 8), ratio(3, 8), z(), ratio(1, 2)))?;
            }
        }
        GadgetKind::Compare => {
            c.add_tap_edge(p, inputs[0], &m2(z(), o(), z(), z()))?;
            c.add_tap_edge(p, inputs[1], &m2(z(), z(), z(), o()))?;
        }
        _ => {
            let w = c.gadget_player(id, "W");
            c.push_aux(id, w);
            c.add_edge(p, w, Matrix::identity(2))?;
            match &kind {
                GadgetKind::ScaledSum { zeta, .. } => {
                    c.add_edge(w, p, w_against_p())?;
                    for &input in inputs {
                        c.add_tap_edge(w, input, &m2(z(), z(), z(), zeta.clone()))?;
                    }
                }
                GadgetKind::Minus => {
                    c.add_edge(w, p, w_against_p())?;
                    c.add_tap_edge(w, inputs[0], &m2(z(), z(), z(), int(-1)))?;
                    c.add_tap_edge(w, inputs[1], &m2(z(), z(), z(), o()))?;
                }
                GadgetKind::Complement => {
                    c.add_edge(w, p, w_against_p())?;
                    c.add_tap_edge(w, inputs[0], &m2(z(), z(), o(), z()))?;
                }
                GadgetKind::Assign(zeta) => {
                    c.add_edge(w, p, m2(z(), o(), zeta.clone(), zeta.clone()))?;
                }
                GadgetKind::Scale(zeta) => {
                    c.add_edge(w, p, w_against_p())?;
                    c.add_tap_edge(w, inputs[0], &m2(z(), z(), z(), zeta.clone()))?;
                }
                GadgetKind::Mask => {
                    c.add_edge(w, p, w_against_p())?;
                    c.add_tap_edge(w, inputs[0], &m2(int(2), z(), z(), z()))?;
                    c.add_tap_edge(w, inputs[1], &m2(z(), z(), z(), o()))?;
                }
                _ => unreachable!("primitive kinds are exhaustive"),
            }
        }
    }
    c.finish(id, vec![p]);
    Ok(Wire::binary(p))
}

/// Builds a primitive gadget whose output is the existing binary `output`
/// player rather than a fresh one. Mostly useful for wiring experiments;
/// `combine` rejects circuits where a player ends up with two producers.
pub fn build_primitive_onto(
    c: &mut GadgetCircuit,
    kind: GadgetKind,
    inputs: &[Wire],
    output: usize,
) -> Result<Wire> {
    if !kind.is_primitive() {
        return Err(Error::param(format!("{} is not a primitive gadget", kind.name())));
    }
    emit(c, kind, inputs, Some(output))
}

/// Output is 1 when the input exceeds `zeta` by more than ε, 0 when it is
/// below by more than ε.
pub fn build_threshold(c: &mut GadgetCircuit, input: Wire, zeta: Rational) -> Result<Wire> {
    check_unit(&zeta, "threshold")?;
    emit(c, GadgetKind::Threshold(zeta), &[input], None)
}

/// Threshold without the `zeta <= 1` check; the unary multiplier needs one
/// cell just past 1 when `1/tau` is not an integer.
pub(crate) fn build_threshold_unclamped(
    c: &mut GadgetCircuit,
    input: Wire,
    zeta: Rational,
) -> Result<Wire> {
    if zeta < z() || zeta > int(2) {
        return Err(Error::param("threshold parameter must lie in [0, 2]"));
    }
    emit(c, GadgetKind::Threshold(zeta), &[input], None)
}

pub fn build_and(c: &mut GadgetCircuit, a: Wire, b: Wire) -> Result<Wire> {
    emit(c, GadgetKind::And, &[a, b], None)
}

/// `min(zeta * sum(inputs), 1)`.
pub fn build_scaled_sum(c: &mut GadgetCircuit, inputs: &[Wire], zeta: Rational) -> Result<Wire> {
    check_unit(&zeta, "scaled-sum")?;
    if inputs.is_empty() {
        return Err(Error::param("scaled-sum needs at least one input"));
    }
    let kind = GadgetKind::ScaledSum {
        zeta,
        arity: inputs.len(),
    };
    emit(c, kind, inputs, None)
}

/// A fresh player carrying the same value as `input`.
pub fn build_copy(c: &mut GadgetCircuit, input: Wire) -> Result<Wire> {
    build_scaled_sum(c, &[input], o())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimpleKind {
    Compare,
    Minus,
    Complement,
    Assign(Rational),
    Scale(Rational),
}

pub fn build_simple(c: &mut GadgetCircuit, kind: SimpleKind, inputs: &[Wire]) -> Result<Wire> {
    let kind = match kind {
        SimpleKind::Compare => GadgetKind::Compare,
        SimpleKind::Minus => GadgetKind::Minus,
        SimpleKind::Complement => GadgetKind::Complement,
        SimpleKind::Assign(zeta) => {
            check_unit(&zeta, "assign")?;
            GadgetKind::Assign(zeta)
        }
        SimpleKind::Scale(zeta) => {
            check_unit(&zeta, "scale")?;
            GadgetKind::Scale(zeta)
        }
    };
    emit(c, kind, inputs, None)
}

/// 1 when `a < b - ε`, 0 when `a > b + ε`.
pub fn build_compare(c: &mut GadgetCircuit, a: Wire, b: Wire) -> Result<Wire> {
    build_simple(c, SimpleKind::Compare, &[a, b])
}

/// `max(0, minuend - subtrahend)`.
pub fn build_minus(c: &mut GadgetCircuit, subtrahend: Wire, minuend: Wire) -> Result<Wire> {
    build_simple(c, SimpleKind::Minus, &[subtrahend, minuend])
}

pub fn build_complement(c: &mut GadgetCircuit, input: Wire) -> Result<Wire> {
    build_simple(c, SimpleKind::Complement, &[input])
}

pub fn build_assign(c: &mut GadgetCircuit, zeta: Rational) -> Result<Wire> {
    build_simple(c, SimpleKind::Assign(zeta), &[])
}

pub fn build_scale(c: &mut GadgetCircuit, input: Wire, zeta: Rational) -> Result<Wire> {
    build_simple(c, SimpleKind::Scale(zeta), &[input])
}

/// `value` when `bit` is 1, 0 when `bit` is 0.
pub fn build_mask(c: &mut GadgetCircuit, bit: Wire, value: Wire) -> Result<Wire> {
    emit(c, GadgetKind::Mask, &[bit, value], None)
}

pub fn build_max(c: &mut GadgetCircuit, a: Wire, b: Wire) -> Result<Wire> {
    check_wires(c, &[a, b])?;
    let id = c.begin(GadgetKind::Max, vec![a, b]);
    // p = a + [a < b] * (b - a)
    let below = build_compare(c, a, b)?;
    let gap = build_minus(c, a, b)?;
    let masked = build_mask(c, below, gap)?;
    let p = build_scaled_sum(c, &[masked, a], o())?;
    c.finish(id, vec![p.player]);
    Ok(p)
}

pub fn build_min(c: &mut GadgetCircuit, a: Wire, b: Wire) -> Result<Wire> {
    check_wires(c, &[a, b])?;
    let id = c.begin(GadgetKind::Min, vec![a, b]);
    let na = build_complement(c, a)?;
    let nb = build_complement(c, b)?;
    let top = build_max(c, na, nb)?;
    let p = build_complement(c, top)?;
    c.finish(id, vec![p.player]);
    Ok(p)
}

pub fn build_median(c: &mut GadgetCircuit, a: Wire, b: Wire, d: Wire) -> Result<Wire> {
    check_wires(c, &[a, b, d])?;
    let id = c.begin(GadgetKind::Median, vec![a, b, d]);
    let hi = build_max(c, a, b)?;
    let lo = build_min(c, a, b)?;
    let mid = build_min(c, d, hi)?;
    let p = build_max(c, lo, mid)?;
    c.finish(id, vec![p.player]);
    Ok(p)
}

/// Largest ε at which bit extraction to depth `beta` is trusted.
pub fn bit_extract_eps_bound(beta: u32) -> Rational {
    pow2_neg(beta) / int(48 * i64::from(beta))
}

/// The `beta` most significant binary digits of the input.
pub fn build_bit_extract(c: &mut GadgetCircuit, input: Wire, beta: u32) -> Result<Vec<Wire>> {
    if beta == 0 {
        return Err(Error::param("bit extraction needs beta >= 1"));
    }
    check_wires(c, &[input])?;
    let id = c.begin(GadgetKind::BitExtract(beta), vec![input]);
    let mut rest = build_copy(c, input)?;
    let mut bits = Vec::with_capacity(beta as usize);
    for i in 1..=beta {
        let bit = build_threshold(c, rest, pow2_neg(i))?;
        bits.push(bit);
        if i < beta {
            let weight = build_scale(c, bit, pow2_neg(i))?;
            rest = build_minus(c, weight, rest)?;
        }
    }
    c.finish(id, bits.iter().map(|w| w.player).collect());
    c.require(
        id,
        bit_extract_eps_bound(beta),
        format!("bit-extract({beta}) needs eps <= 2^-{beta}/(48*{beta})"),
    );
    Ok(bits)
}

/// Builds any gadget kind from its descriptor.
pub fn build_kind(c: &mut GadgetCircuit, kind: &GadgetKind, inputs: &[Wire]) -> Result<Vec<Wire>> {
    if inputs.len() != kind.arity() {
        return Err(Error::param(format!(
            "{} takes {} inputs, got {}",
            kind.name(),
            kind.arity(),
            inputs.len()
        )));
    }
    let one = |w: Result<Wire>| w.map(|w| vec![w]);
    match kind {
        GadgetKind::Threshold(zeta) => one(build_threshold(c, inputs[0], zeta.clone())),
        GadgetKind::ScaledSum { zeta, .. } => one(build_scaled_sum(c, inputs, zeta.clone())),
        GadgetKind::Assign(zeta) => one(build_assign(c, zeta.clone())),
        GadgetKind::Scale(zeta) => one(build_scale(c, inputs[0], zeta.clone())),
        GadgetKind::And
        | GadgetKind::Compare
        | GadgetKind::Minus
        | GadgetKind::Complement
        | GadgetKind::Mask => one(emit(c, kind.clone(), inputs, None)),
        GadgetKind::Max => one(build_max(c, inputs[0], inputs[1])),
        GadgetKind::Min => one(build_min(c, inputs[0], inputs[1])),
        GadgetKind::Median => one(build_median(c, inputs[0], inputs[1], inputs[2])),
        GadgetKind::BitExtract(beta) => build_bit_extract(c, inputs[0], *beta),
        GadgetKind::MultUnary(eps) => one(crate::mult::build_mult_unary(c, inputs[0], inputs[1], eps)),
        GadgetKind::MultBrittle(eps) => {
            one(crate::mult::build_mult_brittle(c, inputs[0], inputs[1], eps))
        }
        GadgetKind::MultRobust(eps) => one(crate::mult::build_mult_robust(c, inputs[0], inputs[1], eps)),
        GadgetKind::MultChain {
            eps, construction, ..
        } => one(crate::mult::build_mult_chain(c, inputs, eps, *construction)),
    }
}

/// A circuit holding one gadget of `kind` fed by fresh binary inputs.
pub fn standalone(kind: &GadgetKind) -> Result<(GadgetCircuit, Vec<Wire>, Vec<Wire>)> {
    let mut c = GadgetCircuit::new();
    let inputs: Vec<Wire> = (0..kind.arity())
        .map(|i| c.add_input(format!("input{}", i + 1)))
        .collect();
    let outputs = build_kind(&mut c, kind, &inputs)?;
    Ok((c, inputs, outputs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Game;
    use crate::profile::{MixedProfile, MixedStrategy};

    fn entries(c: &GadgetCircuit, from: usize, to: usize) -> Vec<Vec<Rational>> {
        c.edges()[&(from, to)].to_rows()
    }

    fn r(rows: [[i64; 2]; 2]) -> Vec<Vec<Rational>> {
        rows.iter().map(|row| row.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn threshold_matrix_and_payoff() {
        let mut c = GadgetCircuit::new();
        let x = c.add_input("x");
        let p = build_threshold(&mut c, x, ratio(1, 2)).unwrap();
        let h = ratio(1, 2);
        assert_eq!(
            entries(&c, p.player, x.player),
            vec![vec![h.clone(), h.clone()], vec![int(0), int(1)]]
        );
        let g = c.combine().unwrap();
        let prof = MixedProfile::new(vec![
            MixedStrategy::binary(ratio(7, 10)).unwrap(),
            MixedStrategy::uniform(2),
        ]);
        assert_eq!(g.expected_payoffs(1, &prof).unwrap(), vec![h, ratio(7, 10)]);
        assert!(build_threshold(&mut c, x, ratio(3, 2)).is_err());
    }

    #[test]
    fn and_payoff_vector() {
        let mut c = GadgetCircuit::new();
        let a = c.add_input("a");
        let b = c.add_input("b");
        let p = build_and(&mut c, a, b).unwrap();
        let g = c.combine().unwrap();
        let prof = MixedProfile::new(vec![
            MixedStrategy::binary(ratio(3, 5)).unwrap(),
            MixedStrategy::binary(ratio(9, 10)).unwrap(),
            MixedStrategy::uniform(2),
        ]);
        assert_eq!(
            g.expected_payoffs(p.player, &prof).unwrap(),
            vec![ratio(3, 4), ratio(3, 4)]
        );
    }

    #[test]
    fn w_type_matrices() {
        let mut c = GadgetCircuit::new();
        let a = c.add_input("a");
        let b = c.add_input("b");
        let p = build_minus(&mut c, a, b).unwrap();
        let w = c.gadget(0).aux[0];
        assert_eq!(entries(&c, p.player, w), r([[1, 0], [0, 1]]));
        assert_eq!(entries(&c, w, p.player), r([[0, 1], [0, 0]]));
        assert_eq!(entries(&c, w, a.player), r([[0, 0], [0, -1]]));
        assert_eq!(entries(&c, w, b.player), r([[0, 0], [0, 1]]));

        let q = build_mask(&mut c, a, b).unwrap();
        let w = c.gadget(1).aux[0];
        assert_eq!(entries(&c, w, a.player), r([[2, 0], [0, 0]]));
        assert_eq!(entries(&c, w, b.player), r([[0, 0], [0, 1]]));
        assert_eq!(entries(&c, q.player, w), r([[1, 0], [0, 1]]));

        build_assign(&mut c, ratio(1, 3)).unwrap();
        let g = c.gadget(2);
        let t = ratio(1, 3);
        assert_eq!(
            entries(&c, g.aux[0], g.outputs[0]),
            vec![vec![int(0), int(1)], vec![t.clone(), t]]
        );
        build_complement(&mut c, a).unwrap();
        let g = c.gadget(3);
        assert_eq!(entries(&c, g.aux[0], a.player), r([[0, 0], [1, 0]]));
    }

    #[test]
    fn tap_embedding() {
        let mut c = GadgetCircuit::new();
        let orig = c.add_player(3, crate::game::PlayerRole::plain());
        let p = build_threshold(&mut c, Wire::tap(orig, 2), ratio(1, 4)).unwrap();
        let q = ratio(1, 4);
        assert_eq!(
            entries(&c, p.player, orig),
            vec![
                vec![q.clone(), q.clone(), q.clone()],
                vec![int(0), int(0), int(1)]
            ]
        );
    }

    #[test]
    fn composite_structure() {
        let mut c = GadgetCircuit::new();
        let a = c.add_input("a");
        let b = c.add_input("b");
        let d = c.add_input("d");
        build_median(&mut c, a, b, d).unwrap();
        let top = c.gadget(0);
        assert_eq!(top.kind, GadgetKind::Median);
        assert_eq!(top.children.len(), 4);
        assert!(c.gadgets().iter().skip(1).all(|g| g.parent.is_some()));
        // 2 Max (7 players each) + 2 Min (7 + 3*2 each)
        assert_eq!(c.num_players(), 3 + 2 * 7 + 2 * 13);
        assert_eq!(c.internal_players(0).len(), 40);
        c.combine().unwrap();
    }

    #[test]
    fn bit_extract_layout() {
        let mut c = GadgetCircuit::new();
        let x = c.add_input("x");
        let bits = build_bit_extract(&mut c, x, 3).unwrap();
        assert_eq!(bits.len(), 3);
        // copy (2) + 3 thresholds + 2 * (scale + minus) (8)
        assert_eq!(c.num_players(), 1 + 2 + 3 + 8);
        assert_eq!(c.preconditions()[0].max_eps, ratio(1, 8 * 144));
    }

    #[test]
    fn duplicate_output_rejected() {
        let mut c = GadgetCircuit::new();
        let x = c.add_input("x");
        let p = build_threshold(&mut c, x, ratio(1, 2)).unwrap();
        build_threshold(&mut c, x, ratio(1, 3)).unwrap();
        assert!(c.combine().is_ok());
        build_primitive_onto(&mut c, GadgetKind::Threshold(ratio(1, 4)), &[x], p.player).unwrap();
        assert_eq!(c.combine().unwrap_err(), Error::DuplicateOutput { player: p.player });
        assert_eq!(GadgetCircuit::new().combine().unwrap().num_players(), 0);
    }
}
