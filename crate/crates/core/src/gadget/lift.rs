//! Forward construction of exact equilibria for gadget circuits: given the
//! input values, every gadget player gets a value that leaves it exactly
//! best-responding.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::build::standalone;
use super::circuit::{GadgetCircuit, GadgetKind};
use crate::error::{Error, Result};
use crate::profile::{MixedProfile, MixedStrategy};
use crate::rational::{half, int, ratio, Rational};

/// Values of a primitive gadget's own players, output first then the
/// auxiliary `W` if the kind has one.
pub fn lift_primitive(kind: &GadgetKind, inputs: &[Rational]) -> Result<Vec<Rational>> {
    if inputs.len() != kind.arity() {
        return Err(Error::param(format!(
            "{} takes {} inputs, got {}",
            kind.name(),
            kind.arity(),
            inputs.len()
        )));
    }
    let bit = |b: bool| if b { Rational::one() } else { Rational::zero() };
    let target = match kind {
        // Ties go to 1; any value is consistent there.
        GadgetKind::Threshold(zeta) => return Ok(vec![bit(inputs[0] >= *zeta)]),
        GadgetKind::And => return Ok(vec![bit(&inputs[0] + &inputs[1] >= ratio(3, 2))]),
        GadgetKind::Compare => return Ok(vec![bit(inputs[0] <= inputs[1])]),
        GadgetKind::ScaledSum { zeta, .. } => zeta * inputs.iter().sum::<Rational>(),
        GadgetKind::Minus => &inputs[1] - &inputs[0],
        GadgetKind::Complement => Rational::one() - &inputs[0],
        GadgetKind::Assign(zeta) => zeta.clone(),
        GadgetKind::Scale(zeta) => zeta * &inputs[0],
        GadgetKind::Mask => &inputs[1] - int(2) * (Rational::one() - &inputs[0]),
        other => {
            return Err(Error::param(format!("{} is not a primitive gadget", other.name())))
        }
    };
    // W earns (p + a, b); setting p = b - a inside (0, 1) with w = 1/2 makes
    // both W and P indifferent. Outside, both saturate on the same side.
    Ok(if target <= Rational::zero() {
        vec![Rational::zero(), Rational::zero()]
    } else if target >= Rational::one() {
        vec![Rational::one(), Rational::one()]
    } else {
        vec![target, half()]
    })
}

/// Exact equilibrium of the whole circuit given fixed strategies for every
/// player that no gadget produces.
pub fn lift_circuit(
    c: &GadgetCircuit,
    fixed: &BTreeMap<usize, MixedStrategy>,
) -> Result<MixedProfile> {
    let order = c.topological_primitives()?;
    let mut values: Vec<Option<MixedStrategy>> = vec![None; c.num_players()];
    for (&p, s) in fixed {
        if p >= c.num_players() {
            return Err(Error::IndexOutOfRange {
                index: p,
                limit: c.num_players(),
            });
        }
        if s.len() != c.strategy_counts()[p] {
            return Err(Error::dims(format!("fixed strategy for player {p} has wrong length")));
        }
        values[p] = Some(s.clone());
    }
    for &p in &c.free_players() {
        if values[p].is_none() {
            return Err(Error::param(format!("player {p} is a circuit input but has no value")));
        }
    }
    for id in order {
        let g = c.gadget(id);
        let inputs = g
            .inputs
            .iter()
            .map(|w| {
                values[w.player]
                    .as_ref()
                    .map(|s| s.prob(w.strategy).clone())
                    .ok_or_else(|| Error::param(format!("player {} has no value yet", w.player)))
            })
            .collect::<Result<Vec<_>>>()?;
        let lifted = lift_primitive(&g.kind, &inputs)?;
        for (&p, v) in g.outputs.iter().chain(&g.aux).zip(lifted) {
            if fixed.contains_key(&p) {
                continue;
            }
            values[p] = Some(MixedStrategy::binary(v)?);
        }
    }
    let strategies = values
        .into_iter()
        .enumerate()
        .map(|(p, s)| s.ok_or_else(|| Error::param(format!("player {p} was never assigned"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(MixedProfile::new(strategies))
}

/// Convenience form of [`lift_circuit`] for binary inputs given by value.
pub fn lift_circuit_values(
    c: &GadgetCircuit,
    inputs: &BTreeMap<usize, Rational>,
) -> Result<MixedProfile> {
    let fixed = inputs
        .iter()
        .map(|(&p, v)| Ok((p, MixedStrategy::binary(v.clone())?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    lift_circuit(c, &fixed)
}

/// Values of every player a gadget of `kind` owns (in player order), with
/// outputs listed first, for the given input values.
pub fn lift_gadget(kind: &GadgetKind, inputs: &[Rational]) -> Result<Vec<Rational>> {
    if kind.is_primitive() {
        return lift_primitive(kind, inputs);
    }
    let (c, wires, outputs) = standalone(kind)?;
    if inputs.len() != wires.len() {
        return Err(Error::param(format!(
            "{} takes {} inputs, got {}",
            kind.name(),
            wires.len(),
            inputs.len()
        )));
    }
    let given = wires
        .iter()
        .map(|w| w.player)
        .zip(inputs.iter().cloned())
        .collect();
    let profile = lift_circuit_values(&c, &given)?;
    let mut out: Vec<Rational> = outputs
        .iter()
        .map(|w| profile.strategy(w.player).value().clone())
        .collect();
    for p in wires.len()..c.num_players() {
        if !outputs.iter().any(|w| w.player == p) {
            out.push(profile.strategy(p).value().clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::build::*;
    use crate::gadget::circuit::Wire;
    use crate::verify::verify_wsne_clamped;

    fn check_zero_wsne(c: &GadgetCircuit, inputs: &[(Wire, Rational)]) -> MixedProfile {
        let given = inputs.iter().map(|(w, v)| (w.player, v.clone())).collect();
        let prof = lift_circuit_values(c, &given).unwrap();
        let g = c.combine().unwrap();
        let report = verify_wsne_clamped(&g, &prof, &Rational::zero(), &c.free_players()).unwrap();
        assert!(report.passed(), "{report:?}");
        prof
    }

    #[test]
    fn scaled_sum_indifference() {
        let kind = GadgetKind::ScaledSum {
            zeta: int(1),
            arity: 2,
        };
        assert_eq!(
            lift_primitive(&kind, &[ratio(1, 5), ratio(3, 10)]).unwrap(),
            vec![ratio(1, 2), half()]
        );
        assert_eq!(
            lift_primitive(&kind, &[ratio(4, 5), ratio(4, 5)]).unwrap(),
            vec![int(1), int(1)]
        );
    }

    #[test]
    fn threshold_tie_break() {
        let k = GadgetKind::Threshold(ratio(1, 2));
        assert_eq!(lift_primitive(&k, &[ratio(7, 10)]).unwrap(), vec![int(1)]);
        assert_eq!(lift_primitive(&k, &[ratio(1, 2)]).unwrap(), vec![int(1)]);
        assert_eq!(lift_primitive(&k, &[ratio(1, 5)]).unwrap(), vec![int(0)]);
    }

    #[test]
    fn lifted_profiles_are_exact_equilibria() {
        let mut c = GadgetCircuit::new();
        let a = c.add_input("a");
        let b = c.add_input("b");
        let d = c.add_input("d");
        let m = build_mask(&mut c, a, b).unwrap();
        let med = build_median(&mut c, a, b, d).unwrap();
        build_bit_extract(&mut c, d, 3).unwrap();
        let prof = check_zero_wsne(&c, &[(a, int(1)), (b, ratio(2, 5)), (d, ratio(5, 8))]);
        assert_eq!(prof.strategy(m.player).value(), &ratio(2, 5));
        assert_eq!(prof.strategy(med.player).value(), &ratio(5, 8));
        check_zero_wsne(&c, &[(a, ratio(1, 3)), (b, ratio(1, 7)), (d, int(0))]);
    }

    #[test]
    fn lift_gadget_reports_outputs_first() {
        let vals = lift_gadget(&GadgetKind::Max, &[ratio(1, 5), ratio(7, 10)]).unwrap();
        assert_eq!(vals[0], ratio(7, 10));
        let bits = lift_gadget(&GadgetKind::BitExtract(3), &[ratio(5, 8) + ratio(1, 32)]).unwrap();
        assert_eq!(&bits[..3], &[int(1), int(0), int(1)]);
    }

    #[test]
    fn cycles_are_detected() {
        let mut c = GadgetCircuit::new();
        let x = c.add_input("x");
        let y = build_threshold(&mut c, x, ratio(1, 2)).unwrap();
        build_primitive_onto(&mut c, GadgetKind::Threshold(ratio(1, 2)), &[y], x.player).unwrap();
        let err = lift_circuit_values(&c, &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, Error::CycleDetected { .. }));
    }
}
