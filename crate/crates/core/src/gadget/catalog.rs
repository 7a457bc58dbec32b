//! What each gadget promises, in checkable form.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::circuit::GadgetKind;
use crate::error::{Error, Result};
use crate::mult::{beta_for, Construction};
use crate::rational::{floor_int, int, pow2_neg, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub parameters: &'static str,
    pub inputs: &'static str,
    pub guarantee: &'static str,
    /// Additive error as a multiple of ε, where the guarantee is additive.
    pub error_multiple: Option<u32>,
    pub size: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    let e = |name, parameters, inputs, guarantee, error_multiple, size| CatalogEntry {
        name,
        parameters,
        inputs,
        guarantee,
        error_multiple,
        size,
    };
    vec![
        e("threshold", "zeta in [0,1]", "p1", "p = 1 if p1 > zeta + eps; p = 0 if p1 < zeta - eps", None, "1"),
        e("and", "", "p1, p2", "for eps < 1/4: p = 1 if p1 = p2 = 1; p = 0 if p1 = 0 or p2 = 0", None, "1"),
        e("scaled-sum", "zeta in [0,1], arity m", "p1..pm", "p = min(zeta * sum, 1) +- eps", Some(1), "2"),
        e("compare", "", "p1, p2", "p = 1 if p1 < p2 - eps; p = 0 if p1 > p2 + eps", None, "1"),
        e("minus", "", "p1, p2", "p = max(0, p2 - p1) +- eps", Some(1), "2"),
        e("complement", "", "p1", "p = 1 - p1 +- eps", Some(1), "2"),
        e("assign", "zeta in [0,1]", "", "p = zeta +- eps", Some(1), "2"),
        e("scale", "zeta in [0,1]", "p1", "p = zeta * p1 +- eps", Some(1), "2"),
        e("mask", "", "p1 (bit), p2", "p = p2 +- eps if p1 = 1; p = 0 if p1 = 0; p <= 3 eps if p2 <= 2 eps", Some(1), "2"),
        e("max", "", "p1, p2", "p = max(p1, p2) +- 4 eps", Some(4), "7"),
        e("min", "", "p1, p2", "p = min(p1, p2) +- 8 eps", Some(8), "13"),
        e("median", "", "p1, p2, p3", "p = median(p1, p2, p3) +- 20 eps", Some(20), "40"),
        e("bit-extract", "beta >= 1", "p1", "b_i = i-th binary digit of p1 when p1 is 3 beta eps-far from multiples of 2^-beta (needs eps <= 2^-beta / (48 beta))", None, "5 beta - 2"),
        e("mult-unary", "eps < 1/4", "p1, p2", "p = p1 p2 +- 19 eps", Some(19), "K^2 + 2K + 2, K = ceil(1/(3 eps))"),
        e("mult-brittle", "eps <= 1/1000", "p1, p2", "p = p1 p2 +- 2 sqrt(eps) when p1 is 3 beta eps-far from multiples of 2^-beta", None, "9 beta"),
        e("mult-robust", "eps <= 1/100000", "p1, p2", "p = p1 p2 +- 3 sqrt(eps)", None, "27 beta + 57"),
    ]
}

pub fn error_multiple(kind: &GadgetKind) -> Option<u32> {
    catalog()
        .into_iter()
        .find(|e| e.name == kind.name())
        .and_then(|e| e.error_multiple)
}

/// Builds a kind from its catalog name. `zeta` defaults to 1/2, `arity`
/// (scaled-sum) to 2, `beta` (bit-extract) to 1, `eps` (multipliers) must be
/// given.
pub fn kind_from_name(
    name: &str,
    zeta: Option<Rational>,
    arity: Option<usize>,
    beta: Option<u32>,
    eps: Option<Rational>,
) -> Result<GadgetKind> {
    let zeta = zeta.unwrap_or_else(|| ratio(1, 2));
    let need_eps = || eps.clone().ok_or_else(|| Error::param(format!("{name} needs eps")));
    Ok(match name {
        "threshold" => GadgetKind::Threshold(zeta),
        "and" => GadgetKind::And,
        "scaled-sum" => GadgetKind::ScaledSum {
            zeta,
            arity: arity.unwrap_or(2),
        },
        "compare" => GadgetKind::Compare,
        "minus" => GadgetKind::Minus,
        "complement" => GadgetKind::Complement,
        "assign" => GadgetKind::Assign(zeta),
        "scale" => GadgetKind::Scale(zeta),
        "mask" => GadgetKind::Mask,
        "max" => GadgetKind::Max,
        "min" => GadgetKind::Min,
        "median" => GadgetKind::Median,
        "bit-extract" => GadgetKind::BitExtract(beta.unwrap_or(1)),
        "mult-unary" => GadgetKind::MultUnary(need_eps()?),
        "mult-brittle" => GadgetKind::MultBrittle(need_eps()?),
        "mult-robust" => GadgetKind::MultRobust(need_eps()?),
        other => return Err(Error::param(format!("unknown gadget {other:?}"))),
    })
}

/// Representative instances of the thirteen standard kinds.
pub fn standard_kinds() -> Vec<GadgetKind> {
    vec![
        GadgetKind::Threshold(ratio(1, 2)),
        GadgetKind::And,
        GadgetKind::ScaledSum {
            zeta: ratio(1, 2),
            arity: 2,
        },
        GadgetKind::Compare,
        GadgetKind::Minus,
        GadgetKind::Complement,
        GadgetKind::Assign(ratio(1, 3)),
        GadgetKind::Scale(ratio(1, 3)),
        GadgetKind::Mask,
        GadgetKind::Max,
        GadgetKind::Min,
        GadgetKind::Median,
        GadgetKind::BitExtract(1),
    ]
}

fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

fn near(p: &Rational, target: &Rational, tol: &Rational) -> bool {
    abs_diff(p, target) <= *tol
}

/// `|p - target| <= k * sqrt(eps)`, decided without roots.
fn near_sqrt(p: &Rational, target: &Rational, k: i64, eps: &Rational) -> bool {
    let d = abs_diff(p, target);
    &d * &d <= int(k * k) * eps
}

/// True when `x` is `margin`-far from every multiple of `2^-beta`.
pub fn far_from_grid(x: &Rational, beta: u32, margin: &Rational) -> bool {
    let unit = pow2_neg(beta);
    let offset = x - Rational::from_integer(floor_int(&(x / &unit))) * &unit;
    offset > *margin && offset < &unit - margin
}

/// i-th binary digit of `x` (i >= 1), by integer arithmetic.
pub fn binary_digit(x: &Rational, i: u32) -> Rational {
    let scaled = floor_int(&(x * Rational::from_integer(num_bigint::BigInt::from(1u64) << i)));
    if scaled.is_odd() {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Checks a gadget's guarantee. Returns a description of the violated
/// clause, or `None` when the outputs are consistent with it.
pub fn check_guarantee(
    kind: &GadgetKind,
    eps: &Rational,
    inputs: &[Rational],
    outputs: &[Rational],
) -> Option<String> {
    let zero = Rational::zero();
    let one = Rational::one();
    let fail = |clause: &str| Some(format!("{}: {clause}", kind.name()));
    let p = &outputs[0];
    let k_eps = |k: i64| int(k) * eps;
    match kind {
        GadgetKind::Threshold(zeta) => {
            let x = &inputs[0];
            if *x > zeta + eps && *p != one {
                return fail("input above zeta + eps but output is not 1");
            }
            if *x < zeta - eps && *p != zero {
                return fail("input below zeta - eps but output is not 0");
            }
        }
        GadgetKind::And => {
            if *eps >= ratio(1, 4) {
                return None;
            }
            if inputs[0] == one && inputs[1] == one && *p != one {
                return fail("both inputs 1 but output is not 1");
            }
            if (inputs[0] == zero || inputs[1] == zero) && *p != zero {
                return fail("an input is 0 but output is not 0");
            }
        }
        GadgetKind::ScaledSum { zeta, .. } => {
            let t = (zeta * inputs.iter().sum::<Rational>()).min(one.clone());
            if !near(p, &t, eps) {
                return fail("output not within eps of min(zeta * sum, 1)");
            }
        }
        GadgetKind::Compare => {
            if inputs[0] < &inputs[1] - eps && *p != one {
                return fail("p1 < p2 - eps but output is not 1");
            }
            if inputs[0] > &inputs[1] + eps && *p != zero {
                return fail("p1 > p2 + eps but output is not 0");
            }
        }
        GadgetKind::Minus => {
            let t = (&inputs[1] - &inputs[0]).max(zero.clone());
            if !near(p, &t, eps) {
                return fail("output not within eps of max(0, p2 - p1)");
            }
        }
        GadgetKind::Complement => {
            if !near(p, &(&one - &inputs[0]), eps) {
                return fail("output not within eps of 1 - p1");
            }
        }
        GadgetKind::Assign(zeta) => {
            if !near(p, zeta, eps) {
                return fail("output not within eps of zeta");
            }
        }
        GadgetKind::Scale(zeta) => {
            if !near(p, &(zeta * &inputs[0]), eps) {
                return fail("output not within eps of zeta * p1");
            }
        }
        GadgetKind::Mask => {
            if inputs[0] == one && !near(p, &inputs[1], eps) {
                return fail("bit 1 but output not within eps of p2");
            }
            if inputs[0] == zero && *p != zero {
                return fail("bit 0 but output is not 0");
            }
            if inputs[1] <= k_eps(2) && *p > k_eps(3) {
                return fail("p2 <= 2 eps but output exceeds 3 eps");
            }
        }
        GadgetKind::Max => {
            if !near(p, &inputs[0].clone().max(inputs[1].clone()), &k_eps(4)) {
                return fail("output not within 4 eps of max");
            }
        }
        GadgetKind::Min => {
            if !near(p, &inputs[0].clone().min(inputs[1].clone()), &k_eps(8)) {
                return fail("output not within 8 eps of min");
            }
        }
        GadgetKind::Median => {
            let mut v = inputs.to_vec();
            v.sort();
            if !near(p, &v[1], &k_eps(20)) {
                return fail("output not within 20 eps of median");
            }
        }
        GadgetKind::BitExtract(beta) => {
            let margin = k_eps(3 * i64::from(*beta));
            if far_from_grid(&inputs[0], *beta, &margin) {
                for (i, b) in outputs.iter().enumerate() {
                    if *b != binary_digit(&inputs[0], i as u32 + 1) {
                        return fail("extracted bit differs from the binary digit");
                    }
                }
            }
        }
        GadgetKind::MultUnary(_) => {
            if !near(p, &(&inputs[0] * &inputs[1]), &k_eps(19)) {
                return fail("output not within 19 eps of the product");
            }
        }
        GadgetKind::MultBrittle(_) => {
            let beta = beta_for(eps).unwrap_or(1);
            let margin = k_eps(3 * i64::from(beta));
            if far_from_grid(&inputs[0], beta, &margin)
                && !near_sqrt(p, &(&inputs[0] * &inputs[1]), 2, eps)
            {
                return fail("output not within 2 sqrt(eps) of the product");
            }
        }
        GadgetKind::MultRobust(_) => {
            if !near_sqrt(p, &(&inputs[0] * &inputs[1]), 3, eps) {
                return fail("output not within 3 sqrt(eps) of the product");
            }
        }
        GadgetKind::MultChain {
            arity, construction, ..
        } => {
            let prod: Rational = inputs.iter().product();
            let m = *arity as i64;
            let ok = match construction {
                Construction::UnaryPoly => near(p, &prod, &k_eps(19 * m)),
                Construction::BinaryLog => near_sqrt(p, &prod, 3 * m, eps),
            };
            if !ok {
                return fail("output not within d m eps^c of the product");
            }
        }
    }
    None
}

/// Guarantee error bound in absolute terms, where the guarantee is additive.
pub fn error_bound(kind: &GadgetKind, eps: &Rational) -> Option<Rational> {
    error_multiple(kind).map(|k| int(i64::from(k)) * eps)
}
