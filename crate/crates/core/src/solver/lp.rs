//! Exact feasibility LPs: phase one of the simplex method over rationals,
//! with Bland's rule so degenerate systems cannot cycle.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// A linear constraint `coeffs . x (= or <=) rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub equality: bool,
}

impl Constraint {
    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            rhs,
            equality: true,
        }
    }

    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            rhs,
            equality: false,
        }
    }
}

/// Scalars the simplex tableau can run on: exact rationals, or `f64` with
/// a tolerance for quick screening.
pub(crate) trait Scalar: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn is_neg(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_nil(&self) -> bool;
    fn neg(&self) -> Self;
    fn div(&self, by: &Self) -> Self;
    fn sub_mul(&mut self, f: &Self, v: &Self);
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        Rational::from_integer(1.into())
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_nil(&self) -> bool {
        self.is_zero()
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn div(&self, by: &Self) -> Self {
        self / by
    }
    fn sub_mul(&mut self, f: &Self, v: &Self) {
        *self -= f * v;
    }
}

const FLOAT_TOL: f64 = 1e-9;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        crate::rational::approx(r)
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_TOL
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_TOL
    }
    fn is_nil(&self) -> bool {
        self.abs() <= FLOAT_TOL
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn div(&self, by: &Self) -> Self {
        self / by
    }
    fn sub_mul(&mut self, f: &Self, v: &Self) {
        *self -= f * v;
    }
}

/// A point `x >= 0` of `vars` coordinates satisfying every constraint, or
/// `None` if there is none. The point returned is a vertex of the feasible
/// region.
pub fn feasible_point(vars: usize, constraints: &[Constraint]) -> Option<Vec<Rational>> {
    match solve::<Rational>(vars, constraints, usize::MAX) {
        Phase1::Feasible(x) => Some(x),
        Phase1::Infeasible => None,
        Phase1::Stalled => unreachable!("exact phase one with Bland's rule terminates"),
    }
}

/// Floating-point screen for [`feasible_point`]. A `false` here is only a
/// strong hint, not a proof, of infeasibility; numerical trouble counts as
/// feasible so the exact solver gets the final say.
pub(crate) fn probably_feasible(vars: usize, constraints: &[Constraint]) -> bool {
    let limit = 50 * (vars + 2 * constraints.len() + 1);
    !matches!(solve::<f64>(vars, constraints, limit), Phase1::Infeasible)
}

enum Phase1<T> {
    Feasible(Vec<T>),
    Infeasible,
    /// No leaving row or too many pivots; only possible with rounding.
    Stalled,
}

fn solve<T: Scalar + PartialOrd>(vars: usize, constraints: &[Constraint], max_pivots: usize) -> Phase1<T> {
    let rows = constraints.len();
    let slacks = constraints.iter().filter(|c| !c.equality).count();
    // Columns: original variables, slacks, artificials, then the rhs.
    let art0 = vars + slacks;
    let width = art0 + rows + 1;
    let mut t = vec![vec![T::zero(); width]; rows];
    let mut basis = vec![0usize; rows];
    let mut slack = vars;
    for (r, c) in constraints.iter().enumerate() {
        assert_eq!(c.coeffs.len(), vars, "constraint {r} has the wrong width");
        let flip = c.rhs.is_negative();
        let sign = |v: T| if flip { v.neg() } else { v };
        for (j, v) in c.coeffs.iter().enumerate() {
            t[r][j] = sign(T::from_rational(v));
        }
        t[r][width - 1] = sign(T::from_rational(&c.rhs));
        if c.equality {
            t[r][art0 + r] = T::one();
            basis[r] = art0 + r;
        } else {
            t[r][slack] = sign(T::one());
            if flip {
                t[r][art0 + r] = T::one();
                basis[r] = art0 + r;
            } else {
                basis[r] = slack;
            }
            slack += 1;
        }
    }
    // Reduced costs of "minimize the sum of basic artificials".
    let mut cost = vec![T::zero(); width];
    for r in 0..rows {
        if basis[r] >= art0 {
            for j in (0..art0).chain([width - 1]) {
                cost[j].sub_mul(&T::one(), &t[r][j]);
            }
        }
    }
    for pivots in 0.. {
        let Some(enter) = (0..width - 1).find(|&j| cost[j].is_neg()) else {
            break;
        };
        if pivots == max_pivots {
            return Phase1::Stalled;
        }
        let mut leave: Option<(usize, T)> = None;
        for r in 0..rows {
            if t[r][enter].is_pos() {
                let ratio = t[r][width - 1].div(&t[r][enter]);
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // The phase-one objective is bounded below by zero, so a missing
        // leaving row is a rounding artifact.
        let Some((pr, _)) = leave else {
            return Phase1::Stalled;
        };
        pivot(&mut t, &mut cost, pr, enter);
        basis[pr] = enter;
    }
    // -cost[rhs] is the remaining artificial mass.
    if !cost[width - 1].is_nil() {
        return Phase1::Infeasible;
    }
    let mut x = vec![T::zero(); vars];
    for r in 0..rows {
        if basis[r] < vars {
            x[basis[r]] = t[r][width - 1].clone();
        }
    }
    Phase1::Feasible(x)
}

fn pivot<T: Scalar>(t: &mut [Vec<T>], cost: &mut [T], pr: usize, pc: usize) {
    let p = t[pr][pc].clone();
    for v in t[pr].iter_mut() {
        *v = v.div(&p);
    }
    let row = t[pr].clone();
    for (r, other) in t.iter_mut().enumerate() {
        if r != pr && !other[pc].is_nil() {
            let f = other[pc].clone();
            for (o, v) in other.iter_mut().zip(&row) {
                if !v.is_nil() {
                    o.sub_mul(&f, v);
                }
            }
        }
    }
    if !cost[pc].is_nil() {
        let f = cost[pc].clone();
        for (o, v) in cost.iter_mut().zip(&row) {
            if !v.is_nil() {
                o.sub_mul(&f, v);
            }
        }
    }
}
