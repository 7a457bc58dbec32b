//! Exhaustive guarantee checking on a grid.
//!
//! For a gadget with its inputs held at grid values, every profile of its
//! own players on the internal grid is a candidate; the accepted ones are the
//! ε-WSNE of the gadget with inputs clamped. Rather than enumerating the
//! product of all internal grids, each primitive is solved locally (it has
//! at most two players of its own) and composite gadgets propagate the sets
//! of reachable wire values through their children. Primitives only read
//! their inputs and their own players, so this projection yields exactly
//! the output values of accepted profiles.

use std::collections::{BTreeSet, HashMap, HashSet};

use std::rc::Rc;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use super::build::standalone;
use super::catalog::check_guarantee;
use super::circuit::{GadgetCircuit, GadgetKind};
use crate::error::{Error, Result};
use crate::rational::{format, Rational};

type Q = Ratio<i64>;

fn small(r: &Rational) -> Result<Q> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) if n.abs() < 1 << 40 && d < 1 << 20 => Ok(Q::new(n, d)),
        _ => Err(Error::param(format!("{} is too large for a grid sweep", format(r)))),
    }
}

/// Grid index for a value `k / denominator`, if `step` divides it.
fn grid_denominator(step: &Rational) -> Result<u16> {
    let inv = step.recip();
    if *step <= Rational::zero() || !inv.is_integer() {
        return Err(Error::param("grid step must be 1/G for a positive integer G"));
    }
    inv.to_integer()
        .to_u16()
        .filter(|&g| g <= 2000)
        .ok_or_else(|| Error::param("grid too fine (G > 2000)"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub eps: Rational,
    /// Step of the input grid; must be a multiple of `grid_step`.
    pub input_step: Rational,
    /// Step of the grid for the gadget's own players.
    pub grid_step: Rational,
}

impl SweepConfig {
    pub fn new(eps: Rational, input_step: Rational, grid_step: Rational) -> Self {
        SweepConfig {
            eps,
            input_step,
            grid_step,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepViolation {
    pub inputs: Vec<Rational>,
    pub outputs: Vec<Rational>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub kind: GadgetKind,
    pub eps: Rational,
    /// Number of input grid points examined.
    pub input_cases: usize,
    /// Total number of (input point, reachable output) pairs checked.
    pub outcomes: usize,
    /// Input points with no accepted internal profile on the grid.
    pub empty_cases: usize,
    pub violation_count: usize,
    /// First few violations, for diagnostics.
    pub violations: Vec<SweepViolation>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// A primitive gadget's local game: for each own player, the payoff
/// contributions from inputs or from the other own player. Entries are
/// scaled by the common denominator `scale` of the entries and of ε.
#[derive(Debug, Clone)]
struct LocalGame {
    players: Vec<Vec<(Source, [[i64; 2]; 2])>>,
    /// ε times the common denominator.
    eps: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Source {
    Input(usize),
    Own(usize),
}

type OutputSet = Rc<Vec<Vec<u16>>>;

/// Most wires a composite keeps alive at once during propagation.
const MAX_LIVE: usize = 8;

/// Values of the live wires, 16 bits each.
type Env = u128;

/// Multiply-xorshift hasher for packed environments; SipHash dominates the
/// sweep's running time otherwise.
#[derive(Default)]
struct EnvHasher(u64);

impl std::hash::Hasher for EnvHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(u64::from(b));
        }
    }

    fn write_u64(&mut self, v: u64) {
        let x = (self.0 ^ v).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        self.0 = x ^ (x >> 29);
    }

    fn write_u128(&mut self, v: u128) {
        self.write_u64(v as u64);
        self.write_u64((v >> 64) as u64);
    }
}

type EnvSet = HashSet<Env, std::hash::BuildHasherDefault<EnvHasher>>;

fn get(env: Env, i: usize) -> u16 {
    (env >> (16 * i)) as u16
}

fn put(env: &mut Env, i: usize, v: u16) {
    *env |= u128::from(v) << (16 * i);
}

/// Precomputed data flow of one composite gadget.
#[derive(Debug)]
struct Plan {
    /// For each distinct input player, its index in the record's inputs.
    first_inputs: Vec<usize>,
    steps: Vec<Step>,
    /// Positions of the outputs in the final live set.
    outputs: Vec<usize>,
}

#[derive(Debug)]
struct Step {
    child_kind: usize,
    /// Position in the current live set of each child input.
    inputs: Vec<usize>,
    /// Each next live wire comes from the current env or a child output.
    next: Vec<Slot>,
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Env(usize),
    Out(usize),
}

/// Memoizing evaluator over one standalone circuit.
pub struct Sweeper {
    circuit: GadgetCircuit,
    top: usize,
    g: u16,
    eps: Q,
    /// Kind index of every gadget record.
    kind_of: Vec<usize>,
    /// A record of each kind index.
    representative: Vec<usize>,
    local: HashMap<usize, Rc<LocalGame>>,
    plans: HashMap<usize, Rc<Plan>>,
    memo: HashMap<(usize, Vec<u16>), OutputSet>,
}

impl Sweeper {
    pub fn new(kind: &GadgetKind, eps: &Rational, grid_step: &Rational) -> Result<Self> {
        let g = grid_denominator(grid_step)?;
        let (circuit, _, _) = standalone(kind)?;
        let mut index: HashMap<GadgetKind, usize> = HashMap::new();
        let mut representative = Vec::new();
        let mut kind_of = Vec::with_capacity(circuit.gadgets().len());
        for rec in circuit.gadgets() {
            if rec.inputs.iter().any(|w| w.strategy != 1) {
                return Err(Error::param("grid sweeps need binary wires"));
            }
            let next = index.len();
            let k = *index.entry(rec.kind.clone()).or_insert(next);
            if k == representative.len() {
                representative.push(rec.id);
            }
            kind_of.push(k);
        }
        Ok(Sweeper {
            top: 0,
            g,
            eps: small(eps)?,
            circuit,
            kind_of,
            representative,
            local: HashMap::new(),
            plans: HashMap::new(),
            memo: HashMap::new(),
        })
    }

    pub fn grid(&self) -> u16 {
        self.g
    }

    /// Output tuples (as grid indices) reachable with inputs at the given
    /// grid indices.
    pub fn reachable(&mut self, inputs: &[u16]) -> Result<OutputSet> {
        let k = self.kind_of[self.top];
        self.reach(k, inputs)
    }

    fn reach(&mut self, kind: usize, inputs: &[u16]) -> Result<OutputSet> {
        if let Some(hit) = self.memo.get(&(kind, inputs.to_vec())) {
            return Ok(hit.clone());
        }
        let id = self.representative[kind];
        let result = if self.circuit.gadget(id).is_primitive() {
            self.reach_primitive(id, kind, inputs)?
        } else {
            self.reach_composite(id, kind, inputs)?
        };
        let result = Rc::new(result);
        self.memo.insert((kind, inputs.to_vec()), result.clone());
        Ok(result)
    }

    fn local_game(&mut self, id: usize, kind: usize) -> Result<Rc<LocalGame>> {
        if let Some(l) = self.local.get(&kind) {
            return Ok(l.clone());
        }
        let rec = self.circuit.gadget(id);
        let own: Vec<usize> = rec.outputs.iter().chain(&rec.aux).copied().collect();
        let mut raw = Vec::with_capacity(own.len());
        let mut scale = *self.eps.denom();
        for &x in &own {
            let mut sources = Vec::new();
            for (&(_, to), m) in self.circuit.edges().range((x, 0)..(x + 1, 0)) {
                let src = if let Some(k) = own.iter().position(|&o| o == to) {
                    Source::Own(k)
                } else if let Some(k) = rec.inputs.iter().position(|w| w.player == to) {
                    Source::Input(k)
                } else {
                    return Err(Error::param(format!(
                        "player {x} of {} reads player {to} outside the gadget",
                        rec.kind
                    )));
                };
                let e = |r, c| small(m.get(r, c));
                let q = [[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]];
                for v in q.iter().flatten() {
                    scale = num_integer::lcm(scale, *v.denom());
                }
                sources.push((src, q));
            }
            raw.push(sources);
        }
        if scale > 1 << 24 {
            return Err(Error::param("payoff denominators too large for a grid sweep"));
        }
        let int_of = |q: &Q| (q * scale).to_integer();
        let players = raw
            .iter()
            .map(|sources| {
                sources
                    .iter()
                    .map(|(src, q)| {
                        (*src, [[int_of(&q[0][0]), int_of(&q[0][1])], [int_of(&q[1][0]), int_of(&q[1][1])]])
                    })
                    .collect()
            })
            .collect();
        let l = Rc::new(LocalGame {
            players,
            eps: int_of(&self.eps),
        });
        self.local.insert(kind, l.clone());
        Ok(l)
    }

    /// (strategy 0 is an ε-best response, strategy 1 is an ε-best response),
    /// computed on payoffs scaled by the grid size and common denominator.
    fn flags(&self, local: &LocalGame, me: usize, inputs: &[u16], own: &[u16]) -> (bool, bool) {
        let g = i64::from(self.g);
        let mut u = [0i64; 2];
        for (src, m) in &local.players[me] {
            let v = i64::from(match *src {
                Source::Input(k) => inputs[k],
                Source::Own(k) => own[k],
            });
            for (r, ur) in u.iter_mut().enumerate() {
                *ur += m[r][0] * (g - v) + m[r][1] * v;
            }
        }
        let eps = local.eps * g;
        (u[0] + eps >= u[1], u[1] + eps >= u[0])
    }

    fn accepts(&self, v: u16, (s0, s1): (bool, bool)) -> bool {
        (v == self.g || s0) && (v == 0 || s1)
    }

    fn reach_primitive(&mut self, id: usize, kind: usize, inputs: &[u16]) -> Result<Vec<Vec<u16>>> {
        let local = self.local_game(id, kind)?;
        let g = self.g;
        let mut out = Vec::new();
        match local.players.len() {
            1 => {
                let f = self.flags(&local, 0, inputs, &[]);
                out.extend((0..=g).filter(|&v| self.accepts(v, f)).map(|v| vec![v]));
            }
            2 => {
                // Flags of each player as a function of the other's value.
                let table = |me: usize| -> Vec<(bool, bool)> {
                    (0..=g)
                        .map(|other| {
                            let mut own = [0u16; 2];
                            own[1 - me] = other;
                            self.flags(&local, me, inputs, &own)
                        })
                        .collect()
                };
                let (t0, t1) = (table(0), table(1));
                // Player 0's acceptance only depends on the flag pair it sees,
                // so group player 1's values by (class, flags of player 0).
                let mut kinds: Vec<(u8, (bool, bool))> = Vec::new();
                for v1 in 0..=g {
                    let class = if v1 == 0 { 0 } else if v1 == g { 2 } else { 1 };
                    let key = (class, t0[v1 as usize]);
                    if !kinds.contains(&key) {
                        kinds.push(key);
                    }
                }
                for v0 in 0..=g {
                    let (s0, s1) = t1[v0 as usize];
                    let ok = kinds.iter().any(|&(class, f0)| {
                        let v1_ok = match class {
                            0 => s0,
                            2 => s1,
                            _ => s0 && s1,
                        };
                        v1_ok && self.accepts(v0, f0)
                    });
                    if ok {
                        out.push(vec![v0]);
                    }
                }
            }
            n => return Err(Error::param(format!("primitive with {n} own players"))),
        }
        Ok(out)
    }

    fn plan(&mut self, id: usize, kind: usize) -> Result<Rc<Plan>> {
        if let Some(p) = self.plans.get(&kind) {
            return Ok(p.clone());
        }
        let rec = self.circuit.gadget(id).clone();
        let mut live: Vec<usize> = Vec::new();
        let mut first_inputs = Vec::new();
        for (k, w) in rec.inputs.iter().enumerate() {
            if !live.contains(&w.player) {
                live.push(w.player);
                first_inputs.push(k);
            }
        }
        let mut steps = Vec::with_capacity(rec.children.len());
        for (ci, &child) in rec.children.iter().enumerate() {
            let crec = self.circuit.gadget(child);
            let needed: HashSet<usize> = rec.children[ci + 1..]
                .iter()
                .flat_map(|&c| self.circuit.gadget(c).inputs.iter().map(|w| w.player))
                .chain(rec.outputs.iter().copied())
                .collect();
            let pos = |live: &[usize], p: usize| live.iter().position(|&q| q == p).unwrap();
            let inputs = crec.inputs.iter().map(|w| pos(&live, w.player)).collect();
            let mut next_live = Vec::new();
            let mut next = Vec::new();
            for &p in &live {
                if needed.contains(&p) && !crec.outputs.contains(&p) {
                    next_live.push(p);
                    next.push(Slot::Env(pos(&live, p)));
                }
            }
            for (k, &p) in crec.outputs.iter().enumerate() {
                if needed.contains(&p) {
                    next_live.push(p);
                    next.push(Slot::Out(k));
                }
            }
            if next_live.len() > MAX_LIVE {
                return Err(Error::param("composite keeps too many wires alive to sweep"));
            }
            steps.push(Step {
                child_kind: self.kind_of[child],
                inputs,
                next,
            });
            live = next_live;
        }
        let outputs = rec
            .outputs
            .iter()
            .map(|&o| live.iter().position(|&q| q == o).unwrap())
            .collect();
        let plan = Rc::new(Plan {
            first_inputs,
            steps,
            outputs,
        });
        self.plans.insert(kind, plan.clone());
        Ok(plan)
    }

    fn reach_composite(&mut self, id: usize, kind: usize, inputs: &[u16]) -> Result<Vec<Vec<u16>>> {
        let plan = self.plan(id, kind)?;
        let mut start: Env = 0;
        for (slot, &k) in plan.first_inputs.iter().enumerate() {
            put(&mut start, slot, inputs[k]);
        }
        let mut envs: Vec<Env> = vec![start];
        let mut child_in = Vec::new();
        for step in &plan.steps {
            // Group by the child's inputs so each child set is fetched once,
            // keeping only the distinct values of the wires that stay live.
            let mut groups: HashMap<Vec<u16>, EnvSet> = HashMap::new();
            for env in envs {
                child_in.clear();
                child_in.extend(step.inputs.iter().map(|&i| get(env, i)));
                let mut kept: Env = 0;
                for (slot, src) in step.next.iter().enumerate() {
                    if let Slot::Env(i) = *src {
                        put(&mut kept, slot, get(env, i));
                    }
                }
                match groups.get_mut(child_in.as_slice()) {
                    Some(set) => {
                        set.insert(kept);
                    }
                    None => {
                        let mut set = EnvSet::default();
                        set.insert(kept);
                        groups.insert(child_in.clone(), set);
                    }
                }
            }
            let mut next = EnvSet::default();
            for (cin, members) in groups {
                let outs = self.reach(step.child_kind, &cin)?;
                for o in outs.iter() {
                    let mut fresh: Env = 0;
                    for (slot, src) in step.next.iter().enumerate() {
                        if let Slot::Out(k) = *src {
                            put(&mut fresh, slot, o[k]);
                        }
                    }
                    next.extend(members.iter().map(|&kept| kept | fresh));
                }
            }
            envs = next.into_iter().collect();
        }
        let mut out: Vec<Vec<u16>> = envs
            .into_iter()
            .map(|env| plan.outputs.iter().map(|&i| get(env, i)).collect())
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Output values reachable in grid ε-WSNE of a standalone gadget of `kind`
/// with its inputs clamped to `inputs` (which must lie on the grid).
pub fn reachable_outputs(
    kind: &GadgetKind,
    inputs: &[Rational],
    eps: &Rational,
    grid_step: &Rational,
) -> Result<BTreeSet<Vec<Rational>>> {
    let mut s = Sweeper::new(kind, eps, grid_step)?;
    let g = Rational::from_integer(s.grid().into());
    let idx = inputs
        .iter()
        .map(|v| {
            let x = v * &g;
            if !x.is_integer() || *v < Rational::zero() || x > g {
                return Err(Error::param(format!("input {} is off the grid", format(v))));
            }
            Ok(x.to_integer().to_u16().unwrap())
        })
        .collect::<Result<Vec<_>>>()?;
    let out = s.reachable(&idx)?;
    Ok(out
        .iter()
        .map(|t| t.iter().map(|&v| Rational::new(v.into(), g.to_integer())).collect())
        .collect())
}

/// Checks the guarantee of `kind` at every input grid point against every
/// output reachable in an accepted internal profile.
pub fn sweep(kind: &GadgetKind, config: &SweepConfig) -> Result<SweepReport> {
    let mut s = Sweeper::new(kind, &config.eps, &config.grid_step)?;
    let g = s.grid();
    let stride_q = &config.input_step / &config.grid_step;
    if !stride_q.is_integer() || stride_q <= Rational::zero() {
        return Err(Error::param("input step must be a positive multiple of the grid step"));
    }
    let stride = stride_q.to_integer().to_u16().unwrap_or(u16::MAX);
    let points: Vec<u16> = (0..=g).step_by(stride.max(1).into()).collect();
    let value = |v: u16| Rational::new(v.into(), g.into());
    let arity = kind.arity();
    let mut report = SweepReport {
        kind: kind.clone(),
        eps: config.eps.clone(),
        input_cases: 0,
        outcomes: 0,
        empty_cases: 0,
        violation_count: 0,
        violations: Vec::new(),
    };
    let mut idx = vec![0usize; arity];
    loop {
        let point: Vec<u16> = idx.iter().map(|&i| points[i]).collect();
        let inputs: Vec<Rational> = point.iter().map(|&v| value(v)).collect();
        let outs = s.reachable(&point)?;
        report.input_cases += 1;
        report.outcomes += outs.len();
        if outs.is_empty() {
            report.empty_cases += 1;
        }
        for t in outs.iter() {
            let outputs: Vec<Rational> = t.iter().map(|&v| value(v)).collect();
            if let Some(reason) = check_guarantee(kind, &config.eps, &inputs, &outputs) {
                report.violation_count += 1;
                if report.violations.len() < 10 {
                    report.violations.push(SweepViolation {
                        inputs: inputs.clone(),
                        outputs,
                        reason,
                    });
                }
            }
        }
        // Odometer over the input grid.
        let mut k = 0;
        while k < arity {
            idx[k] += 1;
            if idx[k] < points.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == arity {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Game;
    use crate::profile::{MixedProfile, MixedStrategy};
    use crate::rational::ratio;
    use crate::verify::verify_wsne_clamped;

    /// Brute force over both own players of a two-player primitive.
    fn naive(kind: &GadgetKind, inputs: &[Rational], eps: &Rational, g: i64) -> BTreeSet<Vec<Rational>> {
        let (c, wires, outs) = standalone(kind).unwrap();
        let game = c.combine().unwrap();
        let clamped = c.free_players();
        let own: Vec<usize> = (wires.len()..game.num_players()).collect();
        assert!(own.len() <= 2);
        let mut found = BTreeSet::new();
        let total = (g + 1).pow(own.len() as u32);
        for code in 0..total {
            let mut strategies: Vec<MixedStrategy> =
                inputs.iter().map(|v| MixedStrategy::binary(v.clone()).unwrap()).collect();
            let mut rest = code;
            for _ in &own {
                strategies.push(MixedStrategy::binary(ratio(rest % (g + 1), g)).unwrap());
                rest /= g + 1;
            }
            let prof = MixedProfile::new(strategies);
            if verify_wsne_clamped(&game, &prof, eps, &clamped).unwrap().passed() {
                found.insert(outs.iter().map(|w| prof.strategy(w.player).value().clone()).collect());
            }
        }
        found
    }

    #[test]
    fn projection_matches_brute_force() {
        let eps = ratio(1, 20);
        let step = ratio(1, 40);
        let cases = [
            (GadgetKind::Threshold(ratio(1, 2)), vec![ratio(1, 2)]),
            (GadgetKind::Compare, vec![ratio(3, 10), ratio(13, 40)]),
            (GadgetKind::Complement, vec![ratio(1, 40)]),
            (GadgetKind::Mask, vec![ratio(1, 2), ratio(1, 40)]),
            (GadgetKind::Minus, vec![ratio(1, 4), ratio(3, 4)]),
            (GadgetKind::Assign(ratio(1, 3)), vec![]),
        ];
        for (kind, inputs) in cases {
            let fast = reachable_outputs(&kind, &inputs, &eps, &step).unwrap();
            assert_eq!(fast, naive(&kind, &inputs, &eps, 40), "{kind}");
            assert!(!fast.is_empty());
        }
    }

    #[test]
    fn threshold_sweep_passes() {
        let cfg = SweepConfig::new(ratio(1, 20), ratio(1, 20), ratio(1, 100));
        let r = sweep(&GadgetKind::Threshold(ratio(1, 2)), &cfg).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.input_cases, 21);
        let at_half = reachable_outputs(&GadgetKind::Threshold(ratio(1, 2)), &[ratio(1, 2)], &ratio(1, 20), &ratio(1, 100)).unwrap();
        assert_eq!(at_half.len(), 101);
    }

    #[test]
    fn detects_a_false_claim() {
        // With eps larger than the threshold margin the sweep must find
        // outputs the claimed guarantee at a smaller eps would reject.
        let kind = GadgetKind::Complement;
        let outs = reachable_outputs(&kind, &[ratio(1, 2)], &ratio(1, 10), &ratio(1, 100)).unwrap();
        assert!(outs.iter().any(|o| check_guarantee(&kind, &ratio(1, 20), &[ratio(1, 2)], o).is_some()));
        assert!(outs.iter().all(|o| check_guarantee(&kind, &ratio(1, 10), &[ratio(1, 2)], o).is_none()));
    }

    #[test]
    fn lifted_point_is_reachable() {
        let kind = GadgetKind::Max;
        let inputs = [ratio(1, 5), ratio(7, 10)];
        let outs = reachable_outputs(&kind, &inputs, &ratio(1, 20), &ratio(1, 100)).unwrap();
        assert!(outs.contains(&vec![ratio(7, 10)]));
    }
}
