use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::game::{PlayerRole, PolymatrixGame, Role};
use crate::mult::Construction;
use crate::matrix::Matrix;
use crate::rational::{format, Rational};

/// A value carried by the probability of one pure strategy of a player.
///
/// For binary players the tap is strategy 1; non-binary players (e.g. the
/// original players of a normal-form game) are tapped at any strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wire {
    pub player: usize,
    pub strategy: usize,
}

impl Wire {
    pub fn binary(player: usize) -> Wire {
        Wire {
            player,
            strategy: 1,
        }
    }

    pub fn tap(player: usize, strategy: usize) -> Wire {
        Wire { player, strategy }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetKind {
    Threshold(Rational),
    And,
    ScaledSum { zeta: Rational, arity: usize },
    Compare,
    Minus,
    Complement,
    Assign(Rational),
    Scale(Rational),
    Mask,
    Max,
    Min,
    Median,
    BitExtract(u32),
    MultUnary(Rational),
    MultBrittle(Rational),
    MultRobust(Rational),
    MultChain {
        eps: Rational,
        arity: usize,
        construction: Construction,
    },
}

impl GadgetKind {
    pub fn name(&self) -> &'static str {
        match self {
            GadgetKind::Threshold(_) => "threshold",
            GadgetKind::And => "and",
            GadgetKind::ScaledSum { .. } => "scaled-sum",
            GadgetKind::Compare => "compare",
            GadgetKind::Minus => "minus",
            GadgetKind::Complement => "complement",
            GadgetKind::Assign(_) => "assign",
            GadgetKind::Scale(_) => "scale",
            GadgetKind::Mask => "mask",
            GadgetKind::Max => "max",
            GadgetKind::Min => "min",
            GadgetKind::Median => "median",
            GadgetKind::BitExtract(_) => "bit-extract",
            GadgetKind::MultUnary(_) => "mult-unary",
            GadgetKind::MultBrittle(_) => "mult-brittle",
            GadgetKind::MultRobust(_) => "mult-robust",
            GadgetKind::MultChain { .. } => "mult-chain",
        }
    }

    /// Primitive gadgets emit payoff matrices directly; the rest are
    /// combinations of other gadgets.
    pub fn is_primitive(&self) -> bool {
        matches!(
            self,
            GadgetKind::Threshold(_)
                | GadgetKind::And
                | GadgetKind::ScaledSum { .. }
                | GadgetKind::Compare
                | GadgetKind::Minus
                | GadgetKind::Complement
                | GadgetKind::Assign(_)
                | GadgetKind::Scale(_)
                | GadgetKind::Mask
        )
    }

    /// Number of input wires the kind takes.
    pub fn arity(&self) -> usize {
        match self {
            GadgetKind::Assign(_) => 0,
            GadgetKind::Threshold(_)
            | GadgetKind::Complement
            | GadgetKind::Scale(_)
            | GadgetKind::BitExtract(_) => 1,
            GadgetKind::ScaledSum { arity, .. } | GadgetKind::MultChain { arity, .. } => *arity,
            GadgetKind::Median => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetKind::Threshold(z) | GadgetKind::Assign(z) | GadgetKind::Scale(z) => {
                write!(f, "{}({})", self.name(), format(z))
            }
            GadgetKind::ScaledSum { zeta, arity } => {
                write!(f, "{}({}, {})", self.name(), format(zeta), arity)
            }
            GadgetKind::BitExtract(b) => write!(f, "{}({b})", self.name()),
            GadgetKind::MultUnary(e) | GadgetKind::MultBrittle(e) | GadgetKind::MultRobust(e) => {
                write!(f, "{}(eps={})", self.name(), format(e))
            }
            GadgetKind::MultChain {
                eps,
                arity,
                construction,
            } => write!(
                f,
                "{}({}, eps={}, m={})",
                self.name(),
                construction.name(),
                format(eps),
                arity
            ),
            _ => f.write_str(self.name()),
        }
    }
}

/// One gadget instance inside a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetRecord {
    pub id: usize,
    pub kind: GadgetKind,
    pub inputs: Vec<Wire>,
    pub outputs: Vec<usize>,
    /// Auxiliary players owned directly by this gadget (primitives only).
    pub aux: Vec<usize>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

impl GadgetRecord {
    pub fn is_primitive(&self) -> bool {
        self.kind.is_primitive()
    }
}

/// A precondition on ε that a gadget needs but cannot enforce at build time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precondition {
    pub gadget: usize,
    pub max_eps: Rational,
    pub description: String,
}

/// A polymatrix game under construction, together with its gadget structure.
#[derive(Debug, Clone, Default)]
pub struct GadgetCircuit {
    counts: Vec<usize>,
    roles: Vec<PlayerRole>,
    edges: BTreeMap<(usize, usize), Matrix>,
    gadgets: Vec<GadgetRecord>,
    open: Vec<usize>,
    preconditions: Vec<Precondition>,
}

impl GadgetCircuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_player(&mut self, strategies: usize, role: PlayerRole) -> usize {
        self.counts.push(strategies);
        self.roles.push(role);
        self.counts.len() - 1
    }

    /// A fresh binary player whose value is fixed from outside the circuit.
    pub fn add_input(&mut self, label: impl Into<String>) -> Wire {
        Wire::binary(self.add_player(2, PlayerRole::new(Role::Plain, label)))
    }

    pub fn set_role(&mut self, player: usize, role: PlayerRole) {
        self.roles[player] = role;
    }

    pub fn num_players(&self) -> usize {
        self.counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn roles(&self) -> &[PlayerRole] {
        &self.roles
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.edges
    }

    pub fn gadgets(&self) -> &[GadgetRecord] {
        &self.gadgets
    }

    pub fn gadget(&self, id: usize) -> &GadgetRecord {
        &self.gadgets[id]
    }

    pub fn preconditions(&self) -> &[Precondition] {
        &self.preconditions
    }

    /// Adds `m` to player `from`'s payoff matrix against player `to`.
    pub fn add_edge(&mut self, from: usize, to: usize, m: Matrix) -> Result<()> {
        if from == to {
            return Err(Error::dims(format!("self-edge on player {from}")));
        }
        if from >= self.counts.len() || to >= self.counts.len() {
            return Err(Error::IndexOutOfRange {
                index: from.max(to),
                limit: self.counts.len(),
            });
        }
        if m.rows() != self.counts[from] || m.cols() != self.counts[to] {
            return Err(Error::dims(format!(
                "edge ({from}, {to}) is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                self.counts[from],
                self.counts[to]
            )));
        }
        match self.edges.get_mut(&(from, to)) {
            Some(existing) => existing.add_assign(&m)?,
            None => {
                self.edges.insert((from, to), m);
            }
        }
        Ok(())
    }

    /// Adds a 2x2 gadget matrix of binary player `from` against the value on
    /// `tap`. The tapped strategy receives column 1; every other strategy of
    /// the tapped player receives column 0.
    pub fn add_tap_edge(&mut self, from: usize, tap: Wire, m: &Matrix) -> Result<()> {
        let n = *self.counts.get(tap.player).ok_or(Error::IndexOutOfRange {
            index: tap.player,
            limit: self.counts.len(),
        })?;
        if tap.strategy >= n {
            return Err(Error::IndexOutOfRange {
                index: tap.strategy,
                limit: n,
            });
        }
        let mut embedded = Matrix::zeros(m.rows(), n);
        for r in 0..m.rows() {
            for c in 0..n {
                let src = usize::from(c == tap.strategy);
                embedded.set(r, c, m.get(r, src).clone());
            }
        }
        self.add_edge(from, tap.player, embedded)
    }

    pub(crate) fn begin(&mut self, kind: GadgetKind, inputs: Vec<Wire>) -> usize {
        let id = self.gadgets.len();
        let parent = self.open.last().copied();
        if let Some(p) = parent {
            self.gadgets[p].children.push(id);
        }
        self.gadgets.push(GadgetRecord {
            id,
            kind,
            inputs,
            outputs: Vec::new(),
            aux: Vec::new(),
            parent,
            children: Vec::new(),
        });
        if !self.gadgets[id].is_primitive() {
            self.open.push(id);
        }
        id
    }

    pub(crate) fn finish(&mut self, id: usize, outputs: Vec<usize>) {
        if !self.gadgets[id].is_primitive() {
            let top = self.open.pop();
            debug_assert_eq!(top, Some(id), "composite gadgets must close in order");
        }
        self.gadgets[id].outputs = outputs;
    }

    /// Fresh binary player owned by gadget `id`.
    pub(crate) fn gadget_player(&mut self, id: usize, tag: &str) -> usize {
        let label = format!("{}#{id}.{tag}", self.gadgets[id].kind.name());
        self.add_player(2, PlayerRole::new(Role::GadgetAux, label))
    }

    pub(crate) fn push_aux(&mut self, id: usize, player: usize) {
        self.gadgets[id].aux.push(player);
    }

    pub(crate) fn require(&mut self, gadget: usize, max_eps: Rational, description: String) {
        self.preconditions.push(Precondition {
            gadget,
            max_eps,
            description,
        });
    }

    /// Primitive gadgets that write player's payoffs, keyed by player.
    pub fn producers(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for g in self.gadgets.iter().filter(|g| g.is_primitive()) {
            for &p in g.outputs.iter().chain(&g.aux) {
                map.entry(p).or_default().push(g.id);
            }
        }
        map
    }

    /// Primitive gadget whose output or auxiliary player is `player`.
    pub fn output_of(&self, player: usize) -> Option<usize> {
        self.gadgets
            .iter()
            .filter(|g| g.is_primitive())
            .find(|g| g.outputs.contains(&player) || g.aux.contains(&player))
            .map(|g| g.id)
    }

    /// Players not produced by any gadget; their strategies are fixed
    /// externally when a circuit is studied on its own.
    pub fn free_players(&self) -> BTreeSet<usize> {
        let produced = self.producers();
        (0..self.num_players())
            .filter(|p| !produced.contains_key(p))
            .collect()
    }

    /// All players a gadget (including its descendants) owns.
    pub fn internal_players(&self, id: usize) -> Vec<usize> {
        let g = &self.gadgets[id];
        if g.is_primitive() {
            let mut v = g.outputs.clone();
            v.extend(&g.aux);
            return v;
        }
        let mut v: Vec<usize> = g
            .children
            .iter()
            .flat_map(|&c| self.internal_players(c))
            .collect();
        v.sort_unstable();
        v
    }

    /// Primitive gadgets in dependency order (inputs before consumers).
    pub fn topological_primitives(&self) -> Result<Vec<usize>> {
        let produced = self.producers();
        let prims: Vec<usize> = self
            .gadgets
            .iter()
            .filter(|g| g.is_primitive())
            .map(|g| g.id)
            .collect();
        let mut indegree: BTreeMap<usize, usize> = prims.iter().map(|&g| (g, 0)).collect();
        let mut consumers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &g in &prims {
            let deps: BTreeSet<usize> = self.gadgets[g]
                .inputs
                .iter()
                .filter_map(|w| produced.get(&w.player))
                .flatten()
                .copied()
                .collect();
            for d in deps {
                *indegree.get_mut(&g).unwrap() += 1;
                consumers.entry(d).or_default().push(g);
            }
        }
        let mut ready: BTreeSet<usize> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&g, _)| g)
            .collect();
        let mut order = Vec::with_capacity(prims.len());
        while let Some(g) = ready.pop_first() {
            order.push(g);
            for &c in consumers.get(&g).map(Vec::as_slice).unwrap_or(&[]) {
                let d = indegree.get_mut(&c).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.insert(c);
                }
            }
        }
        if order.len() < prims.len() {
            let stuck = indegree
                .iter()
                .find(|(_, &d)| d > 0)
                .map(|(&g, _)| g)
                .unwrap_or(0);
            return Err(Error::CycleDetected { gadget: stuck });
        }
        Ok(order)
    }

    /// Freezes the circuit into a polymatrix game.
    pub fn combine(&self) -> Result<PolymatrixGame> {
        if let Some((&player, _)) = self.producers().iter().find(|(_, ids)| ids.len() > 1) {
            return Err(Error::DuplicateOutput { player });
        }
        PolymatrixGame::new(self.counts.clone(), self.edges.clone(), self.roles.clone())
    }
}
