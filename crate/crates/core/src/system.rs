//! Directed transition systems: a finite state set with nonnegatively
//! weighted admissible one-step moves.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index of a state, `0..n_states`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for StateId {
    fn from(i: usize) -> Self {
        StateId(i)
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One admissible unit step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: StateId,
    pub dst: StateId,
    pub cost: f64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, cost: f64) -> Self {
        Edge {
            src: StateId(src),
            dst: StateId(dst),
            cost,
        }
    }
}

/// Outcome of [`DirectedTransitionSystem::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// Minimum cost over edges joining distinct states; `None` when there are
    /// no such edges. Plays the role of the constant in `L(x, v) >= c |v|`.
    pub min_positive_cost: Option<f64>,
    /// Set when some step between distinct states is free, so zero energy no
    /// longer implies equal states.
    pub identity_warning: bool,
}

/// Immutable after construction. Edge order is preserved for output;
/// solvers walk an adjacency list sorted by destination.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedTransitionSystem {
    n_states: usize,
    edges: Vec<Edge>,
    labels: Option<Vec<String>>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl DirectedTransitionSystem {
    /// Builds the system without validating it; see [`Self::validate`].
    pub fn new(n_states: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); n_states];
        for e in &edges {
            let (s, d) = (e.src.0, e.dst.0);
            // self-loops never improve on the constant trajectory
            if s < n_states && d < n_states && s != d {
                adjacency[s].push((d, e.cost));
            }
        }
        for row in &mut adjacency {
            row.sort_by_key(|&(d, _)| d);
        }
        DirectedTransitionSystem {
            n_states,
            edges,
            labels: None,
            adjacency,
        }
    }

    pub fn from_triples(n_states: usize, triples: &[(usize, usize, f64)]) -> Self {
        Self::new(
            n_states,
            triples
                .iter()
                .map(|&(s, d, c)| Edge::new(s, d, c))
                .collect(),
        )
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Outgoing inter-state moves of `s` as `(dst, cost)`, ascending `dst`.
    pub fn successors(&self, s: StateId) -> &[(usize, f64)] {
        &self.adjacency[s.0]
    }

    /// Cost of the direct edge `src -> dst`, if present (self-loops included).
    pub fn edge_cost(&self, src: StateId, dst: StateId) -> Option<f64> {
        if src == dst {
            return self
                .edges
                .iter()
                .find(|e| e.src == src && e.dst == dst)
                .map(|e| e.cost);
        }
        let row = self.adjacency.get(src.0)?;
        row.binary_search_by_key(&dst.0, |&(d, _)| d)
            .ok()
            .map(|i| row[i].1)
    }

    pub fn check_state(&self, s: StateId) -> Result<()> {
        if s.0 < self.n_states {
            Ok(())
        } else {
            Err(Error::InvalidState {
                state: s,
                n_states: self.n_states,
            })
        }
    }

    /// Accepts iff every edge is in range with a finite cost `>= 0` and no
    /// `(src, dst)` pair repeats.
    pub fn validate(&self) -> Result<ValidationReport> {
        let mut seen = HashSet::with_capacity(self.edges.len());
        let mut min_cost: Option<f64> = None;
        for e in &self.edges {
            let (src, dst) = (e.src.0, e.dst.0);
            if src >= self.n_states || dst >= self.n_states {
                return Err(Error::EdgeOutOfRange {
                    src,
                    dst,
                    n_states: self.n_states,
                });
            }
            if !e.cost.is_finite() {
                return Err(Error::NonFiniteCost { src, dst });
            }
            if e.cost < 0.0 {
                return Err(Error::NegativeCost {
                    src,
                    dst,
                    cost: e.cost,
                });
            }
            if !seen.insert((src, dst)) {
                return Err(Error::DuplicateEdge { src, dst });
            }
            if src != dst {
                min_cost = Some(min_cost.map_or(e.cost, |m| m.min(e.cost)));
            }
        }
        Ok(ValidationReport {
            min_positive_cost: min_cost,
            identity_warning: min_cost == Some(0.0),
        })
    }
}

/// Free-function form of [`DirectedTransitionSystem::validate`].
pub fn validate_system(sys: &DirectedTransitionSystem) -> Result<ValidationReport> {
    sys.validate()
}

/// A discrete trajectory: at least one state, consecutive states joined by
/// edges when admissible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<StateId>", into = "Vec<StateId>")]
pub struct TrajectoryPath(Vec<StateId>);

impl TrajectoryPath {
    pub fn new(states: Vec<StateId>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidArgument(
                "a trajectory needs at least one state".into(),
            ));
        }
        Ok(TrajectoryPath(states))
    }

    pub fn from_indices(states: &[usize]) -> Result<Self> {
        Self::new(states.iter().copied().map(StateId).collect())
    }

    /// The constant trajectory at `s`.
    pub fn at(s: StateId) -> Self {
        TrajectoryPath(vec![s])
    }

    pub fn states(&self) -> &[StateId] {
        &self.0
    }

    pub fn start(&self) -> StateId {
        self.0[0]
    }

    pub fn end(&self) -> StateId {
        *self.0.last().expect("nonempty by construction")
    }

    pub fn n_steps(&self) -> usize {
        self.0.len() - 1
    }

    /// `self` followed by `other`; `None` unless `other` starts where `self` ends.
    pub fn concat(&self, other: &TrajectoryPath) -> Option<TrajectoryPath> {
        if self.end() != other.start() {
            return None;
        }
        let mut states = self.0.clone();
        states.extend_from_slice(&other.0[1..]);
        Some(TrajectoryPath(states))
    }
}

impl TryFrom<Vec<StateId>> for TrajectoryPath {
    type Error = Error;

    fn try_from(v: Vec<StateId>) -> Result<Self> {
        TrajectoryPath::new(v)
    }
}

impl From<TrajectoryPath> for Vec<StateId> {
    fn from(p: TrajectoryPath) -> Self {
        p.0
    }
}
