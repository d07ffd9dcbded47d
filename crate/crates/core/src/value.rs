//! Goal-conditioned optimal cost-to-go by dynamic programming.
//!
//! Each edge is an action; costs are undiscounted and the goal is absorbing.
//! The fixed point is the least-action energy into the goal, which is what
//! lets this module act as an independent oracle for the solver.

use serde::{Deserialize, Serialize};

use crate::cost::{ExtendedCost, Finite, Infinite};
use crate::error::{Error, Result};
use crate::system::{DirectedTransitionSystem, StateId, TrajectoryPath};

/// Cost-to-go into `goal` from every start state. Stored as nonnegative
/// costs; the matching goal-conditioned value is its negation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostToGo {
    pub goal: StateId,
    pub n_states: usize,
    pub values: Vec<ExtendedCost>,
}

impl CostToGo {
    pub fn get(&self, s: StateId) -> ExtendedCost {
        self.values[s.0]
    }

    /// Largest `|V(s) - min_edges(cost + V(s'))|` over non-goal states;
    /// `Infinite` where one side is infinite and the other is not.
    pub fn bellman_residual(&self, sys: &DirectedTransitionSystem) -> ExtendedCost {
        let mut worst = Finite(0.0);
        for s in 0..self.values.len() {
            if s == self.goal.0 {
                continue;
            }
            let backup = backup(sys, &self.values, s);
            let r = match (self.values[s], backup) {
                (Finite(a), Finite(b)) => Finite((a - b).abs()),
                (Infinite, Infinite) => Finite(0.0),
                _ => Infinite,
            };
            if r > worst {
                worst = r;
            }
        }
        worst
    }
}

fn backup(sys: &DirectedTransitionSystem, v: &[ExtendedCost], s: usize) -> ExtendedCost {
    sys.successors(StateId(s))
        .iter()
        .fold(Infinite, |best, &(next, c)| best.min(v[next] + c))
}

fn change(old: ExtendedCost, new: ExtendedCost) -> f64 {
    match (old, new) {
        (Finite(a), Finite(b)) => (a - b).abs(),
        (Infinite, Infinite) => 0.0,
        _ => f64::INFINITY,
    }
}

/// In-place sweeps in ascending state order of `V(s) <- min(cost + V(s'))`,
/// `V(goal) = 0`, starting from `Infinite`. Returns after the first sweep whose
/// largest change is at most `tol`.
pub fn value_iteration(
    sys: &DirectedTransitionSystem,
    goal: StateId,
    tol: f64,
    max_sweeps: usize,
) -> Result<CostToGo> {
    sys.validate()?;
    sys.check_state(goal)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = sys.n_states();
    let mut v = vec![Infinite; n];
    v[goal.0] = Finite(0.0);
    let mut last_change = f64::INFINITY;
    for _ in 0..max_sweeps {
        let mut max_change = 0.0f64;
        for s in 0..n {
            if s == goal.0 {
                continue;
            }
            let new = backup(sys, &v, s);
            max_change = max_change.max(change(v[s], new));
            v[s] = new;
        }
        last_change = max_change;
        if max_change <= tol {
            return Ok(CostToGo {
                goal,
                n_states: n,
                values: v,
            });
        }
    }
    Err(Error::NoConvergence {
        sweeps: max_sweeps,
        last_change,
    })
}

/// Follows the edge minimizing `cost + V(next)` (ties to the smaller state)
/// until the goal or `max_steps`. The accumulated cost is summed from the
/// goal end backwards, the same association as the Bellman recursion, so it
/// reproduces `V(start)` bit for bit at a converged fixed point.
pub fn greedy_rollout(
    sys: &DirectedTransitionSystem,
    v: &CostToGo,
    start: StateId,
    max_steps: usize,
) -> Result<(TrajectoryPath, ExtendedCost)> {
    sys.check_state(start)?;
    if v.get(start).is_infinite() {
        return Err(Error::Stuck(start));
    }
    let mut states = vec![start];
    let mut costs = Vec::new();
    let mut current = start;
    while current != v.goal && costs.len() < max_steps {
        let mut best: Option<(ExtendedCost, usize, f64)> = None;
        for &(next, c) in sys.successors(current) {
            let q = v.values[next] + c;
            // successors are sorted, so strict improvement keeps the smaller id on ties
            if best.is_none_or(|(b, _, _)| q < b) {
                best = Some((q, next, c));
            }
        }
        match best {
            Some((q, next, c)) if q.is_finite() => {
                states.push(StateId(next));
                costs.push(c);
                current = StateId(next);
            }
            _ => return Err(Error::Stuck(current)),
        }
    }
    let total = costs.iter().rev().fold(0.0, |acc, &c| c + acc);
    Ok((TrajectoryPath::new(states)?, Finite(total)))
}
