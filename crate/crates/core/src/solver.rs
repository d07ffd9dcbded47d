//! Least-action energies on a directed transition system.
//!
//! The energy from `x` to `y` is the infimum of accumulated step cost over
//! all admissible edge paths `x -> y`, and `Infinite` when there is none.
//! With nonnegative costs a label-setting search computes it exactly.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::{ExtendedCost, Finite, Infinite};
use crate::error::{Error, Result};
use crate::system::{DirectedTransitionSystem, StateId, TrajectoryPath};

/// Node-expansion cap for [`brute_force_energy`].
pub const DEFAULT_EXPANSION_CAP: u64 = 1_000_000;

/// All-pairs matrix of extended costs, row `x` holding energies out of `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct EnergyTable {
    n_states: usize,
    values: Vec<ExtendedCost>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    n_states: usize,
    rows: Vec<Vec<ExtendedCost>>,
}

impl TryFrom<TableRepr> for EnergyTable {
    type Error = Error;

    fn try_from(r: TableRepr) -> Result<Self> {
        let t = EnergyTable::from_rows(r.rows)?;
        if t.n_states != r.n_states {
            return Err(Error::InvalidArgument(format!(
                "n_states is {} but {} rows were given",
                r.n_states, t.n_states
            )));
        }
        Ok(t)
    }
}

impl From<EnergyTable> for TableRepr {
    fn from(t: EnergyTable) -> Self {
        TableRepr {
            n_states: t.n_states,
            rows: t.rows(),
        }
    }
}

impl EnergyTable {
    /// Diagonal zero, everything else `Infinite`.
    pub fn unreachable(n_states: usize) -> Self {
        let mut values = vec![Infinite; n_states * n_states];
        for i in 0..n_states {
            values[i * n_states + i] = Finite(0.0);
        }
        EnergyTable { n_states, values }
    }

    /// Fails unless the rows form a square matrix.
    pub fn from_rows(rows: Vec<Vec<ExtendedCost>>) -> Result<Self> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            values.extend(row);
        }
        Ok(EnergyTable {
            n_states: n,
            values,
        })
    }

    /// Convenience for fixtures: `f64::INFINITY` becomes `Infinite`.
    pub fn from_f64_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| {
                            ExtendedCost::from_f64(v).ok_or_else(|| {
                                Error::InvalidArgument(format!("{v} is not an extended cost"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn get(&self, x: usize, y: usize) -> ExtendedCost {
        self.values[x * self.n_states + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: ExtendedCost) {
        self.values[x * self.n_states + y] = v;
    }

    pub fn row(&self, x: usize) -> &[ExtendedCost] {
        &self.values[x * self.n_states..(x + 1) * self.n_states]
    }

    pub fn column(&self, y: usize) -> Vec<ExtendedCost> {
        (0..self.n_states).map(|x| self.get(x, y)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<ExtendedCost>> {
        self.values
            .chunks(self.n_states.max(1))
            .take(self.n_states)
            .map(<[ExtendedCost]>::to_vec)
            .collect()
    }

    /// Largest finite entry, `None` when all entries are infinite or the table is empty.
    pub fn max_finite(&self) -> Option<f64> {
        self.values
            .iter()
            .filter_map(|v| v.finite())
            .fold(None, |m, v| Some(m.map_or(v, |m: f64| m.max(v))))
    }

    /// Ordered pairs `x != y`, row-major.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, ExtendedCost)> + '_ {
        let n = self.n_states;
        (0..n)
            .flat_map(move |x| (0..n).map(move |y| (x, y)))
            .filter(|(x, y)| x != y)
            .map(move |(x, y)| (x, y, self.get(x, y)))
    }
}

/// Accumulated step cost along `path`; `Infinite` as soon as a step is not an edge.
pub fn trajectory_action(sys: &DirectedTransitionSystem, path: &TrajectoryPath) -> ExtendedCost {
    let mut acc = 0.0;
    for w in path.states().windows(2) {
        match sys.edge_cost(w[0], w[1]) {
            Some(c) => acc += c,
            None => return Infinite,
        }
    }
    Finite(acc)
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn dijkstra(sys: &DirectedTransitionSystem, source: usize) -> Vec<ExtendedCost> {
    let n = sys.n_states();
    let mut dist = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    // (cost, id) min-heap: equal costs pop the smaller state first
    heap.push(Reverse((Key(0.0), source)));
    while let Some(Reverse((Key(d), u))) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        for &(v, c) in sys.successors(StateId(u)) {
            let nd = d + c;
            if !settled[v] && nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((Key(nd), v)));
            }
        }
    }
    dist.into_iter()
        .zip(settled)
        .map(|(d, s)| if s { Finite(d) } else { Infinite })
        .collect()
}

/// Energies from `source` to every state.
pub fn single_source_energy(
    sys: &DirectedTransitionSystem,
    source: StateId,
) -> Result<Vec<ExtendedCost>> {
    sys.validate()?;
    sys.check_state(source)?;
    Ok(dijkstra(sys, source.0))
}

/// Every row is an independent single-source run; rows are computed in
/// parallel and assembled in source order.
pub fn all_pairs_energy(sys: &DirectedTransitionSystem) -> Result<EnergyTable> {
    sys.validate()?;
    let n = sys.n_states();
    let rows: Vec<Vec<ExtendedCost>> = (0..n).into_par_iter().map(|s| dijkstra(sys, s)).collect();
    EnergyTable::from_rows(rows)
}

/// Exhaustive minimum over simple paths `x -> y` of at most `max_hops` edges.
///
/// Independent of the production solver: it scans the raw edge list and
/// never consults the adjacency index. Exact when `max_hops >= n - 1`.
pub fn brute_force_energy(
    sys: &DirectedTransitionSystem,
    x: StateId,
    y: StateId,
    max_hops: usize,
) -> Result<ExtendedCost> {
    brute_force_energy_with_cap(sys, x, y, max_hops, DEFAULT_EXPANSION_CAP)
}

pub fn brute_force_energy_with_cap(
    sys: &DirectedTransitionSystem,
    x: StateId,
    y: StateId,
    max_hops: usize,
    cap: u64,
) -> Result<ExtendedCost> {
    sys.validate()?;
    sys.check_state(x)?;
    sys.check_state(y)?;
    if x == y {
        return Ok(Finite(0.0));
    }

    struct Search<'a> {
        sys: &'a DirectedTransitionSystem,
        target: StateId,
        max_hops: usize,
        cap: u64,
        expansions: u64,
        on_path: Vec<bool>,
        best: ExtendedCost,
    }

    impl Search<'_> {
        fn visit(&mut self, u: StateId, acc: f64, hops: usize) -> Result<()> {
            self.expansions += 1;
            if self.expansions > self.cap {
                return Err(Error::BudgetExceeded { cap: self.cap });
            }
            if u == self.target {
                self.best = self.best.min(Finite(acc));
                return Ok(());
            }
            if hops == self.max_hops {
                return Ok(());
            }
            self.on_path[u.0] = true;
            for e in self.sys.edges() {
                if e.src == u && e.dst != u && !self.on_path[e.dst.0] {
                    self.visit(e.dst, acc + e.cost, hops + 1)?;
                }
            }
            self.on_path[u.0] = false;
            Ok(())
        }
    }

    let mut search = Search {
        sys,
        target: y,
        max_hops,
        cap,
        expansions: 0,
        on_path: vec![false; sys.n_states()],
        best: Infinite,
    };
    search.visit(x, 0.0, 0)?;
    Ok(search.best)
}

/// Brute-force table, row by row; test and audit use only.
pub fn brute_force_table(sys: &DirectedTransitionSystem) -> Result<EnergyTable> {
    let n = sys.n_states();
    let hops = n.saturating_sub(1);
    let mut rows = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            row.push(brute_force_energy(sys, StateId(x), StateId(y), hops)?);
        }
        rows.push(row);
    }
    EnergyTable::from_rows(rows)
}
