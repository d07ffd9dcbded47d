//! Deterministic environment generators and the named fixture systems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{lift_effort_field, EffortField};
use crate::system::DirectedTransitionSystem;

pub const FIXTURE_NAMES: [&str; 2] = ["tri3", "ow2"];

/// `tri3`: 0->1:1, 1->2:2, 2->0:5, 0->2:4. `ow2`: the single edge 0->1:1.
pub fn make_fixture(name: &str) -> Result<DirectedTransitionSystem> {
    match name {
        "tri3" => Ok(DirectedTransitionSystem::from_triples(
            3,
            &[(0, 1, 1.0), (1, 2, 2.0), (2, 0, 5.0), (0, 2, 4.0)],
        )),
        "ow2" => Ok(DirectedTransitionSystem::from_triples(2, &[(0, 1, 1.0)])),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

/// 4-neighbour grid, unit spacing, additive wind. Moving along `+u` costs
/// `1 - w_u` and along `-u` costs `1 + w_u`. A door `(a, b)` lets agents
/// pass from `a` to `b` only, i.e. removes the edge `b -> a`.
pub fn make_gridworld(
    width: usize,
    height: usize,
    doors: &[(usize, usize)],
    wind: (f64, f64),
) -> Result<DirectedTransitionSystem> {
    let field = EffortField::wind(width, height, 1.0, wind)?;
    for &(a, b) in doors {
        let n = width * height;
        if a >= n || b >= n {
            return Err(Error::NonAdjacentDoor { a, b });
        }
        let (ax, ay) = ((a % width) as i64, (a / width) as i64);
        let (bx, by) = ((b % width) as i64, (b / width) as i64);
        if (ax - bx).abs() + (ay - by).abs() != 1 {
            return Err(Error::NonAdjacentDoor { a, b });
        }
    }
    let lifted = lift_effort_field(&field);
    let edges = lifted
        .edges()
        .iter()
        .copied()
        .filter(|e| !doors.iter().any(|&(a, b)| e.src.0 == b && e.dst.0 == a))
        .collect();
    Ok(DirectedTransitionSystem::new(width * height, edges))
}

/// Directed cycle `i -> i+1 (mod n)` at unit cost, so `E(x, y) = (y - x) mod n`.
pub fn make_one_way_ring(n: usize) -> Result<DirectedTransitionSystem> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "ring needs n >= 2, got {n}"
        )));
    }
    let triples: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    Ok(DirectedTransitionSystem::from_triples(n, &triples))
}

/// Each ordered pair `i != j` gets an edge with probability `edge_prob` and a
/// cost uniform in `[lo, hi]`. Pairs are visited row-major so the result is a
/// pure function of the arguments.
pub fn make_random_digraph(
    n: usize,
    edge_prob: f64,
    cost_range: (f64, f64),
    seed: u64,
) -> Result<DirectedTransitionSystem> {
    let (lo, hi) = cost_range;
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidArgument(format!(
            "edge probability {edge_prob} outside [0, 1]"
        )));
    }
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "cost range ({lo}, {hi}) must satisfy 0 < lo <= hi"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if rng.gen::<f64>() < edge_prob {
                let cost = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
                triples.push((i, j, cost));
            }
        }
    }
    Ok(DirectedTransitionSystem::from_triples(n, &triples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{Finite, Infinite};
    use crate::solver::{all_pairs_energy, brute_force_table};
    use crate::system::StateId;

    #[test]
    fn fixtures() {
        let t = make_fixture("tri3").unwrap();
        assert_eq!((t.n_states(), t.edges().len()), (3, 4));
        let o = make_fixture("ow2").unwrap();
        assert_eq!((o.n_states(), o.edges().len()), (2, 1));
        assert_eq!(
            make_fixture("nope"),
            Err(Error::UnknownFixture("nope".into()))
        );
    }

    #[test]
    fn gridworld_examples() {
        let g = make_gridworld(2, 1, &[], (0.5, 0.0)).unwrap();
        assert_eq!(g.edge_cost(StateId(0), StateId(1)), Some(0.5));
        assert_eq!(g.edge_cost(StateId(1), StateId(0)), Some(1.5));

        let g = make_gridworld(2, 1, &[(0, 1)], (0.0, 0.0)).unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edge_cost(StateId(0), StateId(1)), Some(1.0));

        let g = make_gridworld(1, 1, &[], (0.0, 0.0)).unwrap();
        assert_eq!((g.n_states(), g.edges().len()), (1, 0));
    }

    #[test]
    fn gridworld_errors() {
        assert_eq!(
            make_gridworld(3, 3, &[(0, 4)], (0.0, 0.0)),
            Err(Error::NonAdjacentDoor { a: 0, b: 4 })
        );
        // row-major: cells 2 and 3 sit on different rows of a 3-wide grid
        assert!(make_gridworld(3, 3, &[(2, 3)], (0.0, 0.0)).is_err());
        assert_eq!(
            make_gridworld(2, 2, &[], (1.0, 0.0)),
            Err(Error::WindOutOfRange(1.0))
        );
    }

    #[test]
    fn ring_matches_modular_closed_form() {
        for n in 2..=12 {
            let ring = make_one_way_ring(n).unwrap();
            let t = all_pairs_energy(&ring).unwrap();
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(t.get(x, y), Finite(((y + n - x) % n) as f64));
                }
            }
            if n <= 7 {
                assert_eq!(brute_force_table(&ring).unwrap(), t);
            }
        }
        assert!(make_one_way_ring(1).is_err());
    }

    #[test]
    fn random_digraph_extremes() {
        let empty = make_random_digraph(5, 0.0, (1.0, 2.0), 3).unwrap();
        assert!(empty.edges().is_empty());
        let t = all_pairs_energy(&empty).unwrap();
        assert!(t.off_diagonal().all(|(_, _, v)| v == Infinite));

        let full = make_random_digraph(5, 1.0, (1.0, 1.0), 3).unwrap();
        assert_eq!(full.edges().len(), 20);
        let t = all_pairs_energy(&full).unwrap();
        assert!(t.off_diagonal().all(|(_, _, v)| v == Finite(1.0)));
    }

    #[test]
    fn random_digraph_is_seed_determined() {
        let a = make_random_digraph(20, 0.2, (0.5, 2.0), 11).unwrap();
        let b = make_random_digraph(20, 0.2, (0.5, 2.0), 11).unwrap();
        let c = make_random_digraph(20, 0.2, (0.5, 2.0), 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.validate().is_ok());
        assert!(a.edges().iter().all(|e| (0.5..=2.0).contains(&e.cost)));
    }
}
