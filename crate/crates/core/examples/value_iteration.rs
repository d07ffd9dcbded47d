//! Goal-reaching value iteration recovers one column of the energy table,
//! and greedy rollouts realize it.

use quasienergy::{all_pairs_energy, greedy_rollout, make_gridworld, value_iteration, StateId};

fn main() -> quasienergy::Result<()> {
    let sys = make_gridworld(5, 4, &[(7, 12)], (0.3, -0.2))?;
    let table = all_pairs_energy(&sys)?;
    let goal = StateId(19);
    let v = value_iteration(&sys, goal, 1e-12, 100)?;

    let worst = (0..sys.n_states())
        .map(|s| (v.values[s].to_f64() - table.get(s, goal.0).to_f64()).abs())
        .fold(0.0, f64::max);
    println!("max |V(s) - E(s, goal)| = {worst:e}");

    let (path, cost) = greedy_rollout(&sys, &v, StateId(0), 100)?;
    let cells: Vec<String> = path.states().iter().map(|s| s.to_string()).collect();
    println!(
        "rollout 0 -> 19: {} (cost {cost}, V(0) = {})",
        cells.join(" "),
        v.get(StateId(0))
    );
    Ok(())
}
