//! Least-action energies on the three-state fixture, checked against
//! exhaustive path enumeration.

use quasienergy::solver::brute_force_table;
use quasienergy::{
    all_pairs_energy, make_fixture, serialize_table, trajectory_action, TrajectoryPath,
};

fn main() -> quasienergy::Result<()> {
    let sys = make_fixture("tri3")?;
    let table = all_pairs_energy(&sys)?;
    print!("{}", serialize_table(&table));

    assert_eq!(table, brute_force_table(&sys)?);
    println!("matches brute-force enumeration");

    // 0 -> 1 -> 2 beats the direct 0 -> 2 edge
    let detour = TrajectoryPath::from_indices(&[0, 1, 2])?;
    let direct = TrajectoryPath::from_indices(&[0, 2])?;
    println!(
        "action(0->1->2) = {}, action(0->2) = {}, E(0,2) = {}",
        trajectory_action(&sys, &detour),
        trajectory_action(&sys, &direct),
        table.get(0, 2)
    );
    // asymmetric: going back round the cycle costs more
    println!("E(0,1) = {}, E(1,0) = {}", table.get(0, 1), table.get(1, 0));
    Ok(())
}
