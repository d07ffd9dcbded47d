//! Two sources of asymmetry on a grid: an anisotropic effort (wind) and a
//! restricted admissibility relation (one-way doors).

use quasienergy::audit::asymmetry_profile;
use quasienergy::{all_pairs_energy, make_gridworld};

fn main() -> quasienergy::Result<()> {
    let calm = all_pairs_energy(&make_gridworld(6, 6, &[], (0.0, 0.0))?)?;
    println!("calm 6x6: max_gap = {}", asymmetry_profile(&calm).max_gap);

    let windy = all_pairs_energy(&make_gridworld(6, 6, &[], (0.5, 0.0))?)?;
    println!(
        "wind (0.5, 0): E(0 -> 5) = {}, E(5 -> 0) = {}",
        windy.get(0, 5),
        windy.get(5, 0)
    );

    // cells 2 and 3 are horizontal neighbours; the door lets agents pass 2 -> 3 only
    let doors = [(2, 3), (8, 9), (14, 15), (20, 21), (26, 27), (32, 33)];
    let walled = all_pairs_energy(&make_gridworld(6, 6, &doors, (0.0, 0.0))?)?;
    println!(
        "one-way wall between columns 2 and 3: E(0 -> 5) = {}, E(5 -> 0) = {}",
        walled.get(0, 5),
        walled.get(5, 0)
    );
    let profile = asymmetry_profile(&walled);
    println!("{} one-way pairs", profile.one_way_pairs.len());
    Ok(())
}
