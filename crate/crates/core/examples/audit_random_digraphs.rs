//! Audits solved energy tables of random digraphs against the quasimetric
//! axioms, then shows what a broken table looks like.

use quasienergy::{all_pairs_energy, audit_table, make_random_digraph, EnergyTable, Infinite};

fn main() -> quasienergy::Result<()> {
    for (p, seed) in [(0.05, 0), (0.2, 1), (0.5, 2)] {
        let sys = make_random_digraph(50, p, (1.0, 10.0), seed)?;
        let table = all_pairs_energy(&sys)?;
        let audit = audit_table(&table, 1e-9, 10_000_000, seed, None)?;
        let unreachable = table
            .off_diagonal()
            .filter(|&(_, _, v)| v == Infinite)
            .count();
        println!(
            "n=50 p={p:<4} edges={:<4} unreachable pairs={unreachable:<5} passed={} max_gap={}",
            sys.edges().len(),
            audit.passed,
            audit.asymmetry.max_gap
        );
    }

    // a shortcut through state 2 that the table ignores
    let bad = EnergyTable::from_f64_rows(&[&[0.0, 5.0, 1.0], &[9.0, 0.0, 9.0], &[9.0, 1.0, 0.0]])?;
    let audit = audit_table(&bad, 1e-9, 10_000_000, 0, None)?;
    for r in audit.reports.iter().filter(|r| !r.passed) {
        println!(
            "{:?} fails: worst {} at {:?}",
            r.axiom, r.worst_violation, r.witnesses[0].indices
        );
    }
    Ok(())
}
