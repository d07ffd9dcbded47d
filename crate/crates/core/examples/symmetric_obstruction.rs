//! A one-way pair cannot be fit by any symmetric energy: the best symmetric
//! model splits the difference between the reachable cost and the cap.

use quasienergy::audit::symmetric_obstruction_bound;
use quasienergy::{
    all_pairs_energy, evaluate_model, make_fixture, supervised_fit, EnergyModel, HeadSpec,
    TrainConfig, TransitionDataset,
};

fn main() -> quasienergy::Result<()> {
    let sys = make_fixture("ow2")?;
    let oracle = all_pairs_energy(&sys)?;
    let data = TransitionDataset::from_system(&sys);
    let cap = 10.0;
    println!(
        "obstruction bound at cap {cap}: {}",
        symmetric_obstruction_bound(&oracle, cap)?
    );

    let cfg = TrainConfig {
        learning_rate: 0.05,
        steps: 5000,
        cap,
        ..TrainConfig::default()
    };
    for head in [
        HeadSpec::SymmetricL2 { scale: 1.0 },
        HeadSpec::SumReluAsym { epsilon: 0.01 },
    ] {
        let init = EnergyModel::init(2, 2, head, 1)?;
        let (m, curve) = supervised_fit(&init, &oracle, &cfg)?;
        let metrics = evaluate_model(&m, &oracle, &data, cap, 0)?;
        println!(
            "{head:?}: m(0,1) = {:.4}, m(1,0) = {:.4}, one-way error {:.4}, final mse {:.2e}",
            m.energy(0, 1)?,
            m.energy(1, 0)?,
            metrics.one_way_max_error,
            curve.points.last().map_or(f64::NAN, |p| p.value)
        );
    }
    Ok(())
}
