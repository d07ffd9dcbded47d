//! Learning energies from local transitions alone. The recipes under
//! `fixtures/` pin the configurations that meet the training budget.

use std::path::Path;

use quasienergy::train::TrainRecipe;
use quasienergy::{
    all_pairs_energy, evaluate_model, make_fixture, make_one_way_ring, qrl_style_fit,
    DirectedTransitionSystem, EnergyModel, HeadSpec, TrainConfig, TransitionDataset,
};

fn fit(
    name: &str,
    sys: &DirectedTransitionSystem,
    recipe: &TrainRecipe,
) -> quasienergy::Result<()> {
    let oracle = all_pairs_energy(sys)?;
    let data = TransitionDataset::from_system(sys);
    let init = EnergyModel::init(sys.n_states(), recipe.dim, recipe.head, recipe.init_seed)?;
    let (m, _) = qrl_style_fit(&init, &data, &recipe.config)?;
    let e = evaluate_model(&m, &oracle, &data, recipe.config.cap, 0)?;
    println!(
        "{name:<22} violation {:.4}  spearman {:.4}  mae {:.3}  triangle {:.1e}",
        e.constraint_violation_mean,
        e.spearman_finite.unwrap_or(f64::NAN),
        e.mae_finite,
        e.triangle_violation_max
    );
    Ok(())
}

fn main() -> quasienergy::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let load = |f: &str| -> TrainRecipe {
        serde_json::from_str(&std::fs::read_to_string(dir.join(f)).expect("fixture"))
            .expect("recipe")
    };
    let tri3 = make_fixture("tri3")?;
    let ring = make_one_way_ring(10)?;
    fit("tri3 (sum-relu)", &tri3, &load("qrl_tri3.json"))?;
    let ring_recipe = load("qrl_ring10.json");
    fit("ring10 (max-relu)", &ring, &ring_recipe)?;

    // a sum-relu head cannot order ring distances at any budget
    // (it diverges at the max-relu learning rate, hence the smaller step)
    let sum = TrainRecipe {
        head: HeadSpec::SumReluAsym { epsilon: 0.01 },
        config: TrainConfig {
            learning_rate: 0.003,
            ..ring_recipe.config.clone()
        },
        ..ring_recipe
    };
    fit("ring10 (sum-relu)", &ring, &sum)?;
    Ok(())
}
