//! Least-action energies on directed transition systems.
//!
//! A [`DirectedTransitionSystem`] assigns nonnegative costs to admissible
//! one-step moves. Its least-action energy `E(x, y)` is the cheapest
//! accumulated cost of any trajectory from `x` to `y`, and `Infinite` when
//! none exists. That energy is a quasimetric, possibly asymmetric.
//!
//! The crate computes it ([`all_pairs_energy`]), audits tables against the
//! quasimetric axioms ([`audit_table`]), cross-checks it against goal-reaching
//! value iteration ([`value_iteration`]), and fits latent energy models whose
//! heads are quasimetric by construction ([`EnergyModel`], [`supervised_fit`],
//! [`qrl_style_fit`]).

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod cli;
pub mod cost;
pub mod env;
pub mod error;
pub mod field;
pub mod format;
pub mod model;
pub mod solver;
pub mod system;
pub mod train;
pub mod value;

pub use audit::{
    asymmetry_profile, audit_table, check_identity, check_nonnegativity, check_reflexivity,
    check_triangle, symmetric_obstruction_bound, AsymmetryProfile, AuditMode, AuditReport, Axiom,
    QuasimetricAudit, Witness,
};
pub use cost::{ext_add, ext_min, ExtendedCost, Finite, Infinite};
pub use env::{make_fixture, make_gridworld, make_one_way_ring, make_random_digraph};
pub use error::{Error, Result};
pub use field::{lift_effort_field, refine_field, EffortField};
pub use format::{parse_system, parse_table, serialize_system, serialize_table};
pub use model::{grad_check, head_forward, head_grad, EmbeddingTable, EnergyModel, HeadSpec};
pub use solver::{
    all_pairs_energy, brute_force_energy, single_source_energy, trajectory_action, EnergyTable,
};
pub use system::{validate_system, DirectedTransitionSystem, Edge, StateId, TrajectoryPath};
pub use train::{
    evaluate_model, qrl_style_fit, supervised_fit, EvalMetrics, LossCurve, TrainConfig,
    TrainRecipe, TransitionDataset,
};
pub use value::{greedy_rollout, value_iteration, CostToGo};
