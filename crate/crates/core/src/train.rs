//! Fitting energy models to least-action ground truth, and scoring them.
//!
//! Two objectives are offered:
//!
//! * supervised regression of model energies onto the oracle table, with
//!   unreachable targets replaced by a finite cap;
//! * a QRL-style objective that only sees local transitions. It pushes pair
//!   energies up (capped) while a squared hinge keeps each observed step's
//!   energy below its cost; the triangle inequality built into the head then
//!   propagates the local constraints to long horizons. This is our own
//!   instantiation, not a published objective.
//!
//! Both use plain gradient descent on the embedding table with seeded pair
//! sampling, so identical configurations give bit-identical models.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::audit::{asymmetry_profile, check_triangle, DEFAULT_TRIPLE_BUDGET};
use crate::cost::{ExtendedCost, Finite};
use crate::error::{Error, Result};
use crate::model::{EnergyModel, HeadSpec};
use crate::solver::EnergyTable;
use crate::system::{DirectedTransitionSystem, StateId};

/// Observed one-step transitions `(s, s_next, cost)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionDataset {
    pub triples: Vec<(StateId, StateId, f64)>,
}

impl TransitionDataset {
    /// Every edge of the system, in edge order.
    pub fn from_system(sys: &DirectedTransitionSystem) -> Self {
        TransitionDataset {
            triples: sys.edges().iter().map(|e| (e.src, e.dst, e.cost)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub steps: usize,
    /// Pairs per step. `0`, or any value covering every ordered pair, means
    /// full-batch: each pair once per step.
    pub batch_size: usize,
    pub lambda_penalty: f64,
    /// Finite surrogate for `Infinite` targets.
    pub cap: f64,
    pub seed: u64,
    pub log_every: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.05,
            steps: 2000,
            batch_size: 0,
            lambda_penalty: 100.0,
            cap: 10.0,
            seed: 0,
            log_every: 100,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(self.lambda_penalty >= 0.0) {
            return Err(Error::InvalidArgument("lambda must be >= 0".into()));
        }
        if !(self.cap > 0.0 && self.cap.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "cap must be positive, got {}",
                self.cap
            )));
        }
        Ok(())
    }
}

/// Model shape plus optimizer settings; what an experiment fixture records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainRecipe {
    pub dim: usize,
    pub head: HeadSpec,
    pub init_seed: u64,
    pub config: TrainConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossPoint {
    pub step: usize,
    pub term: String,
    pub value: f64,
}

/// Logged objective terms, in step order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LossCurve {
    pub points: Vec<LossPoint>,
}

impl LossCurve {
    fn push(&mut self, step: usize, term: &str, value: f64) {
        self.points.push(LossPoint {
            step,
            term: term.to_string(),
            value,
        });
    }

    /// Values of one term in step order.
    pub fn term(&self, name: &str) -> Vec<(usize, f64)> {
        self.points
            .iter()
            .filter(|p| p.term == name)
            .map(|p| (p.step, p.value))
            .collect()
    }

    /// `step,term,value` with a header row.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "step,term,value")?;
        for p in &self.points {
            writeln!(w, "{},{},{:?}", p.step, p.term, p.value)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ascii output")
    }
}

fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|(x, y)| x != y)
        .collect()
}

fn sample_batch<'a>(
    pairs: &'a [(usize, usize)],
    batch_size: usize,
    rng: &mut ChaCha8Rng,
    buf: &'a mut Vec<(usize, usize)>,
) -> &'a [(usize, usize)] {
    if batch_size == 0 || batch_size >= pairs.len() {
        return pairs;
    }
    buf.clear();
    buf.extend((0..batch_size).map(|_| pairs[rng.gen_range(0..pairs.len())]));
    buf
}

fn should_log(step: usize, steps: usize, every: usize) -> bool {
    step == steps || (every > 0 && step.is_multiple_of(every))
}

const SUPERVISED_TERM: &str = "mse";

/// Least squares onto the capped oracle.
///
/// The curve records the full-table mean squared error at step 0, every
/// `log_every` steps and at the final step.
pub fn supervised_fit(
    model: &EnergyModel,
    oracle: &EnergyTable,
    cfg: &TrainConfig,
) -> Result<(EnergyModel, LossCurve)> {
    cfg.validate()?;
    if model.n_states() != oracle.n_states() {
        return Err(Error::DimensionMismatch {
            left: model.n_states(),
            right: oracle.n_states(),
        });
    }
    if let Some(max_finite) = oracle.max_finite() {
        if !(cfg.cap > max_finite) {
            return Err(Error::CapTooSmall {
                cap: cfg.cap,
                max_finite,
            });
        }
    }
    let pairs = ordered_pairs(model.n_states());
    let target = |x: usize, y: usize| oracle.get(x, y).capped(cfg.cap);
    let full_loss = |m: &EnergyModel| -> f64 {
        if pairs.is_empty() {
            return 0.0;
        }
        pairs
            .iter()
            .map(|&(x, y)| {
                let r = m.energy(x, y).expect("indices in range") - target(x, y);
                r * r
            })
            .sum::<f64>()
            / pairs.len() as f64
    };

    let mut m = model.clone();
    let mut curve = LossCurve::default();
    curve.push(0, SUPERVISED_TERM, full_loss(&m));
    if pairs.is_empty() {
        return Ok((m, curve));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut buf = Vec::new();
    let mut grad = vec![0.0; m.embeddings.as_slice().len()];
    for step in 1..=cfg.steps {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let batch = sample_batch(&pairs, cfg.batch_size, &mut rng, &mut buf);
        let inv = 1.0 / batch.len() as f64;
        for &(x, y) in batch {
            let r = m.energy(x, y)? - target(x, y);
            m.accumulate_grad(x, y, 2.0 * r * inv, &mut grad);
        }
        for (w, g) in m.embeddings.as_mut_slice().iter_mut().zip(&grad) {
            *w -= cfg.learning_rate * g;
        }
        if m.embeddings.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteLoss { step });
        }
        if should_log(step, cfg.steps, cfg.log_every) {
            let loss = full_loss(&m);
            if !loss.is_finite() {
                return Err(Error::NonFiniteLoss { step });
            }
            curve.push(step, SUPERVISED_TERM, loss);
        }
    }
    Ok((m, curve))
}

pub const QRL_PAIR_TERM: &str = "pair_energy";
pub const QRL_PENALTY_TERM: &str = "constraint_penalty";

/// Gradient ascent on
/// `mean_pairs min(d(s, g), cap) - lambda * mean_transitions max(0, d(s, s') - cost)^2`.
///
/// The curve logs both terms (the penalty without its `lambda` factor),
/// evaluated over every ordered pair and every transition.
pub fn qrl_style_fit(
    model: &EnergyModel,
    data: &TransitionDataset,
    cfg: &TrainConfig,
) -> Result<(EnergyModel, LossCurve)> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::InvalidArgument("transition dataset is empty".into()));
    }
    let n = model.n_states();
    for &(s, t, _) in &data.triples {
        if s.0 >= n || t.0 >= n {
            return Err(Error::InvalidState {
                state: if s.0 >= n { s } else { t },
                n_states: n,
            });
        }
    }
    let pairs = ordered_pairs(n);
    let terms = |m: &EnergyModel| -> (f64, f64) {
        let pair = if pairs.is_empty() {
            0.0
        } else {
            pairs
                .iter()
                .map(|&(x, y)| m.energy(x, y).expect("in range").min(cfg.cap))
                .sum::<f64>()
                / pairs.len() as f64
        };
        let penalty = data
            .triples
            .iter()
            .map(|&(s, t, c)| {
                let v = (m.energy(s.0, t.0).expect("in range") - c).max(0.0);
                v * v
            })
            .sum::<f64>()
            / data.len() as f64;
        (pair, penalty)
    };

    let mut m = model.clone();
    let mut curve = LossCurve::default();
    let log = |curve: &mut LossCurve, step: usize, (p, q): (f64, f64)| -> Result<()> {
        if !(p.is_finite() && q.is_finite()) {
            return Err(Error::NonFiniteLoss { step });
        }
        curve.push(step, QRL_PAIR_TERM, p);
        curve.push(step, QRL_PENALTY_TERM, q);
        Ok(())
    };
    log(&mut curve, 0, terms(&m))?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut buf = Vec::new();
    let mut grad = vec![0.0; m.embeddings.as_slice().len()];
    let inv_t = 1.0 / data.len() as f64;
    for step in 1..=cfg.steps {
        grad.iter_mut().for_each(|g| *g = 0.0);
        if !pairs.is_empty() {
            let batch = sample_batch(&pairs, cfg.batch_size, &mut rng, &mut buf);
            let inv = 1.0 / batch.len() as f64;
            for &(x, y) in batch {
                // min(d, cap) is flat once the cap binds
                if m.energy(x, y)? < cfg.cap {
                    m.accumulate_grad(x, y, inv, &mut grad);
                }
            }
        }
        for &(s, t, c) in &data.triples {
            let excess = m.energy(s.0, t.0)? - c;
            if excess > 0.0 {
                m.accumulate_grad(
                    s.0,
                    t.0,
                    -cfg.lambda_penalty * 2.0 * excess * inv_t,
                    &mut grad,
                );
            }
        }
        for (w, g) in m.embeddings.as_mut_slice().iter_mut().zip(&grad) {
            *w += cfg.learning_rate * g;
        }
        if m.embeddings.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteLoss { step });
        }
        if should_log(step, cfg.steps, cfg.log_every) {
            log(&mut curve, step, terms(&m))?;
        }
    }
    Ok((m, curve))
}

/// Anything that assigns a finite energy to each ordered state pair.
pub trait PairEnergy {
    fn n_states(&self) -> usize;
    fn pair_energy(&self, x: usize, y: usize) -> f64;
}

impl PairEnergy for EnergyModel {
    fn n_states(&self) -> usize {
        EnergyModel::n_states(self)
    }

    fn pair_energy(&self, x: usize, y: usize) -> f64 {
        self.energy(x, y).expect("indices in range")
    }
}

/// A table served as an energy, `Infinite` entries replaced by `cap`.
#[derive(Debug, Clone)]
pub struct CappedTable<'a> {
    pub table: &'a EnergyTable,
    pub cap: f64,
}

impl PairEnergy for CappedTable<'_> {
    fn n_states(&self) -> usize {
        self.table.n_states()
    }

    fn pair_energy(&self, x: usize, y: usize) -> f64 {
        self.table.get(x, y).capped(self.cap)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalMetrics {
    /// Mean `|model - oracle|` over off-diagonal pairs with a finite oracle value.
    pub mae_finite: f64,
    /// `None` unless the oracle takes at least two distinct finite values.
    pub spearman_finite: Option<f64>,
    /// Mean of `max(0, d(s, s') - cost)` over the dataset.
    pub constraint_violation_mean: f64,
    /// Largest `d(x, z) - d(x, y) - d(y, z)` over checked model triples, floored at 0.
    pub triangle_violation_max: f64,
    /// Over one-way oracle pairs, the larger of `|m(x,y) - E(x,y)|` and `|m(y,x) - cap|`.
    pub one_way_max_error: f64,
}

/// Ranks with ties sharing their average rank.
fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson correlation of average ranks; 0 when either side is constant.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (average_ranks(a), average_ranks(b));
    let n = ra.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if va == 0.0 || vb == 0.0 {
        0.0
    } else {
        cov / (va * vb).sqrt()
    }
}

pub fn evaluate_model<E: PairEnergy + ?Sized>(
    m: &E,
    oracle: &EnergyTable,
    data: &TransitionDataset,
    cap: f64,
    seed: u64,
) -> Result<EvalMetrics> {
    let n = oracle.n_states();
    if m.n_states() != n {
        return Err(Error::DimensionMismatch {
            left: m.n_states(),
            right: n,
        });
    }
    if let Some(max_finite) = oracle.max_finite() {
        if !(cap > max_finite) {
            return Err(Error::CapTooSmall { cap, max_finite });
        }
    }

    let mut model_vals = Vec::new();
    let mut oracle_vals = Vec::new();
    for (x, y, v) in oracle.off_diagonal() {
        if let Finite(e) = v {
            model_vals.push(m.pair_energy(x, y));
            oracle_vals.push(e);
        }
    }
    let mae_finite = if oracle_vals.is_empty() {
        0.0
    } else {
        model_vals
            .iter()
            .zip(&oracle_vals)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / oracle_vals.len() as f64
    };
    let distinct = {
        let mut v = oracle_vals.clone();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v.len()
    };
    let spearman_finite = (distinct >= 2).then(|| spearman(&model_vals, &oracle_vals));

    let constraint_violation_mean = if data.is_empty() {
        0.0
    } else {
        data.triples
            .iter()
            .map(|&(s, t, c)| (m.pair_energy(s.0, t.0) - c).max(0.0))
            .sum::<f64>()
            / data.len() as f64
    };

    let table = EnergyTable::from_rows(
        (0..n)
            .map(|x| (0..n).map(|y| Finite(m.pair_energy(x, y))).collect())
            .collect(),
    )?;
    let tri = check_triangle(&table, 0.0, DEFAULT_TRIPLE_BUDGET, seed);
    let triangle_violation_max = match tri.worst_violation {
        ExtendedCost::Finite(v) => v,
        ExtendedCost::Infinite => f64::INFINITY,
    };

    let one_way_max_error = asymmetry_profile(oracle)
        .one_way_pairs
        .iter()
        .map(|&(x, y)| {
            let fwd = (m.pair_energy(x, y) - oracle.get(x, y).capped(cap)).abs();
            let back = (m.pair_energy(y, x) - cap).abs();
            fwd.max(back)
        })
        .fold(0.0, f64::max);

    Ok(EvalMetrics {
        mae_finite,
        spearman_finite,
        constraint_violation_mean,
        triangle_violation_max,
        one_way_max_error,
    })
}
