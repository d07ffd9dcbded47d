//! Energy models over a finite state space: a learnable embedding table
//! composed with a comparator head.
//!
//! The asymmetric heads are quasimetrics for every parameter value, so any
//! trained model satisfies reflexivity, nonnegativity and the triangle
//! inequality by construction. `SymmetricL2` is the symmetric foil.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cost::Finite;
use crate::error::{Error, Result};
use crate::solver::EnergyTable;

pub const DEFAULT_EPSILON: f64 = 0.01;
pub const INIT_SCALE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum HeadSpec {
    /// `sum_i max(0, g_i - s_i) + epsilon * |g - s|_2`
    SumReluAsym { epsilon: f64 },
    /// `max_i max(0, g_i - s_i) + epsilon * |g - s|_2`
    MaxReluAsym { epsilon: f64 },
    /// `scale * |g - s|_2`
    SymmetricL2 { scale: f64 },
}

impl HeadSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            HeadSpec::SumReluAsym { epsilon } | HeadSpec::MaxReluAsym { epsilon } => {
                if !(epsilon >= 0.0 && epsilon.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "epsilon must be finite and >= 0, got {epsilon}"
                    )));
                }
            }
            HeadSpec::SymmetricL2 { scale } => {
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "scale must be finite and > 0, got {scale}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self, HeadSpec::SymmetricL2 { .. })
    }

    /// Distance from `(z_s, z_g)` to the nearest point where the head is not
    /// differentiable. Finite differences are only meaningful well away from it.
    pub fn kink_distance(&self, z_s: &[f64], z_g: &[f64]) -> f64 {
        let diff: Vec<f64> = z_g.iter().zip(z_s).map(|(g, s)| g - s).collect();
        let norm = l2(&diff);
        match self {
            HeadSpec::SymmetricL2 { .. } => norm,
            HeadSpec::SumReluAsym { epsilon } => {
                let relu_kink = diff.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
                if *epsilon > 0.0 {
                    relu_kink.min(norm)
                } else {
                    relu_kink
                }
            }
            HeadSpec::MaxReluAsym { epsilon } => {
                // the active term switches where the two largest of {0, d_i} meet
                let mut top = [0.0f64, f64::NEG_INFINITY];
                for &d in &diff {
                    if d > top[0] {
                        top = [d, top[0]];
                    } else if d > top[1] {
                        top[1] = d;
                    }
                }
                let mut k = (top[0] - top[1]).abs();
                // the relu of each coordinate kinks at zero regardless of rank
                k = diff.iter().fold(k, |m, d| m.min(d.abs()));
                if *epsilon > 0.0 {
                    k.min(norm)
                } else {
                    k
                }
            }
        }
    }
}

impl Default for HeadSpec {
    fn default() -> Self {
        HeadSpec::SumReluAsym {
            epsilon: DEFAULT_EPSILON,
        }
    }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_dims(z_s: &[f64], z_g: &[f64]) -> Result<()> {
    if z_s.len() != z_g.len() {
        return Err(Error::DimensionMismatch {
            left: z_s.len(),
            right: z_g.len(),
        });
    }
    Ok(())
}

/// Index of the largest gap `g_i - s_i`, first index on ties.
fn argmax_gap(z_s: &[f64], z_g: &[f64]) -> Option<(usize, f64)> {
    z_g.iter()
        .zip(z_s)
        .map(|(g, s)| g - s)
        .enumerate()
        .fold(None, |best, (i, d)| match best {
            Some((_, b)) if d <= b => best,
            _ => Some((i, d)),
        })
}

/// Energy from latent `z_s` to latent `z_g`.
pub fn head_forward(z_s: &[f64], z_g: &[f64], head: &HeadSpec) -> Result<f64> {
    check_dims(z_s, z_g)?;
    let diff: Vec<f64> = z_g.iter().zip(z_s).map(|(g, s)| g - s).collect();
    Ok(match *head {
        HeadSpec::SumReluAsym { epsilon } => {
            diff.iter().map(|d| d.max(0.0)).sum::<f64>() + epsilon * l2(&diff)
        }
        HeadSpec::MaxReluAsym { epsilon } => {
            diff.iter().fold(0.0f64, |m, d| m.max(*d)) + epsilon * l2(&diff)
        }
        HeadSpec::SymmetricL2 { scale } => scale * l2(&diff),
    })
}

/// Analytic gradients `(d/dz_s, d/dz_g)`. Subgradient 0 at relu kinks and for
/// the norm term at `z_s == z_g`.
pub fn head_grad(z_s: &[f64], z_g: &[f64], head: &HeadSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    check_dims(z_s, z_g)?;
    let diff: Vec<f64> = z_g.iter().zip(z_s).map(|(g, s)| g - s).collect();
    let norm = l2(&diff);
    let norm_grad = |coef: f64| -> Vec<f64> {
        if norm > 0.0 {
            diff.iter().map(|d| coef * d / norm).collect()
        } else {
            vec![0.0; diff.len()]
        }
    };
    let grad_g = match *head {
        HeadSpec::SumReluAsym { epsilon } => {
            let mut g = norm_grad(epsilon);
            for (gi, d) in g.iter_mut().zip(&diff) {
                if *d > 0.0 {
                    *gi += 1.0;
                }
            }
            g
        }
        HeadSpec::MaxReluAsym { epsilon } => {
            let mut g = norm_grad(epsilon);
            if let Some((i, d)) = argmax_gap(z_s, z_g) {
                if d > 0.0 {
                    g[i] += 1.0;
                }
            }
            g
        }
        HeadSpec::SymmetricL2 { scale } => norm_grad(scale),
    };
    let grad_s = grad_g.iter().map(|g| -g).collect();
    Ok((grad_s, grad_g))
}

/// Per-state latent vectors, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    n_states: usize,
    dim: usize,
    vectors: Vec<f64>,
}

impl EmbeddingTable {
    pub fn zeros(n_states: usize, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "latent dimension must be >= 1".into(),
            ));
        }
        Ok(EmbeddingTable {
            n_states,
            dim,
            vectors: vec![0.0; n_states * dim],
        })
    }

    /// Independent uniform entries in `[-INIT_SCALE, INIT_SCALE]`.
    pub fn random(n_states: usize, dim: usize, seed: u64) -> Result<Self> {
        let mut t = Self::zeros(n_states, dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in &mut t.vectors {
            *v = rng.gen_range(-INIT_SCALE..=INIT_SCALE);
        }
        Ok(t)
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        let mut t = Self::zeros(rows.len(), dim)?;
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: r.len(),
                });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has a non-finite entry"
                )));
            }
            t.vectors[i * dim..(i + 1) * dim].copy_from_slice(&r);
        }
        Ok(t)
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_states).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.vectors
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.vectors
    }
}

/// `E(x, y) = head(z_x, z_y)`. Serialized as the checkpoint format
/// `{dim, head, vectors}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Checkpoint", into = "Checkpoint")]
pub struct EnergyModel {
    pub embeddings: EmbeddingTable,
    pub head: HeadSpec,
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    dim: usize,
    head: HeadSpec,
    vectors: Vec<Vec<f64>>,
}

impl TryFrom<Checkpoint> for EnergyModel {
    type Error = Error;

    fn try_from(c: Checkpoint) -> Result<Self> {
        c.head.validate()?;
        let embeddings = if c.vectors.is_empty() {
            EmbeddingTable::zeros(0, c.dim)?
        } else {
            EmbeddingTable::from_rows(c.vectors)?
        };
        if embeddings.dim() != c.dim {
            return Err(Error::DimensionMismatch {
                left: c.dim,
                right: embeddings.dim(),
            });
        }
        Ok(EnergyModel {
            embeddings,
            head: c.head,
        })
    }
}

impl From<EnergyModel> for Checkpoint {
    fn from(m: EnergyModel) -> Self {
        Checkpoint {
            dim: m.embeddings.dim(),
            head: m.head,
            vectors: m.embeddings.rows(),
        }
    }
}

impl EnergyModel {
    pub fn new(embeddings: EmbeddingTable, head: HeadSpec) -> Result<Self> {
        head.validate()?;
        Ok(EnergyModel { embeddings, head })
    }

    /// Seeded uniform initialization.
    pub fn init(n_states: usize, dim: usize, head: HeadSpec, seed: u64) -> Result<Self> {
        Self::new(EmbeddingTable::random(n_states, dim, seed)?, head)
    }

    pub fn n_states(&self) -> usize {
        self.embeddings.n_states()
    }

    pub fn dim(&self) -> usize {
        self.embeddings.dim()
    }

    fn check_index(&self, s: usize) -> Result<()> {
        if s < self.n_states() {
            Ok(())
        } else {
            Err(Error::InvalidState {
                state: s.into(),
                n_states: self.n_states(),
            })
        }
    }

    pub fn energy(&self, x: usize, y: usize) -> Result<f64> {
        self.check_index(x)?;
        self.check_index(y)?;
        head_forward(self.embeddings.row(x), self.embeddings.row(y), &self.head)
    }

    /// Energies for every ordered pair.
    pub fn energy_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n_states();
        (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        head_forward(self.embeddings.row(x), self.embeddings.row(y), &self.head)
                            .expect("rows share the table dimension")
                    })
                    .collect()
            })
            .collect()
    }

    /// Model energies as a table, ready for the quasimetric audit.
    pub fn energy_table(&self) -> EnergyTable {
        EnergyTable::from_rows(
            self.energy_matrix()
                .into_iter()
                .map(|r| r.into_iter().map(Finite).collect())
                .collect(),
        )
        .expect("square by construction")
    }

    /// Adds `scale * dE(x, y)/d(embeddings)` into `grad` (same layout as the table).
    pub(crate) fn accumulate_grad(&self, x: usize, y: usize, scale: f64, grad: &mut [f64]) {
        let dim = self.dim();
        let (gs, gg) = head_grad(self.embeddings.row(x), self.embeddings.row(y), &self.head)
            .expect("rows share the table dimension");
        for k in 0..dim {
            grad[x * dim + k] += scale * gs[k];
            grad[y * dim + k] += scale * gg[k];
        }
    }
}

/// `head_forward` on two embedding rows.
pub fn model_energy(m: &EnergyModel, x: usize, y: usize) -> Result<f64> {
    m.energy(x, y)
}

/// Minimum distance from kinks accepted by [`grad_check`].
pub const KINK_MARGIN: f64 = 1e-3;

/// Worst relative error between analytic head gradients and central finite
/// differences over `probes` random latent pairs of the model's dimension.
///
/// Probe points are drawn uniformly from `[-1, 1]^dim` and redrawn until they
/// sit at least [`KINK_MARGIN`] from every kink. The relative error of a
/// component is `|analytic - numeric| / max(1, |analytic|, |numeric|)`.
pub fn grad_check(m: &EnergyModel, probes: usize, fd_step: f64, seed: u64) -> Result<f64> {
    if !(fd_step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must be positive, got {fd_step}"
        )));
    }
    let dim = m.dim();
    let head = m.head;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..probes {
        let (z_s, z_g) = loop {
            let a: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let b: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            if head.kink_distance(&a, &b) >= KINK_MARGIN {
                break (a, b);
            }
        };
        let (gs, gg) = head_grad(&z_s, &z_g, &head)?;
        let f = |s: &[f64], g: &[f64]| head_forward(s, g, &head).expect("equal dims");
        for k in 0..dim {
            let mut plus = z_s.clone();
            let mut minus = z_s.clone();
            plus[k] += fd_step;
            minus[k] -= fd_step;
            let num = (f(&plus, &z_g) - f(&minus, &z_g)) / (2.0 * fd_step);
            worst = worst.max(rel_err(gs[k], num));

            let mut plus = z_g.clone();
            let mut minus = z_g.clone();
            plus[k] += fd_step;
            minus[k] -= fd_step;
            let num = (f(&z_s, &plus) - f(&z_s, &minus)) / (2.0 * fd_step);
            worst = worst.max(rel_err(gg[k], num));
        }
    }
    Ok(worst)
}

fn rel_err(a: f64, n: f64) -> f64 {
    (a - n).abs() / 1f64.max(a.abs()).max(n.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SUM0: HeadSpec = HeadSpec::SumReluAsym { epsilon: 0.0 };

    #[test]
    fn forward_examples() {
        assert_eq!(head_forward(&[0.0, 0.0], &[1.0, 2.0], &SUM0).unwrap(), 3.0);
        assert_eq!(head_forward(&[1.0, 2.0], &[0.0, 0.0], &SUM0).unwrap(), 0.0);
        let eps = HeadSpec::SumReluAsym { epsilon: 0.1 };
        let v = head_forward(&[0.0, 0.0], &[1.0, 2.0], &eps).unwrap();
        assert!((v - (3.0 + 0.1 * 5f64.sqrt())).abs() < 1e-15);
        assert!((v - 3.223_606_797_749_979).abs() < 1e-12);
        let max0 = HeadSpec::MaxReluAsym { epsilon: 0.0 };
        assert_eq!(head_forward(&[0.0, 0.0], &[1.0, 2.0], &max0).unwrap(), 2.0);
        assert_eq!(head_forward(&[1.0, 2.0], &[0.0, 0.0], &max0).unwrap(), 0.0);
        for head in [SUM0, eps, max0, HeadSpec::SymmetricL2 { scale: 2.0 }] {
            assert_eq!(
                head_forward(&[0.3, -1.0], &[0.3, -1.0], &head).unwrap(),
                0.0
            );
        }
        assert_eq!(
            head_forward(&[0.0], &[1.0, 2.0], &SUM0),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn grad_examples() {
        let (gs, gg) = head_grad(&[0.0, 0.0], &[1.0, 2.0], &SUM0).unwrap();
        assert_eq!((gs, gg), (vec![-1.0, -1.0], vec![1.0, 1.0]));
        let (gs, gg) = head_grad(&[5.0, 5.0], &[1.0, 2.0], &SUM0).unwrap();
        assert_eq!((gs, gg), (vec![0.0, 0.0], vec![0.0, 0.0]));
        let l2 = HeadSpec::SymmetricL2 { scale: 1.0 };
        let (gs, gg) = head_grad(&[0.0, 0.0], &[3.0, 4.0], &l2).unwrap();
        assert_eq!(gg, vec![0.6, 0.8]);
        assert_eq!(gs, vec![-0.6, -0.8]);
        let (gs, gg) = head_grad(&[1.0, 1.0], &[1.0, 1.0], &l2).unwrap();
        assert_eq!((gs, gg), (vec![0.0, 0.0], vec![0.0, 0.0]));
        let max0 = HeadSpec::MaxReluAsym { epsilon: 0.0 };
        let (gs, gg) = head_grad(&[0.0, 0.0], &[1.0, 2.0], &max0).unwrap();
        assert_eq!((gs, gg), (vec![0.0, -1.0], vec![0.0, 1.0]));
        assert!(head_grad(&[0.0], &[0.0, 0.0], &l2).is_err());
    }

    #[test]
    fn model_energy_examples() {
        let emb = EmbeddingTable::from_rows(vec![vec![0.0, 0.0], vec![1.0, 2.0]]).unwrap();
        let m = EnergyModel::new(emb, SUM0).unwrap();
        assert_eq!(model_energy(&m, 0, 1).unwrap(), 3.0);
        assert_eq!(model_energy(&m, 1, 0).unwrap(), 0.0);
        assert_eq!(model_energy(&m, 1, 1).unwrap(), 0.0);
        assert!(model_energy(&m, 2, 0).is_err());

        let zero =
            EnergyModel::new(EmbeddingTable::zeros(4, 3).unwrap(), HeadSpec::default()).unwrap();
        assert!(zero.energy_matrix().iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn grad_check_examples() {
        for head in [
            HeadSpec::SumReluAsym { epsilon: 0.1 },
            HeadSpec::MaxReluAsym { epsilon: 0.1 },
            HeadSpec::SymmetricL2 { scale: 1.0 },
        ] {
            let m = EnergyModel::init(3, 4, head, 0).unwrap();
            let err = grad_check(&m, 100, 1e-5, 7).unwrap();
            assert!(err <= 1e-5, "{head:?}: {err}");
        }
        let m = EnergyModel::init(3, 4, SUM0, 0).unwrap();
        assert_eq!(grad_check(&m, 0, 1e-5, 7).unwrap(), 0.0);
        assert!(grad_check(&m, 1, 0.0, 7).is_err());
    }

    #[test]
    fn grad_check_detects_a_wrong_gradient() {
        // numeric derivative of the sum head evaluated against a max-head gradient
        let z_s = [0.0, 0.0];
        let z_g = [1.0, 2.0];
        let (_, wrong) = head_grad(&z_s, &z_g, &HeadSpec::MaxReluAsym { epsilon: 0.0 }).unwrap();
        let h = 1e-5;
        let num = (head_forward(&z_s, &[1.0 + h, 2.0], &SUM0).unwrap()
            - head_forward(&z_s, &[1.0 - h, 2.0], &SUM0).unwrap())
            / (2.0 * h);
        assert!(rel_err(wrong[0], num) > 0.5);
    }

    #[test]
    fn identity_of_indiscernibles_needs_epsilon() {
        // b <= a coordinatewise: the relu part vanishes
        let a = [1.0, 1.0];
        let b = [0.0, 0.5];
        for variant in [
            |e| HeadSpec::SumReluAsym { epsilon: e },
            |e| HeadSpec::MaxReluAsym { epsilon: e },
        ] {
            assert_eq!(head_forward(&a, &b, &variant(0.0)).unwrap(), 0.0);
            assert!(head_forward(&a, &b, &variant(0.1)).unwrap() > 0.0);
        }
    }

    #[test]
    fn checkpoint_round_trip_is_bit_exact() {
        let m = EnergyModel::init(5, 3, HeadSpec::SumReluAsym { epsilon: 0.01 }, 99).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with(
            r#"{"dim":3,"head":{"variant":"sum_relu_asym","epsilon":0.01},"vectors":[["#
        ));
        let back: EnergyModel = serde_json::from_str(&s).unwrap();
        assert_eq!(
            back.embeddings
                .as_slice()
                .iter()
                .map(|v| v.to_bits())
                .collect::<Vec<_>>(),
            m.embeddings
                .as_slice()
                .iter()
                .map(|v| v.to_bits())
                .collect::<Vec<_>>()
        );
        assert!(serde_json::from_str::<EnergyModel>(
            r#"{"dim":2,"head":{"variant":"symmetric_l2","scale":0.0},"vectors":[[0,0]]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<EnergyModel>(
            r#"{"dim":3,"head":{"variant":"symmetric_l2","scale":1.0},"vectors":[[0,0]]}"#
        )
        .is_err());
    }

    #[test]
    fn init_is_seeded_and_bounded() {
        let a = EmbeddingTable::random(4, 8, 3).unwrap();
        assert_eq!(a, EmbeddingTable::random(4, 8, 3).unwrap());
        assert_ne!(a, EmbeddingTable::random(4, 8, 4).unwrap());
        assert!(a.as_slice().iter().all(|v| v.abs() <= INIT_SCALE));
        assert!(EmbeddingTable::zeros(2, 0).is_err());
    }

    fn vecs(dim: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
        let v = || proptest::collection::vec(-10.0f64..10.0, dim);
        (v(), v(), v())
    }

    fn asym_head() -> impl Strategy<Value = HeadSpec> {
        prop_oneof![
            (0.0f64..2.0).prop_map(|epsilon| HeadSpec::SumReluAsym { epsilon }),
            (0.0f64..2.0).prop_map(|epsilon| HeadSpec::MaxReluAsym { epsilon }),
        ]
    }

    proptest! {
        #[test]
        fn asymmetric_heads_are_quasimetrics(
            (a, b, c) in (1usize..17).prop_flat_map(vecs),
            head in asym_head(),
        ) {
            let d = |x: &[f64], y: &[f64]| head_forward(x, y, &head).unwrap();
            prop_assert_eq!(d(&a, &a), 0.0);
            prop_assert!(d(&a, &b) >= 0.0);
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-9);
        }

        #[test]
        fn symmetric_head_is_symmetric(
            (a, b, _) in vecs(4),
            scale in 0.01f64..5.0,
        ) {
            let h = HeadSpec::SymmetricL2 { scale };
            prop_assert_eq!(head_forward(&a, &b, &h).unwrap(), head_forward(&b, &a, &h).unwrap());
        }

        #[test]
        fn energies_are_translation_invariant(
            rows in proptest::collection::vec(proptest::collection::vec(-4i32..4, 3), 2..5),
            shift in proptest::collection::vec(-4i32..4, 3),
            head in prop_oneof![
                Just(HeadSpec::SumReluAsym { epsilon: 0.5 }),
                Just(HeadSpec::MaxReluAsym { epsilon: 0.5 }),
                Just(HeadSpec::SymmetricL2 { scale: 1.5 }),
            ],
        ) {
            // integer-valued coordinates keep the shifted differences exact
            let to_f = |r: &Vec<i32>| r.iter().map(|&v| v as f64).collect::<Vec<_>>();
            let base = EnergyModel::new(
                EmbeddingTable::from_rows(rows.iter().map(to_f).collect()).unwrap(), head).unwrap();
            let shifted_rows = rows
                .iter()
                .map(|r| r.iter().zip(&shift).map(|(v, s)| (v + s) as f64).collect())
                .collect();
            let shifted = EnergyModel::new(EmbeddingTable::from_rows(shifted_rows).unwrap(), head).unwrap();
            prop_assert_eq!(base.energy_matrix(), shifted.energy_matrix());
        }
    }
}
