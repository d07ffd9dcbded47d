//! Quasimetric axiom checks over energy tables, plus asymmetry diagnostics
//! and the lower bound on how well any symmetric energy can fit one-way
//! reachability.
//!
//! Checks use extended arithmetic: a right-hand side containing `Infinite`
//! never falsifies the triangle inequality, while an `Infinite` left-hand side
//! against a finite detour does.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::{ExtendedCost, Finite, Infinite};
use crate::error::{Error, Result};
use crate::solver::EnergyTable;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_TRIPLE_BUDGET: u64 = 10_000_000;
/// Witness lists are truncated to this many entries (lexicographically first).
pub const MAX_WITNESSES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Reflexivity,
    Nonnegativity,
    Identity,
    Triangle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum AuditMode {
    Exhaustive,
    Sampled { seed: u64, samples: u64 },
}

/// One offending index tuple with the table entries involved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub values: Vec<ExtendedCost>,
    pub violation: ExtendedCost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub axiom: Axiom,
    pub passed: bool,
    pub tolerance: f64,
    pub worst_violation: ExtendedCost,
    pub witnesses: Vec<Witness>,
    pub pairs_checked: u64,
    pub mode: AuditMode,
}

impl AuditReport {
    fn from_witnesses(
        axiom: Axiom,
        tol: f64,
        mut witnesses: Vec<Witness>,
        checked: u64,
        mode: AuditMode,
        failed: bool,
    ) -> Self {
        let worst = witnesses
            .iter()
            .map(|w| w.violation)
            .fold(Finite(0.0), |a, b| if b > a { b } else { a });
        witnesses.truncate(MAX_WITNESSES);
        AuditReport {
            axiom,
            passed: !failed,
            tolerance: tol,
            worst_violation: worst,
            witnesses,
            pairs_checked: checked,
            mode,
        }
    }
}

/// Every diagonal entry is finite with magnitude at most `tol`.
pub fn check_reflexivity(t: &EnergyTable, tol: f64) -> AuditReport {
    let n = t.n_states();
    let witnesses: Vec<Witness> = (0..n)
        .filter_map(|x| {
            let v = t.get(x, x);
            let violation = match v {
                Finite(d) => Finite(d.abs()),
                Infinite => Infinite,
            };
            (violation > Finite(tol)).then(|| Witness {
                indices: vec![x, x],
                values: vec![v],
                violation,
            })
        })
        .collect();
    let failed = !witnesses.is_empty();
    AuditReport::from_witnesses(
        Axiom::Reflexivity,
        tol,
        witnesses,
        n as u64,
        AuditMode::Exhaustive,
        failed,
    )
}

/// Every finite entry is at least `-tol`; `Infinite` passes.
pub fn check_nonnegativity(t: &EnergyTable, tol: f64) -> AuditReport {
    let n = t.n_states();
    let mut witnesses = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if let Finite(d) = t.get(x, y) {
                if d < -tol {
                    witnesses.push(Witness {
                        indices: vec![x, y],
                        values: vec![Finite(d)],
                        violation: Finite(-d),
                    });
                }
            }
        }
    }
    let failed = !witnesses.is_empty();
    AuditReport::from_witnesses(
        Axiom::Nonnegativity,
        tol,
        witnesses,
        (n * n) as u64,
        AuditMode::Exhaustive,
        failed,
    )
}

/// No off-diagonal entry is finite and at most `tol`. The axiom is an
/// implication rather than an inequality, so `passed` is decided by the
/// witness set; each witness records `tol - value` as its violation.
pub fn check_identity(t: &EnergyTable, tol: f64) -> AuditReport {
    let witnesses: Vec<Witness> = t
        .off_diagonal()
        .filter_map(|(x, y, v)| match v {
            Finite(d) if d <= tol => Some(Witness {
                indices: vec![x, y],
                values: vec![v],
                violation: Finite(tol - d),
            }),
            _ => None,
        })
        .collect();
    let failed = !witnesses.is_empty();
    let n = t.n_states() as u64;
    AuditReport::from_witnesses(
        Axiom::Identity,
        tol,
        witnesses,
        n * n.saturating_sub(1),
        AuditMode::Exhaustive,
        failed,
    )
}

fn triangle_witness(t: &EnergyTable, x: usize, y: usize, z: usize, tol: f64) -> Option<Witness> {
    let lhs = t.get(x, z);
    let (a, b) = (t.get(x, y), t.get(y, z));
    let rhs = a + b;
    let violation = match (lhs, rhs) {
        (_, Infinite) => return None,
        (Infinite, Finite(_)) => Infinite,
        (Finite(l), Finite(r)) => {
            if l <= r + tol {
                return None;
            }
            Finite(l - r)
        }
    };
    Some(Witness {
        indices: vec![x, y, z],
        values: vec![lhs, a, b],
        violation,
    })
}

/// `E(x, z) <= E(x, y) + E(y, z) + tol`, written as the witness `(x, y, z)`.
/// Exhaustive when `n^3 <= budget`, otherwise `budget` seeded uniform triples.
pub fn check_triangle(t: &EnergyTable, tol: f64, budget: u64, seed: u64) -> AuditReport {
    let n = t.n_states();
    let total = (n as u64).saturating_pow(3);
    if total <= budget {
        // rows partitioned across workers, merged back in x order
        let per_row: Vec<(Vec<Witness>, ExtendedCost)> = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut found = Vec::new();
                let mut worst = Finite(0.0);
                for y in 0..n {
                    for z in 0..n {
                        if let Some(w) = triangle_witness(t, x, y, z, tol) {
                            if w.violation > worst {
                                worst = w.violation;
                            }
                            if found.len() < MAX_WITNESSES {
                                found.push(w);
                            }
                        }
                    }
                }
                (found, worst)
            })
            .collect();
        let worst = per_row
            .iter()
            .map(|(_, w)| *w)
            .fold(Finite(0.0), |a, b| if b > a { b } else { a });
        let witnesses: Vec<Witness> = per_row.into_iter().flat_map(|(w, _)| w).collect();
        let failed = !witnesses.is_empty();
        let mut rep = AuditReport::from_witnesses(
            Axiom::Triangle,
            tol,
            witnesses,
            total,
            AuditMode::Exhaustive,
            failed,
        );
        rep.worst_violation = worst;
        rep
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut witnesses = Vec::new();
        for _ in 0..budget {
            let (x, y, z) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            if let Some(w) = triangle_witness(t, x, y, z, tol) {
                witnesses.push(w);
            }
        }
        witnesses.sort_by(|a, b| a.indices.cmp(&b.indices));
        witnesses.dedup_by(|a, b| a.indices == b.indices);
        let failed = !witnesses.is_empty();
        AuditReport::from_witnesses(
            Axiom::Triangle,
            tol,
            witnesses,
            budget,
            AuditMode::Sampled {
                seed,
                samples: budget,
            },
            failed,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryProfile {
    /// Max `|E(x,y) - E(y,x)|` over pairs finite in both directions.
    pub max_gap: f64,
    pub mean_gap: f64,
    /// `(x, y)` with `E(x,y)` finite and `E(y,x)` infinite, row-major.
    pub one_way_pairs: Vec<(usize, usize)>,
}

pub fn asymmetry_profile(t: &EnergyTable) -> AsymmetryProfile {
    let n = t.n_states();
    let mut max_gap = 0.0f64;
    let mut sum = 0.0;
    let mut count = 0usize;
    for x in 0..n {
        for y in x + 1..n {
            if let (Finite(a), Finite(b)) = (t.get(x, y), t.get(y, x)) {
                let gap = (a - b).abs();
                max_gap = max_gap.max(gap);
                sum += gap;
                count += 1;
            }
        }
    }
    let one_way_pairs = t
        .off_diagonal()
        .filter(|&(x, y, v)| v.is_finite() && t.get(y, x).is_infinite())
        .map(|(x, y, _)| (x, y))
        .collect();
    AsymmetryProfile {
        max_gap,
        mean_gap: if count == 0 { 0.0 } else { sum / count as f64 },
        one_way_pairs,
    }
}

/// Lower bound on the worst absolute error of any symmetric energy against
/// the table with `Infinite` replaced by `cap`.
///
/// On a one-way pair a symmetric value `s` must serve both `E(x,y)` and
/// `cap`, and `max(|s - E(x,y)|, |s - cap|) >= (cap - E(x,y)) / 2`.
pub fn symmetric_obstruction_bound(t: &EnergyTable, cap: f64) -> Result<f64> {
    let max_finite = t.max_finite().unwrap_or(f64::NEG_INFINITY);
    if !(cap > max_finite) {
        return Err(Error::CapTooSmall { cap, max_finite });
    }
    Ok(asymmetry_profile(t)
        .one_way_pairs
        .iter()
        .map(|&(x, y)| (cap - t.get(x, y).capped(cap)) / 2.0)
        .fold(0.0, f64::max))
}

/// All four axiom checks with the asymmetry profile and, given a cap, the
/// symmetric obstruction bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasimetricAudit {
    pub n_states: usize,
    pub passed: bool,
    pub reports: Vec<AuditReport>,
    pub asymmetry: AsymmetryProfile,
    pub obstruction_bound: Option<f64>,
}

pub fn audit_table(
    t: &EnergyTable,
    tol: f64,
    budget: u64,
    seed: u64,
    cap: Option<f64>,
) -> Result<QuasimetricAudit> {
    let reports = vec![
        check_reflexivity(t, tol),
        check_nonnegativity(t, tol),
        check_identity(t, tol),
        check_triangle(t, tol, budget, seed),
    ];
    let obstruction_bound = cap.map(|c| symmetric_obstruction_bound(t, c)).transpose()?;
    Ok(QuasimetricAudit {
        n_states: t.n_states(),
        passed: reports.iter().all(|r| r.passed),
        reports,
        asymmetry: asymmetry_profile(t),
        obstruction_bound,
    })
}
