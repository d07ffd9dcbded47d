//! Grid discretization of a continuous effort density.
//!
//! Each cell becomes a state; each 4-neighbour move becomes an edge whose
//! cost is `effort(cell, direction) * delta`, the action of one grid step.
//! Cells are indexed row-major: `cell = y * width + x`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{DirectedTransitionSystem, Edge};

/// Unit displacements in the order used for storage and output.
pub const DIRECTIONS: [(i32, i32); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

fn direction_slot(dx: i32, dy: i32) -> Option<usize> {
    DIRECTIONS.iter().position(|&d| d == (dx, dy))
}

/// Sampled effort per (cell, unit displacement). A missing sample means the
/// move is not admissible. Effort for `+v` need not match `-v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub struct EffortField {
    width: usize,
    height: usize,
    delta: f64,
    efforts: Vec<[Option<f64>; 4]>,
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    width: usize,
    height: usize,
    delta: f64,
    efforts: Vec<(usize, i32, i32, f64)>,
}

impl TryFrom<FieldRepr> for EffortField {
    type Error = Error;

    fn try_from(r: FieldRepr) -> Result<Self> {
        let mut f = EffortField::empty(r.width, r.height, r.delta)?;
        for (cell, dx, dy, effort) in r.efforts {
            f.set_effort(cell, (dx, dy), effort)?;
        }
        Ok(f)
    }
}

impl From<EffortField> for FieldRepr {
    fn from(f: EffortField) -> Self {
        let efforts = f
            .efforts
            .iter()
            .enumerate()
            .flat_map(|(cell, slots)| {
                slots
                    .iter()
                    .zip(DIRECTIONS)
                    .filter_map(move |(e, (dx, dy))| e.map(|e| (cell, dx, dy, e)))
            })
            .collect();
        FieldRepr {
            width: f.width,
            height: f.height,
            delta: f.delta,
            efforts,
        }
    }
}

impl EffortField {
    /// A field with no admissible moves yet.
    pub fn empty(width: usize, height: usize, delta: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(format!(
                "field must be at least 1x1, got {width}x{height}"
            )));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "grid spacing must be positive, got {delta}"
            )));
        }
        Ok(EffortField {
            width,
            height,
            delta,
            efforts: vec![[None; 4]; width * height],
        })
    }

    pub fn uniform(width: usize, height: usize, delta: f64, effort: f64) -> Result<Self> {
        Self::from_fn(width, height, delta, |_, _, _| effort)
    }

    /// Constant wind: moving along `+u` costs `1 - w_u`, along `-u` costs `1 + w_u`.
    pub fn wind(width: usize, height: usize, delta: f64, wind: (f64, f64)) -> Result<Self> {
        for w in [wind.0, wind.1] {
            if !(w.abs() < 1.0) {
                return Err(Error::WindOutOfRange(w));
            }
        }
        Self::from_fn(width, height, delta, |_, _, (dx, dy)| {
            1.0 - (dx as f64) * wind.0 - (dy as f64) * wind.1
        })
    }

    /// Effort from a closure of `(x, y, (dx, dy))`, sampled for every direction.
    pub fn from_fn(
        width: usize,
        height: usize,
        delta: f64,
        mut effort: impl FnMut(usize, usize, (i32, i32)) -> f64,
    ) -> Result<Self> {
        let mut f = Self::empty(width, height, delta)?;
        for y in 0..height {
            for x in 0..width {
                for d in DIRECTIONS {
                    f.set_effort(y * width + x, d, effort(x, y, d))?;
                }
            }
        }
        Ok(f)
    }

    pub fn set_effort(&mut self, cell: usize, dir: (i32, i32), effort: f64) -> Result<()> {
        let slot = direction_slot(dir.0, dir.1).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "({}, {}) is not a unit 4-neighbour move",
                dir.0, dir.1
            ))
        })?;
        if cell >= self.efforts.len() {
            return Err(Error::InvalidArgument(format!(
                "cell {cell} outside the grid"
            )));
        }
        if !(effort.is_finite() && effort >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "effort must be finite and nonnegative, got {effort}"
            )));
        }
        self.efforts[cell][slot] = Some(effort);
        Ok(())
    }

    pub fn effort(&self, cell: usize, dir: (i32, i32)) -> Option<f64> {
        direction_slot(dir.0, dir.1).and_then(|s| self.efforts.get(cell)?[s])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn cell(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }
}

/// One state per cell, one edge per in-grid admissible neighbour move.
pub fn lift_effort_field(field: &EffortField) -> DirectedTransitionSystem {
    let (w, h) = (field.width as i64, field.height as i64);
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let cell = (y * w + x) as usize;
            for (slot, (dx, dy)) in DIRECTIONS.iter().enumerate() {
                let (nx, ny) = (x + *dx as i64, y + *dy as i64);
                if nx < 0 || ny < 0 || nx >= w || ny >= h {
                    continue;
                }
                if let Some(e) = field.efforts[cell][slot] {
                    edges.push(Edge::new(cell, (ny * w + nx) as usize, e * field.delta));
                }
            }
        }
    }
    DirectedTransitionSystem::new((w * h) as usize, edges)
}

/// Twice the resolution at half the spacing; each fine cell copies the
/// efforts of the coarse cell covering it.
pub fn refine_field(field: &EffortField) -> EffortField {
    let (w, h) = (field.width * 2, field.height * 2);
    let mut efforts = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            efforts.push(field.efforts[(y / 2) * field.width + x / 2]);
        }
    }
    EffortField {
        width: w,
        height: h,
        delta: field.delta / 2.0,
        efforts,
    }
}
