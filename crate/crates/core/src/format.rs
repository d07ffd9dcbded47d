//! Text formats for systems, tables and reports.
//!
//! Everything is JSON with a fixed key order. Floats use the shortest
//! representation that round-trips, so re-serializing a parsed file
//! reproduces it byte for byte. Systems and tables put one edge or row per
//! line to keep diffs readable.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::cost::{ExtendedCost, Finite, Infinite};
use crate::error::Result;
use crate::solver::EnergyTable;
use crate::system::{DirectedTransitionSystem, Edge};

/// Edge cost field: a JSON number. `"inf"` is recognized only to reject it,
/// since an admissible step always has finite cost.
struct EdgeCost(f64);

impl<'de> Deserialize<'de> for EdgeCost {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ExtendedCost::deserialize(d)? {
            Finite(c) => Ok(EdgeCost(c)),
            Infinite => Err(D::Error::custom(
                "edge cost \"inf\" is not admissible; omit the edge instead",
            )),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    n_states: usize,
    edges: Vec<(usize, usize, EdgeCost)>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data always serializes")
}

fn push_lines(out: &mut String, key: &str, items: &[String], last: bool) {
    out.push_str(&format!("  \"{key}\": ["));
    if items.is_empty() {
        out.push(']');
    } else {
        out.push('\n');
        for (i, item) in items.iter().enumerate() {
            out.push_str("    ");
            out.push_str(item);
            if i + 1 < items.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ]");
    }
    out.push_str(if last { "\n" } else { ",\n" });
}

/// Keys `n_states`, `edges` (`[src, dst, cost]`), then `labels` if present.
pub fn serialize_system(sys: &DirectedTransitionSystem) -> String {
    let edges: Vec<String> = sys
        .edges()
        .iter()
        .map(|e| json(&(e.src.0, e.dst.0, e.cost)))
        .collect();
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"n_states\": {},\n", sys.n_states()));
    match sys.labels() {
        Some(labels) => {
            push_lines(&mut out, "edges", &edges, false);
            let labels: Vec<String> = labels.iter().map(json).collect();
            push_lines(&mut out, "labels", &labels, true);
        }
        None => push_lines(&mut out, "edges", &edges, true),
    }
    out.push_str("}\n");
    out
}

/// Parses the system format. Structural validity (ranges, signs,
/// duplicates) is left to [`DirectedTransitionSystem::validate`].
pub fn parse_system(text: &str) -> Result<DirectedTransitionSystem> {
    let f: SystemFile = serde_json::from_str(text)?;
    let edges = f
        .edges
        .into_iter()
        .map(|(s, d, EdgeCost(c))| Edge::new(s, d, c))
        .collect();
    let sys = DirectedTransitionSystem::new(f.n_states, edges);
    Ok(match f.labels {
        Some(l) => sys.with_labels(l),
        None => sys,
    })
}

/// Keys `n_states`, `rows`; `Infinite` entries as `"inf"`.
pub fn serialize_table(t: &EnergyTable) -> String {
    let rows: Vec<String> = (0..t.n_states()).map(|x| json(t.row(x))).collect();
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"n_states\": {},\n", t.n_states()));
    push_lines(&mut out, "rows", &rows, true);
    out.push_str("}\n");
    out
}

pub fn parse_table(text: &str) -> Result<EnergyTable> {
    Ok(serde_json::from_str(text)?)
}

/// Pretty JSON with a trailing newline, for reports and checkpoints.
pub fn to_pretty<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data always serializes");
    s.push('\n');
    s
}
