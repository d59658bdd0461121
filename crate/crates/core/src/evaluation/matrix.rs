use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::imaging::GrayImage;
use crate::model::{edge_set, GroundTruth, MatchGraph};

use super::intersection_ratio;

/// Square matrix indexed by algorithm labels; cells may be NaN when undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

impl Matrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row][col]
    }

    /// Header row of labels (first cell empty), then one row per label; 5 decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("algorithm");
        for l in &self.labels {
            out.push(',');
            out.push_str(&csv_field(l));
        }
        out.push('\n');
        for (label, row) in self.labels.iter().zip(&self.values) {
            out.push_str(&csv_field(label));
            for v in row {
                out.push(',');
                if v.is_nan() {
                    out.push_str("NaN");
                } else {
                    out.push_str(&format!("{v:.5}"));
                }
            }
            out.push('\n');
        }
        out
    }
}

fn check_nodes(graphs: &[&MatchGraph]) -> Result<BTreeSet<String>> {
    let first = graphs
        .first()
        .ok_or_else(|| Error::InvalidInput("need at least one graph".into()))?;
    let nodes: BTreeSet<String> = first.node_ids().into_iter().map(str::to_owned).collect();
    for g in &graphs[1..] {
        if g.node_ids().into_iter().ne(nodes.iter().map(String::as_str)) {
            return Err(Error::NodeSetMismatch);
        }
    }
    Ok(nodes)
}

/// Cell `(y, x)`: share of algorithm y's rank-1 edges that algorithm x also emitted.
///
/// Edges are compared as directed query→guess pairs. A row whose graph has no
/// edges is NaN.
pub fn inclusion_matrix(graphs: &[&MatchGraph]) -> Result<Matrix> {
    check_nodes(graphs)?;
    let sets: Vec<_> = graphs.iter().map(|g| edge_set(g, 1, true)).collect();
    let values = sets
        .iter()
        .map(|re| {
            sets.iter()
                .map(|other| intersection_ratio(re, other).unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    Ok(Matrix {
        labels: graphs.iter().map(|g| g.algorithm().to_owned()).collect(),
        values,
    })
}

/// Cell `(i, j)`: share of queries whose rank-1 guess is in-clique for algorithm i or j.
pub fn pair_quality_matrix(graphs: &[&MatchGraph], gt: &GroundTruth) -> Result<Matrix> {
    let nodes = check_nodes(graphs)?;
    gt.check_covers(nodes.iter().map(String::as_str))?;
    let hits: Vec<Vec<bool>> = graphs
        .iter()
        .map(|g| {
            let r1 = g.rank1();
            nodes
                .iter()
                .map(|q| r1.get(q.as_str()).is_some_and(|e| gt.same_clique(&e.from, &e.to)))
                .collect()
        })
        .collect();
    let n = nodes.len().max(1) as f64;
    let values = hits
        .iter()
        .map(|hi| {
            hits.iter()
                .map(|hj| hi.iter().zip(hj).filter(|(a, b)| **a || **b).count() as f64 / n)
                .collect()
        })
        .collect();
    Ok(Matrix {
        labels: graphs.iter().map(|g| g.algorithm().to_owned()).collect(),
        values,
    })
}

/// Gray heatmap, `cell` pixels per entry; darker means larger. NaN renders mid-gray.
pub fn matrix_heatmap(m: &Matrix, cell: u32) -> GrayImage {
    let cell = cell.max(1);
    let side = (m.len() as u32 * cell).max(1);
    GrayImage::from_fn(side, side, |x, y| {
        let (r, c) = ((y / cell) as usize, (x / cell) as usize);
        match m.values.get(r).and_then(|row| row.get(c)) {
            Some(v) if v.is_finite() => (255.0 * (1.0 - v.clamp(0.0, 1.0))).round() as u8,
            _ => 128,
        }
    })
}
