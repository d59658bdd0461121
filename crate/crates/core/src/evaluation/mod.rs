//! Ground-truth scoring, normalization, algorithm-vs-algorithm matrices and
//! overview reports.

mod matrix;
mod report;

pub use matrix::{inclusion_matrix, matrix_heatmap, pair_quality_matrix, Matrix};
pub use report::{overview_report, overview_tex, overview_text, OverviewRow};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EdgeSet, GroundTruth, MatchGraph};

/// Quality of one configuration against the ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreCard {
    pub algorithm: String,
    pub raw_tp: f64,
    pub normalized_tp: f64,
    pub max_score: f64,
}

impl ScoreCard {
    pub fn new(algorithm: impl Into<String>, raw_tp: f64, max_score: f64) -> Result<Self> {
        Ok(Self {
            algorithm: algorithm.into(),
            raw_tp,
            normalized_tp: normalize(raw_tp, max_score)?,
            max_score,
        })
    }
}

/// Undirected edges between every pair of distinct clique members.
pub fn ground_truth_edges(gt: &GroundTruth) -> EdgeSet {
    let mut set = EdgeSet::new(false);
    for c in gt.clusters() {
        for (i, a) in c.members.iter().enumerate() {
            for b in &c.members[i + 1..] {
                set.insert(a, b);
            }
        }
    }
    set
}

/// `|re ∩ gt| / |re|`; membership is tested in `gt`'s own directedness.
pub fn intersection_ratio(re: &EdgeSet, gt: &EdgeSet) -> Result<f64> {
    if re.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let hits = re.iter().filter(|(a, b)| gt.contains(a, b)).count();
    Ok(hits as f64 / re.len() as f64)
}

/// Fraction of rank-1 guesses that land in the query's clique.
///
/// The denominator is the number of queries that emitted a rank-1 edge.
pub fn true_positive_score(graph: &MatchGraph, gt: &GroundTruth) -> Result<f64> {
    gt.check_covers(graph.node_ids())?;
    let rank1 = graph.rank1();
    if rank1.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let hits = rank1
        .values()
        .filter(|e| gt.same_clique(&e.from, &e.to))
        .count();
    Ok(hits as f64 / rank1.len() as f64)
}

/// Best score reachable by an algorithm that always guesses: the non-outlier fraction.
pub fn max_score(gt: &GroundTruth) -> f64 {
    gt.non_outlier_fraction()
}

pub fn normalize(raw: f64, max: f64) -> Result<f64> {
    if max <= 0.0 {
        return Err(Error::ZeroMaxScore);
    }
    if !(0.0..=max + 1e-12).contains(&raw) {
        return Err(Error::InvalidInput(format!(
            "raw score {raw} outside [0, {max}]"
        )));
    }
    Ok(raw / max)
}

/// [`ScoreCard`] for a graph; queries without a guess are simply absent from the ratio.
pub fn score_card(graph: &MatchGraph, gt: &GroundTruth) -> Result<ScoreCard> {
    let raw = true_positive_score(graph, gt)?;
    ScoreCard::new(graph.algorithm(), raw, max_score(gt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{edge_set, graph_from_rank1, Cluster, Node};
    use std::collections::BTreeMap;

    pub(crate) fn gt(clusters: &[&[&str]]) -> GroundTruth {
        GroundTruth::new(
            clusters
                .iter()
                .enumerate()
                .map(|(i, m)| Cluster {
                    id: format!("c{i}"),
                    members: m.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
        )
        .unwrap()
    }

    pub(crate) fn rank1_graph(name: &str, nodes: &[&str], guesses: &[(&str, &str)]) -> MatchGraph {
        let map: BTreeMap<String, (String, f64)> = guesses
            .iter()
            .map(|(a, b)| (a.to_string(), (b.to_string(), 0.1)))
            .collect();
        graph_from_rank1(name, nodes.iter().map(|n| Node::new(*n)).collect(), &map).unwrap()
    }

    fn set(directed: bool, edges: &[(&str, &str)]) -> EdgeSet {
        let mut s = EdgeSet::new(directed);
        for (a, b) in edges {
            s.insert(a, b);
        }
        s
    }

    #[test]
    fn intersection_examples() {
        let ten: Vec<(String, String)> = (0..10).map(|i| (format!("a{i}"), format!("b{i}"))).collect();
        let ten_ref: Vec<(&str, &str)> = ten.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let s = set(true, &ten_ref);
        assert_eq!(intersection_ratio(&s, &s).unwrap(), 1.0);
        assert_eq!(intersection_ratio(&set(true, &[("x", "y")]), &s).unwrap(), 0.0);
        let re = set(true, &[("A", "B"), ("C", "D"), ("E", "F")]);
        let g = set(false, &[("B", "A"), ("C", "D"), ("G", "H")]);
        assert!((intersection_ratio(&re, &g).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(intersection_ratio(&EdgeSet::new(true), &g), Err(Error::EmptyEdgeSet)));
    }

    #[test]
    fn tp_on_toy_set() {
        // {A,B,C} clique, {D,E} clique... plus outlier F.
        let truth = gt(&[&["A", "B", "C"], &["D", "E"], &["F"]]);
        let nodes = ["A", "B", "C", "D", "E", "F"];
        let g = rank1_graph(
            "toy",
            &nodes,
            &[("A", "B"), ("B", "D"), ("C", "A"), ("D", "E"), ("E", "F"), ("F", "A")],
        );
        // Hand count: A->B ok, B->D no, C->A ok, D->E ok, E->F no, F->A no.
        assert_eq!(true_positive_score(&g, &truth).unwrap(), 0.5);
        let via_formula =
            intersection_ratio(&edge_set(&g, 1, true), &ground_truth_edges(&truth)).unwrap();
        assert_eq!(via_formula, 0.5);
        assert!((max_score(&truth) - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_node_rejected() {
        let truth = gt(&[&["A", "B"]]);
        let g = rank1_graph("x", &["A", "Z"], &[("A", "Z")]);
        assert!(matches!(true_positive_score(&g, &truth), Err(Error::UnknownId(_))));
    }

    #[test]
    fn perfect_guesses_reach_coverage() {
        let truth = gt(&[&["A", "B"], &["C", "D"]]);
        let g = rank1_graph("p", &["A", "B", "C", "D"], &[("A", "B"), ("B", "A"), ("C", "D"), ("D", "C")]);
        let card = score_card(&g, &truth).unwrap();
        assert_eq!((card.raw_tp, card.normalized_tp, card.max_score), (1.0, 1.0, 1.0));
    }

    #[test]
    fn max_score_extremes_and_normalize() {
        assert_eq!(max_score(&gt(&[&["A", "B"], &["C", "D"]])), 1.0);
        assert_eq!(max_score(&gt(&[&["A"], &["B"]])), 0.0);
        assert!(matches!(normalize(0.0, 0.0), Err(Error::ZeroMaxScore)));
        assert_eq!(normalize(0.3, 0.3).unwrap(), 1.0);
        assert!(normalize(0.5, 0.3).is_err());
    }

    #[test]
    fn published_ratios() {
        let max: f64 = 174.0 / 207.0;
        assert!((max - 0.84058).abs() < 5e-6);
        for (raw, norm) in [(0.60386, 0.71839), (0.65263, 0.77641), (0.4058, 0.48276)] {
            assert!((normalize(raw, 0.84058).unwrap() - norm).abs() < 1e-4);
            assert!((normalize(raw, max).unwrap() - norm).abs() < 1e-4);
        }
    }
}
