use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version written into every serialized graph document.
pub const GRAPH_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl Node {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            path: None,
        }
    }

    pub fn with_path(id: impl Into<String>, path: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            path: Some(path.into()),
        }
    }
}

/// Directed, ranked match edge. `score` is a normalized distance: lower is closer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub score: f64,
    pub rank: u32,
}

/// Rank-annotated directed match graph produced by one algorithm configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchGraph {
    algorithm: String,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

impl MatchGraph {
    /// Build a graph, checking every structural invariant.
    pub fn new(algorithm: impl Into<String>, nodes: Vec<Node>, edges: Vec<Edge>) -> Result<Self> {
        let mut ids = HashSet::with_capacity(nodes.len());
        for node in &nodes {
            if !ids.insert(node.id.as_str()) {
                return Err(Error::DuplicateId(node.id.clone()));
            }
        }

        let mut per_query: HashMap<&str, Vec<&Edge>> = HashMap::new();
        let mut pairs = HashSet::with_capacity(edges.len());
        for edge in &edges {
            for end in [&edge.from, &edge.to] {
                if !ids.contains(end.as_str()) {
                    return Err(Error::InvalidGraph(format!("edge endpoint `{end}` is not a node")));
                }
            }
            if edge.from == edge.to {
                return Err(Error::SelfMatch(edge.from.clone()));
            }
            if !(0.0..=1.0).contains(&edge.score) {
                return Err(Error::ScoreOutOfRange(edge.score));
            }
            if edge.rank == 0 {
                return Err(Error::InvalidGraph("ranks start at 1".into()));
            }
            if !pairs.insert((edge.from.as_str(), edge.to.as_str())) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {} -> {}",
                    edge.from, edge.to
                )));
            }
            per_query.entry(edge.from.as_str()).or_default().push(edge);
        }

        for (from, mut list) in per_query {
            list.sort_by_key(|e| e.rank);
            for (expected, edge) in (1u32..).zip(&list) {
                if edge.rank != expected {
                    return Err(Error::InvalidGraph(format!(
                        "ranks of `{from}` are not 1..{}",
                        list.len()
                    )));
                }
            }
            if list.windows(2).any(|w| w[1].score < w[0].score) {
                return Err(Error::InvalidGraph(format!(
                    "scores of `{from}` decrease with rank"
                )));
            }
        }

        Ok(Self {
            algorithm: algorithm.into(),
            nodes,
            edges,
        })
    }

    pub fn empty(algorithm: impl Into<String>, nodes: Vec<Node>) -> Result<Self> {
        Self::new(algorithm, nodes, Vec::new())
    }

    pub fn algorithm(&self) -> &str {
        &self.algorithm
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_ids(&self) -> BTreeSet<&str> {
        self.nodes.iter().map(|n| n.id.as_str()).collect()
    }

    /// Rank-1 guess for every query that produced one.
    pub fn rank1(&self) -> BTreeMap<&str, &Edge> {
        self.edges
            .iter()
            .filter(|e| e.rank == 1)
            .map(|e| (e.from.as_str(), e))
            .collect()
    }

    /// Edges leaving `from`, ordered by rank.
    pub fn ranked_from(&self, from: &str) -> Vec<&Edge> {
        let mut list: Vec<_> = self.edges.iter().filter(|e| e.from == from).collect();
        list.sort_by_key(|e| e.rank);
        list
    }
}

fn check_score(score: f64) -> Result<()> {
    if (0.0..=1.0).contains(&score) {
        Ok(())
    } else {
        Err(Error::ScoreOutOfRange(score))
    }
}

/// Build a graph with one rank-1 edge per query in `per_query_best`.
pub fn graph_from_rank1(
    algorithm: impl Into<String>,
    nodes: Vec<Node>,
    per_query_best: &BTreeMap<String, (String, f64)>,
) -> Result<MatchGraph> {
    let mut edges = Vec::with_capacity(per_query_best.len());
    for (query, (matched, score)) in per_query_best {
        if query == matched {
            return Err(Error::SelfMatch(query.clone()));
        }
        check_score(*score)?;
        edges.push(Edge {
            from: query.clone(),
            to: matched.clone(),
            score: *score,
            rank: 1,
        });
    }
    MatchGraph::new(algorithm, nodes, edges)
}

/// Build a graph from per-query candidate lists already sorted best first.
pub fn graph_from_ranked(
    algorithm: impl Into<String>,
    nodes: Vec<Node>,
    per_query: &BTreeMap<String, Vec<(String, f64)>>,
) -> Result<MatchGraph> {
    let mut edges = Vec::new();
    for (query, list) in per_query {
        for (rank, (matched, score)) in (1u32..).zip(list) {
            if query == matched {
                return Err(Error::SelfMatch(query.clone()));
            }
            check_score(*score)?;
            edges.push(Edge {
                from: query.clone(),
                to: matched.clone(),
                score: *score,
                rank,
            });
        }
    }
    MatchGraph::new(algorithm, nodes, edges)
}

/// Set of edges taken from a graph at a rank cutoff.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeSet {
    directed: bool,
    edges: BTreeSet<(String, String)>,
}

impl EdgeSet {
    pub fn new(directed: bool) -> Self {
        Self {
            directed,
            edges: BTreeSet::new(),
        }
    }

    fn key(&self, a: &str, b: &str) -> (String, String) {
        if self.directed || a <= b {
            (a.to_owned(), b.to_owned())
        } else {
            (b.to_owned(), a.to_owned())
        }
    }

    /// Insert an edge; returns false if it was already present.
    pub fn insert(&mut self, a: &str, b: &str) -> bool {
        let key = self.key(a, b);
        self.edges.insert(key)
    }

    pub fn contains(&self, a: &str, b: &str) -> bool {
        self.edges.contains(&self.key(a, b))
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }
}

/// Edges of `graph` with rank ≤ `rank_cutoff`. Undirected mode collapses (a,b) and (b,a).
pub fn edge_set(graph: &MatchGraph, rank_cutoff: u32, directed: bool) -> EdgeSet {
    let mut set = EdgeSet::new(directed);
    for edge in graph.edges().iter().filter(|e| e.rank <= rank_cutoff) {
        set.insert(&edge.from, &edge.to);
    }
    set
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    #[serde(default = "default_schema_version")]
    schema_version: u32,
    algorithm: String,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

fn default_schema_version() -> u32 {
    GRAPH_SCHEMA_VERSION
}

/// Serialize to the match-graph JSON document (pretty-printed, trailing newline).
pub fn serialize_graph(graph: &MatchGraph) -> Vec<u8> {
    let doc = GraphDocument {
        schema_version: GRAPH_SCHEMA_VERSION,
        algorithm: graph.algorithm.clone(),
        nodes: graph.nodes.clone(),
        edges: graph.edges.clone(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("graph serializes");
    out.push(b'\n');
    out
}

pub fn deserialize_graph(bytes: &[u8]) -> Result<MatchGraph> {
    let doc: GraphDocument =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.schema_version != GRAPH_SCHEMA_VERSION {
        return Err(Error::UnknownSchemaVersion(doc.schema_version));
    }
    MatchGraph::new(doc.algorithm, doc.nodes, doc.edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nodes(ids: &[&str]) -> Vec<Node> {
        ids.iter().map(|id| Node::new(*id)).collect()
    }

    fn best(pairs: &[(&str, &str, f64)]) -> BTreeMap<String, (String, f64)> {
        pairs
            .iter()
            .map(|(q, m, s)| (q.to_string(), (m.to_string(), *s)))
            .collect()
    }

    #[test]
    fn rank1_graph_has_one_edge_per_query() {
        let g = graph_from_rank1(
            "X",
            nodes(&["A", "B"]),
            &best(&[("A", "B", 0.1), ("B", "A", 0.2)]),
        )
        .unwrap();
        assert_eq!(g.edges().len(), 2);
        assert!(g.edges().iter().all(|e| e.rank == 1));
    }

    #[test]
    fn rank1_graph_empty_mapping() {
        let g = graph_from_rank1("X", nodes(&["A", "B", "C"]), &BTreeMap::new()).unwrap();
        assert_eq!(g.nodes().len(), 3);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn rank1_graph_errors() {
        let n = nodes(&["A", "B"]);
        assert!(matches!(
            graph_from_rank1("X", n.clone(), &best(&[("A", "A", 0.1)])),
            Err(Error::SelfMatch(_))
        ));
        assert!(matches!(
            graph_from_rank1("X", n.clone(), &best(&[("A", "B", 1.5)])),
            Err(Error::ScoreOutOfRange(_))
        ));
        assert!(matches!(
            graph_from_rank1("X", n, &best(&[("A", "Z", 0.5)])),
            Err(Error::InvalidGraph(_))
        ));
    }

    /// Leave-one-out nearest neighbour by exhaustive scan, first id wins ties.
    fn brute_force_nn(points: &[(&str, f64)]) -> BTreeMap<String, (String, f64)> {
        let mut out = BTreeMap::new();
        for (i, (qa, va)) in points.iter().enumerate() {
            let mut best: Option<(&str, f64)> = None;
            for (j, (qb, vb)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let d = (va - vb).abs();
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((qb, d));
                }
            }
            let (m, d) = best.unwrap();
            out.insert(qa.to_string(), (m.to_string(), d));
        }
        out
    }

    #[test]
    fn rank1_graph_matches_brute_force_nn() {
        let points = [("a", 0.0), ("b", 0.1), ("c", 0.45), ("d", 0.5), ("e", 0.95)];
        let nn = brute_force_nn(&points);
        let ids: Vec<&str> = points.iter().map(|p| p.0).collect();
        let g = graph_from_rank1("NN", nodes(&ids), &nn).unwrap();
        let got: Vec<(&str, &str)> = g.edges().iter().map(|e| (e.from.as_str(), e.to.as_str())).collect();
        assert_eq!(got, [("a", "b"), ("b", "a"), ("c", "d"), ("d", "c"), ("e", "d")]);
    }

    fn ranked_graph(n: usize, k: usize) -> MatchGraph {
        let ids: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
        let mut per_query = BTreeMap::new();
        for (i, q) in ids.iter().enumerate() {
            let list = (1..=k)
                .map(|r| (ids[(i + r) % n].clone(), r as f64 / 10.0))
                .collect();
            per_query.insert(q.clone(), list);
        }
        let nodes = ids.iter().map(|i| Node::new(i.clone())).collect();
        graph_from_ranked("R", nodes, &per_query).unwrap()
    }

    #[test]
    fn edge_set_cutoffs() {
        let g = ranked_graph(10, 2);
        assert_eq!(edge_set(&g, 1, true).len(), 10);
        assert!(edge_set(&g, 1, true).iter().all(|(a, b)| {
            g.edges().iter().any(|e| e.from == a && e.to == b && e.rank == 1)
        }));
        // 10 nodes x 3 ranks, counted directly.
        let g3 = ranked_graph(10, 3);
        let expected: usize = (1..=3).map(|_| 10).sum();
        assert_eq!(edge_set(&g3, 3, true).len(), expected);
    }

    #[test]
    fn undirected_collapses_reciprocal_edges() {
        let g = graph_from_rank1(
            "X",
            nodes(&["A", "B"]),
            &best(&[("A", "B", 0.1), ("B", "A", 0.2)]),
        )
        .unwrap();
        assert_eq!(edge_set(&g, 1, false).len(), 1);
        assert_eq!(edge_set(&g, 1, true).len(), 2);
        assert!(edge_set(&g, 1, false).contains("B", "A"));
    }

    #[test]
    fn graph_invariants_enforced() {
        let e = |f: &str, t: &str, s: f64, r: u32| Edge {
            from: f.into(),
            to: t.into(),
            score: s,
            rank: r,
        };
        let n = nodes(&["A", "B", "C"]);
        // rank gap
        assert!(MatchGraph::new("X", n.clone(), vec![e("A", "B", 0.1, 2)]).is_err());
        // two rank-1 edges from one node
        assert!(MatchGraph::new("X", n.clone(), vec![e("A", "B", 0.1, 1), e("A", "C", 0.2, 1)]).is_err());
        // decreasing score
        assert!(MatchGraph::new("X", n.clone(), vec![e("A", "B", 0.3, 1), e("A", "C", 0.2, 2)]).is_err());
        assert!(MatchGraph::new("X", n, vec![e("A", "B", 0.2, 1), e("A", "C", 0.2, 2)]).is_ok());
    }

    #[test]
    fn empty_graph_round_trips() {
        let g = MatchGraph::empty("EMPTY", vec![]).unwrap();
        let bytes = serialize_graph(&g);
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.contains("\"nodes\": []") && text.contains("\"edges\": []"));
        assert_eq!(deserialize_graph(&bytes).unwrap(), g);
    }

    #[test]
    fn small_graph_round_trips_bit_identically() {
        let g = graph_from_rank1(
            "A HASH",
            vec![Node::with_path("img_a", "data/img_a.png"), Node::new("img_b")],
            &best(&[("img_a", "img_b", 0.12)]),
        )
        .unwrap();
        let bytes = serialize_graph(&g);
        let back = deserialize_graph(&bytes).unwrap();
        assert_eq!(back, g);
        assert_eq!(serialize_graph(&back), bytes);
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.contains("\"from\": \"img_a\"") && text.contains("\"to\": \"img_b\""));
    }

    #[test]
    fn deserialize_errors() {
        assert!(matches!(deserialize_graph(b"not json"), Err(Error::Parse(_))));
        let doc = br#"{"schema_version":7,"algorithm":"x","nodes":[],"edges":[]}"#;
        assert!(matches!(deserialize_graph(doc), Err(Error::UnknownSchemaVersion(7))));
        let doc = br#"{"algorithm":"x","nodes":[{"id":"a"}],"edges":[]}"#;
        assert!(deserialize_graph(doc).is_ok());
    }

    fn arb_graph() -> impl Strategy<Value = MatchGraph> {
        (1usize..200, 0usize..4, any::<u64>()).prop_map(|(n, k, seed)| {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let ids: Vec<String> = (0..n).map(|i| format!("img_{i:03}")).collect();
            let mut per_query = BTreeMap::new();
            let k = k.min(n.saturating_sub(1));
            for (i, q) in ids.iter().enumerate() {
                if rng.random_bool(0.2) {
                    continue;
                }
                let mut scores: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
                scores.sort_by(f64::total_cmp);
                let list = scores
                    .into_iter()
                    .enumerate()
                    .map(|(r, s)| (ids[(i + r + 1) % n].clone(), s))
                    .collect();
                per_query.insert(q.clone(), list);
            }
            let nodes = ids.iter().map(|i| Node::with_path(i.clone(), format!("{i}.png"))).collect();
            graph_from_ranked("RANDOM", nodes, &per_query).unwrap()
        })
    }

    proptest! {
        #[test]
        fn serialization_round_trip(g in arb_graph()) {
            let bytes = serialize_graph(&g);
            prop_assert_eq!(deserialize_graph(&bytes).unwrap(), g);
        }
    }
}
