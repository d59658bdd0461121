use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A clique of mutually similar images. Outliers are singleton clusters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    pub id: String,
    pub members: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroundTruthDocument {
    clusters: Vec<Cluster>,
}

/// Partition of the dataset into clusters, with a reverse member index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    clusters: Vec<Cluster>,
    membership: BTreeMap<String, usize>,
}

pub fn load_ground_truth(path: impl AsRef<Path>) -> Result<GroundTruth> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    GroundTruth::from_json(&bytes)
}

impl GroundTruth {
    pub fn new(clusters: Vec<Cluster>) -> Result<Self> {
        if clusters.is_empty() {
            return Err(Error::EmptyGroundTruth);
        }
        let mut membership = BTreeMap::new();
        let mut cluster_ids = HashSet::new();
        for (index, cluster) in clusters.iter().enumerate() {
            if !cluster_ids.insert(cluster.id.as_str()) {
                return Err(Error::Parse(format!("duplicate cluster id `{}`", cluster.id)));
            }
            if cluster.members.is_empty() {
                return Err(Error::Parse(format!("cluster `{}` has no members", cluster.id)));
            }
            for member in &cluster.members {
                if membership.insert(member.clone(), index).is_some() {
                    return Err(Error::DuplicateMember(member.clone()));
                }
            }
        }
        Ok(Self {
            clusters,
            membership,
        })
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        if bytes.iter().all(u8::is_ascii_whitespace) {
            return Err(Error::EmptyGroundTruth);
        }
        let doc: GroundTruthDocument =
            serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(doc.clusters)
    }

    pub fn to_json(&self) -> Vec<u8> {
        let doc = GroundTruthDocument {
            clusters: self.clusters.clone(),
        };
        let mut out = serde_json::to_vec_pretty(&doc).expect("ground truth serializes");
        out.push(b'\n');
        out
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    /// Number of images covered.
    pub fn len(&self) -> usize {
        self.membership.len()
    }

    pub fn is_empty(&self) -> bool {
        self.membership.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.membership.contains_key(id)
    }

    pub fn cluster_of(&self, id: &str) -> Option<&str> {
        self.membership
            .get(id)
            .map(|&i| self.clusters[i].id.as_str())
    }

    /// Whether `id` sits in a singleton cluster.
    pub fn is_outlier(&self, id: &str) -> Option<bool> {
        self.membership
            .get(id)
            .map(|&i| self.clusters[i].members.len() == 1)
    }

    /// True iff `a` and `b` are distinct members of the same clique.
    pub fn same_clique(&self, a: &str, b: &str) -> bool {
        a != b
            && matches!(
                (self.membership.get(a), self.membership.get(b)),
                (Some(x), Some(y)) if x == y
            )
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.membership.keys().map(String::as_str)
    }

    /// Fraction of images that belong to a cluster of size two or more.
    pub fn non_outlier_fraction(&self) -> f64 {
        if self.membership.is_empty() {
            return 0.0;
        }
        let linked: usize = self
            .clusters
            .iter()
            .filter(|c| c.members.len() >= 2)
            .map(|c| c.members.len())
            .sum();
        linked as f64 / self.membership.len() as f64
    }

    /// Check that every id in `ids` is covered by this ground truth.
    pub fn check_covers<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<()> {
        for id in ids {
            if !self.contains(id) {
                return Err(Error::UnknownId(id.to_owned()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gt(json: &str) -> Result<GroundTruth> {
        GroundTruth::from_json(json.as_bytes())
    }

    #[test]
    fn loads_clusters_and_outliers() {
        let g = gt(r#"{"clusters":[{"id":"c1","members":["A","B"]},{"id":"c2","members":["C"]}]}"#)
            .unwrap();
        assert_eq!(g.clusters().len(), 2);
        assert_eq!(g.len(), 3);
        assert_eq!(g.is_outlier("C"), Some(true));
        assert_eq!(g.is_outlier("A"), Some(false));
        assert!(g.same_clique("A", "B"));
        assert!(!g.same_clique("A", "C"));
        assert!(!g.same_clique("A", "A"));
        assert!((g.non_outlier_fraction() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_duplicate_membership() {
        let err = gt(r#"{"clusters":[{"id":"c1","members":["A","D"]},{"id":"c2","members":["D"]}]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::DuplicateMember(m) if m == "D"));
    }

    #[test]
    fn rejects_empty_and_malformed() {
        assert!(matches!(gt(""), Err(Error::EmptyGroundTruth)));
        assert!(matches!(gt("  \n"), Err(Error::EmptyGroundTruth)));
        assert!(matches!(gt(r#"{"clusters":[]}"#), Err(Error::EmptyGroundTruth)));
        assert!(matches!(gt("{"), Err(Error::Parse(_))));
        assert!(matches!(gt(r#"{"clusters":[{"id":"c","members":[]}]}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn json_round_trip() {
        let g = gt(r#"{"clusters":[{"id":"c1","members":["A","B"]},{"id":"c2","members":["C"]}]}"#)
            .unwrap();
        assert_eq!(GroundTruth::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn coverage_check() {
        let g = gt(r#"{"clusters":[{"id":"c1","members":["A","B"]}]}"#).unwrap();
        assert!(g.check_covers(["A", "B"]).is_ok());
        assert!(matches!(g.check_covers(["A", "Z"]), Err(Error::UnknownId(z)) if z == "Z"));
    }
}
