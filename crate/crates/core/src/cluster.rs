//! Turning pairwise match decisions into author identities.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{bird_match, simple_match};
use crate::error::{Error, Result};
use crate::normalize::Alias;
use crate::rules::{gambit_match, MatcherConfig};

/// Disambiguation algorithm.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[default]
    Gambit,
    Bird,
    Simple,
}

impl Method {
    pub fn matches(self, i: &Alias, j: &Alias, cfg: &MatcherConfig) -> bool {
        match self {
            Method::Gambit => gambit_match(i, j, cfg),
            Method::Bird => bird_match(i, j, cfg),
            Method::Simple => simple_match(i, j, cfg),
        }
    }

    /// Whether the threshold and similarity measure affect the result.
    pub fn uses_threshold(self) -> bool {
        !matches!(self, Method::Simple)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Gambit => "gambit",
            Method::Bird => "bird",
            Method::Simple => "simple",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gambit" => Ok(Method::Gambit),
            "bird" => Ok(Method::Bird),
            "simple" => Ok(Method::Simple),
            other => Err(format!(
                "unknown method `{other}` (expected gambit, bird or simple)"
            )),
        }
    }
}

/// Union-find over dense indices with union by size and path compression.
#[derive(Clone, Debug)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Merges the sets of `a` and `b`; returns false if they were already one.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Assignment of every alias id to an author id.
///
/// Author ids are canonical: each is the lexicographically smallest alias id
/// in its cluster, so equal groupings compare equal regardless of how they
/// were built.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    assignment: BTreeMap<String, String>,
}

impl Partition {
    /// Groups aliases by arbitrary cluster labels and canonicalises the ids.
    pub fn from_labels<I, A, L>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, L)>,
        A: Into<String>,
        L: Into<String>,
    {
        let mut by_alias = BTreeMap::new();
        for (alias, label) in labels {
            let alias = alias.into();
            if by_alias.contains_key(&alias) {
                return Err(Error::DuplicateId(alias));
            }
            by_alias.insert(alias, label.into());
        }
        // Iteration is sorted, so the first alias seen per label is the smallest.
        let mut canonical: HashMap<&str, &str> = HashMap::new();
        for (alias, label) in &by_alias {
            canonical.entry(label.as_str()).or_insert(alias.as_str());
        }
        let assignment = by_alias
            .iter()
            .map(|(alias, label)| (alias.clone(), canonical[label.as_str()].to_owned()))
            .collect();
        Ok(Self { assignment })
    }

    /// Every alias in a cluster of its own.
    pub fn singletons<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::from_labels(ids.into_iter().map(|id| {
            let id = id.into();
            (id.clone(), id)
        }))
    }

    pub fn from_groups<G, S>(groups: impl IntoIterator<Item = G>) -> Result<Self>
    where
        G: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels = Vec::new();
        for (k, group) in groups.into_iter().enumerate() {
            for id in group {
                labels.push((id.into(), k.to_string()));
            }
        }
        Self::from_labels(labels)
    }

    pub fn author_of(&self, alias: &str) -> Option<&str> {
        self.assignment.get(alias).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// `(alias id, author id)` in alias id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.assignment
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn alias_ids(&self) -> impl Iterator<Item = &str> {
        self.assignment.keys().map(String::as_str)
    }

    pub fn num_authors(&self) -> usize {
        self.assignment.iter().filter(|(a, b)| a == b).count()
    }

    /// Clusters keyed by author id, members sorted.
    pub fn clusters(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut out: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (alias, author) in self.iter() {
            out.entry(author).or_default().push(alias);
        }
        out
    }

    pub fn same_author(&self, a: &str, b: &str) -> bool {
        match (self.author_of(a), self.author_of(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    /// All unordered same-author pairs `(a, b)` with `a < b`, sorted.
    pub fn same_author_pairs(&self) -> Vec<(&str, &str)> {
        let mut pairs = Vec::new();
        for members in self.clusters().values() {
            for (k, a) in members.iter().enumerate() {
                for b in &members[k + 1..] {
                    pairs.push((*a, *b));
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }

    /// Fails unless both partitions cover exactly the same alias ids.
    pub fn check_same_universe(&self, other: &Partition) -> Result<()> {
        if self.len() == other.len() && self.alias_ids().eq(other.alias_ids()) {
            return Ok(());
        }
        let missing = other.alias_ids().find(|id| self.author_of(id).is_none());
        let extra = self.alias_ids().find(|id| other.author_of(id).is_none());
        let detail = match (extra, missing) {
            (Some(id), _) => format!("`{id}` appears only in the first partition"),
            (None, Some(id)) => format!("`{id}` appears only in the second partition"),
            (None, None) => "alias sets differ".to_owned(),
        };
        Err(Error::UniverseMismatch(detail))
    }
}

/// The finest partition that is coarser than both inputs.
pub fn merge_partitions(p1: &Partition, p2: &Partition) -> Result<Partition> {
    p1.check_same_universe(p2)?;
    let ids: Vec<&str> = p1.alias_ids().collect();
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(k, id)| (*id, k)).collect();
    let mut sets = DisjointSet::new(ids.len());
    for p in [p1, p2] {
        for (alias, author) in p.iter() {
            sets.union(index[alias], index[author]);
        }
    }
    partition_from_sets(&ids, &mut sets)
}

fn partition_from_sets(ids: &[&str], sets: &mut DisjointSet) -> Result<Partition> {
    let labels: Vec<(String, String)> = (0..ids.len())
        .map(|k| (ids[k].to_owned(), sets.find(k).to_string()))
        .collect();
    Partition::from_labels(labels)
}

/// Indices `(i, j)`, `i < j`, of every matched pair, in row-major order.
///
/// Rows are scored in parallel on the current rayon pool; the output order
/// does not depend on the number of threads.
pub fn matched_pairs(
    aliases: &[Alias],
    method: Method,
    cfg: &MatcherConfig,
) -> Vec<(usize, usize)> {
    (0..aliases.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let left = &aliases[i];
            (i + 1..aliases.len())
                .filter(move |&j| method.matches(left, &aliases[j], cfg))
                .map(move |j| (i, j))
        })
        .collect()
}

/// Matches all alias pairs with `method` and closes the matches transitively.
pub fn disambiguate(aliases: &[Alias], method: Method, cfg: &MatcherConfig) -> Result<Partition> {
    cfg.validate()?;
    let mut seen = HashSet::with_capacity(aliases.len());
    for a in aliases {
        if !seen.insert(a.id.as_str()) {
            return Err(Error::DuplicateId(a.id.clone()));
        }
    }
    let mut sets = DisjointSet::new(aliases.len());
    for (i, j) in matched_pairs(aliases, method, cfg) {
        sets.union(i, j);
    }
    let ids: Vec<&str> = aliases.iter().map(|a| a.id.as_str()).collect();
    partition_from_sets(&ids, &mut sets)
}
