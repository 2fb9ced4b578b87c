//! Set systems over a vertex universe of at most 128 vertices.
//!
//! A [`Hypergraph`] keeps its edges sorted in colex order without duplicates,
//! so two hypergraphs with the same edge set compare (and serialise) equal.

use serde::de::Error as _;
use serde::de::{IgnoredAny, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    k: Option<usize>,
    edges: Vec<VertexSet>,
}

/// Sort colexicographically and drop duplicates.
pub fn canonicalize(edges: &mut Vec<VertexSet>) {
    edges.sort_unstable();
    edges.dedup();
}

impl Hypergraph {
    /// A set system on `n` vertices. The uniformity tag is inferred: it is
    /// set when there is at least one edge and all edges share a size.
    pub fn new(n: usize, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        let mut h = Self::untagged(n, edges)?;
        h.k = h.inferred_uniformity();
        Ok(h)
    }

    /// A `k`-uniform hypergraph; the tag is kept even when there are no edges.
    pub fn uniform(n: usize, k: usize, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidParams(format!(
                "edge size {k} exceeds vertex count {n}"
            )));
        }
        let mut h = Self::untagged(n, edges)?;
        if let Some(e) = h.edges.iter().find(|e| e.len() != k) {
            return Err(Error::NotUniform {
                edge: *e,
                expected: k,
                found: e.len(),
            });
        }
        h.k = Some(k);
        Ok(h)
    }

    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        Hypergraph {
            n,
            k: None,
            edges: Vec::new(),
        }
    }

    fn untagged(n: usize, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::UniverseTooLarge(n));
        }
        let universe = VertexSet::full(n);
        let mut edges: Vec<VertexSet> = edges.into_iter().collect();
        if let Some(e) = edges.iter().find(|e| !e.is_subset(universe)) {
            return Err(Error::EdgeOutOfRange { edge: *e, n });
        }
        canonicalize(&mut edges);
        Ok(Hypergraph { n, k: None, edges })
    }

    fn inferred_uniformity(&self) -> Option<usize> {
        let first = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == first).then_some(first)
    }

    /// A sub-system of `self` (edges are assumed to come from `self`), keeping
    /// the uniformity tag.
    fn derived(&self, edges: Vec<VertexSet>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Hypergraph {
            n: self.n,
            k: self.k,
            edges,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The uniformity tag, if any.
    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn universe(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn contains_edge(&self, e: VertexSet) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Union of all edges.
    pub fn support(&self) -> VertexSet {
        self.edges.iter().fold(VertexSet::EMPTY, |acc, &e| acc | e)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for v in e.iter() {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// `H[W]`: the edges lying entirely inside `w`, on the same universe.
    pub fn induced(&self, w: VertexSet) -> Hypergraph {
        self.filter(|e| e.is_subset(w))
    }

    pub fn filter(&self, mut keep: impl FnMut(VertexSet) -> bool) -> Hypergraph {
        self.derived(self.edges.iter().copied().filter(|&e| keep(e)).collect())
    }

    /// Edges of `self` that are not edges of `other`.
    pub fn difference(&self, other: &Hypergraph) -> Hypergraph {
        self.filter(|e| !other.contains_edge(e))
    }

    /// Connected components of the edge-overlap graph.
    ///
    /// Components are listed in order of their first edge. The empty edge, if
    /// present, forms a component with no vertices. Vertices lying in no edge
    /// are reported in [`Components::isolated`].
    pub fn components(&self) -> Components {
        let m = self.edges.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut owner: Vec<Option<usize>> = vec![None; self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for v in e.iter() {
                match owner[v] {
                    None => owner[v] = Some(i),
                    Some(j) => {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
        let mut parts: Vec<(VertexSet, Vec<VertexSet>)> = Vec::new();
        let mut slot: Vec<Option<usize>> = vec![None; m];
        for i in 0..m {
            let root = find(&mut parent, i);
            let idx = *slot[root].get_or_insert_with(|| {
                parts.push((VertexSet::EMPTY, Vec::new()));
                parts.len() - 1
            });
            parts[idx].0 = parts[idx].0 | self.edges[i];
            parts[idx].1.push(self.edges[i]);
        }
        Components {
            parts: parts
                .into_iter()
                .map(|(vertices, edges)| Component {
                    vertices,
                    hypergraph: self.derived(edges),
                })
                .collect(),
            isolated: self.universe() - self.support(),
        }
    }

    /// Compact JSON in the interchange format.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypergraph serialisation is infallible")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: VertexSet,
    pub hypergraph: Hypergraph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub parts: Vec<Component>,
    pub isolated: VertexSet,
}

impl Components {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

#[derive(Serialize)]
struct Interchange {
    n: usize,
    k: Option<usize>,
    edges: Vec<VertexSet>,
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Interchange {
            n: self.n,
            k: self.k,
            edges: self.edges.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_struct("Hypergraph", &["n", "k", "edges"], HypergraphVisitor)
    }
}

// Validation happens inside the map visitor so that format errors carry the
// position of the offending object.
struct HypergraphVisitor;

impl<'de> Visitor<'de> for HypergraphVisitor {
    type Value = Hypergraph;

    fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str("an object with fields n, k and edges")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Hypergraph, A::Error> {
        let mut n: Option<usize> = None;
        let mut k: Option<Option<usize>> = None;
        let mut edges: Option<Vec<VertexSet>> = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "n" => n = Some(map.next_value()?),
                "k" => k = Some(map.next_value()?),
                "edges" => edges = Some(map.next_value()?),
                _ => {
                    map.next_value::<IgnoredAny>()?;
                }
            }
        }
        let n = n.ok_or_else(|| A::Error::missing_field("n"))?;
        let edges = edges.ok_or_else(|| A::Error::missing_field("edges"))?;
        let built = match k.flatten() {
            Some(k) => Hypergraph::uniform(n, k, edges),
            None => Hypergraph::new(n, edges),
        };
        built.map_err(A::Error::custom)
    }
}
