//! Finite directed graphs (loops allowed) and their homomorphisms.
//!
//! A graph is a vertex count together with a binary relation on `0..n`.
//! Homomorphisms are vertex maps that send every arc to an arc.

mod bits;
mod canon;
mod constructions;
mod gadget;
mod homs;
mod rigid;
mod subgraphs;
mod text;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use bits::Bits;
pub use canon::{canonical_form, canonical_graph, is_isomorphic, GraphCode};
pub use constructions::{
    chain_graph, coequalizer, discrete_graph, full_graph, image_factorization, product,
    product_many, pushout, wedge_sum, Product, Pushout,
};
pub use gadget::{gadget_embed_mor, gadget_embed_obj, GadgetLayout};
pub use homs::{count_homs, enumerate_homs, for_each_hom_map, hom_maps};
pub use rigid::{is_rigid, rigid_search};
pub use subgraphs::{subgraph_poset, subgraph_poset_with_guard, SubgraphElement, SubgraphPoset};
pub use text::{parse_graphs, write_graph};

/// Shared handle to a graph; homomorphisms hold their endpoints by reference.
pub type GraphRef = Arc<Graph>;

/// Maximum number of elements `subgraph_poset` will materialize by default.
pub const DEFAULT_POSET_GUARD: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("arc ({0}, {1}) out of range for a graph with {2} vertices")]
    ArcOutOfRange(usize, usize, usize),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),
    #[error("cannot compose: codomain `{cod}` of the first map is not the domain `{dom}` of the second")]
    CompositionUndefined { cod: String, dom: String },
    #[error("map has length {len} but the domain has {n} vertices")]
    MapLength { len: usize, n: usize },
    #[error("map sends a vertex to {0}, outside the codomain")]
    MapOutOfRange(usize),
    #[error("arc ({0}, {1}) is not sent to an arc")]
    NotAHom(usize, usize),
    #[error("basepoint {basepoint} is not a vertex of part {part}")]
    InvalidBasepoint { part: usize, basepoint: usize },
    #[error("the two maps do not share a domain")]
    SpanMismatch,
    #[error("the two maps are not parallel")]
    NotParallel,
    #[error("the empty graph has no nonempty subgraphs")]
    EmptyGraph,
    #[error("subgraph poset would exceed {0} elements")]
    PosetTooLarge(usize),
    #[error("no rigid system of {count} graphs found with at most {max_vertices} vertices")]
    RigidNotFound { count: usize, max_vertices: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A finite directed graph on the vertices `0..n`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    id: String,
    n: usize,
    arcs: Vec<(usize, usize)>,
    out: Vec<Bits>,
    inc: Vec<Bits>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    id: String,
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = GraphError;

    fn try_from(raw: RawGraph) -> Result<Self, Self::Error> {
        Graph::new(raw.id, raw.n, raw.arcs)
    }
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph { id: g.id, n: g.n, arcs: g.arcs }
    }
}

impl Graph {
    /// Builds a graph, rejecting out-of-range and duplicate arcs.
    pub fn new(
        id: impl Into<String>,
        n: usize,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (u, v) in arcs {
            if u >= n || v >= n {
                return Err(GraphError::ArcOutOfRange(u, v, n));
            }
            list.push((u, v));
        }
        list.sort_unstable();
        for w in list.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateArc(w[0].0, w[0].1));
            }
        }
        Ok(Self::from_sorted(id.into(), n, list))
    }

    /// Arcs must be in range; duplicates are merged.
    pub(crate) fn from_arcs_lossy(id: String, n: usize, mut arcs: Vec<(usize, usize)>) -> Self {
        arcs.sort_unstable();
        arcs.dedup();
        Self::from_sorted(id, n, arcs)
    }

    fn from_sorted(id: String, n: usize, arcs: Vec<(usize, usize)>) -> Self {
        let mut out = vec![Bits::new(n); n];
        let mut inc = vec![Bits::new(n); n];
        for &(u, v) in &arcs {
            out[u].insert(v);
            inc[v].insert(u);
        }
        Graph { id, n, arcs, out, inc }
    }

    pub fn empty(id: impl Into<String>) -> Self {
        Self::from_sorted(id.into(), 0, Vec::new())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out[u].contains(v)
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.has_arc(v, v)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inc[v].len()
    }

    pub(crate) fn out_bits(&self, v: usize) -> &Bits {
        &self.out[v]
    }

    pub(crate) fn in_bits(&self, v: usize) -> &Bits {
        &self.inc[v]
    }

    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[v].iter()
    }

    pub fn in_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.inc[v].iter()
    }

    /// Same vertices and arcs, different name.
    pub fn renamed(&self, id: impl Into<String>) -> Graph {
        let mut g = self.clone();
        g.id = id.into();
        g
    }

    /// Equality of the underlying relation, ignoring ids.
    pub fn same_shape(&self, other: &Graph) -> bool {
        self.n == other.n && self.arcs == other.arcs
    }

    /// Checks whether `map` is a homomorphism from `self` into `cod`.
    pub fn check_hom(&self, cod: &Graph, map: &[usize]) -> Result<(), GraphError> {
        if map.len() != self.n {
            return Err(GraphError::MapLength { len: map.len(), n: self.n });
        }
        if let Some(&w) = map.iter().find(|&&w| w >= cod.n) {
            return Err(GraphError::MapOutOfRange(w));
        }
        for &(u, v) in &self.arcs {
            if !cod.has_arc(map[u], map[v]) {
                return Err(GraphError::NotAHom(u, v));
            }
        }
        Ok(())
    }

    pub fn degree_multiset(&self) -> Vec<(usize, usize, bool)> {
        let mut d: Vec<_> = (0..self.n)
            .map(|v| (self.out_degree(v), self.in_degree(v), self.has_loop(v)))
            .collect();
        d.sort_unstable();
        d
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.n == other.n && self.arcs == other.arcs
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({} n={} arcs={:?})", self.id, self.n, self.arcs)
    }
}

/// A homomorphism between two graphs, given by its vertex map.
#[derive(Clone, PartialEq, Eq)]
pub struct GraphHom {
    dom: GraphRef,
    cod: GraphRef,
    map: Vec<usize>,
}

impl GraphHom {
    pub fn new(dom: GraphRef, cod: GraphRef, map: Vec<usize>) -> Result<Self, GraphError> {
        dom.check_hom(&cod, &map)?;
        Ok(GraphHom { dom, cod, map })
    }

    pub(crate) fn new_unchecked(dom: GraphRef, cod: GraphRef, map: Vec<usize>) -> Self {
        debug_assert!(dom.check_hom(&cod, &map).is_ok());
        GraphHom { dom, cod, map }
    }

    pub fn identity(g: &GraphRef) -> Self {
        GraphHom { dom: g.clone(), cod: g.clone(), map: (0..g.n()).collect() }
    }

    pub fn dom(&self) -> &GraphRef {
        &self.dom
    }

    pub fn cod(&self) -> &GraphRef {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn is_identity(&self) -> bool {
        same_graph(&self.dom, &self.cod) && self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = Bits::new(self.cod.n());
        self.map.iter().all(|&v| seen.insert(v))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = Bits::new(self.cod.n());
        for &v in &self.map {
            seen.insert(v);
        }
        seen.len() == self.cod.n()
    }

    /// An isomorphism: bijective on vertices and on arcs.
    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective() && self.dom.arc_count() == self.cod.arc_count()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<GraphHom> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Some(GraphHom { dom: self.cod.clone(), cod: self.dom.clone(), map: inv })
    }
}

impl fmt::Debug for GraphHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.dom.id(), self.cod.id(), self.map)
    }
}

impl Serialize for GraphHom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GraphHom", 3)?;
        st.serialize_field("dom", self.dom.id())?;
        st.serialize_field("cod", self.cod.id())?;
        st.serialize_field("map", &self.map)?;
        st.end()
    }
}

pub(crate) fn same_graph(a: &GraphRef, b: &GraphRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// `g ∘ f`: first `f`, then `g`.
pub fn compose(g: &GraphHom, f: &GraphHom) -> Result<GraphHom, GraphError> {
    if !same_graph(&f.cod, &g.dom) {
        return Err(GraphError::CompositionUndefined {
            cod: f.cod.id().to_string(),
            dom: g.dom.id().to_string(),
        });
    }
    let map = f.map.iter().map(|&v| g.map[v]).collect();
    Ok(GraphHom { dom: f.dom.clone(), cod: g.cod.clone(), map })
}

/// All graphs on `1..=max_n` vertices (loops allowed), one per isomorphism class,
/// as canonical representatives sorted by canonical code.
pub fn canonical_corpus(max_n: usize) -> Vec<Graph> {
    let mut seen = std::collections::BTreeMap::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
        assert!(pairs.len() < 64, "corpus enumeration is limited to 7 vertices");
        for mask in 0u64..(1u64 << pairs.len()) {
            let arcs = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p);
            let g = Graph::new("", n, arcs).expect("arcs in range");
            let c = canonical_graph(&g);
            seen.entry(GraphCode::of(&c)).or_insert(c);
        }
    }
    seen.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc() -> GraphRef {
        Arc::new(chain_graph(2).unwrap())
    }

    #[test]
    fn rejects_bad_arcs() {
        assert_eq!(Graph::new("g", 2, [(0, 2)]), Err(GraphError::ArcOutOfRange(0, 2, 2)));
        assert_eq!(Graph::new("g", 2, [(0, 1), (0, 1)]), Err(GraphError::DuplicateArc(0, 1)));
        assert_eq!(Graph::new("g", 0, [(0, 0)]), Err(GraphError::ArcOutOfRange(0, 0, 0)));
    }

    #[test]
    fn hom_validation() {
        let a = arc();
        assert!(GraphHom::new(a.clone(), a.clone(), vec![1, 0]).is_err());
        assert!(GraphHom::new(a.clone(), a.clone(), vec![0]).is_err());
        assert!(GraphHom::new(a.clone(), a.clone(), vec![0, 1]).unwrap().is_identity());
    }

    #[test]
    fn identity_laws() {
        let l2: GraphRef = Arc::new(chain_graph(2).unwrap());
        let l3: GraphRef = Arc::new(chain_graph(3).unwrap());
        for f in enumerate_homs(&l2, &l3) {
            assert_eq!(compose(&GraphHom::identity(&l3), &f).unwrap(), f);
            assert_eq!(compose(&f, &GraphHom::identity(&l2)).unwrap(), f);
        }
    }

    #[test]
    fn chain_composite_is_increasing() {
        let l2: GraphRef = Arc::new(chain_graph(2).unwrap());
        let l3: GraphRef = Arc::new(chain_graph(3).unwrap());
        let l5: GraphRef = Arc::new(chain_graph(5).unwrap());
        let f = GraphHom::new(l2.clone(), l3.clone(), vec![0, 2]).unwrap();
        let g = GraphHom::new(l3.clone(), l5.clone(), vec![1, 2, 4]).unwrap();
        let h = compose(&g, &f).unwrap();
        assert_eq!(h.map(), &[1, 4]);
        assert!(compose(&f, &g).is_err());
    }

    #[test]
    fn composition_is_associative_on_small_graphs() {
        let corpus: Vec<GraphRef> = canonical_corpus(2).into_iter().map(Arc::new).collect();
        for a in &corpus {
            for b in &corpus {
                for c in &corpus {
                    let fs = enumerate_homs(a, b);
                    let gs = enumerate_homs(b, c);
                    let hs = enumerate_homs(c, a);
                    for f in &fs {
                        for g in &gs {
                            for h in &hs {
                                let left = compose(h, &compose(g, f).unwrap()).unwrap();
                                let right = compose(&compose(h, g).unwrap(), f).unwrap();
                                assert_eq!(left, right);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn corpus_sizes() {
        // Binary relations on n unlabeled points: 1, 2, 10, 104.
        let c = canonical_corpus(3);
        assert_eq!(c.iter().filter(|g| g.n() == 1).count(), 2);
        assert_eq!(c.iter().filter(|g| g.n() == 2).count(), 10);
        assert_eq!(c.iter().filter(|g| g.n() == 3).count(), 104);
    }

    #[test]
    fn serde_roundtrip_validates() {
        let g = Graph::new("x", 3, [(0, 1), (2, 2)]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
        assert!(serde_json::from_str::<Graph>(r#"{"id":"x","n":1,"arcs":[[0,3]]}"#).is_err());
    }
}
