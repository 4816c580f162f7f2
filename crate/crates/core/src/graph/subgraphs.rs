use std::sync::Arc;

use super::{Graph, GraphError, GraphHom, GraphRef, DEFAULT_POSET_GUARD};

/// A subgraph of the ambient graph in ambient labels: a vertex subset and a
/// subset of the arcs between those vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubgraphElement {
    pub vertices: Vec<usize>,
    pub arcs: Vec<(usize, usize)>,
}

impl SubgraphElement {
    pub fn contains(&self, other: &SubgraphElement) -> bool {
        other.vertices.iter().all(|v| self.vertices.binary_search(v).is_ok())
            && other.arcs.iter().all(|a| self.arcs.binary_search(a).is_ok())
    }

    /// The subgraph relabeled onto `0..k` in increasing ambient order.
    pub fn graph(&self) -> Graph {
        let local = |v: usize| self.vertices.binary_search(&v).expect("arc inside subset");
        let arcs = self.arcs.iter().map(|&(u, v)| (local(u), local(v)));
        let name = format!("sub{:?}", self.vertices);
        Graph::new(name, self.vertices.len(), arcs).expect("valid subgraph")
    }

    pub fn inclusion(&self, ambient: &GraphRef) -> GraphHom {
        GraphHom::new_unchecked(Arc::new(self.graph()), ambient.clone(), self.vertices.clone())
    }
}

/// Nonempty subgraphs of a finite graph ordered by inclusion. Elements are
/// sorted by size (vertices plus arcs), then lexicographically, so the
/// ambient graph itself is the last element.
#[derive(Debug, Clone)]
pub struct SubgraphPoset {
    pub ambient: GraphRef,
    pub elements: Vec<SubgraphElement>,
}

impl SubgraphPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.elements[b].contains(&self.elements[a])
    }

    /// Index of the element equal to the whole ambient graph, if present.
    pub fn top(&self) -> Option<usize> {
        self.elements.iter().position(|e| {
            e.vertices.len() == self.ambient.n() && e.arcs.len() == self.ambient.arc_count()
        })
    }

    /// Keeps only the elements selected by `keep`, preserving order.
    pub fn restrict(&self, keep: impl Fn(&SubgraphElement) -> bool) -> SubgraphPoset {
        SubgraphPoset {
            ambient: self.ambient.clone(),
            elements: self.elements.iter().filter(|e| keep(e)).cloned().collect(),
        }
    }
}

pub fn subgraph_poset(x: &GraphRef) -> Result<SubgraphPoset, GraphError> {
    subgraph_poset_with_guard(x, DEFAULT_POSET_GUARD)
}

pub fn subgraph_poset_with_guard(x: &GraphRef, guard: usize) -> Result<SubgraphPoset, GraphError> {
    let n = x.n();
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    if n >= 32 {
        return Err(GraphError::PosetTooLarge(guard));
    }
    let mut plan: Vec<(Vec<usize>, Vec<(usize, usize)>)> = Vec::new();
    let mut total: usize = 0;
    for mask in 1u64..(1u64 << n) {
        let vertices: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let inner: Vec<(usize, usize)> = x
            .arcs()
            .iter()
            .copied()
            .filter(|&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
            .collect();
        let count = 1usize.checked_shl(inner.len() as u32).unwrap_or(usize::MAX);
        total = total.saturating_add(count);
        if total > guard {
            return Err(GraphError::PosetTooLarge(guard));
        }
        plan.push((vertices, inner));
    }
    let mut elements = Vec::with_capacity(total);
    for (vertices, inner) in plan {
        for amask in 0u64..(1u64 << inner.len()) {
            let arcs = inner
                .iter()
                .enumerate()
                .filter(|(i, _)| amask >> i & 1 == 1)
                .map(|(_, &a)| a)
                .collect();
            elements.push(SubgraphElement { vertices: vertices.clone(), arcs });
        }
    }
    elements.sort_by(|a, b| {
        (a.vertices.len() + a.arcs.len())
            .cmp(&(b.vertices.len() + b.arcs.len()))
            .then_with(|| a.cmp(b))
    });
    Ok(SubgraphPoset { ambient: x.clone(), elements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{chain_graph, full_graph};

    #[test]
    fn single_vertex() {
        let p = subgraph_poset(&Arc::new(Graph::new("p", 1, []).unwrap())).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.top(), Some(0));
    }

    #[test]
    fn single_arc_has_four_subgraphs() {
        let p = subgraph_poset(&Arc::new(chain_graph(2).unwrap())).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.top(), Some(3));
        assert!((0..4).all(|i| p.leq(i, 3)));
        assert!(!p.leq(0, 1) && !p.leq(1, 0));
    }

    #[test]
    fn top_is_last_and_inclusions_are_homs() {
        let x = Arc::new(full_graph(3));
        let p = subgraph_poset(&x).unwrap();
        assert_eq!(p.len(), 3 * 2 + 3 * 16 + 512);
        assert_eq!(p.top(), Some(p.len() - 1));
        for e in p.elements.iter().step_by(37) {
            assert!(e.inclusion(&x).is_injective());
        }
    }

    #[test]
    fn guard_and_empty() {
        let x = Arc::new(full_graph(3));
        assert_eq!(subgraph_poset_with_guard(&x, 100).unwrap_err(), GraphError::PosetTooLarge(100));
        assert_eq!(subgraph_poset(&Arc::new(Graph::empty("e"))).unwrap_err(), GraphError::EmptyGraph);
    }
}
