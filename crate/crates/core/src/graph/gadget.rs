use std::sync::Arc;

use serde::Serialize;

use super::{Graph, GraphHom, GraphRef};

/// Layout of the embedding of all graphs into nonempty graphs.
///
/// `E(X)` is one copy of the base gadget, one tail vertex per vertex of `X`
/// hanging off base vertex `attach`, and for every arc `u -> v` of `X` a path
/// from the tail of `u` to the tail of `v` through `edge_interior` new vertices.
/// Vertex numbering: base vertices, then tails in vertex order, then path
/// interiors in arc order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetLayout {
    pub name: String,
    pub base_n: usize,
    pub base_arcs: Vec<(usize, usize)>,
    pub attach: usize,
    pub edge_interior: usize,
}

impl Default for GadgetLayout {
    /// Base: `a -> b -> c` with the chord `a -> c`. Vertex gadget: the base
    /// extended by `c -> d`. Edge gadget: the 3-chain `d_u -> m -> d_v`.
    fn default() -> Self {
        GadgetLayout {
            name: "chord-path/tail-at-end/3-chain".to_string(),
            base_n: 3,
            base_arcs: vec![(0, 1), (1, 2), (0, 2)],
            attach: 2,
            edge_interior: 1,
        }
    }
}

impl GadgetLayout {
    fn tail(&self, v: usize) -> usize {
        self.base_n + v
    }

    fn interior(&self, x_n: usize, arc_index: usize, step: usize) -> usize {
        self.base_n + x_n + arc_index * self.edge_interior + step
    }

    pub fn embed_obj(&self, x: &Graph) -> Graph {
        let n = self.base_n + x.n() + x.arc_count() * self.edge_interior;
        let mut arcs = self.base_arcs.clone();
        for v in 0..x.n() {
            arcs.push((self.attach, self.tail(v)));
        }
        for (i, &(u, v)) in x.arcs().iter().enumerate() {
            let mut prev = self.tail(u);
            for step in 0..self.edge_interior {
                let m = self.interior(x.n(), i, step);
                arcs.push((prev, m));
                prev = m;
            }
            arcs.push((prev, self.tail(v)));
        }
        Graph::new(format!("E({})", x.id()), n, arcs).expect("gadget arcs in range")
    }

    /// `E(f)`: identity on the base, tails and path interiors follow `f`.
    /// The domain and codomain of the result are `E(f.dom)` and `E(f.cod)`.
    pub fn embed_mor(&self, f: &GraphHom) -> GraphHom {
        let (x, y) = (f.dom(), f.cod());
        let ex: GraphRef = Arc::new(self.embed_obj(x));
        let ey: GraphRef = Arc::new(self.embed_obj(y));
        self.embed_mor_between(f, ex, ey)
    }

    pub fn embed_mor_between(&self, f: &GraphHom, ex: GraphRef, ey: GraphRef) -> GraphHom {
        let (x, y) = (f.dom(), f.cod());
        let mut map: Vec<usize> = (0..self.base_n).collect();
        map.extend((0..x.n()).map(|v| self.tail(f.apply(v))));
        for &(u, v) in x.arcs() {
            let target = (f.apply(u), f.apply(v));
            let j = y.arcs().binary_search(&target).expect("homomorphism preserves arcs");
            map.extend((0..self.edge_interior).map(|step| self.interior(y.n(), j, step)));
        }
        GraphHom::new_unchecked(ex, ey, map)
    }
}

pub fn gadget_embed_obj(x: &Graph) -> Graph {
    GadgetLayout::default().embed_obj(x)
}

pub fn gadget_embed_mor(f: &GraphHom) -> GraphHom {
    GadgetLayout::default().embed_mor(f)
}
