use std::sync::Arc;

use super::{same_graph, Graph, GraphError, GraphHom, GraphRef};

/// Complete graph with all loops: every vertex map into it is a homomorphism.
pub fn full_graph(n: usize) -> Graph {
    let arcs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v)));
    Graph::new(format!("K{n}*"), n, arcs).expect("arcs in range")
}

pub fn discrete_graph(n: usize) -> Graph {
    Graph::new(format!("D{n}"), n, []).expect("no arcs")
}

/// Transitive tournament on `0..n`: an arc `i -> j` whenever `i < j`.
pub fn chain_graph(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let arcs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    Graph::new(format!("L{n}"), n, arcs)
}

/// Factors `f` as a vertex-surjective map onto its image graph (vertices `f(V)`,
/// arcs exactly the images of arcs) followed by the inclusion of the image.
pub fn image_factorization(f: &GraphHom) -> (GraphHom, GraphHom) {
    let mut verts: Vec<usize> = f.map().to_vec();
    verts.sort_unstable();
    verts.dedup();
    let index = |w: usize| verts.binary_search(&w).expect("image vertex");
    let arcs: Vec<(usize, usize)> =
        f.dom().arcs().iter().map(|&(u, v)| (index(f.apply(u)), index(f.apply(v)))).collect();
    let image: GraphRef =
        Arc::new(Graph::from_arcs_lossy(format!("im({})", f.dom().id()), verts.len(), arcs));
    let epi = GraphHom::new_unchecked(
        f.dom().clone(),
        image.clone(),
        f.map().iter().map(|&w| index(w)).collect(),
    );
    let mono = GraphHom::new_unchecked(image, f.cod().clone(), verts.clone());
    (epi, mono)
}

#[derive(Debug, Clone)]
pub struct Product {
    pub graph: GraphRef,
    pub projections: Vec<GraphHom>,
}

/// Categorical product: vertices are pairs `(u, u')` numbered `u * |Y| + u'`.
pub fn product(x: &GraphRef, y: &GraphRef) -> Product {
    product_many(&[x.clone(), y.clone()])
}

/// Product of finitely many graphs; the empty product is a single looped vertex.
/// Vertices are tuples in mixed radix, first factor most significant.
pub fn product_many(factors: &[GraphRef]) -> Product {
    let n: usize = factors.iter().map(|g| g.n()).product();
    let decode = |mut idx: usize| -> Vec<usize> {
        let mut t = vec![0; factors.len()];
        for (k, g) in factors.iter().enumerate().rev() {
            t[k] = idx % g.n();
            idx /= g.n();
        }
        t
    };
    let tuples: Vec<Vec<usize>> = (0..n).map(decode).collect();
    let mut arcs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if factors.iter().enumerate().all(|(k, g)| g.has_arc(tuples[a][k], tuples[b][k])) {
                arcs.push((a, b));
            }
        }
    }
    let id = if factors.is_empty() {
        "1".to_string()
    } else {
        let names: Vec<&str> = factors.iter().map(|g| g.id()).collect();
        format!("({})", names.join("x"))
    };
    let graph: GraphRef = Arc::new(Graph::from_arcs_lossy(id, n, arcs));
    let projections = factors
        .iter()
        .enumerate()
        .map(|(k, g)| {
            GraphHom::new_unchecked(graph.clone(), g.clone(), tuples.iter().map(|t| t[k]).collect())
        })
        .collect();
    Product { graph, projections }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }

    /// Class numbers in order of each class's smallest element.
    fn classes(&mut self) -> (usize, Vec<usize>) {
        let n = self.0.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0; n];
        for (v, slot) in out.iter_mut().enumerate() {
            let r = self.find(v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            *slot = label[r];
        }
        (next, out)
    }
}

#[derive(Debug, Clone)]
pub struct Pushout {
    pub graph: GraphRef,
    /// Injection of the codomain of the first leg.
    pub left: GraphHom,
    /// Injection of the codomain of the second leg.
    pub right: GraphHom,
}

/// Pushout of the span `B <-f- A -g-> C`: the disjoint union of `B` and `C`
/// with `f(a) ~ g(a)`; arcs are the images of both arc sets.
pub fn pushout(f: &GraphHom, g: &GraphHom) -> Result<Pushout, GraphError> {
    if !same_graph(f.dom(), g.dom()) {
        return Err(GraphError::SpanMismatch);
    }
    let (b, c) = (f.cod(), g.cod());
    let mut uf = UnionFind::new(b.n() + c.n());
    for a in 0..f.dom().n() {
        uf.union(f.apply(a), b.n() + g.apply(a));
    }
    let (n, class) = uf.classes();
    let arcs: Vec<(usize, usize)> = b
        .arcs()
        .iter()
        .map(|&(u, v)| (class[u], class[v]))
        .chain(c.arcs().iter().map(|&(u, v)| (class[b.n() + u], class[b.n() + v])))
        .collect();
    let graph: GraphRef =
        Arc::new(Graph::from_arcs_lossy(format!("({}+{})", b.id(), c.id()), n, arcs));
    let left = GraphHom::new_unchecked(b.clone(), graph.clone(), class[..b.n()].to_vec());
    let right = GraphHom::new_unchecked(c.clone(), graph.clone(), class[b.n()..].to_vec());
    Ok(Pushout { graph, left, right })
}

/// Coequalizer of parallel maps `k1, k2 : B -> C`: the quotient of `C` by
/// `k1(b) ~ k2(b)`, with image arcs.
pub fn coequalizer(k1: &GraphHom, k2: &GraphHom) -> Result<GraphHom, GraphError> {
    if !same_graph(k1.dom(), k2.dom()) || !same_graph(k1.cod(), k2.cod()) {
        return Err(GraphError::NotParallel);
    }
    let c = k1.cod();
    let mut uf = UnionFind::new(c.n());
    for b in 0..k1.dom().n() {
        uf.union(k1.apply(b), k2.apply(b));
    }
    let (n, class) = uf.classes();
    let arcs = c.arcs().iter().map(|&(u, v)| (class[u], class[v])).collect();
    let q: GraphRef = Arc::new(Graph::from_arcs_lossy(format!("{}/~", c.id()), n, arcs));
    Ok(GraphHom::new_unchecked(c.clone(), q, class))
}

/// Disjoint union of `parts` with all basepoints identified into vertex 0.
pub fn wedge_sum(parts: &[Graph], basepoints: &[usize]) -> Result<Graph, GraphError> {
    if parts.len() != basepoints.len() {
        return Err(GraphError::SpanMismatch);
    }
    let mut n = 1;
    let mut arcs = Vec::new();
    let mut names = Vec::new();
    for (part, (g, &base)) in parts.iter().zip(basepoints).enumerate() {
        if base >= g.n() {
            return Err(GraphError::InvalidBasepoint { part, basepoint: base });
        }
        let offset = n;
        let place = |v: usize| match v.cmp(&base) {
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => offset + v,
            std::cmp::Ordering::Greater => offset + v - 1,
        };
        arcs.extend(g.arcs().iter().map(|&(u, v)| (place(u), place(v))));
        n += g.n() - 1;
        names.push(g.id().to_string());
    }
    if parts.is_empty() {
        return Ok(Graph::new("wedge()", 1, [])?);
    }
    Graph::new(format!("wedge({})", names.join(",")), n, arcs)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::graph::{canonical_corpus, compose, count_homs, enumerate_homs, is_isomorphic};

    fn small() -> Vec<GraphRef> {
        canonical_corpus(2).into_iter().map(Arc::new).collect()
    }

    #[test]
    fn product_examples() {
        let l2 = Arc::new(chain_graph(2).unwrap());
        let p = product(&l2, &l2);
        assert_eq!(p.graph.n(), 4);
        assert_eq!(p.graph.arc_count(), 1);
        let pt = Arc::new(full_graph(1));
        let q = product(&l2, &pt);
        assert!(is_isomorphic(&q.graph, &l2));
    }

    #[test]
    fn product_universal_property_counts() {
        let corpus = small();
        for w in &corpus {
            for x in &corpus {
                for y in &corpus {
                    let p = product(x, y);
                    assert_eq!(count_homs(w, &p.graph), count_homs(w, x) * count_homs(w, y));
                }
            }
        }
    }

    #[test]
    fn product_pairing_is_unique() {
        let corpus = small();
        let (x, y) = (&corpus[3], &corpus[7]);
        let p = product(x, y);
        for w in &corpus {
            for f in enumerate_homs(w, x) {
                for g in enumerate_homs(w, y) {
                    let pairs: Vec<_> = enumerate_homs(w, &p.graph)
                        .into_iter()
                        .filter(|h| {
                            compose(&p.projections[0], h).unwrap() == f
                                && compose(&p.projections[1], h).unwrap() == g
                        })
                        .collect();
                    assert_eq!(pairs.len(), 1);
                }
            }
        }
    }

    #[test]
    fn pushout_examples() {
        let l2 = Arc::new(chain_graph(2).unwrap());
        let id = GraphHom::identity(&l2);
        let p = pushout(&id, &id).unwrap();
        assert!(p.graph.same_shape(&l2));

        // Glue the head of one arc to the tail of another.
        let pt = Arc::new(Graph::new("p", 1, []).unwrap());
        let head = GraphHom::new(pt.clone(), l2.clone(), vec![1]).unwrap();
        let tail = GraphHom::new(pt.clone(), l2.clone(), vec![0]).unwrap();
        let p = pushout(&head, &tail).unwrap();
        assert_eq!(p.graph.n(), 3);
        assert_eq!(p.graph.arcs(), &[(0, 1), (1, 2)]);

        let e = Arc::new(Graph::empty("e"));
        let f = GraphHom::new(e.clone(), l2.clone(), vec![]).unwrap();
        let g = GraphHom::new(e.clone(), pt.clone(), vec![]).unwrap();
        let p = pushout(&f, &g).unwrap();
        assert_eq!(p.graph.n(), 3);
        assert_eq!(p.graph.arc_count(), 1);
    }

    #[test]
    fn pushout_universal_property() {
        let corpus = small();
        for a in corpus.iter().take(4) {
            for b in &corpus {
                for c in corpus.iter().step_by(2) {
                    for f in enumerate_homs(a, b).into_iter().take(2) {
                        for g in enumerate_homs(a, c).into_iter().take(2) {
                            let p = pushout(&f, &g).unwrap();
                            let lf = compose(&p.left, &f).unwrap();
                            let rg = compose(&p.right, &g).unwrap();
                            assert_eq!(lf.map(), rg.map());
                            for t in &corpus {
                                let cocones = enumerate_homs(b, t)
                                    .iter()
                                    .flat_map(|u| {
                                        enumerate_homs(c, t)
                                            .into_iter()
                                            .filter(|v| {
                                                compose(u, &f).unwrap().map()
                                                    == compose(v, &g).unwrap().map()
                                            })
                                            .map(|v| (u.clone(), v))
                                            .collect::<Vec<_>>()
                                    })
                                    .count();
                                assert_eq!(cocones, count_homs(&p.graph, t));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn image_factorization_examples() {
        let l2 = Arc::new(chain_graph(2).unwrap());
        let l3 = Arc::new(chain_graph(3).unwrap());
        let f = GraphHom::new(l2.clone(), l3.clone(), vec![0, 2]).unwrap();
        let (epi, mono) = image_factorization(&f);
        assert!(epi.is_isomorphism());
        assert_eq!(mono.map(), &[0, 2]);

        let lp = Arc::new(full_graph(1));
        let c = GraphHom::new(l2.clone(), lp, vec![0, 0]).unwrap();
        let (epi, _) = image_factorization(&c);
        assert_eq!(epi.cod().n(), 1);
        assert!(epi.cod().has_loop(0));
    }

    #[test]
    fn wedge_examples() {
        let l2 = chain_graph(2).unwrap();
        let w = wedge_sum(&[l2.clone()], &[0]).unwrap();
        assert!(w.same_shape(&l2));
        let w = wedge_sum(&[l2.clone(), l2.clone()], &[0, 0]).unwrap();
        assert_eq!(w.n(), 3);
        assert_eq!(w.arcs(), &[(0, 1), (0, 2)]);
        let l3 = chain_graph(3).unwrap();
        let w = wedge_sum(&[l2.clone(), l3.clone(), l3.clone()], &[1, 0, 2]).unwrap();
        assert_eq!(w.n(), 1 + 1 + 2 + 2);
        assert_eq!(
            wedge_sum(&[l2], &[2]),
            Err(GraphError::InvalidBasepoint { part: 0, basepoint: 2 })
        );
    }

    #[test]
    fn coequalizer_identifies_images() {
        let l2 = Arc::new(chain_graph(2).unwrap());
        let pt = Arc::new(Graph::new("p", 1, []).unwrap());
        let a = GraphHom::new(pt.clone(), l2.clone(), vec![0]).unwrap();
        let b = GraphHom::new(pt.clone(), l2.clone(), vec![1]).unwrap();
        let q = coequalizer(&a, &b).unwrap();
        assert_eq!(q.cod().n(), 1);
        assert!(q.cod().has_loop(0));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                let arcs = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| (i / n, i % n));
                Graph::new("g", n, arcs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn image_factorization_recomposes(x in arb_graph(4), y in arb_graph(4), pick in any::<prop::sample::Index>()) {
            let (x, y) = (Arc::new(x), Arc::new(y));
            let homs = enumerate_homs(&x, &y);
            prop_assume!(!homs.is_empty());
            let f = &homs[pick.index(homs.len())];
            let (epi, mono) = image_factorization(f);
            prop_assert!(epi.is_surjective());
            prop_assert!(mono.is_injective());
            let recomposed = compose(&mono, &epi).unwrap();
            prop_assert_eq!(recomposed.map(), f.map());
            let mut image_arcs: Vec<_> = x.arcs().iter().map(|&(u, v)| (f.apply(u), f.apply(v))).collect();
            image_arcs.sort_unstable();
            image_arcs.dedup();
            let mut got: Vec<_> = epi.cod().arcs().iter().map(|&(u, v)| (mono.apply(u), mono.apply(v))).collect();
            got.sort_unstable();
            prop_assert_eq!(got, image_arcs);
        }
    }
}
