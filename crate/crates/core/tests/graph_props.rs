use std::sync::Arc;

use homforge::graph::{canonical_form, canonical_graph, compose, count_homs, enumerate_homs, is_isomorphic, Graph, GraphHom};
use proptest::prelude::*;

fn graph(n: usize, bits: u64) -> Graph {
    let arcs = (0..n * n).filter(|k| bits >> k & 1 == 1).map(|k| (k / n, k % n));
    Graph::new(format!("g{n}.{bits}"), n, arcs).unwrap()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n, any::<u64>()).prop_map(|(n, bits)| graph(n, bits & ((1u64 << (n * n)) - 1)))
}

/// Every vertex map, filtered by the arc condition.
fn brute_homs(x: &Graph, y: &Graph) -> usize {
    let (n, m) = (x.n(), y.n());
    if n == 0 {
        return 1;
    }
    if m == 0 {
        return 0;
    }
    let mut count = 0;
    let mut map = vec![0; n];
    'outer: loop {
        if x.arcs().iter().all(|&(u, v)| y.has_arc(map[u], map[v])) {
            count += 1;
        }
        for slot in map.iter_mut() {
            *slot += 1;
            if *slot < m {
                continue 'outer;
            }
            *slot = 0;
        }
        return count;
    }
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    Graph::new("p", g.n(), g.arcs().iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap()
}

fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hom_count_matches_brute_force(x in arb_graph(3), y in arb_graph(3)) {
        prop_assert_eq!(count_homs(&x, &y), brute_homs(&x, &y));
        let homs = enumerate_homs(&Arc::new(x.clone()), &Arc::new(y.clone()));
        prop_assert_eq!(homs.len(), brute_homs(&x, &y));
    }

    #[test]
    fn canonical_form_is_relabeling_invariant((g, perm) in arb_graph(5).prop_flat_map(|g| { let n = g.n(); (Just(g), arb_perm(n)) })) {
        let h = relabel(&g, &perm);
        let (cg, ch) = (canonical_graph(&g), canonical_graph(&h));
        prop_assert_eq!(cg.arcs(), ch.arcs());
        prop_assert!(is_isomorphic(&g, &h));
        let (c, iso) = canonical_form(&g);
        prop_assert!(iso.is_isomorphism());
        prop_assert_eq!(iso.cod().arcs(), c.arcs());
    }

    #[test]
    fn composition_is_associative(x in arb_graph(3), y in arb_graph(3), z in arb_graph(3)) {
        let (x, y, z) = (Arc::new(x), Arc::new(y), Arc::new(z));
        let fs = enumerate_homs(&x, &y);
        let gs = enumerate_homs(&y, &z);
        let hs = enumerate_homs(&z, &x);
        for f in fs.iter().take(4) {
            prop_assert_eq!(&compose(&GraphHom::identity(&y), f).unwrap(), f);
            for g in gs.iter().take(4) {
                let gf = compose(g, f).unwrap();
                prop_assert_eq!(gf.dom(), &x);
                for h in hs.iter().take(4) {
                    prop_assert_eq!(compose(h, &gf).unwrap(), compose(&compose(h, g).unwrap(), f).unwrap());
                }
            }
        }
    }
}

#[test]
fn isomorphic_graphs_have_equal_hom_counts_into_a_probe() {
    let probe = graph(3, 0b101_110_011);
    for bits in 0..512u64 {
        let g = graph(3, bits);
        let h = relabel(&g, &[2, 0, 1]);
        assert_eq!(count_homs(&g, &probe), count_homs(&h, &probe));
        assert_eq!(count_homs(&probe, &g), count_homs(&probe, &h));
    }
}
