use super::*;
use num_traits::Zero;
use crate::graph::{canonical_corpus, canonical_graph, chain_graph, count_homs, discrete_graph, enumerate_homs, is_isomorphic};

fn hom(a: &GraphRef, b: &GraphRef, m: &[usize]) -> GraphHom {
    GraphHom::new(a.clone(), b.clone(), m.to_vec()).unwrap()
}

fn fold() -> GraphHom {
    hom(&Arc::new(discrete_graph(2)), &Arc::new(discrete_graph(1)), &[0, 0])
}

#[test]
fn orthogonality_examples() {
    let f = fold();
    assert!(is_orthogonal(&f, &discrete_graph(1)));
    assert!(!is_orthogonal(&f, &discrete_graph(2)));
    let l3 = Arc::new(chain_graph(3).unwrap());
    for x in canonical_corpus(2) {
        assert!(is_orthogonal(&GraphHom::identity(&l3), &x));
        assert!(transported_orthogonality(&GraphHom::identity(&l3), &x));
    }
}

#[test]
fn perp_classes() {
    let corpus = canonical_corpus(2);
    assert_eq!(perp_objects(&[], &corpus), corpus);
    let f = fold();
    // brute force: every pair of vertices must be forced equal, so at most one vertex
    let oracle: Vec<Graph> = corpus.iter().filter(|x| count_homs(&discrete_graph(2), x) == x.n()).cloned().collect();
    let perp = perp_objects(&[f.clone()], &corpus);
    assert_eq!(perp, oracle);
    assert!(perp.iter().all(|x| x.n() == 1));
    let ms: Vec<GraphHom> = corpus
        .iter()
        .flat_map(|a| corpus.iter().map(move |b| (a, b)))
        .flat_map(|(a, b)| enumerate_homs(&Arc::new(a.clone()), &Arc::new(b.clone())))
        .collect();
    assert_eq!(perp_morphisms(&[], &ms).len(), ms.len());
    let d = vec![corpus[0].clone(), corpus[3].clone()];
    let dperp = perp_morphisms(&d, &ms);
    assert!(dperp.iter().filter(|f| f.is_identity()).count() == corpus.len());
    let back = perp_objects(&dperp, &corpus);
    for x in &d {
        assert!(back.contains(x));
    }
    assert_eq!(perp_morphisms(&back, &dperp).len(), dperp.len());
}

#[test]
fn transported_check_agrees_on_small_grid() {
    let corpus = canonical_corpus(2);
    for a in &corpus {
        for b in &corpus {
            for f in enumerate_homs(&Arc::new(a.clone()), &Arc::new(b.clone())) {
                for x in &corpus {
                    let m = precomposition_matrix(&f, x);
                    let perm = m.rows() == m.cols()
                        && (0..m.rows()).all(|i| (0..m.cols()).filter(|&j| !m.get(i, j).is_zero()).count() == 1);
                    assert_eq!(perm, is_orthogonal(&f, x));
                    assert_eq!(transported_orthogonality(&f, x), is_orthogonal(&f, x));
                }
            }
        }
    }
}

fn check_separator(a: &GraphRef, d0: &[Graph]) -> Separator {
    let s = separator(a, d0).unwrap();
    assert_eq!(compose(&s.e, &s.alpha).unwrap(), s.diagonal);
    assert!(s.e.is_injective());
    assert!(s.alpha.is_surjective());
    for z in d0 {
        assert!(is_orthogonal(&s.alpha, z));
    }
    s
}

#[test]
fn separator_examples() {
    let l2 = Arc::new(chain_graph(2).unwrap());
    let l3 = chain_graph(3).unwrap();
    let s = check_separator(&l2, std::slice::from_ref(&l2.as_ref().clone()));
    assert!(s.alpha.is_isomorphism());
    let s = check_separator(&l2, &[l3.clone()]);
    assert!(s.alpha.is_injective());
    assert_eq!(s.za.n(), 3usize.pow(s.factors.len() as u32));
    let looped = Graph::new("o", 1, [(0, 0)]).unwrap();
    let s = check_separator(&l2, &[looped]);
    assert_eq!(s.alpha.cod().n(), 1);
    let s = check_separator(&Arc::new(Graph::empty("e")), &[l3]);
    assert_eq!(s.alpha.cod().n(), 0);
    for a in canonical_corpus(3).iter().step_by(7) {
        check_separator(&Arc::new(a.clone()), &canonical_corpus(2)[..4]);
    }
    let big = vec![discrete_graph(10); 1];
    assert!(matches!(
        separator_with_guard(&Arc::new(discrete_graph(5)), &big, 50),
        Err(OrthoError::ProductTooLarge { .. })
    ));
}

fn assert_reflection(x: &Graph, s: &[GraphHom]) -> ReflectionResult {
    let r = reflect(x, s, DEFAULT_REFLECT_CAP).unwrap();
    assert!(r.iterations <= DEFAULT_REFLECT_CAP);
    assert_eq!(r.eta.dom().as_ref(), x);
    assert!(Arc::ptr_eq(r.eta.cod(), &r.lx));
    if r.converged() {
        assert!(s.iter().all(|f| is_orthogonal(f, &r.lx)));
        let again = reflect(&r.lx, s, DEFAULT_REFLECT_CAP).unwrap();
        assert!(again.converged());
        assert_eq!(again.iterations, 0);
        assert!(is_isomorphic(&again.lx, &r.lx));
    }
    r
}

#[test]
fn fold_reflection() {
    let l2 = chain_graph(2).unwrap();
    let r = assert_reflection(&l2, &[fold()]);
    assert!(r.converged());
    assert_eq!(canonical_graph(&r.lx), canonical_graph(&Graph::new("o", 1, [(0, 0)]).unwrap()));
    assert_eq!(r.iterations, 1);
    let p = discrete_graph(1);
    let r = assert_reflection(&p, &[fold()]);
    assert_eq!(r.iterations, 0);
    assert!(r.eta.is_identity());
    assert!(matches!(reflect(&p, &[fold()], 0), Err(OrthoError::CapTooSmall)));
}

#[test]
fn arc_appending_exceeds_cap() {
    let pt = Arc::new(discrete_graph(1));
    let l2 = Arc::new(chain_graph(2).unwrap());
    let f = hom(&pt, &l2, &[0]);
    let r = reflect(&discrete_graph(1), std::slice::from_ref(&f), 5).unwrap();
    assert_eq!(r.status, ReflectStatus::CapExceeded);
    assert_eq!(r.iterations, 5);
    assert_eq!(r.lx.n(), 6);
    let again = reflect(&discrete_graph(1), &[f], 5).unwrap();
    assert_eq!(again.trace, r.trace);
}

#[test]
fn steps_strictly_change_the_graph() {
    let pt = Arc::new(discrete_graph(1));
    let d2 = Arc::new(discrete_graph(2));
    let l2 = Arc::new(chain_graph(2).unwrap());
    let e = Arc::new(Graph::empty("e"));
    let s = vec![hom(&d2, &l2, &[0, 1]), hom(&e, &pt, &[])];
    let r = assert_reflection(&discrete_graph(3), &s);
    assert!(r.converged());
    assert_eq!(canonical_graph(&r.lx), canonical_graph(&Graph::new("o", 1, [(0, 0)]).unwrap()));
    let mut last = (3usize, 0usize);
    for step in &r.trace {
        let now = match step {
            ReflectStep::Glue { vertices, arcs, .. } | ReflectStep::Coequalize { vertices, arcs, .. } => (*vertices, *arcs),
        };
        assert_ne!(now, last);
        last = now;
    }
    let guard = reflect_with_guard(&discrete_graph(1), &[hom(&pt, &l2, &[0])], 100, 4).unwrap();
    assert!(guard.guard_hit);
}

#[test]
fn universe_scope() {
    let corpus = canonical_corpus(1);
    let a = Arc::new(corpus[0].clone());
    let u = OrthoUniverse::new(corpus.clone(), vec![GraphHom::identity(&a)]).unwrap();
    assert_eq!(u.verdicts(), vec![vec![true; corpus.len()]]);
    let stray = Arc::new(chain_graph(3).unwrap());
    assert_eq!(OrthoUniverse::new(corpus, vec![GraphHom::identity(&stray)]).unwrap_err(), OrthoError::OutOfScope(0));
}
