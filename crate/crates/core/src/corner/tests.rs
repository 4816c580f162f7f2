use std::sync::Arc;

use super::*;
use crate::graph::{canonical_graph, chain_graph, enumerate_homs, Graph, GraphRef};

fn canon(g: Graph) -> GraphRef {
    Arc::new(canonical_graph(&g))
}

fn homs(x: &GraphRef, y: &GraphRef) -> Vec<MorSymbol> {
    enumerate_homs(x, y).iter().map(MorSymbol::from_canonical_hom).collect()
}

fn point() -> GraphRef {
    canon(Graph::new("p", 1, []).unwrap())
}

fn code(g: &GraphRef) -> GraphCode {
    GraphCode::of(g)
}

#[test]
fn single_rigid_vertex_stage() {
    let x = point();
    let id = MorSymbol::identity(&code(&x));
    let st = build_stage([MorSymbol::Unit, id.clone()], 1).unwrap();
    assert_eq!(st.monomial_count(), 3);
    assert_eq!(st.ambient_rank(), 6);
    let z = [(MarkerKind::Z, &id)];
    let w = [(MarkerKind::W, &id)];
    let c = |m: &[(MarkerKind, &MorSymbol)], s: &MorSymbol| st.coordinate(m, s).unwrap();
    let unit = MorSymbol::Unit;
    let e = SparseVec::from_entries(vec![(c(&z, &unit), 1.into()), (c(&w, &id), 1.into())]);
    let id_e = SparseVec::from_entries(vec![(c(&z, &id), 1.into()), (c(&w, &id), 1.into())]);
    for v in [SparseVec::unit(0), SparseVec::unit(1), e, id_e] {
        assert!(st.lattice().contains(&v));
    }
    assert_eq!(st.lattice().rank(), 4);
    assert!(st.check_invariants().is_ok());
    assert!(st.lattice().is_pure_in(&Lattice::full(6)).unwrap());
}

#[test]
fn unit_only_stage() {
    let st = build_stage([], 2).unwrap();
    assert_eq!(st.ambient_rank(), 1);
    assert_eq!(st.lattice(), &Lattice::full(1));
    assert_eq!(build_stage([], 0).unwrap_err(), CornerError::CapTooSmall);
}

#[test]
fn closure_is_validated() {
    let l2 = canon(chain_graph(2).unwrap());
    let l3 = canon(chain_graph(3).unwrap());
    let phi = homs(&l2, &l3)[0].clone();
    assert!(matches!(build_stage([phi.clone()], 1), Err(CornerError::NotClosed(_))));
    let ok = [phi, MorSymbol::identity(&code(&l2)), MorSymbol::identity(&code(&l3))];
    assert!(build_stage(ok, 1).is_ok());
}

fn chain_stage() -> (CornerStage, GraphRef, GraphRef, Vec<MorSymbol>) {
    let l2 = canon(chain_graph(2).unwrap());
    let l3 = canon(chain_graph(3).unwrap());
    let mut active = homs(&l2, &l3);
    let phis = active.clone();
    active.extend(homs(&l2, &l2));
    active.extend(homs(&l3, &l3));
    (build_stage(active, 2).unwrap(), l2, l3, phis)
}

#[test]
fn left_multiplication_examples() {
    let (st, l2, _, phis) = chain_stage();
    let id2 = MorSymbol::identity(&code(&l2));
    let v = st.element(st.basis_element(&id2).unwrap()).unwrap();
    assert_eq!(st.left_multiply(&FormalSum::unit(), &v).unwrap(), v);
    assert_eq!(st.left_multiply(&FormalSum::symbol(id2.clone()), &v).unwrap(), v);
    let out = st.left_multiply(&FormalSum::symbol(phis[1].clone()), &v).unwrap();
    assert_eq!(out.0, st.basis_element(&phis[1]).unwrap());
    assert!(matches!(
        st.multiplier(&FormalSum::symbol(MorSymbol::identity(&code(&point())))),
        Err(CornerError::NotActive(_))
    ));
}

#[test]
fn action_laws() {
    let (st, l2, l3, phis) = chain_stage();
    let id2 = FormalSum::symbol(MorSymbol::identity(&code(&l2)));
    let id3 = FormalSum::symbol(MorSymbol::identity(&code(&l3)));
    let a = FormalSum::from_terms([(phis[0].clone(), 2.into()), (MorSymbol::Unit, (-1).into())]);
    let b = id2.add(&FormalSum::symbol(phis[2].clone()));
    for basis in st.lattice().basis() {
        let v = SnapshotElement(basis.clone());
        let ab = st.left_multiply(&a.mul(&b), &v).unwrap();
        let a_b = st.left_multiply(&a, &st.left_multiply(&b, &v).unwrap()).unwrap();
        assert_eq!(ab, a_b);
        let sum = st.left_multiply(&a.add(&id3), &v).unwrap();
        let parts = st.left_multiply(&a, &v).unwrap().0.add(&st.left_multiply(&id3, &v).unwrap().0);
        assert_eq!(sum.0, parts);
    }
}

#[test]
fn recover_multiplier_roundtrip_and_rejection() {
    let (st, _, l3, phis) = chain_stage();
    let ident = LatticeMap { images: st.lattice().basis().to_vec() };
    assert_eq!(st.recover_multiplier(&ident).unwrap(), FormalSum::unit());
    let a = FormalSum::from_terms([(phis[0].clone(), 3.into()), (phis[1].clone(), (-1).into())]);
    let h = st.left_multiplication_map(&a).unwrap();
    assert_eq!(st.recover_multiplier(&h).unwrap(), a);
    // exchange the images of two basis vectors: additive, not a multiplication
    let mut swapped = ident.clone();
    swapped.images.swap(0, 1);
    assert!(matches!(st.recover_multiplier(&swapped), Err(CornerError::NotLeftMultiplication { .. })));
    let id3 = MorSymbol::identity(&code(&l3));
    let h = st.left_multiplication_map(&FormalSum::symbol(id3.clone())).unwrap();
    assert_eq!(st.recover_multiplier(&h).unwrap(), FormalSum::symbol(id3));
}

#[test]
fn split_by_identity_idempotent() {
    let l2 = canon(chain_graph(2).unwrap());
    let st = build_stage(homs(&l2, &l2), 2).unwrap();
    let (gx, rest) = st.idempotent_split(&code(&l2)).unwrap();
    assert_eq!(gx.rank() + rest.rank(), st.lattice().rank());
    assert_eq!(gx.sum(&rest).unwrap(), *st.lattice());
    let nsym = st.symbol_count();
    for b in gx.basis() {
        for (i, _) in b.iter() {
            assert_eq!(st.symbols()[i % nsym].cod(), Some(&code(&l2)));
        }
    }
    let mut rev = homs(&l2, &l2);
    rev.reverse();
    rev.push(MorSymbol::Unit);
    let st2 = build_stage(rev, 2).unwrap();
    assert_eq!(st2.idempotent_split(&code(&l2)).unwrap(), (gx, rest));
    assert!(matches!(st.idempotent_split(&code(&point())), Err(CornerError::NotActive(_))));
}

#[test]
fn extension_embeds_old_stage() {
    let l2 = canon(chain_graph(2).unwrap());
    let l3 = canon(chain_graph(3).unwrap());
    let st = build_stage(homs(&l2, &l2), 1).unwrap();
    let (same, inc) = stage_extend(&st, [], 1).unwrap();
    assert_eq!(same.lattice(), st.lattice());
    for b in st.lattice().basis() {
        assert_eq!(&inc.apply(b), b);
    }
    let mut more = homs(&l2, &l3);
    more.extend(homs(&l3, &l3));
    let (big, inc) = stage_extend(&st, more, 2).unwrap();
    let id2 = FormalSum::symbol(MorSymbol::identity(&code(&l2)));
    for b in st.lattice().basis() {
        let before = st.left_multiply(&id2, &SnapshotElement(b.clone())).unwrap();
        let after = big.left_multiply(&id2, &SnapshotElement(inc.apply(b))).unwrap();
        assert_eq!(inc.apply(&before.0), after.0);
        assert_eq!(st.expand(b).len(), big.expand(&inc.apply(b)).len());
    }
    assert!(matches!(stage_extend(&big, [], 1), Err(CornerError::CapDecrease { .. })));
    let (capped, inc) = stage_extend(&st, [], 3).unwrap();
    for b in st.lattice().basis() {
        assert_eq!(st.expand(b), capped.expand(&inc.apply(b)));
    }
}

#[test]
fn expansion_roundtrip() {
    let (st, _, _, _) = chain_stage();
    for b in st.lattice().basis() {
        let parts = st.expand(b);
        assert_eq!(st.assemble(&parts).unwrap(), *b);
        for p in parts.values() {
            assert!(!p.is_zero());
        }
    }
}

#[test]
fn determination_at_identity() {
    let (st, l2, _, phis) = chain_stage();
    let id2 = MorSymbol::identity(&code(&l2));
    let dist = SnapshotElement(st.basis_element(&id2).unwrap());
    let a = FormalSum::from_terms([(phis[0].clone(), 1.into()), (phis[2].clone(), 4.into())]);
    let img = st.left_multiply(&a, &dist).unwrap();
    assert_eq!(img.constant_part(&st), a);
    let z = FormalSum::symbol(phis[1].clone()).sub(&FormalSum::symbol(phis[1].clone()));
    assert!(st.left_multiply(&z, &dist).unwrap().is_zero());
}

#[test]
fn json_dump() {
    let x = point();
    let st = build_stage([MorSymbol::identity(&code(&x))], 1).unwrap();
    let v = serde_json::to_value(&st).unwrap();
    assert_eq!(v["ambient_rank"], 6);
    assert_eq!(v["ambient_basis"].as_array().unwrap().len(), 6);
    assert_eq!(v["lattice"]["basis"].as_array().unwrap().len(), 4);
}
