//! Orthogonality of graph maps and graphs, perp classes over finite universes,
//! the separating factorization, and reflection by a capped small-object
//! argument.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::graph::{
    compose, hom_maps, image_factorization, product_many, pushout, coequalizer, Graph, GraphError, GraphHom,
    GraphRef,
};
use crate::zlattice::IntMatrix;

pub const DEFAULT_REFLECT_CAP: usize = 32;
pub const DEFAULT_VERTEX_GUARD: usize = 10_000;
pub const DEFAULT_PRODUCT_GUARD: usize = 10_000;
pub const GUARD_ENV: &str = "HOMFORGE_GUARD_VERTICES";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrthoError {
    #[error("reflection cap must be at least 1")]
    CapTooSmall,
    #[error("separator product would have {size} vertices, bound is {bound}")]
    ProductTooLarge { size: String, bound: usize },
    #[error("morphism {0} has an endpoint outside the universe")]
    OutOfScope(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The vertex guard, overridable through the environment.
pub fn vertex_guard() -> usize {
    std::env::var(GUARD_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_VERTEX_GUARD)
}

/// Whether precomposition with `f : A -> B` is a bijection `Hom(B, X) -> Hom(A, X)`.
pub fn is_orthogonal(f: &GraphHom, x: &Graph) -> bool {
    let from_b = hom_maps(f.cod(), x);
    let from_a = crate::graph::count_homs(f.dom(), x);
    if from_b.len() != from_a {
        return false;
    }
    let images: BTreeSet<Vec<usize>> = from_b.iter().map(|g| precompose(g, f)).collect();
    images.len() == from_a
}

fn precompose(g: &[usize], f: &GraphHom) -> Vec<usize> {
    f.map().iter().map(|&v| g[v]).collect()
}

pub fn perp_objects(s: &[GraphHom], candidates: &[Graph]) -> Vec<Graph> {
    candidates.iter().filter(|x| s.iter().all(|f| is_orthogonal(f, x))).cloned().collect()
}

pub fn perp_morphisms(d: &[Graph], candidates: &[GraphHom]) -> Vec<GraphHom> {
    candidates.iter().filter(|f| d.iter().all(|x| is_orthogonal(f, x))).cloned().collect()
}

/// The linearized precomposition `Z[Hom(B, X)] -> Z[Hom(A, X)]` in the
/// enumeration bases: column `j` is the basis vector of `g_j ∘ f`.
pub fn precomposition_matrix(f: &GraphHom, x: &Graph) -> IntMatrix {
    let from_b = hom_maps(f.cod(), x);
    let from_a = hom_maps(f.dom(), x);
    let row: BTreeMap<&[usize], usize> = from_a.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let mut m = IntMatrix::zeros(from_a.len(), from_b.len());
    for (j, g) in from_b.iter().enumerate() {
        let i = row[precompose(g, f).as_slice()];
        m.set(i, j, m.get(i, j) + BigInt::from(1));
    }
    m
}

/// Orthogonality read off the free abelian groups on the hom-sets: the
/// linearized precomposition must be invertible over the integers.
pub fn transported_orthogonality(f: &GraphHom, x: &Graph) -> bool {
    let verdict = precomposition_matrix(f, x).is_unimodular();
    debug_assert_eq!(verdict, is_orthogonal(f, x));
    verdict
}

/// A finite collection of graphs and maps between them.
#[derive(Clone, Debug, Serialize)]
pub struct OrthoUniverse {
    pub objects: Vec<Graph>,
    pub morphisms: Vec<GraphHom>,
}

impl OrthoUniverse {
    pub fn new(objects: Vec<Graph>, morphisms: Vec<GraphHom>) -> Result<Self, OrthoError> {
        for (i, f) in morphisms.iter().enumerate() {
            if !objects.contains(f.dom()) || !objects.contains(f.cod()) {
                return Err(OrthoError::OutOfScope(i));
            }
        }
        Ok(OrthoUniverse { objects, morphisms })
    }

    /// `verdicts[i][j]` is whether morphism `i` is orthogonal to object `j`.
    pub fn verdicts(&self) -> Vec<Vec<bool>> {
        self.morphisms.iter().map(|f| self.objects.iter().map(|x| is_orthogonal(f, x)).collect()).collect()
    }
}

/// `A -α-> A' -e-> Z_A` with `α` vertex-surjective, `e` an inclusion and `Z_A`
/// a product of members of the test family.
#[derive(Clone, Debug, Serialize)]
pub struct Separator {
    pub alpha: GraphHom,
    pub e: GraphHom,
    pub za: GraphRef,
    pub diagonal: GraphHom,
    /// Chosen maps `A -> Z`, one per distinct choice.
    pub factors: Vec<GraphHom>,
}

pub fn separator(a: &GraphRef, d0: &[Graph]) -> Result<Separator, OrthoError> {
    separator_with_guard(a, d0, DEFAULT_PRODUCT_GUARD)
}

pub fn separator_with_guard(a: &GraphRef, d0: &[Graph], guard: usize) -> Result<Separator, OrthoError> {
    let zs: Vec<GraphRef> = d0.iter().map(|z| Arc::new(z.clone())).collect();
    let homs: Vec<Vec<Vec<usize>>> = zs.iter().map(|z| hom_maps(a, z)).collect();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for x in 0..a.n() {
        for y in x + 1..a.n() {
            let pick = homs.iter().enumerate().find_map(|(zi, hs)| {
                hs.iter().position(|m| m[x] != m[y]).map(|hi| (zi, hi))
            });
            if let Some(c) = pick {
                if !chosen.contains(&c) {
                    chosen.push(c);
                }
            }
        }
    }
    let mut size = BigInt::from(1);
    for &(zi, _) in &chosen {
        size *= zs[zi].n();
    }
    if size > BigInt::from(guard) {
        return Err(OrthoError::ProductTooLarge { size: size.to_string(), bound: guard });
    }
    let factors: Vec<GraphHom> =
        chosen.iter().map(|&(zi, hi)| GraphHom::new(a.clone(), zs[zi].clone(), homs[zi][hi].clone())).collect::<Result<_, _>>()?;
    let prod = product_many(&chosen.iter().map(|&(zi, _)| zs[zi].clone()).collect::<Vec<_>>());
    let diag_map = (0..a.n())
        .map(|v| factors.iter().zip(&prod.projections).fold(0, |acc, (f, p)| acc * p.cod().n() + f.apply(v)))
        .collect();
    let diagonal = GraphHom::new(a.clone(), prod.graph.clone(), diag_map)?;
    let (alpha, e) = image_factorization(&diagonal);
    Ok(Separator { alpha, e, za: prod.graph, diagonal, factors })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReflectStatus {
    Converged,
    CapExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReflectStep {
    /// `h : A -> current` had no extension along `S[morphism]`; glued `B` in.
    Glue { morphism: usize, attaching: Vec<usize>, vertices: usize, arcs: usize },
    /// Two distinct extensions of `h`; identified them.
    Coequalize {
        morphism: usize,
        attaching: Vec<usize>,
        first: Vec<usize>,
        second: Vec<usize>,
        vertices: usize,
        arcs: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ReflectionResult {
    pub lx: GraphRef,
    pub eta: GraphHom,
    pub status: ReflectStatus,
    pub iterations: usize,
    pub trace: Vec<ReflectStep>,
    /// The vertex guard stopped the run before the cap did.
    pub guard_hit: bool,
}

impl ReflectionResult {
    pub fn converged(&self) -> bool {
        self.status == ReflectStatus::Converged
    }
}

/// First defect of `current` against `s`, in order of morphism index then
/// attaching map.
fn first_defect(s: &[GraphHom], current: &GraphRef) -> Option<(usize, Vec<usize>, Vec<Vec<usize>>)> {
    for (i, f) in s.iter().enumerate() {
        let mut ext: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
        for k in hom_maps(f.cod(), current) {
            ext.entry(precompose(&k, f)).or_default().push(k);
        }
        for h in hom_maps(f.dom(), current) {
            match ext.remove(&h) {
                None => return Some((i, h, Vec::new())),
                Some(ks) if ks.len() > 1 => return Some((i, h, ks)),
                Some(_) => {}
            }
        }
    }
    None
}

pub fn reflect(x: &Graph, s: &[GraphHom], cap: usize) -> Result<ReflectionResult, OrthoError> {
    reflect_with_guard(x, s, cap, vertex_guard())
}

pub fn reflect_with_guard(x: &Graph, s: &[GraphHom], cap: usize, guard: usize) -> Result<ReflectionResult, OrthoError> {
    if cap == 0 {
        return Err(OrthoError::CapTooSmall);
    }
    let x: GraphRef = Arc::new(x.clone());
    let mut current = x.clone();
    let mut eta = GraphHom::identity(&x);
    let mut trace = Vec::new();
    loop {
        let Some((i, h, ks)) = first_defect(s, &current) else {
            debug_assert!(s.iter().all(|f| is_orthogonal(f, &current)));
            let iterations = trace.len();
            return Ok(ReflectionResult { lx: current, eta, status: ReflectStatus::Converged, iterations, trace, guard_hit: false });
        };
        let guard_hit = current.n() > guard;
        if trace.len() == cap || guard_hit {
            let iterations = trace.len();
            return Ok(ReflectionResult { lx: current, eta, status: ReflectStatus::CapExceeded, iterations, trace, guard_hit });
        }
        let f = &s[i];
        let attach = GraphHom::new(f.dom().clone(), current.clone(), h.clone())?;
        let step_map = if ks.is_empty() {
            pushout(f, &attach)?.right
        } else {
            let k1 = GraphHom::new(f.cod().clone(), current.clone(), ks[0].clone())?;
            let k2 = GraphHom::new(f.cod().clone(), current.clone(), ks[1].clone())?;
            coequalizer(&k1, &k2)?
        };
        let next: GraphRef = Arc::new(step_map.cod().renamed(format!("{}#{}", x.id(), trace.len() + 1)));
        let step_map = GraphHom::new(current.clone(), next.clone(), step_map.map().to_vec())?;
        eta = compose(&step_map, &eta)?;
        let (vertices, arcs) = (next.n(), next.arc_count());
        trace.push(match ks.len() {
            0 => ReflectStep::Glue { morphism: i, attaching: h, vertices, arcs },
            _ => ReflectStep::Coequalize {
                morphism: i,
                attaching: h,
                first: ks[0].clone(),
                second: ks[1].clone(),
                vertices,
                arcs,
            },
        });
        current = next;
    }
}

#[cfg(test)]
mod tests;
