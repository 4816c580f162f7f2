use std::collections::BTreeSet;
use std::ops::ControlFlow;

use super::{canonical_graph, for_each_hom_map, Graph, GraphCode, GraphError};

/// True iff the only endomorphism is the identity.
pub fn is_rigid(g: &Graph) -> bool {
    let mut count = 0;
    let mut identity = false;
    for_each_hom_map(g, g, |m| {
        count += 1;
        identity |= m.iter().enumerate().all(|(i, &v)| i == v);
        if count > 1 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    count == 1 && identity
}

fn has_hom(x: &Graph, y: &Graph) -> bool {
    let mut found = false;
    for_each_hom_map(x, y, |_| {
        found = true;
        ControlFlow::Break(())
    });
    found
}

/// Rigid candidates in search order: by vertex count, then by arc mask.
/// With two or more vertices a loop yields a constant endomorphism, so only
/// loopless graphs without isolated vertices are generated there.
fn candidates(max_vertices: usize) -> impl Iterator<Item = Graph> {
    let singles = [Graph::new("", 1, []).unwrap(), Graph::new("", 1, [(0, 0)]).unwrap()];
    let larger = (2..=max_vertices).flat_map(|n| {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        let limit = 1u64.checked_shl(pairs.len() as u32).unwrap_or(u64::MAX);
        (0..limit).filter_map(move |mask| {
            let mut touched = 0u64;
            let arcs: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &(u, v))| {
                    touched |= 1 << u | 1 << v;
                    (u, v)
                })
                .collect();
            (touched.count_ones() as usize == n).then(|| Graph::new("", n, arcs).unwrap())
        })
    });
    singles.into_iter().filter(move |_| max_vertices >= 1).chain(larger)
}

/// Finds `count` graphs with at most `max_vertices` vertices such that the
/// only homomorphisms among them are identities. Candidates are scanned in a
/// fixed order; each new rigid candidate is tried as the last member of a
/// system drawn from the earlier ones (backtracking over the pairwise
/// incomparability relation), so the result is deterministic.
pub fn rigid_search(max_vertices: usize, count: usize) -> Result<Vec<Graph>, GraphError> {
    let count = count.max(1);
    let mut seen: BTreeSet<GraphCode> = BTreeSet::new();
    let mut found: Vec<Graph> = Vec::new();
    // incomparable[i] lists earlier candidates j with no homs either way.
    let mut incomparable: Vec<Vec<usize>> = Vec::new();
    for g in candidates(max_vertices) {
        if !is_rigid(&g) {
            continue;
        }
        let rep = canonical_graph(&g);
        if !seen.insert(GraphCode::of(&rep)) {
            continue;
        }
        let k = found.len();
        let row: Vec<usize> = (0..k)
            .filter(|&j| !has_hom(&rep, &found[j]) && !has_hom(&found[j], &rep))
            .collect();
        found.push(rep);
        incomparable.push(row);
        if let Some(mut system) = extend(&incomparable, vec![k], count) {
            system.sort_unstable();
            return Ok(system
                .into_iter()
                .enumerate()
                .map(|(i, j)| found[j].renamed(format!("R{i}")))
                .collect());
        }
    }
    Err(GraphError::RigidNotFound { count, max_vertices })
}

fn extend(incomparable: &[Vec<usize>], chosen: Vec<usize>, count: usize) -> Option<Vec<usize>> {
    if chosen.len() == count {
        return Some(chosen);
    }
    let last = *chosen.last().unwrap();
    for &j in incomparable[chosen[0]].iter().rev() {
        if j >= last {
            continue;
        }
        let ok = chosen.iter().all(|&c| c == chosen[0] || incomparable[c].contains(&j));
        if ok {
            let mut next = chosen.clone();
            next.push(j);
            if let Some(s) = extend(incomparable, next, count) {
                return Some(s);
            }
        }
    }
    None
}
