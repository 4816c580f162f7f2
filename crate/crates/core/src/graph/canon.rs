use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, GraphHom};

/// Adjacency-matrix code of a graph in its current labeling: vertex count and
/// the row-major arc bits. For canonical representatives this is a complete
/// isomorphism invariant and is used as the representative's id.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphCode {
    n: usize,
    words: Vec<u64>,
}

impl GraphCode {
    pub fn of(g: &Graph) -> Self {
        let n = g.n();
        let mut words = vec![0u64; (n * n).div_ceil(64).max(1)];
        for &(u, v) in g.arcs() {
            let bit = u * n + v;
            words[bit / 64] |= 1 << (bit % 64);
        }
        GraphCode { n, words }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn to_graph(&self) -> Graph {
        let n = self.n;
        let arcs = (0..n * n)
            .filter(|&b| self.words[b / 64] >> (b % 64) & 1 == 1)
            .map(|b| (b / n, b % n));
        Graph::new(self.to_string(), n, arcs).expect("code bits are in range")
    }
}

impl fmt::Display for GraphCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}-", self.n)?;
        let mut words = self.words.iter().rev();
        write!(f, "{:x}", words.next().copied().unwrap_or(0))?;
        for w in words {
            write!(f, "{w:016x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GraphCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GraphCode {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::Parse { line: 0, msg: format!("bad graph code `{s}`") };
        let rest = s.strip_prefix('c').ok_or_else(bad)?;
        let (n, hex) = rest.split_once('-').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let nwords = (n * n).div_ceil(64).max(1);
        if hex.is_empty() || hex.len() > nwords * 16 {
            return Err(bad());
        }
        let mut words = vec![0u64; nwords];
        let digits: Vec<char> = hex.chars().collect();
        for (i, chunk) in digits.rchunks(16).enumerate() {
            let part: String = chunk.iter().collect();
            words[i] = u64::from_str_radix(&part, 16).map_err(|_| bad())?;
        }
        let code = GraphCode { n, words };
        if code.to_string() != s {
            return Err(bad());
        }
        Ok(code)
    }
}

impl Serialize for GraphCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GraphCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Color refinement. Colors are ordinal positions: a vertex's color is the
/// number of vertices whose key is strictly smaller. Only structure and the
/// incoming colors enter the keys, so the result is labeling-invariant.
fn refine(g: &Graph, colors: &mut [usize]) {
    let n = g.n();
    let mut cells = distinct(colors);
    loop {
        let keys: Vec<_> = (0..n)
            .map(|v| {
                let mut out: Vec<usize> = g.out_neighbors(v).map(|u| colors[u]).collect();
                let mut inc: Vec<usize> = g.in_neighbors(v).map(|u| colors[u]).collect();
                out.sort_unstable();
                inc.sort_unstable();
                (colors[v], g.has_loop(v), out, inc)
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        for (pos, &v) in order.iter().enumerate() {
            colors[v] = if pos > 0 && keys[order[pos - 1]] == keys[v] {
                colors[order[pos - 1]]
            } else {
                pos
            };
        }
        let now = distinct(colors);
        if now == cells {
            return;
        }
        cells = now;
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct Canonizer<'a> {
    g: &'a Graph,
    best: Option<(Vec<(usize, usize)>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Canonizer<'_> {
    fn leaf(&mut self, pos: Vec<usize>) {
        let mut code: Vec<(usize, usize)> =
            self.g.arcs().iter().map(|&(u, v)| (pos[u], pos[v])).collect();
        code.sort_unstable();
        match &self.best {
            Some((best, _)) if code > *best => {}
            Some((best, best_pos)) if code == *best => {
                let mut inv = vec![0; pos.len()];
                for (v, &p) in best_pos.iter().enumerate() {
                    inv[p] = v;
                }
                let aut: Vec<usize> = pos.iter().map(|&p| inv[p]).collect();
                if aut.iter().enumerate().any(|(i, &a)| i != a) {
                    self.automorphisms.push(aut);
                }
            }
            _ => self.best = Some((code, pos)),
        }
    }

    /// Orbit representatives under the known automorphisms that fix `path`.
    fn orbit_root(&self, path: &[usize], v: usize) -> usize {
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for aut in &self.automorphisms {
            if path.iter().any(|&p| aut[p] != p) {
                continue;
            }
            for (i, &j) in aut.iter().enumerate() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        find(&mut parent, v)
    }

    fn search(&mut self, colors: Vec<usize>, path: &mut Vec<usize>) {
        let n = self.g.n();
        let mut counts = vec![0usize; n];
        for &c in &colors {
            counts[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| counts[c] > 1) else {
            self.leaf(colors);
            return;
        };
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &w in &members {
            let root = self.orbit_root(path, w);
            if tried.iter().any(|&t| self.orbit_root(path, t) == root) {
                continue;
            }
            tried.push(w);
            let mut next = colors.clone();
            for &u in &members {
                if u != w {
                    next[u] = target + 1;
                }
            }
            refine(self.g, &mut next);
            path.push(w);
            self.search(next, path);
            path.pop();
        }
    }
}

/// Canonical representative of the isomorphism class of `x` together with an
/// isomorphism `x -> representative`. The representative's id is its code.
/// A graph that already equals its representative gets the identity.
pub fn canonical_form(x: &Graph) -> (Graph, GraphHom) {
    let n = x.n();
    let pos = if n == 0 {
        Vec::new()
    } else {
        let mut colors = vec![0; n];
        refine(x, &mut colors);
        let mut c = Canonizer { g: x, best: None, automorphisms: Vec::new() };
        c.search(colors, &mut Vec::new());
        c.best.expect("search reaches at least one leaf").1
    };
    let arcs: Vec<(usize, usize)> = x.arcs().iter().map(|&(u, v)| (pos[u], pos[v])).collect();
    let shape = Graph::from_arcs_lossy(String::new(), n, arcs);
    let rep = shape.renamed(GraphCode::of(&shape).to_string());
    let map = if rep.arcs() == x.arcs() { (0..n).collect() } else { pos };
    let iso = GraphHom::new_unchecked(Arc::new(x.clone()), Arc::new(rep.clone()), map);
    (rep, iso)
}

pub fn canonical_graph(x: &Graph) -> Graph {
    canonical_form(x).0
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.arc_count() == b.arc_count() && canonical_graph(a).same_shape(&canonical_graph(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{canonical_corpus, chain_graph, discrete_graph, enumerate_homs, full_graph};

    fn relabel(g: &Graph, perm: &[usize]) -> Graph {
        Graph::new("r", g.n(), g.arcs().iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    // Exhaustive isomorphism test: some permutation carries one arc set onto the other.
    fn brute_isomorphic(a: &Graph, b: &Graph) -> bool {
        a.n() == b.n() && permutations(a.n()).iter().any(|p| relabel(a, p).same_shape(b))
    }

    #[test]
    fn canonical_forms_are_idempotent_with_identity() {
        for g in canonical_corpus(3) {
            let (rep, iso) = canonical_form(&g);
            assert!(rep.same_shape(&g));
            assert!(iso.map().iter().enumerate().all(|(i, &v)| i == v));
        }
    }

    #[test]
    fn relabelings_share_a_representative() {
        let g = Graph::new("g", 3, [(0, 1), (1, 2), (2, 2)]).unwrap();
        let reps: Vec<Graph> =
            permutations(3).iter().map(|p| canonical_graph(&relabel(&g, p))).collect();
        assert!(reps.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(reps[0].arc_count(), 3);
        assert_eq!(reps[0].degree_multiset(), g.degree_multiset());
    }

    #[test]
    fn agrees_with_exhaustive_isomorphism_on_three_vertices() {
        let all: Vec<Graph> = (0u32..512)
            .step_by(5)
            .map(|mask| {
                let arcs = (0..9).filter(|b| mask >> b & 1 == 1).map(|b| (b / 3, b % 3));
                Graph::new("g", 3, arcs).unwrap()
            })
            .collect();
        for a in all.iter().step_by(3) {
            for b in &all {
                assert_eq!(
                    canonical_graph(a).same_shape(&canonical_graph(b)),
                    brute_isomorphic(a, b),
                    "{a:?} vs {b:?}"
                );
            }
        }
    }

    #[test]
    fn iso_is_a_homomorphism_both_ways() {
        let g = Graph::new("g", 5, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 4)]).unwrap();
        let (rep, iso) = canonical_form(&g);
        assert!(iso.is_isomorphism());
        assert!(iso.inverse().is_some());
        assert!(rep.check_hom(&g, iso.inverse().unwrap().map()).is_ok());
    }

    #[test]
    fn symmetric_graphs_finish() {
        for n in [1, 6, 12] {
            let d = discrete_graph(n);
            assert_eq!(canonical_graph(&d).arc_count(), 0);
            assert_eq!(canonical_graph(&full_graph(n)).arc_count(), n * n);
        }
        let l = chain_graph(7).unwrap();
        let (rep, _) = canonical_form(&l);
        let rep = Arc::new(rep);
        assert_eq!(enumerate_homs(&rep, &rep).len(), 1);
    }

    #[test]
    fn code_string_roundtrip() {
        for g in canonical_corpus(3) {
            let code = GraphCode::of(&g);
            assert_eq!(code.to_string(), g.id());
            let back: GraphCode = g.id().parse().unwrap();
            assert_eq!(back, code);
            assert!(back.to_graph().same_shape(&g));
        }
        let big = canonical_graph(&chain_graph(9).unwrap());
        let code = GraphCode::of(&big);
        assert_eq!(code.to_string().parse::<GraphCode>().unwrap(), code);
        assert!("c3-zz".parse::<GraphCode>().is_err());
    }
}
