use std::ops::ControlFlow;

use super::{Bits, Graph, GraphHom, GraphRef};

/// Backtracking search with forward checking. Vertices of the domain are
/// assigned in index order and candidates are tried in increasing order, so
/// maps are produced in lexicographic order.
struct Search<'a> {
    x: &'a Graph,
    y: &'a Graph,
    // For each domain vertex v: later vertices u with an arc v -> u, and with an arc u -> v.
    later_out: Vec<Vec<usize>>,
    later_in: Vec<Vec<usize>>,
    map: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(x: &'a Graph, y: &'a Graph) -> Self {
        let mut later_out = vec![Vec::new(); x.n()];
        let mut later_in = vec![Vec::new(); x.n()];
        for &(u, v) in x.arcs() {
            if v > u {
                later_out[u].push(v);
            } else if u > v {
                later_in[v].push(u);
            }
        }
        Search { x, y, later_out, later_in, map: vec![0; x.n()] }
    }

    fn initial_domains(&self) -> Option<Vec<Bits>> {
        let mut loops = Bits::new(self.y.n());
        let mut has_out = Bits::new(self.y.n());
        let mut has_in = Bits::new(self.y.n());
        for w in 0..self.y.n() {
            if self.y.has_loop(w) {
                loops.insert(w);
            }
            if self.y.out_degree(w) > 0 {
                has_out.insert(w);
            }
            if self.y.in_degree(w) > 0 {
                has_in.insert(w);
            }
        }
        let mut domains = Vec::with_capacity(self.x.n());
        for v in 0..self.x.n() {
            let mut d = Bits::full(self.y.n());
            if self.x.has_loop(v) {
                d.intersect_with(&loops);
            }
            if self.x.out_degree(v) > 0 {
                d.intersect_with(&has_out);
            }
            if self.x.in_degree(v) > 0 {
                d.intersect_with(&has_in);
            }
            if d.is_empty() {
                return None;
            }
            domains.push(d);
        }
        Some(domains)
    }

    fn run<F: FnMut(&[usize]) -> ControlFlow<()>>(&mut self, visit: &mut F) -> ControlFlow<()> {
        if self.x.n() == 0 {
            return visit(&[]);
        }
        match self.initial_domains() {
            Some(d) => self.descend(0, d, visit),
            None => ControlFlow::Continue(()),
        }
    }

    fn descend<F: FnMut(&[usize]) -> ControlFlow<()>>(
        &mut self,
        v: usize,
        domains: Vec<Bits>,
        visit: &mut F,
    ) -> ControlFlow<()> {
        let candidates: Vec<usize> = domains[v].iter().collect();
        'cand: for w in candidates {
            self.map[v] = w;
            if v + 1 == self.x.n() {
                visit(&self.map)?;
                continue;
            }
            let mut next = domains.clone();
            for &u in &self.later_out[v] {
                next[u].intersect_with(self.y.out_bits(w));
                if next[u].is_empty() {
                    continue 'cand;
                }
            }
            for &u in &self.later_in[v] {
                next[u].intersect_with(self.y.in_bits(w));
                if next[u].is_empty() {
                    continue 'cand;
                }
            }
            self.descend(v + 1, next, visit)?;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `visit` on every homomorphism `x -> y` in lexicographic order of the
/// vertex map; the visitor may stop the search early.
pub fn for_each_hom_map<F>(x: &Graph, y: &Graph, mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let _ = Search::new(x, y).run(&mut visit);
}

pub fn hom_maps(x: &Graph, y: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_hom_map(x, y, |m| {
        out.push(m.to_vec());
        ControlFlow::Continue(())
    });
    out
}

pub fn count_homs(x: &Graph, y: &Graph) -> usize {
    let mut count = 0;
    for_each_hom_map(x, y, |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

/// Every homomorphism `x -> y`, each once, in lexicographic order.
pub fn enumerate_homs(x: &GraphRef, y: &GraphRef) -> Vec<GraphHom> {
    hom_maps(x, y)
        .into_iter()
        .map(|m| GraphHom::new_unchecked(x.clone(), y.clone(), m))
        .collect()
}
