//! Finite demonstrations: chains, rigid systems, wedges, and the curated
//! reflection instances.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use homforge::algebra::{retract_witness, FormalSum, MorSymbol};
use homforge::corner::build_stage;
use homforge::gfun::{active_set, GFunctor};
use homforge::graph::{
    canonical_form, canonical_graph, chain_graph, count_homs, discrete_graph, is_isomorphic, is_rigid, rigid_search,
    wedge_sum, Graph, GraphCode, GraphError, GraphHom, GraphRef,
};
use homforge::ortho::{is_orthogonal, reflect_with_guard, ReflectionResult};
use homforge::zlattice::split_by_idempotent;

use crate::checks::{status_name, transported_rank};
use crate::config::Config;
use crate::report::{Check, Report};

fn canon_ref(g: &Graph) -> GraphRef {
    Arc::new(canonical_graph(g))
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Hom counts between chains against binomials, and the ranks of the
/// transported hom-groups.
pub fn chains(max: usize, cfg: &Config) -> Report {
    let start = Instant::now();
    let ls: Vec<GraphRef> = (1..=max).map(|n| canon_ref(&chain_graph(n).expect("chain"))).collect();
    let mut counts = Check::new("chain_hom_counts");
    let mut ranks = Check::new("chain_transported_ranks");
    let mut count_table = vec![vec![0usize; max]; max];
    let mut rank_table = vec![vec![0usize; max]; max];
    for m in 1..=max {
        for n in 1..=max {
            let (x, y) = (&ls[m - 1], &ls[n - 1]);
            let c = count_homs(x, y);
            count_table[m - 1][n - 1] = c;
            counts.record(c == binom(n, m), || json!({ "m": m, "n": n, "count": c }));
            let r = build_stage(active_set(&[(**x).clone(), (**y).clone()]), cfg.degree_cap)
                .map_err(|e| e.to_string())
                .and_then(|st| GFunctor::new(st).map_err(|e| e.to_string()))
                .and_then(|g| transported_rank(&g, x, y).map_err(|e| e.to_string()));
            let ok = r.as_ref().is_ok_and(|&r| r == binom(n, m));
            rank_table[m - 1][n - 1] = r.clone().unwrap_or(usize::MAX);
            ranks.record(ok, || json!({ "m": m, "n": n, "rank": format!("{r:?}") }));
        }
    }
    let mut report = Report::new("demo section5 chains", cfg);
    report.checks = vec![counts, ranks];
    report.data = json!({ "hom_counts": count_table, "transported_ranks": rank_table });
    report.timing_ms = start.elapsed().as_millis();
    report
}

/// A pairwise-rigid family found by search, and its transported hom-group
/// pattern (1 on the diagonal, 0 off it).
pub fn rigid(max_vertices: usize, count: usize, cfg: &Config) -> Result<Report, GraphError> {
    let start = Instant::now();
    let found = rigid_search(max_vertices, count)?;
    let search_ms = start.elapsed().as_millis();
    let gs: Vec<GraphRef> = found.iter().map(canon_ref).collect();
    let mut system = Check::new("rigid_system");
    for (i, a) in gs.iter().enumerate() {
        system.record(is_rigid(a), || json!({ "graph": i }));
        for (j, b) in gs.iter().enumerate() {
            if i != j {
                system.record(count_homs(a, b) == 0, || json!({ "from": i, "to": j }));
            }
        }
    }
    let mut pattern = Check::new("rigid_transported_pattern");
    let plain: Vec<Graph> = gs.iter().map(|g| (**g).clone()).collect();
    let mut table = vec![vec![usize::MAX; gs.len()]; gs.len()];
    match build_stage(active_set(&plain), cfg.degree_cap).map_err(|e| e.to_string()).and_then(|st| GFunctor::new(st).map_err(|e| e.to_string())) {
        Ok(g) => {
            for (i, a) in gs.iter().enumerate() {
                for (j, b) in gs.iter().enumerate() {
                    let r = transported_rank(&g, a, b).unwrap_or(usize::MAX);
                    table[i][j] = r;
                    pattern.record(r == usize::from(i == j), || json!({ "from": i, "to": j, "rank": r }));
                }
            }
        }
        Err(e) => pattern.record(false, || json!({ "error": e })),
    }
    let mut report = Report::new("demo section5 rigid", cfg);
    report.checks = vec![system, pattern];
    report.data = json!({
        "graphs": found,
        "ranks": table,
        "search_ms": search_ms,
    });
    report.timing_ms = start.elapsed().as_millis();
    Ok(report)
}

/// `X ∨ Y` retracts onto `X` when the wedge point of `X` carries a loop; the
/// idempotent `ι ∘ r` splits `G(X ∨ Y)` with image of the rank of `G X`.
pub fn wedge(cfg: &Config) -> Report {
    let start = Instant::now();
    let x = Graph::new("Xo", 2, [(0, 0), (0, 1)]).expect("graph");
    let y = chain_graph(3).expect("chain");
    let w = wedge_sum(&[x.clone(), y.clone()], &[0, 0]).expect("wedge");
    let (wc, wiso) = canonical_form(&w);
    let (xc, xiso) = canonical_form(&x);
    let (wc, xc): (GraphRef, GraphRef) = (Arc::new(wc), Arc::new(xc));
    // inclusion of X and the retraction collapsing Y onto the looped point
    let incl: Vec<usize> = (0..x.n()).map(|v| wiso.apply(v)).collect();
    let mut retr = vec![0usize; w.n()];
    retr[1] = 1;
    let to_canon_x = |v: usize| xiso.apply(v);
    let mut c_incl = vec![0; xc.n()];
    for v in 0..x.n() {
        c_incl[to_canon_x(v)] = incl[v];
    }
    let mut c_retr = vec![0; wc.n()];
    for v in 0..w.n() {
        c_retr[wiso.apply(v)] = to_canon_x(retr[v]);
    }
    let mut checks = Vec::new();
    let mut laws = Check::new("wedge_retract");
    let iota = GraphHom::new(xc.clone(), wc.clone(), c_incl);
    let r = GraphHom::new(wc.clone(), xc.clone(), c_retr);
    let (iota, r) = match (iota, r) {
        (Ok(i), Ok(r)) => (i, r),
        (a, b) => {
            laws.record(false, || json!({ "inclusion": format!("{a:?}"), "retraction": format!("{b:?}") }));
            let mut report = Report::new("demo section5 wedge", cfg);
            report.push(laws);
            return report;
        }
    };
    let (si, sr) = (MorSymbol::from_canonical_hom(&iota), MorSymbol::from_canonical_hom(&r));
    let e = si.times(&sr).expect("composable");
    laws.record(sr.times(&si) == Some(MorSymbol::identity(&GraphCode::of(&xc))), || json!("r ∘ ι is not the identity"));
    laws.record(e.times(&e) == Some(e.clone()), || json!("ι ∘ r is not idempotent"));
    let witness = retract_witness(&FormalSum::symbol(si.clone()), &FormalSum::symbol(sr.clone()));
    laws.record(witness.is_ok(), || json!({ "witness": format!("{witness:?}") }));
    checks.push(laws);

    let mut split = Check::new("wedge_snapshot_split");
    let mut data = json!(null);
    let built = build_stage(active_set(&[(*xc).clone(), (*wc).clone()]), cfg.degree_cap)
        .map_err(|e| e.to_string())
        .and_then(|st| GFunctor::new(st).map_err(|e| e.to_string()));
    match built {
        Ok(g) => {
            let gw = &g.snapshot(&GraphCode::of(&wc)).expect("object").lattice;
            let gx = &g.snapshot(&GraphCode::of(&xc)).expect("object").lattice;
            let m = g.stage().multiplier(&FormalSum::symbol(e.clone())).expect("active");
            match split_by_idempotent(gw, &m) {
                Ok((img, rest)) => {
                    split.record(img.rank() + rest.rank() == gw.rank(), || json!("ranks do not add"));
                    split.record(img.rank() == gx.rank(), || json!({ "image": img.rank(), "gx": gx.rank() }));
                    split.record(img.sum(&rest).is_ok_and(|s| &s == gw), || json!("summands do not span"));
                    data = json!({ "gw_rank": gw.rank(), "gx_rank": gx.rank(), "image_rank": img.rank(), "complement_rank": rest.rank() });
                }
                Err(err) => split.record(false, || json!({ "error": err.to_string() })),
            }
        }
        Err(err) => split.record(false, || json!({ "error": err })),
    }
    checks.push(split);
    let mut report = Report::new("demo section5 wedge", cfg);
    report.checks = checks;
    report.data = data;
    report.timing_ms = start.elapsed().as_millis();
    report
}

/// One reflection problem.
#[derive(Clone, Debug, Serialize)]
pub struct ReflectInstance {
    pub name: String,
    pub x: Graph,
    pub s: Vec<GraphHom>,
}

fn hom(a: &GraphRef, b: &GraphRef, m: &[usize]) -> GraphHom {
    GraphHom::new(a.clone(), b.clone(), m.to_vec()).expect("curated map is a homomorphism")
}

/// Twenty fixed instances: seventeen that converge and three whose
/// reflection is infinite.
pub fn curated_instances() -> Vec<ReflectInstance> {
    let e: GraphRef = Arc::new(Graph::empty("empty"));
    let pt: GraphRef = Arc::new(discrete_graph(1));
    let d2: GraphRef = Arc::new(discrete_graph(2));
    let d3 = discrete_graph(3);
    let l2: GraphRef = Arc::new(chain_graph(2).expect("chain"));
    let l3: GraphRef = Arc::new(chain_graph(3).expect("chain"));
    let lp: GraphRef = Arc::new(Graph::new("loop", 1, [(0, 0)]).expect("graph"));
    let fold = hom(&d2, &pt, &[0, 0]);
    let collapse = hom(&l2, &lp, &[0, 0]);
    let add_loop = hom(&pt, &lp, &[0]);
    let add_arc = hom(&d2, &l2, &[0, 1]);
    let point = hom(&e, &pt, &[]);
    let source = hom(&pt, &l2, &[0]);
    let target = hom(&pt, &l2, &[1]);
    let midpoint = hom(&l2, &l3, &[0, 2]);
    let id_l2 = GraphHom::identity(&l2);
    let inst = |name: &str, x: &Graph, s: &[&GraphHom]| ReflectInstance {
        name: name.to_string(),
        x: x.clone(),
        s: s.iter().map(|f| (*f).clone()).collect(),
    };
    vec![
        inst("fold/arc", &l2, &[&fold]),
        inst("fold/two-points", &d2, &[&fold]),
        inst("fold/point", &pt, &[&fold]),
        inst("fold/chain3", &l3, &[&fold]),
        inst("fold/three-points", &d3, &[&fold]),
        inst("collapse/chain3", &l3, &[&collapse]),
        inst("collapse/two-points", &d2, &[&collapse]),
        inst("loop/two-points", &d2, &[&add_loop]),
        inst("loop/arc", &l2, &[&add_loop]),
        inst("arc/point", &pt, &[&add_arc]),
        inst("arc/two-points", &d2, &[&add_arc]),
        inst("point/empty", &e, &[&point]),
        inst("point/three-points", &d3, &[&point]),
        inst("point/arc", &l2, &[&point]),
        inst("fold+loop/two-points", &d2, &[&fold, &add_loop]),
        inst("arc+point/three-points", &d3, &[&add_arc, &point]),
        inst("identity/chain3", &l3, &[&id_l2]),
        inst("source/point", &pt, &[&source]),
        inst("target/point", &pt, &[&target]),
        inst("midpoint/arc", &l2, &[&midpoint]),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct ReflectOutcome {
    pub name: String,
    pub status: &'static str,
    pub iterations: usize,
    pub lx: Graph,
    pub eta: Vec<usize>,
    pub orthogonal: bool,
    pub fixed_point: Option<bool>,
    pub reproducible: bool,
    pub trace: serde_json::Value,
}

/// Runs one instance twice and checks the fixed-point law when it converges.
pub fn run_instance(inst: &ReflectInstance, cap: usize, guard: usize) -> Result<ReflectOutcome, homforge::ortho::OrthoError> {
    let r: ReflectionResult = reflect_with_guard(&inst.x, &inst.s, cap, guard)?;
    let again = reflect_with_guard(&inst.x, &inst.s, cap, guard)?;
    let reproducible = again.trace == r.trace && again.status == r.status && *again.lx == *r.lx;
    let orthogonal = inst.s.iter().all(|f| is_orthogonal(f, &r.lx));
    let fixed_point = if r.converged() {
        let ll = reflect_with_guard(&r.lx, &inst.s, cap, guard)?;
        Some(ll.converged() && ll.iterations == 0 && is_isomorphic(&ll.lx, &r.lx) && ll.eta.is_isomorphism())
    } else {
        None
    };
    Ok(ReflectOutcome {
        name: inst.name.clone(),
        status: status_name(r.status),
        iterations: r.iterations,
        lx: (*r.lx).clone(),
        eta: r.eta.map().to_vec(),
        orthogonal,
        fixed_point,
        reproducible,
        trace: serde_json::to_value(&r.trace).expect("trace serializes"),
    })
}

/// Converged runs land in the perp class and are fixed points; capped runs
/// repeat their traces exactly.
pub fn reflection_suite(instances: &[ReflectInstance], cfg: &Config) -> Report {
    let start = Instant::now();
    let mut converged = Check::new("reflection_converged_laws");
    let mut capped = Check::new("reflection_cap_reproducible");
    let mut outcomes = Vec::new();
    for inst in instances {
        match run_instance(inst, cfg.reflect_cap, cfg.vertex_guard) {
            Ok(o) => {
                if o.fixed_point.is_some() {
                    let ok = o.orthogonal && o.fixed_point == Some(true) && o.reproducible;
                    converged.record(ok, || json!({ "instance": o.name }));
                } else {
                    capped.record(o.reproducible, || json!({ "instance": o.name }));
                }
                outcomes.push(serde_json::to_value(&o).expect("outcome serializes"));
            }
            Err(e) => converged.record(false, || json!({ "instance": inst.name, "error": e.to_string() })),
        }
    }
    let mut report = Report::new("reflect", cfg);
    report.checks = vec![converged, capped];
    report.data = json!({ "instances": outcomes });
    report.timing_ms = start.elapsed().as_millis();
    report
}
