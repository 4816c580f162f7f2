//! Corpus-wide verification runs.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use homforge::algebra::{FormalSum, MorSymbol};
use homforge::corner::{build_stage, CornerError, CornerStage, SnapshotElement};
use homforge::gfun::{active_set, GFunctor, GfunError};
use homforge::graph::{
    canonical_corpus, compose, count_homs, enumerate_homs, hom_maps, GadgetLayout, Graph, GraphCode, GraphHom,
    GraphRef,
};
use homforge::ortho::{is_orthogonal, ReflectStatus};
use homforge::zlattice::{IntMatrix, Lattice, SparseVec};

use crate::config::Config;
use crate::report::{Check, Report, Verdict};

pub const GAMMA_ROUNDTRIP: &str = "gamma_roundtrip";
pub const GAMMA_MULTIPLICATIVE: &str = "gamma_multiplicative";
pub const GAMMA_INJECTIVE: &str = "gamma_injective";
pub const MONO_PRESERVATION: &str = "mono_preservation";
pub const STAGE_INVARIANTS: &str = "stage_invariants";
pub const IDEMPOTENT_SPLIT: &str = "idempotent_split";
pub const RECOVER_MULTIPLIER: &str = "recover_multiplier";

/// A deterministic generator for one corpus pair.
pub fn pair_rng(seed: u64, i: usize, j: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(((i as u64) << 32) | j as u64);
    r
}

pub fn random_sum(rng: &mut impl Rng, symbols: &[MorSymbol]) -> FormalSum {
    let mut u = FormalSum::zero();
    for s in symbols {
        if rng.gen_bool(0.5) {
            u.add_term(s.clone(), BigInt::from(rng.gen_range(-5i64..=5)));
        }
    }
    u
}

pub fn hom_symbols(x: &GraphRef, y: &GraphRef) -> Vec<MorSymbol> {
    enumerate_homs(x, y).iter().map(MorSymbol::from_canonical_hom).collect()
}

fn sum_json(u: &FormalSum) -> Value {
    serde_json::to_value(u).unwrap_or(Value::Null)
}

/// The corpus graphs, shared.
pub fn corpus_refs(max_n: usize) -> Vec<GraphRef> {
    canonical_corpus(max_n).into_iter().map(Arc::new).collect()
}

fn fresh_checks() -> Vec<Check> {
    [GAMMA_ROUNDTRIP, GAMMA_MULTIPLICATIVE, GAMMA_INJECTIVE, MONO_PRESERVATION, STAGE_INVARIANTS, IDEMPOTENT_SPLIT]
        .into_iter()
        .map(Check::new)
        .collect()
}

/// Sandwich, purity and split laws of one stage.
pub fn stage_law_checks(stage: &CornerStage, invariants: &mut Check, split: &mut Check) {
    let inv = stage.check_invariants();
    invariants.record(inv.is_ok(), || json!({ "error": inv.clone().err() }));
    for x in stage.objects() {
        let res = stage.idempotent_split(&x);
        let ok = match &res {
            Ok((gx, rest)) => {
                gx.rank() + rest.rank() == stage.lattice().rank()
                    && gx.sum(rest).is_ok_and(|s| &s == stage.lattice())
            }
            Err(_) => false,
        };
        split.record(ok, || json!({ "object": x.to_string() }));
    }
}

/// `recover_multiplier(a · -) = a` for `count` random multipliers.
pub fn recover_check(stage: &CornerStage, rng: &mut impl Rng, count: usize) -> Check {
    let mut c = Check::new(RECOVER_MULTIPLIER);
    for _ in 0..count {
        let a = random_sum(rng, stage.symbols());
        let back = stage.left_multiplication_map(&a).and_then(|h| stage.recover_multiplier(&h));
        c.record(back.as_ref() == Ok(&a), || json!({ "multiplier": sum_json(&a), "got": format!("{back:?}") }));
    }
    c
}

/// All checks for the ordered pair `(X, Y)`, with the multiplier recovery
/// law when `recover` is set. `Err` means the stage guard refused the pair.
pub fn check_pair(
    x: &GraphRef,
    y: &GraphRef,
    cfg: &Config,
    rng: &mut impl Rng,
    recover: bool,
) -> Result<Vec<Check>, CornerError> {
    let stage = build_stage(active_set(&[(**x).clone(), (**y).clone()]), cfg.degree_cap)?;
    let mut checks = fresh_checks();
    if recover {
        checks.push(recover_check(&stage, rng, cfg.multipliers));
    }
    let [roundtrip, ring, injective, mono, invariants, split, ..] = &mut checks[..] else { unreachable!() };
    stage_law_checks(&stage, invariants, split);
    let g = match GFunctor::new(stage) {
        Ok(g) => g,
        Err(e) => {
            invariants.record(false, || json!({ "error": e.to_string() }));
            return Ok(checks);
        }
    };
    let (cx, cy) = (GraphCode::of(x), GraphCode::of(y));
    let pair = || json!({ "x": cx.to_string(), "y": cy.to_string() });
    let hxy = hom_symbols(x, y);
    let hxx = hom_symbols(x, x);
    let hyy = hom_symbols(y, y);

    let mut sums: Vec<FormalSum> = hxy.iter().cloned().map(FormalSum::symbol).collect();
    sums.extend((0..cfg.samples).map(|_| random_sum(rng, &hxy)));
    let distinguished = &g.snapshot(&cx).expect("object of the stage").distinguished.0;
    for u in &sums {
        let h = g.gamma(u, &cx, &cy);
        let back = h.as_ref().map_err(Clone::clone).and_then(|h| g.gamma_inverse(h));
        roundtrip.record(back.as_ref() == Ok(u), || json!({ "pair": pair(), "u": sum_json(u), "got": format!("{back:?}") }));
        let at = h.as_ref().map_err(Clone::clone).and_then(|h| g.eval(h, distinguished));
        let read = at.map(|v| SnapshotElement(v).constant_part(g.stage()));
        injective.record(read.as_ref() == Ok(u), || json!({ "pair": pair(), "u": sum_json(u) }));
    }

    for t in 0..cfg.samples {
        let (u, v, mid) = if t % 2 == 0 {
            (random_sum(rng, &hyy), random_sum(rng, &hxy), &cy)
        } else {
            (random_sum(rng, &hxy), random_sum(rng, &hxx), &cx)
        };
        let lhs = g.gamma(&u.mul(&v), &cx, &cy);
        let rhs = g.gamma(&u, mid, &cy).and_then(|gu| g.compose(&gu, &g.gamma(&v, &cx, mid)?));
        let ok = matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a == b);
        ring.record(ok, || json!({ "pair": pair(), "u": sum_json(&u), "v": sum_json(&v) }));
    }

    for (phi, f) in hxy.iter().zip(enumerate_homs(x, y)) {
        if f.is_injective() {
            let ok = g.g_morphism(phi).is_ok_and(|h| g.has_full_column_rank(&h));
            mono.record(ok, || json!({ "pair": pair(), "map": f.map() }));
        }
    }
    Ok(checks)
}

fn merge_into(acc: &mut Vec<Check>, part: Vec<Check>) {
    for c in part {
        match acc.iter_mut().find(|a| a.name == c.name) {
            Some(a) => a.merge(c),
            None => acc.push(c),
        }
    }
}

/// Every ordered corpus pair, plus the multiplier recovery law on the
/// single-graph stages and on every `recover_stride`-th pair stage.
pub fn gamma_check(corpus: &[GraphRef], cfg: &Config, recover_stride: usize) -> Report {
    let start = Instant::now();
    let n = corpus.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let outcomes: Vec<_> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            let mut rng = pair_rng(cfg.seed, i, j);
            let recover = i == j || (recover_stride > 0 && k % recover_stride == 0);
            check_pair(&corpus[i], &corpus[j], cfg, &mut rng, recover)
        })
        .collect();
    let mut checks = fresh_checks();
    checks.push(Check::new(RECOVER_MULTIPLIER));
    let mut skipped = Vec::new();
    for ((i, j), out) in pairs.iter().zip(outcomes) {
        match out {
            Ok(part) => merge_into(&mut checks, part),
            Err(e) => skipped.push(json!({ "x": corpus[*i].id(), "y": corpus[*j].id(), "reason": e.to_string() })),
        }
    }
    if skipped.len() == pairs.len() {
        for c in &mut checks {
            c.verdict = Verdict::Skipped;
        }
    }
    let mut report = Report::new("gamma-check", cfg);
    report.checks = checks;
    report.data = json!({ "graphs": n, "pairs": pairs.len(), "skipped": skipped });
    report.timing_ms = start.elapsed().as_millis();
    report
}

/// Hom counts are preserved by the gadget embedding, and it is a functor.
pub fn gadget_check(corpus: &[GraphRef], layout: &GadgetLayout, seed: u64, compositions: usize) -> Report {
    let start = Instant::now();
    let mut objs: Vec<GraphRef> = vec![Arc::new(Graph::empty("empty"))];
    objs.extend(corpus.iter().cloned());
    let emb: Vec<GraphRef> = objs.iter().map(|x| Arc::new(layout.embed_obj(x))).collect();
    let n = objs.len();
    let counts: Vec<Vec<(usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| (count_homs(&objs[i], &objs[j]), count_homs(&emb[i], &emb[j]))).collect())
        .collect();
    let mut full = Check::new("gadget_fullness");
    for (i, row) in counts.iter().enumerate() {
        for (j, &(a, b)) in row.iter().enumerate() {
            full.record(a == b, || json!({ "x": objs[i].id(), "y": objs[j].id(), "homs": a, "embedded_homs": b }));
        }
    }
    let mut ident = Check::new("gadget_identity");
    for (x, ex) in objs.iter().zip(&emb) {
        let e = layout.embed_mor_between(&GraphHom::identity(x), ex.clone(), ex.clone());
        ident.record(e.is_identity(), || json!({ "x": x.id() }));
    }
    let mut comp = Check::new("gadget_composition");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tries = 0;
    while comp.cases < compositions && tries < compositions * 20 {
        tries += 1;
        let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        let (fs, gs) = (enumerate_homs(&objs[i], &objs[j]), enumerate_homs(&objs[j], &objs[k]));
        if fs.is_empty() || gs.is_empty() {
            continue;
        }
        let f = &fs[rng.gen_range(0..fs.len())];
        let g = &gs[rng.gen_range(0..gs.len())];
        let gf = compose(g, f).expect("composable");
        let lhs = layout.embed_mor_between(&gf, emb[i].clone(), emb[k].clone());
        let ef = layout.embed_mor_between(f, emb[i].clone(), emb[j].clone());
        let eg = layout.embed_mor_between(g, emb[j].clone(), emb[k].clone());
        let ok = compose(&eg, &ef).is_ok_and(|r| r == lhs);
        comp.record(ok, || json!({ "f": f.map(), "g": g.map() }));
    }
    let mut report = Report::new("embed", &Config { gadget_layout: layout.clone(), ..Config::default() });
    report.checks = vec![full, ident, comp];
    report.data = json!({ "layout": layout, "objects": n });
    report.timing_ms = start.elapsed().as_millis();
    report
}

/// Rank of the span of `γ(φ)` over all `φ : X -> Y`, computed on the
/// flattened basis images.
pub fn transported_rank(g: &GFunctor, x: &GraphRef, y: &GraphRef) -> Result<usize, GfunError> {
    let ambient = g.stage().ambient_rank();
    let src = g.snapshot(&GraphCode::of(x))?.lattice.rank();
    let mut gens = Vec::new();
    for phi in hom_symbols(x, y) {
        let h = g.g_morphism(&phi)?;
        let entries = h
            .images
            .iter()
            .enumerate()
            .flat_map(|(k, v)| v.iter().map(move |(i, c)| (k * ambient + i, c.clone())))
            .collect();
        gens.push(SparseVec::from_entries(entries));
    }
    let lat = Lattice::from_generators(src.max(1) * ambient, &gens).map_err(CornerError::from)?;
    Ok(lat.rank())
}

/// Cached hom lists between corpus graphs.
struct HomCache {
    homs: Vec<Vec<Vec<Vec<usize>>>>,
}

impl HomCache {
    fn new(objs: &[GraphRef]) -> Self {
        let homs = objs.par_iter().map(|a| objs.iter().map(|x| hom_maps(a, x)).collect()).collect();
        HomCache { homs }
    }
}

/// The linearized precomposition matrix assembled from cached hom lists.
fn cached_matrix(f: &[usize], from_b: &[Vec<usize>], from_a: &[Vec<usize>]) -> IntMatrix {
    let row: HashMap<&[usize], usize> = from_a.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let mut m = IntMatrix::zeros(from_a.len(), from_b.len());
    for (j, g) in from_b.iter().enumerate() {
        let image: Vec<usize> = f.iter().map(|&v| g[v]).collect();
        let i = row[image.as_slice()];
        m.set(i, j, m.get(i, j) + BigInt::from(1));
    }
    m
}

/// Orthogonality of every hom among `sources` against every graph in
/// `objects`, compared with invertibility of the linearized precomposition.
pub fn ortho_grid(sources: &[GraphRef], objects: &[GraphRef], cfg: &Config) -> Report {
    let start = Instant::now();
    let mut all: Vec<GraphRef> = sources.to_vec();
    for o in objects {
        if !all.contains(o) {
            all.push(o.clone());
        }
    }
    let cache = HomCache::new(&all);
    let col: Vec<usize> = objects.iter().map(|o| all.iter().position(|a| a == o).expect("present")).collect();
    let rows: Vec<(usize, usize, Check, usize)> = (0..sources.len())
        .into_par_iter()
        .flat_map_iter(|a| (0..sources.len()).map(move |b| (a, b)))
        .map(|(a, b)| {
            let mut c = Check::new("ortho_transport");
            let mut orth = 0;
            for fmap in &cache.homs[a][b] {
                let f = GraphHom::new(sources[a].clone(), sources[b].clone(), fmap.clone()).expect("enumerated hom");
                for (xi, x) in objects.iter().enumerate() {
                    let set = is_orthogonal(&f, x);
                    let m = cached_matrix(fmap, &cache.homs[b][col[xi]], &cache.homs[a][col[xi]]);
                    let lin = m.rows() == m.cols() && m.is_unimodular();
                    orth += set as usize;
                    c.record(set == lin, || json!({ "f": format!("{f:?}"), "x": x.id(), "set": set, "linear": lin }));
                }
            }
            (a, b, c, orth)
        })
        .collect();
    let mut check = Check::new("ortho_transport");
    let mut orthogonal = 0;
    for (_, _, c, o) in rows {
        check.merge(c);
        orthogonal += o;
    }
    let mut report = Report::new("ortho-grid", cfg);
    report.data = json!({
        "sources": sources.len(),
        "objects": objects.len(),
        "morphisms": cache.homs[..sources.len()].iter().map(|r| r[..sources.len()].iter().map(Vec::len).sum::<usize>()).sum::<usize>(),
        "orthogonal_pairs": orthogonal,
    });
    report.push(check);
    report.timing_ms = start.elapsed().as_millis();
    report
}

pub fn status_name(s: ReflectStatus) -> &'static str {
    match s {
        ReflectStatus::Converged => "converged",
        ReflectStatus::CapExceeded => "cap_exceeded",
    }
}
