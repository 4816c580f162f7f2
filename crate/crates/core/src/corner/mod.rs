//! A finite, degree-capped model of a Corner-type group for the category
//! algebra: the pure closure of the lattice spanned by the active symbols and
//! the elements `a' · e_a`, `e_a = z_a · 1 + w_a · a`, where the `z_a`, `w_a`
//! are formal markers treated as algebraically independent.
//!
//! Ambient coordinates are pairs (monomial in the markers, active symbol),
//! laid out as `monomial_index * symbol_count + symbol_index`. The unit sorts
//! first, so coordinate 0 is `(1, UNIT)`.

mod monomial;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{FormalSum, MorSymbol};
use crate::graph::GraphCode;
use crate::zlattice::{split_by_idempotent, IntLinearMap, Lattice, LatticeError, SparseVec};

pub use monomial::{MarkerKind, Monomial, PolyCoef, TransMarker};
use monomial::MonomialIndex;

pub const DEFAULT_DEGREE_CAP: usize = 2;

/// Upper bound on the ambient rank of a stage.
pub const DEFAULT_AMBIENT_GUARD: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CornerError {
    #[error("degree cap must be at least 1")]
    CapTooSmall,
    #[error("degree cap cannot decrease ({old} -> {new})")]
    CapDecrease { old: usize, new: usize },
    #[error("active set is not closed: {0}")]
    NotClosed(String),
    #[error("symbol {0} is not active in the stage")]
    NotActive(MorSymbol),
    #[error("stage ambient rank exceeds the size guard")]
    TooLarge,
    #[error("left multiplication left the lattice (basis vector {basis_index:?})")]
    Escape { basis_index: Option<usize> },
    #[error("map is not a left multiplication (first mismatch at basis vector {basis_index})")]
    NotLeftMultiplication { basis_index: usize, witness: SparseVec },
    #[error("vector is not in the stage lattice")]
    NotInLattice,
    #[error("expected {expected} basis images, found {found}")]
    WrongImageCount { expected: usize, found: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// An immutable stage: active symbols, markers, and the saturated lattice.
#[derive(Clone, Debug)]
pub struct CornerStage {
    symbols: Vec<MorSymbol>,
    index: HashMap<MorSymbol, usize>,
    /// `products[t][s]` = index of `t · s`.
    products: Vec<Vec<Option<u32>>>,
    /// Symbol index carrying marker pair `k` (`z` = `2k`, `w` = `2k + 1`).
    tagged: Vec<usize>,
    monomials: MonomialIndex,
    generators: Vec<SparseVec>,
    lattice: Lattice,
    truncated: bool,
}

/// A stage lattice member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SnapshotElement(pub SparseVec);

/// Left multiplication by a fixed formal sum, compiled to symbol indices.
#[derive(Clone, Debug)]
pub struct Multiplier<'a> {
    stage: &'a CornerStage,
    terms: Vec<(usize, BigInt)>,
}

/// A homomorphism out of a lattice, given by the images of its basis rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeMap {
    pub images: Vec<SparseVec>,
}

impl LatticeMap {
    pub fn eval(&self, domain: &Lattice, v: &SparseVec) -> Result<SparseVec, CornerError> {
        let coords = domain.member(v)?.ok_or(CornerError::NotInLattice)?;
        let mut entries = Vec::new();
        for (i, c) in coords.iter() {
            entries.extend(self.images[i].iter().map(|(j, x)| (j, x * c)));
        }
        Ok(SparseVec::from_entries(entries))
    }
}

/// Coordinate map from an older stage into an extension of it.
#[derive(Clone, Debug)]
pub struct StageInclusion {
    old_nsym: usize,
    new_nsym: usize,
    symbol_map: Vec<usize>,
    marker_map: Vec<u32>,
    old_monomials: MonomialIndex,
    new_monomials: MonomialIndex,
}

impl StageInclusion {
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        v.map_indices(|i| {
            let (m, s) = (i / self.old_nsym, i % self.old_nsym);
            let mut mono: Vec<u32> =
                self.old_monomials.unrank(m).iter().map(|&k| self.marker_map[k as usize]).collect();
            mono.sort_unstable();
            let nm = self.new_monomials.rank(&mono).expect("cap does not decrease");
            nm * self.new_nsym + self.symbol_map[s]
        })
    }
}

pub fn build_stage(
    active: impl IntoIterator<Item = MorSymbol>,
    degree_cap: usize,
) -> Result<CornerStage, CornerError> {
    CornerStage::build(active, degree_cap, DEFAULT_AMBIENT_GUARD)
}

impl CornerStage {
    /// Builds a stage; the unit is added to `active` if missing.
    pub fn build(
        active: impl IntoIterator<Item = MorSymbol>,
        degree_cap: usize,
        ambient_guard: usize,
    ) -> Result<CornerStage, CornerError> {
        if degree_cap < 1 {
            return Err(CornerError::CapTooSmall);
        }
        let mut symbols: Vec<MorSymbol> = active.into_iter().collect();
        symbols.push(MorSymbol::Unit);
        symbols.sort();
        symbols.dedup();
        let index: HashMap<MorSymbol, usize> =
            symbols.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        for s in &symbols {
            for end in [s.dom(), s.cod()].into_iter().flatten() {
                let id = MorSymbol::identity(end);
                if !index.contains_key(&id) {
                    return Err(CornerError::NotClosed(format!("missing identity {id}")));
                }
            }
        }
        let nsym = symbols.len();
        let mut products = vec![vec![None; nsym]; nsym];
        for (t, ts) in symbols.iter().enumerate() {
            for (s, ss) in symbols.iter().enumerate() {
                if let Some(p) = ts.times(ss) {
                    let Some(&k) = index.get(&p) else {
                        return Err(CornerError::NotClosed(format!("{ts} · {ss} = {p} is missing")));
                    };
                    products[t][s] = Some(k as u32);
                }
            }
        }
        let tagged: Vec<usize> = (0..nsym).filter(|&i| !symbols[i].is_unit()).collect();
        let monomials = MonomialIndex::new(2 * tagged.len(), degree_cap)?;
        let ambient = monomials.count().checked_mul(nsym).ok_or(CornerError::TooLarge)?;
        if ambient > ambient_guard {
            return Err(CornerError::TooLarge);
        }
        let mut generators: Vec<SparseVec> = (0..nsym).map(SparseVec::unit).collect();
        for (k, &a) in tagged.iter().enumerate() {
            let z = monomials.rank(&[2 * k as u32]).unwrap();
            let w = monomials.rank(&[2 * k as u32 + 1]).unwrap();
            for (a1, row) in products.iter().enumerate() {
                // a' · e_a = z_a a' + w_a (a' · a); the second term vanishes when
                // a' and a do not compose
                let mut g = vec![(z * nsym + a1, BigInt::from(1))];
                if let Some(p) = row[a] {
                    g.push((w * nsym + p as usize, BigInt::from(1)));
                }
                generators.push(SparseVec::from_entries(g));
            }
        }
        let lattice = Lattice::from_generators(ambient, &generators)?.saturate();
        Ok(CornerStage {
            symbols,
            index,
            products,
            tagged,
            monomials,
            generators,
            lattice,
            truncated: false,
        })
    }

    pub fn symbols(&self) -> &[MorSymbol] {
        &self.symbols
    }

    pub fn symbol_index(&self, s: &MorSymbol) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn is_active(&self, s: &MorSymbol) -> bool {
        self.index.contains_key(s)
    }

    pub fn degree_cap(&self) -> usize {
        self.monomials.cap()
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    pub fn monomial_count(&self) -> usize {
        self.monomials.count()
    }

    pub fn ambient_rank(&self) -> usize {
        self.lattice.ambient_rank()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn generator_log(&self) -> &[SparseVec] {
        &self.generators
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Graph codes appearing as endpoints of active symbols.
    pub fn objects(&self) -> Vec<GraphCode> {
        let mut out: Vec<GraphCode> = self.symbols.iter().filter_map(|s| s.dom().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn markers(&self) -> Vec<TransMarker> {
        self.tagged
            .iter()
            .flat_map(|&a| {
                [MarkerKind::Z, MarkerKind::W].map(|kind| TransMarker { kind, tag: self.symbols[a].clone() })
            })
            .collect()
    }

    pub fn monomial(&self, idx: usize) -> Monomial {
        let markers = self.markers();
        Monomial(self.monomials.unrank(idx).iter().map(|&k| markers[k as usize].clone()).collect())
    }

    /// Ambient index of `(monomial, symbol)`.
    pub fn coordinate(&self, markers: &[(MarkerKind, &MorSymbol)], s: &MorSymbol) -> Option<usize> {
        let mut ks = Vec::with_capacity(markers.len());
        for (kind, tag) in markers {
            let pos = self.tagged.iter().position(|&a| &self.symbols[a] == *tag)? as u32;
            ks.push(2 * pos + u32::from(*kind == MarkerKind::W));
        }
        ks.sort_unstable();
        Some(self.monomials.rank(&ks)? * self.symbols.len() + self.symbol_index(s)?)
    }

    /// `(1, s)`.
    pub fn basis_element(&self, s: &MorSymbol) -> Result<SparseVec, CornerError> {
        self.symbol_index(s).map(SparseVec::unit).ok_or_else(|| CornerError::NotActive(s.clone()))
    }

    pub fn element(&self, v: SparseVec) -> Result<SnapshotElement, CornerError> {
        if self.lattice.contains(&v) {
            Ok(SnapshotElement(v))
        } else {
            Err(CornerError::NotInLattice)
        }
    }

    pub fn multiplier(&self, a: &FormalSum) -> Result<Multiplier<'_>, CornerError> {
        let mut terms = Vec::with_capacity(a.len());
        for (s, k) in a.terms() {
            let i = self.symbol_index(s).ok_or_else(|| CornerError::NotActive(s.clone()))?;
            terms.push((i, k.clone()));
        }
        Ok(Multiplier { stage: self, terms })
    }

    /// `a · v`, checked to stay inside the lattice.
    pub fn left_multiply(&self, a: &FormalSum, v: &SnapshotElement) -> Result<SnapshotElement, CornerError> {
        let out = self.multiplier(a)?.apply(&v.0);
        if !self.lattice.contains(&out) {
            return Err(CornerError::Escape { basis_index: None });
        }
        Ok(SnapshotElement(out))
    }

    /// The map `v -> a · v` on the lattice basis.
    pub fn left_multiplication_map(&self, a: &FormalSum) -> Result<LatticeMap, CornerError> {
        let m = self.multiplier(a)?;
        let mut images = Vec::with_capacity(self.lattice.rank());
        for (i, b) in self.lattice.basis().iter().enumerate() {
            let img = m.apply(b);
            if !self.lattice.contains(&img) {
                return Err(CornerError::Escape { basis_index: Some(i) });
            }
            images.push(img);
        }
        Ok(LatticeMap { images })
    }

    /// The unique `a` with `h = a · (-)`, read off `h(1, UNIT)` and verified on
    /// every basis vector.
    pub fn recover_multiplier(&self, h: &LatticeMap) -> Result<FormalSum, CornerError> {
        if h.images.len() != self.lattice.rank() {
            return Err(CornerError::WrongImageCount { expected: self.lattice.rank(), found: h.images.len() });
        }
        let at_one = h.eval(&self.lattice, &SparseVec::unit(0))?;
        let nsym = self.symbols.len();
        let a = FormalSum::from_terms(
            at_one.iter().take_while(|(i, _)| *i < nsym).map(|(i, k)| (self.symbols[i].clone(), k.clone())),
        );
        let m = self.multiplier(&a)?;
        for (i, b) in self.lattice.basis().iter().enumerate() {
            if m.apply(b) != h.images[i] {
                return Err(CornerError::NotLeftMultiplication { basis_index: i, witness: b.clone() });
            }
        }
        Ok(a)
    }

    /// `(id_X · L, (1 - id_X) · L)`.
    pub fn idempotent_split(&self, x: &GraphCode) -> Result<(Lattice, Lattice), CornerError> {
        let id = MorSymbol::identity(x);
        let m = self.multiplier(&FormalSum::symbol(id))?;
        Ok(split_by_idempotent(&self.lattice, &m)?)
    }

    /// Expansion `v = Σ_s p_s · s` with polynomial coefficients.
    pub fn expand(&self, v: &SparseVec) -> BTreeMap<MorSymbol, PolyCoef> {
        let nsym = self.symbols.len();
        let mut out: BTreeMap<MorSymbol, PolyCoef> = BTreeMap::new();
        for (i, k) in v.iter() {
            let (m, s) = (i / nsym, i % nsym);
            out.entry(self.symbols[s].clone()).or_default().0.insert(self.monomial(m), k.clone());
        }
        out
    }

    /// Inverse of [`expand`](Self::expand).
    pub fn assemble(&self, parts: &BTreeMap<MorSymbol, PolyCoef>) -> Option<SparseVec> {
        let mut entries = Vec::new();
        for (s, p) in parts {
            for (mono, k) in &p.0 {
                let markers: Vec<(MarkerKind, &MorSymbol)> = mono.0.iter().map(|t| (t.kind, &t.tag)).collect();
                entries.push((self.coordinate(&markers, s)?, k.clone()));
            }
        }
        Some(SparseVec::from_entries(entries))
    }

    /// Checks the stage invariants: the symbols and raw generators lie in the
    /// lattice and the lattice is pure in the ambient group.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (i, s) in self.symbols.iter().enumerate() {
            if !self.lattice.contains(&SparseVec::unit(i)) {
                return Err(format!("(1, {s}) not in lattice"));
            }
        }
        if let Some(g) = self.generators.iter().position(|g| !self.lattice.contains(g)) {
            return Err(format!("generator {g} not in lattice"));
        }
        if !self.lattice.is_saturated() {
            return Err("lattice is not saturated".into());
        }
        if self.truncated {
            return Err("generators were truncated".into());
        }
        Ok(())
    }

    /// A stage on `active ∪ more` with cap `new_cap`, and the coordinate map from
    /// this stage into it.
    pub fn extend(
        &self,
        more: impl IntoIterator<Item = MorSymbol>,
        new_cap: usize,
    ) -> Result<(CornerStage, StageInclusion), CornerError> {
        if new_cap < self.degree_cap() {
            return Err(CornerError::CapDecrease { old: self.degree_cap(), new: new_cap });
        }
        let all: Vec<MorSymbol> = self.symbols.iter().cloned().chain(more).collect();
        let next = CornerStage::build(all, new_cap, DEFAULT_AMBIENT_GUARD)?;
        let symbol_map: Vec<usize> = self.symbols.iter().map(|s| next.index[s]).collect();
        let marker_map: Vec<u32> = self
            .tagged
            .iter()
            .flat_map(|&a| {
                let pos = next.tagged.iter().position(|&b| next.symbols[b] == self.symbols[a]).unwrap() as u32;
                [2 * pos, 2 * pos + 1]
            })
            .collect();
        let inc = StageInclusion {
            old_nsym: self.symbols.len(),
            new_nsym: next.symbols.len(),
            symbol_map,
            marker_map,
            old_monomials: self.monomials.clone(),
            new_monomials: next.monomials.clone(),
        };
        for b in self.lattice.basis() {
            if !next.lattice.contains(&inc.apply(b)) {
                return Err(CornerError::NotClosed("old lattice does not embed".into()));
            }
        }
        Ok((next, inc))
    }
}

pub fn stage_extend(
    stage: &CornerStage,
    more: impl IntoIterator<Item = MorSymbol>,
    new_cap: usize,
) -> Result<(CornerStage, StageInclusion), CornerError> {
    stage.extend(more, new_cap)
}

pub fn left_multiply(
    stage: &CornerStage,
    a: &FormalSum,
    v: &SnapshotElement,
) -> Result<SnapshotElement, CornerError> {
    stage.left_multiply(a, v)
}

pub fn recover_multiplier(stage: &CornerStage, h: &LatticeMap) -> Result<FormalSum, CornerError> {
    stage.recover_multiplier(h)
}

pub fn idempotent_split(stage: &CornerStage, x: &GraphCode) -> Result<(Lattice, Lattice), CornerError> {
    stage.idempotent_split(x)
}

impl IntLinearMap for Multiplier<'_> {
    fn dim(&self) -> usize {
        self.stage.ambient_rank()
    }

    fn apply(&self, v: &SparseVec) -> SparseVec {
        let nsym = self.stage.symbols.len();
        let mut out = Vec::with_capacity(v.nnz() * self.terms.len());
        for (i, x) in v.iter() {
            let (m, s) = (i / nsym, i % nsym);
            for (t, k) in &self.terms {
                if let Some(p) = self.stage.products[*t][s] {
                    out.push((m * nsym + p as usize, k * x));
                }
            }
        }
        SparseVec::from_entries(out)
    }
}

impl Serialize for CornerStage {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CornerStage", 8)?;
        st.serialize_field("active", &self.symbols)?;
        st.serialize_field("degree_cap", &self.degree_cap())?;
        let markers: Vec<String> = self.markers().iter().map(ToString::to_string).collect();
        st.serialize_field("markers", &markers)?;
        st.serialize_field("monomial_count", &self.monomial_count())?;
        st.serialize_field("ambient_rank", &self.ambient_rank())?;
        // the listing is only emitted for small stages
        let listing: Option<Vec<String>> = (self.ambient_rank() <= 4096).then(|| {
            let nsym = self.symbols.len();
            (0..self.ambient_rank())
                .map(|i| format!("{} | {}", self.monomial(i / nsym), self.symbols[i % nsym]))
                .collect()
        });
        st.serialize_field("ambient_basis", &listing)?;
        st.serialize_field("truncated", &self.truncated)?;
        st.serialize_field("lattice", &self.lattice)?;
        st.end()
    }
}

impl SnapshotElement {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Degree-0 coordinates as a formal sum.
    pub fn constant_part(&self, stage: &CornerStage) -> FormalSum {
        let nsym = stage.symbol_count();
        FormalSum::from_terms(
            self.0
                .iter()
                .take_while(|(i, _)| *i < nsym)
                .filter(|(_, k)| !k.is_zero())
                .map(|(i, k)| (stage.symbols()[i].clone(), k.clone())),
        )
    }
}

#[cfg(test)]
mod tests;
