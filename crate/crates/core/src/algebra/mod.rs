//! The category algebra of finite graphs: formal integer combinations of
//! morphisms between canonical graphs, multiplied by composition (or zero when
//! not composable), with a formal unit.
//!
//! Products are written algebraically: `t · s` means "first `s`, then `t`".

mod homgroup;
mod limits;
mod retract;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::graph::{canonical_form, compose, GraphCode, GraphError, GraphHom, GraphRef};

pub use homgroup::{hom_group, HomGroup};
pub use limits::{limit_comparison, LimitComparison, SetDiagram};
pub use retract::retract_witness;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("u and v are not mutually inverse on the X side")]
    InvalidInversePair,
    #[error("index poset is not codirected (no minimum)")]
    NotCodirected,
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A morphism between canonical representatives, keyed by codes and the map.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Morphism {
    pub dom: GraphCode,
    pub cod: GraphCode,
    pub map: Vec<u32>,
}

/// Basis element of the algebra. `Unit` sorts first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MorSymbol {
    Unit,
    Map(Morphism),
}

impl MorSymbol {
    /// Transports `f` along the canonical isomorphisms of its endpoints.
    pub fn from_hom(f: &GraphHom) -> MorSymbol {
        let (_, ix) = canonical_form(f.dom());
        let (_, iy) = canonical_form(f.cod());
        let mut map = vec![0u32; f.map().len()];
        for (v, &w) in f.map().iter().enumerate() {
            map[ix.apply(v)] = iy.apply(w) as u32;
        }
        MorSymbol::Map(Morphism {
            dom: GraphCode::of(ix.cod()),
            cod: GraphCode::of(iy.cod()),
            map,
        })
    }

    /// Symbol of a hom whose endpoints are already canonical representatives.
    pub fn from_canonical_hom(f: &GraphHom) -> MorSymbol {
        MorSymbol::Map(Morphism {
            dom: GraphCode::of(f.dom()),
            cod: GraphCode::of(f.cod()),
            map: f.map().iter().map(|&v| v as u32).collect(),
        })
    }

    pub fn identity(x: &GraphCode) -> MorSymbol {
        MorSymbol::Map(Morphism { dom: x.clone(), cod: x.clone(), map: (0..x.n() as u32).collect() })
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, MorSymbol::Unit)
    }

    pub fn morphism(&self) -> Option<&Morphism> {
        match self {
            MorSymbol::Unit => None,
            MorSymbol::Map(m) => Some(m),
        }
    }

    pub fn dom(&self) -> Option<&GraphCode> {
        self.morphism().map(|m| &m.dom)
    }

    pub fn cod(&self) -> Option<&GraphCode> {
        self.morphism().map(|m| &m.cod)
    }

    pub fn is_identity(&self) -> bool {
        self.morphism()
            .is_some_and(|m| m.dom == m.cod && m.map.iter().enumerate().all(|(i, &v)| i as u32 == v))
    }

    /// `self · s`: `s` first, then `self`; `None` stands for zero.
    pub fn times(&self, s: &MorSymbol) -> Option<MorSymbol> {
        match (self, s) {
            (MorSymbol::Unit, _) => Some(s.clone()),
            (_, MorSymbol::Unit) => Some(self.clone()),
            (MorSymbol::Map(t), MorSymbol::Map(s)) => {
                if s.cod != t.dom {
                    return None;
                }
                Some(MorSymbol::Map(Morphism {
                    dom: s.dom.clone(),
                    cod: t.cod.clone(),
                    map: s.map.iter().map(|&v| t.map[v as usize]).collect(),
                }))
            }
        }
    }

    /// The hom between freshly built representatives; `None` for the unit.
    pub fn to_hom(&self) -> Option<GraphHom> {
        let m = self.morphism()?;
        let dom: GraphRef = Arc::new(m.dom.to_graph());
        let cod: GraphRef = Arc::new(m.cod.to_graph());
        Some(GraphHom::new(dom, cod, m.map.iter().map(|&v| v as usize).collect()).expect("symbol is a hom"))
    }

    /// Same as [`to_hom`](Self::to_hom) but reusing given endpoint graphs.
    pub fn to_hom_between(&self, dom: &GraphRef, cod: &GraphRef) -> Option<GraphHom> {
        let m = self.morphism()?;
        GraphHom::new(dom.clone(), cod.clone(), m.map.iter().map(|&v| v as usize).collect()).ok()
    }
}

impl fmt::Debug for MorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorSymbol::Unit => write!(f, "1"),
            MorSymbol::Map(m) => write!(f, "{}->{}{:?}", m.dom, m.cod, m.map),
        }
    }
}

impl fmt::Display for MorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for MorSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match self {
            MorSymbol::Unit => s.serialize_str("unit"),
            MorSymbol::Map(m) => {
                let mut st = s.serialize_struct("MorSymbol", 3)?;
                st.serialize_field("dom", &m.dom)?;
                st.serialize_field("cod", &m.cod)?;
                st.serialize_field("map", &m.map)?;
                st.end()
            }
        }
    }
}

/// Finitely supported integer combination of symbols; zero coefficients are
/// never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FormalSum {
    terms: BTreeMap<MorSymbol, BigInt>,
}

impl FormalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::symbol(MorSymbol::Unit)
    }

    pub fn symbol(s: MorSymbol) -> Self {
        Self::term(s, BigInt::one())
    }

    pub fn term(s: MorSymbol, k: BigInt) -> Self {
        let mut f = Self::zero();
        f.add_term(s, k);
        f
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (MorSymbol, BigInt)>) -> Self {
        let mut f = Self::zero();
        for (s, k) in terms {
            f.add_term(s, k);
        }
        f
    }

    pub fn add_term(&mut self, s: MorSymbol, k: BigInt) {
        if k.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(s) {
            Entry::Vacant(e) => {
                e.insert(k);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += k;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, s: &MorSymbol) -> BigInt {
        self.terms.get(s).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MorSymbol, &BigInt)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<&MorSymbol> {
        self.terms.keys().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &FormalSum) -> FormalSum {
        let mut out = self.clone();
        for (s, k) in &other.terms {
            out.add_term(s.clone(), k.clone());
        }
        out
    }

    pub fn sub(&self, other: &FormalSum) -> FormalSum {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FormalSum {
        FormalSum { terms: self.terms.iter().map(|(s, k)| (s.clone(), -k)).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> FormalSum {
        if k.is_zero() {
            return Self::zero();
        }
        FormalSum { terms: self.terms.iter().map(|(s, c)| (s.clone(), c * k)).collect() }
    }

    /// Bilinear extension of the symbol product.
    pub fn mul(&self, other: &FormalSum) -> FormalSum {
        let mut out = FormalSum::zero();
        for (t, a) in &self.terms {
            for (s, b) in &other.terms {
                if let Some(ts) = t.times(s) {
                    out.add_term(ts, a * b);
                }
            }
        }
        out
    }
}

/// `a · b`, i.e. `b` acts first.
pub fn ring_multiply(a: &FormalSum, b: &FormalSum) -> FormalSum {
    a.mul(b)
}

pub fn support(a: &FormalSum) -> Vec<&MorSymbol> {
    a.support()
}

impl fmt::Debug for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(s, k)| format!("{k}*{s:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `{"terms": [{"dom", "cod", "map", "coeff"}], "unit": "k"}`, the unit
/// entry present only when nonzero; coefficients are decimal strings.
impl Serialize for FormalSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct Term<'a> {
            dom: &'a GraphCode,
            cod: &'a GraphCode,
            map: &'a [u32],
            coeff: String,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .filter_map(|(sym, k)| {
                sym.morphism().map(|m| Term { dom: &m.dom, cod: &m.cod, map: &m.map, coeff: k.to_string() })
            })
            .collect();
        let unit = self.terms.get(&MorSymbol::Unit);
        let mut st = s.serialize_struct("FormalSum", 1 + usize::from(unit.is_some()))?;
        st.serialize_field("terms", &terms)?;
        if let Some(k) = unit {
            st.serialize_field("unit", &k.to_string())?;
        }
        st.end()
    }
}

/// Composite of two symbols as graph homs, for checking against `times`.
pub fn compose_symbols(t: &MorSymbol, s: &MorSymbol) -> Result<MorSymbol, GraphError> {
    let (Some(th), Some(sh)) = (t.to_hom(), s.to_hom()) else {
        return Ok(t.times(s).expect("unit composes"));
    };
    Ok(MorSymbol::from_canonical_hom(&compose(&th, &sh)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{canonical_graph, chain_graph, enumerate_homs, Graph};

    fn canon(g: Graph) -> GraphRef {
        Arc::new(canonical_graph(&g))
    }

    fn syms(x: &GraphRef, y: &GraphRef) -> Vec<MorSymbol> {
        enumerate_homs(x, y).iter().map(MorSymbol::from_canonical_hom).collect()
    }

    #[test]
    fn identity_idempotent_and_zero_products() {
        let l2 = canon(chain_graph(2).unwrap());
        let l3 = canon(chain_graph(3).unwrap());
        let id2 = FormalSum::symbol(MorSymbol::identity(&GraphCode::of(&l2)));
        assert_eq!(id2.mul(&id2), id2);
        let phi = syms(&l2, &l3)[0].clone();
        let psi = syms(&l2, &l3)[1].clone();
        assert_eq!(FormalSum::symbol(phi.clone()).mul(&FormalSum::symbol(psi)), FormalSum::zero());
        let u = FormalSum::from_terms([(phi.clone(), 2.into()), (MorSymbol::Unit, 3.into())]);
        let id_l2 = MorSymbol::identity(&GraphCode::of(&l2));
        let id3 = MorSymbol::identity(&GraphCode::of(&l3));
        let lhs = u.mul(&FormalSum::symbol(id_l2.clone()));
        let expected = FormalSum::from_terms([(phi.times(&id_l2).unwrap(), 2.into()), (id_l2, 3.into())]);
        assert_eq!(lhs, expected);
        assert_eq!(FormalSum::symbol(id3).mul(&FormalSum::symbol(phi.clone())), FormalSum::symbol(phi));
    }

    #[test]
    fn support_and_normalization() {
        let l2 = canon(chain_graph(2).unwrap());
        let phi = MorSymbol::identity(&GraphCode::of(&l2));
        assert!(FormalSum::zero().support().is_empty());
        let five = FormalSum::term(phi.clone(), 5.into());
        assert_eq!(five.support(), vec![&phi]);
        assert!(five.sub(&five).support().is_empty());
        assert!(FormalSum::term(phi, 0.into()).is_zero());
    }

    #[test]
    fn symbol_product_matches_hom_composition() {
        let l2 = canon(chain_graph(2).unwrap());
        let l3 = canon(chain_graph(3).unwrap());
        let l5 = canon(chain_graph(5).unwrap());
        for f in syms(&l2, &l3) {
            for g in syms(&l3, &l5) {
                assert_eq!(g.times(&f).unwrap(), compose_symbols(&g, &f).unwrap());
            }
        }
    }

    #[test]
    fn from_hom_canonicalizes() {
        let g = Graph::new("p", 2, [(1, 0)]).unwrap();
        let x: GraphRef = Arc::new(g);
        let id = GraphHom::identity(&x);
        let s = MorSymbol::from_hom(&id);
        assert!(s.is_identity());
        assert_eq!(s.dom(), Some(&GraphCode::of(&canonical_graph(&x))));
    }

    #[test]
    fn json_shape() {
        let l2 = canon(chain_graph(2).unwrap());
        let id = MorSymbol::identity(&GraphCode::of(&l2));
        let f = FormalSum::from_terms([(id, (-2).into()), (MorSymbol::Unit, 7.into())]);
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["unit"], "7");
        assert_eq!(v["terms"][0]["coeff"], "-2");
        assert_eq!(v["terms"][0]["map"], serde_json::json!([0, 1]));
    }
}
