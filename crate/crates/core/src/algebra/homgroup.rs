use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use super::{FormalSum, MorSymbol};
use crate::graph::{canonical_graph, enumerate_homs, Graph, GraphCode, GraphHom, GraphRef};

/// The free abelian group on `Hom(X, Y)` for canonical `X`, `Y`.
#[derive(Clone, Debug)]
pub struct HomGroup {
    pub x: GraphRef,
    pub y: GraphRef,
    pub basis: Vec<GraphHom>,
    symbols: Vec<MorSymbol>,
    index: HashMap<MorSymbol, usize>,
}

pub fn hom_group(x: &Graph, y: &Graph) -> HomGroup {
    let x: GraphRef = Arc::new(canonical_graph(x));
    let y: GraphRef = Arc::new(canonical_graph(y));
    let basis = enumerate_homs(&x, &y);
    let symbols: Vec<MorSymbol> = basis.iter().map(MorSymbol::from_canonical_hom).collect();
    let index = symbols.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    HomGroup { x, y, basis, symbols, index }
}

impl HomGroup {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn x_code(&self) -> GraphCode {
        GraphCode::of(&self.x)
    }

    pub fn y_code(&self) -> GraphCode {
        GraphCode::of(&self.y)
    }

    pub fn symbols(&self) -> &[MorSymbol] {
        &self.symbols
    }

    pub fn index_of(&self, s: &MorSymbol) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// `sum_i coeffs[i] * basis[i]`.
    pub fn element(&self, coeffs: &[BigInt]) -> FormalSum {
        FormalSum::from_terms(self.symbols.iter().cloned().zip(coeffs.iter().cloned()))
    }

    /// Coefficient vector of `u`, or `None` when `u` has terms off the basis.
    pub fn coordinates(&self, u: &FormalSum) -> Option<Vec<BigInt>> {
        let mut out = vec![BigInt::default(); self.rank()];
        for (s, k) in u.terms() {
            out[self.index_of(s)?] = k.clone();
        }
        Some(out)
    }

    pub fn contains(&self, u: &FormalSum) -> bool {
        u.terms().all(|(s, _)| self.index.contains_key(s))
    }
}

impl Serialize for HomGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HomGroup", 4)?;
        st.serialize_field("x", self.x.id())?;
        st.serialize_field("y", self.y.id())?;
        st.serialize_field("rank", &self.rank())?;
        let maps: Vec<&[usize]> = self.basis.iter().map(|h| h.map()).collect();
        st.serialize_field("basis", &maps)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{chain_graph, rigid_search};

    #[test]
    fn ranks() {
        let p = Graph::new("p", 1, []).unwrap();
        assert_eq!(hom_group(&p, &p).rank(), 1);
        let g = hom_group(&chain_graph(2).unwrap(), &chain_graph(3).unwrap());
        assert_eq!(g.rank(), 3);
        for r in rigid_search(8, 2).unwrap() {
            assert_eq!(hom_group(&r, &r).rank(), 1);
        }
    }

    #[test]
    fn coordinates_roundtrip() {
        let g = hom_group(&chain_graph(2).unwrap(), &chain_graph(3).unwrap());
        let c: Vec<BigInt> = vec![3.into(), 0.into(), (-1).into()];
        let u = g.element(&c);
        assert_eq!(u.len(), 2);
        assert_eq!(g.coordinates(&u).unwrap(), c);
        assert!(g.coordinates(&FormalSum::unit()).is_none());
    }
}
