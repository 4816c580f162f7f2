use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::CornerError;
use crate::algebra::MorSymbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MarkerKind {
    Z,
    W,
}

/// A formal transcendental attached to a non-unit symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransMarker {
    pub kind: MarkerKind,
    pub tag: MorSymbol,
}

impl fmt::Display for TransMarker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            MarkerKind::Z => 'z',
            MarkerKind::W => 'w',
        };
        write!(f, "{k}[{}]", self.tag)
    }
}

/// Multiset of markers, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<TransMarker>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Finitely supported integer combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyCoef(pub BTreeMap<Monomial, BigInt>);

impl PolyCoef {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn constant(&self) -> BigInt {
        self.0.get(&Monomial::one()).cloned().unwrap_or_default()
    }
}

impl fmt::Display for PolyCoef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(m, k)| format!("{k}*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn binom(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    usize::try_from(acc).ok()
}

/// Graded colexicographic ranking of marker multisets of degree at most `cap`
/// over `markers` letters, without materializing the monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MonomialIndex {
    markers: usize,
    cap: usize,
    offsets: Vec<usize>,
}

impl MonomialIndex {
    pub fn new(markers: usize, cap: usize) -> Result<Self, CornerError> {
        let mut offsets = vec![0usize];
        for k in 0..=cap {
            let count = if k == 0 {
                1
            } else {
                (markers + k).checked_sub(1).and_then(|n| binom(n, k)).ok_or(CornerError::TooLarge)?
            };
            let next = offsets[k].checked_add(count).ok_or(CornerError::TooLarge)?;
            offsets.push(next);
        }
        Ok(MonomialIndex { markers, cap, offsets })
    }

    pub fn count(&self) -> usize {
        self.offsets[self.cap + 1]
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Index of a sorted marker multiset, `None` above the cap.
    pub fn rank(&self, m: &[u32]) -> Option<usize> {
        let k = m.len();
        if k > self.cap {
            return None;
        }
        debug_assert!(m.windows(2).all(|w| w[0] <= w[1]));
        let mut r = self.offsets[k];
        for (i, &x) in m.iter().enumerate() {
            r += binom(x as usize + i, i + 1).expect("within bounds");
        }
        Some(r)
    }

    pub fn unrank(&self, idx: usize) -> Vec<u32> {
        let k = (0..=self.cap).find(|&k| idx < self.offsets[k + 1]).expect("index in range");
        let mut r = idx - self.offsets[k];
        let mut out = vec![0u32; k];
        for i in (1..=k).rev() {
            let mut c = i - 1;
            while binom(c + 1, i).unwrap() <= r {
                c += 1;
            }
            r -= binom(c, i).unwrap();
            out[i - 1] = (c - (i - 1)) as u32;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_unrank_roundtrip() {
        let idx = MonomialIndex::new(5, 3).unwrap();
        assert_eq!(idx.count(), 1 + 5 + 15 + 35);
        let mut seen = vec![false; idx.count()];
        let mut all: Vec<Vec<u32>> = vec![vec![]];
        for a in 0..5 {
            all.push(vec![a]);
            for b in a..5 {
                all.push(vec![a, b]);
                for c in b..5 {
                    all.push(vec![a, b, c]);
                }
            }
        }
        for m in &all {
            let r = idx.rank(m).unwrap();
            assert!(!seen[r]);
            seen[r] = true;
            assert_eq!(&idx.unrank(r), m);
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(idx.rank(&[0]), Some(1));
        assert_eq!(idx.rank(&[4]), Some(5));
        assert_eq!(idx.rank(&[0, 0, 0, 0]), None);
    }

    #[test]
    fn no_markers() {
        let idx = MonomialIndex::new(0, 2).unwrap();
        assert_eq!(idx.count(), 1);
        assert_eq!(idx.unrank(0), Vec::<u32>::new());
    }
}
