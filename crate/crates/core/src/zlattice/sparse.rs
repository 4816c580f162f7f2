use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::Serialize;

/// Sparse integer vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, BigInt)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, BigInt::one())] }
    }

    /// Builds from unordered entries, summing repeated indices and dropping zeros.
    pub fn from_entries(mut entries: Vec<(usize, BigInt)>) -> Self {
        entries.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w += v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(dense: &[BigInt]) -> Self {
        SparseVec {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn from_i64(dense: &[i64]) -> Self {
        Self::from_dense(&dense.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>())
    }

    pub fn to_dense(&self, len: usize) -> Vec<BigInt> {
        let mut d = vec![BigInt::zero(); len];
        for (i, v) in &self.entries {
            d[*i] = v.clone();
        }
        d
    }

    pub fn entries(&self) -> &[(usize, BigInt)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> BigInt {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn leading(&self) -> Option<(usize, &BigInt)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, other: &SparseVec, k: &BigInt) -> SparseVec {
        if k.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * k));
                        b.next();
                    } else {
                        let s = x + y * k;
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * k));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &BigInt::one())
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &-BigInt::one())
    }

    pub fn scale(&self, k: &BigInt) -> SparseVec {
        if k.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * k)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect() }
    }

    /// Relabels indices through `f`; colliding indices are summed.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        Self::from_entries(self.entries.iter().map(|(i, v)| (f(*i), v.clone())).collect())
    }
}

/// Serialized as `[[index, "value"], ...]` with decimal-string values.
impl Serialize for SparseVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for (i, v) in &self.entries {
            seq.serialize_element(&(i, v.to_string()))?;
        }
        seq.end()
    }
}

/// Linear combination `sum_i c_i * rows_i` of sparse rows.
pub fn combine(rows: &[SparseVec], coeffs: &[BigInt]) -> SparseVec {
    let mut entries = Vec::new();
    for (row, c) in rows.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        entries.extend(row.iter().map(|(i, v)| (i, v * c)));
    }
    SparseVec::from_entries(entries)
}
