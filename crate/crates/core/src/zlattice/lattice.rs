use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::snf::{invariant_factors, snf_work};
use super::{IntLinearMap, IntMatrix, LatticeError, SparseVec};

/// A finitely generated subgroup of `Z^n`, stored as a row Hermite basis:
/// rows sorted by pivot column, positive pivots, entries above each pivot
/// reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lattice {
    ambient_rank: usize,
    basis: Vec<SparseVec>,
    #[serde(skip)]
    pivots: Vec<usize>,
    /// The basis again, when every entry fits in an `i64`.
    #[serde(skip)]
    small: Option<Vec<Vec<(usize, i64)>>>,
}

fn small_row(r: &SparseVec) -> Option<Vec<(usize, i64)>> {
    r.iter().map(|(j, x)| Some((j, x.to_i64()?))).collect()
}

/// A block of generator rows sharing columns, in local dense coordinates.
struct Block {
    cols: Vec<usize>,
    matrix: IntMatrix,
}

impl Block {
    fn lift(&self, row: &[BigInt]) -> SparseVec {
        SparseVec::from_entries(
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (self.cols[j], v.clone()))
                .collect(),
        )
    }
}

/// Splits rows into independent blocks: connected components of the graph on
/// columns where two columns are adjacent when some row uses both.
fn blocks(rows: &[SparseVec]) -> Vec<Block> {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    fn find(p: &mut HashMap<usize, usize>, x: usize) -> usize {
        let mut r = x;
        while let Some(&q) = p.get(&r) {
            if q == r {
                break;
            }
            r = q;
        }
        let mut y = x;
        while y != r {
            let next = p[&y];
            p.insert(y, r);
            y = next;
        }
        r
    }
    for row in rows {
        let mut it = row.iter().map(|(j, _)| j);
        let Some(first) = it.next() else { continue };
        parent.entry(first).or_insert(first);
        for j in it {
            parent.entry(j).or_insert(j);
            let (a, b) = (find(&mut parent, first), find(&mut parent, j));
            if a != b {
                parent.insert(a.max(b), a.min(b));
            }
        }
    }
    let mut groups: HashMap<usize, (Vec<usize>, Vec<usize>)> = HashMap::new();
    let cols: Vec<usize> = parent.keys().copied().collect();
    for c in cols {
        let r = find(&mut parent, c);
        groups.entry(r).or_default().0.push(c);
    }
    for (i, row) in rows.iter().enumerate() {
        if let Some((j, _)) = row.leading() {
            let r = find(&mut parent, j);
            groups.get_mut(&r).expect("component").1.push(i);
        }
    }
    let mut keys: Vec<usize> = groups.keys().copied().collect();
    keys.sort_unstable();
    keys.into_iter()
        .map(|k| {
            let (mut cols, members) = groups.remove(&k).unwrap();
            cols.sort_unstable();
            let local: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let mut matrix = IntMatrix::zeros(members.len(), cols.len());
            for (r, &i) in members.iter().enumerate() {
                for (j, v) in rows[i].iter() {
                    matrix.set(r, local[&j], v.clone());
                }
            }
            Block { cols, matrix }
        })
        .collect()
}

/// Row Hermite form of a dense matrix; returns the nonzero rows.
fn hermite_rows(mut a: IntMatrix) -> Vec<Vec<BigInt>> {
    let (m, c) = (a.rows(), a.cols());
    let mut r = 0;
    for col in 0..c {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..m {
                let v = a.get(i, col);
                if !v.is_zero() && best.as_ref().is_none_or(|b| v.abs() < b.1) {
                    best = Some((i, v.abs()));
                }
            }
            let Some((p, _)) = best else { break };
            a.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if a.get(i, col).is_zero() {
                    continue;
                }
                let q = a.get(i, col) / a.get(r, col);
                a.add_row_multiple(i, r, &-q);
                done &= a.get(i, col).is_zero();
            }
            if done {
                break;
            }
        }
        if a.get(r, col).is_zero() {
            continue;
        }
        if a.get(r, col).is_negative() {
            a.negate_row(r);
        }
        for i in 0..r {
            let q = a.get(i, col).div_floor(a.get(r, col));
            a.add_row_multiple(i, r, &-q);
        }
        r += 1;
    }
    (0..r).map(|i| a.row(i).to_vec()).collect()
}

impl Lattice {
    pub fn zero(ambient_rank: usize) -> Self {
        Self::from_hermite(ambient_rank, Vec::new())
    }

    pub fn full(ambient_rank: usize) -> Self {
        Self::from_hermite(ambient_rank, (0..ambient_rank).map(SparseVec::unit).collect())
    }

    fn from_hermite(ambient_rank: usize, mut basis: Vec<SparseVec>) -> Self {
        basis.sort_by_key(|r| r.leading().map(|(j, _)| j));
        let pivots = basis.iter().map(|r| r.leading().unwrap().0).collect();
        let small = basis.iter().map(small_row).collect();
        Lattice { ambient_rank, basis, pivots, small }
    }

    fn check_dim(&self, v: &SparseVec) -> Result<(), LatticeError> {
        match v.max_index() {
            Some(j) if j >= self.ambient_rank => {
                Err(LatticeError::DimensionMismatch { expected: self.ambient_rank, found: j + 1 })
            }
            _ => Ok(()),
        }
    }

    /// The subgroup generated by `gens`.
    pub fn from_generators(ambient_rank: usize, gens: &[SparseVec]) -> Result<Self, LatticeError> {
        let probe = Lattice::zero(ambient_rank);
        for g in gens {
            probe.check_dim(g)?;
        }
        let mut basis = Vec::new();
        for b in blocks(gens) {
            for row in hermite_rows(b.matrix.clone()) {
                basis.push(b.lift(&row));
            }
        }
        Ok(Self::from_hermite(ambient_rank, basis))
    }

    pub fn from_matrix(m: &IntMatrix) -> Self {
        let rows: Vec<SparseVec> = (0..m.rows()).map(|i| m.row_sparse(i)).collect();
        Self::from_generators(m.cols(), &rows).expect("rows fit the column count")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_sparse_rows(self.ambient_rank, &self.basis)
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn member(&self, v: &SparseVec) -> Result<Option<SparseVec>, LatticeError> {
        self.reduce(v, true)
    }

    /// Reduces `v` by the basis; coordinates are collected only when asked.
    fn reduce(&self, v: &SparseVec, keep: bool) -> Result<Option<SparseVec>, LatticeError> {
        self.check_dim(v)?;
        if let Some(fast) = self.member_small(v, keep) {
            return Ok(fast);
        }
        let mut rest: BTreeMap<usize, BigInt> = v.iter().map(|(j, x)| (j, x.clone())).collect();
        let mut coords = Vec::new();
        while let Some((j, x)) = rest.pop_first() {
            let Ok(i) = self.pivots.binary_search(&j) else { return Ok(None) };
            let row = &self.basis[i];
            let (q, r) = x.div_rem(row.leading().unwrap().1);
            if !r.is_zero() {
                return Ok(None);
            }
            for (k, y) in row.iter().skip(1) {
                match rest.entry(k) {
                    Entry::Occupied(mut e) => {
                        *e.get_mut() -= y * &q;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    Entry::Vacant(e) => {
                        e.insert(-(y * &q));
                    }
                }
            }
            if keep {
                coords.push((i, q));
            }
        }
        Ok(Some(SparseVec::from_entries(coords)))
    }

    /// Machine-word reduction; `None` on overflow.
    fn member_small(&self, v: &SparseVec, keep: bool) -> Option<Option<SparseVec>> {
        let rows = self.small.as_ref()?;
        let mut rest = BTreeMap::new();
        for (j, x) in v.iter() {
            rest.insert(j, x.to_i64()?);
        }
        let mut coords = Vec::new();
        while let Some((j, x)) = rest.pop_first() {
            let Ok(i) = self.pivots.binary_search(&j) else { return Some(None) };
            let row = &rows[i];
            let lead = row[0].1;
            if x % lead != 0 {
                return Some(None);
            }
            let q = x / lead;
            for &(k, y) in &row[1..] {
                let d = y.checked_mul(q)?;
                match rest.entry(k) {
                    Entry::Occupied(mut e) => {
                        let w = e.get().checked_sub(d)?;
                        if w == 0 {
                            e.remove();
                        } else {
                            *e.get_mut() = w;
                        }
                    }
                    Entry::Vacant(e) => {
                        e.insert(d.checked_neg()?);
                    }
                }
            }
            if keep {
                coords.push((i, BigInt::from(q)));
            }
        }
        Some(Some(SparseVec::from_entries(coords)))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        matches!(self.reduce(v, false), Ok(Some(_)))
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Basis combination with the given coordinates.
    pub fn combine(&self, coords: &SparseVec) -> SparseVec {
        let mut entries = Vec::new();
        for (i, c) in coords.iter() {
            entries.extend(self.basis[i].iter().map(|(j, v)| (j, v * c)));
        }
        SparseVec::from_entries(entries)
    }

    /// Pure closure: all `v` with `k v` in the lattice for some `k != 0`.
    pub fn saturate(&self) -> Lattice {
        let mut basis = Vec::new();
        for b in blocks(&self.basis) {
            let w = snf_work(&b.matrix, false, false, true);
            let r = (0..w.d.rows().min(w.d.cols())).take_while(|&i| !w.d.get(i, i).is_zero()).count();
            let vinv = w.vinv.unwrap();
            let top = IntMatrix::from_rows(vinv.cols(), (0..r).map(|i| vinv.row(i).to_vec()).collect())
                .expect("square inverse");
            for row in hermite_rows(top) {
                basis.push(b.lift(&row));
            }
        }
        Self::from_hermite(self.ambient_rank, basis)
    }

    /// True when the lattice is pure in `Z^n`.
    pub fn is_saturated(&self) -> bool {
        blocks(&self.basis).iter().all(|b| invariant_factors(&b.matrix).iter().all(One::is_one))
    }

    /// Whether `self` is a pure subgroup of `m`; errors when `self` is not inside `m`.
    pub fn is_pure_in(&self, m: &Lattice) -> Result<bool, LatticeError> {
        if self.ambient_rank != m.ambient_rank {
            return Err(LatticeError::DimensionMismatch { expected: m.ambient_rank, found: self.ambient_rank });
        }
        let mut coords = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            match m.member(b)? {
                Some(c) => coords.push(c),
                None => return Err(LatticeError::NotContained),
            }
        }
        Ok(blocks(&coords).iter().all(|b| invariant_factors(&b.matrix).iter().all(One::is_one)))
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice, LatticeError> {
        if self.ambient_rank != other.ambient_rank {
            return Err(LatticeError::DimensionMismatch { expected: self.ambient_rank, found: other.ambient_rank });
        }
        let gens: Vec<SparseVec> = self.basis.iter().chain(&other.basis).cloned().collect();
        Lattice::from_generators(self.ambient_rank, &gens)
    }

    /// Image of the lattice under `f`, as a lattice in the same ambient.
    pub fn image(&self, f: &impl IntLinearMap) -> Result<Lattice, LatticeError> {
        if f.dim() != self.ambient_rank {
            return Err(LatticeError::DimensionMismatch { expected: self.ambient_rank, found: f.dim() });
        }
        let imgs: Vec<SparseVec> = self.basis.iter().map(|b| f.apply(b)).collect();
        Lattice::from_generators(self.ambient_rank, &imgs)
    }
}

/// `{x : M x = 0}` as a lattice in `Z^cols`.
pub fn kernel(m: &IntMatrix) -> Lattice {
    let w = snf_work(m, false, true, false);
    let r = (0..w.d.rows().min(w.d.cols())).take_while(|&i| !w.d.get(i, i).is_zero()).count();
    let v = w.v.unwrap();
    let cols: Vec<SparseVec> = (r..m.cols()).map(|j| v.col_sparse(j)).collect();
    Lattice::from_generators(m.cols(), &cols).expect("kernel columns fit")
}

/// Splits `m` as `e(m) + (1 - e)(m)` for an idempotent `e` preserving `m`.
pub fn split_by_idempotent(
    m: &Lattice,
    e: &impl IntLinearMap,
) -> Result<(Lattice, Lattice), LatticeError> {
    if e.dim() != m.ambient_rank {
        return Err(LatticeError::DimensionMismatch { expected: m.ambient_rank, found: e.dim() });
    }
    let mut part = Vec::with_capacity(m.rank());
    let mut rest = Vec::with_capacity(m.rank());
    for b in &m.basis {
        let eb = e.apply(b);
        if !m.contains(&eb) {
            return Err(LatticeError::NotPreserved);
        }
        if e.apply(&eb) != eb {
            return Err(LatticeError::NotIdempotent);
        }
        rest.push(b.sub(&eb));
        part.push(eb);
    }
    Ok((
        Lattice::from_generators(m.ambient_rank, &part)?,
        Lattice::from_generators(m.ambient_rank, &rest)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(n: usize, rows: &[&[i64]]) -> Lattice {
        let gens: Vec<SparseVec> = rows.iter().map(|r| SparseVec::from_i64(r)).collect();
        Lattice::from_generators(n, &gens).unwrap()
    }

    #[test]
    fn saturate_examples() {
        let l = lat(2, &[&[2, 4]]);
        assert_eq!(l.saturate(), lat(2, &[&[1, 2]]));
        assert!(!l.contains(&SparseVec::from_i64(&[1, 2])));
        assert!(l.saturate().contains(&SparseVec::from_i64(&[1, 2])));
        let l = lat(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(l.saturate(), Lattice::full(2));
        let s = lat(3, &[&[1, 2, 0], &[0, 1, 1]]);
        assert_eq!(s.saturate(), s);
        assert!(s.is_saturated());
        assert!(!l.is_saturated());
    }

    #[test]
    fn member_roundtrip() {
        let l = lat(3, &[&[2, 1, 0], &[0, 3, 3], &[4, 2, 0]]);
        assert_eq!(l.rank(), 2);
        assert_eq!(l.member(&SparseVec::new()).unwrap(), Some(SparseVec::new()));
        let v = SparseVec::from_i64(&[2, 4, 3]);
        let c = l.member(&v).unwrap().unwrap();
        assert_eq!(l.combine(&c), v);
        assert_eq!(l.member(&SparseVec::from_i64(&[1, 0, 0])).unwrap(), None);
        assert!(l.member(&SparseVec::unit(5)).is_err());
        // word overflow falls back to big arithmetic
        let big = BigInt::from(i64::MAX) * BigInt::from(4);
        let v = SparseVec::from_dense(&[&big * 2, big.clone(), BigInt::zero()]);
        let c = l.member(&v).unwrap().unwrap();
        assert_eq!(l.combine(&c), v);
        let wide = Lattice::from_generators(2, &[SparseVec::from_dense(&[BigInt::one(), big.clone()])]).unwrap();
        assert!(wide.small.is_none());
        let w = SparseVec::from_dense(&[BigInt::from(3), &big * 3]);
        assert_eq!(wide.combine(&wide.member(&w).unwrap().unwrap()), w);
    }

    #[test]
    fn purity_examples() {
        let z2 = Lattice::full(2);
        assert!(z2.is_pure_in(&z2).unwrap());
        assert!(!lat(2, &[&[2, 0]]).is_pure_in(&z2).unwrap());
        assert!(lat(2, &[&[1, 0]]).is_pure_in(&z2).unwrap());
        let m = lat(2, &[&[2, 0], &[0, 2]]);
        assert!(lat(2, &[&[2, 0]]).is_pure_in(&m).unwrap());
        assert!(!lat(2, &[&[4, 0]]).is_pure_in(&m).unwrap());
        assert_eq!(lat(2, &[&[1, 0]]).is_pure_in(&m), Err(LatticeError::NotContained));
    }

    #[test]
    fn split_examples() {
        let z2 = Lattice::full(2);
        let (a, b) = split_by_idempotent(&z2, &IntMatrix::identity(2)).unwrap();
        assert_eq!((a, b), (z2.clone(), Lattice::zero(2)));
        let (a, b) = split_by_idempotent(&z2, &IntMatrix::zeros(2, 2)).unwrap();
        assert_eq!((a, b), (Lattice::zero(2), z2.clone()));
        let p = IntMatrix::from_i64(&[[1, 1], [0, 0]]);
        let (a, b) = split_by_idempotent(&z2, &p).unwrap();
        assert_eq!(a, lat(2, &[&[1, 0]]));
        assert_eq!(b, lat(2, &[&[1, -1]]));
        assert_eq!(a.sum(&b).unwrap(), z2);
        let bad = IntMatrix::from_i64(&[[2, 0], [0, 0]]);
        assert_eq!(split_by_idempotent(&z2, &bad), Err(LatticeError::NotIdempotent));
        let m = lat(2, &[&[1, 1]]);
        let proj = IntMatrix::from_i64(&[[1, 0], [0, 0]]);
        assert_eq!(split_by_idempotent(&m, &proj), Err(LatticeError::NotPreserved));
        assert!(matches!(
            split_by_idempotent(&z2, &IntMatrix::identity(3)),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kernel_of_row() {
        let m = IntMatrix::from_i64(&[[2, 4, 6]]);
        let k = kernel(&m);
        assert_eq!(k.rank(), 2);
        for b in k.basis() {
            assert!(m.apply(b).is_zero());
        }
        assert!(k.is_saturated());
        assert!(k.contains(&SparseVec::from_i64(&[1, 1, -1])));
    }

    #[test]
    fn blocks_separate_disjoint_columns() {
        let l = lat(6, &[&[2, 0, 0, 0, 4], &[0, 0, 3, 0, 0, 6], &[0, 0, 0, 0, 2]]);
        assert_eq!(l.rank(), 3);
        assert_eq!(l.saturate(), lat(6, &[&[1], &[0, 0, 1, 0, 0, 2], &[0, 0, 0, 0, 1]]));
    }
}
