use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::IntMatrix;

/// `U * M * V = D` with `U`, `V` unimodular and `D` in Smith form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries of `D`, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i).clone()).take_while(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Checks every structural property of the decomposition against `m`.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let prod = self.u.mul(m).and_then(|um| um.mul(&self.v));
        let Ok(prod) = prod else { return false };
        if prod != self.d || !self.d.is_diagonal() {
            return false;
        }
        if !self.u.is_unimodular() || !self.v.is_unimodular() {
            return false;
        }
        let k = self.d.rows().min(self.d.cols());
        let diag: Vec<&BigInt> = (0..k).map(|i| self.d.get(i, i)).collect();
        let nonzero = diag.iter().take_while(|x| !x.is_zero()).count();
        if diag[nonzero..].iter().any(|x| !x.is_zero()) {
            return false;
        }
        diag[..nonzero].iter().all(|x| x.is_positive())
            && diag[..nonzero].windows(2).all(|w| w[1].is_multiple_of(w[0]))
    }
}

pub(crate) struct SnfWork {
    pub d: IntMatrix,
    pub u: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub vinv: Option<IntMatrix>,
}

impl SnfWork {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
        if let Some(w) = &mut self.vinv {
            w.swap_rows(a, b);
        }
    }

    /// `row[target] += k * row[src]`.
    fn row_op(&mut self, target: usize, src: usize, k: &BigInt) {
        self.d.add_row_multiple(target, src, k);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(target, src, k);
        }
    }

    /// `col[target] += k * col[src]`; the inverse gets `row[src] -= k * row[target]`.
    fn col_op(&mut self, target: usize, src: usize, k: &BigInt) {
        self.d.add_col_multiple(target, src, k);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(target, src, k);
        }
        if let Some(w) = &mut self.vinv {
            w.add_row_multiple(src, target, &-k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }

    /// Smallest nonzero |entry| in the trailing block, ties to lowest row then column.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let a = self.d.get(i, j);
                if a.is_zero() {
                    continue;
                }
                let m = a.abs();
                if best.as_ref().is_none_or(|b| m < b.2) {
                    best = Some((i, j, m));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    pub fn run(&mut self) {
        let (rows, cols) = (self.d.rows(), self.d.cols());
        for t in 0..rows.min(cols) {
            let Some((pi, pj)) = self.pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..rows {
                    if self.d.get(i, t).is_zero() {
                        continue;
                    }
                    let q = self.d.get(i, t) / self.d.get(t, t);
                    self.row_op(i, t, &-q);
                    clean &= self.d.get(i, t).is_zero();
                }
                for j in t + 1..cols {
                    if self.d.get(t, j).is_zero() {
                        continue;
                    }
                    let q = self.d.get(t, j) / self.d.get(t, t);
                    self.col_op(j, t, &-q);
                    clean &= self.d.get(t, j).is_zero();
                }
                if !clean {
                    // a smaller remainder appeared in row or column t
                    let (pi, pj) = self.pivot_in_cross(t);
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                let bad = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !self.d.get(i, j).is_multiple_of(self.d.get(t, t)))
                });
                match bad {
                    Some(i) => self.row_op(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.d.get(t, t).is_negative() {
                self.negate_row(t);
            }
        }
    }

    fn pivot_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t, self.d.get(t, t).abs());
        for i in t + 1..self.d.rows() {
            let a = self.d.get(i, t);
            if !a.is_zero() && a.abs() < best.2 {
                best = (i, t, a.abs());
            }
        }
        for j in t + 1..self.d.cols() {
            let a = self.d.get(t, j);
            if !a.is_zero() && a.abs() < best.2 {
                best = (t, j, a.abs());
            }
        }
        (best.0, best.1)
    }
}

pub(crate) fn snf_work(m: &IntMatrix, track_u: bool, track_v: bool, track_vinv: bool) -> SnfWork {
    let mut w = SnfWork {
        d: m.clone(),
        u: track_u.then(|| IntMatrix::identity(m.rows())),
        v: track_v.then(|| IntMatrix::identity(m.cols())),
        vinv: track_vinv.then(|| IntMatrix::identity(m.cols())),
    };
    w.run();
    w
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let w = snf_work(m, true, true, false);
    let res = SnfResult { u: w.u.unwrap(), d: w.d, v: w.v.unwrap() };
    if cfg!(debug_assertions) && m.rows() * m.cols() <= 400 {
        assert!(res.verify(m), "Smith normal form failed self-check");
    }
    res
}

/// Invariant factors only, without tracking transforms.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let w = snf_work(m, false, false, false);
    let k = w.d.rows().min(w.d.cols());
    (0..k).map(|i| w.d.get(i, i).clone()).take_while(|x| !x.is_zero()).collect()
}
