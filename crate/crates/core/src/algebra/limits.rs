use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::AlgebraError;
use crate::zlattice::{kernel, IntMatrix, Lattice};

/// A diagram of finite sets over a finite poset. `maps[(i, j)]` for `i < j`
/// is the map `S_i -> S_j`; every strict relation must carry a map.
#[derive(Clone, Debug, Default)]
pub struct SetDiagram {
    pub sizes: Vec<usize>,
    pub maps: BTreeMap<(usize, usize), Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct LimitComparison {
    /// Compatible families `(x_i)`, in lexicographic order.
    pub limit: Vec<Vec<usize>>,
    /// Column `k` is the image of the `k`-th family in `⊕ Z[S_i]`.
    pub lambda: IntMatrix,
    /// The limit of the free groups, inside `⊕ Z[S_i]`.
    pub target: Lattice,
    pub injective: bool,
    pub surjective: bool,
}

impl LimitComparison {
    pub fn is_iso(&self) -> bool {
        self.injective && self.surjective
    }
}

impl SetDiagram {
    fn validate(&self) -> Result<usize, AlgebraError> {
        let k = self.sizes.len();
        let bad = |m: String| Err(AlgebraError::InvalidDiagram(m));
        if k == 0 {
            return bad("empty index poset".into());
        }
        for (&(i, j), f) in &self.maps {
            if i >= k || j >= k || i == j {
                return bad(format!("bad relation ({i}, {j})"));
            }
            if self.maps.contains_key(&(j, i)) {
                return bad(format!("relation ({i}, {j}) is not antisymmetric"));
            }
            if f.len() != self.sizes[i] || f.iter().any(|&t| t >= self.sizes[j]) {
                return bad(format!("map ({i}, {j}) has the wrong shape"));
            }
        }
        for (&(i, j), f) in &self.maps {
            for (&(j2, l), g) in self.maps.range((j, 0)..(j + 1, 0)) {
                debug_assert_eq!(j2, j);
                let Some(h) = self.maps.get(&(i, l)) else {
                    return bad(format!("relation ({i}, {l}) missing by transitivity"));
                };
                if f.iter().map(|&s| g[s]).ne(h.iter().copied()) {
                    return bad(format!("maps ({i}, {j}), ({j}, {l}) do not compose to ({i}, {l})"));
                }
            }
        }
        (0..k)
            .find(|&m| (0..k).all(|j| j == m || self.maps.contains_key(&(m, j))))
            .ok_or(AlgebraError::NotCodirected)
    }

    fn families(&self) -> Vec<Vec<usize>> {
        fn go(d: &SetDiagram, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let i = cur.len();
            if i == d.sizes.len() {
                out.push(cur.clone());
                return;
            }
            for x in 0..d.sizes[i] {
                let ok = (0..i).all(|j| {
                    d.maps.get(&(j, i)).is_none_or(|f| f[cur[j]] == x)
                        && d.maps.get(&(i, j)).is_none_or(|f| f[x] == cur[j])
                });
                if ok {
                    cur.push(x);
                    go(d, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

/// Compares `Z[lim S_i]` with `lim Z[S_i]` through the canonical map.
pub fn limit_comparison(d: &SetDiagram) -> Result<LimitComparison, AlgebraError> {
    d.validate()?;
    let offsets: Vec<usize> = d
        .sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let ambient: usize = d.sizes.iter().sum();
    let limit = d.families();

    let mut rows = Vec::new();
    for (&(i, j), f) in &d.maps {
        for t in 0..d.sizes[j] {
            let mut row = vec![BigInt::default(); ambient];
            for (s, _) in f.iter().enumerate().filter(|(_, &ft)| ft == t) {
                row[offsets[i] + s] += 1;
            }
            row[offsets[j] + t] -= 1;
            rows.push(row);
        }
    }
    let constraints = IntMatrix::from_rows(ambient, rows).expect("uniform rows");
    let target = if constraints.rows() == 0 { Lattice::full(ambient) } else { kernel(&constraints) };

    let mut lambda = IntMatrix::zeros(ambient, limit.len());
    let mut images = Vec::with_capacity(limit.len());
    for (k, fam) in limit.iter().enumerate() {
        for (i, &x) in fam.iter().enumerate() {
            lambda.set(offsets[i] + x, k, BigInt::one());
        }
        images.push(lambda.col_sparse(k));
    }
    let image = Lattice::from_generators(ambient, &images).expect("columns fit");
    let injective = image.rank() == limit.len();
    let surjective = image == target;
    debug_assert!(target.contains_lattice(&image));
    Ok(LimitComparison { limit, lambda, target, injective, surjective })
}
