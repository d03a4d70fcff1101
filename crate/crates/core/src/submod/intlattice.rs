//! Integer row reduction: kernels and lattice membership over `Z`.

use dashu_int::ops::UnsignedAbs;
use dashu_int::IBig;

/// Row-reduces `[rows | I]` by unimodular operations; returns the reduced
/// rows with their transformation vectors and the number of nonzero rows.
fn reduce(rows: &[Vec<(u32, IBig)>], width: usize) -> (Vec<(Vec<IBig>, Vec<IBig>)>, usize, Vec<usize>) {
    let k = rows.len();
    let mut a: Vec<(Vec<IBig>, Vec<IBig>)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut d = vec![IBig::ZERO; width];
            for (c, x) in r {
                d[*c as usize] = x.clone();
            }
            let mut t = vec![IBig::ZERO; k];
            t[i] = IBig::ONE;
            (d, t)
        })
        .collect();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..width {
        loop {
            let Some(best) = (r..k)
                .filter(|&i| !a[i].0[col].is_zero())
                .min_by(|&i, &j| a[i].0[col].clone().unsigned_abs().cmp(&a[j].0[col].clone().unsigned_abs()))
            else {
                break;
            };
            a.swap(r, best);
            let mut done = true;
            for i in r + 1..k {
                if a[i].0[col].is_zero() {
                    continue;
                }
                let q = &a[i].0[col] / &a[r].0[col];
                let (head, tail) = a.split_at_mut(i);
                let (piv, row) = (&head[r], &mut tail[0]);
                for (x, y) in row.0.iter_mut().zip(&piv.0) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
                for (x, y) in row.1.iter_mut().zip(&piv.1) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
                if !row.0[col].is_zero() {
                    done = false;
                }
            }
            if done {
                pivots.push(col);
                r += 1;
                break;
            }
        }
    }
    (a, r, pivots)
}

/// A basis of `{ z in Z^k : sum z_i rows_i = 0 }`, sparse.
pub fn integer_kernel(rows: &[Vec<(u32, IBig)>]) -> Vec<Vec<(u32, IBig)>> {
    let width = rows.iter().flat_map(|r| r.iter().map(|t| t.0 as usize + 1)).max().unwrap_or(0);
    let (a, r, _) = reduce(rows, width);
    a.into_iter()
        .skip(r)
        .map(|(_, t)| {
            t.into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i as u32, x))
                .collect()
        })
        .collect()
}

/// Echelon basis of a sublattice of `Z^width`.
#[derive(Clone, Debug)]
pub struct IntLattice {
    width: usize,
    rows: Vec<Vec<IBig>>,
    pivots: Vec<usize>,
}

impl IntLattice {
    pub fn new(width: usize, gens: &[Vec<(u32, IBig)>]) -> Self {
        let (a, r, pivots) = reduce(gens, width);
        Self { width, rows: a.into_iter().take(r).map(|t| t.0).collect(), pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, target: &[(u32, IBig)]) -> bool {
        let mut t = vec![IBig::ZERO; self.width];
        for (c, x) in target {
            if *c as usize >= self.width {
                return x.is_zero();
            }
            t[*c as usize] = x.clone();
        }
        let mut next = 0;
        for col in 0..self.width {
            if next < self.pivots.len() && self.pivots[next] == col {
                let row = &self.rows[next];
                let p = &row[col];
                if !(&t[col] % p).is_zero() {
                    return false;
                }
                let q = &t[col] / p;
                if !q.is_zero() {
                    for (x, y) in t.iter_mut().zip(row) {
                        *x -= &q * y;
                    }
                }
                next += 1;
            } else if !t[col].is_zero() {
                return false;
            }
        }
        true
    }
}
