//! Fraction-free row echelon form over `Q(v)` for Laurent vectors.

use dashu_int::ops::{Gcd, UnsignedAbs};
use dashu_int::{IBig, UBig};

use super::lattice::{axpy_sparse, scale_sparse, valuation};
use crate::hecke::Sparse;
use crate::laurent::LaurentPoly;

/// Divides out the largest power of `v` and the integer content; makes the
/// leading coefficient of the leading entry positive. Only nonzero scalars of
/// `Q(v)` are removed, so the `Q(v)`-span is unchanged.
fn primitive(mut x: Sparse) -> Sparse {
    let Some(val) = valuation(&x) else { return x };
    let mut g = UBig::ZERO;
    for (_, c) in &x {
        for (_, a) in c.terms() {
            g = g.gcd(a.clone().unsigned_abs());
            if g.is_one() {
                break;
            }
        }
    }
    let neg = x.last().and_then(|t| t.1.leading_coeff()).is_some_and(|c| *c < IBig::ZERO);
    let g = IBig::from(g);
    if val == 0 && g.is_one() && !neg {
        return x;
    }
    for (_, c) in &mut x {
        let scaled = LaurentPoly::from_terms(c.terms().iter().map(|(e, a)| (e - val, a / &g)));
        *c = if neg { -scaled } else { scaled };
    }
    x
}

fn pivot_cost(c: &LaurentPoly) -> (usize, i32) {
    (c.terms().len(), c.degree().unwrap_or(0) - c.valuation().unwrap_or(0))
}

fn entry_at(x: &[(u32, LaurentPoly)], col: u32) -> Option<&LaurentPoly> {
    x.binary_search_by_key(&col, |t| t.0).ok().map(|i| &x[i].1)
}

/// `row` with its entry at `c` removed using `piv`. Exact when the pivot
/// entry divides, fraction-free otherwise.
fn eliminate(row: &Sparse, piv: &Sparse, c: u32) -> Sparse {
    let Some(rc) = entry_at(row, c) else { return row.clone() };
    let pc = entry_at(piv, c).expect("pivot entry");
    match rc.div_exact(pc) {
        Some(q) => primitive(axpy_sparse(row, &(-q), piv)),
        None => primitive(axpy_sparse(&scale_sparse(row, pc), &(-rc.clone()), piv)),
    }
}

/// Pivot for the next column: an entry dividing its whole column if one
/// exists, otherwise the cheapest entry. Ties go to sparse rows in sparse columns.
fn choose_pivot(dim: usize, pool: &[Sparse]) -> Option<(usize, u32)> {
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for (i, r) in pool.iter().enumerate() {
        for (c, _) in r {
            cols[*c as usize].push(i);
        }
    }
    let mut best: Option<((bool, (usize, i32), usize, u32, usize), (usize, u32))> = None;
    for (c, members) in cols.iter().enumerate() {
        let c = c as u32;
        for &i in members {
            let e = entry_at(&pool[i], c).expect("member");
            let key = (false, pivot_cost(e), (members.len() - 1) * pool[i].len(), c, i);
            if best.as_ref().is_some_and(|(k, _)| !k.0 && *k <= key) {
                continue;
            }
            let divides = members.iter().all(|&j| j == i || entry_at(&pool[j], c).expect("member").div_exact(e).is_some());
            let key = (!divides, key.1, key.2, key.3, key.4);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, (i, c)));
            }
        }
    }
    best.map(|(_, p)| p)
}

/// Echelon rows in elimination order; each row vanishes at the pivot columns of its predecessors.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<(u32, Sparse)>,
}

impl Echelon {
    pub fn new(dim: usize, generators: &[Sparse]) -> Self {
        let mut pool: Vec<Sparse> = generators.iter().filter(|g| !g.is_empty()).map(|g| primitive(g.clone())).collect();
        let mut rows = Vec::new();
        while let Some((i, c)) = choose_pivot(dim, &pool) {
            let piv = pool.swap_remove(i);
            pool = pool.into_iter().map(|r| eliminate(&r, &piv, c)).filter(|r| !r.is_empty()).collect();
            rows.push((c, piv));
        }
        Self { rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &Sparse> {
        self.rows.iter().map(|t| &t.1)
    }

    pub fn pivot_positions(&self) -> Vec<u32> {
        let mut p: Vec<u32> = self.rows.iter().map(|t| t.0).collect();
        p.sort_unstable();
        p
    }

    /// Whether `target` lies in the `Q(v)`-span of the rows.
    pub fn in_span(&self, target: &[(u32, LaurentPoly)]) -> bool {
        let mut t = primitive(target.to_vec());
        for (c, row) in &self.rows {
            if t.is_empty() {
                break;
            }
            t = eliminate(&t, row, *c);
        }
        t.is_empty()
    }
}
