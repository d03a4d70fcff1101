//! Non-membership witnesses by evaluation at `v = a` in a small prime field.
//!
//! If `t = sum c_i g_i` over `Z[v, v^-1]` then `t(a) = sum c_i(a) g_i(a)` in
//! `F_p^m` for every `a` in `F_p^*`, so a single `(p, a)` where `t(a)` leaves
//! the span of the `g_i(a)` proves non-membership.

use crate::hecke::Sparse;
use crate::laurent::LaurentPoly;

pub const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Echelon rows over `F_p`, pivots at the leading nonzero column, reduced to leading 1.
struct ModpSpan {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModpSpan {
    fn new(p: u64, dim: usize) -> Self {
        let _ = dim;
        Self { p, rows: Vec::new() }
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (c, row) in &self.rows {
            let f = v[*c];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + self.p - f * y % self.p) % self.p;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<u64>) {
        let v = self.reduce(v);
        if let Some(c) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[c], self.p);
            let v: Vec<u64> = v.iter().map(|&x| x * inv % self.p).collect();
            for (_, row) in &mut self.rows {
                let f = row[c];
                if f != 0 {
                    for (x, y) in row.iter_mut().zip(&v) {
                        *x = (*x + self.p - f * y % self.p) % self.p;
                    }
                }
            }
            self.rows.push((c, v));
        }
    }
}

fn evaluate(x: &[(u32, LaurentPoly)], dim: usize, p: u64, a: u64) -> Vec<u64> {
    let mut out = vec![0u64; dim];
    for (i, c) in x {
        out[*i as usize] = c.eval_mod(p, a);
    }
    out
}

/// Searches small primes and evaluation points for an obstruction.
pub fn find_obstruction(dim: usize, generators: &[Sparse], target: &[(u32, LaurentPoly)]) -> Option<(u64, u64)> {
    for &p in &PRIMES {
        for a in 1..p {
            let mut span = ModpSpan::new(p, dim);
            for g in generators {
                span.insert(evaluate(g, dim, p, a));
            }
            if span.reduce(evaluate(target, dim, p, a)).iter().any(|&x| x != 0) {
                return Some((p, a));
            }
        }
    }
    None
}

/// Checks that `(p, a)` really is an obstruction.
pub fn is_obstruction(dim: usize, generators: &[Sparse], target: &[(u32, LaurentPoly)], p: u64, a: u64) -> bool {
    let mut span = ModpSpan::new(p, dim);
    for g in generators {
        span.insert(evaluate(g, dim, p, a));
    }
    span.reduce(evaluate(target, dim, p, a)).iter().any(|&x| x != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quantum_two_obstruction() {
        // (v + v^-1) e0 does not generate e0; v + v^-1 vanishes at v = 1 mod 2
        let g = vec![vec![(0u32, "v+v^-1".parse().unwrap())]];
        let t = vec![(0u32, "1".parse().unwrap())];
        let (p, a) = find_obstruction(1, &g, &t).unwrap();
        assert!(is_obstruction(1, &g, &t, p, a));
        assert_eq!((p, a), (2, 1));
        let t2 = vec![(0u32, "v^2+1".parse().unwrap())];
        assert_eq!(find_obstruction(1, &g, &t2), None);
    }
}
