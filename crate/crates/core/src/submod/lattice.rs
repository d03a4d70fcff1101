//! Exact membership in finitely generated `Z[v, v^-1]`-submodules of a free module.
//!
//! A submodule over the Laurent ring is the localization at `v` of a `Z[v]`-module.
//! Generators are scaled by powers of `v` into `Z[v]^m`; we compute a strong
//! Groebner basis over `Z[v]` in a position-over-term order and saturate with
//! respect to `v`, using
//! `(M : v) = M + v^-1 { sum c_i g_i : c in Z^k, sum c_i g_i(0) = 0 }`.
//! A Laurent vector then lies in the submodule iff its `v`-normalization
//! reduces to zero.
//!
//! The position order is chosen from the data, deterministically. A column in
//! which one entry divides all others in the Laurent ring is cleared exactly
//! by that row; units `+-v^k` are the common case. Only columns without such a
//! divisor get a strong Groebner step, and the cheapest such column goes first.

use std::collections::VecDeque;

use dashu_int::ops::{BitTest, ExtendedGcd, UnsignedAbs};
use dashu_int::IBig;

use crate::hecke::Sparse;
use crate::laurent::LaurentPoly;

/// `x + c * y` for sparse vectors.
pub(crate) fn axpy_sparse(x: &[(u32, LaurentPoly)], c: &LaurentPoly, y: &[(u32, LaurentPoly)]) -> Sparse {
    if c.is_zero() {
        return x.to_vec();
    }
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, c * &y[j].1));
            j += 1;
        } else {
            let s = &x[i].1 + &(c * &y[j].1);
            if !s.is_zero() {
                out.push((x[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub(crate) fn scale_sparse(x: &[(u32, LaurentPoly)], c: &LaurentPoly) -> Sparse {
    if c.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, a)| (*i, a * c)).collect()
}

/// Smallest exponent over all entries.
pub(crate) fn valuation(x: &[(u32, LaurentPoly)]) -> Option<i32> {
    x.iter().filter_map(|(_, c)| c.valuation()).min()
}

fn shift_sparse(x: &[(u32, LaurentPoly)], k: i32) -> Sparse {
    x.iter().map(|(i, c)| (*i, c.shift(k))).collect()
}

#[derive(Clone, Debug)]
struct Row {
    /// Entries in `Z[v]` once normalized.
    vec: Sparse,
    /// Expresses `vec` in the original generators.
    cof: Sparse,
}

impl Row {
    fn entry(&self, c: u32) -> Option<&LaurentPoly> {
        entry_at(&self.vec, c)
    }

    /// `self + c * other`.
    fn axpy(&self, c: &LaurentPoly, other: &Row, track: bool) -> Row {
        Row {
            vec: axpy_sparse(&self.vec, c, &other.vec),
            cof: if track { axpy_sparse(&self.cof, c, &other.cof) } else { Vec::new() },
        }
    }

    fn scaled(&self, c: &LaurentPoly, track: bool) -> Row {
        Row {
            vec: scale_sparse(&self.vec, c),
            cof: if track { scale_sparse(&self.cof, c) } else { Vec::new() },
        }
    }

    /// Divides by the largest power of `v` dividing every entry.
    fn normalize(&mut self) {
        if let Some(k) = valuation(&self.vec) {
            if k != 0 {
                self.vec = shift_sparse(&self.vec, -k);
                self.cof = shift_sparse(&self.cof, -k);
            }
        }
    }
}

fn entry_at(x: &[(u32, LaurentPoly)], col: u32) -> Option<&LaurentPoly> {
    x.binary_search_by_key(&col, |t| t.0).ok().map(|i| &x[i].1)
}

fn lead(p: &LaurentPoly) -> (i32, &IBig) {
    (p.degree().expect("nonzero"), p.leading_coeff().expect("nonzero"))
}

fn unit_entry(c: &LaurentPoly) -> bool {
    c.is_monomial() && c.terms()[0].1.clone().unsigned_abs().is_one()
}

fn span(c: &LaurentPoly) -> i32 {
    c.degree().unwrap_or(0) - c.valuation().unwrap_or(0)
}

/// `lt(g) | lt(f)` in the strong sense: degree and integer divisibility.
/// A unit `+-v^k` of the Laurent ring divides everything.
fn divides(g: &LaurentPoly, f: &LaurentPoly) -> bool {
    let ((dg, cg), (df, cf)) = (lead(g), lead(f));
    (dg <= df || unit_entry(g)) && (cf % cg).is_zero()
}

/// Result of reducing a vector modulo the basis.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Zero iff the vector lies in the submodule.
    pub remainder: Sparse,
    /// When the remainder is zero: coefficients over the original generators.
    pub certificate: Option<Sparse>,
}

/// How one column of the basis was built.
#[derive(Clone, Debug)]
enum Column {
    /// A single row whose entry divides the column; reduction is exact division.
    Divisor(Row),
    /// A strong Groebner basis of the column ideal, reduced by leading terms.
    Strong(Vec<Row>),
}

impl Column {
    fn rows(&self) -> &[Row] {
        match self {
            Column::Divisor(r) => std::slice::from_ref(r),
            Column::Strong(b) => b,
        }
    }
}

/// Saturated strong Groebner basis of a `Z[v, v^-1]`-submodule of `A^dim`.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    track: bool,
    /// Processed columns in order, each with its basis rows.
    columns: Vec<(u32, Column)>,
    saturation_rounds: usize,
}

impl Lattice {
    /// `track` keeps cofactors so members come with certificates.
    pub fn new(dim: usize, generators: &[Sparse], track: bool) -> Self {
        let mut rows: Vec<Row> = generators
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_empty())
            .map(|(i, g)| {
                let mut r = Row {
                    vec: g.clone(),
                    cof: if track { vec![(i as u32, LaurentPoly::one())] } else { Vec::new() },
                };
                r.normalize();
                r
            })
            .collect();
        let mut rounds = 0;
        loop {
            let columns = groebner(dim, rows, track);
            let basis: Vec<&Row> = columns.iter().flat_map(|(_, c)| c.rows()).collect();
            let extra: Vec<Row> = saturation_candidates(&basis, track)
                .into_iter()
                .filter(|r| !reduce_rows(&columns, r.clone(), track).0.vec.is_empty())
                .collect();
            rounds += 1;
            if extra.is_empty() {
                return Self { dim, track, columns, saturation_rounds: rounds };
            }
            rows = basis.into_iter().cloned().chain(extra).collect();
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rank over the fraction field: the number of pivot columns.
    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    /// Pivot columns, ascending.
    pub fn pivot_positions(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.columns.iter().map(|t| t.0).collect();
        out.sort_unstable();
        out
    }

    /// Number of columns cleared by an exact divisor.
    pub fn divisor_pivots(&self) -> usize {
        self.columns.iter().filter(|(_, c)| matches!(c, Column::Divisor(_))).count()
    }

    pub fn basis_len(&self) -> usize {
        self.columns.iter().map(|(_, c)| c.rows().len()).sum()
    }

    pub fn saturation_rounds(&self) -> usize {
        self.saturation_rounds
    }

    /// Reduces an arbitrary Laurent vector.
    pub fn reduce(&self, target: &[(u32, LaurentPoly)]) -> Reduction {
        let Some(val) = valuation(target) else {
            return Reduction { remainder: Vec::new(), certificate: self.track.then(Vec::new) };
        };
        let row = Row { vec: shift_sparse(target, -val), cof: Vec::new() };
        let (rem, acc) = reduce_rows(&self.columns, row, self.track);
        if rem.vec.is_empty() {
            // target = v^val * (sum q_g g) = -v^val * acc
            let certificate = self.track.then(|| shift_sparse(&acc.cof, val).into_iter().map(|(i, c)| (i, -c)).collect());
            Reduction { remainder: Vec::new(), certificate }
        } else {
            Reduction { remainder: shift_sparse(&rem.vec, val), certificate: None }
        }
    }

    pub fn contains(&self, target: &[(u32, LaurentPoly)]) -> bool {
        self.reduce(target).remainder.is_empty()
    }
}

/// Reduces `row` column by column. The second row accumulates
/// `-(sum of subtracted multiples)` so that `row = rem - acc` on cofactors.
/// Laurent steps can leave negative exponents; the row is shifted back into
/// `Z[v]` before each Groebner step and the shift is undone at the end.
fn reduce_rows(columns: &[(u32, Column)], mut row: Row, track: bool) -> (Row, Row) {
    let mut acc = Row { vec: Vec::new(), cof: Vec::new() };
    let mut shift = 0;
    let sub = |row: &mut Row, acc: &mut Row, q: LaurentPoly, g: &Row| {
        let neg_q = -q;
        *row = row.axpy(&neg_q, g, false);
        if track {
            acc.cof = axpy_sparse(&acc.cof, &neg_q, &g.cof);
        }
    };
    'columns: for (c, col) in columns {
        match col {
            Column::Divisor(g) => {
                if let Some(x) = row.entry(*c) {
                    let Some(q) = x.div_exact(g.entry(*c).expect("pivot entry")) else {
                        break 'columns;
                    };
                    sub(&mut row, &mut acc, q, g);
                }
            }
            Column::Strong(basis) => {
                if let Some(val) = valuation(&row.vec).filter(|&v| v < 0) {
                    row.vec = shift_sparse(&row.vec, -val);
                    acc.cof = shift_sparse(&acc.cof, -val);
                    shift -= val;
                }
                while let Some(f) = row.entry(*c) {
                    let Some(g) = basis.iter().find(|g| divides(g.entry(*c).expect("lead"), f)) else {
                        break 'columns;
                    };
                    let ((dg, cg), (df, cf)) = (lead(g.entry(*c).expect("lead")), lead(f));
                    let q = LaurentPoly::monomial(cf / cg, df - dg);
                    sub(&mut row, &mut acc, q, g);
                }
            }
        }
    }
    if shift != 0 {
        row.vec = shift_sparse(&row.vec, -shift);
        acc.cof = shift_sparse(&acc.cof, -shift);
    }
    (row, acc)
}

/// Finds `(row, column)` whose entry divides its whole column, preferring
/// small entries, then sparse rows in sparse columns.
fn find_divisor_pivot(cols: &[Vec<usize>], rows: &[Row]) -> Option<(usize, u32)> {
    let mut best: Option<((i32, usize, usize, u32, usize), (usize, u32))> = None;
    for (c, members) in cols.iter().enumerate() {
        let c = c as u32;
        if members.is_empty() {
            continue;
        }
        let entry = |i: usize| rows[i].entry(c).expect("member");
        let min_span = members.iter().map(|&i| span(entry(i))).min().expect("nonempty");
        for &i in members.iter().filter(|&&i| span(entry(i)) == min_span) {
            let key = (min_span, (members.len() - 1) * rows[i].vec.len(), rows[i].vec.len(), c, i);
            if best.as_ref().is_some_and(|(k, _)| *k <= key) {
                continue;
            }
            let e = entry(i);
            if unit_entry(e) || members.iter().all(|&j| j == i || entry(j).div_exact(e).is_some()) {
                best = Some((key, (i, c)));
            }
        }
    }
    best.map(|(_, p)| p)
}

/// Column whose strong Groebner step looks cheapest: fewest rows, then smallest entries.
fn cheapest_column(cols: &[Vec<usize>], rows: &[Row]) -> Option<u32> {
    cols.iter()
        .enumerate()
        .filter(|(_, m)| !m.is_empty())
        .min_by_key(|(c, m)| {
            let c = *c as u32;
            let total: i32 = m.iter().map(|&i| span(rows[i].entry(c).expect("member"))).sum();
            (m.len(), total, c)
        })
        .map(|(c, _)| c as u32)
}

fn column_members(dim: usize, rows: &[Row]) -> Vec<Vec<usize>> {
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in &r.vec {
            cols[*c as usize].push(i);
        }
    }
    cols
}

/// Builds the basis column by column until no rows remain.
fn groebner(dim: usize, mut pool: Vec<Row>, track: bool) -> Vec<(u32, Column)> {
    let mut columns = Vec::new();
    loop {
        let cols = column_members(dim, &pool);
        if let Some((i, c)) = find_divisor_pivot(&cols, &pool) {
            let piv = pool.swap_remove(i);
            let e = piv.entry(c).expect("pivot entry").clone();
            pool = pool
                .into_iter()
                .filter_map(|r| {
                    let mut r = match r.entry(c) {
                        Some(x) => r.axpy(&-x.div_exact(&e).expect("pivot divides its column"), &piv, track),
                        None => r,
                    };
                    r.normalize();
                    (!r.vec.is_empty()).then_some(r)
                })
                .collect();
            columns.push((c, Column::Divisor(piv)));
            continue;
        }
        let Some(c) = cheapest_column(&cols, &pool) else { break };
        let (items, rest): (Vec<Row>, Vec<Row>) = pool.into_iter().partition(|r| r.entry(c).is_some());
        pool = rest;
        let (basis, remnants) = strong_column(items, c, track);
        pool.extend(remnants);
        columns.push((c, Column::Strong(basis)));
    }
    columns
}

/// Strong Groebner basis over `Z[v]` of the ideal of entries at `c`, with
/// lifts; rows whose entry at `c` cancels are returned separately.
fn strong_column(mut items: Vec<Row>, c: u32, track: bool) -> (Vec<Row>, Vec<Row>) {
    // cheapest rows first: they become the pivots and keep tails short
    items.sort_by_cached_key(|r| row_cost(r, c));
    let mut basis: Vec<Row> = Vec::new();
    let mut remnants = Vec::new();
    let mut queue: VecDeque<Row> = items.into();
    while let Some(f) = queue.pop_front() {
        let mut f = top_reduce_at(&basis, f, c, track);
        let Some(fc) = f.entry(c) else {
            f.normalize();
            if !f.vec.is_empty() {
                remnants.push(f);
            }
            continue;
        };
        if *lead(fc).1 < IBig::ZERO {
            f = f.scaled(&LaurentPoly::constant(-1), track);
        }
        // basis elements made redundant by f go back through the queue
        let fc = f.entry(c).expect("entry").clone();
        let (keep, redo): (Vec<Row>, Vec<Row>) =
            basis.into_iter().partition(|g| !divides(&fc, g.entry(c).expect("entry")));
        basis = keep;
        for g in &basis {
            queue.extend(pair_polys(&f, g, c, track));
        }
        queue.extend(redo);
        basis.push(f);
    }
    (basis, remnants)
}

fn row_cost(r: &Row, c: u32) -> (i32, usize, i32, usize) {
    let e = r.entry(c).expect("entry");
    let lc = e.leading_coeff().map_or(0, |x| x.clone().unsigned_abs().bit_len());
    let tail = r.vec.iter().map(|t| span(&t.1)).max().unwrap_or(0);
    (span(e), lc, tail, r.vec.len())
}

fn top_reduce_at(basis: &[Row], mut f: Row, c: u32, track: bool) -> Row {
    loop {
        let Some(fc) = f.entry(c) else { return f };
        let Some(g) = basis.iter().find(|g| divides(g.entry(c).expect("entry"), fc)) else {
            return f;
        };
        let ((dg, cg), (df, cf)) = (lead(g.entry(c).expect("entry")), lead(fc));
        let q = LaurentPoly::monomial(-(cf / cg), df - dg);
        f = f.axpy(&q, g, track);
    }
}

/// S-polynomial and, when leading coefficients are not comparable under
/// divisibility, the G-polynomial of two rows at column `c`.
fn pair_polys(f: &Row, g: &Row, c: u32, track: bool) -> Vec<Row> {
    let ((df, a), (dg, b)) = (lead(f.entry(c).expect("entry")), lead(g.entry(c).expect("entry")));
    let k = df.max(dg);
    let (d, s, t) = a.clone().gcd_ext(b.clone());
    let d = IBig::from(d);
    let la = b / &d; // lcm / a
    let lb = a / &d; // lcm / b
    let mut out = Vec::with_capacity(2);
    let sp = f
        .scaled(&LaurentPoly::monomial(la, k - df), track)
        .axpy(&LaurentPoly::monomial(-lb, k - dg), g, track);
    out.push(sp);
    if !(a % b).is_zero() && !(b % a).is_zero() {
        let gp = f
            .scaled(&LaurentPoly::monomial(s, k - df), track)
            .axpy(&LaurentPoly::monomial(t, k - dg), g, track);
        out.push(gp);
    }
    out
}

/// `v^-1 sum c_i g_i` for a basis of integer relations among the constant terms.
fn saturation_candidates(basis: &[&Row], track: bool) -> Vec<Row> {
    let consts: Vec<Vec<(u32, IBig)>> = basis
        .iter()
        .map(|r| {
            r.vec
                .iter()
                .map(|(i, c)| (*i, c.coeff_at(0)))
                .filter(|(_, c)| !c.is_zero())
                .collect()
        })
        .collect();
    let kernel = crate::submod::intlattice::integer_kernel(&consts);
    kernel
        .into_iter()
        .filter_map(|z| {
            let mut acc = Row { vec: Vec::new(), cof: Vec::new() };
            for (i, c) in z {
                acc = acc.axpy(&LaurentPoly::constant(c), basis[i as usize], track);
            }
            if acc.vec.is_empty() {
                return None;
            }
            acc.normalize();
            Some(acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn vecs(rows: &[&[&str]]) -> Vec<Sparse> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(i, s)| (i as u32, lp(s)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect()
            })
            .collect()
    }

    fn check_certificate(gens: &[Sparse], target: &Sparse, red: &Reduction) {
        let cert = red.certificate.as_ref().expect("member");
        let mut sum: Sparse = Vec::new();
        for (i, c) in cert {
            sum = axpy_sparse(&sum, c, &gens[*i as usize]);
        }
        assert_eq!(&sum, target);
    }

    #[test]
    fn single_generator_over_laurent_ring() {
        let gens = vecs(&[&["v+v^-1", "2"]]);
        let l = Lattice::new(2, &gens, true);
        assert_eq!(l.rank(), 1);
        let t = vecs(&[&["v^3+v", "2v^2"]])[0].clone();
        let red = l.reduce(&t);
        check_certificate(&gens, &t, &red);
        assert!(!l.contains(&vecs(&[&["1", "0"]])[0]));
        assert!(!l.contains(&vecs(&[&["v+v^-1", "1"]])[0]));
    }

    #[test]
    fn saturation_recovers_divided_elements() {
        // v*e0 and (1+v)*e0: their span over the Laurent ring is everything in e0
        let gens = vecs(&[&["v"], &["1+v"]]);
        let l = Lattice::new(1, &gens, true);
        let t = vecs(&[&["1"]])[0].clone();
        let red = l.reduce(&t);
        check_certificate(&gens, &t, &red);
        // 2 and v+1: ideal (2, v+1) is proper, but v is invertible: still proper
        let gens = vecs(&[&["2"], &["1+v"]]);
        let l = Lattice::new(1, &gens, true);
        assert!(!l.contains(&vecs(&[&["1"]])[0]));
        assert!(l.contains(&vecs(&[&["v^-1+1"]])[0]));
        // (1+v, 1-v) contains 2 but not 1
        let gens = vecs(&[&["1+v"], &["1-v"]]);
        let l = Lattice::new(1, &gens, true);
        assert!(l.contains(&vecs(&[&["2"]])[0]));
        assert!(!l.contains(&vecs(&[&["1"]])[0]));
    }

    #[test]
    fn saturation_needs_the_integer_kernel() {
        // g1 = (1, 1+v), g2 = (1, 1): g1 - g2 = (0, v) so e1 is in the span
        let gens = vecs(&[&["1", "1+v"], &["1", "1"]]);
        let l = Lattice::new(2, &gens, true);
        let t = vecs(&[&["0", "1"]])[0].clone();
        let red = l.reduce(&t);
        check_certificate(&gens, &t, &red);
        assert!(l.contains(&vecs(&[&["1", "0"]])[0]));
        assert_eq!(l.rank(), 2);
    }

    #[test]
    fn rank_deficient_input() {
        let gens = vecs(&[&["1", "v", "0"], &["v", "v^2", "0"], &["0", "0", "0"], &["2", "2v", "0"]]);
        let l = Lattice::new(3, &gens, true);
        assert_eq!(l.rank(), 1);
        assert!(l.contains(&vecs(&[&["3v^-5", "3v^-4", "0"]])[0]));
        assert!(!l.contains(&vecs(&[&["1", "1", "0"]])[0]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly() -> impl Strategy<Value = LaurentPoly> {
            prop::collection::vec((-2i32..=2, -3i64..=3), 0..3)
                .prop_map(|t| LaurentPoly::from_terms(t.into_iter().map(|(e, c)| (e, IBig::from(c)))))
        }

        fn vector(dim: u32) -> impl Strategy<Value = Sparse> {
            prop::collection::vec(poly(), dim as usize).prop_map(|cs| {
                cs.into_iter().enumerate().map(|(i, c)| (i as u32, c)).filter(|(_, c)| !c.is_zero()).collect()
            })
        }

        fn combine(gens: &[Sparse], cs: &[LaurentPoly]) -> Sparse {
            gens.iter().zip(cs).fold(Vec::new(), |acc, (g, c)| axpy_sparse(&acc, c, g))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn combinations_are_members(
                gens in prop::collection::vec(vector(3), 1..4),
                cs in prop::collection::vec(poly(), 4),
            ) {
                let t = combine(&gens, &cs);
                let l = Lattice::new(3, &gens, true);
                let red = l.reduce(&t);
                prop_assert!(red.remainder.is_empty());
                check_certificate(&gens, &t, &red);
            }

            #[test]
            fn verdict_is_sound_and_order_free(
                gens in prop::collection::vec(vector(3), 1..4),
                t in vector(3),
            ) {
                let l = Lattice::new(3, &gens, true);
                let red = l.reduce(&t);
                let mut rev = gens.clone();
                rev.reverse();
                prop_assert_eq!(Lattice::new(3, &rev, false).contains(&t), red.remainder.is_empty());
                if red.remainder.is_empty() {
                    check_certificate(&gens, &t, &red);
                }
                if crate::submod::modp::find_obstruction(3, &gens, &t).is_some() {
                    prop_assert!(!red.remainder.is_empty());
                }
            }
        }
    }
}
