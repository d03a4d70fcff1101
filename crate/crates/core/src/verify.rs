//! Named check suites over one rank, each producing a [`Report`].

use std::collections::{BTreeMap, BTreeSet};

use crate::cells::{a_function_report, rs_cells, tableau_label, InvolutionHasse, Order, Preorder};
use crate::hecke::{Coords, HeckeAlgebra, HeckeElt, Sparse};
use crate::kahrstrom::{self, Kahrstrom, Mode};
use crate::laurent::LaurentPoly;
use crate::report::{Check, Report};
use crate::rs::rs_shape;
use crate::submod::{self, Basis};
use crate::weyl::{Parabolic, Perm, WeylGroup};
use crate::{Error, Result};

pub const SUITES: [&str; 5] = ["paper-tables", "identities", "cells", "cyclic", "kahrstrom"];

/// Seed and sample count for randomized checks at ranks above 4.
pub const SAMPLE_SEED: u64 = 0x5eed;
pub const SAMPLE_TRIPLES: usize = 10_000;

/// Runs one suite, or all of them for `"all"`.
pub fn run_suite(alg: &HeckeAlgebra, suite: &str) -> Result<Report> {
    match suite {
        "paper-tables" => published_tables(alg),
        "identities" => identities(alg),
        "cells" => Ok(cells(alg)),
        "cyclic" => cyclic(alg),
        "kahrstrom" => kahrstrom_suite(alg),
        "all" => {
            let mut r = Report::new(format!("all suites on S_{}", alg.n()));
            for s in SUITES {
                r.extend(run_suite(alg, s)?);
            }
            Ok(r)
        }
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

fn collect(name: impl Into<String>, bad: &[String], total: usize) -> Check {
    let detail = if bad.is_empty() {
        Some(format!("{total} cases"))
    } else {
        let shown: Vec<&str> = bad.iter().take(6).map(|s| s.as_str()).collect();
        Some(format!("{} of {total} failed: {}", bad.len(), shown.join("; ")))
    };
    Check::asserted(name, bad.is_empty(), detail)
}

fn sparse_get(x: &[(u32, LaurentPoly)], i: u32) -> LaurentPoly {
    x.binary_search_by_key(&i, |t| t.0).map(|k| x[k].1.clone()).unwrap_or_default()
}

// ---------------------------------------------------------------- tables

/// One-line forms of the named elements of `S_2` and `S_3`.
fn named(n: usize, label: &str) -> Perm {
    let line = match (n, label) {
        (2, "e") => "12",
        (2, "s") => "21",
        (3, "e") => "123",
        (3, "s") => "213",
        (3, "t") => "132",
        (3, "st") => "231",
        (3, "ts") => "312",
        (3, "w0") => "321",
        _ => unreachable!("no element named {label} in S_{n}"),
    };
    Perm::parse(line, n).expect("valid one-line form")
}

fn coords(n: usize, terms: &[(&str, &str)]) -> Coords {
    let mut out = Coords::new();
    for (w, c) in terms {
        let c: LaurentPoly = c.parse().expect("valid polynomial");
        let e = out.entry(named(n, w)).or_default();
        *e += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

const S3: [&str; 6] = ["e", "s", "t", "st", "ts", "w0"];

/// KL elements of `S_3` in standard coordinates.
const S3_KL: [&[(&str, &str)]; 6] = [
    &[("e", "1")],
    &[("s", "1"), ("e", "v")],
    &[("t", "1"), ("e", "v")],
    &[("st", "1"), ("s", "v"), ("t", "v"), ("e", "v^2")],
    &[("ts", "1"), ("s", "v"), ("t", "v"), ("e", "v^2")],
    &[("w0", "1"), ("st", "v"), ("ts", "v"), ("s", "v^2"), ("t", "v^2"), ("e", "v^3")],
];

/// Dual KL elements of `S_3` in standard coordinates.
const S3_DUAL: [&[(&str, &str)]; 6] = [
    &[("e", "1"), ("s", "-v"), ("t", "-v"), ("st", "v^2"), ("ts", "v^2"), ("w0", "-v^3")],
    &[("s", "1"), ("st", "-v"), ("ts", "-v"), ("w0", "v^2")],
    &[("t", "1"), ("st", "-v"), ("ts", "-v"), ("w0", "v^2")],
    &[("st", "1"), ("w0", "-v")],
    &[("ts", "1"), ("w0", "-v")],
    &[("w0", "1")],
];

const Q2: &str = "v+v^-1";
const Q2SQ: &str = "v^-2+2+v^2";
const Q3: &str = "v^-3+2v^-1+2v+v^3";

/// `KL_x KL_y` in KL coordinates, rows `x`, columns `y`.
fn s3_kl_table() -> Vec<Vec<Vec<(&'static str, &'static str)>>> {
    let id = |y: &'static str| vec![(y, "1")];
    vec![
        S3.iter().map(|&y| id(y)).collect(),
        vec![id("s"), vec![("s", Q2)], id("st"), vec![("st", Q2)], vec![("s", "1"), ("w0", "1")], vec![("w0", Q2)]],
        vec![id("t"), id("ts"), vec![("t", Q2)], vec![("t", "1"), ("w0", "1")], vec![("ts", Q2)], vec![("w0", Q2)]],
        vec![
            id("st"),
            vec![("s", "1"), ("w0", "1")],
            vec![("st", Q2)],
            vec![("st", "1"), ("w0", Q2)],
            vec![("s", Q2), ("w0", Q2)],
            vec![("w0", Q2SQ)],
        ],
        vec![
            id("ts"),
            vec![("ts", Q2)],
            vec![("t", "1"), ("w0", "1")],
            vec![("t", Q2), ("w0", Q2)],
            vec![("ts", "1"), ("w0", Q2)],
            vec![("w0", Q2SQ)],
        ],
        vec![id("w0"), vec![("w0", Q2)], vec![("w0", Q2)], vec![("w0", Q2SQ)], vec![("w0", Q2SQ)], vec![("w0", Q3)]],
    ]
}

/// `KL_x dual_y` in dual coordinates, rows `x`, columns `y`.
fn s3_mixed_table() -> Vec<Vec<Vec<(&'static str, &'static str)>>> {
    let id = |y: &'static str| vec![(y, "1")];
    let z = Vec::new;
    let x1 = vec![("w0", Q2SQ), ("st", Q2), ("ts", Q2), ("t", "1")];
    let x2 = vec![("w0", Q2SQ), ("st", Q2), ("ts", Q2), ("s", "1")];
    let x3 = vec![("w0", Q3), ("st", Q2SQ), ("ts", Q2SQ), ("s", Q2), ("t", Q2), ("e", "1")];
    vec![
        S3.iter().map(|&y| id(y)).collect(),
        vec![z(), vec![("s", Q2), ("e", "1"), ("ts", "1")], z(), vec![("st", Q2), ("t", "1")], z(), vec![("w0", Q2), ("ts", "1")]],
        vec![z(), z(), vec![("t", Q2), ("e", "1"), ("st", "1")], z(), vec![("ts", Q2), ("s", "1")], vec![("w0", Q2), ("st", "1")]],
        vec![z(), z(), vec![("st", Q2), ("t", "1")], z(), vec![("s", Q2), ("e", "1"), ("ts", "1")], x1],
        vec![z(), vec![("ts", Q2), ("s", "1")], z(), vec![("t", Q2), ("e", "1"), ("st", "1")], z(), x2],
        vec![z(), z(), z(), z(), z(), x3],
    ]
}

/// Left cell sizes of `S_4` by the tableau of their involution.
pub const S4_LEFT_CELL_SIZES: [(&str, usize); 10] = [
    ("1234", 1),
    ("123/4", 3),
    ("124/3", 3),
    ("134/2", 3),
    ("12/34", 2),
    ("13/24", 2),
    ("12/3/4", 3),
    ("13/2/4", 3),
    ("14/2/3", 3),
    ("1/2/3/4", 1),
];

/// The involution Hasse diagram of the left order on `S_4`, as tableau pairs.
pub const S4_HASSE_EDGES: [(&str, &str); 14] = [
    ("1/2/3/4", "12/3/4"),
    ("1/2/3/4", "13/2/4"),
    ("1/2/3/4", "14/2/3"),
    ("12/3/4", "12/34"),
    ("12/3/4", "123/4"),
    ("14/2/3", "12/34"),
    ("14/2/3", "134/2"),
    ("13/2/4", "13/24"),
    ("12/34", "124/3"),
    ("13/24", "123/4"),
    ("13/24", "134/2"),
    ("123/4", "1234"),
    ("124/3", "1234"),
    ("134/2", "1234"),
];

fn published_tables(alg: &HeckeAlgebra) -> Result<Report> {
    let n = alg.n();
    let mut r = Report::new(format!("published tables for S_{n}"));
    match n {
        1 => {
            let e = Perm::identity(1);
            r.push(Check::asserted("KL_e = H_e", alg.kl_element(&e)? == HeckeElt::standard(&e), None));
        }
        2 => s2_tables(alg, &mut r)?,
        3 => s3_tables(alg, &mut r)?,
        4 => s4_tables(alg, &mut r)?,
        _ => r.push(Check::reported("no published tables at this rank", true, None)),
    }
    Ok(r)
}

fn s2_tables(alg: &HeckeAlgebra, r: &mut Report) -> Result<()> {
    let c = |t: &[(&str, &str)]| coords(2, t);
    let (e, s) = (named(2, "e"), named(2, "s"));
    let mut bad = Vec::new();
    for (w, kl, dual) in [(&e, c(&[("e", "1")]), c(&[("e", "1"), ("s", "-v")])), (&s, c(&[("s", "1"), ("e", "v")]), c(&[("s", "1")]))] {
        if alg.kl_element(w)?.coords() != &kl {
            bad.push(format!("KL_{w}"));
        }
        if alg.dual_kl_element(w)?.coords() != &dual {
            bad.push(format!("dual_{w}"));
        }
    }
    r.push(collect("S_2 KL and dual KL elements", &bad, 4));
    // rows x, columns y, for target e then s
    let gamma = [[["1", "0"], ["0", "0"]], [["0", "1"], ["1", "v+v^-1"]]];
    let gamma_hat = [[["1+v^2", "-v"], ["-v", "1"]], [["0", "0"], ["0", "v^-1"]]];
    let els = [e, s];
    let mut bad_g = Vec::new();
    let mut bad_h = Vec::new();
    for (k, w) in els.iter().enumerate() {
        for (i, x) in els.iter().enumerate() {
            for (j, y) in els.iter().enumerate() {
                if alg.gamma(x, y, w)? != gamma[k][i][j].parse()? {
                    bad_g.push(format!("gamma_{x},{y}^{w}"));
                }
                if alg.gamma_hat(x, y, w)? != gamma_hat[k][i][j].parse()? {
                    bad_h.push(format!("gamma_hat_{x},{y}^{w}"));
                }
            }
        }
    }
    r.push(collect("S_2 structure constants", &bad_g, 8));
    r.push(collect("S_2 dual structure constants", &bad_h, 8));
    Ok(())
}

fn s3_tables(alg: &HeckeAlgebra, r: &mut Report) -> Result<()> {
    let c = |t: &[(&str, &str)]| coords(3, t);
    let p = |l: &str| named(3, l);
    let mut bad = Vec::new();
    for (i, l) in S3.iter().enumerate() {
        if alg.kl_element(&p(l))?.coords() != &c(S3_KL[i]) {
            bad.push(format!("KL_{l}"));
        }
    }
    r.push(collect("S_3 KL elements", &bad, 6));
    let mut bad = Vec::new();
    for (i, l) in S3.iter().enumerate() {
        if alg.dual_kl_element(&p(l))?.coords() != &c(S3_DUAL[i]) {
            bad.push(format!("dual_{l}"));
        }
    }
    r.push(collect("S_3 dual KL elements", &bad, 6));
    let kl_table = s3_kl_table();
    let mixed = s3_mixed_table();
    let mut bad_kl = Vec::new();
    let mut bad_mixed = Vec::new();
    for (i, x) in S3.iter().enumerate() {
        for (j, y) in S3.iter().enumerate() {
            let prod = alg.mul(&alg.kl_element(&p(x))?, &alg.kl_element(&p(y))?)?;
            if alg.to_kl_coords(&prod)? != c(&kl_table[i][j]) {
                bad_kl.push(format!("KL_{x} KL_{y}"));
            }
            let prod = alg.mul(&alg.kl_element(&p(x))?, &alg.dual_kl_element(&p(y))?)?;
            if alg.to_dual_kl_coords(&prod)? != c(&mixed[i][j]) {
                bad_mixed.push(format!("KL_{x} dual_{y}"));
            }
        }
    }
    r.push(collect("S_3 KL multiplication table", &bad_kl, 36));
    r.push(collect("S_3 KL times dual KL table", &bad_mixed, 36));

    let cells = alg.preorder(Order::Left).cells().as_partition(alg);
    let expected: BTreeSet<BTreeSet<Perm>> =
        [vec!["e"], vec!["s", "ts"], vec!["t", "st"], vec!["w0"]].iter().map(|c| c.iter().map(|l| p(l)).collect()).collect();
    r.push(Check::asserted("S_3 left cells", cells == expected, None));

    // cyclic modules generated by KL elements
    let kl = |l: &str| alg.kl_element(&p(l));
    let m_s = submod::cyclic_kl(alg, &p("s"))?;
    let m_ts = submod::cyclic_kl(alg, &p("ts"))?;
    let lm_s = submod::compare_lm(alg, &p("s"))?;
    r.push(Check::asserted("KL module of s is spanned by KL_s, KL_ts, KL_w0", lm_s.equal() && lm_s.rank == 3, None));
    let ts_basis = [kl("ts")?, &kl("s")? + &kl("w0")?, kl("w0")?.scale(&Q2.parse()?)];
    let mut ok = m_ts.rank() == 3;
    for b in &ts_basis {
        ok &= m_ts.membership(b)?.is_member();
    }
    r.push(Check::asserted("KL module of ts contains KL_ts, KL_s + KL_w0, (v+v^-1) KL_w0", ok, None));
    let ts_in_s = m_s.membership(&kl("ts")?)?;
    let s_in_ts = m_ts.membership(&kl("s")?)?;
    let w0_in_ts = m_ts.membership(&kl("w0")?)?;
    r.push(Check::asserted(
        "KL_ts lies in the module of s; KL_s and KL_w0 do not lie in the module of ts",
        ts_in_s.is_member() && !s_in_ts.is_member() && !w0_in_ts.is_member(),
        None,
    ));

    // cyclic modules generated by dual KL elements
    let du = |l: &str| alg.dual_kl_element(&p(l));
    let d_s = submod::cyclic_dual(alg, &p("s"))?;
    let d_ts = submod::cyclic_dual(alg, &p("ts"))?;
    let ln_ts = submod::compare_ln_dual(alg, &p("ts"))?;
    r.push(Check::asserted("dual module of ts is spanned by dual_ts, dual_s, dual_e", ln_ts.equal() && ln_ts.rank == 3, None));
    let s_basis = [du("s")?, &du("ts")? + &du("e")?, du("ts")?.scale(&Q2.parse()?)];
    let mut ok = d_s.rank() == 3;
    for b in &s_basis {
        ok &= d_s.membership(b)?.is_member();
    }
    r.push(Check::asserted("dual module of s contains dual_s, dual_ts + dual_e, (v+v^-1) dual_ts", ok, None));
    r.push(Check::asserted(
        "dual_s lies in the module of ts; dual_ts does not lie in the module of s",
        d_ts.membership(&du("s")?)?.is_member() && !d_s.membership(&du("ts")?)?.is_member(),
        None,
    ));

    // quasi-idempotents
    let q_w0 = submod::quasi_idempotent_check(alg, &p("w0"))?;
    let q_ts = submod::quasi_idempotent_check(alg, &p("ts"))?;
    r.push(Check::asserted(
        "KL_w0^2 = (v^3+2v+2v^-1+v^-3) KL_w0 and KL_ts^2 is not a multiple of KL_ts",
        q_w0 == Some(Q3.parse()?) && q_ts.is_none(),
        None,
    ));
    Ok(())
}

/// The element of the left cell of involution `left` and the right cell of involution `right`.
pub fn cell_intersection(alg: &HeckeAlgebra, left: &str, right: &str) -> Option<Perm> {
    let g = alg.group();
    let l = alg.preorder(Order::Left);
    let rr = alg.preorder(Order::Right);
    let inv = |label: &str| (0..alg.size() as u32).find(|&i| g.inverse(i) == i && tableau_label(&g.element(i)) == label);
    let (a, b) = (inv(left)?, inv(right)?);
    let hits: Vec<u32> = (0..alg.size() as u32).filter(|&w| l.equiv(w, a) && rr.equiv(w, b)).collect();
    (hits.len() == 1).then(|| g.element(hits[0]))
}

fn s4_tables(alg: &HeckeAlgebra, r: &mut Report) -> Result<()> {
    let g = alg.group();
    let left = alg.preorder(Order::Left);
    let cells = left.cells();
    let mut bad = Vec::new();
    for (label, size) in S4_LEFT_CELL_SIZES {
        let d = (0..alg.size() as u32).find(|&i| g.inverse(i) == i && tableau_label(&g.element(i)) == label);
        let got = d.map(|d| cells.classes[cells.class_of[d as usize]].len());
        if got != Some(size) {
            bad.push(format!("{label}: {got:?}"));
        }
    }
    r.push(collect("S_4 left cell sizes by involution", &bad, 10));
    let hasse = InvolutionHasse::new(alg, left).tableau_edges();
    let expected: BTreeSet<(String, String)> = S4_HASSE_EDGES
        .iter()
        .map(|(a, b)| if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) })
        .collect();
    r.push(Check::asserted("S_4 involution Hasse diagram", hasse == expected, None));

    let coideal = |label: &str| -> Option<BTreeSet<String>> {
        let d = (0..alg.size() as u32).find(|&i| g.inverse(i) == i && tableau_label(&g.element(i)) == label)?;
        Some(left.up_set(d).into_iter().filter(|&u| g.inverse(u) == u).map(|u| tableau_label(&g.element(u))).collect())
    };
    let set = |xs: &[&str]| -> BTreeSet<String> { xs.iter().map(|s| s.to_string()).collect() };
    r.push(Check::asserted(
        "involutions above 12/34 and above 13/24",
        coideal("12/34") == Some(set(&["12/34", "12/3/4", "14/2/3", "1/2/3/4"]))
            && coideal("13/24") == Some(set(&["13/24", "13/2/4", "1/2/3/4"])),
        None,
    ));

    let Some(w) = cell_intersection(alg, "12/34", "13/24") else {
        r.push(Check::asserted("cell intersection of 12/34 and 13/24 is one element", false, None));
        return Ok(());
    };
    let wi = alg.idx(&w)?;
    let lm = submod::lm_set(alg, &w)?.len();
    let nonzero = (0..alg.size() as u32).filter(|&v| alg.dual_products().is_nonzero(v, wi)).count();
    let cmp = submod::compare_lm(alg, &w)?;
    r.push(Check::asserted(
        format!("KL module of {w}: rank <= 6, 6 nonvanishing dual products, 9 elements above, differs from its coideal span"),
        cmp.rank <= 6 && nonzero == 6 && lm == 9 && !cmp.equal(),
        Some(format!("rank {}, nonvanishing {nonzero}, coideal {lm}", cmp.rank)),
    ));
    Ok(())
}

// ---------------------------------------------------------------- identities

fn identities(alg: &HeckeAlgebra) -> Result<Report> {
    let n = alg.n();
    let g = alg.group().clone();
    let kl = alg.kl_cache();
    let size = alg.size() as u32;
    let w0 = g.longest();
    let h_w0 = HeckeElt::standard(&g.element(w0));
    let all: Vec<Perm> = g.elements().to_vec();
    let mut r = Report::new(format!("identities on S_{n}"));

    // KL basis: bar invariant, H_w plus v Z[v] terms
    let mut bad = Vec::new();
    for w in &all {
        let c = alg.kl_element(w)?;
        let lower_ok = c.coords().iter().all(|(x, a)| if x == w { a.is_one() } else { a.valuation().is_some_and(|k| k >= 1) && a.terms().iter().all(|t| t.0 >= 1) });
        if alg.bar(&c)? != c || !lower_ok {
            bad.push(w.to_string());
        }
    }
    r.push(collect("KL elements are bar invariant and H_w + vZ[v]-terms", &bad, all.len()));

    // duality
    let mut bad = Vec::new();
    for x in &all {
        let dx = alg.dual_kl_element(x)?;
        for y in &all {
            let f = alg.form(&dx, &alg.kl_element(&y.inverse())?)?;
            if f != if x == y { LaurentPoly::one() } else { LaurentPoly::zero() } {
                bad.push(format!("({x},{y})"));
            }
        }
    }
    r.push(collect("form(dual_x, KL_{y^-1}) = delta_{x,y}", &bad, all.len() * all.len()));

    // structure constants
    let kp = alg.kl_products();
    let mut bad = Vec::new();
    for x in 0..size {
        for y in 0..size {
            for (w, c) in kp.product(x, y) {
                if !c.is_nonneg() || !c.is_bar_symmetric() {
                    bad.push(format!("gamma_{},{}^{}", g.element(x), g.element(y), g.element(*w)));
                }
            }
        }
    }
    r.push(collect("structure constants are bar symmetric with nonnegative coefficients", &bad, (size * size) as usize));

    // simple reflection rule
    let mut bad = Vec::new();
    for (k, &s_gen) in g.gens().iter().enumerate() {
        let s = g.index_of(&Perm::simple(n, s_gen)).expect("simple reflection");
        for y in 0..size {
            let sy = g.mul_gen_left(y, k);
            let expected: Sparse = if g.length(sy) < g.length(y) {
                vec![(y, LaurentPoly::quantum_two())]
            } else {
                (0..size)
                    .filter(|&w| g.length(g.mul_gen_left(w, k)) < g.length(w))
                    .filter_map(|w| {
                        let m = kl.mu(y, w);
                        (!m.is_zero()).then(|| (w, LaurentPoly::constant(m)))
                    })
                    .collect()
            };
            if kp.product(s, y) != &expected {
                bad.push(format!("s{s_gen} * {}", g.element(y)));
            }
        }
    }
    r.push(collect("KL_s KL_y follows the simple reflection rule", &bad, g.gens().len() * size as usize));

    // KL inversion
    let mut bad = Vec::new();
    for u in 0..size {
        for v in 0..size {
            let mut acc = LaurentPoly::zero();
            for w in 0..size {
                let a = kl.h(u, w);
                if a.is_zero() {
                    continue;
                }
                let b = kl.h(g.compose(w0, v), g.compose(w0, w));
                if b.is_zero() {
                    continue;
                }
                let t = &a * &b;
                if (g.length(v) + g.length(w)) % 2 == 0 {
                    acc += t;
                } else {
                    acc -= &t;
                }
            }
            if acc != if u == v { LaurentPoly::one() } else { LaurentPoly::zero() } {
                bad.push(format!("({},{})", g.element(u), g.element(v)));
            }
        }
    }
    r.push(collect("KL inversion: sum (-1)^(l(v)-l(w)) h_{u,w} h_{w0 v, w0 w} = delta", &bad, (size * size) as usize));

    // standard elements through KL
    let mut bad = Vec::new();
    for a in 0..size {
        let w0a = g.compose(w0, a);
        let got = alg.kl_coords_sparse(&[(w0a, LaurentPoly::one())]);
        let expected: Sparse = (0..size)
            .filter_map(|z| {
                let h = kl.h(g.compose(w0, z), a);
                if h.is_zero() {
                    return None;
                }
                let odd = (g.length(w0a) + g.length(z)) % 2 == 1;
                Some((z, if odd { -h } else { h }))
            })
            .collect();
        if got != expected {
            bad.push(g.element(a).to_string());
        }
    }
    r.push(collect("H_{w0 a} = sum (-1)^(l(w0 a)-l(z)) h_{w0 z, a} KL_z", &bad, size as usize));

    // tilting character
    let mut bad = Vec::new();
    for x in &all {
        let lhs = alg.mul(&h_w0, &alg.kl_element(x)?)?;
        let xi = alg.idx(x)?;
        let mut rhs = HeckeElt::zero(n);
        for (y, c) in kl.element(xi) {
            rhs.add_term(g.element(g.compose(w0, *y)), &c.bar());
        }
        if lhs != rhs || lhs != alg.tilting_element(&g.element(w0).compose(x))? {
            bad.push(x.to_string());
        }
    }
    r.push(collect("H_w0 KL_x = sum h_{x,y}(v^-1) H_{w0 y}", &bad, all.len()));

    // dual basis through beta
    let mut bad = Vec::new();
    for w in &all {
        let klw = alg.kl_element(w)?;
        let lhs = alg.dual_kl_element(&w.compose(&g.element(w0)))?;
        if lhs != alg.beta(&alg.mul(&klw, &h_w0)?) || lhs != alg.mul(&alg.beta(&klw), &h_w0)? {
            bad.push(w.to_string());
        }
    }
    r.push(collect("dual_{w w0} = beta(KL_w H_w0) = beta(KL_w) H_w0", &bad, all.len()));

    // star and conjugation by H_w0
    let mut bad_star = Vec::new();
    let mut bad_kl = Vec::new();
    let mut bad_dual = Vec::new();
    let w0p = g.element(w0);
    for w in &all {
        let dw = alg.dual_kl_element(w)?;
        if alg.star(&dw) != alg.dual_kl_element(&w.inverse())? {
            bad_star.push(w.to_string());
        }
        let conj = w0p.compose(w).compose(&w0p);
        if alg.mul(&h_w0, &alg.kl_element(w)?)? != alg.mul(&alg.kl_element(&conj)?, &h_w0)? {
            bad_kl.push(w.to_string());
        }
        if alg.mul(&h_w0, &dw)? != alg.mul(&alg.dual_kl_element(&conj)?, &h_w0)? {
            bad_dual.push(w.to_string());
        }
    }
    r.push(collect("star(dual_w) = dual_{w^-1}", &bad_star, all.len()));
    r.push(collect("H_w0 KL_w H_w0^-1 = KL_{w0 w w0}", &bad_kl, all.len()));
    r.push(collect("H_w0 dual_w H_w0^-1 = dual_{w0 w w0}", &bad_dual, all.len()));

    // dual structure constants via KL data
    // cubic in |W|; above rank 4 only x in {e, simple reflections, w0}
    let xs: Vec<u32> = if n <= 4 {
        (0..size).collect()
    } else {
        (0..size).filter(|&x| g.length(x) <= 1 || x == w0).collect()
    };
    let mut bad = Vec::new();
    for &x in &xs {
        for y in 0..size {
            let direct = alg.dual_coords_sparse(&alg.mul_sparse(alg.dual_sparse(x), alg.dual_sparse(y)));
            for w in 0..size {
                if alg.gamma_hat_via_kl_idx(x, y, w) != sparse_get(&direct, w) {
                    bad.push(format!("({},{},{})", g.element(x), g.element(y), g.element(w)));
                }
            }
        }
    }
    r.push(collect("dual structure constants from KL data match direct products", &bad, xs.len() * (size * size) as usize));

    // vanishing criteria and positivity of mixed products
    let left = alg.preorder(Order::Left);
    let right = alg.preorder(Order::Right);
    let dp = alg.dual_products();
    let mut bad_right = Vec::new();
    let mut bad_left = Vec::new();
    let mut bad_pos = Vec::new();
    for x in 0..size {
        for y in 0..size {
            let xi = g.inverse(x);
            let (kd, dk) = if n <= 4 {
                (!alg.kl_times_dual(x, y).is_empty(), alg.dual_times_kl(y, x))
            } else {
                (dp.is_nonzero(g.inverse(y), xi), dp.vector(y, x).clone())
            };
            if kd != right.leq(xi, y) {
                bad_right.push(format!("KL_{} dual_{}", g.element(x), g.element(y)));
            }
            if !dk.is_empty() != left.leq(xi, y) {
                bad_left.push(format!("dual_{} KL_{}", g.element(y), g.element(x)));
            }
            if dk != *dp.vector(y, x) || !dk.iter().all(|(_, c)| c.is_nonneg()) {
                bad_pos.push(format!("dual_{} KL_{}", g.element(y), g.element(x)));
            }
        }
    }
    let pairs = (size * size) as usize;
    r.push(collect("KL_x dual_y != 0 iff y >=_R x^-1", &bad_right, pairs));
    r.push(collect("dual_y KL_x != 0 iff y >=_L x^-1", &bad_left, pairs));
    r.push(collect("dual_y KL_x has nonnegative dual coordinates", &bad_pos, pairs));

    // some KL_c with c ~_L b appears in dual_a KL_b
    let mut bad = Vec::new();
    for a in 0..size {
        for b in 0..size {
            let v = dp.vector(a, b);
            if v.is_empty() {
                continue;
            }
            let std = v.iter().fold(Vec::new(), |acc, (y, c)| crate::submod::lattice::axpy_sparse(&acc, c, alg.dual_sparse(*y)));
            let klc = alg.kl_coords_sparse(&std);
            if !klc.iter().any(|(c, _)| left.equiv(*c, b)) {
                bad.push(format!("dual_{} KL_{}", g.element(a), g.element(b)));
            }
        }
    }
    r.push(collect("nonzero dual_a KL_b has a KL term left-equivalent to b", &bad, pairs));

    // gamma_{w0', w}^u != 0 for u longest in W' w
    let mut bad = Vec::new();
    let mut count = 0;
    for j in Parabolic::all_standard(n) {
        let sub = WeylGroup::new(j.clone());
        let w0j = g.index_of(&j.longest_element()).expect("in group");
        for w in 0..size {
            let u = sub
                .elements()
                .iter()
                .map(|x| g.index_of(&x.compose(&g.element(w))).expect("in group"))
                .max_by_key(|&u| g.length(u))
                .expect("nonempty coset");
            count += 1;
            if kp.gamma(w0j, w, u).is_zero() {
                bad.push(format!("{j} w={}", g.element(w)));
            }
        }
    }
    r.push(collect("gamma_{w0', w}^u != 0 for u longest in W'w", &bad, count));

    r.extend(a_function_report(alg));
    Ok(r)
}

// ---------------------------------------------------------------- cells

fn cells(alg: &HeckeAlgebra) -> Report {
    let n = alg.n();
    let g = alg.group();
    let mut r = Report::new(format!("cells on S_{n}"));
    for order in [Order::Left, Order::Right, Order::TwoSided] {
        let kl = alg.preorder(order).cells().as_partition(alg);
        r.push(Check::asserted(format!("{} cells agree with Robinson-Schensted", order.name()), kl == rs_cells(n, order), None));
    }
    for order in [Order::Left, Order::Right, Order::TwoSided] {
        let p = alg.preorder(order);
        let mut bad = Vec::new();
        for x in 0..alg.size() as u32 {
            for y in 0..alg.size() as u32 {
                if p.leq(x, y) && !rs_shape(&g.element(y)).dominated_by(&rs_shape(&g.element(x))) {
                    bad.push(format!("{} <= {}", g.element(x), g.element(y)));
                }
            }
        }
        r.push(collect(format!("{} order is antimonotone in shape dominance", order.name()), &bad, alg.size() * alg.size()));
    }
    if n <= 4 {
        for order in [Order::Left, Order::Right, Order::TwoSided] {
            let full = Preorder::from_structure_constants(alg, order);
            let same = (0..alg.size() as u32).all(|x| (0..alg.size() as u32).all(|y| full.leq(x, y) == alg.preorder(order).leq(x, y)));
            r.push(Check::asserted(format!("{} order from simple reflections equals the order from all products", order.name()), same, None));
        }
    }
    r
}

// ---------------------------------------------------------------- cyclic submodules

fn cyclic(alg: &HeckeAlgebra) -> Result<Report> {
    let n = alg.n();
    let g = alg.group().clone();
    let left = alg.preorder(Order::Left);
    let size = alg.size() as u32;
    let mut r = Report::new(format!("cyclic submodules on S_{n}"));

    if n <= 4 {
        let mut bad_kl = Vec::new();
        let mut bad_dual = Vec::new();
        let mut bad_cert = Vec::new();
        let mut ranks = Vec::new();
        for y in 0..size {
            let yp = g.element(y);
            let m = submod::cyclic_kl(alg, &yp)?;
            let d = submod::cyclic_dual(alg, &yp)?;
            let lm = submod::lm_set(alg, &yp)?.len();
            ranks.push((m.rank(), lm));
            for x in 0..size {
                let xp = g.element(x);
                let target = alg.kl_element(&xp)?;
                let verdict = m.membership(&target)?;
                let recheck = match &verdict {
                    submod::MembershipVerdict::Member { certificate } => m.check_certificate(&target, certificate)?,
                    submod::MembershipVerdict::NonMember { witness } => m.check_witness(&target, witness)?,
                };
                if !recheck {
                    bad_cert.push(format!("KL_{xp} in KL module of {yp}"));
                }
                if verdict.is_member() && !left.leq(y, x) {
                    bad_kl.push(format!("KL_{xp} in KL module of {yp}"));
                }
                if d.contains_basis_element(x) && !left.leq(x, y) {
                    bad_dual.push(format!("dual_{xp} in dual module of {yp}"));
                }
            }
        }
        let pairs = (size * size) as usize;
        r.push(collect("KL_x in the KL module of y implies x >=_L y", &bad_kl, pairs));
        r.push(collect("dual_x in the dual module of y implies x <=_L y", &bad_dual, pairs));
        r.push(collect("membership certificates and witnesses re-verify", &bad_cert, pairs));
        let over: Vec<String> = ranks.iter().enumerate().filter(|(_, (a, b))| a > b).map(|(i, _)| g.element(i as u32).to_string()).collect();
        r.push(collect("rank of the KL module of w <= |{u >=_L w}|", &over, ranks.len()));
        let eq = ranks.iter().filter(|(a, b)| a == b).count();
        r.push(Check::reported(format!("rank equals coideal size for {eq} of {} elements", ranks.len()), true, None));
    }

    let mut bad = Vec::new();
    let mut bad_dual = Vec::new();
    let w0 = g.element(g.longest());
    for j in Parabolic::all_standard(n) {
        let w0p = j.longest_element();
        if !submod::equals_lm(alg, &w0p)? {
            bad.push(j.to_string());
        }
        if n <= 4 && !submod::equals_ln_dual(alg, &w0p.compose(&w0))? {
            bad_dual.push(j.to_string());
        }
    }
    let count = 1usize << (n - 1);
    r.push(collect("KL module of w0' equals its coideal span", &bad, count));
    if n <= 4 {
        r.push(collect("dual module of w0' w0 equals its ideal span", &bad_dual, count));
    }

    let longest: BTreeMap<Perm, Parabolic> = Parabolic::all_standard(n).into_iter().map(|j| (j.longest_element(), j)).collect();
    let mut bad = Vec::new();
    for w in g.elements() {
        let q = submod::quasi_idempotent_check(alg, w)?;
        let expected = longest.get(w).map(submod::parabolic_scalar);
        if q != expected {
            bad.push(format!("{w}: {q:?}"));
        }
    }
    r.push(collect("KL_w^2 is a multiple of KL_w exactly for w0', with the Poincare scalar", &bad, g.size()));

    if n <= 5 {
        let survey = submod::coideal_survey(alg)?;
        let hyp = survey.hypothesis_exceptions();
        let eq = survey.equality_exceptions();
        let fmt = |v: &[Perm]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        r.push(Check::reported(
            "coideal hypothesis holds only for parabolic longest elements",
            hyp.is_empty(),
            Some(format!("non-parabolic elements passing: [{}]", fmt(&hyp))),
        ));
        r.push(Check::reported(
            "KL module equals coideal span only for parabolic longest elements",
            eq.is_empty(),
            Some(format!("non-parabolic elements with equality: [{}]", fmt(&eq))),
        ));
    }
    Ok(r)
}

// ---------------------------------------------------------------- Kåhrström

fn kahrstrom_suite(alg: &HeckeAlgebra) -> Result<Report> {
    let n = alg.n();
    let kh = Kahrstrom::new(alg);
    let table = kh.table();
    let mut r = kahrstrom::kh_report(&kh, &table)?;
    if n <= 4 {
        r.extend(kahrstrom::pruning_report(&kh));
        r.extend(kahrstrom::check_necessary_conditions(&kh, None));
    } else {
        r.extend(kahrstrom::check_necessary_conditions(&kh, Some((SAMPLE_TRIPLES, SAMPLE_SEED))));
    }
    for mode in Mode::BOTH {
        r.extend(kahrstrom::scan_left_cell_invariance(&kh, &table, mode)?);
        r.extend(kahrstrom::scan_witness_variation(&kh, &table, mode)?);
    }
    if n <= 4 {
        for j in Parabolic::all_standard(n) {
            for mode in Mode::BOTH {
                r.extend(kahrstrom::parabolic_induction_check(alg, &j, mode)?);
            }
        }
    }
    Ok(r)
}

/// Basis used by a suite check, by name.
pub fn basis_by_name(name: &str) -> Option<Basis> {
    match name {
        "kl" => Some(Basis::Kl),
        "dualkl" => Some(Basis::DualKl),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        let alg = HeckeAlgebra::new(2);
        assert!(matches!(run_suite(&alg, "nope"), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn all_suites_pass_through_rank_three() {
        for n in 1..=3 {
            let alg = HeckeAlgebra::new(n);
            let r = run_suite(&alg, "all").unwrap();
            assert!(r.ok(), "{r}");
        }
    }
}
