//! KL preorders, cells, Hasse diagrams and Lusztig's a-function.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::hecke::{HeckeAlgebra, KLCache};
use crate::report::{Check, Report};
use crate::rs::{rs, rs_shape};
use crate::weyl::{Parabolic, Perm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    Left,
    Right,
    TwoSided,
}

impl Order {
    pub fn name(self) -> &'static str {
        match self {
            Order::Left => "left",
            Order::Right => "right",
            Order::TwoSided => "two-sided",
        }
    }
}

/// Bit matrix, row `x` holds the set `{y : x <= y}`.
#[derive(Clone, Debug)]
struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self { words, bits: vec![0; n * words] }
    }
    fn get(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }
    fn set(&mut self, x: usize, y: usize) {
        self.bits[x * self.words + y / 64] |= 1 << (y % 64);
    }
}

/// One of the KL preorders on a group, as a reachability matrix.
///
/// `x <= y` in the left order when `H_y` occurs in `H_w H_x` for some `w`;
/// it is generated by the products `H_s H_x` with `s` simple.
#[derive(Clone, Debug)]
pub struct Preorder {
    order: Order,
    size: usize,
    reach: BitMatrix,
}

/// Targets `y != x` of one-step edges from `x` under multiplication by simple elements.
fn simple_edges(kl: &KLCache, x: u32, side: Order) -> Vec<u32> {
    let g = kl.group();
    let mut out = Vec::new();
    for k in 0..g.gens().len() {
        let step = |u: u32| if side == Order::Left { g.mul_gen_left(u, k) } else { g.mul_gen_right(u, k) };
        let sx = step(x);
        if g.length(sx) < g.length(x) {
            continue;
        }
        out.push(sx);
        for (z, _) in kl.mu_below(x) {
            if g.length(step(*z)) < g.length(*z) {
                out.push(*z);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

impl Preorder {
    pub fn new(kl: &KLCache, order: Order) -> Self {
        let size = kl.group().size();
        let adj: Vec<Vec<u32>> = (0..size as u32)
            .map(|x| match order {
                Order::Left | Order::Right => simple_edges(kl, x, order),
                Order::TwoSided => {
                    let mut e = simple_edges(kl, x, Order::Left);
                    e.extend(simple_edges(kl, x, Order::Right));
                    e.sort_unstable();
                    e.dedup();
                    e
                }
            })
            .collect();
        Self::from_adjacency(order, &adj)
    }

    fn from_adjacency(order: Order, adj: &[Vec<u32>]) -> Self {
        let size = adj.len();
        let mut reach = BitMatrix::new(size);
        for x in 0..size {
            let mut stack = vec![x];
            reach.set(x, x);
            while let Some(u) = stack.pop() {
                for &y in &adj[u] {
                    if !reach.get(x, y as usize) {
                        reach.set(x, y as usize);
                        stack.push(y as usize);
                    }
                }
            }
        }
        Self { order, size, reach }
    }

    /// Reference construction from all KL structure constants: `x <= y` iff
    /// `H_y` occurs in `H_w H_x` (left) or `H_x H_w` (right) for some `w`.
    pub fn from_structure_constants(h: &HeckeAlgebra, order: Order) -> Self {
        let size = h.size();
        let kp = h.kl_products();
        let adj: Vec<Vec<u32>> = (0..size as u32)
            .map(|x| {
                let mut e: BTreeSet<u32> = BTreeSet::new();
                for w in 0..size as u32 {
                    if order != Order::Right {
                        e.extend(kp.product(w, x).iter().map(|t| t.0));
                    }
                    if order != Order::Left {
                        e.extend(kp.product(x, w).iter().map(|t| t.0));
                    }
                }
                e.into_iter().collect()
            })
            .collect();
        Self::from_adjacency(order, &adj)
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, x: u32, y: u32) -> bool {
        self.reach.get(x as usize, y as usize)
    }

    pub fn equiv(&self, x: u32, y: u32) -> bool {
        self.leq(x, y) && self.leq(y, x)
    }

    /// `x < y`: `x <= y` and not `y <= x`.
    pub fn lt(&self, x: u32, y: u32) -> bool {
        self.leq(x, y) && !self.leq(y, x)
    }

    /// `{u : w <= u}` in index order.
    pub fn up_set(&self, w: u32) -> Vec<u32> {
        (0..self.size as u32).filter(|&u| self.leq(w, u)).collect()
    }

    /// `{u : u <= w}` in index order.
    pub fn down_set(&self, w: u32) -> Vec<u32> {
        (0..self.size as u32).filter(|&u| self.leq(u, w)).collect()
    }

    pub fn cells(&self) -> CellDecomposition {
        let mut class_of = vec![usize::MAX; self.size];
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for x in 0..self.size {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let members: Vec<u32> = (x..self.size).filter(|&y| self.equiv(x as u32, y as u32)).map(|y| y as u32).collect();
            for &m in &members {
                class_of[m as usize] = id;
            }
            classes.push(members);
        }
        let c = classes.len();
        let below = |i: usize, j: usize| i != j && self.leq(classes[i][0], classes[j][0]);
        let mut hasse = Vec::new();
        for i in 0..c {
            for j in 0..c {
                if below(i, j) && !(0..c).any(|k| below(i, k) && below(k, j)) {
                    hasse.push((i, j));
                }
            }
        }
        CellDecomposition { order: self.order, classes, class_of, hasse }
    }
}

/// Equivalence classes of a preorder with the covering relation between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDecomposition {
    pub order: Order,
    /// Members by index, each class sorted; classes sorted by least member.
    pub classes: Vec<Vec<u32>>,
    pub class_of: Vec<usize>,
    /// `(i, j)`: class `i` is covered by class `j`.
    pub hasse: Vec<(usize, usize)>,
}

#[derive(Serialize)]
pub struct CellsJson {
    pub version: u32,
    pub n: usize,
    pub order: Order,
    pub classes: Vec<Vec<Perm>>,
    pub hasse: Vec<(usize, usize)>,
}

impl CellDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    pub fn to_json(&self, h: &HeckeAlgebra) -> CellsJson {
        let g = h.group();
        CellsJson {
            version: 1,
            n: h.n(),
            order: self.order,
            classes: self.classes.iter().map(|c| c.iter().map(|&i| g.element(i)).collect()).collect(),
            hasse: self.hasse.clone(),
        }
    }

    /// Classes as sets of permutations, for order-independent comparison.
    pub fn as_partition(&self, h: &HeckeAlgebra) -> BTreeSet<BTreeSet<Perm>> {
        self.classes.iter().map(|c| c.iter().map(|&i| h.group().element(i)).collect()).collect()
    }
}

/// The Hasse diagram of the left order restricted to involutions.
///
/// Each left cell contains exactly one involution, so this is the Hasse diagram
/// of left cells labelled by involutions. Edges are `(lower, upper)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionHasse {
    pub involutions: Vec<Perm>,
    pub edges: Vec<(Perm, Perm)>,
}

impl InvolutionHasse {
    pub fn new(h: &HeckeAlgebra, left: &Preorder) -> Self {
        let g = h.group();
        let inv: Vec<u32> = (0..h.size() as u32).filter(|&x| g.inverse(x) == x).collect();
        let below = |a: u32, b: u32| a != b && left.leq(a, b);
        let mut edges = Vec::new();
        for &a in &inv {
            for &b in &inv {
                if below(a, b) && !inv.iter().any(|&c| below(a, c) && below(c, b)) {
                    edges.push((g.element(a), g.element(b)));
                }
            }
        }
        Self { involutions: inv.iter().map(|&i| g.element(i)).collect(), edges }
    }

    /// Edges as unordered pairs of tableau labels.
    pub fn tableau_edges(&self) -> BTreeSet<(String, String)> {
        self.edges
            .iter()
            .map(|(a, b)| {
                let (x, y) = (tableau_label(a), tableau_label(b));
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect()
    }

    /// Graphviz rendering; nodes labelled by the tableau of the involution,
    /// rows separated by `/`, larger elements drawn on top.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
        for w in &self.involutions {
            let _ = writeln!(s, "  \"{w}\" [label=\"{}\"];", tableau_label(w));
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  \"{a}\" -- \"{b}\";");
        }
        s.push_str("}\n");
        s
    }
}

/// `12/34` style label of the insertion tableau.
pub fn tableau_label(w: &Perm) -> String {
    rs(w)
        .0
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<String>())
        .collect::<Vec<_>>()
        .join("/")
}

/// Cells predicted by Robinson-Schensted: equal recording tableau (left),
/// equal insertion tableau (right), equal shape (two-sided).
pub fn rs_cells(n: usize, order: Order) -> BTreeSet<BTreeSet<Perm>> {
    let mut groups: BTreeMap<String, BTreeSet<Perm>> = BTreeMap::new();
    for w in Perm::all(n) {
        let (p, q) = rs(&w);
        let key = match order {
            Order::Left => format!("{q:?}"),
            Order::Right => format!("{p:?}"),
            Order::TwoSided => format!("{:?}", p.shape()),
        };
        groups.entry(key).or_default().insert(w);
    }
    groups.into_values().collect()
}

/// `a(w)`: the largest degree of the coefficient of `H_w` in any product `H_x H_y`.
pub fn a_function(h: &HeckeAlgebra) -> Vec<i32> {
    let size = h.size();
    let kp = h.kl_products();
    let mut a = vec![i32::MIN; size];
    for x in 0..size as u32 {
        for y in 0..size as u32 {
            for (w, c) in kp.product(x, y) {
                let d = c.degree().expect("stored coefficients are nonzero");
                a[*w as usize] = a[*w as usize].max(d);
            }
        }
    }
    a
}

/// Checks the standard properties of the a-function exhaustively.
///
/// Asserted: monotonicity `x <=_L y => a(x) <= a(y)` (and for the right and
/// two-sided orders), `a(x) <= l(x)`, `a(w0') = l(w0')` for parabolic longest
/// elements, and constancy on two-sided cells. Reported only: strictness on
/// `<_J`, and two readings of the degree property.
pub fn a_function_report(h: &HeckeAlgebra) -> Report {
    let g = h.group().clone();
    let n = h.n();
    let size = h.size();
    let a = a_function(h);
    let kl = h.kl_cache();
    let left = Preorder::new(kl, Order::Left);
    let right = Preorder::new(kl, Order::Right);
    let two = Preorder::new(kl, Order::TwoSided);
    let name = |x: u32| g.element(x).to_string();
    let mut report = Report::new(format!("a-function properties on S_{n}"));

    for (label, pre) in [("left", &left), ("right", &right), ("two-sided", &two)] {
        let mut witness = None;
        'outer: for x in 0..size as u32 {
            for y in 0..size as u32 {
                if pre.leq(x, y) && a[x as usize] > a[y as usize] {
                    witness = Some(format!("{} <= {} but a = {} > {}", name(x), name(y), a[x as usize], a[y as usize]));
                    break 'outer;
                }
            }
        }
        report.push(Check::asserted(format!("monotone on {label} order"), witness.is_none(), witness));
    }

    let bad = (0..size as u32).find(|&x| a[x as usize] > g.length(x) as i32);
    report.push(Check::asserted("a(x) <= l(x)", bad.is_none(), bad.map(name)));

    let mut bad = None;
    for j in Parabolic::all_standard(n) {
        let w0p = g.idx(&j.longest_element()).expect("parabolic element");
        if a[w0p as usize] != g.length(w0p) as i32 {
            bad = Some(format!("{j}: a = {}, l = {}", a[w0p as usize], g.length(w0p)));
            break;
        }
    }
    report.push(Check::asserted("a(w0') = l(w0') for parabolic longest elements", bad.is_none(), bad));

    let bad = (0..size as u32)
        .flat_map(|x| (0..size as u32).map(move |y| (x, y)))
        .find(|&(x, y)| two.equiv(x, y) && a[x as usize] != a[y as usize]);
    report.push(Check::asserted(
        "a constant on two-sided cells",
        bad.is_none(),
        bad.map(|(x, y)| format!("{} ~ {}", name(x), name(y))),
    ));

    let bad = (0..size as u32)
        .flat_map(|x| (0..size as u32).map(move |y| (x, y)))
        .find(|&(x, y)| two.lt(x, y) && a[x as usize] >= a[y as usize]);
    report.push(Check::reported(
        "strict: x <_J y => a(x) < a(y)",
        bad.is_none(),
        bad.map(|(x, y)| format!("{} <_J {}", name(x), name(y))),
    ));

    let kp = h.kl_products();
    let mut literal = None;
    let mut corrected = None;
    for x in 0..size as u32 {
        for y in 0..size as u32 {
            for (w, c) in kp.product(x, y) {
                let d = c.degree().expect("nonzero");
                if literal.is_none() && d == a[x as usize] && !two.equiv(x, y) {
                    literal = Some(format!("C_{} C_{} -> {}: degree {d} = a({}), cells differ", name(x), name(y), name(*w), name(x)));
                }
                if corrected.is_none() && d == a[*w as usize] && !(two.equiv(x, *w) && two.equiv(y, *w)) {
                    corrected = Some(format!("C_{} C_{} -> {}", name(x), name(y), name(*w)));
                }
            }
        }
    }
    report.push(Check::reported(
        "degree of gamma_{w,x}^y equal to a(w) => x ~_J w",
        literal.is_none(),
        literal,
    ));
    report.push(Check::reported(
        "degree of gamma_{x,y}^w equal to a(w) => x ~_J y ~_J w",
        corrected.is_none(),
        corrected,
    ));
    report
}

/// Shapes of two-sided cells with their common a-value.
pub fn a_values_by_shape(h: &HeckeAlgebra) -> BTreeMap<Vec<usize>, BTreeSet<i32>> {
    let a = a_function(h);
    let mut out: BTreeMap<Vec<usize>, BTreeSet<i32>> = BTreeMap::new();
    for (i, w) in h.group().elements().iter().enumerate() {
        out.entry(rs_shape(w).0).or_default().insert(a[i]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_left_cells() {
        let h = HeckeAlgebra::new(3);
        let left = Preorder::new(h.kl_cache(), Order::Left);
        let cells = left.cells();
        let p = |s: &str| h.idx(&Perm::parse(s, 3).unwrap()).unwrap();
        assert!(left.equiv(p("213"), p("312")));
        assert!(!left.equiv(p("213"), p("231")));
        assert_eq!(cells.sizes(), vec![1, 2, 2, 1]);
        assert!(left.leq(p("123"), p("321")));
        assert!(!left.leq(p("321"), p("123")));
    }

    #[test]
    fn simple_generation_matches_structure_constants() {
        for n in 1..=4 {
            let h = HeckeAlgebra::new(n);
            for order in [Order::Left, Order::Right, Order::TwoSided] {
                let a = Preorder::new(h.kl_cache(), order);
                let b = Preorder::from_structure_constants(&h, order);
                for x in 0..h.size() as u32 {
                    for y in 0..h.size() as u32 {
                        assert_eq!(a.leq(x, y), b.leq(x, y), "n={n} {order:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn right_order_is_left_order_conjugated_by_inverse() {
        let h = HeckeAlgebra::new(4);
        let g = h.group();
        let l = Preorder::new(h.kl_cache(), Order::Left);
        let r = Preorder::new(h.kl_cache(), Order::Right);
        for x in 0..24 {
            for y in 0..24 {
                assert_eq!(r.leq(x, y), l.leq(g.inverse(x), g.inverse(y)));
            }
        }
    }

    #[test]
    fn a_values_s3() {
        let h = HeckeAlgebra::new(3);
        assert_eq!(a_function(&h), vec![0, 1, 1, 1, 1, 3]);
    }
}
