//! The Hecke algebra of a standard parabolic subgroup of `S_n` over `Z[v, v^-1]`,
//! with quadratic relation `H_s^2 = H_e + (v^-1 - v) H_s`.
//!
//! Elements are stored in standard coordinates. All operations go through a
//! [`HeckeAlgebra`] context that owns the group tables and the KL data.

pub mod kl;
pub mod structure;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use dashu_int::IBig;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::cells::{Order, Preorder};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::weyl::{Parabolic, Perm, WeylGroup};

pub use kl::{DegreeStats, KLCache};
pub use structure::{DualProducts, KlProducts};

/// Sparse coordinate vector: `(index, coefficient)` sorted by index, no zeros.
pub type Sparse = Vec<(u32, LaurentPoly)>;

pub(crate) fn axpy_dense(dense: &mut [LaurentPoly], c: &LaurentPoly, x: &[(u32, LaurentPoly)]) {
    if c.is_one() {
        for (i, a) in x {
            dense[*i as usize] += a;
        }
    } else {
        for (i, a) in x {
            dense[*i as usize] += c * a;
        }
    }
}

/// Drains a dense vector into sparse form, leaving it zeroed.
pub(crate) fn from_dense(dense: &mut [LaurentPoly]) -> Sparse {
    dense
        .iter_mut()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as u32, std::mem::take(c)))
        .collect()
}

pub(crate) fn to_dense(size: usize, x: &[(u32, LaurentPoly)]) -> Vec<LaurentPoly> {
    let mut d = vec![LaurentPoly::zero(); size];
    for (i, c) in x {
        d[*i as usize] = c.clone();
    }
    d
}

pub(crate) fn sparse_get(x: &[(u32, LaurentPoly)], i: u32) -> LaurentPoly {
    match x.binary_search_by_key(&i, |t| t.0) {
        Ok(k) => x[k].1.clone(),
        Err(_) => LaurentPoly::zero(),
    }
}

/// An element of the Hecke algebra of `S_n` in standard coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HeckeElt {
    n: usize,
    coords: BTreeMap<Perm, LaurentPoly>,
}

impl HeckeElt {
    pub fn zero(n: usize) -> Self {
        Self { n, coords: BTreeMap::new() }
    }

    /// The standard basis element `H_w`.
    pub fn standard(w: &Perm) -> Self {
        Self { n: w.n(), coords: BTreeMap::from([(*w, LaurentPoly::one())]) }
    }

    /// Drops zero coefficients; all keys must have rank `n`.
    pub fn from_coords(n: usize, coords: impl IntoIterator<Item = (Perm, LaurentPoly)>) -> Result<Self> {
        let mut out = Self::zero(n);
        for (w, c) in coords {
            if w.n() != n {
                return Err(Error::RankMismatch(w.n(), n));
            }
            out.add_term(w, &c);
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &BTreeMap<Perm, LaurentPoly> {
        &self.coords
    }

    pub fn coeff(&self, w: &Perm) -> LaurentPoly {
        self.coords.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Perm> {
        self.coords.keys()
    }

    pub fn add_term(&mut self, w: Perm, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.coords.entry(w).or_default();
        *e += c;
        if e.is_zero() {
            self.coords.remove(&w);
        }
    }

    pub fn try_add(&self, other: &HeckeElt) -> Result<HeckeElt> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (w, c) in &other.coords {
            out.add_term(*w, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &HeckeElt) -> Result<HeckeElt> {
        self.try_add(&other.scale(&LaurentPoly::constant(-1)))
    }

    pub fn scale(&self, c: &LaurentPoly) -> HeckeElt {
        let mut out = Self::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (w, a) in &self.coords {
            out.coords.insert(*w, a * c);
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> HeckeElt {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.coords {
            out.add_term(*w, &f(c));
        }
        out
    }

    /// Value at `v = 1`.
    pub fn specialize(&self) -> IntHeckeElt {
        IntHeckeElt {
            n: self.n,
            coords: self
                .coords
                .iter()
                .map(|(w, c)| (*w, c.eval_at_one()))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }
}

impl std::ops::Add<&HeckeElt> for &HeckeElt {
    type Output = HeckeElt;
    fn add(self, rhs: &HeckeElt) -> HeckeElt {
        self.try_add(rhs).expect("rank mismatch in Hecke addition")
    }
}

impl std::ops::Sub<&HeckeElt> for &HeckeElt {
    type Output = HeckeElt;
    fn sub(self, rhs: &HeckeElt) -> HeckeElt {
        self.try_sub(rhs).expect("rank mismatch in Hecke subtraction")
    }
}

fn write_combination<C: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    symbol: &str,
    terms: impl Iterator<Item = (Perm, C)>,
) -> fmt::Result {
    let mut any = false;
    for (w, c) in terms {
        if any {
            f.write_str(" + ")?;
        }
        write!(f, "({c}){symbol}[{w}]")?;
        any = true;
    }
    if !any {
        f.write_str("0")?;
    }
    Ok(())
}

/// `(v)H[123] + (1)H[213]`, terms in the fixed total order.
impl fmt::Display for HeckeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.coords.iter().collect();
        terms.sort_by(|a, b| a.0.cmp_length_lex(b.0));
        write_combination(f, "H", terms.into_iter().map(|(w, c)| (*w, c)))
    }
}

impl fmt::Debug for HeckeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeElt({self})")
    }
}

impl Serialize for HeckeElt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_perm_map(&self.coords, s)
    }
}

/// Serializes a coordinate map with keys in the fixed total order.
pub fn serialize_perm_map<S: Serializer, V: Serialize>(
    map: &BTreeMap<Perm, V>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut entries: Vec<_> = map.iter().collect();
    entries.sort_by(|a, b| a.0.cmp_length_lex(b.0));
    let mut m = s.serialize_map(Some(entries.len()))?;
    for (w, c) in entries {
        m.serialize_entry(&w.to_string(), c)?;
    }
    m.end()
}

/// An element of the group ring `Z[S_n]`, the specialization at `v = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntHeckeElt {
    n: usize,
    coords: BTreeMap<Perm, IBig>,
}

impl IntHeckeElt {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &BTreeMap<Perm, IBig> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Coordinates with respect to one of the bases, keyed by permutation.
pub type Coords = BTreeMap<Perm, LaurentPoly>;

/// Hecke algebra context: group tables, KL data and lazily built derived tables.
pub struct HeckeAlgebra {
    group: Arc<WeylGroup>,
    kl: KLCache,
    dual: OnceLock<Vec<Sparse>>,
    tilting: OnceLock<Vec<Sparse>>,
    bars: OnceLock<Vec<Sparse>>,
    products: OnceLock<KlProducts>,
    dual_products: OnceLock<DualProducts>,
    preorders: [OnceLock<Preorder>; 3],
}

impl fmt::Debug for HeckeAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeAlgebra({}, n={})", self.group.parabolic(), self.group.n())
    }
}

impl HeckeAlgebra {
    /// The Hecke algebra of `S_n`, building KL data in memory.
    pub fn new(n: usize) -> Self {
        Self::from_cache(KLCache::build(Arc::new(WeylGroup::full(n))))
    }

    /// The Hecke algebra of a standard parabolic subgroup, with its own KL data
    /// and its own longest element.
    pub fn for_parabolic(parabolic: Parabolic) -> Self {
        Self::from_cache(KLCache::build(Arc::new(WeylGroup::new(parabolic))))
    }

    /// Uses `dir` as a persistent KL cache location.
    pub fn with_cache_dir(n: usize, dir: &Path) -> Result<Self> {
        Ok(Self::from_cache(KLCache::load_or_build(dir, Arc::new(WeylGroup::full(n)))?))
    }

    pub fn from_cache(kl: KLCache) -> Self {
        Self {
            group: kl.group().clone(),
            kl,
            dual: OnceLock::new(),
            tilting: OnceLock::new(),
            bars: OnceLock::new(),
            products: OnceLock::new(),
            dual_products: OnceLock::new(),
            preorders: Default::default(),
        }
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn size(&self) -> usize {
        self.group.size()
    }

    pub fn kl_cache(&self) -> &KLCache {
        &self.kl
    }

    pub fn idx(&self, w: &Perm) -> Result<u32> {
        self.group.idx(w)
    }

    // ---- index-level kernels ----

    /// Sparse index vector to an element.
    pub fn elt_from_sparse(&self, x: &[(u32, LaurentPoly)]) -> HeckeElt {
        HeckeElt {
            n: self.n(),
            coords: x.iter().map(|(i, c)| (self.group.element(*i), c.clone())).collect(),
        }
    }

    pub fn sparse_from_elt(&self, a: &HeckeElt) -> Result<Sparse> {
        if a.n != self.n() {
            return Err(Error::RankMismatch(a.n, self.n()));
        }
        let mut v: Sparse = a
            .coords
            .iter()
            .map(|(w, c)| Ok((self.group.idx(w)?, c.clone())))
            .collect::<Result<_>>()?;
        v.sort_by_key(|t| t.0);
        Ok(v)
    }

    pub fn coords_from_sparse(&self, x: &[(u32, LaurentPoly)]) -> Coords {
        x.iter().map(|(i, c)| (self.group.element(*i), c.clone())).collect()
    }

    /// `a * H_s` for `s = gens()[k]`, in place on a dense vector.
    fn dense_mul_gen_right(&self, a: &[LaurentPoly], k: usize) -> Vec<LaurentPoly> {
        let g = &self.group;
        let mut out = vec![LaurentPoly::zero(); a.len()];
        for (x, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = x as u32;
            let xs = g.mul_gen_right(x, k);
            out[xs as usize] += c;
            if g.length(xs) < g.length(x) {
                out[x as usize] += c.mul_v_inv_minus_v();
            }
        }
        out
    }

    fn dense_mul_gen_left(&self, a: &[LaurentPoly], k: usize) -> Vec<LaurentPoly> {
        let g = &self.group;
        let mut out = vec![LaurentPoly::zero(); a.len()];
        for (x, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = x as u32;
            let sx = g.mul_gen_left(x, k);
            out[sx as usize] += c;
            if g.length(sx) < g.length(x) {
                out[x as usize] += c.mul_v_inv_minus_v();
            }
        }
        out
    }

    /// Product of sparse vectors in standard coordinates.
    pub fn mul_sparse(&self, a: &[(u32, LaurentPoly)], b: &[(u32, LaurentPoly)]) -> Sparse {
        let size = self.size();
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let g = &self.group;
        // Expand along whichever factor has the smaller support.
        let right = b.len() <= a.len();
        let (fixed, expand) = if right { (a, b) } else { (b, a) };
        // Prefix closure of the expanded support under removal of a descent.
        let mut needed = vec![false; size];
        for (y, _) in expand {
            let mut y = *y;
            while !needed[y as usize] {
                needed[y as usize] = true;
                let d = if right { g.first_right_descent(y) } else { g.first_left_descent(y) };
                match d {
                    Some(k) => y = if right { g.mul_gen_right(y, k) } else { g.mul_gen_left(y, k) },
                    None => break,
                }
            }
        }
        let mut partial: Vec<Option<Vec<LaurentPoly>>> = vec![None; size];
        partial[0] = Some(to_dense(size, fixed));
        let mut result = vec![LaurentPoly::zero(); size];
        let coeff_of: BTreeMap<u32, &LaurentPoly> = expand.iter().map(|(i, c)| (*i, c)).collect();
        for y in 0..size as u32 {
            if !needed[y as usize] {
                continue;
            }
            if y != 0 {
                let (k, prev) = if right {
                    let k = g.first_right_descent(y).expect("non-identity");
                    (k, g.mul_gen_right(y, k))
                } else {
                    let k = g.first_left_descent(y).expect("non-identity");
                    (k, g.mul_gen_left(y, k))
                };
                let base = partial[prev as usize].as_ref().expect("prefix computed first");
                let next = if right { self.dense_mul_gen_right(base, k) } else { self.dense_mul_gen_left(base, k) };
                partial[y as usize] = Some(next);
            }
            if let Some(c) = coeff_of.get(&y) {
                let p = partial[y as usize].as_ref().expect("just computed");
                for (i, a) in p.iter().enumerate() {
                    if !a.is_zero() {
                        result[i] += *c * a;
                    }
                }
            }
        }
        from_dense(&mut result)
    }

    /// Triangular change of basis. `basis(w)` must have coefficient 1 at `w`
    /// and otherwise be supported on indices greater than `w` (`ascending`)
    /// or smaller than `w` (descending).
    fn triangular_coords<'a>(
        &self,
        a: &[(u32, LaurentPoly)],
        basis: impl Fn(usize) -> &'a Sparse,
        ascending: bool,
    ) -> Sparse {
        let size = self.size();
        let mut residual = to_dense(size, a);
        let mut out = Vec::new();
        let order: Box<dyn Iterator<Item = usize>> =
            if ascending { Box::new(0..size) } else { Box::new((0..size).rev()) };
        for w in order {
            if residual[w].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut residual[w]);
            for (y, b) in basis(w) {
                if *y as usize != w {
                    residual[*y as usize] -= &(&c * b);
                }
            }
            out.push((w as u32, c));
        }
        out.sort_by_key(|t| t.0);
        out
    }

    /// Standard coordinates of the KL basis element by index.
    pub fn kl_sparse(&self, w: u32) -> &Sparse {
        self.kl.element(w)
    }

    pub fn dual_sparse(&self, w: u32) -> &Sparse {
        &self.dual_basis()[w as usize]
    }

    pub fn tilting_sparse(&self, w: u32) -> &Sparse {
        &self.tilting_basis()[w as usize]
    }

    fn dual_basis(&self) -> &Vec<Sparse> {
        self.dual.get_or_init(|| {
            let g = &self.group;
            let w0 = g.longest();
            let hw0 = vec![(w0, LaurentPoly::one())];
            (0..self.size() as u32)
                .into_par_iter()
                .map(|w| {
                    let ww0 = g.compose(w, w0);
                    let b: Sparse = self.kl.element(ww0).iter().map(|(y, c)| (*y, c.beta_scalar())).collect();
                    self.mul_sparse(&b, &hw0)
                })
                .collect()
        })
    }

    fn tilting_basis(&self) -> &Vec<Sparse> {
        self.tilting.get_or_init(|| {
            let g = &self.group;
            let w0 = g.longest();
            let hw0 = vec![(w0, LaurentPoly::one())];
            (0..self.size() as u32)
                .into_par_iter()
                .map(|w| self.mul_sparse(&hw0, self.kl.element(g.compose(w0, w))))
                .collect()
        })
    }

    /// `bar(H_w) = (H_{w^-1})^-1`, built as a product of `H_s^-1 = H_s + v - v^-1`.
    fn bar_basis(&self) -> &Vec<Sparse> {
        self.bars.get_or_init(|| {
            let g = &self.group;
            let size = self.size();
            let mut out: Vec<Sparse> = Vec::with_capacity(size);
            out.push(vec![(0, LaurentPoly::one())]);
            for w in 1..size as u32 {
                let k = g.first_right_descent(w).expect("non-identity");
                let prev = to_dense(size, &out[g.mul_gen_right(w, k) as usize]);
                let mut next = self.dense_mul_gen_right(&prev, k);
                for (i, c) in prev.iter().enumerate() {
                    if !c.is_zero() {
                        next[i] -= &c.mul_v_inv_minus_v();
                    }
                }
                out.push(from_dense(&mut next));
            }
            out
        })
    }

    pub fn kl_coords_sparse(&self, a: &[(u32, LaurentPoly)]) -> Sparse {
        self.triangular_coords(a, |w| self.kl.element(w as u32), false)
    }

    pub fn dual_coords_sparse(&self, a: &[(u32, LaurentPoly)]) -> Sparse {
        self.triangular_coords(a, |w| &self.dual_basis()[w], true)
    }

    pub fn tilting_coords_sparse(&self, a: &[(u32, LaurentPoly)]) -> Sparse {
        self.triangular_coords(a, |w| &self.tilting_basis()[w], true)
    }

    // ---- public element-level API ----

    pub fn standard(&self, w: &Perm) -> Result<HeckeElt> {
        self.idx(w)?;
        Ok(HeckeElt::standard(w))
    }

    pub fn mul(&self, a: &HeckeElt, b: &HeckeElt) -> Result<HeckeElt> {
        let (sa, sb) = (self.sparse_from_elt(a)?, self.sparse_from_elt(b)?);
        Ok(self.elt_from_sparse(&self.mul_sparse(&sa, &sb)))
    }

    /// `H_w = sum_y h_{w,y} H_y`.
    pub fn kl_element(&self, w: &Perm) -> Result<HeckeElt> {
        Ok(self.elt_from_sparse(self.kl.element(self.idx(w)?)))
    }

    pub fn kl_poly(&self, x: &Perm, y: &Perm) -> Result<LaurentPoly> {
        self.kl.kl_poly(x, y)
    }

    pub fn mu(&self, x: &Perm, y: &Perm) -> Result<IBig> {
        Ok(self.kl.mu(self.idx(x)?, self.idx(y)?))
    }

    pub fn to_kl_coords(&self, a: &HeckeElt) -> Result<Coords> {
        Ok(self.coords_from_sparse(&self.kl_coords_sparse(&self.sparse_from_elt(a)?)))
    }

    /// `beta(H_{w w0}) H_{w0}`.
    pub fn dual_kl_element(&self, w: &Perm) -> Result<HeckeElt> {
        Ok(self.elt_from_sparse(self.dual_sparse(self.idx(w)?)))
    }

    pub fn to_dual_kl_coords(&self, a: &HeckeElt) -> Result<Coords> {
        Ok(self.coords_from_sparse(&self.dual_coords_sparse(&self.sparse_from_elt(a)?)))
    }

    /// `H_{w0} * H_{w0 w}` (KL basis element on the right).
    pub fn tilting_element(&self, w: &Perm) -> Result<HeckeElt> {
        Ok(self.elt_from_sparse(self.tilting_sparse(self.idx(w)?)))
    }

    pub fn to_tilting_coords(&self, a: &HeckeElt) -> Result<Coords> {
        Ok(self.coords_from_sparse(&self.tilting_coords_sparse(&self.sparse_from_elt(a)?)))
    }

    /// Coefficient of `H_e`.
    pub fn tau(&self, a: &HeckeElt) -> LaurentPoly {
        a.coeff(&Perm::identity(a.n))
    }

    /// `tau(a b) = sum_x a_x b_{x^-1}`.
    pub fn form(&self, a: &HeckeElt, b: &HeckeElt) -> Result<LaurentPoly> {
        if a.n != b.n {
            return Err(Error::RankMismatch(a.n, b.n));
        }
        Ok(a.coords.iter().map(|(x, c)| c * &b.coeff(&x.inverse())).sum())
    }

    /// Anti-automorphism `H_w -> H_{w^-1}`, fixing `v`.
    pub fn star(&self, a: &HeckeElt) -> HeckeElt {
        HeckeElt { n: a.n, coords: a.coords.iter().map(|(w, c)| (w.inverse(), c.clone())).collect() }
    }

    /// Ring involution `v -> -v^-1`, fixing every `H_w`.
    pub fn beta(&self, a: &HeckeElt) -> HeckeElt {
        a.map_coeffs(LaurentPoly::beta_scalar)
    }

    /// Ring involution `v -> v^-1`, `H_w -> (H_{w^-1})^-1`.
    pub fn bar(&self, a: &HeckeElt) -> Result<HeckeElt> {
        let size = self.size();
        let bars = self.bar_basis();
        let mut acc = vec![LaurentPoly::zero(); size];
        for (w, c) in self.sparse_from_elt(a)? {
            axpy_dense(&mut acc, &c.bar(), &bars[w as usize]);
        }
        Ok(self.elt_from_sparse(&from_dense(&mut acc)))
    }

    pub fn specialize(&self, a: &HeckeElt) -> IntHeckeElt {
        a.specialize()
    }

    /// KL-basis coordinates of `H_x H_y` computed by multiplying in standard coordinates.
    pub fn kl_product_direct(&self, x: u32, y: u32) -> Sparse {
        self.kl_coords_sparse(&self.mul_sparse(self.kl.element(x), self.kl.element(y)))
    }

    /// Coefficient of `H_w` in `H_x H_y` (KL basis throughout).
    pub fn gamma(&self, x: &Perm, y: &Perm, w: &Perm) -> Result<LaurentPoly> {
        let p = self.kl_product_direct(self.idx(x)?, self.idx(y)?);
        Ok(sparse_get(&p, self.idx(w)?))
    }

    /// Coefficient of the dual element `w` in the product of dual elements `x`, `y`.
    pub fn gamma_hat(&self, x: &Perm, y: &Perm, w: &Perm) -> Result<LaurentPoly> {
        let p = self.mul_sparse(self.dual_sparse(self.idx(x)?), self.dual_sparse(self.idx(y)?));
        Ok(sparse_get(&self.dual_coords_sparse(&p), self.idx(w)?))
    }

    /// Dual-basis coordinates of (dual `w`) * (KL `x`).
    pub fn dual_times_kl(&self, w: u32, x: u32) -> Sparse {
        self.dual_coords_sparse(&self.mul_sparse(self.dual_sparse(w), self.kl.element(x)))
    }

    /// Dual-basis coordinates of (KL `x`) * (dual `w`).
    pub fn kl_times_dual(&self, x: u32, w: u32) -> Sparse {
        self.dual_coords_sparse(&self.mul_sparse(self.kl.element(x), self.dual_sparse(w)))
    }

    /// Coefficient of dual `y` in (dual `w`)(KL `x`).
    pub fn m_coeff(&self, w: &Perm, x: &Perm, y: &Perm) -> Result<LaurentPoly> {
        Ok(sparse_get(&self.dual_times_kl(self.idx(w)?, self.idx(x)?), self.idx(y)?))
    }

    /// Coefficient of dual `y` in (KL `x`)(dual `w`).
    pub fn n_coeff(&self, x: &Perm, w: &Perm, y: &Perm) -> Result<LaurentPoly> {
        Ok(sparse_get(&self.kl_times_dual(self.idx(x)?, self.idx(w)?), self.idx(y)?))
    }

    /// All KL-basis products, built through the left action of simple
    /// reflections on KL coordinates.
    pub fn kl_products(&self) -> &KlProducts {
        self.products.get_or_init(|| KlProducts::build(&self.kl))
    }

    /// All (dual `w`)(KL `x`) products in dual coordinates.
    pub fn dual_products(&self) -> &DualProducts {
        self.dual_products.get_or_init(|| DualProducts::from_kl_products(&self.group, self.kl_products()))
    }

    /// The left, right or two-sided KL preorder, built once.
    pub fn preorder(&self, order: Order) -> &Preorder {
        let slot = match order {
            Order::Left => 0,
            Order::Right => 1,
            Order::TwoSided => 2,
        };
        self.preorders[slot].get_or_init(|| Preorder::new(&self.kl, order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Perm {
        Perm::parse(s, s.len()).unwrap()
    }

    fn elt(n: usize, terms: &[(&str, &str)]) -> HeckeElt {
        HeckeElt::from_coords(n, terms.iter().map(|(w, c)| (p(w), lp(c)))).unwrap()
    }

    #[test]
    fn quadratic_relation() {
        let h = HeckeAlgebra::new(2);
        let hs = HeckeElt::standard(&p("21"));
        let sq = h.mul(&hs, &hs).unwrap();
        assert_eq!(sq, elt(2, &[("12", "1"), ("21", "v^-1-v")]));
    }

    #[test]
    fn s2_bases() {
        let h = HeckeAlgebra::new(2);
        assert_eq!(h.kl_element(&p("21")).unwrap(), elt(2, &[("21", "1"), ("12", "v")]));
        assert_eq!(h.dual_kl_element(&p("12")).unwrap(), elt(2, &[("12", "1"), ("21", "-v")]));
        assert_eq!(h.dual_kl_element(&p("21")).unwrap(), elt(2, &[("21", "1")]));
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let h = HeckeAlgebra::new(3);
        let a = HeckeElt::standard(&p("21"));
        assert!(matches!(h.mul(&a, &a), Err(Error::RankMismatch(2, 3))));
        assert!(HeckeElt::from_coords(3, [(p("21"), lp("1"))]).is_err());
    }

    #[test]
    fn kl_elements_are_bar_invariant() {
        for n in 1..=4 {
            let h = HeckeAlgebra::new(n);
            for w in Perm::all(n) {
                let c = h.kl_element(&w).unwrap();
                assert_eq!(h.bar(&c).unwrap(), c, "{w}");
            }
        }
    }

    #[test]
    fn bar_inverts_standard_elements() {
        let h = HeckeAlgebra::new(3);
        for w in Perm::all(3) {
            let b = h.bar(&HeckeElt::standard(&w)).unwrap();
            let prod = h.mul(&b, &HeckeElt::standard(&w.inverse())).unwrap();
            assert_eq!(prod, HeckeElt::standard(&Perm::identity(3)));
        }
    }

    #[test]
    fn coordinate_round_trips() {
        let h = HeckeAlgebra::new(4);
        let a = elt(4, &[("2143", "v^2-3"), ("1324", "v^-1"), ("4321", "7"), ("1234", "1+v")]);
        let rebuild = |coords: &Coords, f: &dyn Fn(&Perm) -> HeckeElt| {
            coords.iter().fold(HeckeElt::zero(4), |acc, (w, c)| &acc + &f(w).scale(c))
        };
        let kl = h.to_kl_coords(&a).unwrap();
        assert_eq!(rebuild(&kl, &|w| h.kl_element(w).unwrap()), a);
        let du = h.to_dual_kl_coords(&a).unwrap();
        assert_eq!(rebuild(&du, &|w| h.dual_kl_element(w).unwrap()), a);
        let ti = h.to_tilting_coords(&a).unwrap();
        assert_eq!(rebuild(&ti, &|w| h.tilting_element(w).unwrap()), a);
    }

    #[test]
    fn form_matches_product_trace() {
        let h = HeckeAlgebra::new(3);
        let a = elt(3, &[("213", "v"), ("231", "2"), ("123", "v^-1")]);
        let b = elt(3, &[("312", "1+v"), ("213", "-3"), ("321", "v^4")]);
        assert_eq!(h.form(&a, &b).unwrap(), h.tau(&h.mul(&a, &b).unwrap()));
    }

    #[test]
    fn parabolic_algebra_has_its_own_longest_element() {
        let j = Parabolic::new(3, [1]).unwrap();
        let h = HeckeAlgebra::for_parabolic(j);
        assert_eq!(h.size(), 2);
        let e = Perm::identity(3);
        // same shape as in S_2: dual of e is H_e - v H_s
        assert_eq!(h.dual_kl_element(&e).unwrap(), elt(3, &[("123", "1"), ("213", "-v")]));
    }

    fn arb_elt(n: usize) -> impl Strategy<Value = HeckeElt> {
        let all = Perm::all(n);
        let m = all.len();
        prop::collection::vec((0..m, -3i32..4, -3i64..4), 0..5).prop_map(move |ts| {
            HeckeElt::from_coords(n, ts.into_iter().map(|(i, e, c)| (all[i], LaurentPoly::monomial(c, e)))).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn algebra_axioms(a in arb_elt(3), b in arb_elt(3), c in arb_elt(3)) {
            let h = HeckeAlgebra::new(3);
            let ab_c = h.mul(&h.mul(&a, &b).unwrap(), &c).unwrap();
            let a_bc = h.mul(&a, &h.mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert_eq!(h.mul(&a, &(&b + &c)).unwrap(), &h.mul(&a, &b).unwrap() + &h.mul(&a, &c).unwrap());
        }

        #[test]
        fn involutions_respect_products(a in arb_elt(3), b in arb_elt(3)) {
            let h = HeckeAlgebra::new(3);
            let ab = h.mul(&a, &b).unwrap();
            prop_assert_eq!(h.star(&ab), h.mul(&h.star(&b), &h.star(&a)).unwrap());
            prop_assert_eq!(h.beta(&ab), h.mul(&h.beta(&a), &h.beta(&b)).unwrap());
            prop_assert_eq!(h.bar(&ab).unwrap(), h.mul(&h.bar(&a).unwrap(), &h.bar(&b).unwrap()).unwrap());
            prop_assert_eq!(h.form(&a, &b).unwrap(), h.form(&b, &a).unwrap());
        }
    }
}
