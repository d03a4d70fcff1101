//! Structure constants of the KL basis and products of dual and KL elements.

use dashu_int::IBig;
use rayon::prelude::*;

use super::{from_dense, sparse_get, HeckeAlgebra, KLCache, Sparse};
use crate::error::Result;
use crate::laurent::LaurentPoly;
use crate::weyl::{Perm, WeylGroup};

/// Left action of a simple reflection on KL coordinates: for `su > u`,
/// `H_s H_u = H_{su} + sum mu(z, u) H_z` over `z < u` with `sz < z`.
struct LeftAction {
    /// `up[k][u]` is `None` when `s u < u`.
    up: Vec<Vec<Option<Vec<(u32, IBig)>>>>,
}

impl LeftAction {
    fn new(kl: &KLCache) -> Self {
        let g = kl.group();
        let up = (0..g.gens().len())
            .map(|k| {
                (0..g.size() as u32)
                    .map(|u| {
                        let su = g.mul_gen_left(u, k);
                        if g.length(su) < g.length(u) {
                            return None;
                        }
                        let mut out = vec![(su, IBig::ONE)];
                        out.extend(
                            kl.mu_below(u)
                                .iter()
                                .filter(|(z, _)| g.length(g.mul_gen_left(*z, k)) < g.length(*z))
                                .cloned(),
                        );
                        Some(out)
                    })
                    .collect()
            })
            .collect();
        Self { up }
    }

    fn apply(&self, k: usize, x: &[(u32, LaurentPoly)], scratch: &mut [LaurentPoly]) {
        let q = LaurentPoly::quantum_two();
        for (u, c) in x {
            match &self.up[k][*u as usize] {
                None => scratch[*u as usize] += &q * c,
                Some(list) => {
                    for (w, m) in list {
                        if m.is_one() {
                            scratch[*w as usize] += c;
                        } else {
                            scratch[*w as usize] += c.scale(m);
                        }
                    }
                }
            }
        }
    }
}

/// KL coordinates of every product of two KL basis elements.
pub struct KlProducts {
    size: usize,
    /// `table[x * size + y]` holds the KL coordinates of `H_x H_y`.
    table: Vec<Sparse>,
}

impl KlProducts {
    /// For fixed `y`, `P_x = H_x H_y` satisfies
    /// `P_x = H_s P_{sx} - sum mu(z, sx) P_z` over `z < sx` with `sz < z`.
    pub fn build(kl: &KLCache) -> Self {
        let g = kl.group();
        let size = g.size();
        let action = LeftAction::new(kl);
        let columns: Vec<Vec<Sparse>> = (0..size as u32)
            .into_par_iter()
            .map(|y| {
                let mut col: Vec<Sparse> = Vec::with_capacity(size);
                let mut scratch = vec![LaurentPoly::zero(); size];
                col.push(vec![(y, LaurentPoly::one())]);
                for x in 1..size as u32 {
                    let k = g.first_left_descent(x).expect("non-identity");
                    let sx = g.mul_gen_left(x, k);
                    action.apply(k, &col[sx as usize], &mut scratch);
                    for (z, mu) in kl.mu_below(sx) {
                        if g.length(g.mul_gen_left(*z, k)) < g.length(*z) {
                            let c = LaurentPoly::constant(-mu.clone());
                            for (i, a) in &col[*z as usize] {
                                scratch[*i as usize] += &c * a;
                            }
                        }
                    }
                    col.push(from_dense(&mut scratch));
                }
                col
            })
            .collect();
        let mut table = vec![Vec::new(); size * size];
        for (y, col) in columns.into_iter().enumerate() {
            for (x, v) in col.into_iter().enumerate() {
                table[x * size + y] = v;
            }
        }
        Self { size, table }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// KL coordinates of `H_x H_y`.
    pub fn product(&self, x: u32, y: u32) -> &Sparse {
        &self.table[x as usize * self.size + y as usize]
    }

    /// Coefficient of `H_w` in `H_x H_y`.
    pub fn gamma(&self, x: u32, y: u32, w: u32) -> LaurentPoly {
        sparse_get(self.product(x, y), w)
    }
}

/// Dual coordinates of every product (dual `w`)(KL `x`).
///
/// Uses `coefficient of dual y in (dual w)(KL x) = gamma_{x, y^-1}^{w^-1}`,
/// which follows from the duality `tau(dual_a KL_{b^-1}) = delta_{a,b}` and
/// the trace property of `tau`.
pub struct DualProducts {
    size: usize,
    table: Vec<Sparse>,
}

impl DualProducts {
    pub fn from_kl_products(g: &WeylGroup, kp: &KlProducts) -> Self {
        let size = g.size();
        let mut table: Vec<Sparse> = vec![Vec::new(); size * size];
        for x in 0..size as u32 {
            for z in 0..size as u32 {
                let y = g.inverse(z);
                for (u, c) in kp.product(x, z) {
                    let w = g.inverse(*u);
                    table[w as usize * size + x as usize].push((y, c.clone()));
                }
            }
        }
        for v in &mut table {
            v.sort_by_key(|t| t.0);
        }
        Self { size, table }
    }

    pub fn vector(&self, w: u32, x: u32) -> &Sparse {
        &self.table[w as usize * self.size + x as usize]
    }

    pub fn is_nonzero(&self, w: u32, x: u32) -> bool {
        !self.vector(w, x).is_empty()
    }

    /// The same vector at `v = 1`, zero entries dropped.
    pub fn specialized(&self, w: u32, x: u32) -> Vec<(u32, IBig)> {
        self.vector(w, x)
            .iter()
            .map(|(y, c)| (*y, c.eval_at_one()))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

impl HeckeAlgebra {
    /// The dual structure constant via KL data only:
    /// `sum_{a,z} (-1)^{l(w0 a) - l(z)} beta(h_{w0 z, a} h_{y w0, a}(v^-1) gamma_{x w0, z}^{w w0})`.
    pub fn gamma_hat_via_kl_idx(&self, x: u32, y: u32, w: u32) -> LaurentPoly {
        let g = self.group();
        let kl = self.kl_cache();
        let kp = self.kl_products();
        let w0 = g.longest();
        let lw0 = g.length(w0) as i64;
        let xw0 = g.compose(x, w0);
        let ww0 = g.compose(w, w0);
        let yw0 = g.compose(y, w0);
        let mut acc = LaurentPoly::zero();
        for (a, h_ya) in kl.element(yw0) {
            let l_w0a = lw0 - g.length(*a) as i64;
            for z in 0..g.size() as u32 {
                let h_za = kl.h(g.compose(w0, z), *a);
                if h_za.is_zero() {
                    continue;
                }
                let gam = kp.gamma(xw0, z, ww0);
                if gam.is_zero() {
                    continue;
                }
                let term = &(&h_za * &h_ya.bar()) * &gam;
                if (l_w0a - g.length(z) as i64) % 2 == 0 {
                    acc += term;
                } else {
                    acc -= &term;
                }
            }
        }
        acc.beta_scalar()
    }

    pub fn gamma_hat_via_kl(&self, x: &Perm, y: &Perm, w: &Perm) -> Result<LaurentPoly> {
        Ok(self.gamma_hat_via_kl_idx(self.idx(x)?, self.idx(y)?, self.idx(w)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_agree_with_direct_multiplication() {
        for n in 1..=4 {
            let h = HeckeAlgebra::new(n);
            let kp = h.kl_products();
            for x in 0..h.size() as u32 {
                for y in 0..h.size() as u32 {
                    assert_eq!(kp.product(x, y), &h.kl_product_direct(x, y));
                }
            }
        }
    }

    #[test]
    fn dual_products_agree_with_direct_multiplication() {
        for n in 1..=4 {
            let h = HeckeAlgebra::new(n);
            let dp = h.dual_products();
            for w in 0..h.size() as u32 {
                for x in 0..h.size() as u32 {
                    assert_eq!(dp.vector(w, x), &h.dual_times_kl(w, x));
                }
            }
        }
    }

    #[test]
    fn gamma_hat_formula_on_s3() {
        let h = HeckeAlgebra::new(3);
        let all = Perm::all(3);
        for x in &all {
            for y in &all {
                for w in &all {
                    assert_eq!(h.gamma_hat_via_kl(x, y, w).unwrap(), h.gamma_hat(x, y, w).unwrap(), "{x} {y} {w}");
                }
            }
        }
    }
}
