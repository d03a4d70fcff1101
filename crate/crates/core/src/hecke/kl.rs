//! Kazhdan-Lusztig polynomials `h_{x,y}` and their on-disk cache.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dashu_int::IBig;
use serde::{Deserialize, Serialize};

use super::{axpy_dense, from_dense, Sparse};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::weyl::{Perm, WeylGroup};

pub const CACHE_VERSION: u32 = 1;

/// KL basis elements of one group, in standard coordinates.
#[derive(Debug)]
pub struct KLCache {
    group: Arc<WeylGroup>,
    /// `elements[w]` lists `(y, h_{w,y})` for `y <= w`, ascending index.
    elements: Vec<Sparse>,
    /// `(z, mu(z, w))` for `z < w` with nonzero `mu`.
    mu_below: Vec<Vec<(u32, IBig)>>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    n: usize,
    h: BTreeMap<String, LaurentPoly>,
}

/// How often `deg h_{x,y}` attains the bound `l(x) - l(y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub nonzero_pairs: usize,
    pub degree_equals_length_difference: usize,
}

impl KLCache {
    /// Builds `H_w` recursively: `H_s * H_{sw} = H_w + sum mu(z, sw) H_z`
    /// over `z < sw` with `sz < z`.
    pub fn build(group: Arc<WeylGroup>) -> Self {
        let size = group.size();
        let mut elements: Vec<Sparse> = Vec::with_capacity(size);
        let mut mu_below: Vec<Vec<(u32, IBig)>> = Vec::with_capacity(size);
        let mut scratch = vec![LaurentPoly::zero(); size];
        for w in 0..size as u32 {
            if w == group.identity() {
                elements.push(vec![(w, LaurentPoly::one())]);
                mu_below.push(Vec::new());
                continue;
            }
            let k = group.first_left_descent(w).expect("non-identity has a left descent");
            let sw = group.mul_gen_left(w, k);
            // (H_s + v) * C_{sw}
            for (y, c) in &elements[sw as usize] {
                let sy = group.mul_gen_left(*y, k);
                scratch[sy as usize] += c;
                if group.length(sy) < group.length(*y) {
                    scratch[*y as usize] += c.mul_v_inv_minus_v();
                }
                scratch[*y as usize] += c.shift(1);
            }
            for (z, mu) in &mu_below[sw as usize] {
                if group.length(group.mul_gen_left(*z, k)) < group.length(*z) {
                    axpy_dense(&mut scratch, &LaurentPoly::constant(-mu.clone()), &elements[*z as usize]);
                }
            }
            let elt = from_dense(&mut scratch);
            let mus = elt
                .iter()
                .filter(|(y, _)| *y != w)
                .map(|(y, h)| (*y, h.coeff_at(1)))
                .filter(|(_, m)| !m.is_zero())
                .collect();
            elements.push(elt);
            mu_below.push(mus);
        }
        Self { group, elements, mu_below }
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    /// Standard coordinates of the KL basis element `w`.
    pub fn element(&self, w: u32) -> &Sparse {
        &self.elements[w as usize]
    }

    /// `h_{x,y}` by index.
    pub fn h(&self, x: u32, y: u32) -> LaurentPoly {
        let row = &self.elements[x as usize];
        match row.binary_search_by_key(&y, |t| t.0) {
            Ok(i) => row[i].1.clone(),
            Err(_) => LaurentPoly::zero(),
        }
    }

    /// `h_{x,y}` by permutation.
    pub fn kl_poly(&self, x: &Perm, y: &Perm) -> Result<LaurentPoly> {
        Ok(self.h(self.group.idx(x)?, self.group.idx(y)?))
    }

    /// Symmetrized `mu`: coefficient of `v` in `h_{x,y}` or `h_{y,x}`.
    pub fn mu(&self, x: u32, y: u32) -> IBig {
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        self.mu_below[hi as usize]
            .iter()
            .find(|(z, _)| *z == lo)
            .map(|(_, m)| m.clone())
            .unwrap_or(IBig::ZERO)
    }

    /// `(z, mu(z, w))` for `z < w` with `mu != 0`.
    pub fn mu_below(&self, w: u32) -> &[(u32, IBig)] {
        &self.mu_below[w as usize]
    }

    pub fn degree_statistics(&self) -> DegreeStats {
        let g = &self.group;
        let mut stats = DegreeStats { nonzero_pairs: 0, degree_equals_length_difference: 0 };
        for (x, row) in self.elements.iter().enumerate() {
            for (y, h) in row {
                stats.nonzero_pairs += 1;
                let bound = g.length(x as u32) as i32 - g.length(*y) as i32;
                if h.degree() == Some(bound) {
                    stats.degree_equals_length_difference += 1;
                }
            }
        }
        stats
    }

    /// Structural checks: unit diagonal, support below in Bruhat order,
    /// off-diagonal entries in `v Z[v]` of degree at most the length difference.
    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        if self.elements.len() != g.size() {
            return Err(Error::CacheInvalid(format!("{} of {} elements", self.elements.len(), g.size())));
        }
        for (x, row) in self.elements.iter().enumerate() {
            let x = x as u32;
            let px = g.element(x);
            if self.h(x, x) != LaurentPoly::one() {
                return Err(Error::CacheInvalid(format!("h_({px},{px}) != 1")));
            }
            for (y, h) in row {
                if *y == x {
                    continue;
                }
                let py = g.element(*y);
                if !g.bruhat_leq(*y, x) {
                    return Err(Error::CacheInvalid(format!("h_({px},{py}) nonzero but {py} is not below {px}")));
                }
                let bound = g.length(x) as i32 - g.length(*y) as i32;
                if h.valuation().is_some_and(|v| v < 1) || h.degree().is_some_and(|d| d > bound) {
                    return Err(Error::CacheInvalid(format!("h_({px},{py}) = {h} out of range")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        if !self.group.is_full() {
            return Err(Error::Unsupported("only full symmetric groups are cached".into()));
        }
        let mut h = BTreeMap::new();
        for (x, row) in self.elements.iter().enumerate() {
            let px = self.group.element(x as u32);
            for (y, poly) in row {
                h.insert(format!("{px}|{}", self.group.element(*y)), poly.clone());
            }
        }
        let file = CacheFile { version: CACHE_VERSION, n: self.n(), h };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str, group: Arc<WeylGroup>) -> Result<Self> {
        let file: CacheFile = serde_json::from_str(text)?;
        if file.version != CACHE_VERSION {
            return Err(Error::CacheInvalid(format!("unsupported version {}", file.version)));
        }
        if file.n != group.n() || !group.is_full() {
            return Err(Error::CacheInvalid(format!("cache is for n={}, wanted S_{}", file.n, group.n())));
        }
        let mut rows: Vec<Vec<(u32, LaurentPoly)>> = vec![Vec::new(); group.size()];
        for (key, poly) in file.h {
            let (xs, ys) = key
                .split_once('|')
                .ok_or_else(|| Error::CacheInvalid(format!("bad key {key:?}")))?;
            let x = group.idx(&Perm::parse(xs, file.n)?)?;
            let y = group.idx(&Perm::parse(ys, file.n)?)?;
            if poly.is_zero() {
                return Err(Error::CacheInvalid(format!("zero entry stored at {key:?}")));
            }
            rows[x as usize].push((y, poly));
        }
        for row in &mut rows {
            row.sort_by_key(|t| t.0);
        }
        let mu_below = rows
            .iter()
            .enumerate()
            .map(|(w, row)| {
                row.iter()
                    .filter(|(y, _)| *y as usize != w)
                    .map(|(y, h)| (*y, h.coeff_at(1)))
                    .filter(|(_, m)| !m.is_zero())
                    .collect()
            })
            .collect();
        let cache = Self { group, elements: rows, mu_below };
        cache.validate()?;
        Ok(cache)
    }

    pub fn file_name(n: usize) -> String {
        format!("kl-cache-s{n}.json")
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(Self::file_name(self.n()));
        let tmp = dir.join(format!(".{}.tmp{}", Self::file_name(self.n()), std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_json()?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    pub fn load(dir: &Path, group: Arc<WeylGroup>) -> Result<Self> {
        let path = dir.join(Self::file_name(group.n()));
        Self::from_json(&fs::read_to_string(path)?, group)
    }

    /// Loads the cache file for `S_n` from `dir` if present, otherwise builds
    /// it and writes it there.
    pub fn load_or_build(dir: &Path, group: Arc<WeylGroup>) -> Result<Self> {
        let path = dir.join(Self::file_name(group.n()));
        if path.exists() {
            return Self::load(dir, group);
        }
        let cache = Self::build(group);
        cache.save(dir)?;
        Ok(cache)
    }
}
