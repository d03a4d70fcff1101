//! Robinson-Schensted correspondence by row insertion.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weyl::Perm;

/// A partition, weakly decreasing parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shape(pub Vec<usize>);

impl Shape {
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Dominance order `self <= other`.
    pub fn dominated_by(&self, other: &Shape) -> bool {
        let (mut a, mut b) = (0usize, 0usize);
        for i in 0..self.0.len().max(other.0.len()) {
            a += self.0.get(i).copied().unwrap_or(0);
            b += other.0.get(i).copied().unwrap_or(0);
            if a > b {
                return false;
            }
        }
        true
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Shape> {
        fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Shape>) {
            if rem == 0 {
                out.push(Shape(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                go(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A standard Young tableau, serialized as an array of rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    /// Validates rows strictly increasing, columns strictly increasing,
    /// weakly decreasing row lengths, entries exactly `1..=N`.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let bad = |m: &str| Error::InvalidTableau(format!("{m}: {rows:?}"));
        if rows.iter().any(|r| r.is_empty()) {
            return Err(bad("empty row"));
        }
        if rows.windows(2).any(|w| w[0].len() < w[1].len()) {
            return Err(bad("row lengths increase"));
        }
        if rows.iter().any(|r| r.windows(2).any(|p| p[0] >= p[1])) {
            return Err(bad("row not increasing"));
        }
        for w in rows.windows(2) {
            if w[1].iter().zip(&w[0]).any(|(below, above)| below <= above) {
                return Err(bad("column not increasing"));
            }
        }
        let mut all: Vec<usize> = rows.iter().flatten().copied().collect();
        all.sort_unstable();
        if all.iter().enumerate().any(|(i, &x)| x != i + 1) {
            return Err(bad("entries are not 1..N"));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn shape(&self) -> Shape {
        Shape(self.rows.iter().map(|r| r.len()).collect())
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// All standard tableaux of a given shape, sorted.
    pub fn all_of_shape(shape: &Shape) -> Vec<Tableau> {
        fn go(shape: &[usize], k: usize, n: usize, rows: &mut Vec<Vec<usize>>, out: &mut Vec<Tableau>) {
            if k > n {
                out.push(Tableau { rows: rows.clone() });
                return;
            }
            for r in 0..shape.len() {
                let len = rows[r].len();
                if len < shape[r] && (r == 0 || rows[r - 1].len() > len) {
                    rows[r].push(k);
                    go(shape, k + 1, n, rows, out);
                    rows[r].pop();
                }
            }
        }
        let mut out = Vec::new();
        go(&shape.0, 1, shape.size(), &mut vec![Vec::new(); shape.0.len()], &mut out);
        out.sort();
        out
    }
}

impl TryFrom<Vec<Vec<usize>>> for Tableau {
    type Error = Error;
    fn try_from(rows: Vec<Vec<usize>>) -> Result<Self> {
        Tableau::new(rows)
    }
}

impl From<Tableau> for Vec<Vec<usize>> {
    fn from(t: Tableau) -> Self {
        t.rows
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join(" / "))
    }
}

/// Row-inserts the one-line word of `w`; returns (insertion, recording).
pub fn rs(w: &Perm) -> (Tableau, Tableau) {
    let mut p: Vec<Vec<usize>> = Vec::new();
    let mut q: Vec<Vec<usize>> = Vec::new();
    for (step, &x) in w.one_line().iter().enumerate() {
        let mut x = x as usize;
        let mut r = 0;
        loop {
            if r == p.len() {
                p.push(vec![x]);
                q.push(vec![step + 1]);
                break;
            }
            match p[r].iter().position(|&y| y > x) {
                Some(j) => {
                    std::mem::swap(&mut p[r][j], &mut x);
                    r += 1;
                }
                None => {
                    p[r].push(x);
                    q[r].push(step + 1);
                    break;
                }
            }
        }
    }
    (Tableau { rows: p }, Tableau { rows: q })
}

/// Inverse of [`rs`] by reverse bumping.
pub fn inverse_rs(p: &Tableau, q: &Tableau) -> Result<Perm> {
    if p.shape() != q.shape() {
        return Err(Error::ShapeMismatch);
    }
    let n = p.size();
    let mut prow = p.rows.clone();
    let mut qrow = q.rows.clone();
    let mut line = vec![0u8; n];
    for step in (1..=n).rev() {
        let r = qrow
            .iter()
            .position(|row| row.last() == Some(&step))
            .ok_or_else(|| Error::InvalidTableau(format!("recording tableau lacks a corner {step}")))?;
        qrow[r].pop();
        let mut x = prow[r].pop().expect("shapes agree");
        for rr in (0..r).rev() {
            let j = prow[rr].iter().rposition(|&y| y < x).expect("row above has a smaller entry");
            std::mem::swap(&mut prow[rr][j], &mut x);
        }
        line[step - 1] = x as u8;
        if qrow[r].is_empty() {
            qrow.remove(r);
            prow.remove(r);
        }
    }
    Perm::from_one_line(&line)
}

/// Shape of the Robinson-Schensted tableaux of `w`.
pub fn rs_shape(w: &Perm) -> Shape {
    rs(w).0.shape()
}
