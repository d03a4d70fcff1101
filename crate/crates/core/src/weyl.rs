//! Permutations, standard parabolic subgroups and indexed group tables.
//!
//! Composition is `(x * y)(i) = x(y(i))`. Right multiplication by the simple
//! transposition `s_i` swaps positions `i, i+1` of the one-line notation; left
//! multiplication swaps the values `i, i+1`.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported rank.
pub const MAX_N: usize = 16;

/// A permutation of `{1..n}` in one-line notation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    n: u8,
    w: [u8; MAX_N],
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_N, "rank {n} out of range");
        let mut w = [0u8; MAX_N];
        for (i, x) in w.iter_mut().enumerate().take(n) {
            *x = i as u8 + 1;
        }
        Self { n: n as u8, w }
    }

    /// Validates that `line` is a permutation of `1..=len`.
    pub fn from_one_line(line: &[u8]) -> Result<Self> {
        let n = line.len();
        if n == 0 || n > MAX_N {
            return Err(Error::Parse(format!("rank {n} out of range")));
        }
        let mut seen = [false; MAX_N + 1];
        let mut w = [0u8; MAX_N];
        for (i, &x) in line.iter().enumerate() {
            if x == 0 || x as usize > n || seen[x as usize] {
                return Err(Error::Parse(format!("not a permutation: {line:?}")));
            }
            seen[x as usize] = true;
            w[i] = x;
        }
        Ok(Self { n: n as u8, w })
    }

    /// The simple transposition `s_i`, `1 <= i < n`.
    pub fn simple(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "simple reflection s{i} out of range for n={n}");
        Self::identity(n).mul_simple_right(i)
    }

    /// Product of simple transpositions, letters in `1..n`.
    pub fn from_word(n: usize, word: &[usize]) -> Result<Self> {
        let mut p = Self::identity(n);
        for &i in word {
            if i == 0 || i >= n {
                return Err(Error::Parse(format!("letter s{i} out of range for n={n}")));
            }
            p = p.mul_simple_right(i);
        }
        Ok(p)
    }

    /// Parses one-line notation (`"2314"`, or comma separated) or a word in
    /// simple reflections (`"s1 s2"`, `"e"` for the identity).
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let t = s.trim();
        if t == "e" {
            return Ok(Self::identity(n));
        }
        if t.starts_with('s') {
            let word = t
                .split(|c: char| c.is_whitespace() || c == '*' || c == ',')
                .filter(|x| !x.is_empty())
                .map(|x| {
                    x.strip_prefix('s')
                        .and_then(|d| d.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad letter {x:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Self::from_word(n, &word);
        }
        let line: Vec<u8> = if t.contains(',') {
            t.split(',')
                .map(|x| x.trim().parse::<u8>().map_err(|_| Error::Parse(format!("bad entry {x:?}"))))
                .collect::<Result<_>>()?
        } else {
            t.chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| Error::Parse(format!("bad digit {c:?}"))))
                .collect::<Result<_>>()?
        };
        if line.len() != n {
            return Err(Error::Parse(format!("{s:?} has rank {} but n={n}", line.len())));
        }
        Self::from_one_line(&line)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn one_line(&self) -> &[u8] {
        &self.w[..self.n as usize]
    }

    /// Image of `i` (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.w[i - 1] as usize
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n, other.n, "rank mismatch in composition");
        let mut w = [0u8; MAX_N];
        for i in 0..self.n as usize {
            w[i] = self.w[other.w[i] as usize - 1];
        }
        Perm { n: self.n, w }
    }

    pub fn inverse(&self) -> Perm {
        let mut w = [0u8; MAX_N];
        for i in 0..self.n as usize {
            w[self.w[i] as usize - 1] = i as u8 + 1;
        }
        Perm { n: self.n, w }
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let l = self.one_line();
        let mut c = 0;
        for i in 0..l.len() {
            for j in i + 1..l.len() {
                if l[i] > l[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn mul_simple_right(&self, i: usize) -> Perm {
        let mut p = *self;
        p.w.swap(i - 1, i);
        p
    }

    pub fn mul_simple_left(&self, i: usize) -> Perm {
        let mut p = *self;
        for x in p.w.iter_mut().take(self.n as usize) {
            if *x as usize == i {
                *x = i as u8 + 1;
            } else if *x as usize == i + 1 {
                *x = i as u8;
            }
        }
        p
    }

    /// `l(w s_i) < l(w)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.w[i - 1] > self.w[i]
    }

    /// `l(s_i w) < l(w)`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        self.inverse().has_right_descent(i)
    }

    pub fn right_descents(&self) -> Vec<usize> {
        (1..self.n()).filter(|&i| self.has_right_descent(i)).collect()
    }

    pub fn left_descents(&self) -> Vec<usize> {
        let inv = self.inverse();
        (1..self.n()).filter(|&i| inv.has_right_descent(i)).collect()
    }

    /// Lexicographically least reduced word.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut x = *self;
        while let Some(i) = (1..x.n()).find(|&i| x.has_left_descent(i)) {
            word.push(i);
            x = x.mul_simple_left(i);
        }
        word
    }

    pub fn is_identity(&self) -> bool {
        self.one_line().iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).is_identity()
    }

    pub fn longest(n: usize) -> Perm {
        let mut p = Self::identity(n);
        p.w[..n].reverse();
        p
    }

    /// Bruhat order via the rank-matrix criterion: `x <= y` iff for all
    /// `i, k`, `#{a <= i : x(a) >= k} <= #{a <= i : y(a) >= k}`.
    pub fn bruhat_leq(&self, other: &Perm) -> bool {
        let n = self.n();
        assert_eq!(n, other.n(), "rank mismatch in Bruhat comparison");
        for k in 1..=n {
            let (mut cx, mut cy) = (0, 0);
            for i in 0..n {
                cx += (self.w[i] as usize >= k) as i32;
                cy += (other.w[i] as usize >= k) as i32;
                if cx > cy {
                    return false;
                }
            }
        }
        true
    }

    /// The fixed total order: by length, then lexicographically by one-line notation.
    pub fn cmp_length_lex(&self, other: &Perm) -> Ordering {
        self.length().cmp(&other.length()).then_with(|| self.cmp(other))
    }

    /// All permutations of rank `n` in the fixed total order.
    pub fn all(n: usize) -> Vec<Perm> {
        WeylGroup::full(n).elements().to_vec()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 9 {
            for &x in self.one_line() {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.one_line().iter().map(|x| x.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let n = if s.contains(',') { s.split(',').count() } else { s.chars().count() };
        Perm::parse(&s, n).map_err(serde::de::Error::custom)
    }
}

/// Which side a multiplication or order refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// A standard parabolic subgroup of `S_n`, given by a set of simple reflections.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Parabolic {
    n: usize,
    gens: Vec<usize>,
}

impl Parabolic {
    pub fn new(n: usize, gens: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut gens: Vec<usize> = gens.into_iter().collect();
        gens.sort_unstable();
        gens.dedup();
        if let Some(&bad) = gens.iter().find(|&&i| i == 0 || i >= n) {
            return Err(Error::Parse(format!("s{bad} out of range for n={n}")));
        }
        Ok(Self { n, gens })
    }

    pub fn full(n: usize) -> Self {
        Self { n, gens: (1..n).collect() }
    }

    /// All `2^(n-1)` standard parabolic subgroups, ordered by bitmask.
    pub fn all_standard(n: usize) -> Vec<Parabolic> {
        (0u32..1 << (n - 1))
            .map(|mask| Self { n, gens: (1..n).filter(|i| mask >> (i - 1) & 1 == 1).collect() })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    /// Maximal intervals of positions permuted among themselves, 1-based inclusive.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = 1;
        for i in 1..=self.n {
            if i == self.n || !self.gens.contains(&i) {
                out.push((start, i));
                start = i + 1;
            }
        }
        out
    }

    pub fn contains(&self, w: &Perm) -> bool {
        self.blocks()
            .iter()
            .all(|&(a, b)| (a..=b).all(|i| (a..=b).contains(&w.apply(i))))
    }

    pub fn longest_element(&self) -> Perm {
        let mut line: Vec<u8> = (1..=self.n as u8).collect();
        for (a, b) in self.blocks() {
            line[a - 1..b].reverse();
        }
        Perm::from_one_line(&line).expect("block reversal is a permutation")
    }

    /// Minimal-length representatives of the cosets `w W'` (`Side::Right`
    /// factor) or `W' w` (`Side::Left` factor), in the fixed total order.
    pub fn minimal_coset_reps(&self, side: Side) -> Vec<Perm> {
        Perm::all(self.n)
            .into_iter()
            .filter(|w| {
                self.gens.iter().all(|&i| match side {
                    Side::Right => !w.has_right_descent(i),
                    Side::Left => !w.has_left_descent(i),
                })
            })
            .collect()
    }

    /// Order of the subgroup.
    pub fn order(&self) -> usize {
        self.blocks().iter().map(|(a, b)| (1..=b - a + 1).product::<usize>()).product()
    }
}

impl fmt::Display for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(|i| format!("s{i}")).collect();
        write!(f, "<{}>", g.join(","))
    }
}

/// Index tables for a standard parabolic subgroup of `S_n` (possibly all of it).
///
/// Elements are numbered in the fixed total order (length, then one-line lex),
/// so index 0 is the identity and the last index is the longest element.
#[derive(Debug)]
pub struct WeylGroup {
    parabolic: Parabolic,
    elements: Vec<Perm>,
    index: HashMap<Perm, u32>,
    lengths: Vec<u32>,
    inverses: Vec<u32>,
    /// `right[k][i]` is the index of `elements[i] * s_{gens[k]}`.
    right: Vec<Vec<u32>>,
    left: Vec<Vec<u32>>,
}

impl WeylGroup {
    pub fn full(n: usize) -> Self {
        Self::new(Parabolic::full(n))
    }

    pub fn new(parabolic: Parabolic) -> Self {
        let n = parabolic.n();
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        let mut queue = VecDeque::from([Perm::identity(n)]);
        seen.insert(Perm::identity(n), ());
        while let Some(x) = queue.pop_front() {
            for &i in parabolic.gens() {
                let y = x.mul_simple_right(i);
                if seen.insert(y, ()).is_none() {
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_keys().collect();
        elements.sort_by(|a, b| a.cmp_length_lex(b));
        let index: HashMap<Perm, u32> = elements.iter().enumerate().map(|(i, p)| (*p, i as u32)).collect();
        let lengths = elements.iter().map(|p| p.length() as u32).collect();
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let right = parabolic
            .gens()
            .iter()
            .map(|&s| elements.iter().map(|p| index[&p.mul_simple_right(s)]).collect())
            .collect();
        let left = parabolic
            .gens()
            .iter()
            .map(|&s| elements.iter().map(|p| index[&p.mul_simple_left(s)]).collect())
            .collect();
        Self { parabolic, elements, index, lengths, inverses, right, left }
    }

    pub fn n(&self) -> usize {
        self.parabolic.n()
    }

    pub fn parabolic(&self) -> &Parabolic {
        &self.parabolic
    }

    pub fn is_full(&self) -> bool {
        self.parabolic.gens().len() + 1 == self.n()
    }

    /// Simple reflections generating the group, as letters `i` of `s_i`.
    pub fn gens(&self) -> &[usize] {
        self.parabolic.gens()
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> Perm {
        self.elements[i as usize]
    }

    pub fn index_of(&self, p: &Perm) -> Option<u32> {
        self.index.get(p).copied()
    }

    pub fn idx(&self, p: &Perm) -> Result<u32> {
        if p.n() != self.n() {
            return Err(Error::RankMismatch(p.n(), self.n()));
        }
        self.index_of(p).ok_or_else(|| Error::NotInGroup(p.to_string()))
    }

    pub fn length(&self, i: u32) -> u32 {
        self.lengths[i as usize]
    }

    pub fn inverse(&self, i: u32) -> u32 {
        self.inverses[i as usize]
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn longest(&self) -> u32 {
        self.elements.len() as u32 - 1
    }

    /// Index of `x * s` where `s = s_{gens[k]}`.
    pub fn mul_gen_right(&self, x: u32, k: usize) -> u32 {
        self.right[k][x as usize]
    }

    /// Index of `s * x` where `s = s_{gens[k]}`.
    pub fn mul_gen_left(&self, x: u32, k: usize) -> u32 {
        self.left[k][x as usize]
    }

    /// Position in `gens()` of a simple reflection letter.
    pub fn gen_position(&self, letter: usize) -> Option<usize> {
        self.gens().iter().position(|&i| i == letter)
    }

    /// A left descent `k` of `x` (as position in `gens()`), if any.
    pub fn first_left_descent(&self, x: u32) -> Option<usize> {
        (0..self.gens().len()).find(|&k| self.length(self.mul_gen_left(x, k)) < self.length(x))
    }

    pub fn first_right_descent(&self, x: u32) -> Option<usize> {
        (0..self.gens().len()).find(|&k| self.length(self.mul_gen_right(x, k)) < self.length(x))
    }

    /// Index of `x * y` (both in the group).
    pub fn compose(&self, x: u32, y: u32) -> u32 {
        self.index[&self.element(x).compose(&self.element(y))]
    }

    pub fn bruhat_leq(&self, x: u32, y: u32) -> bool {
        self.lengths[x as usize] <= self.lengths[y as usize] && self.element(x).bruhat_leq(&self.element(y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Perm {
        Perm::parse(s, s.len()).unwrap()
    }

    #[test]
    fn s3_conventions() {
        let s = Perm::simple(3, 1);
        let t = Perm::simple(3, 2);
        assert_eq!(s, p("213"));
        assert_eq!(t, p("132"));
        assert_eq!(s.compose(&t), p("231"));
        assert_eq!(t.compose(&s), p("312"));
        assert_eq!(Perm::parse("s1 s2", 3).unwrap(), p("231"));
        assert_eq!(Perm::longest(3), p("321"));
        assert_eq!(Perm::parse("e", 3).unwrap(), Perm::identity(3));
        assert_eq!(p("231").left_descents(), vec![1]);
        assert_eq!(p("231").right_descents(), vec![2]);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Perm::parse("2214", 4).is_err());
        assert!(Perm::parse("231", 4).is_err());
        assert!(Perm::parse("s4", 4).is_err());
        assert!(Perm::parse("s1 x2", 4).is_err());
    }

    #[test]
    fn group_tables() {
        let g = WeylGroup::full(4);
        assert_eq!(g.size(), 24);
        assert_eq!(g.element(0), Perm::identity(4));
        assert_eq!(g.element(g.longest()), Perm::longest(4));
        for i in 0..24u32 {
            assert_eq!(g.inverse(g.inverse(i)), i);
            for k in 0..3 {
                let x = g.element(i);
                assert_eq!(g.element(g.mul_gen_right(i, k)), x.mul_simple_right(k + 1));
                assert_eq!(g.element(g.mul_gen_left(i, k)), x.mul_simple_left(k + 1));
            }
        }
        let pg = WeylGroup::new(Parabolic::new(4, [1, 3]).unwrap());
        assert_eq!(pg.size(), 4);
        assert_eq!(pg.element(pg.longest()), p("2143"));
    }

    #[test]
    fn parabolics() {
        let all = Parabolic::all_standard(4);
        assert_eq!(all.len(), 8);
        let j = Parabolic::new(5, [1, 2, 4]).unwrap();
        assert_eq!(j.blocks(), vec![(1, 3), (4, 5)]);
        assert_eq!(j.longest_element(), p("32154"));
        assert_eq!(j.order(), 12);
        assert_eq!(WeylGroup::new(j.clone()).size(), 12);
        assert!(j.contains(&p("31254")));
        assert!(!j.contains(&p("13425")));
        let reps = j.minimal_coset_reps(Side::Right);
        assert_eq!(reps.len(), 120 / 12);
    }

    /// Oracle: `x <= y` iff some reduced word of `y` contains a subword for `x`.
    fn bruhat_by_subwords(x: &Perm, y: &Perm) -> bool {
        let word = y.reduced_word();
        let n = x.n();
        (0u32..1 << word.len()).any(|mask| {
            let sub: Vec<usize> = word.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &l)| l).collect();
            Perm::from_word(n, &sub).unwrap() == *x
        })
    }

    #[test]
    fn bruhat_matches_subword_criterion() {
        for n in 1..=4 {
            let all = Perm::all(n);
            for x in &all {
                for y in &all {
                    assert_eq!(x.bruhat_leq(y), bruhat_by_subwords(x, y), "{x} {y}");
                }
            }
        }
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
        Just((1..=n as u8).collect::<Vec<u8>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_one_line(&v).unwrap())
    }

    proptest! {
        #[test]
        fn group_laws(x in arb_perm(6), y in arb_perm(6), z in arb_perm(6)) {
            prop_assert_eq!(x.compose(&y).compose(&z), x.compose(&y.compose(&z)));
            prop_assert!(x.compose(&x.inverse()).is_identity());
            prop_assert_eq!(x.inverse().length(), x.length());
            prop_assert_eq!(Perm::from_word(6, &x.reduced_word()).unwrap(), x);
            prop_assert_eq!(x.reduced_word().len(), x.length());
            prop_assert_eq!(Perm::parse(&x.to_string(), 6).unwrap(), x);
        }

        #[test]
        fn descents_change_length(x in arb_perm(6), i in 1usize..6) {
            let l = x.length();
            let r = x.mul_simple_right(i).length();
            prop_assert_eq!(r + 1 == l, x.has_right_descent(i));
            prop_assert!(r == l + 1 || r + 1 == l);
            let lft = x.mul_simple_left(i).length();
            prop_assert_eq!(lft + 1 == l, x.has_left_descent(i));
        }

        #[test]
        fn longest_element_reverses_bruhat(x in arb_perm(5), y in arb_perm(5)) {
            let w0 = Perm::longest(5);
            prop_assert_eq!(x.bruhat_leq(&y), w0.compose(&y).bruhat_leq(&w0.compose(&x)));
            prop_assert_eq!(x.bruhat_leq(&y), x.inverse().bruhat_leq(&y.inverse()));
        }
    }
}
