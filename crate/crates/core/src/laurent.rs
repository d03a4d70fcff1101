//! Laurent polynomials in one variable `v` with arbitrary-precision integer coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use dashu_int::IBig;
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Coefficient ring.
pub type Coeff = IBig;

/// An element of `Z[v, v^-1]`.
///
/// Terms are kept sorted by ascending exponent with no zero coefficients, so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i32, Coeff)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Coeff::ONE, 0)
    }

    /// The variable `v`.
    pub fn v() -> Self {
        Self::monomial(Coeff::ONE, 1)
    }

    /// `v^-1`.
    pub fn v_inv() -> Self {
        Self::monomial(Coeff::ONE, -1)
    }

    /// `c * v^e`.
    pub fn monomial(c: impl Into<Coeff>, e: i32) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(e, c)] }
        }
    }

    pub fn constant(c: impl Into<Coeff>) -> Self {
        Self::monomial(c, 0)
    }

    /// `v + v^-1`.
    pub fn quantum_two() -> Self {
        Self { terms: vec![(-1, Coeff::ONE), (1, Coeff::ONE)] }
    }

    /// `v^-1 - v`.
    pub fn v_inv_minus_v() -> Self {
        Self { terms: vec![(-1, Coeff::ONE), (1, Coeff::NEG_ONE)] }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging repeated exponents.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<Coeff>,
    {
        let mut v: Vec<(i32, Coeff)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, Coeff)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Self { terms: out }
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> &[(i32, Coeff)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// True when the polynomial is `c * v^e` for a single term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coeff_at(&self, e: i32) -> Coeff {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Coeff::ZERO,
        }
    }

    /// Highest exponent, `None` for zero.
    pub fn degree(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    /// Lowest exponent, `None` for zero.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.last().map(|t| &t.1)
    }

    pub fn trailing_coeff(&self) -> Option<&Coeff> {
        self.terms.first().map(|t| &t.1)
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn shift_in_place(&mut self, k: i32) {
        for t in &mut self.terms {
            t.0 += k;
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// `self * (v^-1 - v)`, the correction factor of the quadratic relation.
    pub fn mul_v_inv_minus_v(&self) -> Self {
        self.shift(-1) - self.shift(1)
    }

    /// Ring involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// Ring involution `v -> -v^-1`.
    pub fn beta_scalar(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| (-e, if e % 2 == 0 { c.clone() } else { -c }))
                .collect(),
        }
    }

    /// Value at `v = 1`.
    pub fn eval_at_one(&self) -> Coeff {
        self.terms.iter().map(|t| &t.1).sum()
    }

    /// Value at `v = a` in `F_p`; `a` must be invertible mod `p`.
    pub fn eval_mod(&self, p: u64, a: u64) -> u64 {
        let a = a % p;
        let a_inv = pow_mod(a, p - 2, p);
        let pi = IBig::from(p);
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let base = if *e >= 0 { a } else { a_inv };
            let x = pow_mod(base, e.unsigned_abs() as u64, p);
            let r: IBig = c % &pi;
            let r = if r < IBig::ZERO { r + &pi } else { r };
            let r = u64::try_from(&r).expect("reduced residue fits in u64");
            acc = (acc + mul_mod(r, x, p)) % p;
        }
        acc
    }

    /// All coefficients are `>= 0`.
    pub fn is_nonneg(&self) -> bool {
        self.terms.iter().all(|t| t.1 > IBig::ZERO)
    }

    /// Invariant under `v -> v^-1`.
    pub fn is_bar_symmetric(&self) -> bool {
        *self == self.bar()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact division, `None` if `d` does not divide `self` in `Z[v, v^-1]`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dv, dd) = (d.valuation()?, d.degree()?);
        let lc = d.leading_coeff()?.clone();
        let mut rem = self.clone();
        let mut quot: Vec<(i32, Coeff)> = Vec::new();
        while let (Some(rv), Some(rd)) = (rem.valuation(), rem.degree()) {
            if rd - rv < dd - dv {
                return None;
            }
            let c = rem.leading_coeff()?;
            let (q, r) = (c / &lc, c % &lc);
            if !r.is_zero() {
                return None;
            }
            let e = rd - dd;
            rem = rem - (d * &LaurentPoly::monomial(q.clone(), e));
            quot.push((e, q));
        }
        Some(LaurentPoly::from_terms(quot))
    }

    fn mul_impl(&self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 || rhs.terms.len() == 1 {
            let (mono, other) = if self.terms.len() == 1 { (self, rhs) } else { (rhs, self) };
            let (e0, c0) = &mono.terms[0];
            return Self { terms: other.terms.iter().map(|(e, c)| (e + e0, c * c0)).collect() };
        }
        let lo = self.terms[0].0 + rhs.terms[0].0;
        let hi = self.degree().unwrap_or(0) + rhs.degree().unwrap_or(0);
        let span = (hi - lo) as usize + 1;
        if span <= 4 * (self.terms.len() * rhs.terms.len()).max(64) {
            let mut buf = vec![Coeff::ZERO; span];
            for (ea, ca) in &self.terms {
                for (eb, cb) in &rhs.terms {
                    buf[(ea + eb - lo) as usize] += ca * cb;
                }
            }
            let terms = buf
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i32, c))
                .collect();
            Self { terms }
        } else {
            Self::from_terms(
                self.terms
                    .iter()
                    .flat_map(|(ea, ca)| rhs.terms.iter().map(move |(eb, cb)| (ea + eb, ca * cb))),
            )
        }
    }

    fn add_impl(&self, rhs: &LaurentPoly, negate_rhs: bool) -> LaurentPoly {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        let sign = |c: &Coeff| if negate_rhs { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_rhs { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(e, c)| (*e, sign(c))));
        Self { terms: out }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<Coeff> for LaurentPoly {
    fn from(c: Coeff) -> Self {
        Self::constant(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                $body(self, rhs)
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                $body(&self, &rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                $body(&self, rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &LaurentPoly, b: &LaurentPoly| a.add_impl(b, false));
forward_binop!(Sub, sub, |a: &LaurentPoly, b: &LaurentPoly| a.add_impl(b, true));
forward_binop!(Mul, mul, |a: &LaurentPoly, b: &LaurentPoly| a.mul_impl(b));

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        *self = self.add_impl(rhs, false);
    }
}

impl AddAssign<LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        if self.is_zero() {
            *self = rhs;
        } else {
            *self += &rhs;
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        *self = self.add_impl(rhs, true);
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for t in &mut self.terms {
            t.1 = -std::mem::take(&mut t.1);
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        let mut acc = LaurentPoly::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

/// Ascending exponents: `1+v^2`, `v^-1+v`, `-v`, `0`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = *c < IBig::ZERO;
            let mag = if neg { -c } else { c.clone() };
            if neg {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            let unit = mag.is_one();
            if *e == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !unit {
                write!(f, "{mag}")?;
            }
            if *e == 1 {
                f.write_str("v")?;
            } else {
                write!(f, "v^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Parses the display syntax. Also accepts `v^{-1}`, `*` between coefficient
/// and variable, and arbitrary whitespace.
impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("invalid Laurent polynomial: {s:?}"));
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(bad());
        }
        let bytes = src.as_bytes();
        let mut terms: Vec<(i32, Coeff)> = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let mut negative = false;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                negative = bytes[i] == b'-';
                i += 1;
            } else if i > 0 {
                return Err(bad());
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits = &src[start..i];
            let mut coeff = if digits.is_empty() {
                Coeff::ONE
            } else {
                Coeff::from_str(digits).map_err(|_| bad())?
            };
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            let mut exp = 0i32;
            if i < bytes.len() && bytes[i] == b'v' {
                i += 1;
                exp = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let braced = i < bytes.len() && bytes[i] == b'{';
                    if braced {
                        i += 1;
                    }
                    let es = i;
                    if i < bytes.len() && bytes[i] == b'-' {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    exp = src[es..i].parse().map_err(|_| bad())?;
                    if braced {
                        if i >= bytes.len() || bytes[i] != b'}' {
                            return Err(bad());
                        }
                        i += 1;
                    }
                }
            } else if digits.is_empty() {
                return Err(bad());
            }
            if negative {
                coeff = -coeff;
            }
            terms.push((exp, coeff));
        }
        Ok(Self::from_terms(terms))
    }
}

/// JSON form: object from decimal exponent string to integer coefficient,
/// keys in ascending numeric order, e.g. `{"-1":1,"1":1}`.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            let num = serde_json::Number::from_str(&c.to_string()).map_err(serde::ser::Error::custom)?;
            map.serialize_entry(&e.to_string(), &num)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;
        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping exponents to integer coefficients")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<LaurentPoly, A::Error> {
                let mut terms = Vec::new();
                let mut last: Option<i32> = None;
                while let Some((k, num)) = map.next_entry::<String, serde_json::Number>()? {
                    let e: i32 = k.parse().map_err(|_| de::Error::custom(format!("bad exponent {k:?}")))?;
                    if last.is_some_and(|l| l >= e) {
                        return Err(de::Error::custom("exponents must be strictly ascending"));
                    }
                    last = Some(e);
                    let c = Coeff::from_str(&num.to_string())
                        .map_err(|_| de::Error::custom(format!("non-integer coefficient {num}")))?;
                    if c.is_zero() {
                        return Err(de::Error::custom("zero coefficient stored"));
                    }
                    terms.push((e, c));
                }
                Ok(LaurentPoly { terms })
            }
        }
        deserializer.deserialize_map(PolyVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "1", "-v", "v^-1", "1+v^2", "v^-1+v", "-2v^-3+7+v^5", "v^-2+2+v^2"] {
            assert_eq!(lp(s).to_string(), s);
        }
        assert_eq!(lp("v + v^{-1}"), LaurentPoly::quantum_two());
        assert_eq!(lp("3*v^2 - v^2"), lp("2v^2"));
        assert!("v^".parse::<LaurentPoly>().is_err());
        assert!("2x".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn arithmetic_basics() {
        let q = LaurentPoly::quantum_two();
        assert_eq!(&q * &q, lp("v^-2+2+v^2"));
        assert_eq!(LaurentPoly::v() * LaurentPoly::v_inv(), LaurentPoly::one());
        assert_eq!(lp("v^-1-v"), LaurentPoly::v_inv_minus_v());
        assert_eq!(lp("1+v").mul_v_inv_minus_v(), lp("v^-1+1-v-v^2"));
        assert!((lp("v") - lp("v")).is_zero());
    }

    #[test]
    fn involutions() {
        assert_eq!(lp("1+2v").bar(), lp("1+2v^-1"));
        assert_eq!(lp("1+2v").beta_scalar(), lp("1-2v^-1"));
        assert_eq!(lp("v^2").beta_scalar(), lp("v^-2"));
        assert!(lp("v+v^-1").is_bar_symmetric());
        assert!(!lp("v").is_bar_symmetric());
    }

    #[test]
    fn evaluations() {
        assert_eq!(lp("v+v^-1").eval_at_one(), IBig::from(2));
        // 2 + 2^-1 = 2 + 3 = 0 mod 5
        assert_eq!(lp("v+v^-1").eval_mod(5, 2), 0);
        assert_eq!(lp("-v").eval_mod(7, 3), 4);
    }

    #[test]
    fn exact_division() {
        let q = LaurentPoly::quantum_two();
        let p = &q * &lp("3v^4-v+2");
        assert_eq!(p.div_exact(&q), Some(lp("3v^4-v+2")));
        assert_eq!(lp("v+1").div_exact(&lp("2")), None);
        assert_eq!(lp("v^2+1").div_exact(&lp("v+1")), None);
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&LaurentPoly::quantum_two()).unwrap();
        assert_eq!(s, r#"{"-1":1,"1":1}"#);
        let ordered = serde_json::to_string(&lp("v^-10+v^2+v^10")).unwrap();
        assert_eq!(ordered, r#"{"-10":1,"2":1,"10":1}"#);
        let big = lp("123456789012345678901234567890v^3");
        let js = serde_json::to_string(&big).unwrap();
        assert_eq!(js, r#"{"3":123456789012345678901234567890}"#);
        assert_eq!(serde_json::from_str::<LaurentPoly>(&js).unwrap(), big);
        assert!(serde_json::from_str::<LaurentPoly>(r#"{"1":0}"#).is_err());
        assert!(serde_json::from_str::<LaurentPoly>(r#"{"2":1,"1":1}"#).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i32..6, -5i64..6), 0..6)
            .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|(e, c)| (e, IBig::from(c)))))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn involutions_are_ring_maps(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!((&a * &b).beta_scalar(), &a.beta_scalar() * &b.beta_scalar());
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!(a.beta_scalar().beta_scalar(), a.clone());
            prop_assert_eq!((&a + &b).eval_at_one(), a.eval_at_one() + b.eval_at_one());
        }

        #[test]
        fn display_parse_round_trip(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a.clone());
            let js = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<LaurentPoly>(&js).unwrap(), a);
        }

        #[test]
        fn division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }
    }
}
