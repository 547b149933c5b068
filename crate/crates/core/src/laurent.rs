//! Exact arithmetic in `Z[q, q^-1]` and rational series with denominators
//! of the form `(1-q^a1)(1-q^a2)...`.
//!
//! Polynomials are stored as a sorted list of `(exponent, coefficient)`
//! pairs with no zero coefficients, so structural equality is mathematical
//! equality. Coefficients are arbitrary precision.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use ibig::IBig;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("cannot parse polynomial `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("denominator factor must be a positive integer, got {0}")]
    BadDenominator(i64),
}

/// An element of `Z[q, q^-1]`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: Vec<(i32, IBig)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant(c: impl Into<IBig>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(coeff: impl Into<IBig>, exp: i32) -> Self {
        let coeff = coeff.into();
        if coeff == IBig::from(0) {
            Self::zero()
        } else {
            Self {
                terms: vec![(exp, coeff)],
            }
        }
    }

    /// Collects terms in any order, summing repeated exponents.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<IBig>,
    {
        let mut raw: Vec<(i32, IBig)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        raw.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(i32, IBig)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| *c != IBig::from(0));
        Self { terms: out }
    }

    /// Dense constructor: `coeffs[i]` is the coefficient of `q^(low + i)`.
    pub fn from_coeffs(low: i32, coeffs: &[i64]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(i, &c)| (low + i as i32, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1 == IBig::from(1)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &IBig)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i32) -> IBig {
        match self.terms.binary_search_by_key(&exp, |(e, _)| *e) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => IBig::from(0),
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// `(lowest exponent, highest exponent)`; undefined for zero.
    pub fn degree_window(&self) -> Result<(i32, i32), LaurentError> {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => Ok((lo, hi)),
            _ => Err(LaurentError::Domain("degree window of the zero polynomial")),
        }
    }

    /// Keeps exactly the terms with exponent `<= max_deg`.
    pub fn truncate(&self, max_deg: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e <= max_deg)
                .cloned()
                .collect(),
        }
    }

    /// The involution `q -> q^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, c)| (-e, c.clone()))
                .collect(),
        }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &IBig) -> Self {
        if *c == IBig::from(0) {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// True iff every stored coefficient is non-negative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c > IBig::from(0))
    }

    /// True iff there are no negative exponents.
    pub fn is_polynomial(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    /// `±q^k` for some `k`: the units of the ring.
    pub fn as_unit(&self) -> Option<(i32, bool)> {
        match self.terms.as_slice() {
            [(e, c)] if *c == IBig::from(1) => Some((*e, true)),
            [(e, c)] if *c == IBig::from(-1) => Some((*e, false)),
            _ => None,
        }
    }

    /// `(1 - q^a1)(1 - q^a2)...`
    pub fn denominator_product(factors: &[u32]) -> Self {
        factors.iter().fold(Self::one(), |acc, &a| {
            &acc * &Self::from_terms([(0, 1), (a as i32, -1)])
        })
    }

    /// Exact division by `1 - q^a`, or `None` when it does not divide.
    pub fn div_one_minus_q_pow(&self, a: u32) -> Option<Self> {
        let Some((lo, hi)) = self.min_exp().zip(self.max_exp()) else {
            return Some(Self::zero());
        };
        let a = a as i32;
        if hi - lo < a {
            return None;
        }
        // self = (1 - q^a) * m  =>  m_k = self_k + m_{k-a}
        let len = (hi - a - lo + 1) as usize;
        let mut m: Vec<IBig> = vec![IBig::from(0); len];
        for i in 0..len {
            let mut v = self.coeff(lo + i as i32);
            if i >= a as usize {
                v += &m[i - a as usize];
            }
            m[i] = v;
        }
        let quotient = Self::from_terms(m.into_iter().enumerate().map(|(i, c)| (lo + i as i32, c)));
        let check = &quotient * &Self::from_terms([(0, 1), (a, -1)]);
        (check == *self).then_some(quotient)
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j >= other.terms.len()
                || (i < self.terms.len() && self.terms[i].0 < other.terms[j].0);
            let take_right = i >= self.terms.len()
                || (j < other.terms.len() && other.terms[j].0 < self.terms[i].0);
            if take_left {
                out.push(self.terms[i].clone());
                i += 1;
            } else if take_right {
                let (e, c) = &other.terms[j];
                out.push((*e, if negate_other { -c } else { c.clone() }));
                j += 1;
            } else {
                let e = self.terms[i].0;
                let c = if negate_other {
                    &self.terms[i].1 - &other.terms[j].1
                } else {
                    &self.terms[i].1 + &other.terms[j].1
                };
                if c != IBig::from(0) {
                    out.push((e, c));
                }
                i += 1;
                j += 1;
            }
        }
        Self { terms: out }
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, false)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        self.merge(&rhs, false)
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, true)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        self.merge(&rhs, true)
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        *self = self.merge(rhs, false);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        *self = self.merge(rhs, true);
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if let [(e, c)] = rhs.terms.as_slice() {
            return LaurentPoly {
                terms: self.terms.iter().map(|(x, y)| (x + e, y * c)).collect(),
            };
        }
        let lo = self.terms[0].0 + rhs.terms[0].0;
        let hi = self.terms[self.terms.len() - 1].0 + rhs.terms[rhs.terms.len() - 1].0;
        let mut dense = vec![IBig::from(0); (hi - lo + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                dense[(ea + eb - lo) as usize] += ca * cb;
            }
        }
        LaurentPoly {
            terms: dense
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != IBig::from(0))
                .map(|(i, c)| (lo + i as i32, c))
                .collect(),
        }
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for LaurentPoly {
    /// Increasing exponents: `q^{-1}`, `1`, `q`, `q^2`; e.g. `1+2q+q^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let negative = *c < IBig::from(0);
            if negative {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            let abs = if negative { -c } else { c.clone() };
            if *e == 0 {
                write!(f, "{abs}")?;
                continue;
            }
            if abs != IBig::from(1) {
                write!(f, "{abs}")?;
            }
            f.write_str("q")?;
            match *e {
                1 => {}
                e if e < 0 => write!(f, "^{{{e}}}")?,
                e => write!(f, "^{e}")?,
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

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Accepts the rendering produced by `Display`, plus optional
    /// whitespace, `*` between coefficient and `q`, and `q^-1` without braces.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| LaurentError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(err("empty input"));
        }
        let mut pos = 0;
        let mut terms: Vec<(i32, IBig)> = Vec::new();
        let read_int = |pos: &mut usize| -> Option<String> {
            let start = *pos;
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            (*pos > start).then(|| chars[start..*pos].iter().collect())
        };
        while pos < chars.len() {
            let mut negative = false;
            match chars[pos] {
                '+' => pos += 1,
                '-' => {
                    negative = true;
                    pos += 1;
                }
                _ if !terms.is_empty() => return Err(err("expected `+` or `-` between terms")),
                _ => {}
            }
            let digits = read_int(&mut pos);
            let mut coeff = match &digits {
                Some(d) => d.parse::<IBig>().map_err(|_| err("bad coefficient"))?,
                None => IBig::from(1),
            };
            if pos < chars.len() && chars[pos] == '*' {
                if digits.is_none() {
                    return Err(err("`*` without a coefficient"));
                }
                pos += 1;
                if pos >= chars.len() || chars[pos] != 'q' {
                    return Err(err("expected `q` after `*`"));
                }
            }
            let mut exp: i32 = 0;
            if pos < chars.len() && chars[pos] == 'q' {
                pos += 1;
                exp = 1;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    let braced = pos < chars.len() && chars[pos] == '{';
                    if braced {
                        pos += 1;
                    }
                    let exp_negative = pos < chars.len() && chars[pos] == '-';
                    if exp_negative {
                        pos += 1;
                    }
                    let d = read_int(&mut pos).ok_or_else(|| err("missing exponent"))?;
                    exp = d.parse::<i32>().map_err(|_| err("exponent out of range"))?;
                    if exp_negative {
                        exp = -exp;
                    }
                    if braced {
                        if pos >= chars.len() || chars[pos] != '}' {
                            return Err(err("unclosed `{`"));
                        }
                        pos += 1;
                    }
                }
            } else if digits.is_none() {
                return Err(err("expected a coefficient or `q`"));
            }
            if negative {
                coeff = -coeff;
            }
            terms.push((exp, coeff));
        }
        Ok(Self::from_terms(terms))
    }
}

/// `numerator / prod_i (1 - q^{a_i})`, expanded as a power series in `q`.
#[derive(Clone)]
pub struct PoincareSeries {
    numerator: LaurentPoly,
    denominator: Vec<u32>,
}

impl PoincareSeries {
    pub fn new(numerator: LaurentPoly, mut denominator: Vec<u32>) -> Result<Self, LaurentError> {
        if let Some(&bad) = denominator.iter().find(|&&a| a == 0) {
            return Err(LaurentError::BadDenominator(bad as i64));
        }
        denominator.sort_unstable();
        Ok(Self {
            numerator,
            denominator,
        })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            numerator: p,
            denominator: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    /// `1 / (1 - q)^k`
    pub fn torus(rank: usize) -> Self {
        Self {
            numerator: LaurentPoly::one(),
            denominator: vec![1; rank],
        }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn denominator_factors(&self) -> &[u32] {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        Self {
            numerator: &self.numerator * p,
            denominator: self.denominator.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut den = self.denominator.clone();
        den.extend_from_slice(&other.denominator);
        den.sort_unstable();
        Self {
            numerator: &self.numerator * &other.numerator,
            denominator: den,
        }
    }

    /// Sum over the least common multiset of denominator factors.
    pub fn add(&self, other: &Self) -> Self {
        let den = multiset_max_union(&self.denominator, &other.denominator);
        let lift = |s: &Self| {
            let extra = multiset_difference(&den, &s.denominator);
            &s.numerator * &LaurentPoly::denominator_product(&extra)
        };
        Self {
            numerator: &lift(self) + &lift(other),
            denominator: den,
        }
    }

    /// Cancels every denominator factor that divides the numerator.
    pub fn reduced(&self) -> Self {
        if self.numerator.is_zero() {
            return Self::zero();
        }
        let mut num = self.numerator.clone();
        let mut den = Vec::with_capacity(self.denominator.len());
        for &a in &self.denominator {
            match num.div_one_minus_q_pow(a) {
                Some(quotient) => num = quotient,
                None => den.push(a),
            }
        }
        Self {
            numerator: num,
            denominator: den,
        }
    }

    /// Power-series coefficients for exponents `start..=max_exp`, where
    /// `start = min(0, lowest numerator exponent)`.
    pub fn expand(&self, max_exp: i32) -> (i32, Vec<IBig>) {
        let start = self.numerator.min_exp().map_or(0, |e| e.min(0));
        if max_exp < start {
            return (start, Vec::new());
        }
        let len = (max_exp - start + 1) as usize;
        let mut c = vec![IBig::from(0); len];
        for (e, v) in self.numerator.terms() {
            if e <= max_exp {
                c[(e - start) as usize] = v.clone();
            }
        }
        for &a in &self.denominator {
            let a = a as usize;
            for i in a..len {
                let prev = c[i - a].clone();
                c[i] += prev;
            }
        }
        (start, c)
    }
}

impl PartialEq for PoincareSeries {
    /// Exact comparison by clearing denominators.
    fn eq(&self, other: &Self) -> bool {
        &self.numerator * &LaurentPoly::denominator_product(&other.denominator)
            == &other.numerator * &LaurentPoly::denominator_product(&self.denominator)
    }
}

impl Eq for PoincareSeries {}

impl fmt::Display for PoincareSeries {
    /// `num / (1-q)^k(1-q^2)...`; multi-term numerators are parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_empty() || self.numerator.is_zero() {
            return write!(f, "{}", self.numerator);
        }
        if self.numerator.len() > 1 {
            write!(f, "({}) / ", self.numerator)?;
        } else {
            write!(f, "{} / ", self.numerator)?;
        }
        let mut i = 0;
        while i < self.denominator.len() {
            let a = self.denominator[i];
            let run = self.denominator[i..]
                .iter()
                .take_while(|&&x| x == a)
                .count();
            if a == 1 {
                f.write_str("(1-q)")?;
            } else {
                write!(f, "(1-q^{a})")?;
            }
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PoincareSeries({self})")
    }
}

fn multiset_max_union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i >= a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out
}

/// `a - b` for sorted multisets with `b` contained in `a`.
fn multiset_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let mut j = 0;
    for &x in a {
        if j < b.len() && b[j] == x {
            j += 1;
        } else {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn ring_arithmetic_examples() {
        let one_plus_q = p("1+q");
        assert_eq!(&one_plus_q * &one_plus_q, p("1+2q+q^2"));
        assert_eq!(&p("q-1") + &LaurentPoly::one(), LaurentPoly::q());
        assert!((&LaurentPoly::zero() * &p("q^5-q^{-5}")).is_zero());
    }

    #[test]
    fn bar_examples() {
        assert_eq!(p("q^2-q^{-1}").bar(), p("q^{-2}-q"));
        assert_eq!(p("1+q").bar(), p("1+q^{-1}"));
    }

    #[test]
    fn degree_window_and_truncate() {
        assert_eq!(p("q^{-1}+q^3").degree_window(), Ok((-1, 3)));
        assert!(matches!(
            LaurentPoly::zero().degree_window(),
            Err(LaurentError::Domain(_))
        ));
        assert_eq!(p("1+q+q^2").truncate(1), p("1+q"));
        assert!(LaurentPoly::one().truncate(-1).is_zero());
    }

    #[test]
    fn rendering_is_canonical() {
        assert_eq!(p("q^2+2q+1").to_string(), "1+2q+q^2");
        assert_eq!(p("q-2").to_string(), "-2+q");
        assert_eq!(p("-q^{-1}+3q^{-2}").to_string(), "3q^{-2}-q^{-1}");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("2*q^-1 - 1").to_string(), "2q^{-1}-1");
        assert_eq!(p("-q").to_string(), "-q");
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "x", "q^", "1+", "q^{2", "2q3", "*q"] {
            assert!(bad.parse::<LaurentPoly>().is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn big_coefficients_do_not_overflow() {
        let big = LaurentPoly::constant(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.coeff(0), IBig::from(i64::MAX) * IBig::from(i64::MAX));
        let round: LaurentPoly = sq.to_string().parse().unwrap();
        assert_eq!(round, sq);
    }

    #[test]
    fn nonnegativity() {
        assert!(p("1+2q").is_nonnegative());
        assert!(!p("1-q").is_nonnegative());
        assert!(LaurentPoly::zero().is_nonnegative());
    }

    #[test]
    fn series_equality_clears_denominators() {
        let a = PoincareSeries::new(p("1+q"), vec![1]).unwrap();
        let b = PoincareSeries::new(p("1-q^2"), vec![1, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.reduced().to_string(), "(1+q) / (1-q)");
        let c = PoincareSeries::torus(1).add(&PoincareSeries::torus(1).mul_poly(&LaurentPoly::q()));
        assert_eq!(c, a);
        assert_eq!(c.to_string(), "(1+q) / (1-q)");
        assert_eq!(PoincareSeries::torus(3).to_string(), "1 / (1-q)^3");
        let d = PoincareSeries::new(LaurentPoly::q(), vec![2, 1]).unwrap();
        assert_eq!(d.to_string(), "q / (1-q)(1-q^2)");
    }

    #[test]
    fn series_expansion() {
        let s = PoincareSeries::new(p("1+q"), vec![1]).unwrap();
        let (start, c) = s.expand(3);
        assert_eq!(start, 0);
        assert_eq!(c, [1, 2, 2, 2].map(IBig::from).to_vec());
        assert!(PoincareSeries::new(LaurentPoly::one(), vec![0]).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-4i32..5, -6i64..7), 0..6).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn bar_is_ring_involution(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        }

        #[test]
        fn render_parse_round_trip(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a);
        }

        #[test]
        fn series_equality_matches_expansion(a in arb_poly(), b in arb_poly(), k in 0usize..3) {
            // a/(1-q)^k + b/(1-q^2) compared with its own reduced form term by term
            let lhs = PoincareSeries::new(a.clone(), vec![1; k]).unwrap()
                .add(&PoincareSeries::new(b.clone(), vec![2]).unwrap());
            let rhs = lhs.reduced();
            prop_assert_eq!(&lhs, &rhs);
            let (s1, e1) = lhs.expand(12);
            let (s2, e2) = rhs.expand(12);
            prop_assert_eq!(s1, s2);
            prop_assert_eq!(e1, e2);
        }
    }
}
