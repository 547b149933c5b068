//! The Iwahori-Hecke algebra of a finite Weyl group over `Z[q, q^-1]`,
//! with generators `T_w`, relations `T_v T_w = T_vw` when lengths add and
//! `(T_s + 1)(T_s - q) = 0`.
//!
//! The Kazhdan-Lusztig basis is normalized without half-integer powers:
//! `C_w = sum_x P_{x,w} T_x` with `bar(C_w) = q^{-l(w)} C_w`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use ibig::IBig;
use thiserror::Error;

use crate::coxeter::{CoxElt, CoxeterSystem};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("operands belong to different Coxeter systems")]
    SystemMismatch,
}

/// A finite `Z[q, q^-1]`-combination of `T_w`.
#[derive(Clone)]
pub struct HeckeElt {
    sys: Arc<CoxeterSystem>,
    terms: BTreeMap<CoxElt, LaurentPoly>,
}

impl PartialEq for HeckeElt {
    fn eq(&self, other: &Self) -> bool {
        same_system(&self.sys, &other.sys) && self.terms == other.terms
    }
}

impl Eq for HeckeElt {}

pub(crate) fn same_system(a: &Arc<CoxeterSystem>, b: &Arc<CoxeterSystem>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl HeckeElt {
    pub fn zero(sys: &Arc<CoxeterSystem>) -> Self {
        Self {
            sys: sys.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(sys: &Arc<CoxeterSystem>) -> Self {
        Self::t(sys, sys.identity())
    }

    pub fn t(sys: &Arc<CoxeterSystem>, w: CoxElt) -> Self {
        Self::monomial(sys, w, LaurentPoly::one())
    }

    pub fn monomial(sys: &Arc<CoxeterSystem>, w: CoxElt, coeff: LaurentPoly) -> Self {
        let mut e = Self::zero(sys);
        e.add_term(w, &coeff);
        e
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (CoxElt, &LaurentPoly)> + '_ {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    pub fn coeff(&self, w: CoxElt) -> LaurentPoly {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: CoxElt, coeff: &LaurentPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(w).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, HeckeError> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HeckeError> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, &-c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(&self.sys);
        if c.is_zero() {
            return out;
        }
        for (w, a) in &self.terms {
            out.terms.insert(*w, a * c);
        }
        out
    }

    /// `self * T_s`
    pub fn mul_simple_right(&self, s: usize) -> Self {
        let q = LaurentPoly::q();
        let qm1 = LaurentPoly::from_coeffs(0, &[-1, 1]);
        let mut out = Self::zero(&self.sys);
        for (&x, a) in &self.terms {
            let xs = self.sys.right_mul(x, s);
            if self.sys.length(xs) > self.sys.length(x) {
                out.add_term(xs, a);
            } else {
                out.add_term(xs, &(a * &q));
                out.add_term(x, &(a * &qm1));
            }
        }
        out
    }

    /// `T_s * self`
    pub fn mul_simple_left(&self, s: usize) -> Self {
        let q = LaurentPoly::q();
        let qm1 = LaurentPoly::from_coeffs(0, &[-1, 1]);
        let mut out = Self::zero(&self.sys);
        for (&x, a) in &self.terms {
            let sx = self.sys.left_mul(s, x);
            if self.sys.length(sx) > self.sys.length(x) {
                out.add_term(sx, a);
            } else {
                out.add_term(sx, &(a * &q));
                out.add_term(x, &(a * &qm1));
            }
        }
        out
    }

    /// The bilinear product, by right multiplication along reduced words.
    pub fn mul(&self, other: &Self) -> Result<Self, HeckeError> {
        self.check(other)?;
        let mut out = Self::zero(&self.sys);
        for (&y, b) in &other.terms {
            let mut partial = self.clone();
            for s in self.sys.reduced_word(y) {
                partial = partial.mul_simple_right(s);
            }
            for (x, a) in partial.terms {
                out.add_term(x, &(&a * b));
            }
        }
        Ok(out)
    }

    fn check(&self, other: &Self) -> Result<(), HeckeError> {
        if same_system(&self.sys, &other.sys) {
            Ok(())
        } else {
            Err(HeckeError::SystemMismatch)
        }
    }

    /// Renders e.g. `+ (-1+q)*T[1] + q*T[]`.
    pub fn render(&self) -> String {
        render_combination(self.terms.iter().map(|(w, c)| {
            let word: Vec<String> = self
                .sys
                .reduced_word(*w)
                .iter()
                .map(|s| (s + 1).to_string())
                .collect();
            (format!("T[{}]", word.join(",")), c)
        }))
    }
}

impl fmt::Display for HeckeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for HeckeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeElt({})", self.render())
    }
}

/// `+ coeff*label + ...`, parenthesizing multi-term coefficients; `0` if empty.
pub(crate) fn render_combination<'a>(
    terms: impl Iterator<Item = (String, &'a LaurentPoly)>,
) -> String {
    let parts: Vec<String> = terms
        .map(|(label, c)| {
            if c.len() > 1 {
                format!("+ ({c})*{label}")
            } else {
                format!("+ {c}*{label}")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

/// A Hecke algebra with cached `bar(T_w)` and Kazhdan-Lusztig tables.
pub struct HeckeAlgebra {
    sys: Arc<CoxeterSystem>,
    bar_table: OnceLock<Vec<HeckeElt>>,
    kl: OnceLock<KlBasis>,
}

impl HeckeAlgebra {
    pub fn new(sys: Arc<CoxeterSystem>) -> Self {
        Self {
            sys,
            bar_table: OnceLock::new(),
            kl: OnceLock::new(),
        }
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn t(&self, w: CoxElt) -> HeckeElt {
        HeckeElt::t(&self.sys, w)
    }

    /// `T_s^{-1} = q^{-1} T_s + (q^{-1} - 1)`
    pub fn t_simple_inverse(&self, s: usize) -> HeckeElt {
        let mut h = HeckeElt::monomial(
            &self.sys,
            self.sys.generator(s),
            LaurentPoly::monomial(1, -1),
        );
        h.add_term(self.sys.identity(), &LaurentPoly::from_coeffs(-1, &[1, -1]));
        h
    }

    fn bar_t(&self, w: CoxElt) -> &HeckeElt {
        let table = self.bar_table.get_or_init(|| {
            let mut table: Vec<HeckeElt> = Vec::with_capacity(self.sys.order());
            let qinv = LaurentPoly::monomial(1, -1);
            let qinv_m1 = LaurentPoly::from_coeffs(-1, &[1, -1]);
            for w in self.sys.elements() {
                if w == self.sys.identity() {
                    table.push(HeckeElt::one(&self.sys));
                    continue;
                }
                // w = s * w' reduced, so bar(T_w) = bar(T_s) bar(T_w')
                let s = self.sys.reduced_word(w)[0];
                let rest = &table[self.sys.left_mul(s, w).index()];
                let mut h = rest.mul_simple_left(s).scale(&qinv);
                for (x, c) in rest.terms() {
                    h.add_term(x, &(c * &qinv_m1));
                }
                table.push(h);
            }
            table
        });
        &table[w.index()]
    }

    /// Ring involution with `bar(q) = q^-1` and `bar(T_w) = T_{w^-1}^{-1}`.
    pub fn bar(&self, h: &HeckeElt) -> Result<HeckeElt, HeckeError> {
        if !same_system(&self.sys, &h.sys) {
            return Err(HeckeError::SystemMismatch);
        }
        let mut out = HeckeElt::zero(&self.sys);
        for (w, a) in h.terms() {
            let abar = a.bar();
            for (x, c) in self.bar_t(w).terms() {
                out.add_term(x, &(&abar * c));
            }
        }
        Ok(out)
    }

    /// `q^{l(w)} bar(T_w) = (T_{s1} + 1 - q) ... (T_{sk} + 1 - q)`: the
    /// costandard class of the regular module, in the `T` basis.
    pub fn costandard(&self, w: CoxElt) -> HeckeElt {
        self.bar_t(w)
            .scale(&LaurentPoly::monomial(1, self.sys.length(w) as i32))
    }

    /// Kazhdan-Lusztig basis, computed once.
    pub fn kl_basis(&self) -> &KlBasis {
        self.kl.get_or_init(|| KlBasis::compute(&self.sys))
    }
}

/// `C_w` for every `w`, as `T`-expansions.
pub struct KlBasis {
    sys: Arc<CoxeterSystem>,
    columns: Vec<HeckeElt>,
}

impl KlBasis {
    /// For `s` a left descent of `w` and `v = sw`:
    /// `C_w = C_s C_v - sum_{z < v, sz < z} mu(z, v) q^{(l(v) + 1 - l(z))/2} C_z`.
    fn compute(sys: &Arc<CoxeterSystem>) -> Self {
        let mut columns: Vec<HeckeElt> = Vec::with_capacity(sys.order());
        for w in sys.elements() {
            if w == sys.identity() {
                columns.push(HeckeElt::one(sys));
                continue;
            }
            let s = sys.reduced_word(w)[0];
            let v = sys.left_mul(s, w);
            let cv = &columns[v.index()];
            let mut c = cv.mul_simple_left(s);
            for (x, a) in cv.terms() {
                c.add_term(x, a);
            }
            let lv = sys.length(v) as i32;
            for (z, p) in cv.terms() {
                let gap = lv - sys.length(z) as i32;
                if z == v || gap % 2 == 0 || !sys.is_left_descent(s, z) {
                    continue;
                }
                let mu = p.coeff((gap - 1) / 2);
                if mu == IBig::from(0) {
                    continue;
                }
                let factor = LaurentPoly::monomial(-mu, (gap + 1) / 2);
                for (x, b) in columns[z.index()].terms() {
                    c.add_term(x, &(b * &factor));
                }
            }
            columns.push(c);
        }
        Self {
            sys: sys.clone(),
            columns,
        }
    }

    /// Builds a basis table from arbitrary columns (for verification tests).
    pub fn from_columns(sys: &Arc<CoxeterSystem>, columns: Vec<HeckeElt>) -> Self {
        Self {
            sys: sys.clone(),
            columns,
        }
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn c(&self, w: CoxElt) -> &HeckeElt {
        &self.columns[w.index()]
    }

    pub fn p(&self, x: CoxElt, w: CoxElt) -> LaurentPoly {
        self.columns[w.index()].coeff(x)
    }

    /// Coefficient of `q^{(l(w)-l(x)-1)/2}` in `P_{x,w}`, or 0 when that
    /// exponent is not a non-negative integer.
    pub fn mu(&self, x: CoxElt, w: CoxElt) -> IBig {
        let gap = self.sys.length(w) as i32 - self.sys.length(x) as i32;
        if gap <= 0 || gap % 2 == 0 {
            return IBig::from(0);
        }
        self.p(x, w).coeff((gap - 1) / 2)
    }

    /// CSV `x,w,P`, one row per nonzero entry, in element order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,w,P\n");
        for w in self.sys.elements() {
            for (x, p) in self.columns[w.index()].terms() {
                out.push_str(&format!(
                    "{},{},{}\n",
                    self.sys.element_token(x),
                    self.sys.element_token(w),
                    p
                ));
            }
        }
        out
    }
}

/// Re-checks the defining properties of a KL table: bar-invariance
/// `bar(C_w) = q^{-l(w)} C_w`, unitriangularity against Bruhat order, the
/// degree bound and non-negativity. Returns one message per violation.
pub fn verify_kl_basis(alg: &HeckeAlgebra, basis: &KlBasis) -> Vec<String> {
    let sys = alg.system();
    let mut failures = Vec::new();
    for w in sys.elements() {
        let c = basis.c(w);
        let name = sys.element_token(w);
        if !c.coeff(w).is_one() {
            failures.push(format!("P_{{{name},{name}}} != 1"));
        }
        for (x, p) in c.terms() {
            if x == w {
                continue;
            }
            let xn = sys.element_token(x);
            if !sys.leq(x, w) {
                failures.push(format!(
                    "P_{{{xn},{name}}} nonzero but {xn} is not below {name}"
                ));
            }
            let bound = (sys.length(w) as i32 - sys.length(x) as i32 - 1).div_euclid(2);
            if !p.is_polynomial() || p.max_exp().is_some_and(|d| d > bound) {
                failures.push(format!(
                    "P_{{{xn},{name}}} = {p} violates the degree bound {bound}"
                ));
            }
            if !p.is_nonnegative() {
                failures.push(format!(
                    "P_{{{xn},{name}}} = {p} has a negative coefficient"
                ));
            }
        }
        match alg.bar(c) {
            Ok(b) => {
                let expected = c.scale(&LaurentPoly::monomial(1, -(sys.length(w) as i32)));
                if b != expected {
                    failures.push(format!("C_{name} is not bar-invariant"));
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    failures
}
