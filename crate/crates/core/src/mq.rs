//! The Hecke module `M_q` in its standard basis `m_p`: the `T_s` matrices
//! realized from case descriptors, the action of arbitrary Hecke elements
//! and the bar-semilinear duality `beta`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::coxeter::{CoxElt, CoxeterSystem};
use crate::datum::{CaseDescriptor, OrbitDatum, ParamId};
use crate::hecke::{render_combination, same_system, HeckeElt, KlBasis};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MqError {
    #[error("no costandard data: duality undetermined for {0}")]
    MissingCostandard(String),
    #[error("missing descriptor for simple reflection s{reflection} on parameter `{param}`")]
    MissingDescriptor { reflection: usize, param: String },
    #[error("Hecke element belongs to a different Coxeter system than the datum")]
    SystemMismatch,
}

/// A finitely supported vector `sum_p c_p m_p`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct MqElement {
    coords: BTreeMap<ParamId, LaurentPoly>,
}

impl MqElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(p: ParamId) -> Self {
        Self::monomial(p, LaurentPoly::one())
    }

    pub fn monomial(p: ParamId, c: LaurentPoly) -> Self {
        let mut x = Self::zero();
        x.add_term(p, &c);
        x
    }

    pub fn from_dense(v: &[LaurentPoly]) -> Self {
        let coords = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (ParamId(i), c.clone()))
            .collect();
        Self { coords }
    }

    pub fn to_dense(&self, n: usize) -> Vec<LaurentPoly> {
        let mut v = vec![LaurentPoly::zero(); n];
        for (p, c) in &self.coords {
            v[p.0] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (ParamId, &LaurentPoly)> + '_ {
        self.coords.iter().map(|(p, c)| (*p, c))
    }

    pub fn coeff(&self, p: ParamId) -> LaurentPoly {
        self.coords.get(&p).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, p: ParamId, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.coords.entry(p).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coords.remove(&p);
        }
    }

    /// `self += c * x`
    pub fn add_scaled(&mut self, c: &LaurentPoly, x: &MqElement) {
        if c.is_zero() {
            return;
        }
        for (p, a) in x.terms() {
            self.add_term(p, &(c * a));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&LaurentPoly::one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&LaurentPoly::constant(-1), other);
        out
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_scaled(c, self);
        out
    }

    /// `+ (1+q)*m[wt] + 1*m[p0]`, in basis order; `0` for the zero vector.
    pub fn render(&self, d: &OrbitDatum) -> String {
        render_combination(
            self.terms()
                .map(|(p, c)| (format!("m[{}]", d.param(p).id), c)),
        )
    }
}

impl fmt::Debug for MqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = render_combination(self.terms().map(|(p, c)| (format!("m{p}"), c)));
        write!(f, "MqElement({body})")
    }
}

type Column = Vec<(ParamId, LaurentPoly)>;

/// The matrices of `T_s`, column `p` holding `T_s m_p`.
#[derive(Debug, Clone)]
pub struct ActionTable {
    sys: Arc<CoxeterSystem>,
    n: usize,
    cols: Vec<Vec<Column>>,
}

fn descriptor_column(p: ParamId, d: &CaseDescriptor) -> Column {
    let one = LaurentPoly::one;
    let q = LaurentPoly::q;
    let q_minus = |k: i64| LaurentPoly::from_coeffs(0, &[-k, 1]);
    let mut x = MqElement::zero();
    match d {
        CaseDescriptor::CompactG => x.add_term(p, &q()),
        CaseDescriptor::AscentU { up } => x.add_term(*up, &one()),
        CaseDescriptor::DescentU { down } => {
            x.add_term(*down, &q());
            x.add_term(p, &q_minus(1));
        }
        CaseDescriptor::AscentT { cross, up } => {
            x.add_term(*cross, &one());
            x.add_term(*up, &one());
        }
        CaseDescriptor::DescentT { downs } => {
            x.add_term(downs[0], &q_minus(1));
            x.add_term(downs[1], &q_minus(1));
            x.add_term(p, &q_minus(2));
        }
        CaseDescriptor::DescentTNonParity => x.add_term(p, &LaurentPoly::constant(-1)),
        CaseDescriptor::AscentN { ups } => {
            x.add_term(p, &one());
            x.add_term(ups[0], &one());
            x.add_term(ups[1], &one());
        }
        CaseDescriptor::DescentN { partner, down } => {
            x.add_term(*down, &q_minus(1));
            x.add_term(p, &q_minus(1));
            x.add_term(*partner, &LaurentPoly::constant(-1));
        }
        CaseDescriptor::ExplicitRow { coeffs } => {
            for (t, c) in coeffs {
                x.add_term(*t, c);
            }
        }
    }
    x.coords.into_iter().collect()
}

impl ActionTable {
    /// Requires a descriptor for every `(s, p)`.
    pub fn from_datum(d: &OrbitDatum) -> Result<Self, MqError> {
        for s in 0..d.rank() {
            for p in d.param_ids() {
                if d.action(s, p).is_none() {
                    return Err(MqError::MissingDescriptor {
                        reflection: s + 1,
                        param: d.param(p).id.clone(),
                    });
                }
            }
        }
        Ok(Self::from_datum_lenient(d))
    }

    /// Missing descriptors give zero columns (used by validation, which
    /// reports them separately).
    pub fn from_datum_lenient(d: &OrbitDatum) -> Self {
        let cols = (0..d.rank())
            .map(|s| {
                d.param_ids()
                    .map(|p| {
                        d.action(s, p)
                            .map(|desc| descriptor_column(p, desc))
                            .unwrap_or_default()
                    })
                    .collect()
            })
            .collect();
        Self {
            sys: d.coxeter().clone(),
            n: d.params().len(),
            cols,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    /// `T_s m_p` as `(target, coefficient)` pairs in basis order.
    pub fn column(&self, s: usize, p: ParamId) -> &[(ParamId, LaurentPoly)] {
        &self.cols[s][p.0]
    }

    pub fn apply_t(&self, s: usize, x: &MqElement) -> MqElement {
        let mut out = MqElement::zero();
        for (p, c) in x.terms() {
            for (t, a) in &self.cols[s][p.0] {
                out.add_term(*t, &(c * a));
            }
        }
        out
    }

    /// `C_s x = T_s x + x`
    pub fn apply_c(&self, s: usize, x: &MqElement) -> MqElement {
        self.apply_t(s, x).add(x)
    }

    pub(crate) fn apply_t_dense(&self, s: usize, x: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let mut out = vec![LaurentPoly::zero(); self.n];
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, a) in &self.cols[s][i] {
                out[t.0] += &(c * a);
            }
        }
        out
    }

    /// `T_{s_1} T_{s_2} ... T_{s_k} x` for the word `s_1 ... s_k`.
    pub fn apply_word(&self, word: &[usize], x: &MqElement) -> MqElement {
        word.iter()
            .rev()
            .fold(x.clone(), |acc, &s| self.apply_t(s, &acc))
    }

    /// `T_w x` along the stored reduced word of `w`.
    pub fn apply_tw(&self, w: CoxElt, x: &MqElement) -> MqElement {
        self.apply_word(&self.sys.reduced_word(w), x)
    }

    pub fn act(&self, h: &HeckeElt, x: &MqElement) -> Result<MqElement, MqError> {
        if !same_system(&self.sys, h.system()) {
            return Err(MqError::SystemMismatch);
        }
        let mut out = MqElement::zero();
        for (w, c) in h.terms() {
            out.add_scaled(c, &self.apply_tw(w, x));
        }
        Ok(out)
    }

    /// `C_w x`, via the Kazhdan-Lusztig expansion of `C_w`.
    pub fn act_c(&self, kl: &KlBasis, w: CoxElt, x: &MqElement) -> Result<MqElement, MqError> {
        self.act(kl.c(w), x)
    }
}

/// `beta(m_p) = q^{-d_p} n_p`, extended bar-semilinearly.
#[derive(Debug, Clone)]
pub struct Duality {
    beta_cols: Vec<MqElement>,
    costandard: Vec<MqElement>,
    derived: bool,
}

impl Duality {
    /// Uses the datum's costandard table, or derives one when the datum has
    /// none (see [`Duality::derive`]).
    pub fn from_datum(d: &OrbitDatum, table: &ActionTable) -> Result<Self, MqError> {
        match d.costandard() {
            Some(cols) => {
                let costandard: Vec<MqElement> = cols
                    .iter()
                    .map(|col| MqElement {
                        coords: col
                            .iter()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(p, c)| (*p, c.clone()))
                            .collect(),
                    })
                    .collect();
                let beta_cols = costandard
                    .iter()
                    .zip(d.params())
                    .map(|(n, p)| n.scale(&LaurentPoly::monomial(1, -(p.dim as i32))))
                    .collect();
                Ok(Self {
                    beta_cols,
                    costandard,
                    derived: false,
                })
            }
            None => Self::derive(d, table),
        }
    }

    /// Determines `beta` from closed parameters (`beta(m_p) = q^{-d_p} m_p`)
    /// and the compatibility `beta(T_s m_p) = bar(T_s) beta(m_p)`, solving
    /// for one unknown at a time when it appears in a known column with a
    /// unit coefficient. Fails when some parameter stays undetermined.
    pub fn derive(d: &OrbitDatum, table: &ActionTable) -> Result<Self, MqError> {
        let n = d.params().len();
        let mut known: Vec<Option<MqElement>> = vec![None; n];
        for p in d.param_ids() {
            if d.orbit(d.param(p).orbit).closed {
                known[p.0] = Some(MqElement::monomial(
                    p,
                    LaurentPoly::monomial(1, -(d.dim(p) as i32)),
                ));
            }
        }
        let qinv = LaurentPoly::monomial(1, -1);
        let qinv_m1 = LaurentPoly::from_coeffs(-1, &[1, -1]);
        loop {
            let mut progress = false;
            for s in 0..table.rank() {
                for p in d.param_ids() {
                    let Some(bp) = known[p.0].clone() else {
                        continue;
                    };
                    let col = table.column(s, p);
                    let unknown: Vec<&(ParamId, LaurentPoly)> =
                        col.iter().filter(|(t, _)| known[t.0].is_none()).collect();
                    let [(target, c)] = unknown.as_slice() else {
                        continue;
                    };
                    let Some((exp, positive)) = c.bar().as_unit() else {
                        continue;
                    };
                    // sum_t bar(c_t) beta(m_t) = q^-1 T_s beta(m_p) + (q^-1 - 1) beta(m_p)
                    let mut rhs = table.apply_t(s, &bp).scale(&qinv);
                    rhs.add_scaled(&qinv_m1, &bp);
                    for (t, a) in col {
                        if t != target {
                            rhs.add_scaled(&-a.bar(), known[t.0].as_ref().expect("known"));
                        }
                    }
                    let inv = LaurentPoly::monomial(if positive { 1 } else { -1 }, -exp);
                    known[target.0] = Some(rhs.scale(&inv));
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
        let missing: Vec<&str> = d
            .param_ids()
            .filter(|p| known[p.0].is_none())
            .map(|p| d.param(p).id.as_str())
            .collect();
        if !missing.is_empty() {
            return Err(MqError::MissingCostandard(missing.join(", ")));
        }
        let beta_cols: Vec<MqElement> = known.into_iter().map(|b| b.expect("all known")).collect();
        let costandard = beta_cols
            .iter()
            .zip(d.params())
            .map(|(b, p)| b.scale(&LaurentPoly::monomial(1, p.dim as i32)))
            .collect();
        Ok(Self {
            beta_cols,
            costandard,
            derived: true,
        })
    }

    pub fn is_derived(&self) -> bool {
        self.derived
    }

    pub fn beta_basis(&self, p: ParamId) -> &MqElement {
        &self.beta_cols[p.0]
    }

    /// The costandard class `n_p` in the standard basis.
    pub fn costandard(&self, p: ParamId) -> &MqElement {
        &self.costandard[p.0]
    }

    pub fn beta(&self, x: &MqElement) -> MqElement {
        let mut out = MqElement::zero();
        for (p, c) in x.terms() {
            out.add_scaled(&c.bar(), &self.beta_cols[p.0]);
        }
        out
    }
}

/// `bar(T_s) x = q^{-1} T_s x + (q^{-1} - 1) x`
pub fn bar_ts(table: &ActionTable, s: usize, x: &MqElement) -> MqElement {
    let mut out = table.apply_t(s, x).scale(&LaurentPoly::monomial(1, -1));
    out.add_scaled(&LaurentPoly::from_coeffs(-1, &[1, -1]), x);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::builtin_datum;
    use crate::hecke::HeckeAlgebra;
    use proptest::prelude::*;

    fn p(d: &OrbitDatum, id: &str) -> ParamId {
        d.find_param(id).unwrap()
    }

    #[test]
    fn sl2_columns() {
        let d = builtin_datum("sl2-T").unwrap();
        let t = ActionTable::from_datum(&d).unwrap();
        let x = t.apply_t(0, &MqElement::basis(p(&d, "p0")));
        assert_eq!(x.render(&d), "+ 1*m[pInf] + 1*m[wt]");
        let x = t.apply_t(0, &MqElement::basis(p(&d, "ws")));
        assert_eq!(x.render(&d), "+ -1*m[ws]");
        let x = t.apply_c(0, &MqElement::basis(p(&d, "p0")));
        assert_eq!(x.render(&d), "+ 1*m[p0] + 1*m[pInf] + 1*m[wt]");

        let d = builtin_datum("sl2-N").unwrap();
        let t = ActionTable::from_datum(&d).unwrap();
        let x = t.apply_t(0, &MqElement::basis(p(&d, "u")));
        assert_eq!(x.render(&d), "+ 1*m[u] + 1*m[wm] + 1*m[wp]");
    }

    #[test]
    fn beta_on_sl2_t() {
        let d = builtin_datum("sl2-T").unwrap();
        let t = ActionTable::from_datum(&d).unwrap();
        let dual = Duality::from_datum(&d, &t).unwrap();
        let b = dual.beta(&MqElement::basis(p(&d, "p0")));
        assert_eq!(b, MqElement::basis(p(&d, "p0")));
        let b = dual.beta(&MqElement::basis(p(&d, "wt")));
        assert_eq!(
            b.render(&d),
            "+ (q^{-1}-1)*m[p0] + (q^{-1}-1)*m[pInf] + q^{-1}*m[wt]"
        );
    }

    #[test]
    fn derived_duality_matches_tables() {
        let d = builtin_datum("hecke-regular:B2").unwrap();
        let t = ActionTable::from_datum(&d).unwrap();
        let given = Duality::from_datum(&d, &t).unwrap();
        let derived = Duality::derive(&d, &t).unwrap();
        for q in d.param_ids() {
            assert_eq!(given.beta_basis(q), derived.beta_basis(q));
        }
        // case T: everything but the sign system is forced
        let d = builtin_datum("sl2-T").unwrap();
        let t = ActionTable::from_datum(&d).unwrap();
        assert_eq!(
            Duality::derive(&d, &t).unwrap_err(),
            MqError::MissingCostandard("ws".into())
        );
        // case N: the pair over the open orbit is not separated
        let d = builtin_datum("sl2-N").unwrap();
        let t = ActionTable::from_datum(&d).unwrap();
        assert!(matches!(
            Duality::derive(&d, &t),
            Err(MqError::MissingCostandard(_))
        ));
    }

    #[test]
    fn regular_action_is_multiplication() {
        let d = builtin_datum("hecke-regular:A2").unwrap();
        let sys = d.coxeter().clone();
        let alg = HeckeAlgebra::new(sys.clone());
        let t = ActionTable::from_datum(&d).unwrap();
        let to_m = |h: &HeckeElt| {
            let mut x = MqElement::zero();
            for (w, c) in h.terms() {
                x.add_term(d.find_param(&sys.element_token(w)).unwrap(), c);
            }
            x
        };
        for v in sys.elements() {
            for w in sys.elements() {
                let prod = alg.t(v).mul(&alg.t(w)).unwrap();
                let mw = MqElement::basis(d.find_param(&sys.element_token(w)).unwrap());
                assert_eq!(t.apply_tw(v, &mw), to_m(&prod));
            }
        }
        let e = d.find_param("e").unwrap();
        let word = t.apply_word(&[0, 1], &MqElement::basis(e));
        let composed = t.apply_t(0, &t.apply_t(1, &MqElement::basis(e)));
        assert_eq!(word, composed);
        assert_eq!(
            t.apply_tw(sys.identity(), &MqElement::basis(e)),
            MqElement::basis(e)
        );
    }

    #[test]
    fn mismatched_system() {
        let d = builtin_datum("sl2-T").unwrap();
        let t = ActionTable::from_datum(&d).unwrap();
        let other = Arc::new(CoxeterSystem::from_label("A2").unwrap());
        let h = HeckeElt::one(&other);
        assert_eq!(t.act(&h, &MqElement::zero()), Err(MqError::SystemMismatch));
    }

    fn arb_element(n: usize) -> impl Strategy<Value = Vec<(usize, i32, i64)>> {
        proptest::collection::vec((0..n, -3i32..4, -5i64..6), 0..8)
    }

    proptest! {
        #[test]
        fn beta_is_involutive(terms in arb_element(4), which in 0usize..4) {
            let name = ["sl2-T", "sl2-N", "hecke-regular:A2", "hecke-regular:B2"][which];
            let d = builtin_datum(name).unwrap();
            let t = ActionTable::from_datum(&d).unwrap();
            let dual = Duality::from_datum(&d, &t).unwrap();
            let n = d.params().len();
            let mut x = MqElement::zero();
            for (i, e, c) in terms {
                x.add_term(ParamId(i % n), &LaurentPoly::monomial(c, e));
            }
            prop_assert_eq!(dual.beta(&dual.beta(&x)), x.clone());
            for s in 0..d.rank() {
                prop_assert_eq!(dual.beta(&t.apply_t(s, &x)), bar_ts(&t, s, &dual.beta(&x)));
            }
        }
    }
}
