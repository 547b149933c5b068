//! The self-dual basis `L_d = sum_g P_{g,d} m_g` of `M_q`, its polynomials
//! and mu-coefficients, the coefficients `c^w_{g,t}` of `C_w L_t`, and the
//! derived notions of cleanness and cuspidality.

use ibig::IBig;
use serde::Serialize;
use thiserror::Error;

use crate::coxeter::CoxElt;
use crate::datum::{OrbitDatum, ParamId, ValidatedDatum};
use crate::extcalc::ExtCalculator;
use crate::laurent::LaurentPoly;
use crate::mq::{Duality, MqElement, MqError};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KlvError {
    #[error("no self-dual degree-bounded basis element for `{param}`: {reason}")]
    NonGeometricDatum { param: String, reason: String },
    #[error(transparent)]
    Mq(#[from] MqError),
}

/// `P_{g,d}` for all pairs, columns indexed by `d` in basis order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KlvTable {
    dims: Vec<u32>,
    cols: Vec<Vec<LaurentPoly>>,
    /// Nonzero rows of each column, ascending.
    support: Vec<Vec<usize>>,
}

fn support_of(col: &[LaurentPoly]) -> Vec<usize> {
    (0..col.len()).filter(|&i| !col[i].is_zero()).collect()
}

impl KlvTable {
    /// A table from explicit columns `cols[d][g] = P_{g,d}`, for verification.
    pub fn from_columns(d: &OrbitDatum, cols: Vec<Vec<LaurentPoly>>) -> Self {
        let support = cols.iter().map(|c| support_of(c)).collect();
        Self {
            dims: d.params().iter().map(|p| p.dim).collect(),
            cols,
            support,
        }
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn p(&self, g: ParamId, d: ParamId) -> &LaurentPoly {
        &self.cols[d.0][g.0]
    }

    /// Replaces one entry (for constructing corrupted tables in tests).
    pub fn set(&mut self, g: ParamId, d: ParamId, value: LaurentPoly) {
        self.cols[d.0][g.0] = value;
        self.support[d.0] = support_of(&self.cols[d.0]);
    }

    /// `L_d` in the standard basis.
    pub fn element(&self, d: ParamId) -> MqElement {
        MqElement::from_dense(&self.cols[d.0])
    }

    pub(crate) fn dense(&self, d: ParamId) -> &[LaurentPoly] {
        &self.cols[d.0]
    }

    pub(crate) fn support(&self, d: ParamId) -> &[usize] {
        &self.support[d.0]
    }

    /// Coordinates of `x` in the `L` basis, by back-substitution from the top.
    pub fn to_l_basis(&self, x: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let mut rest = x.to_vec();
        let mut out = vec![LaurentPoly::zero(); x.len()];
        for g in (0..x.len()).rev() {
            if rest[g].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut rest[g]);
            for &e in &self.support[g] {
                if e != g {
                    rest[e] -= &(&c * &self.cols[g][e]);
                }
            }
            out[g] = c;
        }
        out
    }

    pub fn to_csv(&self, d: &OrbitDatum) -> String {
        let mut out = String::from("gamma,delta,P\n");
        for row in self.rows(d) {
            out.push_str(&format!("{},{},{}\n", row.gamma, row.delta, row.p));
        }
        out
    }

    /// Nonzero entries, ordered by `delta` then `gamma` in basis order.
    pub fn rows(&self, d: &OrbitDatum) -> Vec<KlvRow> {
        let mut rows = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            for &i in &self.support[j] {
                rows.push(KlvRow {
                    gamma: d.params()[i].id.clone(),
                    delta: d.params()[j].id.clone(),
                    p: col[i].to_string(),
                });
            }
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KlvRow {
    pub gamma: String,
    pub delta: String,
    #[serde(rename = "P")]
    pub p: String,
}

/// Solves for the self-dual basis, processing parameters in basis order.
pub fn klv_table(vd: &ValidatedDatum) -> Result<KlvTable, KlvError> {
    solve(vd.datum(), vd.duality()?)
}

fn non_geometric(d: &OrbitDatum, p: usize, reason: String) -> KlvError {
    KlvError::NonGeometricDatum {
        param: d.params()[p].id.clone(),
        reason,
    }
}

/// Starting from `L = m_d`, repeatedly cancels the top entry of
/// `D = q^{d_d} beta(L) - L` with a degree-bounded multiple of a known
/// `L_g`; `D` is updated in place since `beta(L_g) = q^{-d_g} L_g`.
pub(crate) fn solve(d: &OrbitDatum, dual: &Duality) -> Result<KlvTable, KlvError> {
    let n = d.params().len();
    let dims: Vec<u32> = d.params().iter().map(|p| p.dim).collect();
    let mut table = KlvTable {
        dims: dims.clone(),
        cols: Vec::with_capacity(n),
        support: Vec::with_capacity(n),
    };
    let bound = 4 * n * n;
    let mut iterations = 0usize;
    for delta in 0..n {
        let dd = dims[delta] as i32;
        let mut l = vec![LaurentPoly::zero(); n];
        l[delta] = LaurentPoly::one();
        let mut diff = dual.beta_basis(ParamId(delta)).to_dense(n);
        for c in diff.iter_mut() {
            *c = c.shift(dd);
        }
        diff[delta] -= &LaurentPoly::one();
        let mut top = n;
        while let Some(g) = (0..top).rev().find(|&g| !diff[g].is_zero()) {
            iterations += 1;
            if iterations > bound {
                return Err(non_geometric(d, delta, "iteration bound exceeded".into()));
            }
            let gap = dd - dims[g] as i32;
            if g >= delta || gap <= 0 {
                return Err(non_geometric(
                    d,
                    delta,
                    format!("uncancellable term {} at `{}`", diff[g], d.params()[g].id),
                ));
            }
            let a = diff[g].truncate((gap - 1).div_euclid(2));
            let correction = &a.bar().shift(gap) - &a;
            for &e in &table.support[g] {
                let lg = &table.cols[g][e];
                l[e] += &(&a * lg);
                diff[e] += &(&correction * lg);
            }
            if !diff[g].is_zero() {
                return Err(non_geometric(
                    d,
                    delta,
                    format!(
                        "term {} at `{}` is not antisymmetric",
                        diff[g],
                        d.params()[g].id
                    ),
                ));
            }
            top = g;
        }
        table.support.push(support_of(&l));
        table.cols.push(l);
    }
    Ok(table)
}

/// Re-checks the defining properties of `t` against the datum: unit
/// diagonal, support on lower orbits, the degree bound, non-negativity and
/// self-duality `beta(L_d) = q^{-d_d} L_d`.
pub fn verify_klv_table(t: &KlvTable, vd: &ValidatedDatum) -> Vec<String> {
    let d = vd.datum();
    let mut failures = Vec::new();
    let dual = match vd.duality() {
        Ok(dual) => Some(dual),
        Err(e) => {
            failures.push(e.to_string());
            None
        }
    };
    if t.len() != d.params().len() {
        failures.push(format!(
            "table has {} columns for {} parameters",
            t.len(),
            d.params().len()
        ));
        return failures;
    }
    for delta in d.param_ids() {
        let did = &d.param(delta).id;
        if !t.p(delta, delta).is_one() {
            failures.push(format!("P_{{{did},{did}}} = {}", t.p(delta, delta)));
        }
        for g in d.param_ids().filter(|&g| g != delta) {
            let p = t.p(g, delta);
            if p.is_zero() {
                continue;
            }
            let gid = &d.param(g).id;
            let (og, od) = (d.param(g).orbit, d.param(delta).orbit);
            if og == od || !d.orbit_leq(og, od) {
                failures.push(format!(
                    "P_{{{gid},{did}}} = {p} but `{gid}` is not on a lower orbit"
                ));
            }
            let bound = (d.dim(delta) as i32 - d.dim(g) as i32 - 1).div_euclid(2);
            if !p.is_polynomial() || p.max_exp().is_some_and(|m| m > bound) {
                failures.push(format!(
                    "P_{{{gid},{did}}} = {p} violates the degree bound {bound}"
                ));
            }
            if !p.is_nonnegative() {
                failures.push(format!(
                    "P_{{{gid},{did}}} = {p} has a negative coefficient"
                ));
            }
        }
        if let Some(dual) = dual {
            let l = t.element(delta);
            let lhs = dual
                .beta(&l)
                .scale(&LaurentPoly::monomial(1, d.dim(delta) as i32));
            if lhs != l {
                failures.push(format!("L[{did}] is not self-dual"));
            }
        }
    }
    failures
}

/// Coefficient of `q^{(d_d - d_g - 1)/2}` in `P_{g,d}`, or 0 when that
/// exponent is not a non-negative integer.
pub fn mu(t: &KlvTable, g: ParamId, d: ParamId) -> IBig {
    let gap = t.dims[d.0] as i32 - t.dims[g.0] as i32;
    if gap <= 0 || gap % 2 == 0 {
        return IBig::from(0);
    }
    t.p(g, d).coeff((gap - 1) / 2)
}

pub fn is_clean(t: &KlvTable, tau: ParamId) -> bool {
    t.support(tau) == [tau.0]
}

/// `C_w L_t` in the `L` basis, computed in the standard basis and
/// back-substituted.
pub fn c_expansion(
    vd: &ValidatedDatum,
    t: &KlvTable,
    w: CoxElt,
    tau: ParamId,
) -> Result<Vec<LaurentPoly>, KlvError> {
    let kl = vd.hecke().kl_basis();
    let x = vd.actions().act_c(kl, w, &t.element(tau))?;
    Ok(t.to_l_basis(&x.to_dense(t.len())))
}

/// `C_s` in the `L` basis: `cs[s][g]` lists the nonzero coordinates of `C_s L_g`.
pub(crate) fn c_simple_matrices(
    vd: &ValidatedDatum,
    t: &KlvTable,
) -> Vec<Vec<Vec<(usize, LaurentPoly)>>> {
    let n = t.len();
    (0..vd.datum().rank())
        .map(|s| {
            (0..n)
                .map(|g| {
                    let mut x = vd.actions().apply_t_dense(s, t.dense(ParamId(g)));
                    for (e, c) in t.dense(ParamId(g)).iter().enumerate() {
                        x[e] += c;
                    }
                    t.to_l_basis(&x)
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// `C_s L_g` in the `L` basis, as a dense vector.
pub fn c_expansion_simple(
    vd: &ValidatedDatum,
    t: &KlvTable,
    s: usize,
    g: ParamId,
) -> Vec<LaurentPoly> {
    c_expansion(vd, t, vd.datum().coxeter().generator(s), g).expect("validated datum")
}

/// Calls `f(w, tau, c)` with `c = C_w L_tau` in the `L` basis, for every
/// `w` and `tau`, using `C_w = C_s C_v - sum_z mu(z, v) q^{(l(v)+1-l(z))/2} C_z`
/// (for `s` the first letter of `w` and `v = sw`) to reuse lower results.
pub fn for_each_c_expansion<F>(vd: &ValidatedDatum, t: &KlvTable, mut f: F)
where
    F: FnMut(CoxElt, ParamId, &[LaurentPoly]),
{
    let sys = vd.datum().coxeter().clone();
    let kl = vd.hecke().kl_basis();
    let n = t.len();
    let cs = c_simple_matrices(vd, t);

    // (s, v, [(z, -mu q^k)]) for each w in element order
    type Step = (usize, CoxElt, Vec<(CoxElt, LaurentPoly)>);
    let recipe: Vec<Step> = sys
        .elements()
        .map(|w| {
            if w == sys.identity() {
                return (0, w, Vec::new());
            }
            let s = sys.reduced_word(w)[0];
            let v = sys.left_mul(s, w);
            let lv = sys.length(v) as i32;
            let terms = kl
                .c(v)
                .terms()
                .filter_map(|(z, _)| {
                    let gap = lv - sys.length(z) as i32;
                    if z == v || gap % 2 == 0 || !sys.is_left_descent(s, z) {
                        return None;
                    }
                    let mu = kl.mu(z, v);
                    (mu != IBig::from(0)).then(|| (z, LaurentPoly::monomial(-mu, (gap + 1) / 2)))
                })
                .collect();
            (s, v, terms)
        })
        .collect();

    for tau in 0..n {
        let mut ys: Vec<Vec<LaurentPoly>> = Vec::with_capacity(sys.order());
        for (w, (s, v, terms)) in sys.elements().zip(&recipe) {
            let y = if w == sys.identity() {
                let mut y = vec![LaurentPoly::zero(); n];
                y[tau] = LaurentPoly::one();
                y
            } else {
                let mut y = vec![LaurentPoly::zero(); n];
                for (g, c) in ys[v.index()].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (e, a) in &cs[*s][g] {
                        y[*e] += &(c * a);
                    }
                }
                for (z, h) in terms {
                    for (e, c) in ys[z.index()].iter().enumerate() {
                        if !c.is_zero() {
                            y[e] += &(h * c);
                        }
                    }
                }
                y
            };
            f(w, ParamId(tau), &y);
            ys.push(y);
        }
    }
}

/// No lower parameter `g` with `s * orbit(g) = orbit(t)` has `L_t` in
/// `C_s L_g`. Equivalent to the summand condition because the coefficients
/// are non-negative.
pub fn is_cuspidal(vd: &ValidatedDatum, t: &KlvTable, tau: ParamId) -> bool {
    let d = vd.datum();
    let target = d.param(tau).orbit;
    (0..d.rank()).all(|s| {
        d.param_ids().all(|g| {
            let og = d.param(g).orbit;
            if og == target || d.s_star(s, og).ok() != Some(target) {
                return true;
            }
            c_expansion_simple(vd, t, s, g)[tau.0].is_zero()
        })
    })
}

/// `c = q^{l(w) + d_t - d_g} bar(c)`, the coordinate form of
/// `beta(C_w L_t) = q^{-l(w) - d_t} C_w L_t`.
pub fn c_is_self_dual(c: &LaurentPoly, length: usize, d_tau: u32, d_gamma: u32) -> bool {
    let k = length as i32 + d_tau as i32 - d_gamma as i32;
    c.bar().shift(k) == *c
}

/// Integrality of the encoding (`P` in `Z[q]`, every `c^w` self-dual)
/// and single-parity support of every Ext and intersection cohomology
/// series up to `q^window`.
pub fn parity_check(vd: &ValidatedDatum, t: &KlvTable, window: i32) -> Result<Report, KlvError> {
    let calc = ExtCalculator::new(vd, t)?;
    let mut report = Report::default();
    report.push(crate::check::sweep(vd, t).1);
    report.push(crate::check::parity(vd, &calc, window));
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CRow {
    pub w: String,
    pub tau: String,
    pub gamma: String,
    pub c: String,
}

/// Nonzero `c^w_{g,t}` rows for one `w` and the given `taus`.
pub fn c_rows(
    vd: &ValidatedDatum,
    t: &KlvTable,
    w: CoxElt,
    taus: &[ParamId],
) -> Result<Vec<CRow>, KlvError> {
    let d = vd.datum();
    let mut rows = Vec::new();
    for &tau in taus {
        for (g, c) in c_expansion(vd, t, w, tau)?.iter().enumerate() {
            if !c.is_zero() {
                rows.push(CRow {
                    w: d.coxeter().element_token(w),
                    tau: d.param(tau).id.clone(),
                    gamma: d.params()[g].id.clone(),
                    c: c.to_string(),
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::builtin_datum;
    use crate::hecke::HeckeAlgebra;

    fn validated(name: &str) -> ValidatedDatum {
        ValidatedDatum::new(builtin_datum(name).unwrap()).unwrap()
    }

    fn poly(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn sl2_t_basis() {
        let vd = validated("sl2-T");
        let d = vd.datum();
        let t = klv_table(&vd).unwrap();
        let id = |s: &str| d.find_param(s).unwrap();
        assert_eq!(
            t.element(id("wt")).render(d),
            "+ 1*m[p0] + 1*m[pInf] + 1*m[wt]"
        );
        assert_eq!(t.element(id("ws")).render(d), "+ 1*m[ws]");
        assert!(verify_klv_table(&t, &vd).is_empty());
        assert_eq!(mu(&t, id("p0"), id("wt")), IBig::from(1));
        assert!(is_clean(&t, id("ws")));
        assert!(!is_clean(&t, id("wt")));
        assert!(is_clean(&t, id("p0")));
        assert!(is_cuspidal(&vd, &t, id("ws")));
        assert!(!is_cuspidal(&vd, &t, id("wt")));
        assert!(is_cuspidal(&vd, &t, id("p0")));
    }

    #[test]
    fn sl2_t_c_expansions() {
        let vd = validated("sl2-T");
        let d = vd.datum();
        let t = klv_table(&vd).unwrap();
        let id = |s: &str| d.find_param(s).unwrap();
        let s = d.coxeter().generator(0);
        let c = c_expansion(&vd, &t, s, id("p0")).unwrap();
        assert_eq!(MqElement::from_dense(&c), MqElement::basis(id("wt")));
        let c = c_expansion(&vd, &t, s, id("wt")).unwrap();
        assert_eq!(
            MqElement::from_dense(&c),
            MqElement::monomial(id("wt"), poly("1+q"))
        );
        let c = c_expansion(&vd, &t, s, id("ws")).unwrap();
        assert!(MqElement::from_dense(&c).is_zero());
    }

    #[test]
    fn sl2_n_basis() {
        let vd = validated("sl2-N");
        let d = vd.datum();
        let t = klv_table(&vd).unwrap();
        for w in ["wp", "wm"] {
            let p = d.find_param(w).unwrap();
            assert_eq!(t.element(p).render(d), format!("+ 1*m[u] + 1*m[{w}]"));
        }
        assert!(verify_klv_table(&t, &vd).is_empty());
    }

    #[test]
    fn tampered_tables_fail() {
        let vd = validated("sl2-T");
        let d = vd.datum();
        let id = |s: &str| d.find_param(s).unwrap();
        let good = klv_table(&vd).unwrap();

        let mut t = good.clone();
        t.set(id("p0"), id("wt"), poly("q"));
        let f = verify_klv_table(&t, &vd);
        assert!(f.iter().any(|m| m.contains("degree bound")), "{f:?}");

        let mut t = good;
        t.set(id("p0"), id("wt"), LaurentPoly::zero());
        let f = verify_klv_table(&t, &vd);
        assert_eq!(f, vec!["L[wt] is not self-dual".to_string()]);
    }

    #[test]
    fn mu_parity() {
        let vd = validated("hecke-regular:A2");
        let t = klv_table(&vd).unwrap();
        let d = vd.datum();
        for g in d.param_ids() {
            for e in d.param_ids() {
                if (d.dim(e) + d.dim(g)).is_multiple_of(2) {
                    assert_eq!(mu(&t, g, e), IBig::from(0));
                }
            }
        }
        let vd = validated("hecke-regular:A1");
        let t = klv_table(&vd).unwrap();
        assert_eq!(mu(&t, ParamId(0), ParamId(1)), IBig::from(1));
    }

    #[test]
    fn regular_module_matches_kl_basis() {
        for ty in ["A1", "A2", "B2", "G2", "A3"] {
            let vd = validated(&format!("hecke-regular:{ty}"));
            let d = vd.datum();
            let t = klv_table(&vd).unwrap();
            let alg = HeckeAlgebra::new(d.coxeter().clone());
            let kl = alg.kl_basis();
            let sys = d.coxeter();
            for w in sys.elements() {
                for x in sys.elements() {
                    let pw = d.find_param(&sys.element_token(w)).unwrap();
                    let px = d.find_param(&sys.element_token(x)).unwrap();
                    assert_eq!(*t.p(px, pw), kl.p(x, w), "{ty}");
                }
            }
        }
    }

    #[test]
    fn sweep_matches_direct_expansion() {
        for name in ["sl2-T", "sl2-N", "hecke-regular:A2", "hecke-regular:B2"] {
            let vd = validated(name);
            let t = klv_table(&vd).unwrap();
            let mut count = 0;
            for_each_c_expansion(&vd, &t, |w, tau, c| {
                assert_eq!(c.to_vec(), c_expansion(&vd, &t, w, tau).unwrap(), "{name}");
                count += 1;
            });
            assert_eq!(count, vd.datum().coxeter().order() * t.len());
        }
    }

    #[test]
    fn parity_on_sl2() {
        for name in ["sl2-T", "sl2-N", "hecke-regular:B2"] {
            let vd = validated(name);
            let t = klv_table(&vd).unwrap();
            let r = parity_check(&vd, &t, 10).unwrap();
            assert!(r.passed(), "{name}: {r}");
        }
    }

    #[test]
    fn q_matrix_closed_form() {
        // L_g = q^{d_g} beta(L_g) = sum_e q^{d_g - d_e} bar(P_{e,g}) n_e
        let vd = validated("hecke-regular:B2");
        let d = vd.datum();
        let t = klv_table(&vd).unwrap();
        let dual = vd.duality().unwrap();
        for g in d.param_ids() {
            let mut x = MqElement::zero();
            for e in d.param_ids() {
                let c = t.p(e, g).bar().shift(d.dim(g) as i32 - d.dim(e) as i32);
                x.add_scaled(&c, dual.costandard(e));
            }
            assert_eq!(x, t.element(g));
        }
    }

    #[test]
    fn non_geometric_datum() {
        // n_wt = m_wt + m_p0 + m_pInf leaves a correction term that is not
        // antisymmetric, so no self-dual element exists.
        let mut d = builtin_datum("sl2-T").unwrap();
        let wt = d.find_param("wt").unwrap();
        let p0 = d.find_param("p0").unwrap();
        let p_inf = d.find_param("pInf").unwrap();
        let mut table = d.costandard().unwrap().to_vec();
        table[wt.0].insert(p0, poly("1"));
        table[wt.0].insert(p_inf, poly("1"));
        d.set_costandard(Some(table));
        let actions = crate::mq::ActionTable::from_datum(&d).unwrap();
        let dual = Duality::from_datum(&d, &actions).unwrap();
        let err = solve(&d, &dual).unwrap_err();
        assert!(matches!(err, KlvError::NonGeometricDatum { .. }), "{err:?}");
    }
}
