//! The invariant suites run by `klvwb check`.

use std::fmt;

use ibig::IBig;
use serde::Serialize;

use crate::coxeter::CoxElt;
use crate::datum::{validate_datum, OrbitDatum, ParamId, ValidatedDatum};
use crate::extcalc::ExtCalculator;
use crate::hecke::{verify_kl_basis, HeckeAlgebra, HeckeElt};
use crate::klv::{
    c_expansion, c_is_self_dual, for_each_c_expansion, is_clean, is_cuspidal, klv_table,
    verify_klv_table, KlvError, KlvTable,
};
use crate::laurent::LaurentPoly;
use crate::mq::{bar_ts, MqElement};
use crate::report::{CheckResult, Report};

pub const SUITES: [&str; 10] = [
    "validation",
    "hecke-oracle",
    "involution",
    "klv-verify",
    "cross-oracle",
    "cuspidal-implies-clean",
    "positivity",
    "integrality",
    "parity",
    "ext-anchors",
];

/// The outcome of all suites on one datum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub datum: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "datum: {}", self.datum)?;
        let report = Report {
            checks: self.checks.clone(),
        };
        write!(f, "{report}")?;
        writeln!(f, "result: {}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// Runs every suite. A failed validation stops before the computations;
/// solver failures are returned as errors.
pub fn run_suites(datum: OrbitDatum, window: i32) -> Result<SuiteReport, KlvError> {
    let name = datum.name().to_string();
    let validation = validate_datum(&datum);
    let mut report = Report::default();
    if !validation.passed() {
        let details = validation
            .checks
            .iter()
            .filter(|c| !c.passed)
            .flat_map(|c| {
                let name = c.name.clone();
                c.details.iter().map(move |d| format!("{name}: {d}"))
            })
            .collect();
        report.push(CheckResult::from_failures("validation", details));
        report.checks[0].passed = false;
        return Ok(finish(name, report));
    }
    report.push(CheckResult::pass(
        "validation",
        format!("{} datum checks passed", validation.checks.len()),
    ));
    let vd = ValidatedDatum::new(datum).expect("validation passed");
    let table = klv_table(&vd)?;
    let calc = ExtCalculator::new(&vd, &table)?;

    report.push(hecke_oracle(vd.hecke()));
    report.push(involution(&vd, &table));
    report.push(CheckResult::from_failures(
        "klv-verify",
        verify_klv_table(&table, &vd),
    ));
    report.push(cross_oracle(&vd, &table));
    report.push(cuspidal_implies_clean(&vd, &table));
    let (positivity, integrality) = sweep(&vd, &table);
    report.push(positivity);
    report.push(integrality);
    report.push(parity(&vd, &calc, window));
    report.push(ext_anchors(&vd, &table, &calc));
    Ok(finish(name, report))
}

fn finish(datum: String, report: Report) -> SuiteReport {
    SuiteReport {
        datum,
        passed: report.passed(),
        checks: report.checks,
    }
}

/// Quadratic and braid relations of the `T_s` by left multiplication on
/// every `T_w`, `C_s^2 = (q+1) C_s`, and the defining properties of the
/// Kazhdan-Lusztig basis.
pub fn hecke_oracle(alg: &HeckeAlgebra) -> CheckResult {
    let sys = alg.system();
    let mut failures = Vec::new();
    let q = LaurentPoly::q();
    for s in 0..sys.rank() {
        for w in sys.elements() {
            let tw = alg.t(w);
            let ts_tw = tw.mul_simple_left(s);
            let lhs = ts_tw.mul_simple_left(s);
            let mut rhs = ts_tw.scale(&LaurentPoly::from_coeffs(0, &[-1, 1]));
            rhs.add_term(w, &q);
            if lhs != rhs {
                failures.push(format!(
                    "T_s^2 != (q-1)T_s + q on T[{}] for s{}",
                    sys.element_token(w),
                    s + 1
                ));
            }
        }
        let cs = alg.kl_basis().c(sys.generator(s));
        let sq = cs.mul(cs).expect("same system");
        if sq != cs.scale(&LaurentPoly::from_coeffs(0, &[1, 1])) {
            failures.push(format!("C_s^2 != (q+1) C_s for s{}", s + 1));
        }
        for t in s + 1..sys.rank() {
            let m = sys.braid_order(s, t);
            for w in sys.elements() {
                let word = |first: usize, second: usize| {
                    (0..m).fold(alg.t(w), |acc: HeckeElt, i| {
                        acc.mul_simple_left(if i % 2 == 0 { first } else { second })
                    })
                };
                if word(s, t) != word(t, s) {
                    failures.push(format!(
                        "braid relation (s{}, s{}) fails on T[{}]",
                        s + 1,
                        t + 1,
                        sys.element_token(w)
                    ));
                }
            }
        }
    }
    failures.extend(verify_kl_basis(alg, alg.kl_basis()));
    CheckResult::from_failures("hecke-oracle", failures)
}

fn involution(vd: &ValidatedDatum, table: &KlvTable) -> CheckResult {
    let d = vd.datum();
    let dual = vd.duality().expect("klv table exists");
    let mut failures = Vec::new();
    for p in d.param_ids() {
        let id = &d.param(p).id;
        let m = MqElement::basis(p);
        let bm = dual.beta(&m);
        if dual.beta(&bm) != m {
            failures.push(format!("beta(beta(m[{id}])) != m[{id}]"));
        }
        for s in 0..d.rank() {
            if dual.beta(&vd.actions().apply_t(s, &m)) != bar_ts(vd.actions(), s, &bm) {
                failures.push(format!(
                    "beta(T_s m[{id}]) != bar(T_s) beta(m[{id}]) for s{}",
                    s + 1
                ));
            }
        }
        let l = table.element(p);
        if dual
            .beta(&l)
            .scale(&LaurentPoly::monomial(1, d.dim(p) as i32))
            != l
        {
            failures.push(format!("beta(L[{id}]) != q^-{} L[{id}]", d.dim(p)));
        }
    }
    CheckResult::from_failures("involution", failures)
}

/// The element of the Weyl group named by each parameter, when the datum is
/// the regular module.
fn regular_elements(d: &OrbitDatum) -> Option<Vec<CoxElt>> {
    let sys = d.coxeter();
    if d.params().len() != sys.order() {
        return None;
    }
    d.params()
        .iter()
        .map(|p| sys.parse_element(&p.id).ok())
        .collect()
}

/// For the regular module, the solver's table against the Kazhdan-Lusztig
/// basis; for every datum, the recursive c-expansion sweep against direct
/// evaluation at the simple reflections and the longest element.
fn cross_oracle(vd: &ValidatedDatum, table: &KlvTable) -> CheckResult {
    let d = vd.datum();
    let sys = d.coxeter().clone();
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    match regular_elements(d) {
        Some(elems) => {
            let kl = vd.hecke().kl_basis();
            for (j, &w) in elems.iter().enumerate() {
                for (i, &x) in elems.iter().enumerate() {
                    if *table.p(ParamId(i), ParamId(j)) != kl.p(x, w) {
                        failures.push(format!(
                            "P_{{{},{}}} = {} but the Kazhdan-Lusztig polynomial is {}",
                            d.params()[i].id,
                            d.params()[j].id,
                            table.p(ParamId(i), ParamId(j)),
                            kl.p(x, w)
                        ));
                    }
                }
            }
            notes.push(format!(
                "KLV table equals the Kazhdan-Lusztig table on {} elements",
                elems.len()
            ));
        }
        None => notes
            .push("not the regular module; Kazhdan-Lusztig comparison not applicable".to_string()),
    }
    let mut probes: Vec<CoxElt> = (0..sys.rank()).map(|s| sys.generator(s)).collect();
    probes.push(sys.longest());
    let mut compared = 0usize;
    for_each_c_expansion(vd, table, |w, tau, c| {
        if !probes.contains(&w) {
            return;
        }
        compared += 1;
        match c_expansion(vd, table, w, tau) {
            Ok(direct) if direct == c => {}
            Ok(_) => failures.push(format!(
                "recursive and direct C_w L[{}] differ for w = {}",
                d.param(tau).id,
                sys.element_token(w)
            )),
            Err(e) => failures.push(e.to_string()),
        }
    });
    notes.push(format!(
        "{compared} recursive c-expansions match direct evaluation"
    ));
    if failures.is_empty() {
        CheckResult {
            name: "cross-oracle".into(),
            passed: true,
            details: notes,
        }
    } else {
        CheckResult::from_failures("cross-oracle", failures)
    }
}

fn cuspidal_implies_clean(vd: &ValidatedDatum, table: &KlvTable) -> CheckResult {
    let d = vd.datum();
    let mut failures = Vec::new();
    let mut cuspidal = Vec::new();
    for tau in d.param_ids() {
        if is_cuspidal(vd, table, tau) {
            cuspidal.push(d.param(tau).id.clone());
            if !is_clean(table, tau) {
                failures.push(format!("`{}` is cuspidal but not clean", d.param(tau).id));
            }
        }
    }
    if failures.is_empty() {
        CheckResult::pass(
            "cuspidal-implies-clean",
            format!("cuspidal: {}", cuspidal.join(", ")),
        )
    } else {
        CheckResult::from_failures("cuspidal-implies-clean", failures)
    }
}

/// One pass over every `C_w L_tau`: non-negativity of the coefficients, and
/// integrality (`P` in `Z[q]`, self-dual `c`).
pub(crate) fn sweep(vd: &ValidatedDatum, table: &KlvTable) -> (CheckResult, CheckResult) {
    let d = vd.datum();
    let sys = d.coxeter().clone();
    let mut negative = Vec::new();
    let mut asymmetric = Vec::new();
    let mut count = 0usize;
    for delta in d.param_ids() {
        for g in d.param_ids() {
            if !table.p(g, delta).is_polynomial() {
                asymmetric.push(format!(
                    "P_{{{},{}}} = {} has negative powers of q",
                    d.param(g).id,
                    d.param(delta).id,
                    table.p(g, delta)
                ));
            }
        }
    }
    for_each_c_expansion(vd, table, |w, tau, c| {
        for (g, cg) in c.iter().enumerate() {
            if cg.is_zero() {
                continue;
            }
            count += 1;
            let label = || {
                format!(
                    "c^{}_{{{},{}}} = {cg}",
                    sys.element_token(w),
                    d.params()[g].id,
                    d.param(tau).id
                )
            };
            if !cg.is_nonnegative() {
                negative.push(format!("{} has a negative coefficient", label()));
            }
            if !c_is_self_dual(cg, sys.length(w), d.dim(tau), d.dim(ParamId(g))) {
                asymmetric.push(format!("{} is not self-dual", label()));
            }
        }
    });
    let total = sys.order() * d.params().len();
    let positivity = if negative.is_empty() {
        CheckResult::pass(
            "positivity",
            format!("{total} expansions, {count} nonzero coefficients, all non-negative"),
        )
    } else {
        CheckResult::from_failures("positivity", negative)
    };
    let integrality = if asymmetric.is_empty() {
        CheckResult::pass("integrality", "P in Z[q]; every c^w self-dual")
    } else {
        CheckResult::from_failures("integrality", asymmetric)
    };
    (positivity, integrality)
}

/// Every Ext and intersection cohomology series is non-negative and lives in
/// a single parity of degrees, up to `q^window`.
pub fn parity(vd: &ValidatedDatum, calc: &ExtCalculator<'_>, window: i32) -> CheckResult {
    let d = vd.datum();
    let mut failures = Vec::new();
    let mut series = 0usize;
    let mut check = |e: crate::extcalc::ExtSeries, label: String| {
        series += 1;
        if !e.graded.supported_in_parity(e.expected_parity(), window) {
            failures.push(format!("{label} = {} is not single-parity", e.series()));
        }
        if !e.graded.is_nonnegative(window) {
            failures.push(format!(
                "{label} = {} has a negative coefficient",
                e.series()
            ));
        }
    };
    for tau in d.param_ids() {
        check(calc.ic(tau), format!("IC[{}]", d.param(tau).id));
        for gamma in d.param_ids() {
            check(
                calc.ext(tau, gamma),
                format!("E({}, {})", d.param(tau).id, d.param(gamma).id),
            );
        }
    }
    if failures.is_empty() {
        CheckResult::pass(
            "parity",
            format!("{series} series single-parity up to q^{window}"),
        )
    } else {
        CheckResult::from_failures("parity", failures)
    }
}

/// `E(tau, tau)` starts with `1` and has no negative powers; clean
/// parameters on incomparable orbits have vanishing Ext.
fn ext_anchors(vd: &ValidatedDatum, table: &KlvTable, calc: &ExtCalculator<'_>) -> CheckResult {
    let d = vd.datum();
    let mut failures = Vec::new();
    for tau in d.param_ids() {
        let id = &d.param(tau).id;
        let e = calc.ext(tau, tau);
        let (start, coeffs) = e.series().expand(0);
        if start != 0 || coeffs != [IBig::from(1)] {
            failures.push(format!(
                "E({id}, {id}) = {} does not start with 1",
                e.series()
            ));
        }
        for gamma in d.param_ids() {
            let (ot, og) = (d.param(tau).orbit, d.param(gamma).orbit);
            if tau == gamma
                || d.orbit_leq(ot, og)
                || d.orbit_leq(og, ot)
                || !is_clean(table, tau)
                || !is_clean(table, gamma)
            {
                continue;
            }
            let e = calc.ext(tau, gamma);
            if !e.series().is_zero() {
                failures.push(format!(
                    "E({id}, {}) = {} between clean parameters on incomparable orbits",
                    d.param(gamma).id,
                    e.series()
                ));
            }
        }
    }
    CheckResult::from_failures("ext-anchors", failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{builtin_datum, CaseDescriptor};

    #[test]
    fn sl2_suites_pass() {
        for name in ["sl2-T", "sl2-N", "hecke-regular:A2"] {
            let r = run_suites(builtin_datum(name).unwrap(), 10).unwrap();
            assert!(r.passed, "{r}");
            let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
            assert_eq!(names, SUITES);
        }
    }

    #[test]
    fn report_text() {
        let r = run_suites(builtin_datum("sl2-T").unwrap(), 10).unwrap();
        let text = r.to_string();
        assert!(
            text.starts_with("datum: sl2-T\nvalidation: PASS\n"),
            "{text}"
        );
        assert!(text.contains("  - cuspidal: p0, pInf, ws\n"), "{text}");
        assert!(text.ends_with("result: PASS\n"));
    }

    #[test]
    fn broken_datum_stops_at_validation() {
        let mut d = builtin_datum("sl2-N").unwrap();
        let u = d.find_param("u").unwrap();
        d.set_action(0, u, Some(CaseDescriptor::CompactG));
        let r = run_suites(d, 10).unwrap();
        assert!(!r.passed);
        assert_eq!(r.checks.len(), 1);
        assert!(r.checks[0]
            .details
            .iter()
            .any(|m| m.starts_with("thm-order-reachability:")));
    }

    #[test]
    fn missing_costandard_is_an_error() {
        let mut d = builtin_datum("sl2-T").unwrap();
        d.set_costandard(None);
        assert!(matches!(run_suites(d, 10), Err(KlvError::Mq(_))));
    }
}
