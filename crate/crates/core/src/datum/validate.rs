//! Total, side-effect free validation of a datum. Every check is reported by
//! name; downstream computations require all of them to pass.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{CaseDescriptor, OrbitDatum, OrbitId, ParamId};
use crate::hecke::HeckeAlgebra;
use crate::laurent::LaurentPoly;
use crate::mq::{bar_ts, ActionTable, Duality, MqElement, MqError};
use crate::report::{CheckResult, Report};

pub const CHECK_REACHABILITY: &str = "thm-order-reachability";
pub const CHECK_S_STAR: &str = "s-star-monotone";
pub const CHECK_QUADRATIC: &str = "quadratic-relation";
pub const CHECK_BRAID: &str = "braid-relations";
pub const CHECK_LINKS: &str = "link-mirroring";
pub const CHECK_INVOLUTION: &str = "costandard-involution";
pub const CHECK_DIMS: &str = "dim-closure-consistency";
pub const CHECK_SERIES: &str = "stabilizer-series";

/// Runs every check on `d`.
pub fn validate_datum(d: &OrbitDatum) -> Report {
    let table = ActionTable::from_datum_lenient(d);
    let mut report = Report::default();
    report.push(CheckResult::from_failures(
        CHECK_REACHABILITY,
        reachability(d),
    ));
    report.push(CheckResult::from_failures(CHECK_S_STAR, s_star_monotone(d)));
    report.push(CheckResult::from_failures(
        CHECK_QUADRATIC,
        quadratic(d, &table),
    ));
    report.push(CheckResult::from_failures(CHECK_BRAID, braid(d, &table)));
    report.push(CheckResult::from_failures(CHECK_LINKS, links(d)));
    report.push(involution(d, &table));
    report.push(CheckResult::from_failures(CHECK_DIMS, dims(d)));
    report.push(CheckResult::from_failures(CHECK_SERIES, series(d)));
    report
}

fn s_star_or_self(d: &OrbitDatum, s: usize, v: OrbitId) -> OrbitId {
    d.s_star(s, v).unwrap_or(v)
}

/// Every non-closed orbit is `s * v` for some strictly lower `v`, and every
/// orbit lying strictly below another has some `s` with `s * v != v`.
fn reachability(d: &OrbitDatum) -> Vec<String> {
    let mut failures = Vec::new();
    let n = d.orbits().len();
    let mut incoming = vec![false; n];
    let mut outgoing = vec![false; n];
    for s in 0..d.rank() {
        for v in (0..n).map(OrbitId) {
            let w = s_star_or_self(d, s, v);
            if w != v {
                outgoing[v.0] = true;
                if d.orbit_leq(v, w) {
                    incoming[w.0] = true;
                }
            }
        }
    }
    for (i, o) in d.orbits().iter().enumerate() {
        if !o.closed && !incoming[i] {
            failures.push(format!(
                "orbit `{}` is not closed but no s * v reaches it",
                o.id
            ));
        }
        let below_something = (0..n).any(|j| j != i && d.orbit_leq(OrbitId(i), OrbitId(j)));
        if below_something && !outgoing[i] {
            failures.push(format!(
                "orbit `{}` lies in a larger closure but has no ascent",
                o.id
            ));
        }
    }
    failures
}

fn s_star_monotone(d: &OrbitDatum) -> Vec<String> {
    let mut failures = Vec::new();
    for s in 0..d.rank() {
        for (i, o) in d.orbits().iter().enumerate() {
            match d.s_star(s, OrbitId(i)) {
                Ok(w) if !d.orbit_leq(OrbitId(i), w) => failures.push(format!(
                    "s{}: `{}` is not below s * `{}` = `{}`",
                    s + 1,
                    o.id,
                    o.id,
                    d.orbit(w).id
                )),
                Ok(_) => {}
                Err(e) => failures.push(e.to_string()),
            }
        }
    }
    failures
}

/// `(T_s + 1)(T_s - q) m_p = 0`
fn quadratic(d: &OrbitDatum, table: &ActionTable) -> Vec<String> {
    let mut failures = Vec::new();
    let q = LaurentPoly::q();
    for s in 0..d.rank() {
        for p in d.param_ids() {
            let m = MqElement::basis(p);
            let t_minus_q = {
                let mut x = table.apply_t(s, &m);
                x.add_scaled(&-&q, &m);
                x
            };
            let r = table.apply_c(s, &t_minus_q);
            if !r.is_zero() {
                failures.push(format!(
                    "s{}: (T_s+1)(T_s-q) m[{}] = {}",
                    s + 1,
                    d.param(p).id,
                    r.render(d)
                ));
            }
        }
    }
    failures
}

fn braid(d: &OrbitDatum, table: &ActionTable) -> Vec<String> {
    let sys = d.coxeter();
    let mut failures = Vec::new();
    for s in 0..d.rank() {
        for t in s + 1..d.rank() {
            let m = sys.braid_order(s, t);
            let lhs: Vec<usize> = (0..m).map(|i| if i % 2 == 0 { s } else { t }).collect();
            let rhs: Vec<usize> = (0..m).map(|i| if i % 2 == 0 { t } else { s }).collect();
            for p in d.param_ids() {
                let x = MqElement::basis(p);
                if table.apply_word(&lhs, &x) != table.apply_word(&rhs, &x) {
                    failures.push(format!(
                        "braid relation for (s{}, s{}) fails on m[{}]",
                        s + 1,
                        t + 1,
                        d.param(p).id
                    ));
                }
            }
        }
    }
    failures
}

/// Descriptor coverage, dimension direction of links, and the mirror
/// structure of cases U, T and N.
fn links(d: &OrbitDatum) -> Vec<String> {
    let mut failures = Vec::new();
    let id = |p: ParamId| d.param(p).id.as_str();
    for s in 0..d.rank() {
        let tag = format!("s{}", s + 1);
        for p in d.param_ids() {
            let Some(desc) = d.action(s, p) else {
                failures.push(format!("{tag}: no descriptor for `{}`", id(p)));
                continue;
            };
            let up = |t: ParamId, f: &mut Vec<String>| {
                if d.dim(t) <= d.dim(p) {
                    f.push(format!(
                        "{tag}: ascent `{}` -> `{}` does not raise dimension",
                        id(p),
                        id(t)
                    ));
                }
            };
            let down = |t: ParamId, f: &mut Vec<String>| {
                if d.dim(t) >= d.dim(p) {
                    f.push(format!(
                        "{tag}: descent `{}` -> `{}` does not lower dimension",
                        id(p),
                        id(t)
                    ));
                }
            };
            let expect = |t: ParamId, ok: bool, want: &str, f: &mut Vec<String>| {
                if !ok {
                    f.push(format!(
                        "{tag}: `{}` is not mirrored by `{}` ({want} expected, found {})",
                        id(p),
                        id(t),
                        d.action(s, t).map_or("nothing", CaseDescriptor::case_name)
                    ));
                }
            };
            match desc {
                CaseDescriptor::CompactG
                | CaseDescriptor::DescentTNonParity
                | CaseDescriptor::ExplicitRow { .. } => {}
                CaseDescriptor::AscentU { up: u } => {
                    up(*u, &mut failures);
                    let ok = matches!(d.action(s, *u), Some(CaseDescriptor::DescentU { down }) if *down == p);
                    expect(*u, ok, "DescentU", &mut failures);
                }
                CaseDescriptor::DescentU { down: t } => {
                    down(*t, &mut failures);
                    let ok =
                        matches!(d.action(s, *t), Some(CaseDescriptor::AscentU { up }) if *up == p);
                    expect(*t, ok, "AscentU", &mut failures);
                }
                CaseDescriptor::AscentT { cross, up: u } => {
                    up(*u, &mut failures);
                    if d.dim(*cross) != d.dim(p) || *cross == p {
                        failures.push(format!("{tag}: cross link of `{}` is not a distinct parameter of equal dimension", id(p)));
                    }
                    let ok = matches!(d.action(s, *cross), Some(CaseDescriptor::AscentT { cross: c, up: v }) if *c == p && v == u);
                    expect(*cross, ok, "AscentT", &mut failures);
                    let ok = matches!(d.action(s, *u), Some(CaseDescriptor::DescentT { downs })
                        if BTreeSet::from(*downs) == BTreeSet::from([p, *cross]));
                    expect(*u, ok, "DescentT", &mut failures);
                }
                CaseDescriptor::DescentT { downs } => {
                    if downs[0] == downs[1] {
                        failures.push(format!(
                            "{tag}: DescentT of `{}` repeats `{}`",
                            id(p),
                            id(downs[0])
                        ));
                    }
                    for (i, &t) in downs.iter().enumerate() {
                        down(t, &mut failures);
                        let other = downs[1 - i];
                        let ok = matches!(d.action(s, t), Some(CaseDescriptor::AscentT { cross, up }) if *cross == other && *up == p);
                        expect(t, ok, "AscentT", &mut failures);
                    }
                }
                CaseDescriptor::AscentN { ups } => {
                    if ups[0] == ups[1] {
                        failures.push(format!(
                            "{tag}: AscentN of `{}` repeats `{}`",
                            id(p),
                            id(ups[0])
                        ));
                    }
                    for (i, &t) in ups.iter().enumerate() {
                        up(t, &mut failures);
                        let other = ups[1 - i];
                        let ok = matches!(d.action(s, t), Some(CaseDescriptor::DescentN { partner, down }) if *partner == other && *down == p);
                        expect(t, ok, "DescentN", &mut failures);
                    }
                }
                CaseDescriptor::DescentN { partner, down: t } => {
                    down(*t, &mut failures);
                    if d.dim(*partner) != d.dim(p) || *partner == p {
                        failures.push(format!(
                            "{tag}: partner of `{}` is not a distinct parameter of equal dimension",
                            id(p)
                        ));
                    }
                    let ok = matches!(d.action(s, *partner), Some(CaseDescriptor::DescentN { partner: r, down: u }) if *r == p && u == t);
                    expect(*partner, ok, "DescentN", &mut failures);
                    let ok = matches!(d.action(s, *t), Some(CaseDescriptor::AscentN { ups })
                        if BTreeSet::from(*ups) == BTreeSet::from([p, *partner]));
                    expect(*t, ok, "AscentN", &mut failures);
                }
            }
        }
    }
    failures
}

/// `beta` is an involution compatible with `bar(T_s)`, and the costandard
/// table is unitriangular. Datums with case N rows must carry a table.
fn involution(d: &OrbitDatum, table: &ActionTable) -> CheckResult {
    let mut failures = Vec::new();
    if d.costandard().is_none() && d.has_two_cayley_rows() {
        failures.push("case N rows present but no costandard table".to_string());
        return CheckResult::from_failures(CHECK_INVOLUTION, failures);
    }
    let dual = match Duality::from_datum(d, table) {
        Ok(dual) => dual,
        Err(MqError::MissingCostandard(which)) => {
            return CheckResult::pass(
                CHECK_INVOLUTION,
                format!("no costandard table and duality not derivable for {which}; skipped"),
            )
        }
        Err(e) => {
            failures.push(e.to_string());
            return CheckResult::from_failures(CHECK_INVOLUTION, failures);
        }
    };
    for p in d.param_ids() {
        let n = dual.costandard(p);
        if !n.coeff(p).is_one() {
            failures.push(format!(
                "n[{}] has diagonal coefficient {}",
                d.param(p).id,
                n.coeff(p)
            ));
        }
        for (t, _) in n.terms() {
            let (ot, op) = (d.param(t).orbit, d.param(p).orbit);
            if t != p && (ot == op || !d.orbit_leq(ot, op)) {
                failures.push(format!(
                    "n[{}] involves m[{}], which is not on a lower orbit",
                    d.param(p).id,
                    d.param(t).id
                ));
            }
        }
        let m = MqElement::basis(p);
        if dual.beta(&dual.beta(&m)) != m {
            failures.push(format!(
                "beta(beta(m[{}])) != m[{}]",
                d.param(p).id,
                d.param(p).id
            ));
        }
        for s in 0..d.rank() {
            if dual.beta(&table.apply_t(s, &m)) != bar_ts(table, s, &dual.beta(&m)) {
                failures.push(format!(
                    "beta(T_s m[{}]) != bar(T_s) beta(m[{}]) for s{}",
                    d.param(p).id,
                    d.param(p).id,
                    s + 1
                ));
            }
        }
    }
    CheckResult::from_failures(CHECK_INVOLUTION, failures)
}

fn dims(d: &OrbitDatum) -> Vec<String> {
    let mut failures = Vec::new();
    let n = d.orbits().len();
    for i in 0..n {
        for j in 0..n {
            if i == j || !d.orbit_leq(OrbitId(i), OrbitId(j)) {
                continue;
            }
            let (a, b) = (d.orbit(OrbitId(i)), d.orbit(OrbitId(j)));
            if a.dim >= b.dim {
                failures.push(format!(
                    "`{}` <= `{}` but dim {} >= {}",
                    a.id, b.id, a.dim, b.dim
                ));
            }
            if b.closed {
                failures.push(format!("closed orbit `{}` lies above `{}`", b.id, a.id));
            }
        }
    }
    for p in d.params() {
        if p.dim != d.orbit(p.orbit).dim {
            failures.push(format!(
                "parameter `{}` has dim {} but its orbit has {}",
                p.id,
                p.dim,
                d.orbit(p.orbit).dim
            ));
        }
    }
    failures
}

/// Constant term 1, no negative powers, non-negative expansion.
fn series(d: &OrbitDatum) -> Vec<String> {
    let mut failures = Vec::new();
    for p in d.param_ids() {
        let pi = d.poincare(p);
        let (start, coeffs) = pi.expand(10);
        let id = &d.param(p).id;
        if start < 0
            && coeffs
                .iter()
                .take((-start) as usize)
                .any(|c| *c != ibig::IBig::from(0))
        {
            failures.push(format!("pi[{id}] = {pi} has negative powers of q"));
        }
        if pi.numerator().coeff(0) != ibig::IBig::from(1) || pi.numerator().min_exp() != Some(0) {
            failures.push(format!("pi[{id}] = {pi} does not have constant term 1"));
        }
        if coeffs.iter().any(|c| *c < ibig::IBig::from(0)) {
            failures.push(format!("pi[{id}] = {pi} has a negative coefficient"));
        }
    }
    failures
}

/// A datum that passed validation, with its action matrices, duality (when
/// determined) and Hecke algebra.
pub struct ValidatedDatum {
    datum: OrbitDatum,
    actions: ActionTable,
    duality: Result<Duality, MqError>,
    report: Report,
    hecke: HeckeAlgebra,
}

/// Validation failed; the report names the failing checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationFailure {
    pub report: Report,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "datum failed validation: {}",
            self.report.failed_names().join(", ")
        )
    }
}

impl std::error::Error for ValidationFailure {}

impl ValidatedDatum {
    pub fn new(datum: OrbitDatum) -> Result<Self, ValidationFailure> {
        let report = validate_datum(&datum);
        if !report.passed() {
            return Err(ValidationFailure { report });
        }
        let actions =
            ActionTable::from_datum(&datum).expect("validated datums have every descriptor");
        let duality = Duality::from_datum(&datum, &actions);
        let hecke = HeckeAlgebra::new(Arc::clone(datum.coxeter()));
        Ok(Self {
            datum,
            actions,
            duality,
            report,
            hecke,
        })
    }

    pub fn datum(&self) -> &OrbitDatum {
        &self.datum
    }

    pub fn actions(&self) -> &ActionTable {
        &self.actions
    }

    pub fn duality(&self) -> Result<&Duality, MqError> {
        self.duality.as_ref().map_err(Clone::clone)
    }

    pub fn report(&self) -> &Report {
        &self.report
    }

    pub fn hecke(&self) -> &HeckeAlgebra {
        &self.hecke
    }
}
