//! Combinatorial model of `B x K`-orbit data: orbits with their closure
//! order, parameters (orbit plus local system), the case descriptor of each
//! (simple reflection, parameter) pair, an optional costandard table and
//! per-parameter stabilizer series.
//!
//! Parameters are kept in canonical `(dim, id)` order; that order is the
//! basis order everywhere downstream.

mod builtin;
mod io;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::coxeter::{CoxeterError, CoxeterSystem};
use crate::laurent::{LaurentPoly, PoincareSeries};

pub use builtin::{builtin_datum, builtin_names};
pub use io::{load_datum, DatumFile};
pub use validate::{
    validate_datum, ValidatedDatum, ValidationFailure, CHECK_BRAID, CHECK_DIMS, CHECK_INVOLUTION,
    CHECK_LINKS, CHECK_QUADRATIC, CHECK_REACHABILITY, CHECK_SERIES, CHECK_S_STAR,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatumError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    InvalidField { field: String, message: String },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("{field}: unknown {kind} `{id}`")]
    DanglingReference {
        field: String,
        kind: &'static str,
        id: String,
    },
    #[error("missing descriptor for simple reflection s{reflection} on parameter `{param}`")]
    MissingDescriptor { reflection: usize, param: String },
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("unknown builtin datum `{0}`")]
    UnknownBuiltin(String),
    #[error("inconsistent ascent targets for s{reflection} on orbit `{orbit}`")]
    InconsistentAscent { reflection: usize, orbit: String },
}

/// Index of an orbit in [`OrbitDatum::orbits`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitId(pub usize);

/// Index of a parameter in canonical basis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitInfo {
    pub id: String,
    pub dim: u32,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub id: String,
    pub orbit: OrbitId,
    pub local_system: String,
    pub dim: u32,
}

/// How `T_s` acts on a standard class, by the orbit pattern of the `P^1`
/// fibre (cases G, U, T, N) or an explicit column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseDescriptor {
    CompactG,
    AscentU {
        up: ParamId,
    },
    DescentU {
        down: ParamId,
    },
    AscentT {
        cross: ParamId,
        up: ParamId,
    },
    DescentT {
        downs: [ParamId; 2],
    },
    DescentTNonParity,
    AscentN {
        ups: [ParamId; 2],
    },
    DescentN {
        partner: ParamId,
        down: ParamId,
    },
    ExplicitRow {
        coeffs: BTreeMap<ParamId, LaurentPoly>,
    },
}

impl CaseDescriptor {
    pub fn case_name(&self) -> &'static str {
        match self {
            Self::CompactG => "CompactG",
            Self::AscentU { .. } => "AscentU",
            Self::DescentU { .. } => "DescentU",
            Self::AscentT { .. } => "AscentT",
            Self::DescentT { .. } => "DescentT",
            Self::DescentTNonParity => "DescentTNonParity",
            Self::AscentN { .. } => "AscentN",
            Self::DescentN { .. } => "DescentN",
            Self::ExplicitRow { .. } => "ExplicitRow",
        }
    }

    /// Parameters reached upward by this descriptor.
    pub fn ascent_targets(&self) -> Vec<ParamId> {
        match self {
            Self::AscentU { up } => vec![*up],
            Self::AscentT { up, .. } => vec![*up],
            Self::AscentN { ups } => ups.to_vec(),
            _ => Vec::new(),
        }
    }

    pub fn is_two_cayley(&self) -> bool {
        matches!(self, Self::AscentN { .. } | Self::DescentN { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitDatum {
    pub(crate) name: String,
    pub(crate) coxeter: Arc<CoxeterSystem>,
    pub(crate) orbits: Vec<OrbitInfo>,
    pub(crate) closure_pairs: Vec<(OrbitId, OrbitId)>,
    pub(crate) closure: Vec<Vec<bool>>,
    pub(crate) params: Vec<Parameter>,
    /// `actions[s][param]`; `None` only for in-memory edits (loading rejects gaps).
    pub(crate) actions: Vec<Vec<Option<CaseDescriptor>>>,
    /// Costandard expansion `n_p = m_p + lower terms`, one map per parameter.
    pub(crate) costandard: Option<Vec<BTreeMap<ParamId, LaurentPoly>>>,
    pub(crate) poincare: Vec<PoincareSeries>,
}

impl OrbitDatum {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coxeter(&self) -> &Arc<CoxeterSystem> {
        &self.coxeter
    }

    pub fn rank(&self) -> usize {
        self.coxeter.rank()
    }

    pub fn orbits(&self) -> &[OrbitInfo] {
        &self.orbits
    }

    pub fn orbit(&self, o: OrbitId) -> &OrbitInfo {
        &self.orbits[o.0]
    }

    pub fn params(&self) -> &[Parameter] {
        &self.params
    }

    pub fn param(&self, p: ParamId) -> &Parameter {
        &self.params[p.0]
    }

    pub fn param_ids(&self) -> impl ExactSizeIterator<Item = ParamId> {
        (0..self.params.len()).map(ParamId)
    }

    pub fn dim(&self, p: ParamId) -> u32 {
        self.params[p.0].dim
    }

    pub fn find_param(&self, id: &str) -> Option<ParamId> {
        self.params.iter().position(|p| p.id == id).map(ParamId)
    }

    pub fn find_orbit(&self, id: &str) -> Option<OrbitId> {
        self.orbits.iter().position(|o| o.id == id).map(OrbitId)
    }

    pub fn params_on(&self, o: OrbitId) -> impl Iterator<Item = ParamId> + '_ {
        self.param_ids()
            .filter(move |&p| self.params[p.0].orbit == o)
    }

    /// Reflexive-transitive closure order: `v <= w` iff `v` lies in the closure of `w`.
    pub fn orbit_leq(&self, v: OrbitId, w: OrbitId) -> bool {
        self.closure[v.0][w.0]
    }

    pub fn closure_pairs(&self) -> &[(OrbitId, OrbitId)] {
        &self.closure_pairs
    }

    pub fn action(&self, s: usize, p: ParamId) -> Option<&CaseDescriptor> {
        self.actions.get(s).and_then(|row| row[p.0].as_ref())
    }

    /// Replaces (or with `None`, deletes) one descriptor.
    pub fn set_action(&mut self, s: usize, p: ParamId, descriptor: Option<CaseDescriptor>) {
        self.actions[s][p.0] = descriptor;
    }

    pub fn costandard(&self) -> Option<&[BTreeMap<ParamId, LaurentPoly>]> {
        self.costandard.as_deref()
    }

    pub fn set_costandard(&mut self, table: Option<Vec<BTreeMap<ParamId, LaurentPoly>>>) {
        self.costandard = table;
    }

    pub fn poincare(&self, p: ParamId) -> &PoincareSeries {
        &self.poincare[p.0]
    }

    pub fn has_two_cayley_rows(&self) -> bool {
        self.actions
            .iter()
            .flatten()
            .flatten()
            .any(CaseDescriptor::is_two_cayley)
    }

    /// Orbits directly above `v` under `s`: those of the ascent targets of the
    /// parameters on `v` (explicit rows count entries of larger dimension).
    fn ascent_orbits(&self, s: usize, v: OrbitId) -> Vec<OrbitId> {
        let dim = self.orbits[v.0].dim;
        let mut out: Vec<OrbitId> = Vec::new();
        for p in self.params_on(v) {
            let targets: Vec<ParamId> = match self.action(s, p) {
                Some(CaseDescriptor::ExplicitRow { coeffs }) => coeffs
                    .keys()
                    .copied()
                    .filter(|&t| self.dim(t) > dim)
                    .collect(),
                Some(d) => d.ascent_targets(),
                None => Vec::new(),
            };
            for t in targets {
                let o = self.params[t.0].orbit;
                if !out.contains(&o) {
                    out.push(o);
                }
            }
        }
        out
    }

    /// The open orbit `s * v` of `P_s . v`: `v` itself when no parameter on
    /// `v` ascends under `s`.
    pub fn s_star(&self, s: usize, v: OrbitId) -> Result<OrbitId, DatumError> {
        match self.ascent_orbits(s, v).as_slice() {
            [] => Ok(v),
            [w] => Ok(*w),
            _ => Err(DatumError::InconsistentAscent {
                reflection: s + 1,
                orbit: self.orbits[v.0].id.clone(),
            }),
        }
    }
}

/// Reflexive-transitive closure of a relation on `n` points.
pub(crate) fn transitive_closure(n: usize, pairs: &[(OrbitId, OrbitId)]) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in pairs {
        m[a.0][b.0] = true;
    }
    for k in 0..n {
        let through = m[k].clone();
        for row in m.iter_mut().filter(|row| row[k]) {
            for (x, &y) in row.iter_mut().zip(&through) {
                *x |= y;
            }
        }
    }
    m
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_star_examples() {
        let t = builtin_datum("sl2-T").unwrap();
        let p0 = t.find_param("p0").unwrap();
        let w = t.find_orbit("w").unwrap();
        assert_eq!(t.s_star(0, t.param(p0).orbit), Ok(w));
        assert_eq!(t.s_star(0, w), Ok(w));

        let a1 = builtin_datum("hecke-regular:A1").unwrap();
        let e = a1.find_orbit("e").unwrap();
        let s = a1.find_orbit("s1").unwrap();
        assert_eq!(a1.s_star(0, e), Ok(s));
    }

    #[test]
    fn s_star_is_idempotent() {
        for name in builtin_names() {
            let d = builtin_datum(&name).unwrap();
            for s in 0..d.rank() {
                for v in 0..d.orbits().len() {
                    let once = d.s_star(s, OrbitId(v)).unwrap();
                    assert_eq!(d.s_star(s, once).unwrap(), once, "{name}");
                }
            }
        }
    }

    #[test]
    fn s_star_rejects_split_ascents() {
        let mut d = builtin_datum("sl2-T").unwrap();
        let p0 = d.find_param("p0").unwrap();
        let p_inf = d.find_param("pInf").unwrap();
        let wt = d.find_param("wt").unwrap();
        // p0 now "ascends" to both the open orbit and another closed orbit
        let coeffs = BTreeMap::from([(wt, LaurentPoly::one()), (p_inf, LaurentPoly::one())]);
        d.set_action(0, p0, Some(CaseDescriptor::ExplicitRow { coeffs }));
        assert!(d.s_star(0, d.param(p0).orbit).is_ok());
        let mut orbits = d.orbits.clone();
        orbits[d.param(p_inf).orbit.0].dim = 1;
        d.orbits = orbits;
        d.params[p_inf.0].dim = 1;
        assert!(matches!(
            d.s_star(0, d.param(p0).orbit),
            Err(DatumError::InconsistentAscent { .. })
        ));
    }
}
