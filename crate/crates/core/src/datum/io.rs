//! JSON datum files.
//!
//! ```json
//! {
//!   "name": "sl2-T",
//!   "coxeter": {"type": "A1"},
//!   "orbits": [{"id": "w", "dim": 1, "closed": false}, ...],
//!   "closure": [["o0", "w"], ...],
//!   "params": [{"id": "wt", "orbit": "w", "local_system": "trivial"}, ...],
//!   "actions": {"1": {"p0": {"case": "AscentT", "cross": "pInf", "up": "wt"}, ...}},
//!   "costandard": {"wt": {"wt": "1", "p0": "1-q", "pInf": "1-q"}},
//!   "poincare": {"p0": {"num": "1", "den": [1]}, ...}
//! }
//! ```
//!
//! Simple reflections are keyed from 1. Parameters missing from
//! `costandard` have `n_p = m_p`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    transitive_closure, CaseDescriptor, DatumError, OrbitDatum, OrbitId, OrbitInfo, ParamId,
    Parameter,
};
use crate::coxeter::{CoxeterSpec, CoxeterSystem};
use crate::laurent::{LaurentPoly, PoincareSeries};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoxeterRef {
    Type {
        #[serde(rename = "type")]
        label: String,
    },
    Cartan {
        cartan: Vec<Vec<i32>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitEntry {
    pub id: String,
    pub dim: u32,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamEntry {
    pub id: String,
    pub orbit: String,
    pub local_system: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum DescriptorEntry {
    CompactG,
    AscentU { up: String },
    DescentU { down: String },
    AscentT { cross: String, up: String },
    DescentT { downs: [String; 2] },
    DescentTNonParity,
    AscentN { ups: [String; 2] },
    DescentN { partner: String, down: String },
    ExplicitRow { coeffs: BTreeMap<String, String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesEntry {
    pub num: String,
    #[serde(default)]
    pub den: Vec<u32>,
}

/// The on-disk schema, string-keyed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub name: String,
    pub coxeter: CoxeterRef,
    pub orbits: Vec<OrbitEntry>,
    pub closure: Vec<[String; 2]>,
    pub params: Vec<ParamEntry>,
    pub actions: BTreeMap<String, BTreeMap<String, DescriptorEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costandard: Option<BTreeMap<String, BTreeMap<String, String>>>,
    pub poincare: BTreeMap<String, SeriesEntry>,
}

/// Parses and resolves a datum file. The result is not validated.
pub fn load_datum(source: &str) -> Result<OrbitDatum, DatumError> {
    let file: DatumFile = serde_json::from_str(source).map_err(|e| DatumError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    OrbitDatum::from_file(&file)
}

fn parse_poly(field: &str, text: &str) -> Result<LaurentPoly, DatumError> {
    text.parse()
        .map_err(|e: crate::laurent::LaurentError| DatumError::InvalidField {
            field: field.to_string(),
            message: e.to_string(),
        })
}

impl OrbitDatum {
    pub fn from_file(file: &DatumFile) -> Result<Self, DatumError> {
        let spec = match &file.coxeter {
            CoxeterRef::Type { label } => CoxeterSpec::Label(label.clone()),
            CoxeterRef::Cartan { cartan } => CoxeterSpec::Cartan(cartan.clone()),
        };
        let coxeter = Arc::new(CoxeterSystem::build(&spec)?);
        Self::from_file_with_system(file, coxeter)
    }

    pub(crate) fn from_file_with_system(
        file: &DatumFile,
        coxeter: Arc<CoxeterSystem>,
    ) -> Result<Self, DatumError> {
        let rank = coxeter.rank();

        let mut orbit_index: HashMap<&str, OrbitId> = HashMap::new();
        let mut orbits = Vec::with_capacity(file.orbits.len());
        for (i, o) in file.orbits.iter().enumerate() {
            if orbit_index.insert(o.id.as_str(), OrbitId(i)).is_some() {
                return Err(DatumError::DuplicateId {
                    kind: "orbit",
                    id: o.id.clone(),
                });
            }
            orbits.push(OrbitInfo {
                id: o.id.clone(),
                dim: o.dim,
                closed: o.closed,
            });
        }
        let orbit_ref = |field: String, id: &str| {
            orbit_index
                .get(id)
                .copied()
                .ok_or_else(|| DatumError::DanglingReference {
                    field,
                    kind: "orbit",
                    id: id.to_string(),
                })
        };

        let mut closure_pairs = Vec::with_capacity(file.closure.len());
        for (i, [lo, hi]) in file.closure.iter().enumerate() {
            closure_pairs.push((
                orbit_ref(format!("closure[{i}][0]"), lo)?,
                orbit_ref(format!("closure[{i}][1]"), hi)?,
            ));
        }
        let closure = transitive_closure(orbits.len(), &closure_pairs);

        let mut seen_ids: HashSet<&str> = HashSet::new();
        let mut seen_pairs: HashSet<(OrbitId, &str)> = HashSet::new();
        let mut params = Vec::with_capacity(file.params.len());
        for (i, p) in file.params.iter().enumerate() {
            if !seen_ids.insert(p.id.as_str()) {
                return Err(DatumError::DuplicateId {
                    kind: "parameter",
                    id: p.id.clone(),
                });
            }
            let orbit = orbit_ref(format!("params[{i}].orbit"), &p.orbit)?;
            if !seen_pairs.insert((orbit, p.local_system.as_str())) {
                return Err(DatumError::DuplicateId {
                    kind: "(orbit, local system)",
                    id: format!("({}, {})", p.orbit, p.local_system),
                });
            }
            params.push(Parameter {
                id: p.id.clone(),
                orbit,
                local_system: p.local_system.clone(),
                dim: orbits[orbit.0].dim,
            });
        }
        params.sort_by(|a, b| (a.dim, &a.id).cmp(&(b.dim, &b.id)));
        let param_index: HashMap<&str, ParamId> = params
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.as_str(), ParamId(i)))
            .collect();
        let param_ref = |field: &str, id: &str| {
            param_index
                .get(id)
                .copied()
                .ok_or_else(|| DatumError::DanglingReference {
                    field: field.to_string(),
                    kind: "parameter",
                    id: id.to_string(),
                })
        };

        let mut actions: Vec<Vec<Option<CaseDescriptor>>> = vec![vec![None; params.len()]; rank];
        for (key, row) in &file.actions {
            let s = match key.parse::<usize>() {
                Ok(s) if (1..=rank).contains(&s) => s - 1,
                _ => {
                    return Err(DatumError::InvalidField {
                        field: format!("actions.{key}"),
                        message: format!("simple reflection index must be in 1..={rank}"),
                    })
                }
            };
            for (pid, entry) in row {
                let field = format!("actions.{key}.{pid}");
                let p = param_ref(&field, pid)?;
                let r = |id: &str| param_ref(&field, id);
                let descriptor = match entry {
                    DescriptorEntry::CompactG => CaseDescriptor::CompactG,
                    DescriptorEntry::AscentU { up } => CaseDescriptor::AscentU { up: r(up)? },
                    DescriptorEntry::DescentU { down } => {
                        CaseDescriptor::DescentU { down: r(down)? }
                    }
                    DescriptorEntry::AscentT { cross, up } => CaseDescriptor::AscentT {
                        cross: r(cross)?,
                        up: r(up)?,
                    },
                    DescriptorEntry::DescentT { downs } => CaseDescriptor::DescentT {
                        downs: [r(&downs[0])?, r(&downs[1])?],
                    },
                    DescriptorEntry::DescentTNonParity => CaseDescriptor::DescentTNonParity,
                    DescriptorEntry::AscentN { ups } => CaseDescriptor::AscentN {
                        ups: [r(&ups[0])?, r(&ups[1])?],
                    },
                    DescriptorEntry::DescentN { partner, down } => CaseDescriptor::DescentN {
                        partner: r(partner)?,
                        down: r(down)?,
                    },
                    DescriptorEntry::ExplicitRow { coeffs } => {
                        let mut out = BTreeMap::new();
                        for (target, text) in coeffs {
                            let c = parse_poly(&format!("{field}.coeffs.{target}"), text)?;
                            if !c.is_zero() {
                                out.insert(r(target)?, c);
                            }
                        }
                        CaseDescriptor::ExplicitRow { coeffs: out }
                    }
                };
                actions[s][p.0] = Some(descriptor);
            }
        }
        for (s, row) in actions.iter().enumerate() {
            if let Some(i) = row.iter().position(Option::is_none) {
                return Err(DatumError::MissingDescriptor {
                    reflection: s + 1,
                    param: params[i].id.clone(),
                });
            }
        }

        let costandard = match &file.costandard {
            None => None,
            Some(table) => {
                let mut cols: Vec<BTreeMap<ParamId, LaurentPoly>> = (0..params.len())
                    .map(|i| BTreeMap::from([(ParamId(i), LaurentPoly::one())]))
                    .collect();
                for (pid, row) in table {
                    let p = param_ref("costandard", pid)?;
                    let mut col = BTreeMap::new();
                    for (target, text) in row {
                        let field = format!("costandard.{pid}.{target}");
                        let c = parse_poly(&field, text)?;
                        if !c.is_zero() {
                            col.insert(param_ref(&field, target)?, c);
                        }
                    }
                    cols[p.0] = col;
                }
                Some(cols)
            }
        };

        let mut poincare = Vec::with_capacity(params.len());
        for p in &params {
            let entry = file
                .poincare
                .get(&p.id)
                .ok_or_else(|| DatumError::InvalidField {
                    field: format!("poincare.{}", p.id),
                    message: "missing stabilizer series".to_string(),
                })?;
            let field = format!("poincare.{}", p.id);
            let num = parse_poly(&field, &entry.num)?;
            let series = PoincareSeries::new(num, entry.den.clone()).map_err(|e| {
                DatumError::InvalidField {
                    field,
                    message: e.to_string(),
                }
            })?;
            poincare.push(series);
        }
        for key in file.poincare.keys() {
            param_ref("poincare", key)?;
        }

        Ok(Self {
            name: file.name.clone(),
            coxeter,
            orbits,
            closure_pairs,
            closure,
            params,
            actions,
            costandard,
            poincare,
        })
    }

    /// The on-disk form. Missing descriptors are omitted.
    pub fn to_file(&self) -> DatumFile {
        let coxeter = match self.coxeter.label() {
            Some(label) => CoxeterRef::Type {
                label: label.to_string(),
            },
            None => CoxeterRef::Cartan {
                cartan: self.coxeter.cartan().to_vec(),
            },
        };
        let pid = |p: &ParamId| self.params[p.0].id.clone();
        let actions = self
            .actions
            .iter()
            .enumerate()
            .map(|(s, row)| {
                let entries = row
                    .iter()
                    .enumerate()
                    .filter_map(|(i, d)| {
                        let entry = match d.as_ref()? {
                            CaseDescriptor::CompactG => DescriptorEntry::CompactG,
                            CaseDescriptor::AscentU { up } => {
                                DescriptorEntry::AscentU { up: pid(up) }
                            }
                            CaseDescriptor::DescentU { down } => {
                                DescriptorEntry::DescentU { down: pid(down) }
                            }
                            CaseDescriptor::AscentT { cross, up } => DescriptorEntry::AscentT {
                                cross: pid(cross),
                                up: pid(up),
                            },
                            CaseDescriptor::DescentT { downs } => DescriptorEntry::DescentT {
                                downs: [pid(&downs[0]), pid(&downs[1])],
                            },
                            CaseDescriptor::DescentTNonParity => DescriptorEntry::DescentTNonParity,
                            CaseDescriptor::AscentN { ups } => DescriptorEntry::AscentN {
                                ups: [pid(&ups[0]), pid(&ups[1])],
                            },
                            CaseDescriptor::DescentN { partner, down } => {
                                DescriptorEntry::DescentN {
                                    partner: pid(partner),
                                    down: pid(down),
                                }
                            }
                            CaseDescriptor::ExplicitRow { coeffs } => {
                                DescriptorEntry::ExplicitRow {
                                    coeffs: coeffs
                                        .iter()
                                        .map(|(p, c)| (pid(p), c.to_string()))
                                        .collect(),
                                }
                            }
                        };
                        Some((self.params[i].id.clone(), entry))
                    })
                    .collect();
                ((s + 1).to_string(), entries)
            })
            .collect();
        let costandard = self.costandard.as_ref().map(|cols| {
            cols.iter()
                .enumerate()
                .map(|(i, col)| {
                    let row = col.iter().map(|(p, c)| (pid(p), c.to_string())).collect();
                    (self.params[i].id.clone(), row)
                })
                .collect()
        });
        let poincare = self
            .params
            .iter()
            .zip(&self.poincare)
            .map(|(p, s)| {
                (
                    p.id.clone(),
                    SeriesEntry {
                        num: s.numerator().to_string(),
                        den: s.denominator_factors().to_vec(),
                    },
                )
            })
            .collect();
        DatumFile {
            name: self.name.clone(),
            coxeter,
            orbits: self
                .orbits
                .iter()
                .map(|o| OrbitEntry {
                    id: o.id.clone(),
                    dim: o.dim,
                    closed: o.closed,
                })
                .collect(),
            closure: self
                .closure_pairs
                .iter()
                .map(|(a, b)| [self.orbits[a.0].id.clone(), self.orbits[b.0].id.clone()])
                .collect(),
            params: self
                .params
                .iter()
                .map(|p| ParamEntry {
                    id: p.id.clone(),
                    orbit: self.orbits[p.orbit.0].id.clone(),
                    local_system: p.local_system.clone(),
                })
                .collect(),
            actions,
            costandard,
            poincare,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("datum serializes")
    }
}
