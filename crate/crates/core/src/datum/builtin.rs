//! Builtin datums: the regular module of a Weyl group and the two rank-one
//! symmetric pairs whose `P^1` fibre has three orbits (case T) or two
//! orbits with swapped fixed points (case N).

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{
    load_datum, transitive_closure, CaseDescriptor, DatumError, OrbitDatum, OrbitId, OrbitInfo,
    ParamId, Parameter,
};
use crate::coxeter::{CoxElt, CoxeterSystem};
use crate::hecke::HeckeAlgebra;
use crate::laurent::PoincareSeries;

/// Coxeter types offered as `hecke-regular:<type>`.
pub const HECKE_REGULAR_TYPES: [&str; 7] = ["A1", "A2", "A3", "B2", "C3", "D4", "G2"];

const SL2_T: &str = r#"{
  "name": "sl2-T",
  "coxeter": {"type": "A1"},
  "orbits": [
    {"id": "o0", "dim": 0, "closed": true},
    {"id": "oInf", "dim": 0, "closed": true},
    {"id": "w", "dim": 1, "closed": false}
  ],
  "closure": [["o0", "w"], ["oInf", "w"]],
  "params": [
    {"id": "p0", "orbit": "o0", "local_system": "trivial"},
    {"id": "pInf", "orbit": "oInf", "local_system": "trivial"},
    {"id": "wt", "orbit": "w", "local_system": "trivial"},
    {"id": "ws", "orbit": "w", "local_system": "sign"}
  ],
  "actions": {
    "1": {
      "p0": {"case": "AscentT", "cross": "pInf", "up": "wt"},
      "pInf": {"case": "AscentT", "cross": "p0", "up": "wt"},
      "wt": {"case": "DescentT", "downs": ["p0", "pInf"]},
      "ws": {"case": "DescentTNonParity"}
    }
  },
  "costandard": {
    "wt": {"wt": "1", "p0": "1-q", "pInf": "1-q"}
  },
  "poincare": {
    "p0": {"num": "1", "den": [1]},
    "pInf": {"num": "1", "den": [1]},
    "wt": {"num": "1", "den": []},
    "ws": {"num": "1", "den": []}
  }
}"#;

const SL2_N: &str = r#"{
  "name": "sl2-N",
  "coxeter": {"type": "A1"},
  "orbits": [
    {"id": "o", "dim": 0, "closed": true},
    {"id": "w", "dim": 1, "closed": false}
  ],
  "closure": [["o", "w"]],
  "params": [
    {"id": "u", "orbit": "o", "local_system": "trivial"},
    {"id": "wp", "orbit": "w", "local_system": "+"},
    {"id": "wm", "orbit": "w", "local_system": "-"}
  ],
  "actions": {
    "1": {
      "u": {"case": "AscentN", "ups": ["wp", "wm"]},
      "wp": {"case": "DescentN", "partner": "wm", "down": "u"},
      "wm": {"case": "DescentN", "partner": "wp", "down": "u"}
    }
  },
  "costandard": {
    "wp": {"wp": "1", "u": "1-q"},
    "wm": {"wm": "1", "u": "1-q"}
  },
  "poincare": {
    "u": {"num": "1", "den": [1]},
    "wp": {"num": "1", "den": []},
    "wm": {"num": "1", "den": []}
  }
}"#;

pub fn builtin_names() -> Vec<String> {
    let mut names = vec!["sl2-T".to_string(), "sl2-N".to_string()];
    names.extend(
        HECKE_REGULAR_TYPES
            .iter()
            .map(|t| format!("hecke-regular:{t}")),
    );
    names
}

pub fn builtin_datum(name: &str) -> Result<OrbitDatum, DatumError> {
    match name {
        "sl2-T" => load_datum(SL2_T),
        "sl2-N" => load_datum(SL2_N),
        _ => match name.strip_prefix("hecke-regular:") {
            Some(label) if HECKE_REGULAR_TYPES.contains(&label) => {
                let sys = Arc::new(CoxeterSystem::from_label(label)?);
                Ok(hecke_regular(name, sys))
            }
            _ => Err(DatumError::UnknownBuiltin(name.to_string())),
        },
    }
}

/// The regular module: one orbit and one parameter per Weyl group element,
/// `T_s m_w = T_s T_w`, closure = Bruhat order, `n_w = q^{l(w)} bar(T_w)`.
pub(crate) fn hecke_regular(name: &str, sys: Arc<CoxeterSystem>) -> OrbitDatum {
    // Elements are already sorted by (length, word); re-sort by (length, token)
    // so that the parameter order is the canonical one.
    let mut elems: Vec<CoxElt> = sys.elements().collect();
    elems.sort_by_key(|&w| (sys.length(w), sys.element_token(w)));
    let mut param_of = vec![ParamId(0); sys.order()];
    for (i, &w) in elems.iter().enumerate() {
        param_of[w.index()] = ParamId(i);
    }

    let orbits: Vec<OrbitInfo> = elems
        .iter()
        .map(|&w| OrbitInfo {
            id: sys.element_token(w),
            dim: sys.length(w) as u32,
            closed: w == sys.identity(),
        })
        .collect();
    let params: Vec<Parameter> = elems
        .iter()
        .enumerate()
        .map(|(i, &w)| Parameter {
            id: sys.element_token(w),
            orbit: OrbitId(i),
            local_system: "trivial".to_string(),
            dim: sys.length(w) as u32,
        })
        .collect();

    let mut closure_pairs = Vec::new();
    for (j, &y) in elems.iter().enumerate() {
        for (i, &x) in elems.iter().enumerate() {
            if sys.length(x) + 1 == sys.length(y) && sys.leq(x, y) {
                closure_pairs.push((OrbitId(i), OrbitId(j)));
            }
        }
    }
    let closure = transitive_closure(elems.len(), &closure_pairs);

    let actions = (0..sys.rank())
        .map(|s| {
            elems
                .iter()
                .map(|&w| {
                    let sw = param_of[sys.left_mul(s, w).index()];
                    Some(if sys.is_left_descent(s, w) {
                        CaseDescriptor::DescentU { down: sw }
                    } else {
                        CaseDescriptor::AscentU { up: sw }
                    })
                })
                .collect()
        })
        .collect();

    let alg = HeckeAlgebra::new(sys.clone());
    let costandard = elems
        .iter()
        .map(|&w| {
            alg.costandard(w)
                .terms()
                .map(|(x, c)| (param_of[x.index()], c.clone()))
                .collect::<BTreeMap<_, _>>()
        })
        .collect();

    let poincare = vec![PoincareSeries::torus(sys.rank()); elems.len()];

    OrbitDatum {
        name: name.to_string(),
        coxeter: sys,
        orbits,
        closure_pairs,
        closure,
        params,
        actions,
        costandard: Some(costandard),
        poincare,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_shapes() {
        let t = builtin_datum("sl2-T").unwrap();
        assert_eq!(t.params().len(), 4);
        assert_eq!(t.orbits().len(), 3);
        let ids: Vec<&str> = t.params().iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["p0", "pInf", "ws", "wt"]);

        let n = builtin_datum("sl2-N").unwrap();
        assert_eq!(n.params().len(), 3);
        assert_eq!(n.orbits().len(), 2);
        assert!(n.has_two_cayley_rows());
        assert!(!t.has_two_cayley_rows());
    }

    #[test]
    fn hecke_regular_a1() {
        let d = builtin_datum("hecke-regular:A1").unwrap();
        let ids: Vec<(&str, u32)> = d.params().iter().map(|p| (p.id.as_str(), p.dim)).collect();
        assert_eq!(ids, [("e", 0), ("s1", 1)]);
        assert_eq!(
            d.action(0, ParamId(0)),
            Some(&CaseDescriptor::AscentU { up: ParamId(1) })
        );
        assert_eq!(
            d.action(0, ParamId(1)),
            Some(&CaseDescriptor::DescentU { down: ParamId(0) })
        );
        // n_s = T_s + 1 - q
        let n_s = &d.costandard().unwrap()[1];
        assert_eq!(n_s[&ParamId(1)].to_string(), "1");
        assert_eq!(n_s[&ParamId(0)].to_string(), "1-q");
    }

    #[test]
    fn hecke_regular_closure_is_bruhat() {
        let d = builtin_datum("hecke-regular:B2").unwrap();
        let sys = d.coxeter().clone();
        for a in d.params() {
            for b in d.params() {
                let x = sys.parse_element(&a.id).unwrap();
                let y = sys.parse_element(&b.id).unwrap();
                assert_eq!(d.orbit_leq(a.orbit, b.orbit), sys.leq(x, y));
            }
        }
    }

    #[test]
    fn unknown_builtin() {
        assert_eq!(
            builtin_datum("hecke-regular:E8"),
            Err(DatumError::UnknownBuiltin("hecke-regular:E8".into()))
        );
        assert!(builtin_datum("sl3").is_err());
    }
}
