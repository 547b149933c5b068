//! Poincare series of equivariant Ext between simple classes and of
//! equivariant intersection cohomology, as orbitwise pairings of the
//! self-dual basis against the costandard basis.
//!
//! `E(t, g) = sum_e bar(P_{e,t}) Q_{e,g} pi_e` where `L_g = sum_e Q_{e,g} n_e`;
//! the coefficient of `q^m` is `dim Ext^{2m - (d_g - d_t)}(L_t, L_g)`.
//! The intersection cohomology series of `L_t` is `sum_e Q_{e,t} pi_e`,
//! with `q^m` in `H^{2m - d_t}`.

use std::collections::BTreeMap;

use ibig::IBig;
use serde::Serialize;

use crate::datum::{OrbitDatum, ParamId, ValidatedDatum};
use crate::klv::{KlvError, KlvTable};
use crate::laurent::{LaurentPoly, PoincareSeries};

/// A rational series with the dictionary `q^m <-> degree 2m - offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    pub series: PoincareSeries,
    pub offset: i32,
}

impl GradedSeries {
    /// `(degree, dim)` for every exponent from the lowest one (or 0) up to `window`.
    pub fn degrees(&self, window: i32) -> Vec<(i32, IBig)> {
        let (start, coeffs) = self.series.expand(window);
        coeffs
            .into_iter()
            .enumerate()
            .map(|(k, c)| (2 * (start + k as i32) - self.offset, c))
            .collect()
    }

    /// `i=dim` pairs joined by `;`.
    pub fn first_degrees(&self, window: i32) -> String {
        self.degrees(window)
            .iter()
            .map(|(i, c)| format!("{i}={c}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Every nonzero dimension sits in a degree of the given parity.
    pub fn supported_in_parity(&self, parity: i32, window: i32) -> bool {
        self.degrees(window)
            .iter()
            .all(|(i, c)| *c == IBig::from(0) || i.rem_euclid(2) == parity.rem_euclid(2))
    }

    pub fn is_nonnegative(&self, window: i32) -> bool {
        self.degrees(window)
            .iter()
            .all(|(_, c)| *c >= IBig::from(0))
    }
}

/// `E(tau, gamma)`, or with `gamma = None` the intersection cohomology of `tau`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtSeries {
    pub tau: ParamId,
    pub gamma: Option<ParamId>,
    pub graded: GradedSeries,
}

impl ExtSeries {
    pub fn series(&self) -> &PoincareSeries {
        &self.graded.series
    }

    /// The parity forced on cohomological degrees: `d_t + d_g`, or `d_t`.
    pub fn expected_parity(&self) -> i32 {
        self.graded.offset.rem_euclid(2)
    }

    pub fn row(&self, d: &OrbitDatum, window: i32) -> ExtRow {
        ExtRow {
            tau: d.param(self.tau).id.clone(),
            gamma: self
                .gamma
                .map_or_else(|| "-".to_string(), |g| d.param(g).id.clone()),
            series: self.series().to_string(),
            first_degrees: self.graded.first_degrees(window),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtRow {
    pub tau: String,
    pub gamma: String,
    pub series: String,
    pub first_degrees: String,
}

/// Holds the change of basis `Q` from the self-dual to the costandard basis.
pub struct ExtCalculator<'a> {
    vd: &'a ValidatedDatum,
    table: &'a KlvTable,
    /// `q_cols[g][e] = Q_{e,g}`
    q_cols: Vec<Vec<LaurentPoly>>,
}

impl<'a> ExtCalculator<'a> {
    pub fn new(vd: &'a ValidatedDatum, table: &'a KlvTable) -> Result<Self, KlvError> {
        let dual = vd.duality()?;
        let d = vd.datum();
        let n = d.params().len();
        let costandard: Vec<Vec<(usize, LaurentPoly)>> = d
            .param_ids()
            .map(|e| {
                dual.costandard(e)
                    .terms()
                    .map(|(p, c)| (p.0, c.clone()))
                    .collect()
            })
            .collect();
        let q_cols = d
            .param_ids()
            .map(|g| {
                let mut rest = table.element(g).to_dense(n);
                let mut q = vec![LaurentPoly::zero(); n];
                for e in (0..n).rev() {
                    if rest[e].is_zero() {
                        continue;
                    }
                    let c = std::mem::take(&mut rest[e]);
                    for (x, a) in &costandard[e] {
                        if *x != e {
                            rest[*x] -= &(&c * a);
                        }
                    }
                    q[e] = c;
                }
                q
            })
            .collect();
        Ok(Self { vd, table, q_cols })
    }

    /// `Q_{e,g}`
    pub fn q(&self, e: ParamId, g: ParamId) -> &LaurentPoly {
        &self.q_cols[g.0][e.0]
    }

    /// `sum_e coeff(e) pi_e`, summing numerators over equal denominators first.
    fn pair(&self, terms: impl Iterator<Item = (usize, LaurentPoly)>) -> PoincareSeries {
        let d = self.vd.datum();
        let mut groups: BTreeMap<&[u32], LaurentPoly> = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let pi = d.poincare(ParamId(e));
            *groups.entry(pi.denominator_factors()).or_default() += &(&c * pi.numerator());
        }
        groups
            .into_iter()
            .map(|(den, num)| {
                PoincareSeries::new(num, den.to_vec()).expect("validated denominators")
            })
            .fold(PoincareSeries::zero(), |acc, s| acc.add(&s))
            .reduced()
    }

    pub fn ext(&self, tau: ParamId, gamma: ParamId) -> ExtSeries {
        let d = self.vd.datum();
        let q_col = &self.q_cols[gamma.0];
        let series = self.pair(
            self.table
                .support(tau)
                .iter()
                .map(|&e| (e, &self.table.p(ParamId(e), tau).bar() * &q_col[e])),
        );
        ExtSeries {
            tau,
            gamma: Some(gamma),
            graded: GradedSeries {
                series,
                offset: d.dim(gamma) as i32 - d.dim(tau) as i32,
            },
        }
    }

    pub fn ic(&self, tau: ParamId) -> ExtSeries {
        let d = self.vd.datum();
        let series = self.pair(self.q_cols[tau.0].iter().cloned().enumerate());
        ExtSeries {
            tau,
            gamma: None,
            graded: GradedSeries {
                series,
                offset: d.dim(tau) as i32,
            },
        }
    }
}

/// `E(tau, gamma)` for one pair.
pub fn ext_poincare(
    vd: &ValidatedDatum,
    table: &KlvTable,
    tau: ParamId,
    gamma: ParamId,
) -> Result<ExtSeries, KlvError> {
    Ok(ExtCalculator::new(vd, table)?.ext(tau, gamma))
}

pub fn ic_cohomology(
    vd: &ValidatedDatum,
    table: &KlvTable,
    tau: ParamId,
) -> Result<ExtSeries, KlvError> {
    Ok(ExtCalculator::new(vd, table)?.ic(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::builtin_datum;
    use crate::klv::{is_clean, klv_table};

    fn setup(name: &str) -> (ValidatedDatum, KlvTable) {
        let vd = ValidatedDatum::new(builtin_datum(name).unwrap()).unwrap();
        let t = klv_table(&vd).unwrap();
        (vd, t)
    }

    fn series(num: &str, den: &[u32]) -> PoincareSeries {
        PoincareSeries::new(num.parse().unwrap(), den.to_vec()).unwrap()
    }

    #[test]
    fn a1_values() {
        let (vd, t) = setup("hecke-regular:A1");
        let calc = ExtCalculator::new(&vd, &t).unwrap();
        let (e, s) = (ParamId(0), ParamId(1));
        assert_eq!(*calc.ext(e, e).series(), series("1", &[1]));
        assert_eq!(*calc.ext(s, s).series(), series("1+q", &[1]));
        assert_eq!(*calc.ext(e, s).series(), series("q", &[1]));
        assert_eq!(*calc.ic(s).series(), series("1+q", &[1]));
        assert_eq!(calc.ext(s, s).series().to_string(), "(1+q) / (1-q)");
        assert_eq!(calc.ext(e, s).graded.first_degrees(3), "-1=0;1=1;3=1;5=1");
        assert_eq!(calc.ext(s, s).graded.first_degrees(2), "0=1;2=2;4=2");
        assert_eq!(*calc.q(e, s), "q".parse().unwrap());
    }

    #[test]
    fn sl2_values() {
        let (vd, t) = setup("sl2-N");
        let calc = ExtCalculator::new(&vd, &t).unwrap();
        let wp = vd.datum().find_param("wp").unwrap();
        assert_eq!(*calc.ext(wp, wp).series(), series("1", &[1]));
        assert_eq!(*calc.ic(wp).series(), series("1", &[1]));

        let (vd, t) = setup("sl2-T");
        let calc = ExtCalculator::new(&vd, &t).unwrap();
        let ws = vd.datum().find_param("ws").unwrap();
        assert_eq!(*calc.ic(ws).series(), PoincareSeries::one());
        assert_eq!(calc.ic(ws).graded.first_degrees(2), "-1=1;1=0;3=0");
    }

    #[test]
    fn anchors_and_parity_on_small_builtins() {
        for name in ["sl2-T", "sl2-N", "hecke-regular:A2", "hecke-regular:B2"] {
            let (vd, t) = setup(name);
            let d = vd.datum();
            let calc = ExtCalculator::new(&vd, &t).unwrap();
            for tau in d.param_ids() {
                let (start, c) = calc.ext(tau, tau).series().expand(0);
                assert_eq!((start, c), (0, vec![IBig::from(1)]), "{name}");
                for gamma in d.param_ids() {
                    let e = calc.ext(tau, gamma);
                    assert!(e.graded.is_nonnegative(10), "{name}");
                    assert!(e.graded.supported_in_parity(e.expected_parity(), 10));
                    let (ot, og) = (d.param(tau).orbit, d.param(gamma).orbit);
                    if tau != gamma
                        && is_clean(&t, tau)
                        && is_clean(&t, gamma)
                        && !d.orbit_leq(ot, og)
                        && !d.orbit_leq(og, ot)
                    {
                        assert!(e.series().is_zero(), "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn rows() {
        let (vd, t) = setup("hecke-regular:A1");
        let calc = ExtCalculator::new(&vd, &t).unwrap();
        let row = calc.ext(ParamId(0), ParamId(1)).row(vd.datum(), 2);
        assert_eq!(row.tau, "e");
        assert_eq!(row.gamma, "s1");
        assert_eq!(row.series, "q / (1-q)");
        assert_eq!(row.first_degrees, "-1=0;1=1;3=1");
        assert_eq!(calc.ic(ParamId(1)).row(vd.datum(), 0).gamma, "-");
    }
}
