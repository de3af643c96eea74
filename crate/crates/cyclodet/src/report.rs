//! Serialized per-prime reports. Big integers and rationals are decimal
//! strings; cyclotomic determinants are coefficient lists in the power
//! basis `1, ζ, …, ζ^{p-2}`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use cyclodet_core::verify::{Decomp, PrimeReport, Status};
use cyclodet_core::CycElt;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub p: u32,
    pub residue_mod8: u32,
    pub class: Option<ClassJson>,
    pub deltas: Vec<u32>,
    pub dets: DetsJson,
    pub decomp: Option<DecompJson>,
    pub valuations: Option<ValuationsJson>,
    pub checks: BTreeMap<String, CheckJson>,
    pub signs: BTreeMap<String, i8>,
    pub discrepancies: Vec<DiscrepancyJson>,
    pub timings_ms: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassJson {
    Imaginary { h_neg: u64 },
    Real { h_pos: u32, eps: UnitJson },
}

/// `ε = (t + u√p)/2` with `t² - p u² = 4·norm`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitJson {
    pub t: String,
    pub u: String,
    pub norm: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetsJson {
    #[serde(rename = "S")]
    pub s: Option<String>,
    #[serde(rename = "T")]
    pub t: Option<String>,
    #[serde(rename = "SD")]
    pub sd: Option<String>,
    #[serde(rename = "C")]
    pub c: Option<Vec<String>>,
    #[serde(rename = "D")]
    pub d: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecompJson {
    Quadratic { a_p: String, b_p: String, u_p: String, v_p: String },
    Quartic { alpha: String, beta: String, delta_sign: i8, period_sign: i8, a: u32, b: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationsJson {
    pub a_p: Option<i64>,
    pub b_p: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    /// False only for a failed check; skipped checks count as passing.
    pub pass: bool,
    pub status: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyJson {
    pub name: String,
    pub detail: String,
}

fn coeffs(x: &CycElt) -> Vec<String> {
    x.coeffs().iter().map(ToString::to_string).collect()
}

impl From<&PrimeReport> for ReportJson {
    fn from(r: &PrimeReport) -> Self {
        let class = r.class.as_ref().and_then(|c| match (c.h_neg, c.h_pos, &c.eps) {
            (Some(h), _, _) => Some(ClassJson::Imaginary { h_neg: h }),
            (None, Some(h), Some(e)) => Some(ClassJson::Real {
                h_pos: h,
                eps: UnitJson { t: e.t.to_string(), u: e.u.to_string(), norm: e.norm },
            }),
            _ => None,
        });
        let decomp = r.decomp.as_ref().map(|d| match d {
            Decomp::Quadratic { u, v, a, b } => DecompJson::Quadratic {
                a_p: a.to_string(),
                b_p: b.to_string(),
                u_p: u.to_string(),
                v_p: v.to_string(),
            },
            Decomp::Quartic(q) => DecompJson::Quartic {
                alpha: q.alpha.to_string(),
                beta: q.beta.to_string(),
                delta_sign: q.delta_sign,
                period_sign: q.period_sign,
                a: q.a,
                b: q.b,
            },
        });
        let valuations = matches!(r.decomp, Some(Decomp::Quadratic { .. }))
            .then(|| ValuationsJson { a_p: r.nu_a, b_p: r.nu_b });
        ReportJson {
            p: r.p,
            residue_mod8: r.residue_mod8,
            class,
            deltas: r.deltas.clone(),
            dets: DetsJson {
                s: r.det_s.as_ref().map(ToString::to_string),
                t: r.det_t.as_ref().map(ToString::to_string),
                sd: r.det_s_delta.as_ref().map(ToString::to_string),
                c: r.det_c.as_ref().map(coeffs),
                d: r.det_d.as_ref().map(coeffs),
            },
            decomp,
            valuations,
            checks: r
                .checks
                .iter()
                .map(|(k, c)| {
                    let json = CheckJson {
                        pass: c.status != Status::Fail,
                        status: c.status.name().to_string(),
                        lhs: c.lhs.clone(),
                        rhs: c.rhs.clone(),
                    };
                    (k.clone(), json)
                })
                .collect(),
            signs: r.signs.clone(),
            discrepancies: r
                .discrepancies
                .iter()
                .map(|d| DiscrepancyJson { name: d.name.clone(), detail: d.detail.clone() })
                .collect(),
            timings_ms: r.timings_ms.clone(),
        }
    }
}

impl ReportJson {
    pub fn all_passed(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }
}

pub fn to_json(reports: &[ReportJson]) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(reports)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(s: &str) -> serde_json::Result<Vec<ReportJson>> {
    serde_json::from_str(s)
}

/// One row per prime, one column per check name seen in any report; cells
/// are `pass`, `fail`, `skipped`, or empty when the check does not apply.
pub fn write_csv<W: Write>(reports: &[ReportJson], out: W) -> csv::Result<()> {
    let names: BTreeSet<&String> = reports.iter().flat_map(|r| r.checks.keys()).collect();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["p".to_string(), "all_pass".to_string()];
    header.extend(names.iter().map(|n| n.to_string()));
    w.write_record(&header)?;
    for r in reports {
        let mut row = vec![r.p.to_string(), r.all_passed().to_string()];
        row.extend(names.iter().map(|n| r.checks.get(*n).map_or(String::new(), |c| c.status.clone())));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
