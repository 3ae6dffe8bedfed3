//! Text tables and canonical JSON.
//!
//! JSON is built from `serde_json::Value`, whose object map keeps keys
//! sorted, so emitted documents are canonical: parsing and re-serializing
//! reproduces them byte for byte.

use std::fmt::Write as _;

use fermijordan_core::{JordanReport, Rational, SectorBasis};
use num_traits::{One, Signed, Zero};

use serde_json::{json, Map, Value};

use crate::couplings::format_rational;

pub fn to_canonical_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values always serialize");
    s.push('\n');
    s
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

/// JSON object for one analysed sector.
pub fn sector_json(report: &JordanReport) -> Value {
    let blocks: Map<String, Value> = report
        .computed_blocks
        .iter()
        .map(|(size, count)| (size.to_string(), json!(count)))
        .collect();
    let mut obj = Map::new();
    obj.insert("ell".into(), json!(report.ell));
    obj.insert("m".into(), json!(report.m));
    obj.insert("sector_dims".into(), json!(report.sector_dims));
    obj.insert(
        "increments_computed".into(),
        json!(report.profile.increments),
    );
    obj.insert(
        "increments_predicted".into(),
        json!(report.predicted.increments),
    );
    obj.insert("blocks".into(), Value::Object(blocks));
    obj.insert("verified".into(), json!(report.verified));
    if let Some(chains) = &report.chains {
        let chains: Vec<Value> = chains
            .iter()
            .map(|c| {
                Value::Array(
                    c.vectors
                        .iter()
                        .map(|v| {
                            Value::Array(v.iter().map(|x| json!(format_rational(x))).collect())
                        })
                        .collect(),
                )
            })
            .collect();
        obj.insert("chains".into(), Value::Array(chains));
    }
    Value::Object(obj)
}

/// `7` for integers, `7/2` otherwise.
pub fn plain(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Linear combination of basis kets, e.g. `+1 |0110> -1 |1001>`.
pub fn render_vector(v: &[Rational], basis: &SectorBasis) -> String {
    let mut out = Vec::new();
    for (x, state) in v.iter().zip(basis.states()) {
        if x.is_zero() {
            continue;
        }
        let sign = if x.is_negative() { '-' } else { '+' };
        out.push(format!("{sign}{} |{state}>", plain(&x.abs())));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out.join(" ")
    }
}

fn block_list(blocks: &std::collections::BTreeMap<usize, usize>) -> String {
    let sizes: Vec<usize> = blocks
        .iter()
        .rev()
        .flat_map(|(&s, &c)| std::iter::repeat_n(s, c))
        .collect();
    if sizes.is_empty() {
        "-".into()
    } else {
        join(&sizes, ",")
    }
}

/// Human-readable block for one sector.
pub fn sector_table(
    report: &JordanReport,
    basis: &SectorBasis,
    couplings_label: &str,
    transfer: &Rational,
) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "sector ell={} m={} dim={} couplings={}",
        report.ell,
        report.m,
        basis.len(),
        couplings_label
    );
    let _ = writeln!(s, "  weight dims: {}", join(&report.sector_dims, " "));
    let verdict = if report.verified { "MATCH" } else { "MISMATCH" };
    let _ = writeln!(
        s,
        "  increments: {} | blocks: {} | {verdict}",
        join(&report.profile.increments, " "),
        block_list(&report.computed_blocks)
    );
    let _ = writeln!(
        s,
        "  predicted:  {} | blocks: {}",
        join(&report.predicted.increments, " "),
        block_list(&report.predicted.multiplicities)
    );
    if !report.profile.complete {
        let _ = writeln!(
            s,
            "  (kernel profile truncated at d={}; larger blocks not resolved)",
            report.profile.increments.len()
        );
    }
    let scalar = if transfer.is_one() {
        String::new()
    } else {
        format!("{} ", plain(transfer))
    };
    let _ = writeln!(
        s,
        "  M^{} |{}> = {scalar}|{}>",
        basis.max_weight(),
        basis.min_state(),
        basis.max_state()
    );
    if let Some(chains) = &report.chains {
        let _ = writeln!(s, "  chains: {}", chains.len());
        for (i, c) in chains.iter().enumerate() {
            let _ = writeln!(
                s,
                "    #{} length {} head weight {}",
                i + 1,
                c.len(),
                c.head_weight
            );
            let _ = writeln!(s, "      head: {}", render_vector(c.head(), basis));
            let _ = writeln!(s, "      tail: {}", render_vector(c.tail(), basis));
        }
    }
    s
}
