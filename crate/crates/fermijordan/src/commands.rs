//! `analyze`, `qbin` and `verify`.

use std::fmt::Write as _;
use std::path::PathBuf;

use fermijordan_core::{
    analyze_sector, build_chains, build_shift, enumerate_sector, extremal_transfer_scalar,
    injectivity_surjectivity_table, proper_eigenstate_check, q_binomial, verify_sl2, Couplings,
    MAX_SITES,
};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::couplings::{format_rational, random_couplings, read_couplings};
use crate::error::CliError;
use crate::report::{sector_json, sector_table, to_canonical_json};

/// Largest `ell` accepted by `qbin`.
pub const QBIN_MAX_ELL: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectorSelection {
    One(usize),
    All,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CouplingSource {
    Uniform,
    File(PathBuf),
    Random { seed: u64 },
}

impl CouplingSource {
    pub fn resolve(&self, ell: usize) -> Result<Couplings, CliError> {
        match self {
            CouplingSource::Uniform => Ok(Couplings::uniform(ell)),
            CouplingSource::File(path) => read_couplings(path, ell),
            CouplingSource::Random { seed } => Ok(random_couplings(ell, *seed)),
        }
    }

    fn label(&self) -> String {
        match self {
            CouplingSource::Uniform => "uniform".into(),
            CouplingSource::File(path) => format!("file:{}", path.display()),
            CouplingSource::Random { seed } => format!("random(seed={seed})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisRequest {
    pub ell: usize,
    pub m: SectorSelection,
    pub couplings: CouplingSource,
    pub chains: bool,
    pub json: bool,
    pub dmax: Option<usize>,
}

/// What a command prints, and why it failed if it did.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    /// Set when a checked identity did not hold; the process exits with 1.
    pub failure: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

fn check_ell(ell: usize) -> Result<(), CliError> {
    if ell == 0 || ell > MAX_SITES {
        return Err(CliError::Usage(format!(
            "--ell must be in 1..={MAX_SITES}, got {ell}"
        )));
    }
    Ok(())
}

pub fn analyze(req: &AnalysisRequest) -> Result<Outcome, CliError> {
    check_ell(req.ell)?;
    let ms: Vec<usize> = match req.m {
        SectorSelection::One(m) if m > req.ell => {
            return Err(CliError::Usage(format!(
                "--m must be in 0..={}, got {m}",
                req.ell
            )))
        }
        SectorSelection::One(m) => vec![m],
        SectorSelection::All => (0..=req.ell).collect(),
    };
    if req.dmax == Some(0) {
        return Err(CliError::Usage("--dmax must be at least 1".into()));
    }
    let couplings = req.couplings.resolve(req.ell)?;
    let label = req.couplings.label();

    let results: Vec<Result<(Value, String, bool), CliError>> = ms
        .par_iter()
        .map(|&m| {
            let report = analyze_sector(req.ell, m, &couplings, req.chains, req.dmax)?;
            let basis = enumerate_sector(req.ell, m)?;
            let shift = build_shift(&basis, &couplings)?;
            let scalar = extremal_transfer_scalar(&basis, &shift)?;
            let mut json = sector_json(&report);
            if let Value::Object(obj) = &mut json {
                obj.insert("top_transfer".into(), json!(format_rational(&scalar)));
            }
            let text = sector_table(&report, &basis, &label, &scalar);
            Ok((json, text, report.verified))
        })
        .collect();

    let mut values = Vec::with_capacity(results.len());
    let mut text = String::new();
    let mut failures = Vec::new();
    for (m, r) in ms.iter().zip(results) {
        let (value, table, verified) = r?;
        if !verified {
            failures.push(format!("({}, {m})", req.ell));
        }
        values.push(value);
        text.push_str(&table);
    }

    let stdout = if req.json {
        let doc = match req.m {
            SectorSelection::One(_) => values.pop().expect("one sector"),
            SectorSelection::All => Value::Array(values),
        };
        to_canonical_json(&doc)
    } else {
        text
    };
    let failure = (!failures.is_empty()).then(|| {
        format!(
            "computed Jordan structure differs from the prediction in sector {}",
            failures.join(", ")
        )
    });
    Ok(Outcome { stdout, failure })
}

pub fn qbin(ell: usize, m: usize, json: bool) -> Result<Outcome, CliError> {
    if ell > QBIN_MAX_ELL {
        return Err(CliError::Usage(format!(
            "ell must be at most {QBIN_MAX_ELL}, got {ell}"
        )));
    }
    if m > ell {
        return Err(CliError::Usage(format!("m must be in 0..={ell}, got {m}")));
    }
    let poly = q_binomial(ell, m)?;
    let stdout = if json {
        let coeffs: Vec<Value> = poly.coeffs().iter().map(biguint_json).collect();
        to_canonical_json(&json!({
            "ell": ell,
            "m": m,
            "coefficients": coeffs,
            "polynomial": poly.to_string(),
        }))
    } else {
        format!("{poly}\n")
    };
    Ok(Outcome {
        stdout,
        failure: None,
    })
}

fn biguint_json(x: &BigUint) -> Value {
    serde_json::from_str(&x.to_string()).expect("decimal integers are valid JSON numbers")
}

/// Names of the per-sector checks run by [`verify`], in order.
pub const CHECKS: [&str; 5] = [
    "sl2",
    "graded-maps",
    "kernel-increments",
    "weight-grading",
    "chains",
];

#[derive(Clone, Debug)]
struct SectorVerdict {
    ell: usize,
    m: usize,
    failures: Vec<(&'static str, String)>,
}

type Check = Result<(), String>;

/// Core integrity and shape errors count as a failed check; anything else
/// (a sector too large to enumerate) aborts the run.
fn failed(e: fermijordan_core::Error) -> Result<Check, CliError> {
    match CliError::from(e) {
        CliError::Integrity(msg) => Ok(Err(msg)),
        usage => Err(usage),
    }
}

fn check_sl2(ell: usize, m: usize, c: &Couplings) -> Result<Check, CliError> {
    let report = match verify_sl2(ell, m, c) {
        Ok(r) => r,
        Err(e) => return failed(e),
    };
    Ok(match report.relations.iter().find(|r| !r.passed) {
        None => Ok(()),
        Some(r) => Err(format!("relation {} fails: {:?}", r.name, r.worst_residual)),
    })
}

fn check_graded_maps(ell: usize, m: usize, c: &Couplings) -> Result<Check, CliError> {
    let table = match injectivity_surjectivity_table(ell, m, c) {
        Ok(t) => t,
        Err(e) => return failed(e),
    };
    if let Some(bad) = table.iter().find(|g| !g.consistent()) {
        return Ok(Err(format!(
            "M: V^{} -> V^{} has rank {} ({} -> {}) against the guaranteed property",
            bad.weight,
            bad.weight + 1,
            bad.rank,
            bad.domain_dim,
            bad.codomain_dim
        )));
    }
    let proper = match proper_eigenstate_check(ell, m, c) {
        Ok(p) => p,
        Err(e) => return failed(e),
    };
    Ok(if proper.equal {
        Ok(())
    } else {
        Err(format!(
            "dim ker M = {} but the middle weight space has dimension {}",
            proper.proper_eigenstate_count, proper.middle_sector_dim
        ))
    })
}

fn check_increments(ell: usize, m: usize, c: &Couplings) -> Result<Check, CliError> {
    let report = match analyze_sector(ell, m, c, false, None) {
        Ok(r) => r,
        Err(e) => return failed(e),
    };
    if !report.verified {
        return Ok(Err(fermijordan_core::jordan::describe_mismatch(&report)));
    }
    let top = m * (ell - m);
    if 0 < m && m < ell {
        if let Some(d) = report
            .computed_blocks
            .keys()
            .find(|&&d| (top + d).is_multiple_of(2))
        {
            return Ok(Err(format!("block of size {d} breaks the parity law")));
        }
    }
    Ok(Ok(()))
}

fn check_grading(ell: usize, m: usize) -> Result<Check, CliError> {
    let dims = match enumerate_sector(ell, m) {
        Ok(b) => b.weight_dimensions(),
        Err(e) => return failed(e),
    };
    let poly = q_binomial(ell, m)?;
    let dims: Vec<BigUint> = dims.into_iter().map(BigUint::from).collect();
    Ok(if poly.coeffs() == &dims[..] {
        Ok(())
    } else {
        Err(format!("weight dimensions {dims:?} differ from {poly}"))
    })
}

fn check_chains(ell: usize, m: usize, c: &Couplings) -> Result<Check, CliError> {
    Ok(match build_chains(ell, m, c) {
        Ok(r) if r.verified => Ok(()),
        Ok(r) => Err(fermijordan_core::jordan::describe_mismatch(&r)),
        Err(e) => return failed(e),
    })
}

fn verify_sector(ell: usize, m: usize, c: &Couplings) -> Result<SectorVerdict, CliError> {
    let results = [
        check_sl2(ell, m, c)?,
        check_graded_maps(ell, m, c)?,
        check_increments(ell, m, c)?,
        check_grading(ell, m)?,
        check_chains(ell, m, c)?,
    ];
    let failures = CHECKS
        .iter()
        .zip(results)
        .filter_map(|(&name, r)| r.err().map(|msg| (name, msg)))
        .collect();
    Ok(SectorVerdict { ell, m, failures })
}

/// Sweep every sector with `ell <= ell_max`. Random couplings use
/// `random_couplings(ell, seed)` for each `ell`.
pub fn verify(ell_max: usize, seed: Option<u64>, json: bool) -> Result<Outcome, CliError> {
    check_ell(ell_max).map_err(|_| {
        CliError::Usage(format!(
            "--ell-max must be in 1..={MAX_SITES}, got {ell_max}"
        ))
    })?;
    let sectors: Vec<(usize, usize)> = (1..=ell_max)
        .flat_map(|ell| (0..=ell).map(move |m| (ell, m)))
        .collect();
    let verdicts: Vec<SectorVerdict> = sectors
        .par_iter()
        .map(|&(ell, m)| {
            let c = match seed {
                Some(s) => random_couplings(ell, s),
                None => Couplings::uniform(ell),
            };
            verify_sector(ell, m, &c)
        })
        .collect::<Result<_, _>>()?;

    let first = verdicts.iter().find_map(|v| {
        v.failures
            .first()
            .map(|(name, msg)| (v.ell, v.m, *name, msg.clone()))
    });
    let failure = first
        .as_ref()
        .map(|(ell, m, name, msg)| format!("sector ({ell}, {m}) fails check {name}: {msg}"));

    let stdout = if json {
        verify_json(ell_max, seed, &verdicts, failure.as_deref())
    } else {
        verify_table(ell_max, seed, &verdicts, failure.as_deref())
    };
    Ok(Outcome { stdout, failure })
}

fn verify_json(
    ell_max: usize,
    seed: Option<u64>,
    verdicts: &[SectorVerdict],
    failure: Option<&str>,
) -> String {
    let sectors: Vec<Value> = verdicts
        .iter()
        .map(|v| {
            let checks: Map<String, Value> = CHECKS
                .iter()
                .map(|&name| {
                    let ok = !v.failures.iter().any(|(n, _)| *n == name);
                    (name.to_string(), json!(ok))
                })
                .collect();
            let failures: Map<String, Value> = v
                .failures
                .iter()
                .map(|(n, msg)| (n.to_string(), json!(msg)))
                .collect();
            json!({ "ell": v.ell, "m": v.m, "checks": checks, "failures": failures })
        })
        .collect();
    to_canonical_json(&json!({
        "ell_max": ell_max,
        "couplings": if seed.is_some() { "random" } else { "uniform" },
        "seed": seed,
        "sectors": sectors,
        "passed": failure.is_none(),
        "first_failure": failure,
    }))
}

fn verify_table(
    ell_max: usize,
    seed: Option<u64>,
    verdicts: &[SectorVerdict],
    failure: Option<&str>,
) -> String {
    let mut s = String::new();
    let label = match seed {
        Some(seed) => format!("random(seed={seed})"),
        None => "uniform".into(),
    };
    let _ = writeln!(s, "checks: {}", CHECKS.join(", "));
    let _ = writeln!(s, "couplings: {label}");
    let _ = write!(s, "ell\\m");
    for m in 0..=ell_max {
        let _ = write!(s, " {m:>3}");
    }
    s.push('\n');
    for ell in 1..=ell_max {
        let _ = write!(s, "{ell:>5}");
        for v in verdicts.iter().filter(|v| v.ell == ell) {
            let cell = if v.failures.is_empty() { "ok" } else { "FAIL" };
            let _ = write!(s, " {cell:>3}");
        }
        s.push('\n');
    }
    match failure {
        None => {
            let _ = writeln!(
                s,
                "all {} sectors pass ({} checks each)",
                verdicts.len(),
                CHECKS.len()
            );
        }
        Some(msg) => {
            let bad = verdicts.iter().filter(|v| !v.failures.is_empty()).count();
            let _ = writeln!(s, "{bad} of {} sectors fail", verdicts.len());
            let _ = writeln!(s, "first failure: {msg}");
        }
    }
    s
}
