//! Acceptance suite. Runs without the libtest harness so that each
//! criterion prints exactly one PASS/FAIL line.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fermijordan::{verify, Outcome};
use fermijordan_core::{
    blocks_from_profile, build_shift, enumerate_sector, kernel_profile, proper_eigenstate_check,
    q_binomial, sector_weight_dimensions, Couplings, OccupationState, Rational,
};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::Value;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn run_cli(args: &[&str]) -> Result<(String, i32, Duration), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fermijordan"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot spawn: {e}"))?;
    let elapsed = start.elapsed();
    let code = out.status.code().unwrap_or(-1);
    Ok((
        String::from_utf8_lossy(&out.stdout).into_owned(),
        code,
        elapsed,
    ))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn six_three_table() -> Verdict {
    let (text, code, elapsed) = run_cli(&["analyze", "--ell", "6", "--m", "3"])?;
    ensure(code == 0, || format!("exit code {code}"))?;
    ensure(
        text.contains("increments: 3 3 3 3 2 2 1 1 1 1 | blocks: 10,6,4 | MATCH"),
        || format!("unexpected output:\n{text}"),
    )?;
    let (json, _, _) = run_cli(&["analyze", "--ell", "6", "--m", "3", "--json"])?;
    let v: Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    ensure(
        v["increments_computed"] == serde_json::json!([3, 3, 3, 3, 2, 2, 1, 1, 1, 1]),
        || format!("increments {}", v["increments_computed"]),
    )?;
    ensure(
        v["blocks"] == serde_json::json!({"10": 1, "6": 1, "4": 1}),
        || format!("blocks {}", v["blocks"]),
    )?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{elapsed:.2?}"))
}

fn qbin_six_three() -> Verdict {
    let (text, code, _) = run_cli(&["qbin", "6", "3"])?;
    let expected = "1 + q + 2q^2 + 3q^3 + 3q^4 + 3q^5 + 3q^6 + 2q^7 + q^8 + q^9";
    ensure(code == 0 && text.trim_end() == expected, || {
        format!("exit {code}, output {text:?}")
    })?;
    Ok(expected.into())
}

fn four_two_example() -> Verdict {
    let basis = enumerate_sector(4, 2).map_err(|e| e.to_string())?;
    let shift = build_shift(&basis, &Couplings::uniform(4)).map_err(|e| e.to_string())?;
    let ket = |s: &str| {
        let state = OccupationState::parse(s).expect("valid occupation string");
        let mut v = vec![Rational::zero(); basis.len()];
        v[basis.index_of(&state).expect("state in sector")] = Rational::one();
        v
    };
    let add = |a: Vec<Rational>, b: Vec<Rational>| -> Vec<Rational> {
        a.into_iter().zip(b).map(|(x, y)| x + y).collect()
    };
    let apply = |v: &[Rational]| shift.apply(v).map_err(|e| e.to_string());
    ensure(
        apply(&ket("1010"))? == add(ket("1001"), ket("0110")),
        || "M|1010> != |1001> + |0110>".into(),
    )?;
    ensure(
        apply(&ket("1001"))? == ket("0101") && apply(&ket("0110"))? == ket("0101"),
        || "M|1001> or M|0110> != |0101>".into(),
    )?;
    let profile = kernel_profile(&shift).map_err(|e| e.to_string())?;
    ensure(profile.dims[1] == 2, || {
        format!("dim ker M = {}", profile.dims[1])
    })?;

    let (json, code, _) = run_cli(&["analyze", "--ell", "4", "--m", "2", "--chains", "--json"])?;
    ensure(code == 0, || format!("exit code {code}"))?;
    let v: Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    let i1001 = basis
        .index_of(&OccupationState::parse("1001").unwrap())
        .unwrap();
    let i0110 = basis
        .index_of(&OccupationState::parse("0110").unwrap())
        .unwrap();
    let found = v["chains"].as_array().into_iter().flatten().any(|chain| {
        let Some([vector]) = chain.as_array().map(Vec::as_slice) else {
            return false;
        };
        let coords: Vec<&str> = vector
            .as_array()
            .map(|a| a.iter().filter_map(Value::as_str).collect())
            .unwrap_or_default();
        coords.len() == basis.len()
            && coords
                .iter()
                .enumerate()
                .all(|(i, c)| (i == i1001 || i == i0110) == (*c != "0/1"))
            && (coords[i1001].strip_prefix('-') == Some(coords[i0110])
                || coords[i0110].strip_prefix('-') == Some(coords[i1001]))
    });
    ensure(found, || {
        format!("no proper eigenvector |1001> - |0110> in {}", v["chains"])
    })?;
    Ok("M images, dim ker M = 2, |1001> - |0110> chain".into())
}

fn identity_sweep() -> Verdict {
    let start = Instant::now();
    let Outcome { stdout, failure } = verify(10, None, false).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if let Some(msg) = failure {
        return Err(msg);
    }
    ensure(
        stdout.contains("all 65 sectors pass (5 checks each)"),
        || stdout.clone(),
    )?;
    ensure(elapsed < Duration::from_secs(300), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("65 sectors in {elapsed:.2?}"))
}

fn coupling_invariance() -> Verdict {
    let start = Instant::now();
    let reference: Vec<_> = (1..=8)
        .flat_map(|ell| (0..=ell).map(move |m| (ell, m)))
        .map(|(ell, m)| {
            let basis = enumerate_sector(ell, m).unwrap();
            let p =
                kernel_profile(&build_shift(&basis, &Couplings::uniform(ell)).unwrap()).unwrap();
            ((ell, m), basis, blocks_from_profile(&p), p)
        })
        .collect();
    let mismatches: Vec<String> = (0u64..50)
        .into_par_iter()
        .flat_map_iter(|seed| {
            reference
                .iter()
                .filter_map(move |((ell, m), basis, blocks, profile)| {
                    let c = fermijordan::couplings::random_couplings(*ell, seed);
                    let p = build_shift(basis, &c).and_then(|s| kernel_profile(&s));
                    match p {
                        Ok(p) if &p == profile && &blocks_from_profile(&p) == blocks => None,
                        Ok(_) => Some(format!("seed {seed} sector ({ell}, {m}) differs")),
                        Err(e) => Some(format!("seed {seed} sector ({ell}, {m}): {e}")),
                    }
                })
        })
        .collect();
    let elapsed = start.elapsed();
    ensure(mismatches.is_empty(), || mismatches.join("; "))?;
    ensure(elapsed < Duration::from_secs(600), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} sectors x 50 seeds in {elapsed:.2?}",
        reference.len()
    ))
}

fn weight_dims_oracle() -> Verdict {
    let mut count = 0;
    for ell in 1..=14 {
        for m in 0..=ell {
            let dims: Vec<BigUint> =
                sector_weight_dimensions(&enumerate_sector(ell, m).map_err(|e| e.to_string())?)
                    .into_iter()
                    .map(BigUint::from)
                    .collect();
            let poly = q_binomial(ell, m).map_err(|e| e.to_string())?;
            ensure(poly.coeffs() == &dims[..], || {
                format!("sector ({ell}, {m})")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} sectors"))
}

fn proper_eigenstates() -> Verdict {
    let sectors: Vec<(usize, usize)> = (1..=10)
        .flat_map(|ell| (0..=ell).map(move |m| (ell, m)))
        .collect();
    let bad: Vec<String> = sectors
        .par_iter()
        .filter_map(
            |&(ell, m)| match proper_eigenstate_check(ell, m, &Couplings::uniform(ell)) {
                Ok(c) if c.equal => None,
                Ok(c) => Some(format!(
                    "({ell}, {m}): {} vs {}",
                    c.proper_eigenstate_count, c.middle_sector_dim
                )),
                Err(e) => Some(format!("({ell}, {m}): {e}")),
            },
        )
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok(format!("{} sectors", sectors.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("analyze 6 3 increments and blocks", six_three_table),
        ("qbin 6 3 polynomial", qbin_six_three),
        ("(4, 2) worked example", four_two_example),
        ("identity sweep ell <= 10", identity_sweep),
        (
            "coupling invariance ell <= 8, 50 seeds",
            coupling_invariance,
        ),
        (
            "weight dimensions equal q-binomial ell <= 14",
            weight_dims_oracle,
        ),
        (
            "dim ker M equals middle weight space ell <= 10",
            proper_eigenstates,
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}: {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {name} ({detail})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
