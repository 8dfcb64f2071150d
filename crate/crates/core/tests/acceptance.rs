//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use jetvar::algebra::int;
use jetvar::brst::verify_ni;
use jetvar::frontend::cli::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use jetvar::frontend::{parse, print_model};
use jetvar::models::{builtin, su2_constants, yang_mills, TheoryModel, BUILTIN_NAMES};
use serde_json::Value;

const YM_NI_BUDGET: Duration = Duration::from_secs(5);
const CS_BUDGET: Duration = Duration::from_secs(10);
const CALCULUS_CASES: u32 = 128;
const ORACLE_CASES: u64 = 200;

type Verdict = Result<String, String>;

fn model(name: &str) -> Result<TheoryModel, String> {
    builtin(name).map_err(|e| e.to_string())
}

fn exact(label: &str, outcome: jetvar::Result<Option<String>>) -> Result<(), String> {
    match outcome {
        Ok(None) => Ok(()),
        Ok(Some(residual)) => Err(format!("{label}: residual {residual}")),
        Err(e) => Err(format!("{label}: {e}")),
    }
}

fn within(label: &str, elapsed: Duration, budget: Duration) -> Result<(), String> {
    if elapsed <= budget {
        Ok(())
    } else {
        Err(format!("{label} took {elapsed:.2?}, budget {budget:?}"))
    }
}

fn yang_mills_identities() -> Verdict {
    let start = Instant::now();
    let m = model("yang-mills-su2")?;
    let js = m.jet_space();
    let el = m.euler_lagrange().map_err(|e| e.to_string())?;
    let residuals = verify_ni(&js, &m.tower[0], &el, &m.roster.pairing()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if let Some(i) = residuals.iter().position(|r| !r.is_zero()) {
        return Err(format!("identity {i} leaves a residual"));
    }
    within("identities", elapsed, YM_NI_BUDGET)?;
    Ok(format!("{} identities vanish in {elapsed:.2?}", residuals.len()))
}

fn yang_mills_brst() -> Verdict {
    let m = model("yang-mills-su2")?;
    let js = m.jet_space();
    let b = m.brst.as_ref().ok_or("no BRST operator")?;
    if !b.is_nilpotent(&js).map_err(|e| e.to_string())? {
        return Err("b² ≠ 0".into());
    }
    let base = su2_constants();
    let mut flipped = 0;
    for idx in (0..27).map(|k| vec![k / 9, (k / 3) % 3, k % 3]) {
        let mut f = base.clone();
        f.set(idx.clone(), f.get(&idx) + int(1));
        let mutated = yang_mills(f);
        let still = mutated.brst.as_ref().unwrap().is_nilpotent(&js).map_err(|e| e.to_string())?;
        if still {
            return Err(format!("mutation at {idx:?} stays nilpotent"));
        }
        flipped += 1;
    }
    Ok(format!("b² = 0; {flipped}/27 single-entry mutations break it"))
}

fn yang_mills_master() -> Verdict {
    let m = model("yang-mills-su2")?;
    exact("master equation", m.check_master_equation())?;
    Ok("{L_E, L_E} is variationally trivial".into())
}

fn chern_simons() -> Verdict {
    let start = Instant::now();
    let m = model("chern-simons-3d")?;
    exact("gauge condition", m.check_gauge_condition())?;
    exact("identities", m.check_noether_identities())?;
    exact("BRST nilpotency", m.check_brst_nilpotency())?;
    exact("master equation", m.check_master_equation())?;
    let elapsed = start.elapsed();
    within("Chern-Simons checks", elapsed, CS_BUDGET)?;
    Ok(format!("gauge condition, {} identities, b² = 0, master equation in {elapsed:.2?}", m.tower[0].generators.len()))
}

fn gravitation() -> Verdict {
    let m = model("gravitation-gauge")?;
    exact("identity against placeholders", m.check_ni_placeholder())?;
    exact("BRST nilpotency", m.check_brst_nilpotency())?;
    Ok(format!("{} identities vanish on placeholders; b² = 0", m.tower[0].generators.len()))
}

fn calculus() -> Verdict {
    common::properties::run_calculus_suite(CALCULUS_CASES)?;
    Ok(format!("4 properties × {CALCULUS_CASES} cases"))
}

fn conservation() -> Verdict {
    let scalar = model("free-scalar")?;
    exact("translation", scalar.check_conservation(scalar.derivation("translation").map_err(|e| e.to_string())?))?;
    let ym = model("yang-mills-su2")?;
    for j in 0..3 {
        let name = format!("color{j}");
        exact(&name, ym.check_conservation(ym.derivation(&name).map_err(|e| e.to_string())?))?;
    }
    Ok("translation and 3 color currents conserved".into())
}

fn oracle() -> Verdict {
    let counts = common::oracle::run_oracle_suite(ORACLE_CASES)?;
    Ok(format!("{ORACLE_CASES} identities agree, per family {counts:?}"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("jetvar").chain(args.iter().copied()), &mut out, &mut Vec::new());
    (code, String::from_utf8_lossy(&out).into_owned())
}

fn report_is_well_formed(v: &Value) -> bool {
    v["model"].is_string()
        && v["engine-version"].is_string()
        && v["checks"].as_array().is_some_and(|cs| {
            !cs.is_empty()
                && cs.iter().all(|c| {
                    c["name"].is_string()
                        && c["millis"].is_u64()
                        && match c["status"].as_str() {
                            Some("pass") => c["residual"].is_null(),
                            Some("fail") => c["residual"].is_string(),
                            _ => false,
                        }
                })
        })
}

fn frontend() -> Verdict {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    for name in BUILTIN_NAMES {
        let m = model(name)?;
        let text = std::fs::read_to_string(format!("{dir}/{name}.theory")).map_err(|e| e.to_string())?;
        if parse(&text).map_err(|e| format!("{name}: {e}"))? != m {
            return Err(format!("{name}: fixture differs from builtin"));
        }
        if parse(&print_model(&m)).map_err(|e| format!("{name}: {e}"))? != m {
            return Err(format!("{name}: printed model does not read back"));
        }
    }
    let cases = [
        ("maxwell", EXIT_OK),
        ("yang-mills-broken-jacobi", EXIT_FAILED),
        ("malformed-arity", EXIT_USAGE),
    ];
    for (fixture, want) in cases {
        let (code, out) = cli(&["verify", &format!("{dir}/{fixture}.theory"), "--format", "json"]);
        if code != want {
            return Err(format!("{fixture}: exit {code}, expected {want}"));
        }
        if want != EXIT_USAGE {
            let v: Value = serde_json::from_str(&out).map_err(|e| format!("{fixture}: {e}"))?;
            if !report_is_well_formed(&v) {
                return Err(format!("{fixture}: malformed report"));
            }
        }
    }
    Ok(format!("{} fixtures round-trip; reports well-formed; exit codes 0/1/2", BUILTIN_NAMES.len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Verdict); 9] = [
        (1, yang_mills_identities),
        (2, yang_mills_brst),
        (3, yang_mills_master),
        (4, chern_simons),
        (5, gravitation),
        (6, calculus),
        (7, conservation),
        (8, oracle),
        (9, frontend),
    ];
    let mut failed = 0;
    for (n, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {n}: PASS {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL {why}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: 9/9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 9 criteria fail");
        ExitCode::FAILURE
    }
}
