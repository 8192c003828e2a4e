//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed. The process
//! exits with status 1 when any criterion fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strategem::solver::{column_payoffs, row_payoffs};
use strategem::{
    build_diff_matrix, build_entropy_matrix, compare_solutions, fixtures, interval_game_bounds,
    optimize_within_intervals, reduce, sensitivity, solve, solve_2x2, solve_lp, Dominance,
    EntropyConfig, Error, Interval, IntervalPayoffMatrix, ParameterScheme, PayoffMatrix,
    ReciprocalCase, Role, Scenario, SolutionKind, StrategyProfile,
};
use strategem_cli::document::ResultDocument;

/// Pinned tolerances.
const EXACT_VALUE: f64 = 1e-9;
const REDUCTION: f64 = 1e-6;
const GUARANTEE: f64 = 1e-9;
const GRID_ORACLE: f64 = 0.02;
const ENTROPY: f64 = 1e-12;
const BINARY_BUDGET: Duration = Duration::from_millis(1);
const PROPERTY_BUDGET: Duration = Duration::from_secs(30);

type Check = Result<String, String>;

fn ensure(ok: bool, why: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why.into())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn binary_game() -> Check {
    let scenario = fixtures::binary_scenario();
    let start = Instant::now();
    let matrix = build_diff_matrix(&scenario).map_err(|e| e.to_string())?;
    let solution = solve(&matrix, Dominance::Weak).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    let expected = vec![vec![2.0, 0.0, -1.0], vec![2.0, -1.0, -2.0]];
    let mut problems = Vec::new();
    if matrix.entries() != expected.as_slice() {
        problems.push(format!(
            "matrix {:?} != expected {:?}",
            matrix.entries(),
            expected
        ));
    }
    if solution.saddle() != Some(("A", "E")) || solution.value != -1.0 {
        problems.push(format!(
            "solution {:?} value {}",
            solution.kind, solution.value
        ));
    }
    if elapsed >= BINARY_BUDGET {
        problems.push(format!("took {elapsed:?}"));
    }
    if problems.is_empty() {
        Ok(format!("saddle (A,E), value -1, {elapsed:?}"))
    } else {
        Err(format!(
            "{}; saddle (A,E) value {} in {elapsed:?}",
            problems.join("; "),
            solution.value
        ))
    }
}

/// Difference payoffs summed in integer hundredths.
fn hundredths(asset: &[f64; 6], threat: &[f64; 6]) -> f64 {
    let cents = |v: &[f64; 6]| -> i64 { v.iter().map(|x| (x * 100.0).round() as i64).sum() };
    (cents(asset) - cents(threat)) as f64 / 100.0
}

fn real_game() -> Check {
    let matrix = build_diff_matrix(&fixtures::real_scenario()).map_err(|e| e.to_string())?;
    let ad = matrix.entry("A", "D").map_err(|e| e.to_string())?;
    ensure(close(ad, 0.08, EXACT_VALUE), format!("(A,D) = {ad}"))?;
    let assets = [fixtures::REAL_A, fixtures::REAL_B];
    let threats = [fixtures::REAL_C, fixtures::REAL_D, fixtures::REAL_E];
    for (i, a) in assets.iter().enumerate() {
        for (j, t) in threats.iter().enumerate() {
            let oracle = hundredths(a, t);
            ensure(
                close(matrix.get(i, j), oracle, EXACT_VALUE),
                format!("entry ({i},{j}) = {} vs oracle {oracle}", matrix.get(i, j)),
            )?;
        }
    }
    let (reduced, _) = reduce(&matrix, Dominance::Weak);
    ensure(
        reduced.row_labels() == ["A"] && reduced.col_labels() == ["D"],
        format!("reduced to {:?} x {:?}", reduced.row_labels(), reduced.col_labels()),
    )?;
    let solution = solve(&matrix, Dominance::Weak).map_err(|e| e.to_string())?;
    ensure(
        solution.saddle() == Some(("A", "D")) && close(solution.value, 0.08, EXACT_VALUE),
        format!("solution {:?} value {}", solution.kind, solution.value),
    )?;
    Ok("(A,D) = 0.08, oracle match, reduction to (A,D)".into())
}

fn saddle_movement() -> Check {
    let binary = solve(&build_diff_matrix(&fixtures::binary_scenario()).unwrap(), Dominance::Weak)
        .map_err(|e| e.to_string())?;
    let real = solve(&build_diff_matrix(&fixtures::real_scenario()).unwrap(), Dominance::Weak)
        .map_err(|e| e.to_string())?;
    let movement = compare_solutions(&binary, &real).map_err(|e| e.to_string())?;
    ensure(
        movement.saddle_before == Some(("A".into(), "E".into()))
            && movement.saddle_after == Some(("A".into(), "D".into()))
            && close(movement.value_before, -1.0, EXACT_VALUE)
            && close(movement.value_after, 0.08, EXACT_VALUE),
        movement.to_string(),
    )?;
    Ok(movement.to_string())
}

fn mixed_game() -> Check {
    let reduced = PayoffMatrix::from_rows(&["A", "X"], &["D", "E"], vec![vec![0.08, 0.14], vec![0.24, 0.14]])
        .map_err(|e| e.to_string())?;
    let oddments = solve_2x2(&reduced).map_err(|e| e.to_string())?;
    let lp = solve_lp(&reduced).map_err(|e| e.to_string())?;
    ensure(
        close(oddments.value, 0.14, EXACT_VALUE),
        format!("oddments value {}", oddments.value),
    )?;
    ensure(
        close(oddments.row_strategy[0], 0.625, EXACT_VALUE)
            && close(oddments.row_strategy[1], 0.375, EXACT_VALUE),
        format!("row strategy {:?}", oddments.row_strategy),
    )?;
    ensure(
        close(lp.value, oddments.value, EXACT_VALUE),
        format!("LP value {} vs oddments {}", lp.value, oddments.value),
    )?;
    // the full three-row game reduces to the same 2x2 and the same value
    let full = solve(&fixtures::extended_payoffs(), Dominance::Strict).map_err(|e| e.to_string())?;
    ensure(close(full.value, 0.14, EXACT_VALUE), format!("full game value {}", full.value))?;
    Ok(format!(
        "value 0.14, p = ({}, {}), LP agrees",
        oddments.row_strategy[0], oddments.row_strategy[1]
    ))
}

fn interval_suite() -> Check {
    let iv = |lo, hi| Interval::new(lo, hi).unwrap();
    let cases = [
        (iv(0.0, 0.0), Interval::EMPTY, ReciprocalCase::Zero),
        (iv(2.0, 4.0), iv(0.25, 0.5), ReciprocalCase::ExcludesZero),
        (iv(-4.0, -2.0), iv(-0.5, -0.25), ReciprocalCase::ExcludesZero),
        (iv(0.0, 4.0), iv(0.25, f64::INFINITY), ReciprocalCase::ZeroLower),
        (iv(-4.0, 0.0), iv(f64::NEG_INFINITY, -0.25), ReciprocalCase::ZeroUpper),
        (iv(-1.0, 2.0), Interval::ENTIRE, ReciprocalCase::StraddlesZero),
    ];
    for (y, expected, case) in cases {
        ensure(y.reciprocal_case() == Some(case), format!("case of {y}"))?;
        let r = y.recip().map_err(|e| e.to_string())?;
        ensure(r == expected, format!("1/{y} = {r}, expected {expected}"))?;
    }
    ensure(
        Interval::EMPTY.recip() == Err(Error::EmptyOperand),
        "empty operand accepted",
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let draw = |rng: &mut ChaCha8Rng| {
        let (a, b): (f64, f64) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        iv(a.min(b), a.max(b))
    };
    let pick = |rng: &mut ChaCha8Rng, x: Interval| {
        if x.width() == 0.0 {
            x.lo()
        } else {
            rng.gen_range(x.lo()..=x.hi())
        }
    };
    let samples = 10_000;
    for _ in 0..samples {
        let (x, y) = (draw(&mut rng), draw(&mut rng));
        let (a, b) = (pick(&mut rng, x), pick(&mut rng, y));
        ensure(x.add(y).unwrap().contains(a + b), format!("{x} + {y}"))?;
        ensure(x.sub(y).unwrap().contains(a - b), format!("{x} - {y}"))?;
        ensure(x.mul(y).unwrap().contains(a * b), format!("{x} * {y}"))?;
        if b != 0.0 {
            let q = x.div(y).unwrap();
            let slack = 1e-12 * (a / b).abs().max(1.0);
            ensure(q.lo() <= a / b + slack && a / b - slack <= q.hi(), format!("{x} / {y}"))?;
        }
    }
    Ok(format!("5 reciprocal cases exact, {samples} samples per operation contained"))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> PayoffMatrix {
    let entries = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    PayoffMatrix::unlabeled(entries).unwrap()
}

fn grid_maximin(m: &PayoffMatrix) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..=100 {
        for j in 0..=(100 - i) {
            let p = [i as f64 / 100.0, j as f64 / 100.0, (100 - i - j) as f64 / 100.0];
            let worst = column_payoffs(m, &p).into_iter().fold(f64::INFINITY, f64::min);
            best = best.max(worst);
        }
    }
    best
}

fn solver_properties() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4040);
    for k in 0..200 {
        let m = random_matrix(&mut rng, 4, 4);
        let s = solve(&m, Dominance::Weak).map_err(|e| e.to_string())?;
        let direct = solve_lp(&m).map_err(|e| e.to_string())?.value;
        ensure(close(s.value, direct, REDUCTION), format!("matrix {k}: {} vs LP {direct}", s.value))?;

        let low = column_payoffs(&m, &s.row_strategy).into_iter().fold(f64::INFINITY, f64::min);
        let high = row_payoffs(&m, &s.col_strategy).into_iter().fold(f64::NEG_INFINITY, f64::max);
        ensure(
            low >= s.value - GUARANTEE && high <= s.value + GUARANTEE,
            format!("matrix {k}: guarantees {low} / {high} around {}", s.value),
        )?;

        let (i, j) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let bumped = m.with_entry(i, j, m.get(i, j) + rng.gen_range(0.0..0.5));
        let after = solve(&bumped, Dominance::Weak).map_err(|e| e.to_string())?.value;
        ensure(after >= s.value - GUARANTEE, format!("matrix {k}: value fell to {after}"))?;
    }
    let mut worst_gap: f64 = 0.0;
    for k in 0..50 {
        let m = random_matrix(&mut rng, 3, 3);
        let lp = solve_lp(&m).map_err(|e| e.to_string())?.value;
        let oracle = grid_maximin(&m);
        worst_gap = worst_gap.max((lp - oracle).abs());
        ensure(close(lp, oracle, GRID_ORACLE), format!("3x3 {k}: LP {lp} vs grid {oracle}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < PROPERTY_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("200 4x4 + 50 3x3 matrices, worst grid gap {worst_gap:.4}, {elapsed:?}"))
}

fn entropy_rule() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let config = EntropyConfig::default();
    let scheme = || ParameterScheme::new((1..=6).map(|i| format!("p{i}")), None).unwrap();
    let game = |asset: &[f64], threat: &[f64]| {
        let scenario = Scenario::new(
            scheme(),
            vec![StrategyProfile::real("P", Role::Asset, asset)],
            vec![StrategyProfile::real("Q", Role::Threat, threat)],
        );
        build_entropy_matrix(&scenario, &config).map(|m| m.get(0, 0))
    };
    for k in 0..100 {
        let a: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let t: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let forward = game(&a, &t).map_err(|e| e.to_string())?;
        let swapped = game(&t, &a).map_err(|e| e.to_string())?;
        ensure(close(forward, -swapped, ENTROPY), format!("scenario {k}: {forward} vs {swapped}"))?;
        let same = game(&a, &a).map_err(|e| e.to_string())?;
        ensure(close(same, 0.0, ENTROPY), format!("scenario {k}: identical vectors give {same}"))?;
    }
    let m = build_entropy_matrix(&fixtures::real_scenario(), &config).map_err(|e| e.to_string())?;
    let s = solve(&m, Dominance::Weak).map_err(|e| e.to_string())?;
    Ok(format!(
        "antisymmetric and zero on identical vectors over 100 scenarios; unit-cost game value {:.4} at {:?}",
        s.value, s.kind
    ))
}

fn whatif_checks() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for k in 0..100 {
        let m = random_matrix(&mut rng, 3, 3);
        let row = format!("R{}", rng.gen_range(1..=3));
        let col = format!("C{}", rng.gen_range(1..=3));
        let delta = rng.gen_range(-0.5..0.5);
        let s = sensitivity(&m, &row, &col, delta, Dominance::Weak).map_err(|e| e.to_string())?;
        let consistent = if delta > 0.0 {
            s.value_change >= -GUARANTEE
        } else {
            s.value_change <= GUARANTEE
        };
        ensure(consistent, format!("perturbation {k}: delta {delta}, change {}", s.value_change))?;
    }
    for k in 0..20 {
        let centers = random_matrix(&mut rng, 3, 3);
        let entries = centers
            .entries()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&c| {
                        let w: f64 = rng.gen_range(0.0..0.1);
                        Interval::new(c - w, c + w).unwrap()
                    })
                    .collect()
            })
            .collect();
        let im = IntervalPayoffMatrix::new(
            centers.row_labels().to_vec(),
            centers.col_labels().to_vec(),
            entries,
        )
        .map_err(|e| e.to_string())?;
        let (_, high) = interval_game_bounds(&im, Dominance::Weak).map_err(|e| e.to_string())?;
        let free = optimize_within_intervals(&im, None, 0.01, Dominance::Weak).map_err(|e| e.to_string())?;
        ensure(free.achieved == high, format!("matrix {k}: {} != {high}", free.achieved))?;
        let zero = optimize_within_intervals(&im, Some(0.0), 0.01, Dominance::Weak).map_err(|e| e.to_string())?;
        ensure(zero.realization == im.midpoint(), format!("matrix {k}: budget 0 moved"))?;
    }
    Ok("100 perturbations sign-consistent; unconstrained = upper bound; budget 0 = nominal".into())
}

fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

fn run_cli(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_strategem"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn cli_contract() -> Check {
    let mut notes = Vec::new();
    for (name, code, value) in [("binary.json", 3, -1.0), ("real.json", 0, 0.08), ("extended.json", 0, 0.14)] {
        let path = scenario_path(name);
        let (status, stdout) = run_cli(&["solve", path.to_str().unwrap(), "--format", "machine"]);
        ensure(status == Some(code), format!("{name}: exit {status:?}, expected {code}"))?;
        let doc = ResultDocument::from_json(&stdout).map_err(|e| format!("{name}: {e}"))?;
        let ResultDocument::Solution(s) = doc else {
            return Err(format!("{name}: not a solution"));
        };
        ensure(close(s.value, value, EXACT_VALUE), format!("{name}: value {}", s.value))?;
        notes.push(format!("{name} exit {code}"));

        // the service answers with the same payload
        let service = service_solve(&std::fs::read_to_string(&path).unwrap())?;
        let strip = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
        ensure(strip(&service) == strip(&stdout), format!("{name}: service and CLI differ"))?;
    }
    let binary = scenario_path("binary.json");
    let (status, _) = run_cli(&["build", binary.to_str().unwrap(), "--rule", "interval"]);
    ensure(status == Some(2), format!("invalid rule exit {status:?}"))?;
    notes.push("input failure exit 2".into());

    let cases = round_trips(100)?;
    notes.push(format!("{cases} results round-trip"));
    let extended = solve(&fixtures::extended_payoffs(), Dominance::Weak).unwrap();
    if !matches!(extended.kind, SolutionKind::Mixed) {
        notes.push("extended game reported as a saddle".into());
    }
    Ok(notes.join(", "))
}

fn service_solve(document: &str) -> Result<String, String> {
    use axum::body::Body;
    use axum::http::{Method, Request};
    use http_body_util::BodyExt;
    use tower::ServiceExt;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let store = strategem_cli::service::Store::open(dir.path()).map_err(|e| e.to_string())?;
    let app = strategem_cli::service::router(store);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    runtime.block_on(async {
        let put = Request::builder()
            .method(Method::PUT)
            .uri("/scenarios/acceptance")
            .body(Body::from(document.to_string()))
            .unwrap();
        let response = app.clone().oneshot(put).await.map_err(|e| e.to_string())?;
        ensure(response.status().is_success(), format!("PUT status {}", response.status()))?;
        let post = Request::builder()
            .method(Method::POST)
            .uri("/scenarios/acceptance/solve")
            .body(Body::empty())
            .unwrap();
        let response = app.oneshot(post).await.map_err(|e| e.to_string())?;
        ensure(response.status().is_success(), format!("solve status {}", response.status()))?;
        let bytes = response.into_body().collect().await.map_err(|e| e.to_string())?.to_bytes();
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    })
}

/// Random solutions, series and what-if reports through JSON and back.
fn round_trips(cases: usize) -> Result<usize, String> {
    use strategem_cli::commands::{self, Options, WhatIfRequest};
    use strategem_cli::document::ScenarioDocument;

    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    for k in 0..cases {
        let n = rng.gen_range(1..=4);
        let profile = |rng: &mut ChaCha8Rng, label: String, role| {
            let values: Vec<Interval> = (0..n)
                .map(|_| {
                    let c: f64 = rng.gen_range(-0.9..0.9);
                    let w: f64 = rng.gen_range(0.0..0.1);
                    Interval::new(c - w, c + w).unwrap()
                })
                .collect();
            StrategyProfile::span(label, role, &values)
        };
        let assets = (0..rng.gen_range(1..=3))
            .map(|i| profile(&mut rng, format!("A{i}"), Role::Asset))
            .collect();
        let threats = (0..rng.gen_range(1..=3))
            .map(|i| profile(&mut rng, format!("T{i}"), Role::Threat))
            .collect();
        let scheme = ParameterScheme::new((0..n).map(|i| format!("p{i}")), None).unwrap();
        let scenario = Scenario::new(scheme, assets, threats);
        let doc = ScenarioDocument::from_scenario(&scenario, strategem::PayoffRule::Interval, None);
        let loaded = ScenarioDocument::load(&serde_json::to_string(&doc).unwrap())
            .map_err(|e| format!("case {k}: {e}"))?;
        let options = Options::default();
        let request = WhatIfRequest {
            budget: Some(rng.gen_range(0.0..0.05)),
            step: Some(0.01),
            ..WhatIfRequest::default()
        };
        let results = [
            commands::build(&loaded, &options),
            commands::solve(&loaded, &options),
            commands::whatif(&loaded, &request),
        ];
        for result in results {
            let result = match result {
                Ok(r) => r,
                // steps wider than every interval are refused, nothing to serialize
                Err(Error::Step(_)) => continue,
                Err(e) => return Err(format!("case {k}: {e}")),
            };
            let back = ResultDocument::from_json(&result.to_json()).map_err(|e| format!("case {k}: {e}"))?;
            ensure(back == result, format!("case {k}: round trip changed the document"))?;
        }
    }
    Ok(cases)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("binary game reproduction", binary_game),
        ("real game reproduction", real_game),
        ("saddle movement", saddle_movement),
        ("mixed game reproduction", mixed_game),
        ("interval arithmetic case suite", interval_suite),
        ("solver property suite", solver_properties),
        ("entropy rule properties", entropy_rule),
        ("what-if properties", whatif_checks),
        ("cli/service contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
