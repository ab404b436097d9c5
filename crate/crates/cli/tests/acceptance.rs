//! One line per acceptance criterion: `PASS`/`FAIL`, the measured values, the runtime.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semithermo::dynamics::{dyn_distance, SemigroupSpec};
use semithermo::separation::{maximal_separated, min_cover_count, GridSpec};
use semithermo::words::Word;
use semithermo_cli::run_args;
use serde_json::Value;
use std::time::{Duration, Instant};

const S235: &str = "lin:2,lin:3,lin:5";

fn run(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["semithermo"];
    full.extend_from_slice(args);
    let out = run_args(full);
    assert!(out.json.is_some(), "{args:?} failed: {}", out.stderr);
    (out.exit_code, out.report().unwrap())
}

fn verdict(criterion: u32, what: &str, ok: bool, detail: String, elapsed: Duration) {
    println!(
        "{} criterion {criterion}: {what} — {detail} [{:.2} s]",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(ok, "criterion {criterion} not met: {detail}");
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

#[test]
fn criterion_01_averaged_entropy() {
    let t = Instant::now();
    let (code, r) = run(&["entropy", "--generators", S235, "--eps", "1/64", "--nmax", "6", "--method", "exact"]);
    let el = t.elapsed();
    let est = f(&r["result"]["estimate"]);
    let logz: Vec<f64> = r["result"]["samples"].as_array().unwrap().iter().map(|s| f(&s["logZ"])).collect();
    let target = (10.0f64 / 3.0).ln();
    let worst = logz.windows(2).map(|w| (w[1] - w[0] - target).abs()).fold(0.0, f64::max);
    let ok = code == 0 && (est - 1.20397).abs() < 0.05 && logz.len() == 6 && worst < 1e-10 && el.as_secs_f64() < 10.0;
    verdict(1, "averaged entropy on {2,3,5}", ok, format!("estimate {est:.6}, max |diff - log(10/3)| = {worst:.2e}"), el);
}

#[test]
fn criterion_02_glw_entropy() {
    let t = Instant::now();
    let (code, r) = run(&[
        "glw", "--generators", S235, "--eps", "1/64", "--nmax", "5", "--method", "grid", "--grid", "2^16",
    ]);
    let el = t.elapsed();
    let est = f(&r["result"]["estimate"]);
    let ok = code == 0 && (est - 1.60944).abs() < 0.05 && el.as_secs_f64() < 120.0;
    verdict(2, "GLW entropy on {2,3,5}, grid M = 2^16", ok, format!("estimate {est:.6} vs log 5 = 1.60944"), el);
}

#[test]
fn criterion_03_bis_quotient() {
    let t = Instant::now();
    let (code, r) = run(&["compare", "--generators", S235, "--eps", "1/64", "--nmax", "6", "--method", "exact"]);
    let el = t.elapsed();
    let q = f(&r["result"]["bis_quotient"]);
    let g = r["result"]["bis"]["group_size"]["count"].as_str().unwrap().to_string();
    let ok = code == 0 && q < 0.05;
    verdict(3, "growth-normalised quotient at n = 6", ok, format!("quotient {q:.4} (|G_5| = {g}), required < 0.05"), el);
}

#[test]
fn criterion_04_periodic_growth() {
    let t = Instant::now();
    let (code, r) = run(&["periodic", "--generators", S235, "--nmax", "15"]);
    let el = t.elapsed();
    let g = &r["result"]["growth"];
    let rate = f(&g["rate"]);
    let rows = g["rows"].as_array().unwrap();
    let brute = rows
        .iter()
        .filter(|row| row["n"].as_u64().unwrap() <= 6)
        .all(|row| row["brute_force_agrees"] == Value::Bool(true));
    let brute_rows = rows.iter().filter(|row| row["brute_force_agrees"].is_boolean()).count();
    let margin = f(&g["margin"]);
    let ok = code == 0 && (rate - (10.0f64 / 3.0).ln()).abs() < 1e-4 && brute && brute_rows == 6 && margin >= -0.05;
    verdict(
        4,
        "mean fixed-point growth on {2,3,5}",
        ok,
        format!("rate {rate:.8}, brute force agrees for n <= 6: {brute}, margin {margin:.2e}"),
        el,
    );
}

#[test]
fn criterion_05_pressure_regularity() {
    let t = Instant::now();
    let (code, r) = run(&[
        "pressure", "--generators", S235, "--eps", "1/32", "--nmax", "5", "--method", "exact", "--potential", "cos:1,1",
        "--t-grid", "-1..1:21",
    ]);
    let el = t.elapsed();
    let v = r["result"]["lipschitz_violations"].as_array().unwrap().len();
    let points = r["result"]["curve"].as_array().unwrap().len();
    let shift = f(&r["result"]["shift_defect"]);
    let ok = code == 0 && v == 0 && points == 21 && shift <= 1e-12;
    verdict(5, "Lipschitz bound and shift identity", ok, format!("{v} violations over {points} t-values, shift defect {shift:.2e}"), el);
}

#[test]
fn criterion_06_bounded_distortion() {
    let t = Instant::now();
    let (code, r) = run(&[
        "distortion", "--generators", S235, "--potential", "cos:1,1", "--eps", "0.01,0.005", "--samples", "10000",
    ]);
    let el = t.elapsed();
    let reps = r["result"].as_array().unwrap();
    let mut ok = code == 0 && reps.len() == 2;
    let mut detail = Vec::new();
    for rep in reps {
        let eps = f(&rep["epsilon"]);
        let bound = f(&rep["bound"]);
        let maxv = f(&rep["max_variation"]);
        let viol = rep["violations"].as_u64().unwrap();
        ok &= viol == 0 && (bound - 4.0 * std::f64::consts::PI * eps).abs() < 1e-12 && maxv <= bound;
        ok &= rep["samples"].as_u64() == Some(10_000);
        detail.push(format!("eps {eps}: max {maxv:.4} <= 4 pi eps = {bound:.4}, {viol} violations"));
    }
    verdict(6, "bounded distortion for cos(2 pi x)", ok, detail.join("; "), el);
}

#[test]
fn criterion_07a_specification_witnesses() {
    let t = Instant::now();
    let (code, r) = run(&[
        "spec-witness", "--generators", S235, "--eps", "0.05", "--segment", "0.2@2,2,2", "--segment", "0.7@2,2", "--bridge",
        "1,1,1,1", "--random", "200", "--seed", "11",
    ]);
    let el = t.elapsed();
    let n = r["result"]["instances"].as_u64().unwrap();
    let all = r["result"]["all_reverified"] == Value::Bool(true);
    let ok = code == 0 && all && n == 201 && el.as_secs_f64() < 10.0;
    verdict(7, "witnesses re-verify every prefix constraint at eps = 0.05", ok, format!("{n} witnesses, all re-verified: {all}"), el);
}

#[test]
fn criterion_07b_specification_falsifier() {
    let t = Instant::now();
    let (code, r) = run(&["spec-falsify", "--generators", "lin:2,rot:golden", "--eps", "0.01", "--n", "10"]);
    let el = t.elapsed();
    let certs = r["result"]["probe"]["certificates"].as_array().unwrap();
    let candidates: Vec<u64> = certs.iter().map(|c| c["candidate"].as_u64().unwrap()).collect();
    let gaps_positive = certs.iter().all(|c| f(&c["gap"]) > 0.0);
    let reverified = r["result"]["certificates_reverified"] == Value::Bool(true);
    let ok = code == 0
        && candidates == (1..=20).collect::<Vec<_>>()
        && gaps_positive
        && reverified
        && r["verdict"] == "PASS"
        && el.as_secs_f64() < 10.0;
    verdict(7, "falsifier defeats every candidate p(eps) <= 20", ok, format!("{} certificates, exact re-check: {reverified}", certs.len()), el);
}

#[test]
fn criterion_08_census_and_h() {
    let t = Instant::now();
    let (code, r) = run(&["census", "--m", "2", "--K", "3", "--p", "10..40", "--gamma", "0.3,0.5,0.9"]);
    let el = t.elapsed();
    let rows = r["result"]["tables"][0]["rows"].as_array().unwrap();
    let at = |p: u64| rows.iter().find(|x| x["p"].as_u64() == Some(p)).unwrap()["bad_count"].as_str().unwrap().to_string();
    let verdicts: Vec<String> = r["result"]["hypothesis_h"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| h["verdict"].as_str().unwrap().to_string())
        .collect();
    let ok = code == 0 && at(10) == "56" && at(40) == "821" && verdicts == ["PASS", "PASS", "PASS"];
    verdict(8, "census and hypothesis (H)", ok, format!("counts {} / {}, verdicts {verdicts:?}", at(10), at(40)), el);
}

#[test]
fn criterion_09_entropy_points() {
    let t = Instant::now();
    let (code, r) = run(&[
        "entropy-point", "--generators", S235, "--method", "grid", "--eps", "1/64", "--nmax", "6", "--random-centers", "5",
        "--radius", "0.05", "--seed", "2024",
    ]);
    let el = t.elapsed();
    let pts = r["result"]["points"].as_array().unwrap();
    let gap = f(&r["result"]["max_gap"]);
    let ok = code == 0 && pts.len() == 5 && gap <= 0.1;
    verdict(9, "local vs global entropy at five random centers", ok, format!("max gap {gap:.4}"), el);
}

#[test]
fn criterion_10_sandwich_and_metric_axioms() {
    let t = Instant::now();
    let families = [
        SemigroupSpec::parse("lin:2,lin:3,lin:5").unwrap(),
        SemigroupSpec::parse("lin:2,rot:golden").unwrap(),
        SemigroupSpec::parse("mp:0.5,lin:3").unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let grid = GridSpec::new(1 << 12);
    let (mut cases, mut violations) = (0, 0);
    for i in 0..1000 {
        let s = &families[i % families.len()];
        let len = rng.random_range(0..4);
        let w = Word::new((0..len).map(|_| rng.random_range(0..s.m())).collect());
        let (x, y, z): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
        let dxy = dyn_distance(&w, s, x, y).unwrap();
        let metric = dxy == dyn_distance(&w, s, y, x).unwrap()
            && dxy <= dyn_distance(&w, s, x, z).unwrap() + dyn_distance(&w, s, z, y).unwrap() + 1e-12
            && dyn_distance(&w, s, x, x).unwrap() == 0.0
            && (0.0..=0.5).contains(&dxy);
        let eps = rng.random_range(0.02..0.15);
        let sep = maximal_separated(&w, s, eps, &grid).unwrap().len();
        let upper = min_cover_count(&w, s, eps, &grid).unwrap();
        let sandwich = if s.all_affine() {
            min_cover_count(&w, s, 2.0 * eps, &grid).unwrap() <= sep && sep <= upper
        } else {
            sep <= upper
        };
        cases += 1;
        if !(metric && sandwich) {
            violations += 1;
        }
    }
    let el = t.elapsed();
    verdict(10, "cover/separation sandwich and metric axioms", violations == 0, format!("{violations} violations in {cases} cases"), el);
}
