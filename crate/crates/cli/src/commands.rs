use crate::args::*;
use crate::report::{Report, Row};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semithermo::dynamics::{Potential, SemigroupSpec};
use semithermo::periodic::mean_fix_growth;
use semithermo::separation::{GridSpec, Method};
use semithermo::specprobe::{
    self, census::census_table, hypothesis_h_check, reverify_witness, strong_spec_falsify,
    strong_spec_witness, uniform_exactness_n, FalsifyOptions, Segment, Verdict,
};
use semithermo::thermo::{
    self, bis_quotient, estimate_entropy, estimate_pressure, glw_entropy, pressure_curve,
    subadditivity_check, variation_bound_check, EstimateReport, Schedule, SetOptions,
};
use semithermo::words::Word;
use serde_json::{json, to_value, Value};

pub type Outcome = Result<Report, String>;

fn lib<T>(r: semithermo::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn semigroup(spec: &str) -> Result<SemigroupSpec, String> {
    if spec.trim().is_empty() {
        return Err("empty generator list: pass --generators, e.g. lin:2,lin:3".into());
    }
    lib(SemigroupSpec::parse(spec))
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Exact => Method::Exact,
        MethodArg::Grid => Method::Grid,
    }
}

fn schedule(a: &ScheduleArgs) -> Result<Schedule, String> {
    let mut s = Schedule::new(a.eps.0.clone(), a.nmax, method(a.method)).with_grid(a.grid);
    s.n_min = a.nmin;
    s.fit_k = a.fit_k;
    s.cap = a.cap as u64;
    lib(s.validate())?;
    Ok(s)
}

fn value(v: impl serde::Serialize) -> Value {
    to_value(v).expect("report serialises")
}

fn sample_rows(cmd: &str, r: &EstimateReport) -> Vec<Row> {
    r.samples
        .iter()
        .map(|p| {
            let extra = match (&p.note, p.resolved) {
                (Some(n), _) => n.clone(),
                (None, true) => "resolved".into(),
                (None, false) => "unresolved".into(),
            };
            Row::new(cmd)
                .n(p.n as u64)
                .eps(p.epsilon)
                .method(p.method)
                .value(p.log_z)
                .t(p.t)
                .extra(extra)
        })
        .collect()
}

fn estimate_row(cmd: &str, r: &EstimateReport) -> Row {
    Row::new(cmd)
        .eps(r.estimate_epsilon)
        .value(r.estimate)
        .extra(format!("{} estimate; spread {}", r.quantity, r.spread))
}

fn combine(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut out = Verdict::Pass;
    for v in vs {
        match v {
            Verdict::Fail => return Verdict::Fail,
            Verdict::Inconclusive => out = Verdict::Inconclusive,
            Verdict::Pass => {}
        }
    }
    out
}

fn pass_if(ok: bool) -> Option<Verdict> {
    Some(if ok { Verdict::Pass } else { Verdict::Fail })
}

pub fn dispatch(cmd: &Command, seed: u64) -> Outcome {
    match cmd {
        Command::Entropy(a) => entropy(a),
        Command::Pressure(a) => pressure(a),
        Command::Glw(a) => glw(a),
        Command::Compare(a) => compare(a),
        Command::Periodic(a) => periodic(a),
        Command::SpecWitness(a) => witness(a, seed),
        Command::SpecFalsify(a) => falsify(a),
        Command::Census(a) => census(a),
        Command::Distortion(a) => distortion(a, seed),
        Command::Subadditivity(a) => subadditivity(a),
        Command::EntropyPoint(a) => entropy_point(a, seed),
        Command::Expansiveness(a) => expansiveness(a, seed),
    }
}

fn entropy(a: &ScheduleArgs) -> Outcome {
    let s = semigroup(&a.gen.generators)?;
    let r = lib(estimate_entropy(&s, &schedule(a)?))?;
    let mut rows = sample_rows("entropy", &r);
    rows.push(estimate_row("entropy", &r));
    Ok(Report {
        verdict: None,
        result: value(&r),
        rows,
    })
}

fn pressure(a: &PressureArgs) -> Outcome {
    let s = semigroup(&a.schedule.gen.generators)?;
    let phi = lib(Potential::parse(&a.potential))?;
    let sch = schedule(&a.schedule)?;
    let ts = match (&a.t, &a.t_grid) {
        (Some(t), _) => t.0.clone(),
        (None, Some(g)) => g.values(),
        (None, None) => vec![1.0],
    };
    if ts.len() == 1 && ts[0] == 1.0 {
        let r = lib(estimate_pressure(&s, &phi, &sch))?;
        let mut rows = sample_rows("pressure", &r);
        rows.push(estimate_row("pressure", &r));
        return Ok(Report {
            verdict: None,
            result: value(&r),
            rows,
        });
    }
    let c = lib(pressure_curve(&s, &phi, &ts, &sch))?;
    let mut rows = Vec::new();
    for (p, r) in c.points.iter().zip(&c.reports) {
        rows.extend(sample_rows("pressure", r));
        rows.push(Row::new("pressure").t(p.t).value(p.estimate).extra("P(t phi) estimate"));
    }
    let ok = c.lipschitz_violations.is_empty() && c.shift_defect <= 1e-12;
    Ok(Report {
        verdict: pass_if(ok),
        result: json!({
            "potential": c.potential,
            "sup_norm": c.sup_norm,
            "curve": c.points.iter().map(|p| json!({"t": p.t, "estimate": p.estimate, "per_n": p.per_n})).collect::<Vec<_>>(),
            "lipschitz_violations": c.lipschitz_violations,
            "shift_defect": c.shift_defect,
            "shift_tolerance": 1e-12,
        }),
        rows,
    })
}

fn glw(a: &ScheduleArgs) -> Outcome {
    let s = semigroup(&a.gen.generators)?;
    let r = lib(glw_entropy(&s, &schedule(a)?, None))?;
    let mut rows = sample_rows("glw", &r);
    rows.push(estimate_row("glw", &r));
    Ok(Report {
        verdict: None,
        result: value(&r),
        rows,
    })
}

fn compare(a: &CompareArgs) -> Outcome {
    let s = semigroup(&a.schedule.gen.generators)?;
    let sch = schedule(&a.schedule)?;
    let averaged = lib(estimate_entropy(&s, &sch))?;
    let mut glw_sch = sch.clone();
    if let Some(m) = a.glw_method {
        glw_sch.method = method(m);
    }
    let glw = lib(glw_entropy(&s, &glw_sch, None))?;
    let n = a.bis_n.unwrap_or(sch.n_max);
    let eps = sch.epsilons.iter().copied().fold(f64::INFINITY, f64::min);
    let bis = lib(bis_quotient(
        &s,
        n,
        eps,
        glw_sch.method,
        &GridSpec::new(glw_sch.grid),
    ))?;
    let mut rows = sample_rows("compare", &averaged);
    rows.push(estimate_row("compare", &averaged));
    rows.extend(sample_rows("compare", &glw));
    rows.push(estimate_row("compare", &glw));
    rows.push(
        Row::new("compare")
            .n(n as u64)
            .eps(eps)
            .method(bis.separated.method)
            .value(bis.quotient)
            .extra(format!("bis quotient: log s / |G_{}| with |G_{}| = {}", n - 1, n - 1, bis.group_size.count)),
    );
    Ok(Report {
        verdict: None,
        result: json!({
            "averaged_entropy": averaged.estimate,
            "glw_entropy": glw.estimate,
            "bis_quotient": bis.quotient,
            "averaged": averaged,
            "glw": glw,
            "bis": bis,
        }),
        rows,
    })
}

fn periodic(a: &PeriodicArgs) -> Outcome {
    let s = semigroup(&a.gen.generators)?;
    let mut r = lib(mean_fix_growth(&s, a.nmin, a.nmax))?;
    let mut notes = Vec::new();
    let sch = Schedule::new(vec![a.eps], a.entropy_nmax, Method::Exact);
    match estimate_entropy(&s, &sch) {
        Ok(h) => r = r.with_entropy(h.estimate),
        Err(e) => notes.push(format!("entropy estimate unavailable: {e}")),
    }
    let brute_ok = r.rows.iter().all(|row| row.brute_force_agrees != Some(false));
    let margin_ok = r.margin.is_none_or(|m| m >= -a.margin_tolerance);
    let mut rows: Vec<Row> = r
        .rows
        .iter()
        .map(|row| {
            Row::new("periodic")
                .n(row.n as u64)
                .method("exact")
                .value(&row.fix_sum)
                .extra(format!(
                    "rate={}{}",
                    row.rate,
                    match row.brute_force_agrees {
                        Some(b) => format!("; brute_force_agrees={b}"),
                        None => String::new(),
                    }
                ))
        })
        .collect();
    if let Some(m) = r.margin {
        rows.push(Row::new("periodic").eps(a.eps).value(m).extra("margin = rate - entropy estimate"));
    }
    Ok(Report {
        verdict: pass_if(brute_ok && margin_ok),
        result: json!({"growth": r, "notes": notes}),
        rows,
    })
}

fn parse_word(s: &str) -> Result<Word, String> {
    let letters = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("bad letter {t:?} in word {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    lib(Word::from_one_based(&letters))
}

fn parse_segment(s: &str) -> Result<Segment, String> {
    let (x, w) = s
        .split_once('@')
        .ok_or_else(|| format!("segment {s:?} is not of the form x@letters"))?;
    Ok(Segment {
        x: crate::values::parse_number(x)?,
        word: parse_word(w)?,
    })
}

fn random_instance(s: &SemigroupSpec, eps: f64, rng: &mut ChaCha8Rng) -> Result<(Vec<Segment>, Vec<Word>), String> {
    let need = lib(uniform_exactness_n(s, eps))? as usize;
    let word = |len: usize, rng: &mut ChaCha8Rng| Word::new((0..len).map(|_| rng.random_range(0..s.m())).collect());
    let k = rng.random_range(1..=4);
    let segments = (0..k)
        .map(|_| {
            let x = rng.random::<f64>();
            let len = rng.random_range(0..=5);
            Segment { x, word: word(len, rng) }
        })
        .collect();
    let bridges = (1..k)
        .map(|_| {
            let len = need + rng.random_range(0..=2);
            word(len, rng)
        })
        .collect();
    Ok((segments, bridges))
}

fn witness(a: &WitnessArgs, seed: u64) -> Outcome {
    let s = semigroup(&a.gen.generators)?;
    if a.segment.is_empty() && a.random == 0 {
        return Err("spec-witness needs --segment values or --random N".into());
    }
    let mut rows = Vec::new();
    let mut results = Vec::new();
    let mut all_ok = true;
    let mut check = |segments: &[Segment], bridges: &[Word], label: String, rows: &mut Vec<Row>| -> Result<(), String> {
        let r = lib(strong_spec_witness(&s, segments, bridges, a.eps))?;
        let point = r.exact_point().ok_or("witness without a point")?;
        let again = lib(reverify_witness(&s, segments, bridges, &point, a.eps))?;
        all_ok &= again && r.verdict == Verdict::Pass;
        for c in &r.constraints {
            rows.push(
                Row::new("spec-witness")
                    .n(c.prefix as u64)
                    .eps(a.eps)
                    .method("exact")
                    .value(c.distance)
                    .extra(format!("{label}; segment {}; within={}", c.segment, c.within)),
            );
        }
        results.push(json!({"instance": label, "reverified": again, "witness": r}));
        Ok(())
    };
    if !a.segment.is_empty() {
        let segments = a.segment.iter().map(|t| parse_segment(t)).collect::<Result<Vec<_>, _>>()?;
        let bridges = a.bridge.iter().map(|t| parse_word(t)).collect::<Result<Vec<_>, _>>()?;
        check(&segments, &bridges, "given".into(), &mut rows)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..a.random {
        let (segments, bridges) = random_instance(&s, a.eps, &mut rng)?;
        check(&segments, &bridges, format!("random {}", i + 1), &mut rows)?;
    }
    Ok(Report {
        verdict: pass_if(all_ok),
        result: json!({"instances": results.len(), "all_reverified": all_ok, "witnesses": results}),
        rows,
    })
}

fn falsify(a: &FalsifyArgs) -> Outcome {
    let s = semigroup(&a.generators)?;
    let opts = FalsifyOptions {
        candidates: a.candidates as u64,
        p_max: a.p_max as u64,
    };
    let r = lib(strong_spec_falsify(&s, a.eps, a.n as u32, a.x1, a.x2, opts))?;
    let mut reverified = true;
    for c in &r.certificates {
        reverified &= lib(specprobe::verify_certificate(&s, a.eps, a.n as u32, a.x1, a.x2, c))?;
    }
    let rows = r
        .certificates
        .iter()
        .map(|c| {
            Row::new("spec-falsify")
                .n(c.p)
                .eps(a.eps)
                .method("exact")
                .value(c.gap)
                .extra(format!("candidate p(eps)={}; rotation bridge length {}", c.candidate, c.p))
        })
        .collect();
    let verdict = if reverified { r.verdict } else { Verdict::Fail };
    Ok(Report {
        verdict: Some(verdict),
        result: json!({"certificates_reverified": reverified, "probe": r}),
        rows,
    })
}

fn census(a: &CensusArgs) -> Outcome {
    let mut tables = Vec::new();
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for &g in &a.gamma.0 {
        let t = lib(census_table(a.m, a.k as u64, g, a.p.iter()))?;
        let h = hypothesis_h_check(&t);
        for r in &t.rows {
            rows.push(
                Row::new("census")
                    .n(r.p)
                    .value(&r.bad_count)
                    .t(g)
                    .extra(format!("ratio={}", r.ratio)),
            );
        }
        tables.push(t);
        checks.push(h);
    }
    Ok(Report {
        verdict: Some(combine(checks.iter().map(|h| h.verdict))),
        result: json!({"kind": "census", "tables": tables, "hypothesis_h": checks}),
        rows,
    })
}

fn distortion(a: &DistortionArgs, seed: u64) -> Outcome {
    let s = semigroup(&a.gen.generators)?;
    let phi = lib(Potential::parse(&a.potential))?;
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for &e in &a.eps.0 {
        let r = lib(variation_bound_check(&s, &phi, e, a.nmax, a.samples, seed))?;
        rows.push(
            Row::new("distortion")
                .n(a.nmax as u64)
                .eps(e)
                .value(r.max_variation)
                .extra(format!("bound={}; violations={}", r.bound, r.violations)),
        );
        reports.push(r);
    }
    Ok(Report {
        verdict: pass_if(reports.iter().all(|r| r.violations == 0)),
        result: value(&reports),
        rows,
    })
}

fn subadditivity(a: &SubadditivityArgs) -> Outcome {
    let s = semigroup(&a.gen.generators)?;
    let phi = lib(Potential::parse(&a.potential))?;
    let opts = SetOptions {
        method: method(a.method),
        grid: GridSpec::new(a.grid),
        ..SetOptions::default()
    };
    let r = lib(subadditivity_check(&s, &phi, a.eps, a.nmax, &opts, a.tolerance))?;
    let rows = r
        .a
        .iter()
        .map(|&(n, v)| {
            Row::new("subadditivity")
                .n(n as u64)
                .eps(a.eps)
                .method(r.method)
                .value(v)
                .extra("a_n = log of the unnormalised sum")
        })
        .collect();
    Ok(Report {
        verdict: pass_if(r.violations == 0),
        result: value(&r),
        rows,
    })
}

fn entropy_point(a: &EntropyPointArgs, seed: u64) -> Outcome {
    let s = semigroup(&a.schedule.gen.generators)?;
    let sch = schedule(&a.schedule)?;
    let centers = match &a.centers {
        Some(c) => c.0.clone(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..a.random_centers).map(|_| rng.random::<f64>()).collect()
        }
    };
    let reports = lib(thermo::entropy_point_scan(&s, &centers, a.radius, &sch))?;
    let rows = reports
        .iter()
        .map(|r| {
            Row::new("entropy-point")
                .eps(r.local.estimate_epsilon)
                .method(sch.method)
                .value(r.local.estimate)
                .extra(format!("center={}; global={}; gap={}", r.center, r.global.estimate, r.gap))
        })
        .collect();
    let max_gap = reports.iter().map(|r| r.gap).fold(0.0, f64::max);
    Ok(Report {
        verdict: pass_if(max_gap <= a.max_gap),
        result: json!({
            "radius": a.radius,
            "max_gap": max_gap,
            "tolerance": a.max_gap,
            "points": reports.iter().map(|r| json!({
                "center": r.center, "local": r.local.estimate, "global": r.global.estimate, "gap": r.gap,
                "local_report": r.local,
            })).collect::<Vec<_>>(),
            "global_report": reports.first().map(|r| &r.global),
        }),
        rows,
    })
}

fn expansiveness(a: &ExpansivenessArgs, seed: u64) -> Outcome {
    let s = semigroup(&a.gen.generators)?;
    let delta = a
        .delta_star
        .unwrap_or_else(|| thermo::delta_star(&s).unwrap_or(0.1));
    let r = if a.raw {
        lib(specprobe::expansiveness_scan(&s, a.gamma, delta, a.pairs, seed))?
    } else {
        lib(specprobe::expansiveness_probe(&s, a.gamma, delta, a.pairs, seed))?
    };
    let row = Row::new("expansiveness")
        .n(r.k as u64)
        .eps(delta)
        .value(r.violations)
        .extra(format!(
            "gamma={}; pairs tested={}; skipped={}",
            r.gamma, r.pairs_tested, r.pairs_skipped
        ));
    Ok(Report {
        verdict: Some(r.verdict),
        result: value(&r),
        rows: vec![row],
    })
}
