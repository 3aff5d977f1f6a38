use std::fs;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use inclab_core::bounds::{
    beta_threshold, calibrate_a, eval_bound, exponent_self_test, fit_exponent, report_f64, BoundParams, FormulaId,
};
use inclab_core::containers::compute_q;
use inclab_core::generators::{gen_inversion_circles, gen_packing, gen_st_grid, generate, grid_pole, GenKind, GenSpec};
use inclab_core::incidence::{count_incidences, rich_points};
use inclab_core::partition::{partitioned_count_with, PartitionOptions};
use inclab_core::rat::parse_rat;
use inclab_core::triangles::{count_similar_bruteforce, count_similar_report, verify_q_linear, TriangleShape};
use inclab_core::{CurveKind, CurveSet, Error, PointSet, Real};
use serde_json::{json, Value};

use crate::instance::{Instance, Meta};
use crate::{BoundsArgs, Cli, CliError, Cmd, FitArgs, GenArgs, Kind, PartitionArgs, SuiteArgs, SuiteKind, TriangleArgs};

type Res = Result<(), CliError>;

pub fn run(cli: &Cli) -> Res {
    let started = Instant::now();
    match &cli.cmd {
        Cmd::Gen(args) => gen(cli, args),
        Cmd::Count { input } => {
            let inst = Instance::load(input)?;
            let r = count_incidences(&inst.points, &inst.curves);
            let report = json!({
                "m": inst.points.len(),
                "n": inst.curves.len(),
                "total": r.total,
                "max_point_degree": r.point_degrees.iter().max().copied().unwrap_or(0),
                "max_curve_degree": r.curve_degrees.iter().max().copied().unwrap_or(0),
            });
            emit_json(cli, report, started, input)?;
            check(r.is_consistent(), || "degree sums disagree with the total".into())
        }
        Cmd::Rich { input, t } => {
            let inst = Instance::load(input)?;
            let rich = rich_points(&inst.points, &inst.curves, *t)?;
            emit_json(cli, json!({ "t": t, "count": rich.len(), "points": rich }), started, input)
        }
        Cmd::Q { input } => {
            let inst = Instance::load(input)?;
            let r = compute_q(&inst.curves);
            emit_json(cli, json!({ "n": inst.curves.len(), "report": r }), started, input)
        }
        Cmd::Bounds(args) => bounds(cli, args, started),
        Cmd::Partition(args) => partition(cli, args, started),
        Cmd::Triangles(args) => triangles(cli, args, started),
        Cmd::Fit(args) => fit(cli, args, started),
        Cmd::Suite(args) => suite(cli, args),
    }
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Res {
    if ok {
        Ok(())
    } else {
        Err(CliError::Invariant(what()))
    }
}

fn write_out(cli: &Cli, text: &str) -> Res {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(cli: &Cli, mut report: Value, started: Instant, input: &Path) -> Res {
    if !cli.no_meta {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        report["meta"] = json!({
            "input": input.display().to_string(),
            "elapsed_ms": started.elapsed().as_secs_f64() * 1e3,
            "created_unix": now,
        });
    }
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    write_out(cli, &text)
}

fn seed(fallback: u64) -> Result<u64, CliError> {
    match std::env::var("INCLAB_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Invalid(format!("INCLAB_SEED={v:?} is not an integer"))),
        Err(_) => Ok(fallback),
    }
}

fn gen(cli: &Cli, args: &GenArgs) -> Res {
    let kind = match args.kind {
        Kind::StGrid => GenKind::StGrid,
        Kind::InversionCircles => GenKind::InversionCircles,
        Kind::Packing => GenKind::Packing,
        Kind::RandomCircles => GenKind::RandomCircles,
        Kind::RandomLines => GenKind::RandomLines,
        Kind::RandomPoints => GenKind::RandomPoints,
    };
    let spec = GenSpec {
        kind,
        a: args.a,
        b: args.b,
        copies: args.copies,
        lines: args.lines,
        n: args.n,
        m: args.m,
        range: args.range,
        denom: args.denom,
        seed: seed(args.seed)?,
    };
    let (points, curves) = generate(&spec)?;
    let meta = (!cli.no_meta).then(|| Meta { seed: Some(spec.seed), generator: Some(spec), ..Default::default() });
    write_out(cli, &Instance { points, curves, meta }.to_json())
}

fn formula_list(names: &[String]) -> Result<Vec<FormulaId>, CliError> {
    names.iter().map(|s| s.parse().map_err(CliError::from)).collect()
}

fn bounds(cli: &Cli, args: &BoundsArgs, started: Instant) -> Res {
    if args.self_test {
        let formulas: Vec<Value> = exponent_self_test(args.k, args.s)
            .into_iter()
            .map(|(id, terms)| {
                let terms: Vec<Vec<String>> =
                    terms.iter().map(|t| t.iter().map(|e| e.to_string()).collect()).collect();
                json!({ "formula": id, "exponents": terms })
            })
            .collect();
        let beta = beta_threshold(args.k, args.s).map(|b| b.to_string());
        let report = json!({ "k": args.k, "s": args.s, "beta_threshold": beta, "formulas": formulas });
        return emit_json(cli, report, started, Path::new("-"));
    }
    let (mut p, observed, input) = match &args.input {
        Some(path) => {
            let inst = Instance::load(path)?;
            let q = compute_q(&inst.curves).q as u64;
            let i = count_incidences(&inst.points, &inst.curves).total;
            let p = BoundParams::new(inst.points.len() as u64, inst.curves.len() as u64).with_q(q);
            (p, Some(i), path.as_path())
        }
        None => {
            let m = args.m.ok_or(Error::MissingParam("m"))?;
            let n = args.n.ok_or(Error::MissingParam("n"))?;
            (BoundParams::new(m, n), None, Path::new("-"))
        }
    };
    if let Some(q) = args.q {
        p.q = Some(q);
    }
    p.t = args.t;
    p = p.with_k(args.k).with_s(args.s).with_a(Real::from_f64(args.a));
    let explicit = !args.formulas.is_empty();
    let ids = if explicit { formula_list(&args.formulas)? } else { FormulaId::ALL.to_vec() };
    let mut rows = Vec::new();
    for id in ids {
        match eval_bound(id, &p) {
            Ok(v) => {
                let value = report_f64(&v);
                let ratio = observed.map(|i| i as f64 / value);
                rows.push(json!({ "formula": id, "value": value, "observed": observed, "ratio": ratio }));
            }
            Err(e @ Error::MissingParam(_)) if !explicit => {
                rows.push(json!({ "formula": id, "skipped": e.to_string() }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let report = json!({ "m": p.m, "n": p.n, "q": p.q, "t": p.t, "k": p.k, "s": p.s, "bounds": rows });
    emit_json(cli, report, started, input)
}

fn default_k(curves: &CurveSet) -> u32 {
    match curves.kind() {
        Some(CurveKind::Circle) => 3,
        _ => 2,
    }
}

fn partition(cli: &Cli, args: &PartitionArgs, started: Instant) -> Res {
    let inst = Instance::load(&args.input)?;
    let k = args.k.unwrap_or_else(|| default_k(&inst.curves));
    let params = BoundParams::new(inst.points.len() as u64, inst.curves.len() as u64).with_k(k);
    let opts = PartitionOptions { rounds: args.rounds, degree: args.degree };
    let (r, trace) = partitioned_count_with(&inst.points, &inst.curves, &params, &opts)?;
    let violations = trace.violations(inst.curves.degree());
    let brute = args.verify.then(|| count_incidences(&inst.points, &inst.curves).total);
    let mut trace_json = serde_json::to_value(&trace).expect("traces serialize");
    if cli.no_meta {
        trace_json.as_object_mut().map(|o| o.remove("elapsed_ms"));
    }
    let report = json!({
        "total": r.total,
        "brute_total": brute,
        "work_ratio": trace.work_ratio(),
        "violations": violations,
        "trace": trace_json,
    });
    emit_json(cli, report, started, &args.input)?;
    check(violations.is_empty(), || violations.join("; "))?;
    check(brute.is_none_or(|b| b == r.total), || format!("partitioned {} != brute force {:?}", r.total, brute))
}

fn triangles(cli: &Cli, args: &TriangleArgs, started: Instant) -> Res {
    let inst = Instance::load(&args.input)?;
    let shape = TriangleShape::new(parse_rat(&args.k1sq)?, parse_rat(&args.k2sq)?)?;
    let p: &PointSet = &inst.points;
    let r = count_similar_report(p, &shape)?;
    let oracle = count_similar_bruteforce(p, &shape);
    let ql = (p.len() >= 2).then(|| verify_q_linear(p, &shape)).transpose()?;
    let n = p.len() as u64;
    let scale = report_f64(&eval_bound(FormulaId::Tri, &BoundParams::new(n, 0))?);
    let report = json!({
        "n": n,
        "similar": r.count,
        "oracle": oracle,
        "circles": r.circles,
        "incidences": r.incidences,
        "max_multiplicity": r.max_multiplicity,
        "q": ql.as_ref().map(|x| x.q),
        "q_bound": ql.as_ref().map(|x| x.bound),
        "ratio": if n == 0 { 0.0 } else { r.count as f64 / scale },
    });
    emit_json(cli, report, started, &args.input)?;
    check(r.count == oracle, || format!("locus count {} != brute force {oracle}", r.count))?;
    check(ql.is_none_or(|x| x.pass), || "container parameter exceeds 3n - 1".into())
}

fn fit(cli: &Cli, args: &FitArgs, started: Instant) -> Res {
    let bad = |e: csv::Error| CliError::Invalid(format!("{}: {e}", args.input.display()));
    let mut rdr = csv::Reader::from_path(&args.input).map_err(bad)?;
    let headers = rdr.headers().map_err(bad)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::Invalid(format!("no column named {name:?}")))
    };
    let (xi, yi) = (col(&args.x)?, col(&args.y)?);
    let mut series = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(bad)?;
        let num = |i: usize| {
            rec.get(i)
                .and_then(|v| v.trim().parse::<f64>().ok())
                .ok_or_else(|| CliError::Invalid(format!("non-numeric value in row {:?}", rec.position())))
        };
        series.push((num(xi)?, num(yi)?));
    }
    let slope = fit_exponent(&series)?;
    emit_json(cli, json!({ "x": args.x, "y": args.y, "points": series.len(), "slope": slope }), started, &args.input)
}

fn suite(cli: &Cli, args: &SuiteArgs) -> Res {
    let size = args.size.max(1);
    let seed = seed(args.seed)?;
    let mut instances: Vec<(String, PointSet, CurveSet)> = Vec::new();
    for i in 1..=size {
        let (label, (p, c)) = match args.kind {
            SuiteKind::Grids => (format!("grid({i},{i})"), gen_st_grid(i, i)?),
            SuiteKind::Inversions => {
                let (p, l) = gen_st_grid(i, i)?;
                (format!("inversion({i},{i})"), gen_inversion_circles(&p, &l, &grid_pole())?)
            }
            SuiteKind::Packings => {
                let (p, l) = gen_st_grid(2, 2)?;
                (format!("packing(2,2)x{i}"), gen_packing(i, &gen_inversion_circles(&p, &l, &grid_pole())?)?)
            }
            SuiteKind::RandomCircles | SuiteKind::RandomLines => {
                let kind = if args.kind == SuiteKind::RandomLines { GenKind::RandomLines } else { GenKind::RandomCircles };
                let n = 5 + 5 * i;
                let s = seed + i as u64;
                let spec = GenSpec { kind, n, m: n + 10, range: 3, seed: s, ..Default::default() };
                (format!("random(seed={s},n={n})"), generate(&spec)?)
            }
        };
        instances.push((label, p, c));
    }
    let circles = matches!(args.kind, SuiteKind::Inversions | SuiteKind::Packings | SuiteKind::RandomCircles);
    let ids = if !args.formulas.is_empty() {
        formula_list(&args.formulas)?
    } else if circles {
        vec![FormulaId::Circ3, FormulaId::Impr]
    } else {
        vec![FormulaId::Main, FormulaId::GkLines, FormulaId::Ps]
    };
    let k = if circles { 3 } else { 2 };
    let rows: Vec<(String, BoundParams, u64)> = instances
        .iter()
        .map(|(label, p, c)| {
            let q = compute_q(c).q as u64;
            let params = BoundParams::new(p.len() as u64, c.len() as u64).with_q(q).with_k(k).with_s(3);
            (label.clone(), params, count_incidences(p, c).total)
        })
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = ["suite", "instance", "m", "n", "q", "observed", "formula", "shape_value", "a", "bound", "ratio"];
    w.write_record(header).expect("in-memory write");
    let suite_name = format!("{:?}", args.kind).to_lowercase();
    let mut exceeded = Vec::new();
    for id in ids {
        let calib: Vec<(BoundParams, u64)> = rows.iter().map(|r| (r.1.clone(), r.2)).collect();
        let a = calibrate_a(&calib, id)?;
        for (label, p, observed) in &rows {
            let shape = eval_bound(id, p)?;
            let bound = eval_bound(id, &p.clone().with_a(a.clone()))?;
            if bound < Real::from_u64(*observed) {
                exceeded.push(format!("{label}/{id}"));
            }
            let bf = report_f64(&bound);
            w.write_record([
                suite_name.clone(),
                label.clone(),
                p.m.to_string(),
                p.n.to_string(),
                p.q.unwrap_or(0).to_string(),
                observed.to_string(),
                id.to_string(),
                report_f64(&shape).to_string(),
                report_f64(&a).to_string(),
                bf.to_string(),
                (*observed as f64 / bf).to_string(),
            ])
            .expect("in-memory write");
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Invalid(e.to_string()))?;
    write_out(cli, &String::from_utf8(bytes).expect("csv is utf-8"))?;
    check(exceeded.is_empty(), || format!("observed counts exceed calibrated bounds: {}", exceeded.join(", ")))
}
