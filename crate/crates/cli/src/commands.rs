use maxmeasure::classical::AdditiveMeasure;
use maxmeasure::ext::ExtReal;
use maxmeasure::integral::{essential_supremum_measure, idempotent_integral, measure_with_density};
use maxmeasure::invariants;
use maxmeasure::ks::ks_one_sample;
use maxmeasure::maxitive::{
    atom_decomposition, choquet_alternating, classify, disjoint_variation, essential_supremum, essential_witness,
    finiteness_suite,
};
use maxmeasure::model::{ext_json, function_json, Measure, SpaceSpec, SCHEMA_VERSION};
use maxmeasure::possibility::{bcj_property_suite, conditional, lp_limit_conditional, PossibilitySpace};
use maxmeasure::pseudo_mul::{default_grid, residual_unattained, verify_axioms};
use maxmeasure::radon_nikodym::{abs_continuity, bcj_density, density_from_associated, rn_density};
use maxmeasure::supmeasure::{
    fit_frechet_scale, frechet_cdf, mc_rv_tail_check, sample_many, ControlMeasure, SampleMode, SlowVariation,
};
use maxmeasure::{AtomSet, Error, MaxitiveMeasure, MeasurableFn, PseudoMul, Result, SemigroupOp, SetFn, SetFunction, Space};
use serde_json::{json, Map, Value};

use crate::input::Inputs;
use crate::{Cli, Command, Method, Mode, OpArg, Slow};

pub struct Report {
    pub value: Value,
    /// Exit with status 1 although the command ran.
    pub failed: bool,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, failed: false }
    }
}

pub fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values render")
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn header(command: &str, space: Option<&Space>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    if let Some(s) = space {
        m.insert("space".into(), to_json(&SpaceSpec::of(s)));
    }
    m
}

fn pseudo_mul(op: OpArg) -> Result<PseudoMul> {
    PseudoMul::from_name(op.name())
}

fn ext_arg(text: &str) -> Result<ExtReal> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Ok(ExtReal::INFINITY);
    }
    let v: f64 = t.parse().map_err(|_| Error::Model(format!("`{text}` is not a number")))?;
    if v.is_infinite() && v > 0.0 {
        return Ok(ExtReal::INFINITY);
    }
    ExtReal::new(v)
}

fn set_arg(space: &Space, set: Option<&str>) -> Result<AtomSet> {
    match set {
        Some(s) => space.parse_set(s),
        None => Ok(space.full()),
    }
}

fn labelled_sets(space: &Space, sets: &[AtomSet]) -> Value {
    Value::Array(sets.iter().map(|&s| json!(space.format_set(s))).collect())
}

pub fn dispatch(cli: &Cli) -> Result<Report> {
    let model = cli.model.as_deref();
    let validate = !cli.no_validate;
    match &cli.command {
        Command::Check(a) => {
            let inp = Inputs::load(model, validate, &[&a.measure], &[], &[])?;
            check(&inp, &a.measure, a.op, a.order)
        }
        Command::Integrate(a) => {
            let inp = Inputs::load(model, validate, &[&a.measure], &[&a.function], &[])?;
            integrate(&inp, a.op, &a.measure, &a.function, a.set.as_deref())
        }
        Command::Esssup(a) => {
            let inp = Inputs::load(model, validate, &[&a.measure], &[&a.function], &[])?;
            esssup(&inp, &a.measure, &a.function, a.set.as_deref())
        }
        Command::Density(a) => {
            let inp = Inputs::load(model, validate, &[&a.nu, &a.tau], &[], &[])?;
            density(&inp, a.op, &a.nu, &a.tau, a.method)
        }
        Command::Decompose(a) => {
            let inp = Inputs::load(model, validate, &[&a.measure], &[], &[])?;
            decompose(&inp, &a.measure)
        }
        Command::Variation(a) => {
            let inp = Inputs::load(model, validate, &[&a.measure], &[], &[])?;
            variation(&inp, &a.measure)
        }
        Command::Condition(a) => {
            let mut fns = vec![a.x.as_str()];
            fns.extend(a.x2.as_deref());
            let inp = Inputs::load(model, validate, &[&a.pi], &fns, &[&a.sub])?;
            condition(&inp, a)
        }
        Command::Residual(a) => residual(a),
        Command::Simulate(a) => {
            let fns: Vec<&str> = a.function.iter().map(String::as_str).collect();
            let inp = Inputs::load(model, validate, &[&a.m], &fns, &[])?;
            simulate(&inp, a)
        }
        Command::Suite(a) => suite(a),
    }
}

fn check(inp: &Inputs, arg: &str, op: Option<OpArg>, order: Option<usize>) -> Result<Report> {
    let m = inp.measure(arg)?;
    let table = m.to_table()?;
    let report = classify(&table)?;
    let mut out = header("check", Some(&inp.space));
    out.insert("measure".into(), m.to_json(&inp.space));
    out.insert("report".into(), to_json(&report));
    if let Some(op) = op {
        let nu = MaxitiveMeasure::from_set_function(&table)?;
        out.insert("op".into(), json!(op.name()));
        out.insert("finiteness".into(), to_json(&finiteness_suite(&pseudo_mul(op)?, &nu)?));
    }
    if let Some(order) = order {
        out.insert("alternation".into(), to_json(&choquet_alternating(&table, order)?));
    }
    Ok(Report::ok(Value::Object(out)))
}

fn integrate(inp: &Inputs, op: OpArg, measure: &str, function: &str, set: Option<&str>) -> Result<Report> {
    let pm = pseudo_mul(op)?;
    let f = inp.function(function)?;
    let b = set_arg(&inp.space, set)?;
    let res = match inp.measure(measure)? {
        Measure::Maxitive(nu) => idempotent_integral(&pm, &f, &nu, b)?,
        Measure::Additive(m) => idempotent_integral(&pm, &f, &m, b)?,
        Measure::Table(t) => idempotent_integral(&pm, &f, &t, b)?,
    };
    let mut out = header("integrate", Some(&inp.space));
    out.insert("op".into(), json!(op.name()));
    out.insert("set".into(), json!(inp.space.format_set(b)));
    out.insert("value".into(), ext_json(res.value));
    out.insert("evaluator_agreement".into(), json!(res.evaluator_agreement));
    out.insert("gerritse".into(), to_json(&res.gerritse));
    out.insert("threshold_trace".into(), to_json(&res.threshold_trace));
    Ok(Report::ok(Value::Object(out)))
}

fn esssup(inp: &Inputs, measure: &str, function: &str, set: Option<&str>) -> Result<Report> {
    let tau = inp.measure(measure)?.to_table()?;
    let f = inp.function(function)?;
    let b = set_arg(&inp.space, set)?;
    let value = essential_supremum(&tau, &f, b)?;
    let tau_f = essential_supremum_measure(&tau, &f);
    let mut out = header("esssup", Some(&inp.space));
    out.insert("set".into(), json!(inp.space.format_set(b)));
    out.insert("value".into(), ext_json(value));
    out.insert("measure".into(), Measure::Maxitive(tau_f).to_json(&inp.space));
    Ok(Report::ok(Value::Object(out)))
}

fn density(inp: &Inputs, op: OpArg, nu_arg: &str, tau_arg: &str, method: Method) -> Result<Report> {
    let pm = pseudo_mul(op)?;
    let nu = inp.measure(nu_arg)?.to_maxitive()?;
    let tau_m = inp.measure(tau_arg)?;
    let mut out = header("density", Some(&inp.space));
    out.insert("op".into(), json!(op.name()));
    let method_name = match method {
        Method::Residual => "residual",
        Method::Bcj => "bcj",
        Method::Associated => "associated",
    };
    out.insert("method".into(), json!(method_name));
    match method {
        Method::Residual | Method::Associated => {
            let tau = tau_m.to_maxitive()?;
            let c = if method == Method::Residual {
                rn_density(&pm, &nu, &tau)?
            } else {
                let k = nu.atom_count();
                let assoc = density_from_associated(&pm, &MaxitiveMeasure::delta_sharp(k), &nu.density(), &tau.density())?;
                out.insert("exceptional".into(), json!(inp.space.format_set(assoc.exceptional)));
                assoc.density
            };
            let back = measure_with_density(&pm, &c, &tau)?;
            let mismatch = maxmeasure::space::all_sets(nu.atom_count()).find(|&b| !back.eval(b).approx_eq(nu.eval(b)));
            out.insert("density".into(), function_json(&inp.space, &c));
            out.insert("reconstructs".into(), json!(mismatch.is_none()));
            out.insert("abs_continuity".into(), to_json(&abs_continuity(&pm, &nu, &SetFunction::tabulate(&tau)?)?));
        }
        Method::Bcj => {
            if op != OpArg::Times {
                return Err(Error::NonExactOperation("the bcj method uses ×".into()));
            }
            let m: AdditiveMeasure = match &tau_m {
                Measure::Additive(m) => m.clone(),
                other => essential_witness(&other.to_maxitive()?)?,
            };
            let env = bcj_density(&nu, &m)?;
            out.insert("density".into(), function_json(&inp.space, &env.density));
            out.insert("reference".into(), Measure::Additive(m).to_json(&inp.space));
            out.insert("m_nu".into(), Measure::Table(env.m_nu.clone()).to_json(&inp.space));
            if let Some(c1) = &env.arctan_density {
                out.insert("arctan_density".into(), function_json(&inp.space, c1));
            }
        }
    }
    Ok(Report::ok(Value::Object(out)))
}

fn decompose(inp: &Inputs, arg: &str) -> Result<Report> {
    let nu = inp.measure(arg)?.to_maxitive()?;
    let d = atom_decomposition(&nu)?;
    let mut out = header("decompose", Some(&inp.space));
    out.insert("atoms".into(), labelled_sets(&inp.space, &d.atoms));
    out.insert("values".into(), Value::Array(d.atoms.iter().map(|&h| ext_json(nu.eval(h))).collect()));
    out.insert("residual_null".into(), json!(inp.space.format_set(d.residual_null)));
    Ok(Report::ok(Value::Object(out)))
}

fn variation(inp: &Inputs, arg: &str) -> Result<Report> {
    let nu = inp.measure(arg)?.to_maxitive()?;
    let v = disjoint_variation(&nu)?;
    let mut out = header("variation", Some(&inp.space));
    out.insert("value".into(), ext_json(v.value));
    out.insert("brute_force".into(), ext_json(v.brute_force));
    out.insert("closed_form".into(), ext_json(v.closed_form));
    Ok(Report::ok(Value::Object(out)))
}

fn condition(inp: &Inputs, a: &crate::ConditionArgs) -> Result<Report> {
    let x = inp.function(&a.x)?;
    let f = inp.sub(&a.sub)?;
    let mut out = header("condition", Some(&inp.space));
    out.insert("sub".into(), labelled_sets(&inp.space, f.blocks()));
    if a.lp {
        let m = inp.measure(&a.pi)?.to_additive()?;
        let rep = lp_limit_conditional(&m, &x, &f, &a.ps)?;
        out.insert("lp".into(), to_json(&rep));
        return Ok(Report::ok(Value::Object(out)));
    }
    let pm = pseudo_mul(a.op)?;
    let p = PossibilitySpace::new(inp.measure(&a.pi)?.to_maxitive()?)?;
    let res = conditional(&pm, &p, &x, &f)?;
    out.insert("op".into(), json!(a.op.name()));
    out.insert("y".into(), function_json(&inp.space, &res.y));
    let blocks: Vec<Value> = res
        .blocks
        .iter()
        .map(|t| {
            json!({
                "block": inp.space.format_set(t.block),
                "expectation": ext_json(t.expectation),
                "pi": ext_json(t.pi),
                "value": ext_json(t.value),
                "rule": to_json(&t.rule),
            })
        })
        .collect();
    out.insert("blocks".into(), Value::Array(blocks));
    out.insert("verified_sets".into(), json!(res.verified_sets));
    if let Some(x2) = &a.x2 {
        let x2 = inp.function(x2)?;
        let suite = bcj_property_suite(&pm, &p, &f, &x, &x2, ext_arg(&a.lambda)?, a.seed)?;
        out.insert("suite".into(), to_json(&suite));
    }
    Ok(Report::ok(Value::Object(out)))
}

fn residual(a: &crate::ResidualArgs) -> Result<Report> {
    let op = SemigroupOp::from_name(a.op.name())?;
    let (r, s) = (ext_arg(&a.r)?, ext_arg(&a.s)?);
    let mut out = header("residual", None);
    out.insert("op".into(), json!(a.op.name()));
    out.insert("r".into(), ext_json(r));
    out.insert("s".into(), ext_json(s));
    out.insert("dominated".into(), json!(op.dominates(r, s)));
    let q = op.residual(r, s)?;
    out.insert("residual".into(), ext_json(q));
    out.insert("product".into(), ext_json(op.eval(q, s)));
    out.insert("attained".into(), json!(!residual_unattained(&op, r, s)));
    out.insert("exact".into(), json!(op.is_exact()));
    if a.verify {
        out.insert("axioms".into(), to_json(&verify_axioms(&op, &default_grid())));
    }
    Ok(Report::ok(Value::Object(out)))
}

fn control(inp: &Inputs, arg: &str) -> Result<ControlMeasure> {
    let masses = match inp.measure(arg)? {
        Measure::Additive(m) => m.masses().to_vec(),
        // atom values of a maxitive document are read as masses
        Measure::Maxitive(nu) => nu.values().to_vec(),
        Measure::Table(_) => return Err(Error::Model("control measure must be given by atom values".into())),
    };
    ControlMeasure::new(masses.iter().map(|v| v.get()).collect())
}

fn simulate(inp: &Inputs, a: &crate::SimulateArgs) -> Result<Report> {
    let m = control(inp, &a.m)?;
    let k = m.atom_count();
    let f = a.function.as_deref().map(|x| inp.function(x)).transpose()?;
    let mut out = header("simulate", Some(&inp.space));
    out.insert("p".into(), json!(a.p));
    out.insert("n".into(), json!(a.n));
    out.insert("seed".into(), json!(a.seed));
    if let Some(grid) = &a.tail_grid {
        let l = match a.slow {
            Slow::Const => SlowVariation::Const,
            Slow::Log => SlowVariation::Log,
        };
        let f = f.unwrap_or_else(|| MeasurableFn::constant(k, ExtReal::ONE));
        let rep = mc_rv_tail_check(&m, a.p, l, &f, a.n, grid, a.seed)?;
        out.insert("tail".into(), to_json(&rep));
        return Ok(Report::ok(Value::Object(out)));
    }
    let mode = match a.mode {
        Mode::Exact => SampleMode::Exact,
        Mode::Poisson => SampleMode::poisson(a.eps),
    };
    out.insert("mode".into(), to_json(&mode));
    out.insert("stream".into(), json!(a.stream));
    let draws = sample_many(&m, a.p, mode, a.n, a.seed, a.stream)?;
    if let Some(path) = &a.csv {
        write_csv(path, &inp.space, a.stream, &draws)?;
        out.insert("csv".into(), json!(path.display().to_string()));
    }
    let b = set_arg(&inp.space, a.set.as_deref())?;
    let mb = m.measure(b);
    let maxima: Vec<f64> = draws.iter().map(|row| b.atoms().map(|i| row[i]).fold(0.0, f64::max)).collect();
    let below = maxima.iter().filter(|&&x| x <= 1.0).count() as f64 / a.n.max(1) as f64;
    let fitted = fit_frechet_scale(&maxima, a.p);
    out.insert(
        "set".into(),
        json!({
            "set": inp.space.format_set(b),
            "m": mb,
            "p_le_one": below,
            "p_le_one_expected": (-mb).exp(),
            "fitted_scale": fitted,
            "scale_relative_error": (fitted - mb).abs() / mb,
            "ks": to_json(&ks_one_sample(&maxima, frechet_cdf(mb, a.p))),
        }),
    );
    if let Some(f) = f {
        let norm = m.norm_pp(&f, a.p);
        let vals: Vec<f64> = draws
            .iter()
            .map(|row| (0..k).map(|i| if row[i] == 0.0 { 0.0 } else { row[i] * f.value(i).get() }).fold(0.0, f64::max))
            .collect();
        let fitted = fit_frechet_scale(&vals, a.p);
        out.insert(
            "integral".into(),
            json!({
                "norm_pp": norm,
                "fitted_scale": fitted,
                "scale_relative_error": (fitted - norm).abs() / norm,
                "ks": to_json(&ks_one_sample(&vals, frechet_cdf(norm, a.p))),
            }),
        );
    }
    Ok(Report::ok(Value::Object(out)))
}

fn write_csv(path: &std::path::Path, space: &Space, first: u64, draws: &[Vec<f64>]) -> Result<()> {
    let mut text = String::from("stream");
    for i in 0..space.atom_count() {
        text.push(',');
        text.push_str(space.atom_label(i));
    }
    text.push('\n');
    for (j, row) in draws.iter().enumerate() {
        text.push_str(&(first + j as u64).to_string());
        for v in row {
            text.push(',');
            text.push_str(&v.to_string());
        }
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Error::Model(format!("{}: {e}", path.display())))
}

fn suite(a: &crate::SuiteArgs) -> Result<Report> {
    let mut out = header("suite", None);
    if a.list {
        let entries: Vec<Value> = invariants::manifest()
            .iter()
            .map(|i| json!({"id": i.id, "module": i.module, "statement": i.statement}))
            .collect();
        out.insert("manifest".into(), Value::Array(entries));
        out.insert("unmapped_modules".into(), to_json(&invariants::unmapped_modules()));
        return Ok(Report::ok(Value::Object(out)));
    }
    if !a.all && a.filters.is_empty() {
        return Err(Error::Model("give --all, --list or suite ids".into()));
    }
    let filters: Vec<&str> = if a.all { vec![] } else { a.filters.iter().map(String::as_str).collect() };
    let run = invariants::run(&filters, a.seed);
    if run.total == 0 {
        return Err(Error::Model(format!("no suite matches {filters:?}")));
    }
    let failed = !run.all_passed;
    out.insert("run".into(), to_json(&run));
    Ok(Report { value: Value::Object(out), failed })
}
