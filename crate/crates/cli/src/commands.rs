use std::fs;

use anyhow::{bail, Context, Result};
use gibbsnum::baser::{self, BaseRParams};
use gibbsnum::exactfield::rational;
use gibbsnum::gibbs::{self, Probe, ProbeStrategy};
use gibbsnum::golden::{self, GoldenParams, Target};
use gibbsnum::matmeasure::{self, Builtin, MatrixMeasureSpec};
use gibbsnum::montecarlo::{self, McEstimate};
use gibbsnum::numeration::{self, digits_to_string, AdmissibleBinaryWord, ExpansionSystem};
use gibbsnum::stochlimit::{self, RowStochasticFamily};
use gibbsnum::QuadraticNumber;
use serde_json::{json, Map, Value};

use crate::output::{exact, exact_vec, float, write_csv};
use crate::parse;
use crate::{
    BaserArgs, Cli, Command, ExpandArgs, GibbsScanArgs, GoldenArgs, MeasureArgs, SpecArgs, SpecKind, StochSimArgs,
    SystemArg, TargetArg,
};

struct Fmt {
    float: bool,
    digits: usize,
}

impl Fmt {
    fn f(&self, x: f64) -> Value {
        float(x, self.digits)
    }

    fn estimate(&self, e: &McEstimate) -> Value {
        json!({
            "estimate": self.f(e.estimate),
            "sigma": self.f(e.sigma),
            "band_mass": self.f(e.band_mass),
            "n_samples": e.n_samples,
        })
    }

    /// Adds `key_float` next to an exact value when `--float` is set.
    fn with_float(&self, obj: &mut Map<String, Value>, key: &str, x: f64) {
        if self.float {
            obj.insert(format!("{key}_float"), self.f(x));
        }
    }
}

pub fn run(cli: &Cli) -> Result<Value> {
    let fmt = Fmt { float: cli.float, digits: cli.precision.clamp(1, 17) };
    match &cli.command {
        Command::Expand(a) => expand(a, &fmt),
        Command::Measure(a) => measure(a, &fmt),
        Command::GibbsScan(a) => gibbs_scan(a, &fmt),
        Command::StochSim(a) => stoch_sim(a, &fmt),
        Command::Baser(a) => baser_cmd(a, &fmt),
        Command::Golden(a) => golden_cmd(a, &fmt),
    }
}

fn expand(a: &ExpandArgs, fmt: &Fmt) -> Result<Value> {
    let x = parse::quadratic(&a.x)?;
    let (system, name) = match a.system {
        SystemArg::Parry => (ExpansionSystem::Parry, "parry".to_string()),
        SystemArg::NegBeta => (ExpansionSystem::NegBeta, "neg-beta".to_string()),
        SystemArg::BaseR => (ExpansionSystem::BaseR(a.r), format!("base-{}", a.r)),
    };
    let e = numeration::expand(&x, system, a.digits).context("expand")?;
    let mut out = Map::new();
    out.insert("system".into(), json!(name));
    out.insert("x".into(), json!(x.to_string()));
    out.insert("digits".into(), json!(digits_to_string(&e.digits)));
    out.insert("partial_value".into(), json!(e.partial_value.to_string()));
    out.insert("reconstruction_error_bound".into(), json!(e.reconstruction_error_bound.to_string()));
    out.insert("admissible".into(), json!(e.admissible));
    fmt.with_float(&mut out, "x", x.to_f64());
    fmt.with_float(&mut out, "partial_value", e.partial_value.to_f64());
    fmt.with_float(&mut out, "reconstruction_error_bound", e.reconstruction_error_bound.to_f64());
    Ok(Value::Object(out))
}

fn build_spec(a: &SpecArgs) -> Result<(String, MatrixMeasureSpec)> {
    let need = |o: &Option<String>, flag: &str| o.clone().with_context(|| format!("--{flag} is required"));
    Ok(match a.spec {
        SpecKind::Mu3 => (format!("mu3(r={})", a.r), matmeasure::builtin(&Builtin::Mu3(a.r))?),
        SpecKind::Mu4 => ("mu4".into(), matmeasure::builtin(&Builtin::Mu4)?),
        SpecKind::Bernoulli => {
            let p = parse::rationals(&need(&a.p, "p")?)?;
            ("bernoulli".into(), matmeasure::builtin(&Builtin::Bernoulli(p))?)
        }
        SpecKind::Markov => {
            let transition = parse::matrix(&need(&a.transition, "transition")?)?;
            let stationary = parse::rationals(&need(&a.stationary, "stationary")?)?;
            ("markov".into(), matmeasure::builtin(&Builtin::Markov { transition, stationary })?)
        }
        SpecKind::File => {
            let path = a.file.as_ref().context("--file is required")?;
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            (path.display().to_string(), MatrixMeasureSpec::from_json(&text)?)
        }
    })
}

fn check_word(spec: &MatrixMeasureSpec, word: &[u8]) -> Result<()> {
    if let Some(d) = word.iter().find(|&&d| d as usize >= spec.alphabet_size()) {
        bail!("digit {d} outside the alphabet of size {}", spec.alphabet_size());
    }
    Ok(())
}

fn measure(a: &MeasureArgs, fmt: &Fmt) -> Result<Value> {
    let (name, spec) = build_spec(&a.spec)?;
    let mut out = Map::new();
    out.insert("spec".into(), json!(name));
    out.insert("matrices".into(), serde_json::to_value(spec.to_file())?);
    out.insert("validation".into(), serde_json::to_value(matmeasure::validate(&spec))?);
    if let Some(w) = &a.word {
        let word = parse::digits(w)?;
        check_word(&spec, &word)?;
        let value = spec.cylinder_measure(&word)?;
        out.insert("word".into(), json!(digits_to_string(&word)));
        out.insert("value".into(), exact(&value));
        fmt.with_float(&mut out, "value", rational::to_f64(&value));
    }
    if let Some(depth) = a.all_depth {
        let cylinders = spec.all_cylinders(depth);
        let total: gibbsnum::Rational = cylinders.iter().map(|(_, m)| m.clone()).sum();
        out.insert("all_depth".into(), json!(depth));
        out.insert("cylinders".into(), json!(cylinders.len()));
        out.insert("total_mass".into(), exact(&total));
        match &a.out {
            Some(path) => {
                let rows = cylinders.iter().map(|(w, m)| {
                    let mut row = format!("{},{}", digits_to_string(w), rational::format_rational(m));
                    if fmt.float {
                        row.push_str(&format!(",{}", fmt.f(rational::to_f64(m))));
                    }
                    row
                });
                let header = if fmt.float { "word,value,value_float" } else { "word,value" };
                write_csv(path, header, rows)?;
                out.insert("csv".into(), json!(path.display().to_string()));
            }
            None => bail!("--all-depth needs --out for the CSV file"),
        }
    }
    if a.conditions {
        out.insert("continuity".into(), serde_json::to_value(matmeasure::potential_continuity(&spec)?)?);
    }
    Ok(Value::Object(out))
}

fn gibbs_scan(a: &GibbsScanArgs, fmt: &Fmt) -> Result<Value> {
    let (name, spec) = build_spec(&a.spec)?;
    let strategy = if a.probes.is_empty() {
        ProbeStrategy::Default { random: a.random_probes, seed: a.seed }
    } else {
        let list = a
            .probes
            .iter()
            .map(|p| {
                let digits = parse::digits(p)?;
                check_word(&spec, &digits)?;
                Ok(Probe { name: p.clone(), digits })
            })
            .collect::<Result<Vec<_>>>()?;
        ProbeStrategy::Explicit(list)
    };
    let probes = gibbs::probes(&strategy, spec.alphabet_size(), a.n_max);
    let trace = gibbs::convergence_report(&spec, &probes, a.n_max)?;
    if let Some(path) = &a.csv {
        fs::write(path, trace.to_csv(fmt.digits)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let per_probe: Vec<Value> = trace
        .traces
        .iter()
        .map(|t| {
            json!({
                "probe": t.probe.name,
                "phi_n_max": fmt.f(t.values.last().map_or(f64::NAN, |v| v.to_f64())),
                "sup_increment": fmt.f(t.sup_increment),
                "normalization_residual": t.normalization_residual.map(|r| fmt.f(r)),
            })
        })
        .collect();
    Ok(json!({
        "spec": name,
        "n_max": trace.n_max,
        "sup_increment": fmt.f(trace.sup_increment),
        "increments": trace.increments.iter().map(|&x| fmt.f(x)).collect::<Vec<_>>(),
        "probes": per_probe,
    }))
}

fn family_from_file(path: &std::path::Path) -> Result<RowStochasticFamily> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let v: Value = serde_json::from_str(&text)?;
    let rows = v["rows"].as_array().context("family file needs \"rows\"")?;
    let num = |x: &Value| -> Result<QuadraticNumber> { parse::quadratic(x.as_str().context("numbers are strings")?) };
    let rows = rows.iter().map(|r| Ok((num(&r[0])?, num(&r[1])?))).collect::<Result<Vec<_>>>()?;
    match v.get("weights") {
        Some(w) => {
            let weights = w
                .as_array()
                .context("\"weights\" is a list")?
                .iter()
                .map(|x| parse::rational(x.as_str().context("weights are strings")?))
                .collect::<Result<Vec<_>>>()?;
            Ok(RowStochasticFamily::new(rows, weights)?)
        }
        None => Ok(RowStochasticFamily::uniform(rows)?),
    }
}

fn stoch_sim(a: &StochSimArgs, fmt: &Fmt) -> Result<Value> {
    let family = match (&a.family, &a.beta) {
        (Some(path), None) => family_from_file(path)?,
        (None, Some(beta)) => {
            let rows = stochlimit::convolution_family(&parse::quadratic(beta)?, a.r)?;
            match &a.p {
                Some(p) => RowStochasticFamily::new(rows, parse::rationals(p)?)?,
                None => RowStochasticFamily::uniform(rows)?,
            }
        }
        _ => bail!("give exactly one of --beta and --family"),
    };
    let class = stochlimit::classify(&family);
    let sample = stochlimit::sample_lambda(&family, a.samples, a.depth, a.seed)?;
    if let Some(path) = &a.out {
        let bound = fmt.f(sample.truncation_bound);
        write_csv(
            path,
            "sample_value,truncation_bound",
            sample.values.iter().map(|v| format!("{},{bound}", fmt.f(*v))),
        )?;
    }
    let residual = stochlimit::selfsim_residual(&family, &sample.values, a.bins).ok();
    let rows: Vec<Value> = family.rows().iter().map(|(x, y)| json!([x.to_string(), y.to_string()])).collect();
    let quantiles: Map<String, Value> = [0.1, 0.25, 0.5, 0.75, 0.9]
        .iter()
        .map(|&q| (format!("{q}"), fmt.f(montecarlo::quantile(&sample.values, q))))
        .collect();
    Ok(json!({
        "rows": rows,
        "weights": exact_vec(family.weights()),
        "classification": {
            "class": class.class,
            "factors": class.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "product": class.product.map(|p| json!({"value": fmt.f(p.value), "error_bound": fmt.f(p.error_bound)})),
            "product_exact": class.product_exact,
            "product_at_most_one": class.product_at_most_one,
        },
        "samples": sample.values.len(),
        "depth": a.depth,
        "seed": a.seed,
        "truncation_bound": fmt.f(sample.truncation_bound),
        "mean": fmt.f(sample.values.iter().sum::<f64>() / sample.values.len() as f64),
        "quantiles": quantiles,
        "selfsim": residual.map(|r| json!({"residual": fmt.f(r.residual), "scale": fmt.f(r.scale), "bins": a.bins})),
    }))
}

fn baser_cmd(a: &BaserArgs, fmt: &Fmt) -> Result<Value> {
    let params = BaseRParams::new(a.r, parse::rationals(&a.p)?)?;
    let spec = baser::matrices_from_p(&params)?;
    let mut out = Map::new();
    out.insert("r".into(), json!(a.r));
    out.insert("p".into(), exact_vec(params.p()));
    out.insert("matrices".into(), serde_json::to_value(spec.to_file())?);
    let sample = if a.mc_samples > 0 {
        Some(baser::sample_x(&params, a.mc_samples, baser::max_depth(a.r).min(60), a.seed)?)
    } else {
        None
    };
    if let Some(w) = &a.word {
        let word = parse::digits(w)?;
        check_word(&spec, &word)?;
        let value = spec.cylinder_measure(&word)?;
        out.insert("word".into(), json!(digits_to_string(&word)));
        out.insert("matrix_value".into(), exact(&value));
        fmt.with_float(&mut out, "matrix_value", rational::to_f64(&value));
        if let Some(s) = &sample {
            let e = s.frac_cylinder(&word)?;
            out.insert("mc_estimate".into(), fmt.f(e.estimate));
            out.insert("mc_sigma".into(), fmt.f(e.sigma));
            out.insert("band_mass".into(), fmt.f(e.band_mass));
            out.insert("mc_samples".into(), json!(e.n_samples));
        }
    }
    if let Some(bins) = a.selfsim_bins {
        let s = sample.as_ref().context("--selfsim-bins needs --mc-samples")?;
        let r = baser::selfsim_residual_mu(&params, &s.sorted_values(), bins)?;
        out.insert("selfsim".into(), json!({"residual": fmt.f(r.residual), "scale": fmt.f(r.scale), "bins": bins}));
    }
    Ok(Value::Object(out))
}

fn golden_cmd(a: &GoldenArgs, fmt: &Fmt) -> Result<Value> {
    let p = parse::rational(&a.p)?;
    let params = match &a.q {
        Some(q) => GoldenParams::new(p, parse::rational(q)?)?,
        None => GoldenParams::from_p(p)?,
    };
    let target = match a.target {
        TargetArg::Mu => Target::Mu,
        TargetArg::Mustar => Target::Mustar,
    };
    let mut out = Map::new();
    out.insert("p".into(), exact(params.p()));
    out.insert("q".into(), exact(params.q()));
    out.insert("target".into(), serde_json::to_value(target)?);
    if let Some(w) = &a.word {
        let word = AdmissibleBinaryWord::parse(w)?;
        let v = golden::cylinder_vector(&params, target, &word);
        out.insert("word".into(), json!(word.to_string()));
        out.insert("vector".into(), exact_vec(&v.values));
        out.insert("derived".into(), json!(v.derived));
        let sets: Vec<Value> = (0..3)
            .map(|c| {
                let s = golden::target_set(target, &word, c);
                json!({"lo": s.lo.to_string(), "hi": s.hi.to_string(), "lo_closed": s.lo_closed, "hi_closed": s.hi_closed})
            })
            .collect();
        out.insert("sets".into(), Value::Array(sets));
        if fmt.float {
            out.insert("vector_float".into(), v.values.iter().map(|x| fmt.f(rational::to_f64(x))).collect());
        }
        if a.mc_samples > 0 {
            let sample = golden::sample_golden(&params, target, a.mc_samples, a.depth, a.seed)?;
            let est: Vec<Value> = (0..3).map(|c| fmt.estimate(&sample.estimate_set(&word, c))).collect();
            out.insert(
                "mc".into(),
                json!({"band": fmt.f(sample.band), "depth": a.depth, "seed": a.seed, "components": est}),
            );
        }
    }
    if let Some(c) = &a.code {
        let code = parse::digits(c)?;
        if code.iter().any(|&d| d > 2) {
            bail!("--code is a word over 0, 1, 2");
        }
        out.insert("code".into(), json!(digits_to_string(&code)));
        out.insert("zerodeux".into(), serde_json::to_value(golden::zerodeux_classify(&code))?);
        if golden::find_case3_from(&code, 1).is_some() {
            let alt = [rational::int(1), rational::int(2), rational::int(3)];
            let check = golden::rank_one_tail_check(&params, &code, &params.mustar_initial(), &alt)?;
            out.insert("rank_one".into(), serde_json::to_value(check)?);
        }
        if let Some(n_max) = a.phi_nmax {
            if n_max == 0 || n_max > code.len() {
                bail!("--phi-nmax must lie in 1..={}", code.len());
            }
            let spec = golden::code_spec(&params);
            let values = gibbs::phi_sequence(&spec, &code[..n_max])?;
            if let Some(path) = &a.csv {
                let rows = values.iter().enumerate().map(|(i, v)| format!("{c},{},{}", i + 1, v.format(fmt.digits)));
                write_csv(path, "probe,n,phi_n", rows)?;
            }
            let increments: Vec<f64> = values.windows(2).map(|w| w[1].distance(w[0])).collect();
            out.insert("phi".into(), values.iter().map(|v| fmt.f(v.to_f64())).collect());
            out.insert("sup_increment".into(), fmt.f(increments.iter().copied().fold(0.0, f64::max)));
        }
    }
    if a.lemma_check {
        let seq = parse::naturals(a.a.as_deref().context("--lemma-check needs --a")?)?;
        let alpha = match &a.alpha {
            Some(s) => parse::rational(s)?,
            None => params.alpha(),
        };
        let states = golden::cf_convergents(&seq, &alpha)?;
        let report = golden::delta_bounds_check(&seq, &alpha)?;
        out.insert("alpha".into(), exact(&alpha));
        out.insert("convergents".into(), serde_json::to_value(&states)?);
        out.insert(
            "lemma".into(),
            json!({
                "all_hold": report.all_hold,
                "non_increasing": report.non_increasing,
                "checks": report.checks.iter().map(|c| json!({"k": c.k, "which": c.which, "holds": c.holds, "margin": fmt.f(c.margin)})).collect::<Vec<_>>(),
            }),
        );
        if seq.len() % 2 == 0 && alpha == params.alpha() {
            let m = golden::convergent_product(&seq, &params)?;
            out.insert("product".into(), json!(m.to_string()));
        }
    }
    Ok(Value::Object(out))
}
