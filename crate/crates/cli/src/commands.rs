use std::fmt::Write as _;
use std::fs;

use alrfit_core::backmap::{proportion_ci_bootstrap, proportion_ci_delta};
use alrfit_core::composition::{alr, alr_inverse, closure, LogRatioVector};
use alrfit_core::ingest::{self, parse_matches_with, to_regression_dataset, MatchTable, ParseMode};
use alrfit_core::regress::{fit, log_likelihood, significance_report, ModelFit};
use alrfit_core::reproduce::{self, Reproduction, RowStatus};
use alrfit_core::simulate::{format_sweep_table, study_sweep, Dgp, SimConfig};
use alrfit_core::{Error, ProportionEstimate};
use serde_json::json;

use crate::args::{
    AlrArgs, DataArgs, FitArgs, Format, Method, ProportionsArgs, ReproduceArgs, SimulateArgs,
};
use crate::envelope::OutputEnvelope;
use crate::exit::{CliError, ExitCode};

/// What a command hands back to `main`: text for stdout and the exit status.
pub struct Outcome {
    pub stdout: String,
    pub code: ExitCode,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            code: ExitCode::Success,
        }
    }
}

fn render(format: Format, envelope: OutputEnvelope, table: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => {
            let mut s = envelope.to_json();
            s.push('\n');
            s
        }
        Format::Table => {
            let mut s = String::new();
            for w in &envelope.warnings {
                let _ = writeln!(s, "warning: {w}");
            }
            s.push_str(&table());
            s
        }
    }
}

fn load_table(args: &DataArgs) -> Result<(MatchTable, Vec<String>, String), CliError> {
    let mode = if args.lenient {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    };
    let (text, source) = match &args.data {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
            (text, path.display().to_string())
        }
        None => (ingest::BUNDLED_CSV.to_owned(), "<bundled>".to_owned()),
    };
    let (table, warnings) = parse_matches_with(&text, mode).map_err(CliError::from_core)?;
    Ok((table, warnings, source))
}

fn fit_table(table: &MatchTable) -> Result<(ModelFit, alrfit_core::RegressionDataset), CliError> {
    let data = to_regression_dataset(table).map_err(CliError::from_core)?;
    let model = fit(&data).map_err(CliError::numerical)?;
    Ok((model, data))
}

fn check_level(level: f64) -> Result<(), CliError> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "--level must lie in (0, 1), got {level}"
        )))
    }
}

pub fn cmd_fit(args: &FitArgs) -> Result<Outcome, CliError> {
    check_level(args.level)?;
    let (table, warnings, source) = load_table(&args.data)?;
    let (model, data) = fit_table(&table)?;
    let report = significance_report(&model, args.level).map_err(CliError::numerical)?;
    let ll = log_likelihood(&model, &data).map_err(CliError::numerical)?;

    let envelope = OutputEnvelope::new(
        "fit",
        json!({ "data": source, "level": args.level, "lenient": args.data.lenient }),
        json!({
            "n": model.n,
            "labels": model.labels,
            "ref_label": model.ref_label,
            "log_likelihood": ll,
            "parameters": report.iter().map(|e| json!({
                "name": e.interval.parameter.to_string(),
                "estimate": e.interval.estimate,
                "std_error": e.interval.se,
                "ci_lower": e.interval.lower,
                "ci_upper": e.interval.upper,
                "significant": e.significant,
            })).collect::<Vec<_>>(),
        }),
        warnings,
    );
    let text = render(args.format, envelope, || {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}, level = {}", model.n, args.level);
        if let (Some(labels), Some(reference)) = (&model.labels, &model.ref_label) {
            let ratios: Vec<String> = labels.iter().map(|l| format!("{l}/{reference}")).collect();
            let _ = writeln!(s, "log-ratios: {}", ratios.join(", "));
        }
        let _ = writeln!(
            s,
            "{:<10} {:>9} {:>9} {:>20}  significant",
            "parameter", "estimate", "std_err", "ci"
        );
        for e in &report {
            let w = &e.interval;
            let flag = match e.significant {
                Some(true) => "yes",
                Some(false) => "no",
                None => "-",
            };
            let ci = format!("({:.3}, {:.3})", w.lower, w.upper);
            let _ = writeln!(
                s,
                "{:<10} {:>9.3} {:>9.3} {:>20}  {}",
                w.parameter.to_string(),
                w.estimate,
                w.se,
                ci,
                flag
            );
        }
        let _ = writeln!(s, "log-likelihood = {ll:.3}");
        s
    });
    Ok(Outcome::ok(text))
}

fn parse_z(raw: &str, p: usize) -> Result<Vec<f64>, CliError> {
    let values: Vec<f64> = raw
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    CliError::usage(format!("--z `{raw}`: `{t}` is not a finite number"))
                })
        })
        .collect::<Result<_, _>>()?;
    if values.len() != p {
        return Err(CliError::usage(format!(
            "--z `{raw}` has {} entries, the model has {p} covariate(s)",
            values.len()
        )));
    }
    Ok(values)
}

pub fn cmd_proportions(args: &ProportionsArgs) -> Result<Outcome, CliError> {
    check_level(args.level)?;
    let (table, warnings, source) = load_table(&args.data)?;
    let (model, _) = fit_table(&table)?;
    let zs: Vec<Vec<f64>> = args
        .z
        .iter()
        .map(|raw| parse_z(raw, model.p()))
        .collect::<Result<_, _>>()?;

    let estimates: Vec<ProportionEstimate> = zs
        .iter()
        .map(|z| match args.method {
            Method::Delta => proportion_ci_delta(&model, z, args.level),
            Method::Bootstrap => {
                proportion_ci_bootstrap(&model, z, args.level, args.boot_b, args.seed)
            }
        })
        .collect::<Result<_, Error>>()
        .map_err(|e| match e {
            Error::BTooSmall(_) => CliError::usage(e.to_string()),
            other => CliError::numerical(other),
        })?;

    let mut warnings = warnings;
    for est in &estimates {
        if est.clamped {
            warnings.push(format!(
                "delta interval at z = {:?} clamped into (0, 1)",
                est.covariate
            ));
        }
    }
    let labels = part_labels(&model);
    let method = match args.method {
        Method::Delta => "delta",
        Method::Bootstrap => "bootstrap",
    };
    let mut echo = json!({
        "data": source,
        "z": zs,
        "level": args.level,
        "method": method,
        "lenient": args.data.lenient,
    });
    if args.method == Method::Bootstrap {
        echo["boot_b"] = json!(args.boot_b);
        echo["seed"] = json!(args.seed);
    }
    let envelope = OutputEnvelope::new(
        "proportions",
        echo,
        json!({
            "parts": labels,
            "blocks": estimates.iter().map(|e| json!({
                "z": e.covariate,
                "proportions": e.alphas.parts(),
                "ci": e.intervals.iter().map(|(l, u)| [*l, *u]).collect::<Vec<_>>(),
                "level": e.level,
                "method": e.method,
                "clamped": e.clamped,
            })).collect::<Vec<_>>(),
        }),
        warnings,
    );
    let text = render(args.format, envelope, || {
        let mut s = String::new();
        for est in &estimates {
            let z: Vec<String> = est.covariate.iter().map(|v| format!("{v}")).collect();
            let _ = writeln!(s, "z = {} ({method}, level = {})", z.join(","), est.level);
            let _ = writeln!(s, "{:<10} {:>9} {:>20}", "part", "estimate", "ci");
            for ((label, a), (l, u)) in labels.iter().zip(est.alphas.parts()).zip(&est.intervals) {
                let ci = format!("({l:.3}, {u:.3})");
                let _ = writeln!(s, "{label:<10} {a:>9.3} {ci:>20}");
            }
            s.push('\n');
        }
        s
    });
    Ok(Outcome::ok(text))
}

fn part_labels(model: &ModelFit) -> Vec<String> {
    match (&model.labels, &model.ref_label) {
        (Some(labels), Some(reference)) => labels
            .iter()
            .chain(std::iter::once(reference))
            .cloned()
            .collect(),
        _ => (1..=model.g() + 1).map(|j| format!("part_{j}")).collect(),
    }
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Outcome, CliError> {
    let defaults = SimConfig::reference_design(0, args.seed);
    let all_default = args.beta0.is_empty() && args.beta1.is_empty() && args.sigma.is_empty();
    let (beta0, beta1, sigma) = if all_default {
        (
            defaults.true_beta0,
            defaults.true_beta1,
            defaults.true_sigma,
        )
    } else {
        (args.beta0.clone(), args.beta1.clone(), args.sigma.clone())
    };
    let configs: Vec<SimConfig> = args
        .n
        .iter()
        .map(|&n| SimConfig {
            n,
            replicates: args.replicates,
            true_beta0: beta0.clone(),
            true_beta1: beta1.clone(),
            true_sigma: sigma.clone(),
            covariate_prob: args.p_bern,
            ci_level: args.level,
            seed: args.seed,
            dgp: Dgp::ModelNormal,
        })
        .collect();
    for c in &configs {
        c.validate().map_err(|e| CliError::usage(e.to_string()))?;
    }
    let reports = study_sweep(&configs).map_err(CliError::numerical)?;
    let total: std::time::Duration = reports.iter().map(|r| r.duration).sum();
    eprintln!(
        "simulate: {} replicate(s) x {} size(s) in {:.2?}",
        args.replicates,
        reports.len(),
        total
    );

    let envelope = OutputEnvelope::new(
        "simulate",
        json!({
            "n": args.n,
            "replicates": args.replicates,
            "beta0": beta0,
            "beta1": beta1,
            "sigma": sigma,
            "p_bern": args.p_bern,
            "level": args.level,
            "seed": args.seed,
            "dgp": Dgp::ModelNormal,
        }),
        json!({ "reports": reports }),
        Vec::new(),
    );
    let text = render(args.format, envelope, || {
        let mut s = format!("seed = {}, replicates = {}\n", args.seed, args.replicates);
        s.push_str(&format_sweep_table(&reports));
        s
    });
    Ok(Outcome::ok(text))
}

pub fn cmd_alr(args: &AlrArgs) -> Result<Outcome, CliError> {
    let (input, output, direction) = if args.inverse {
        if args.values.is_empty() {
            return Err(CliError::usage("--inverse needs --values"));
        }
        let y =
            LogRatioVector::new(args.values.clone()).map_err(|e| CliError::usage(e.to_string()))?;
        let c = alr_inverse(&y).map_err(|e| CliError::usage(e.to_string()))?;
        (args.values.clone(), c.into_parts(), "inverse")
    } else {
        if args.parts.is_empty() {
            return Err(CliError::usage("--values is only valid with --inverse"));
        }
        let c = closure(&args.parts).map_err(|e| CliError::usage(e.to_string()))?;
        (args.parts.clone(), alr(&c).values().to_vec(), "forward")
    };
    let envelope = OutputEnvelope::new(
        "alr",
        json!({ "direction": direction, "input": input }),
        json!({ "values": output }),
        Vec::new(),
    );
    let precision = args.precision;
    let text = render(args.format, envelope, || {
        let cells: Vec<String> = output.iter().map(|v| format!("{v:.precision$}")).collect();
        format!("{}\n", cells.join(" "))
    });
    Ok(Outcome::ok(text))
}

pub fn cmd_reproduce(args: &ReproduceArgs) -> Result<Outcome, CliError> {
    let result = match args.table {
        1 => reproduce::simulation_table(args.seed, args.replicates),
        2 => reproduce::regression_table(),
        3 => reproduce::proportion_table(args.seed),
        other => return Err(CliError::usage(format!("unknown table {other}"))),
    };
    let repro = result.map_err(CliError::numerical)?;
    let passed = repro.passed();
    let envelope = OutputEnvelope::new(
        "reproduce",
        json!({ "table": args.table, "seed": args.seed, "replicates": args.replicates }),
        json!({ "passed": passed, "reproduction": repro }),
        Vec::new(),
    );
    let text = render(args.format, envelope, || {
        format_reproduction(&repro, args.seed)
    });
    Ok(Outcome {
        stdout: text,
        code: if passed {
            ExitCode::Success
        } else {
            ExitCode::ReproductionFailure
        },
    })
}

fn format_reproduction(repro: &Reproduction, seed: u64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "table {} (seed = {seed})", repro.table);
    for note in &repro.notes {
        let _ = writeln!(s, "note: {note}");
    }
    let _ = writeln!(
        s,
        "{:<40} {:>10} {:>10} {:>10} {:>8}  status",
        "item", "published", "computed", "abs_diff", "tol"
    );
    for row in &repro.rows {
        let tol = row
            .tolerance
            .map_or_else(|| "-".to_owned(), |t| format!("{t:.3}"));
        let status = match row.status {
            RowStatus::Pass => "PASS",
            RowStatus::Fail => "FAIL",
            RowStatus::ReferenceOnly => "REFERENCE-ONLY",
        };
        let _ = writeln!(
            s,
            "{:<40} {:>10.3} {:>10.3} {:>10.3} {:>8}  {}",
            row.item, row.published, row.computed, row.abs_diff, tol, status
        );
    }
    let failed = repro.failures().count();
    if repro
        .rows
        .iter()
        .all(|r| r.status == RowStatus::ReferenceOnly)
    {
        let _ = writeln!(s, "result: REFERENCE-ONLY (no checked rows)");
    } else if failed == 0 {
        let _ = writeln!(s, "result: PASS");
    } else {
        let _ = writeln!(s, "result: FAIL ({failed} row(s))");
    }
    s
}

pub fn cmd_data() -> Result<Outcome, CliError> {
    Ok(Outcome::ok(ingest::bundled().to_csv()))
}
