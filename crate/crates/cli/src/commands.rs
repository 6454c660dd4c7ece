use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use fhawkes_core::analytics::lambda_curve;
use fhawkes_core::harness::{
    curve_rows, distribution_rows, run_distribution, run_expected_n, run_validation, write_curves_csv,
    write_distributions_csv, write_json, Comparison, OutputFormat, ValidationConfig,
};
use fhawkes_core::sim::{simulate_many, write_events_csv, SimulationRecord};
use fhawkes_core::{Engine, ExperimentConfig, IltConfig, Method};

use crate::config::{parse_choice, Compare, CountMethod, FileConfig, LambdaMethod};
use crate::{CliError, Command, Model, Output};

type Res = Result<(), CliError>;

pub fn run(cmd: Command) -> Res {
    match cmd {
        Command::Lambda {
            model,
            t_max,
            grid,
            method,
            output,
        } => lambda(&model, t_max, grid, method, &output),
        Command::ExpectedN {
            model,
            times,
            t_max,
            grid,
            method,
            replicas,
            seed,
            engine,
            output,
        } => expected_count(&model, times, t_max, grid, method, replicas, seed, engine, &output),
        Command::Simulate {
            model,
            horizon,
            replicas,
            seed,
            engine,
            output,
        } => simulate(&model, horizon, replicas, seed, engine, &output),
        Command::Dist {
            model,
            t,
            replicas,
            seed,
            compare,
            engine,
            output,
        } => dist(&model, t, replicas, seed, compare, engine, &output),
        Command::Validate {
            smoke,
            smoke_replicas,
            seed,
            out,
            regen_oracle,
        } => match regen_oracle {
            Some(dir) => regen(&dir),
            None => validate(smoke, smoke_replicas, seed, out.as_deref()),
        },
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Usage(format!("creating {}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

/// Resolved output destination and format.
struct Dest {
    out: Option<PathBuf>,
    format: OutputFormat,
}

fn dest(output: &Output, file: &FileConfig) -> Dest {
    Dest {
        out: output.out.clone().or_else(|| file.out.clone()),
        format: output.format.or(file.format).unwrap_or_default(),
    }
}

fn grid(t_max: f64, n: usize) -> Result<Vec<f64>, CliError> {
    if !(t_max.is_finite() && t_max > 0.0) || n == 0 {
        return Err(CliError::Usage("--t-max must be positive and --grid at least 1".into()));
    }
    Ok((1..=n).map(|i| t_max * i as f64 / n as f64).collect())
}

fn lambda(model: &Model, t_max: Option<f64>, n: Option<usize>, method: Option<LambdaMethod>, output: &Output) -> Res {
    let file = FileConfig::load(model.config.as_deref())?;
    let p = model.flags().resolve(&file)?;
    let ts = grid(t_max.or(file.t_max).unwrap_or(50.0), n.or(file.grid).unwrap_or(500))?;
    let method = match (method, &file.method) {
        (Some(m), _) => m,
        (None, Some(s)) => parse_choice(s, "method")?,
        (None, None) => LambdaMethod::Both,
    };
    let cfg = IltConfig::default();
    let mut curves = Vec::new();
    if method != LambdaMethod::Ilt {
        curves.push(lambda_curve(p, &ts, Method::Exact, &cfg)?);
    }
    if method != LambdaMethod::Exact {
        curves.push(lambda_curve(p, &ts, Method::Ilt, &cfg)?);
    }
    let d = dest(output, &file);
    let mut w = sink(d.out.as_deref())?;
    match d.format {
        OutputFormat::Csv => write_curves_csv(&mut w, &curve_rows(&curves)?)?,
        OutputFormat::Json => write_json(&mut w, &curves)?,
    }
    w.flush().map_err(fhawkes_core::Error::from)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn expected_count(
    model: &Model,
    times: Option<Vec<f64>>,
    t_max: Option<f64>,
    n: Option<usize>,
    method: Option<CountMethod>,
    replicas: Option<u64>,
    seed: Option<u64>,
    engine: Option<Engine>,
    output: &Output,
) -> Res {
    let file = FileConfig::load(model.config.as_deref())?;
    let p = model.flags().resolve(&file)?;
    let ts = match times.or_else(|| file.times.clone()) {
        Some(ts) => ts,
        None => grid(t_max.or(file.t_max).unwrap_or(10.0), n.or(file.grid).unwrap_or(10))?,
    };
    let method = match (method, &file.method) {
        (Some(m), _) => m,
        (None, Some(s)) => parse_choice(s, "method")?,
        (None, None) => CountMethod::All,
    };
    let mut cfg = ExperimentConfig::new(p, ts, replicas.or(file.replicas).unwrap_or(10_000), seed.or(file.seed).unwrap_or(0));
    cfg.engines = match method {
        CountMethod::Mc | CountMethod::All => [engine.or(file.engine).unwrap_or(Engine::Thinning)].into(),
        _ => Default::default(),
    };
    cfg.comparisons = match method {
        CountMethod::Exact => [Comparison::Exact].into(),
        CountMethod::Ilt => [Comparison::Ilt].into(),
        CountMethod::Mc => Default::default(),
        CountMethod::All => [Comparison::Exact, Comparison::Ilt].into(),
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let run = run_expected_n(&cfg)?;
    if !run.failures.is_empty() {
        eprintln!(
            "warning: {} replica(s) failed and are excluded from the means; first: {}",
            run.failures.len(),
            run.failures[0].error
        );
    }
    if run.ilt_warnings > 0 {
        eprintln!("warning: {} inverse-transform evaluations did not meet tolerance", run.ilt_warnings);
    }
    let d = dest(output, &file);
    let mut w = sink(d.out.as_deref())?;
    match d.format {
        OutputFormat::Csv => write_curves_csv(&mut w, &curve_rows(&run.curves)?)?,
        OutputFormat::Json => write_json(&mut w, &run)?,
    }
    w.flush().map_err(fhawkes_core::Error::from)?;
    Ok(())
}

fn simulate(
    model: &Model,
    horizon: Option<f64>,
    replicas: Option<u64>,
    seed: Option<u64>,
    engine: Option<Engine>,
    output: &Output,
) -> Res {
    let file = FileConfig::load(model.config.as_deref())?;
    let p = model.flags().resolve(&file)?;
    let horizon = horizon
        .or(file.horizon)
        .ok_or_else(|| CliError::Usage("--horizon is required".into()))?;
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(CliError::Usage(format!("--horizon {horizon} must be positive")));
    }
    let engine = engine.or(file.engine).unwrap_or(Engine::Thinning);
    let replicas = replicas.or(file.replicas).unwrap_or(1);
    let seed = seed.or(file.seed).unwrap_or(0);
    let sequences = simulate_many(engine, p, horizon, seed, replicas, engine)?;
    let d = dest(output, &file);
    let mut w = sink(d.out.as_deref())?;
    match d.format {
        OutputFormat::Csv => write_events_csv(&mut w, &sequences)?,
        OutputFormat::Json => {
            let rec = SimulationRecord {
                params: p,
                engine,
                horizon,
                seed,
                replicas,
                sequences,
            };
            write_json(&mut w, &rec)?
        }
    }
    w.flush().map_err(fhawkes_core::Error::from)?;
    Ok(())
}

fn dist(
    model: &Model,
    t: Option<Vec<f64>>,
    replicas: Option<u64>,
    seed: Option<u64>,
    compare: Option<Compare>,
    engine: Option<Engine>,
    output: &Output,
) -> Res {
    let file = FileConfig::load(model.config.as_deref())?;
    let p = model.flags().resolve(&file)?;
    let ts = t.or_else(|| file.t.clone()).unwrap_or_else(|| vec![1.0, 5.0, 10.0]);
    let compare = match (compare, &file.compare) {
        (Some(c), _) => c,
        (None, Some(s)) => parse_choice(s, "compare")?,
        (None, None) => Compare::None,
    };
    let cfg = ExperimentConfig::new(p, ts, replicas.or(file.replicas).unwrap_or(10_000), seed.or(file.seed).unwrap_or(0))
        .with_engines([engine.or(file.engine).unwrap_or(Engine::Thinning)])
        .with_comparisons(compare.comparison());
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let dists = run_distribution(&cfg)?;
    for d in &dists {
        if d.failed_replicas > 0 {
            eprintln!("warning: t={}: {} replica(s) failed and are excluded", d.t, d.failed_replicas);
        }
        if let Some(tv) = d.tv_distance {
            match d.chi_square {
                Some(c) => eprintln!("t={}: TV={tv:.4} chi2={:.2} dof={} p={:.3e}", d.t, c.statistic, c.dof, c.p_value),
                None => eprintln!("t={}: TV={tv:.4}", d.t),
            }
        }
    }
    let d = dest(output, &file);
    let mut w = sink(d.out.as_deref())?;
    match d.format {
        OutputFormat::Csv => write_distributions_csv(&mut w, &distribution_rows(&dists))?,
        OutputFormat::Json => write_json(&mut w, &dists)?,
    }
    w.flush().map_err(fhawkes_core::Error::from)?;
    Ok(())
}

fn validate(smoke: bool, smoke_replicas: u64, seed: Option<u64>, out: Option<&Path>) -> Res {
    if smoke && smoke_replicas < 2 {
        return Err(CliError::Usage("--smoke-replicas must be at least 2".into()));
    }
    let mut cfg = if smoke {
        ValidationConfig::smoke(smoke_replicas)
    } else {
        ValidationConfig::default()
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report = run_validation(&cfg);
    for c in &report.criteria {
        let measured = c.measured.map_or("n/a".to_string(), |m| format!("{m:.4e}"));
        let status = if c.pass { "PASS" } else { "FAIL" };
        eprintln!("[{status}] {:>2} {} (measured {measured}, bound {:e}, {:.2}s)", c.id, c.name, c.bound, c.wall_time_s);
        if let Some(e) = &c.error {
            eprintln!("       error: {e}");
        }
    }
    let mut w = sink(out)?;
    write_json(&mut w, &report)?;
    w.flush().map_err(fhawkes_core::Error::from)?;
    if report.all_pass {
        Ok(())
    } else {
        Err(CliError::ValidationFailed)
    }
}

/// Rewrite the oracle CSV tables by running the mpmath generator.
fn regen(dir: &Path) -> Res {
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tools/prabhakar_oracle.py");
    std::fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("creating {}: {e}", dir.display())))?;
    let status = std::process::Command::new("python3")
        .arg(&script)
        .arg("--out")
        .arg(dir.join("prabhakar_oracle.csv"))
        .arg("--erfcx-out")
        .arg(dir.join("erfcx_oracle.csv"))
        .status()
        .map_err(|e| CliError::Usage(format!("running python3: {e}")))?;
    if !status.success() {
        return Err(CliError::Usage(format!("oracle generator exited with {status}")));
    }
    eprintln!("oracle tables written to {}", dir.display());
    Ok(())
}
