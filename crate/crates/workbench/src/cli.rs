//! Command-line front end. Exit codes: 0 ok, 1 reject or failed run,
//! 2 parse/format/usage error, 3 generator cap or parameter error,
//! 4 solver budget exceeded.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use longchoice_core::io::{
    certificate_from_json, certificate_to_json, instance_from_json, instance_to_json, to_text,
};
use longchoice_core::problems::{verify, Certificate, Instance, Kind};
use longchoice_core::reductions::{lookup, Outcome, NAMES};
use longchoice_core::solvers::{SolveBudget, SolveError, Solver};
use serde_json::{json, Value};

use crate::gen::{GenError, GeneratorSpec};
use crate::pipeline::{PipelineSpec, VerifyMode};

pub const EXIT_OK: u8 = 0;
pub const EXIT_REJECT: u8 = 1;
pub const EXIT_FORMAT: u8 = 2;
pub const EXIT_GEN: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "longchoice",
    version,
    about = "Generate, solve, reduce and verify total search problem instances"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded instance. Parameters are key=value pairs.
    Gen {
        kind: String,
        /// Size parameters such as n=3; seed= and flavor= are also accepted here.
        params: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        flavor: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate against an instance.
    Verify {
        instance: PathBuf,
        certificate: PathBuf,
    },
    /// Solve an instance and write a verified certificate.
    Solve {
        instance: PathBuf,
        #[arg(long)]
        solver: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Apply one reduction, or pull a target certificate back through it.
    Reduce {
        name: String,
        instance: PathBuf,
        /// Target certificate to pull back instead of writing the target instance.
        #[arg(long)]
        pullback: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce, solve, pull back and verify along a chain of reductions.
    Roundtrip {
        instance: PathBuf,
        /// Comma-separated reduction names; empty solves the instance directly.
        #[arg(long, default_value = "")]
        pipeline: String,
        #[arg(long)]
        solver: Option<String>,
        #[arg(long, default_value = "every-hop")]
        mode: String,
        /// Also write a JSON report with timings.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Where to write the verified source certificate.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Time a pipeline over a range of seeds.
    Bench {
        kind: String,
        params: Vec<String>,
        #[arg(long, default_value = "")]
        pipeline: String,
        #[arg(long)]
        solver: Option<String>,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value = "final-only")]
        mode: String,
        #[arg(long)]
        flavor: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long)]
    budget_evals: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> SolveBudget {
        let mut b = SolveBudget::default();
        if let Some(e) = self.budget_evals {
            b.max_evals = e;
        }
        b
    }
}

/// An exit status with the message to print on stderr.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

fn exit(code: u8, message: impl std::fmt::Display) -> Exit {
    Exit {
        code,
        message: message.to_string(),
    }
}

fn format_err(e: impl std::fmt::Display) -> Exit {
    exit(EXIT_FORMAT, e)
}

/// Runs one command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Exit> {
    match cli.command {
        Command::Gen {
            kind,
            params,
            seed,
            flavor,
            out: path,
        } => {
            let spec = generator_spec(&kind, &params, seed, flavor)?;
            let inst = spec.generate().map_err(gen_err)?;
            let v = instance_to_json(&inst, Some(&spec.to_json())).map_err(format_err)?;
            emit(out, path.as_deref(), &to_text(&v))
        }
        Command::Verify {
            instance,
            certificate,
        } => {
            let inst = read_instance(&instance)?;
            let cert = read_certificate(&certificate)?;
            let report = verify(&inst, &cert);
            say(out, &report.to_string())?;
            if report.accepted {
                Ok(())
            } else {
                Err(exit(EXIT_REJECT, ""))
            }
        }
        Command::Solve {
            instance,
            solver,
            out: path,
            budget,
        } => {
            let inst = read_instance(&instance)?;
            let solver = pick_solver(solver.as_deref(), inst.kind())?;
            let cert = solver.solve(&inst, budget.budget()).map_err(solve_err)?;
            let report = verify(&inst, &cert);
            if !report.accepted {
                return Err(exit(
                    EXIT_REJECT,
                    format!("solver output failed to verify: {report}"),
                ));
            }
            write_certificate(out, path.as_deref(), &cert)
        }
        Command::Reduce {
            name,
            instance,
            pullback,
            out: path,
        } => {
            let r = lookup(&name).ok_or_else(|| format_err(format!("unknown reduction {name}")))?;
            let src = read_instance(&instance)?;
            let outcome = r.forward(&src).map_err(|e| exit(EXIT_REJECT, e))?;
            match (outcome, pullback) {
                (Outcome::Immediate(cert), _) => {
                    say(out, "immediate")?;
                    write_certificate(out, path.as_deref(), &cert)
                }
                (Outcome::Reduced { target, aux }, None) => {
                    let meta = json!({"reduction": r.name(), "aux": aux});
                    let v = instance_to_json(&target, Some(&meta)).map_err(format_err)?;
                    emit(out, path.as_deref(), &to_text(&v))
                }
                (Outcome::Reduced { target, aux }, Some(cert_path)) => {
                    let cert = read_certificate(&cert_path)?;
                    let check = verify(&target, &cert);
                    if !check.accepted {
                        return Err(exit(EXIT_REJECT, format!("target certificate: {check}")));
                    }
                    let p = r
                        .pullback(&src, &aux, &cert)
                        .map_err(|e| exit(EXIT_REJECT, e))?;
                    for note in &p.notes {
                        say(out, &format!("note: {note}"))?;
                    }
                    let check = verify(&src, &p.certificate);
                    if !check.accepted {
                        return Err(exit(
                            EXIT_REJECT,
                            format!("pulled-back certificate: {check}"),
                        ));
                    }
                    write_certificate(out, path.as_deref(), &p.certificate)
                }
            }
        }
        Command::Roundtrip {
            instance,
            pipeline,
            solver,
            mode,
            json,
            out: path,
            budget,
        } => {
            let inst = read_instance(&instance)?;
            let spec = pipeline_spec(&pipeline, solver.as_deref(), &mode, budget.budget())?;
            spec.check(inst.kind()).map_err(format_err)?;
            let report = spec.run(&inst);
            out.write_all(report.text().as_bytes())
                .map_err(format_err)?;
            if let Some(j) = json {
                fs::write(&j, to_text(&report.to_json()))
                    .with_context(|| format!("writing {}", j.display()))
                    .map_err(format_err)?;
            }
            match (&report.certificate, &report.failure) {
                (Some(cert), _) => match path {
                    Some(p) => write_file(&p, &to_text(&certificate_to_json(cert))),
                    None => Ok(()),
                },
                (None, Some(f)) => Err(exit(
                    EXIT_REJECT,
                    format!("failed at {}: {}", f.stage, f.message),
                )),
                (None, None) => Err(exit(EXIT_REJECT, "no certificate")),
            }
        }
        Command::Bench {
            kind,
            params,
            pipeline,
            solver,
            seeds,
            mode,
            flavor,
            budget,
        } => {
            let spec = pipeline_spec(&pipeline, solver.as_deref(), &mode, budget.budget())?;
            let mut passed = 0;
            let start = Instant::now();
            for seed in 0..seeds {
                let g = generator_spec(&kind, &params, Some(seed), flavor.clone())?;
                let inst = g.generate().map_err(gen_err)?;
                spec.check(inst.kind()).map_err(format_err)?;
                let t = Instant::now();
                let report = spec.run(&inst);
                let ok = report.ok();
                passed += ok as u64;
                let status = if ok { "ok" } else { "FAIL" };
                say(
                    out,
                    &format!("seed {seed} {status} {} us", t.elapsed().as_micros()),
                )?;
            }
            say(
                out,
                &format!(
                    "{passed}/{seeds} passed in {} ms",
                    start.elapsed().as_millis()
                ),
            )?;
            if passed == seeds {
                Ok(())
            } else {
                Err(exit(EXIT_REJECT, format!("{} runs failed", seeds - passed)))
            }
        }
    }
}

fn generator_spec(
    kind: &str,
    params: &[String],
    seed: Option<u64>,
    flavor: Option<String>,
) -> Result<GeneratorSpec, Exit> {
    let kind =
        Kind::from_name(kind).ok_or_else(|| exit(EXIT_GEN, format!("unknown kind {kind}")))?;
    let mut spec = GeneratorSpec::new(kind, &[], seed.unwrap_or(0));
    let mut flavor = flavor;
    for p in params {
        let (key, value) = p
            .split_once('=')
            .ok_or_else(|| exit(EXIT_GEN, format!("expected key=value, got {p}")))?;
        if key == "flavor" {
            flavor.get_or_insert_with(|| value.to_string());
            continue;
        }
        let n: u64 = value
            .parse()
            .map_err(|_| exit(EXIT_GEN, format!("{key} needs an integer, got {value}")))?;
        if key == "seed" {
            if seed.is_none() {
                spec.seed = n;
            }
        } else {
            spec.params.insert(key.to_string(), n);
        }
    }
    if let Some(f) = flavor {
        spec = spec.flavor(&f);
    }
    Ok(spec)
}

fn pipeline_spec(
    list: &str,
    solver: Option<&str>,
    mode: &str,
    budget: SolveBudget,
) -> Result<PipelineSpec, Exit> {
    let mut spec = PipelineSpec::parse(list)
        .map_err(|e| format_err(format!("{e}; known reductions: {}", NAMES.join(", "))))?;
    if let Some(s) = solver {
        spec = spec
            .solver(Solver::from_name(s).ok_or_else(|| format_err(format!("unknown solver {s}")))?);
    }
    let mode = VerifyMode::parse(mode).ok_or_else(|| format_err(format!("unknown mode {mode}")))?;
    Ok(spec.mode(mode).budget(budget))
}

fn pick_solver(name: Option<&str>, kind: Kind) -> Result<Solver, Exit> {
    match name {
        None => Ok(Solver::default_for(kind)),
        Some(s) => Solver::from_name(s).ok_or_else(|| format_err(format!("unknown solver {s}"))),
    }
}

fn gen_err(e: GenError) -> Exit {
    exit(EXIT_GEN, e)
}

fn solve_err(e: SolveError) -> Exit {
    match e {
        SolveError::BudgetExceeded { .. } => exit(EXIT_BUDGET, e),
        SolveError::Unsupported(_) => exit(EXIT_FORMAT, e),
        _ => exit(EXIT_REJECT, e),
    }
}

fn read_json(path: &Path) -> Result<Value, Exit> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| format_err(format!("{e:#}")))?;
    serde_json::from_str(&text).map_err(|e| format_err(format!("{}: {e}", path.display())))
}

pub fn read_instance(path: &Path) -> Result<Instance, Exit> {
    instance_from_json(&read_json(path)?)
        .map_err(|e| format_err(format!("{}: {e}", path.display())))
}

pub fn read_certificate(path: &Path) -> Result<Certificate, Exit> {
    certificate_from_json(&read_json(path)?)
        .map_err(|e| format_err(format!("{}: {e}", path.display())))
}

fn write_certificate(
    out: &mut dyn Write,
    path: Option<&Path>,
    cert: &Certificate,
) -> Result<(), Exit> {
    emit(out, path, &to_text(&certificate_to_json(cert)))
}

fn write_file(path: &Path, text: &str) -> Result<(), Exit> {
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(|e| format_err(format!("{e:#}")))
}

/// Writes to `path` when given, else to the report stream.
fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Exit> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(format_err),
    }
}

fn say(out: &mut dyn Write, line: &str) -> Result<(), Exit> {
    writeln!(out, "{line}").map_err(format_err)
}
