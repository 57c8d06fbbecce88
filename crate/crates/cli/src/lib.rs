//! `lagroc` command-line front end.
//!
//! Exit codes: 0 success (or "is a couple"), 1 negative verdict (not a
//! couple, fuzz failure), 2 parse or argument error, 3 domain mismatch or
//! unknown label, 4 the problem file lacks the table the command needs.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use lagroc_core::duality::weak_duality_report_with_tol;
use lagroc_core::fuzz::{self, Fault, FuzzConfig, ValueGrid};
use lagroc_core::{
    audit, conjugate, lagrangian_of, reverse_conjugate, rockafellian_of, DualFunction, Error, ExtReal, FiniteSet,
    Function, PrimalFunction, ProbeConfig, Problem, Role, DEFAULT_TOL,
};

pub mod render;

use render::Format;

#[derive(Debug, Parser)]
#[command(name = "lagroc", version, about = "Coupling-based conjugate duality on finite sets")]
pub struct Cli {
    /// Tolerance for finite comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    /// f^c of a function on X
    Primal,
    /// g^c' of a function on Y
    Dual,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fenchel-Moreau conjugate of a function through the file's coupling.
    Conjugate {
        problem: PathBuf,
        /// Values in set order (`5,3`), `label=value` pairs (`x0=5,x1=3`), or a JSON file.
        #[arg(long)]
        function: String,
        #[arg(long, value_enum, default_value_t = Side::Primal)]
        which: Side,
    },
    /// Lagrangian of the file's Rockafellian.
    ToLagrangian {
        problem: PathBuf,
        /// Write a problem file carrying the Lagrangian instead of the Rockafellian.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rockafellian of the file's Lagrangian.
    ToRockafellian {
        problem: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Audit whether (L, R) is a Lagrangian-Rockafellian couple.
    CheckCouple {
        /// File with the coupling and the Rockafellian (and the Lagrangian, if no second file).
        problem: PathBuf,
        /// File carrying the Lagrangian.
        lagrangian: Option<PathBuf>,
        /// Probe step sizes for the minimality check.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1e-3, 1.0])]
        deltas: Vec<f64>,
    },
    /// Perturbation value against dual value at a base point.
    WeakDuality {
        problem: PathBuf,
        /// Label in X; defaults to the file's base_point, then to the first X label.
        #[arg(long)]
        base_point: Option<String>,
    },
    /// Check every invariant on random instances.
    Fuzz {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        max_set_size: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// `MIN..MAX[,P]`: integers in [MIN, MAX], each infinity with probability P.
        #[arg(long, default_value = "-10..10,0.1")]
        grid: String,
        /// Where to write the reproduction file on failure.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

/// What a command printed and how it exits.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Domain(String),
    Missing(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Missing(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Domain(m) | CliError::Missing(m) => m,
        }
    }
}

fn classify(err: Error, context: &str) -> CliError {
    let msg = format!("{context}: {err}");
    match err {
        Error::DomainMismatch { .. } | Error::UnknownLabel { .. } => CliError::Domain(msg),
        _ => CliError::Parse(msg),
    }
}

fn load(path: &Path) -> Result<Problem, CliError> {
    Problem::load(path).map_err(|e| classify(e, &path.display().to_string()))
}

type CmdResult = Result<(String, i32), CliError>;

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Conjugate {
            problem,
            function,
            which,
        } => cmd_conjugate(cli, problem, function, *which),
        Command::ToLagrangian { problem, output } => cmd_to_lagrangian(cli, problem, output.as_deref()),
        Command::ToRockafellian { problem, output } => cmd_to_rockafellian(cli, problem, output.as_deref()),
        Command::CheckCouple {
            problem,
            lagrangian,
            deltas,
        } => cmd_check_couple(cli, problem, lagrangian.as_deref(), deltas),
        Command::WeakDuality { problem, base_point } => cmd_weak_duality(cli, problem, base_point.as_deref()),
        Command::Fuzz {
            count,
            max_set_size,
            seed,
            grid,
            output,
            inject_fault,
        } => cmd_fuzz(
            cli,
            *count,
            *max_set_size,
            *seed,
            grid,
            output.as_deref(),
            inject_fault.as_deref(),
        ),
    };
    match result {
        Ok((stdout, code)) => Outcome {
            stdout,
            stderr: String::new(),
            code,
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message()),
            code: e.code(),
        },
    }
}

/// Parses `--function`: a path to a JSON file (array in set order, or object
/// keyed by label), or inline `v1,v2,...` / `label=value,...`.
fn parse_function<R: Role>(arg: &str, domain: &FiniteSet) -> Result<Function<R>, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{arg}: {e}")))?;
        return function_from_json(&text, domain).map_err(|e| match e {
            CliError::Parse(m) => CliError::Parse(format!("{arg}: {m}")),
            other => other,
        });
    }
    // (1-based column, token) pairs
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    let mut start = 0;
    for piece in arg.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        tokens.push((start + lead + 1, piece.trim()));
        start += piece.len() + 1;
    }
    let entry_err =
        |col: usize, tok: &str, msg: String| CliError::Parse(format!("--function column {col} ({tok:?}): {msg}"));
    let labeled = tokens.iter().any(|(_, t)| t.contains('='));
    let mut values = vec![None; domain.len()];
    if labeled {
        for &(col, tok) in &tokens {
            let (label, value) = tok
                .split_once('=')
                .ok_or_else(|| entry_err(col, tok, "expected label=value".into()))?;
            let v: ExtReal = value
                .trim()
                .parse()
                .map_err(|e: Error| entry_err(col, tok, e.to_string()))?;
            let i = domain
                .position(label.trim())
                .ok_or_else(|| CliError::Domain(format!("function label {label:?} is not in {}", R::NAME)))?;
            values[i] = Some(v);
        }
    } else {
        if tokens.len() != domain.len() {
            return Err(CliError::Domain(format!(
                "function has {} values but {} has {} labels",
                tokens.len(),
                R::NAME,
                domain.len()
            )));
        }
        for (k, &(col, tok)) in tokens.iter().enumerate() {
            let v: ExtReal = tok.parse().map_err(|e: Error| entry_err(col, tok, e.to_string()))?;
            values[k] = Some(v);
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| CliError::Domain(format!("no value for label {:?}", domain.label(i)))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Function::new(domain.clone(), values).expect("length checked"))
}

fn function_from_json<R: Role>(text: &str, domain: &FiniteSet) -> Result<Function<R>, CliError> {
    let parse_err = |e: serde_json::Error| CliError::Parse(e.to_string());
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
    match value {
        serde_json::Value::Array(_) => {
            let values: Vec<ExtReal> = serde_json::from_str(text).map_err(parse_err)?;
            Function::new(domain.clone(), values).map_err(|e| CliError::Domain(e.to_string()))
        }
        serde_json::Value::Object(map) => {
            let mut values = vec![None; domain.len()];
            for (label, v) in map {
                let i = domain
                    .position(&label)
                    .ok_or_else(|| CliError::Domain(format!("function label {label:?} is not in {}", R::NAME)))?;
                values[i] = Some(serde_json::from_value::<ExtReal>(v).map_err(parse_err)?);
            }
            let values = values
                .into_iter()
                .enumerate()
                .map(|(i, v)| v.ok_or_else(|| CliError::Domain(format!("no value for label {:?}", domain.label(i)))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Function::new(domain.clone(), values).expect("length checked"))
        }
        _ => Err(CliError::Parse("function file must hold a JSON array or object".into())),
    }
}

fn cmd_conjugate(cli: &Cli, problem: &Path, arg: &str, which: Side) -> CmdResult {
    let p = load(problem)?;
    let c = &p.coupling;
    let out = match which {
        Side::Primal => {
            let f: PrimalFunction = parse_function(arg, c.primal())?;
            render::function(&conjugate(&f, c).map_err(|e| classify(e, "conjugate"))?, cli.format)
        }
        Side::Dual => {
            let g: DualFunction = parse_function(arg, c.dual())?;
            render::function(
                &reverse_conjugate(&g, c).map_err(|e| classify(e, "conjugate"))?,
                cli.format,
            )
        }
    };
    Ok((out, 0))
}

fn write_output(path: &Path, file: &lagroc_core::ProblemFile) -> Result<(), CliError> {
    file.save(path)
        .map_err(|e| CliError::Parse(format!("writing {}: {e}", path.display())))
}

fn cmd_to_lagrangian(cli: &Cli, problem: &Path, output: Option<&Path>) -> CmdResult {
    let p = load(problem)?;
    let r = p
        .rockafellian
        .as_ref()
        .ok_or_else(|| CliError::Missing(format!("{} has no \"rockafellian\" table", problem.display())))?;
    let l = lagrangian_of(r, &p.coupling).map_err(|e| classify(e, "to-lagrangian"))?;
    if let Some(out) = output {
        write_output(out, &p.with_tables(None, Some(&l)))?;
    }
    Ok((render::table(&l, cli.format), 0))
}

fn cmd_to_rockafellian(cli: &Cli, problem: &Path, output: Option<&Path>) -> CmdResult {
    let p = load(problem)?;
    let l = p
        .lagrangian
        .as_ref()
        .ok_or_else(|| CliError::Missing(format!("{} has no \"lagrangian\" table", problem.display())))?;
    let r = rockafellian_of(l, &p.coupling).map_err(|e| classify(e, "to-rockafellian"))?;
    if let Some(out) = output {
        write_output(out, &p.with_tables(Some(&r), None))?;
    }
    Ok((render::table(&r, cli.format), 0))
}

fn cmd_check_couple(cli: &Cli, problem: &Path, lagrangian: Option<&Path>, deltas: &[f64]) -> CmdResult {
    if deltas.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return Err(CliError::Parse("--deltas must be positive finite numbers".into()));
    }
    let pr = load(problem)?;
    let r = pr
        .rockafellian
        .clone()
        .ok_or_else(|| CliError::Missing(format!("{} has no \"rockafellian\" table", problem.display())))?;
    let l = match lagrangian {
        None => pr.lagrangian.clone().ok_or_else(|| {
            CliError::Missing(format!(
                "{} has no \"lagrangian\" table and no second file was given",
                problem.display()
            ))
        })?,
        Some(path) => {
            let pl = load(path)?;
            if pl.coupling.primal() != pr.coupling.primal()
                || pl.coupling.dual() != pr.coupling.dual()
                || pl.decisions != pr.decisions
            {
                return Err(CliError::Domain(format!(
                    "sets of {} and {} differ",
                    problem.display(),
                    path.display()
                )));
            }
            if !pl.coupling.approx_eq(&pr.coupling, cli.tol) {
                return Err(CliError::Domain(format!(
                    "couplings of {} and {} differ",
                    problem.display(),
                    path.display()
                )));
            }
            pl.lagrangian
                .ok_or_else(|| CliError::Missing(format!("{} has no \"lagrangian\" table", path.display())))?
        }
    };
    let config = ProbeConfig {
        deltas: deltas.to_vec(),
        tol: cli.tol,
        ..ProbeConfig::default()
    };
    let a = audit(&l, &r, &pr.coupling, &config).map_err(|e| classify(e, "check-couple"))?;
    let code = if a.is_couple() && !a.consistency_alarm { 0 } else { 1 };
    Ok((render::audit(&a, cli.format), code))
}

fn cmd_weak_duality(cli: &Cli, problem: &Path, base_point: Option<&str>) -> CmdResult {
    let p = load(problem)?;
    let r = p
        .rockafellian
        .as_ref()
        .ok_or_else(|| CliError::Missing(format!("{} has no \"rockafellian\" table", problem.display())))?;
    let xbar = base_point.unwrap_or_else(|| p.base_point());
    let rep = weak_duality_report_with_tol(r, &p.coupling, xbar, cli.tol).map_err(|e| classify(e, "weak-duality"))?;
    Ok((render::weak_duality(&rep, cli.format), 0))
}

#[allow(clippy::too_many_arguments)]
fn cmd_fuzz(
    cli: &Cli,
    count: u64,
    max_set_size: u64,
    seed: u64,
    grid: &str,
    output: Option<&Path>,
    inject_fault: Option<&str>,
) -> CmdResult {
    let grid_spec: ValueGrid = grid
        .parse()
        .map_err(|_| CliError::Parse(format!("invalid --grid {grid:?}; expected MIN..MAX[,P]")))?;
    let fault: Option<Fault> = inject_fault
        .map(str::parse)
        .transpose()
        .map_err(|e| CliError::Parse(format!("--inject-fault: {e}")))?;
    let config = FuzzConfig {
        count: count as usize,
        max_set_size: max_set_size as usize,
        seed,
        grid: grid_spec,
        tol: cli.tol,
        fault,
    };
    let rep = fuzz::run(&config).map_err(|e| CliError::Parse(e.to_string()))?;
    let mut out = render::fuzz(&rep, config.max_set_size, &grid_spec.to_string(), cli.format);
    let code = match &rep.first_failure {
        None => 0,
        Some(f) => {
            let path = output
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from(format!("fuzz-repro-seed{seed}-instance{}.json", f.index)));
            write_output(&path, &f.reproduction)?;
            if cli.format == Format::Text {
                out.push_str(&format!("reproduction: {}\n", path.display()));
            }
            1
        }
    };
    Ok((out, code))
}
