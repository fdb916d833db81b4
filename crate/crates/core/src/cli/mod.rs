//! The `tr` command line: configuration loading, dispatch and JSON output.

pub mod selftest;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Prec, Scalar, C, DEFAULT_PRECISION, Q};
use crate::curve::{CurveConfig, CurveError, Mode};
use crate::potentials::{self, PotentialError};
use crate::recursion::{self, OmegaTable, RecursionConfig, RecursionError};
use crate::toric::{counts, emit_toric_graph, DiagramInput, ToricError};

#[derive(Debug, Parser)]
#[command(name = "tr", version, about = "Mirror curves, topological recursion and B-model potentials")]
pub struct Cli {
    /// Coefficient ring: exact rationals or complex floats.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// Mantissa bits in numeric mode.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Expansion order K for every recursion step.
    #[arg(long, global = true)]
    pub order: Option<i64>,
    /// Also write the JSON result to this file.
    #[arg(long = "json-out", global = true)]
    pub json_out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Lattice counts, identity chain, mirror polynomial and toric graph.
    Toric { file: PathBuf },
    /// Principal parts of ω_{g,n}.
    Omega {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        file: PathBuf,
    },
    /// Closed free energy F_g, g >= 2.
    FreeEnergy {
        #[arg(long)]
        g: u32,
        file: PathBuf,
    },
    /// Disk potential F_{0,1}.
    Disk {
        #[arg(long)]
        degree: u32,
        file: PathBuf,
    },
    /// Annulus potential F_{0,2}.
    Annulus {
        #[arg(long)]
        degree: u32,
        file: PathBuf,
    },
    /// Open potential F_{g,n}.
    Open {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        degree: u32,
        file: PathBuf,
    },
    /// Formal Laplace transform of ω_{g,n} at each ramification point.
    Laplace {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        /// Largest power of the local coordinate kept per variable.
        #[arg(long = "local-order", default_value_t = 4)]
        local_order: i64,
        file: PathBuf,
    },
    /// A-period of Φ around one puncture.
    Period {
        #[arg(long)]
        puncture: usize,
        file: PathBuf,
    },
    /// Dual toric graph of a diagram.
    Graph { file: PathBuf },
    /// Run the bundled corpus through every invariant check.
    Selftest {
        /// Negate the recursion kernel (mutation check; the run must fail).
        #[arg(long = "inject-kernel-sign-flip", hide = true)]
        flip_kernel_sign: bool,
    },
}

/// Settings shared by every curve command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub mode: Mode,
    pub precision: u32,
    pub order: Option<i64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Recursion(#[from] RecursionError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error("IoError: {0}")]
    Io(String),
    #[error("ConfigError: {0}")]
    Config(String),
    #[error("SelftestFailed: {}", .0.join(", "))]
    Selftest(Vec<String>),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Toric(e) => e.kind(),
            CliError::Curve(e) => e.kind(),
            CliError::Recursion(e) => e.kind(),
            CliError::Potential(e) => e.kind(),
            CliError::Io(_) => "IoError",
            CliError::Config(_) => "ConfigError",
            CliError::Selftest(_) => "SelftestFailed",
        }
    }

    /// `2` for bad input, `1` for failed computations.
    pub fn exit_code(&self) -> i32 {
        let config = match self {
            CliError::Toric(_) | CliError::Io(_) | CliError::Config(_) => true,
            CliError::Curve(e) => e.is_config_error(),
            CliError::Recursion(e) => e.is_config_error(),
            CliError::Potential(e) => e.is_config_error(),
            CliError::Selftest(_) => false,
        };
        if config {
            2
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code()})
    }
}

/// Replace every JSON number by its decimal string.
pub fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: invalid JSON: {e}", path.display())))
}

fn load_curve(path: &Path) -> Result<CurveConfig, CliError> {
    Ok(CurveConfig::from_json(&read_json(path)?)?)
}

fn run_config(cli: &Cli, file: Option<&CurveConfig>) -> Result<RunConfig, CliError> {
    let mode = match &cli.mode {
        Some(m) => Mode::parse(m)?,
        None => file.map(|c| c.mode_or_default()).unwrap_or(Mode::Exact),
    };
    let precision = cli
        .precision
        .or(file.and_then(|c| c.precision))
        .unwrap_or(DEFAULT_PRECISION);
    if mode == Mode::Numeric && precision < 64 {
        return Err(CliError::Config(format!("precision must be at least 64 bits, got {precision}")));
    }
    if let Some(k) = cli.order {
        if k < 1 {
            return Err(CliError::Config(format!("order must be positive, got {k}")));
        }
    }
    Ok(RunConfig {
        input: None,
        mode,
        precision,
        order: cli.order,
    })
}

fn diagram_input(v: &Value) -> Result<(DiagramInput, Option<usize>), CliError> {
    if let Some(d) = v.get("diagram") {
        let gauge = v.get("gauge").and_then(Value::as_u64).map(|g| g as usize);
        Ok((DiagramInput::from_json(d)?, gauge))
    } else {
        Ok((DiagramInput::from_json(v)?, None))
    }
}

/// Lattice counts, identity verdicts, the mirror polynomial with symbolic
/// coefficients, and the toric graph.
pub fn cmd_toric(path: &Path) -> Result<Value, CliError> {
    let v = read_json(path)?;
    let (input, gauge) = diagram_input(&v)?;
    let d = input.validate()?;
    let c = counts(&d)?;
    let gi = gauge.unwrap_or_else(|| d.default_gauge());
    let g = *d.triangles.get(gi).ok_or(ToricError::BadGauge(gi))?;
    let mut terms = serde_json::Map::new();
    let mut expr = Vec::new();
    for p in d.lattice_points() {
        let text = if g.contains(&p) {
            "1".to_string()
        } else {
            input
                .coefficients
                .get(&p)
                .cloned()
                .unwrap_or_else(|| format!("a_{}_{}", p.0, p.1))
        };
        expr.push(format!("({text})*X^{}*Y^{}", p.0, p.1));
        terms.insert(format!("{},{}", p.0, p.1), Value::String(text));
    }
    let pick = 2 * c.fg + c.fn_ - 2;
    let verdict = |ok: bool| if ok { "pass" } else { "fail" };
    Ok(json!({
        "counts": {
            "p": c.p, "s": c.s, "fg": c.fg, "fn": c.fn_, "chi": c.chi,
            "rays": c.fn_, "area2": d.area2(),
        },
        "identity_chain": {
            "chi = 2Area(P)": verdict(c.chi == d.area2()),
            "chi = 2fg - 2 + fn": verdict(c.chi == 2 * c.fg - 2 + c.fn_),
            "chi = 1 + p + s + fg": verdict(c.chi == 1 + c.p + c.s + c.fg),
            "pick": verdict(c.chi == pick),
            "chain": verdict(c.chi == d.area2() && c.chi == 2 * c.fg - 2 + c.fn_ && c.chi == 1 + c.p + c.s + c.fg && c.chi == pick),
        },
        "curve_euler_characteristic": c.curve_euler_characteristic(),
        "expected_ramification": c.expected_ramification(),
        "mirror_polynomial": {
            "gauge_triangle": gi,
            "terms": terms,
            "expression": expr.join(" + "),
        },
        "graph": emit_toric_graph(&d).to_json(),
    }))
}

pub fn cmd_graph(path: &Path) -> Result<Value, CliError> {
    let v = read_json(path)?;
    let (input, _) = diagram_input(&v)?;
    let d = input.validate()?;
    Ok(emit_toric_graph(&d).to_json())
}

fn curve_command<F: Scalar>(cmd: &Command, cfg: &CurveConfig, ctx: &F::Ctx, rc: &RunConfig) -> Result<Value, CliError> {
    let curve = cfg.build::<F>(ctx)?;
    let summary = curve.summary_json();
    let rconf = RecursionConfig {
        order_override: rc.order,
        check_tolerance: if F::EXACT { 0.0 } else { RecursionConfig::tolerance_for_bits(rc.precision) },
        ..RecursionConfig::default()
    };
    let mode = rc.mode.as_str();
    let prec = (!F::EXACT).then_some(rc.precision);
    let mut table = OmegaTable::new(curve, rconf);
    let result = match cmd {
        Command::Omega { g, n, .. } => table.form_json(*g, *n)?,
        Command::FreeEnergy { g, .. } => {
            let terms = recursion::free_energy_terms(&mut table, *g)?;
            let f = recursion::free_energy(&mut table, *g)?;
            json!({
                "g": g,
                "free_energy": f.render(),
                "residues": terms.iter().map(|t| t.render()).collect::<Vec<_>>(),
                "order": table.get(*g, 1).map(|w| w.order),
            })
        }
        Command::Disk { degree, .. } => potentials::disk_potential(&table.curve, *degree)?.to_json(mode, prec),
        Command::Annulus { degree, .. } => {
            let (p, rep) = potentials::annulus_potential(&table.curve, *degree)?;
            let mut v = p.to_json(mode, prec);
            v["diagonal_max_residual"] = Value::String(format!("{:e}", rep.max_residual));
            v
        }
        Command::Open { g, n, degree, .. } => match (g, n) {
            (0, 1) => potentials::disk_potential(&table.curve, *degree)?.to_json(mode, prec),
            (0, 2) => potentials::annulus_potential(&table.curve, *degree)?.0.to_json(mode, prec),
            _ => {
                let p = potentials::open_potential(&mut table, *g, *n, *degree)?;
                let mut v = p.to_json(mode, prec);
                v["symmetry_defect"] = Value::String(format!("{:e}", p.symmetry_defect()));
                v
            }
        },
        Command::Laplace { g, n, local_order, .. } => {
            potentials::laplace_transform(&mut table, *g, *n, *local_order)?.to_json()
        }
        Command::Period { puncture, .. } => {
            let all = table.curve.punctures()?;
            let p = potentials::a_period(&table.curve, *puncture)?;
            json!({
                "period": p.to_json(),
                "punctures": all.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            })
        }
        _ => unreachable!("not a curve command"),
    };
    Ok(json!({
        "mode": mode,
        "precision": prec,
        "order": rc.order,
        "curve": summary,
        "result": result,
    }))
}

fn file_of(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Toric { file }
        | Command::Graph { file }
        | Command::Omega { file, .. }
        | Command::FreeEnergy { file, .. }
        | Command::Disk { file, .. }
        | Command::Annulus { file, .. }
        | Command::Open { file, .. }
        | Command::Laplace { file, .. }
        | Command::Period { file, .. } => Some(file),
        Command::Selftest { .. } => None,
    }
}

/// Execute a parsed command, returning its JSON output.
pub fn execute(cli: &Cli) -> Result<Value, CliError> {
    match &cli.command {
        Command::Toric { file } => cmd_toric(file),
        Command::Graph { file } => cmd_graph(file),
        Command::Selftest { flip_kernel_sign } => {
            let rc = run_config(cli, None)?;
            let report = selftest::run(&selftest::SelftestOptions {
                flip_kernel_sign: *flip_kernel_sign,
                precision: rc.precision,
                verbose: true,
            });
            let failed: Vec<String> = report.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
            if failed.is_empty() {
                Ok(selftest::report_json(&report))
            } else {
                Err(CliError::Selftest(failed))
            }
        }
        cmd => {
            let path = file_of(cmd).expect("curve command has a file");
            let cfg = load_curve(path)?;
            let mut rc = run_config(cli, Some(&cfg))?;
            rc.input = Some(path.to_path_buf());
            match rc.mode {
                Mode::Exact => curve_command::<Q>(cmd, &cfg, &(), &rc),
                Mode::Numeric => curve_command::<C>(cmd, &cfg, &Prec(rc.precision), &rc),
            }
        }
    }
}

/// Parse `args`, run, print the JSON result (or error object) to stdout, and
/// return the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use std::io::Write;
    let (code, out) = run(args);
    // a closed pipe (e.g. `| head`) is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{out}");
    code
}

/// Like [`main_with`], returning the output instead of printing it.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let (code, value) = match execute(&cli) {
        Ok(v) => (0, v),
        Err(e) => (e.exit_code(), e.to_json()),
    };
    let value = stringify_numbers(value);
    let text = serde_json::to_string_pretty(&value).expect("serializable");
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            let err = CliError::Io(format!("{}: {e}", path.display()));
            return (err.exit_code(), serde_json::to_string_pretty(&stringify_numbers(err.to_json())).expect("json"));
        }
    }
    (code, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_become_strings() {
        let v = stringify_numbers(json!({"a": 1, "b": [2.5, "x"], "c": null}));
        assert_eq!(v, json!({"a": "1", "b": ["2.5", "x"], "c": null}));
    }

    #[test]
    fn bad_mode_is_config_error() {
        let (code, out) = run(["tr", "--mode", "fuzzy", "omega", "--g", "1", "--n", "1", "nope.json"]);
        assert_eq!(code, 2, "{out}");
    }

    #[test]
    fn usage_error_exits_two() {
        let (code, _) = run(["tr", "omega", "--g", "1"]);
        assert_eq!(code, 2);
    }
}
