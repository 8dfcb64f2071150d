//! The `jetvar` command-line driver.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::GradedPoly;
use crate::brst::noether_current;
use crate::models::{builtin, verify_model, CheckResult, ModelReport, Outcome, Status, TheoryModel};
use crate::{Error, ENGINE_VERSION};

use super::{parse, render, render_latex, render_var, ParseError};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Debug, Parser)]
#[command(name = "jetvar", version, about = "Exact variational calculus, Noether identities and BRST checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Theory file (or, for `verify`, a built-in model name).
    file: Option<String>,
    /// Use a built-in model instead of a file.
    #[arg(long)]
    model: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Override the jet-order cap.
    #[arg(long)]
    max_jet_order: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Euler–Lagrange components.
    El(Input),
    /// Decide whether a named derivation is a variational symmetry.
    Symmetry {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        derivation: String,
    },
    /// Print the Noether current of a named symmetry.
    Current {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        derivation: String,
    },
    /// Verify the Noether identity tower.
    Ni(Input),
    /// Check nilpotency of the Koszul–Tate differential.
    Kt(Input),
    /// Check nilpotency of the BRST operator.
    Brst(Input),
    /// Check the classical master equation for the extended Lagrangian.
    Master(Input),
    /// Print the extended Lagrangian.
    Extend(Input),
    /// Run every applicable check and print a report.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Worker threads for independent checks.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

/// Exit status of a command.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

enum Failure {
    Usage(String),
    Parse(ParseError),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => Failure::Parse(p),
            Error::UnknownModel(_) | Error::MissingData { .. } => Failure::Usage(e.to_string()),
            other => Failure::Engine(other),
        }
    }
}

fn load(input: &Input, allow_name: bool) -> Result<TheoryModel, Failure> {
    let mut model = match (&input.file, &input.model) {
        (Some(_), Some(_)) => return Err(Failure::Usage("give either a file or --model, not both".into())),
        (None, None) => return Err(Failure::Usage("missing theory file or --model".into())),
        (None, Some(name)) => builtin(name)?,
        (Some(file), None) => {
            if allow_name && !Path::new(file).exists() {
                builtin(file)?
            } else {
                let text = std::fs::read_to_string(file)
                    .map_err(|e| Failure::Usage(format!("cannot read {file}: {e}")))?;
                parse(&text).map_err(Failure::Parse)?
            }
        }
    };
    if let Some(n) = input.max_jet_order {
        model.max_jet_order = Some(n);
    }
    Ok(model)
}

#[derive(Serialize)]
struct Component {
    generator: String,
    expression: String,
}

#[derive(Serialize)]
struct Listing<'a> {
    model: &'a str,
    command: &'a str,
    components: Vec<Component>,
    #[serde(rename = "engine-version")]
    engine_version: &'a str,
}

fn listing(
    out: &mut dyn Write,
    m: &TheoryModel,
    format: Format,
    command: &str,
    rows: Vec<(String, String, GradedPoly)>,
) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let components = rows
                .into_iter()
                .map(|(generator, _, p)| Component {
                    generator,
                    expression: render(&m.roster, &p),
                })
                .collect();
            let l = Listing {
                model: &m.name,
                command,
                components,
                engine_version: ENGINE_VERSION,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&l).expect("serialisable"))
        }
        Format::Text => {
            for (label, _, p) in rows {
                writeln!(out, "{label} = {}", render(&m.roster, &p))?;
            }
            Ok(())
        }
        Format::Latex => {
            for (_, tex, p) in rows {
                writeln!(out, "{tex} = {}", render_latex(&m.roster, &p, m.physics_display))?;
            }
            Ok(())
        }
    }
}

fn write_report(out: &mut dyn Write, report: &ModelReport, format: Format) -> std::io::Result<()> {
    if format == Format::Json {
        return writeln!(out, "{}", serde_json::to_string_pretty(report).expect("serialisable"));
    }
    writeln!(out, "model {} (engine {})", report.model, report.engine_version)?;
    for c in &report.checks {
        let tag = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
        };
        writeln!(out, "  {tag}  {}  ({} ms)", c.name, c.millis)?;
        if let Some(r) = &c.residual {
            writeln!(out, "        residual: {r}")?;
        }
    }
    Ok(())
}

fn single(m: &TheoryModel, name: &str, f: impl FnOnce() -> Outcome) -> Result<ModelReport, Failure> {
    let start = std::time::Instant::now();
    let residual = f()?;
    Ok(ModelReport {
        model: m.name.clone(),
        checks: vec![CheckResult {
            name: name.to_string(),
            status: if residual.is_none() { Status::Pass } else { Status::Fail },
            residual,
            millis: start.elapsed().as_millis() as u64,
        }],
        engine_version: ENGINE_VERSION.to_string(),
    })
}

fn require<T>(value: Option<T>, m: &TheoryModel, what: &'static str) -> Result<T, Failure> {
    value.ok_or_else(|| {
        Failure::from(Error::MissingData {
            model: m.name.clone(),
            what,
        })
    })
}

fn execute(cmd: &Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::Usage(e.to_string());
    let report = |out: &mut dyn Write, r: ModelReport, format: Format| -> Result<i32, Failure> {
        write_report(out, &r, format).map_err(io)?;
        Ok(if r.passed() { EXIT_OK } else { EXIT_FAILED })
    };
    match cmd {
        Command::El(input) => {
            let m = load(input, false)?;
            let el = m.euler_lagrange()?;
            let rows = el
                .components
                .iter()
                .map(|(v, p)| {
                    let name = render_var(&m.roster, v).0;
                    let tex = render_latex(&m.roster, &GradedPoly::var(v.clone()), m.physics_display);
                    (format!("E[{name}]"), format!("\\mathcal{{E}}_{{{tex}}}"), p.clone())
                })
                .collect();
            listing(out, &m, input.format, "el", rows).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Symmetry { input, derivation } => {
            let m = load(input, false)?;
            let d = m.derivation(derivation)?;
            let r = single(&m, &format!("symmetry:{derivation}"), || m.check_symmetry(d))?;
            report(out, r, input.format)
        }
        Command::Current { input, derivation } => {
            let m = load(input, false)?;
            let d = m.derivation(derivation)?;
            let js = m.jet_space();
            let j = match noether_current(&js, d, &m.lagrangian) {
                Ok(j) => j,
                Err(Error::NotASymmetry) => {
                    writeln!(out, "`{derivation}` is not a variational symmetry").map_err(io)?;
                    return Ok(EXIT_FAILED);
                }
                Err(e) => return Err(e.into()),
            };
            let rows = j
                .components
                .into_iter()
                .enumerate()
                .map(|(l, p)| (format!("J[{l}]"), format!("J^{{{l}}}"), p))
                .collect();
            listing(out, &m, input.format, "current", rows).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Ni(input) => {
            let m = load(input, false)?;
            require((!m.tower.is_empty()).then_some(()), &m, "Noether identities")?;
            let r = single(&m, "noether-identities", || m.check_noether_identities())?;
            report(out, r, input.format)
        }
        Command::Kt(input) => {
            let m = load(input, false)?;
            require((!m.tower.is_empty()).then_some(()), &m, "Noether identities")?;
            let r = single(&m, "kt-nilpotency", || m.check_kt_nilpotency())?;
            report(out, r, input.format)
        }
        Command::Brst(input) => {
            let m = load(input, false)?;
            require(m.brst.as_ref(), &m, "BRST operator")?;
            let r = single(&m, "brst-nilpotency", || m.check_brst_nilpotency())?;
            report(out, r, input.format)
        }
        Command::Master(input) => {
            let m = load(input, false)?;
            if m.extended.is_none() {
                require(m.brst.as_ref(), &m, "BRST operator")?;
            }
            let r = single(&m, "master-equation", || m.check_master_equation())?;
            report(out, r, input.format)
        }
        Command::Extend(input) => {
            let m = load(input, false)?;
            if m.extended.is_none() {
                require(m.brst.as_ref(), &m, "BRST operator")?;
            }
            let le = match m.extended_lagrangian() {
                Ok(le) => le,
                Err(Error::NotNilpotent) => {
                    let r = single(&m, "brst-nilpotency", || m.check_brst_nilpotency())?;
                    return report(out, r, input.format);
                }
                Err(e) => return Err(e.into()),
            };
            let rows = vec![("extended".to_string(), "L_E".to_string(), le)];
            listing(out, &m, input.format, "extend", rows).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Verify { input, jobs } => {
            let m = load(input, true)?;
            report(out, verify_model(&m, *jobs), input.format)
        }
    }
}

fn format_of(cmd: &Command) -> Format {
    match cmd {
        Command::El(i)
        | Command::Ni(i)
        | Command::Kt(i)
        | Command::Brst(i)
        | Command::Master(i)
        | Command::Extend(i) => i.format,
        Command::Symmetry { input, .. } | Command::Current { input, .. } | Command::Verify { input, .. } => {
            input.format
        }
    }
}

#[derive(Serialize)]
struct ErrorReport<'a, T: Serialize> {
    error: &'a T,
}

#[derive(Serialize)]
struct Message {
    kind: &'static str,
    message: String,
}

/// Runs the command line `args` (including the program name), writing results
/// to `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let format = format_of(&cli.command);
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(failure) => {
            let (code, json, text) = match failure {
                Failure::Parse(p) => (
                    EXIT_USAGE,
                    serde_json::to_string_pretty(&ErrorReport { error: &p }),
                    p.to_string(),
                ),
                Failure::Usage(message) => (
                    EXIT_USAGE,
                    serde_json::to_string_pretty(&ErrorReport {
                        error: &Message { kind: "usage", message: message.clone() },
                    }),
                    message,
                ),
                Failure::Engine(e) => (
                    EXIT_FAILED,
                    serde_json::to_string_pretty(&ErrorReport {
                        error: &Message { kind: "engine", message: e.to_string() },
                    }),
                    e.to_string(),
                ),
            };
            let _ = if format == Format::Json {
                writeln!(err, "{}", json.expect("serialisable"))
            } else {
                writeln!(err, "error: {text}")
            };
            code
        }
    }
}
