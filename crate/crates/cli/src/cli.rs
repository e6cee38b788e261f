use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kropina_core::models::{builtin, CATALOG};
use kropina_core::STRUCTURAL_TOLERANCE;

use crate::commands::{self, CliError, CliResult, Exit};
use crate::model_file::model_to_string;
use crate::render;

#[derive(Debug, Parser)]
#[command(
    name = "kropina",
    version,
    about = "Flag curvature of invariant Kropina metrics on homogeneous spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct ModelArg {
    /// Model file, or the name of a built-in model.
    pub model: String,

    /// Override the invariant field X (comma-separated coordinates).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Option<Vec<f64>>,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the structural, field and hypothesis checks.
    Validate {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value_t = STRUCTURAL_TOLERANCE)]
        tolerance: f64,
    },
    /// Flag curvature of one flag.
    Flag {
        #[command(flatten)]
        model: ModelArg,
        /// Flagpole Y (comma-separated coordinates).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        y: Vec<f64>,
        /// Transverse edge U (comma-separated coordinates).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        u: Vec<f64>,
        /// Relative finite-difference step.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Seeded random flags written as CSV (or JSON).
    Scan {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest accepted consistent-vs-direct residual.
        #[arg(long, default_value_t = commands::tolerances::CONSISTENT)]
        tolerance: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run every applicable oracle pairing.
    Compare {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override every pairing tolerance; also gates the printed variant.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Built-in models.
    Models {
        #[command(subcommand)]
        command: ModelsCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModelsCommand {
    List,
    /// Write a built-in model as a model file.
    Export {
        name: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn load(arg: &ModelArg) -> CliResult<kropina_core::ModelSpec> {
    commands::with_x(commands::resolve_model(&arg.model)?, arg.x.clone())
}

fn emit(out: &mut dyn Write, format: Format, text: String, json: serde_json::Value) -> CliResult<()> {
    match format {
        Format::Text => out.write_all(text.as_bytes())?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&json).expect("serializable"))?,
    }
    Ok(())
}

fn write_to(path: &Option<PathBuf>, out: &mut dyn Write, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::new(Exit::Io, format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(bytes)?),
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<Exit> {
    match cli.command {
        Command::Validate { model, tolerance } => {
            let o = commands::validate(&load(&model)?, tolerance)?;
            emit(out, model.format, o.to_text(), o.to_json())?;
            Ok(o.exit())
        }
        Command::Flag { model, y, u, step } => {
            let o = commands::flag(&load(&model)?, y, u, step)?;
            let mut text = render::result_text(&o.general);
            if let Some(bi) = &o.bi_invariant {
                text.push_str("bi-invariant route:\n");
                text.push_str(&render::result_text(bi));
            }
            let json = serde_json::json!({
                "result": render::result_json(&o.general),
                "bi_invariant": o.bi_invariant.as_ref().map(render::result_json),
            });
            emit(out, model.format, text, json)?;
            Ok(Exit::Success)
        }
        Command::Scan {
            model,
            samples,
            seed,
            tolerance,
            output,
        } => {
            let scan = commands::scan(&load(&model)?, samples, seed)?;
            let bytes = match model.format {
                Format::Text => {
                    let mut buf = Vec::new();
                    scan.write_csv(&mut buf)?;
                    buf
                }
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&scan.to_json()).expect("serializable");
                    s.push('\n');
                    s.into_bytes()
                }
            };
            write_to(&output, out, &bytes)?;
            writeln!(err, "{}", scan.summary())?;
            let (worst, _) = scan.max_residuals();
            if worst > tolerance {
                writeln!(
                    err,
                    "residual_consistent_vs_direct {worst:.3e} exceeds tolerance {tolerance:.1e}"
                )?;
                return Ok(Exit::Tolerance);
            }
            Ok(Exit::Success)
        }
        Command::Compare {
            model,
            samples,
            seed,
            tolerance,
            step,
        } => {
            let o = commands::compare(&load(&model)?, samples, seed, tolerance, step)?;
            emit(out, model.format, o.to_text(), o.to_json())?;
            if let Some(w) = o.worst() {
                writeln!(
                    err,
                    "worst pairing: {} (residual {:.3e}, tolerance {:.1e})",
                    w.name, w.residual, w.threshold
                )?;
            }
            Ok(o.exit())
        }
        Command::Models { command } => match command {
            ModelsCommand::List => {
                for name in CATALOG {
                    let spec = builtin(name)?;
                    writeln!(out, "{name:<20} {}", spec.notes)?;
                }
                Ok(Exit::Success)
            }
            ModelsCommand::Export { name, output } => {
                let spec = builtin(&name)?;
                write_to(&output, out, model_to_string(&spec).as_bytes())?;
                Ok(Exit::Success)
            }
        },
    }
}

/// Runs a parsed command line, reporting errors on `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    match dispatch(cli, out, err) {
        Ok(exit) => exit,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit
        }
    }
}

/// Parses `args` and runs, capturing output. Usage errors yield [`Exit::Usage`].
pub fn run_args<I, T>(args: I) -> (Exit, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let exit = match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, &mut out, &mut err),
        Err(e) => {
            let _ = write!(err, "{e}");
            if e.use_stderr() {
                Exit::Usage
            } else {
                let _ = write!(out, "{e}");
                Exit::Success
            }
        }
    };
    (
        exit,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

pub fn main_with_stdio() -> i32 {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let exit = run(cli, &mut out, &mut std::io::stderr());
    let _ = out.flush();
    exit.code()
}
