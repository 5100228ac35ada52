use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::Value;

use idemkit::calculus::SeriesVariant;
use idemkit::experiment::{
    error_report, run, Command, Direction, ExperimentConfig, Format, PathKind,
};
use idemkit::instances::{Descriptor, TowerDescriptor};
use idemkit::par::Execution;
use idemkit::Error;

#[derive(Parser, Debug)]
#[command(name = "idemkit", version, about = "Certified idempotent experiments in normed algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json", value_parser = enum_arg::<Format>)]
    format: Format,
    #[arg(long, default_value = "parallel", value_parser = enum_arg::<Execution>)]
    execution: Execution,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Lift almost-idempotents to certified idempotents.
    Lift {
        /// Instance descriptor, inline JSON or a file path.
        #[arg(long, default_value = r#"{"kind":"complex"}"#)]
        instance: String,
        /// Lift this element (JSON) instead of random ones.
        #[arg(long)]
        element: Option<String>,
        #[arg(long, default_value_t = 0.2)]
        defect: f64,
        #[arg(long, default_value = "corrected", value_parser = enum_arg::<SeriesVariant>)]
        variant: SeriesVariant,
        #[command(flatten)]
        common: Common,
    },
    /// Transfer idempotents along a tower.
    Transfer {
        #[arg(long)]
        tower: String,
        #[arg(long, default_value = "sur", value_parser = enum_arg::<Direction>)]
        direction: Direction,
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Present K_0 of an instance or of a tower colimit.
    K0 {
        #[arg(long, conflicts_with = "tower")]
        instance: Option<String>,
        #[arg(long)]
        tower: Option<String>,
        /// Classify this idempotent of the instance.
        #[arg(long, requires = "instance")]
        element: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Trivialize an idempotent path by a single unit.
    PathTrivialize {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "rotation", value_parser = enum_arg::<PathKind>)]
        path: PathKind,
        #[arg(long, default_value_t = 20)]
        max_depth: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Verify the swindle conjugator on an initial segment of indices.
    SwindleCheck {
        #[arg(long, default_value_t = 4096)]
        support: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Verify the finite collapse identity.
    Collapse {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value = r#"{"kind":"complex"}"#)]
        instance: String,
        #[command(flatten)]
        common: Common,
    },
    /// Audit the normed-ring axioms on random samples.
    NormAudit {
        /// Audit one instance; all registered instances otherwise.
        #[arg(long)]
        instance: Option<String>,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the integer tensor norm with its closed form.
    TensorAudit {
        #[arg(long, value_delimiter = ',', default_value = "1/2,1,2,3")]
        scales: Vec<String>,
        #[arg(long, default_value_t = 8)]
        max_m: i64,
        #[arg(long, default_value_t = 8)]
        support_bound: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Run an experiment from a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn enum_arg<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(Value::String(s.to_owned())).map_err(|e| e.to_string())
}

/// Reads inline JSON, or the contents of a file when `arg` is not JSON.
fn load_json(arg: &str) -> Result<Value, Error> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with(['{', '[', '"']) || trimmed.parse::<f64>().is_ok() {
        arg.to_owned()
    } else {
        fs::read_to_string(Path::new(arg))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{arg}: {e}")))
}

fn load<T: DeserializeOwned>(arg: &str) -> Result<T, Error> {
    serde_json::from_value(load_json(arg)?).map_err(|e| Error::Config(e.to_string()))
}

fn with_common(command: Command, common: Common) -> ExperimentConfig {
    ExperimentConfig {
        command,
        seed: common.seed,
        tol: common.tol,
        trials: common.trials,
        format: common.format,
        out: common.out,
        execution: common.execution,
    }
}

fn build(cmd: Cmd) -> Result<ExperimentConfig, Error> {
    let opt = |s: Option<String>| s.as_deref().map(load::<Descriptor>).transpose();
    Ok(match cmd {
        Cmd::Lift {
            instance,
            element,
            defect,
            variant,
            common,
        } => with_common(
            Command::Lift {
                instance: load(&instance)?,
                element: element.as_deref().map(load_json).transpose()?,
                defect,
                variant,
            },
            common,
        ),
        Cmd::Transfer {
            tower,
            direction,
            eps,
            common,
        } => with_common(
            Command::Transfer {
                tower: load(&tower)?,
                direction,
                eps,
            },
            common,
        ),
        Cmd::K0 {
            instance,
            tower,
            element,
            common,
        } => with_common(
            Command::K0 {
                instance: opt(instance)?,
                tower: tower.as_deref().map(load::<TowerDescriptor>).transpose()?,
                element: element.as_deref().map(load_json).transpose()?,
            },
            common,
        ),
        Cmd::PathTrivialize {
            n,
            path,
            max_depth,
            common,
        } => with_common(Command::PathTrivialize { n, path, max_depth }, common),
        Cmd::SwindleCheck { support, common } => {
            with_common(Command::SwindleCheck { support }, common)
        }
        Cmd::Collapse {
            n,
            instance,
            common,
        } => with_common(
            Command::Collapse {
                n,
                instance: load(&instance)?,
            },
            common,
        ),
        Cmd::NormAudit {
            instance,
            pairs,
            common,
        } => with_common(
            Command::NormAudit {
                instance: opt(instance)?,
                pairs,
            },
            common,
        ),
        Cmd::TensorAudit {
            scales,
            max_m,
            support_bound,
            common,
        } => with_common(
            Command::TensorAudit {
                scales,
                max_m,
                support_bound,
            },
            common,
        ),
        Cmd::Run { config } => ExperimentConfig::from_json_str(&fs::read_to_string(config)?)?,
    })
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, bytes),
        None => std::io::stdout().write_all(bytes),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    let name = match &cli.command {
        Cmd::Run { .. } => "run",
        Cmd::Lift { .. } => "lift",
        Cmd::Transfer { .. } => "transfer",
        Cmd::K0 { .. } => "k0",
        Cmd::PathTrivialize { .. } => "path-trivialize",
        Cmd::SwindleCheck { .. } => "swindle-check",
        Cmd::Collapse { .. } => "collapse",
        Cmd::NormAudit { .. } => "norm-audit",
        Cmd::TensorAudit { .. } => "tensor-audit",
    };
    let config = match build(cli.command) {
        Ok(config) => config,
        Err(err) => {
            let _ = emit(None, &error_report(name, &err));
            eprintln!("error: {err}");
            return ExitCode::from(1);
        }
    };
    let output = run(&config);
    if let Err(err) = emit(config.out.as_deref(), &output.report) {
        eprintln!("error: cannot write report: {err}");
        return ExitCode::from(1);
    }
    ExitCode::from(output.exit_code as u8)
}
