//! Command-line front end. Every command prints one JSON document; exit
//! codes are 0 for pass or verified, 1 for fail or refuted, 2 for errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::criterion::{check_representation, MuMode};
use crate::decompose::{decompose_representation, envelope_report, verify_decomposition, BlockcodeDecomposition};
use crate::error::{Error, Result};
use crate::flag::{compute_flag, FlagLimits};
use crate::realize::EnvelopeLimits;
use crate::rep::{parse_representation, Representation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "blockcode",
    version,
    about = "Factorization criterion and blockcode decomposition for quiver representations"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,

    /// Möbius convention used by the criterion
    #[arg(long, global = true, default_value = "standard", value_parser = ["standard", "literal"])]
    mu: String,

    /// Maximum closure rounds for the flag computation
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    max_rounds: u64,

    /// Maximum subspaces per object in the flag computation
    #[arg(long, global = true, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    max_elements: u64,

    /// Write one Hasse diagram per object into DIR
    #[arg(long, global = true, value_name = "DIR")]
    dot: Option<PathBuf>,

    /// Write the JSON report to FILE instead of standard output
    #[arg(short = 'o', long = "output", global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Include wall-clock timing (makes output nondeterministic)
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum CommandArgs {
    /// Evaluate the factorization criterion
    Check { input: PathBuf },
    /// Compute the flag of every object
    Flag { input: PathBuf },
    /// Decompose into blockcodes and print the certificate
    Decompose { input: PathBuf },
    /// Re-check a decomposition certificate
    Verify { input: PathBuf, certificate: PathBuf },
    /// Pseudo-inverses and inverse-category axioms
    Envelope { input: PathBuf },
    /// Möbius tables of the flag posets
    Mobius {
        input: PathBuf,
        /// Only this object
        #[arg(long)]
        object: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Flag,
    Decompose,
    Verify,
    Envelope,
    Mobius,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    /// The representation, followed by the certificate for `verify`.
    pub inputs: Vec<PathBuf>,
    pub mu_mode: MuMode,
    pub limits: FlagLimits,
    pub output: Option<PathBuf>,
    pub dot_dir: Option<PathBuf>,
    pub timing: bool,
    pub object: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command, inputs: Vec<PathBuf>) -> Self {
        RunConfig {
            command,
            inputs,
            mu_mode: MuMode::Standard,
            limits: FlagLimits::default(),
            output: None,
            dot_dir: None,
            timing: false,
            object: None,
        }
    }

    /// Parses command-line arguments (including the program name).
    pub fn try_from_args<I, T>(args: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        let (command, inputs, object) = match cli.command {
            CommandArgs::Check { input } => (Command::Check, vec![input], None),
            CommandArgs::Flag { input } => (Command::Flag, vec![input], None),
            CommandArgs::Decompose { input } => (Command::Decompose, vec![input], None),
            CommandArgs::Verify { input, certificate } => (Command::Verify, vec![input, certificate], None),
            CommandArgs::Envelope { input } => (Command::Envelope, vec![input], None),
            CommandArgs::Mobius { input, object } => (Command::Mobius, vec![input], object),
        };
        Ok(RunConfig {
            command,
            inputs,
            mu_mode: cli.mu.parse().expect("restricted by clap"),
            limits: FlagLimits {
                max_rounds: cli.max_rounds as usize,
                max_elements_per_object: cli.max_elements as usize,
            },
            output: cli.output,
            dot_dir: cli.dot,
            timing: cli.timing,
            object,
        })
    }
}

/// Structured error document.
pub fn error_json(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "message": e.to_string()}})
}

fn read_representation(path: &Path) -> Result<Representation> {
    let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_representation(&bytes)
}

fn file_stem(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn execute(config: &RunConfig) -> Result<(Value, i32)> {
    let input = config.inputs.first().ok_or_else(|| Error::Io("no input file given".into()))?;
    let r = read_representation(input)?;
    match config.command {
        Command::Check => {
            let flag = compute_flag(&r, config.limits)?;
            let report = check_representation(&r, &flag, config.mu_mode);
            let code = if report.passed() { EXIT_OK } else { EXIT_REFUTED };
            Ok((report.to_json(config.timing), code))
        }
        Command::Flag => {
            let flag = compute_flag(&r, config.limits)?;
            if let Some(dir) = &config.dot_dir {
                fs::create_dir_all(dir)?;
                for (object, dot) in flag.dot(&r) {
                    fs::write(dir.join(format!("{}.dot", file_stem(&object))), dot)?;
                }
            }
            Ok((flag.to_json(&r), EXIT_OK))
        }
        Command::Decompose => {
            let d = decompose_representation(&r, config.limits)?;
            Ok((d.to_json(), EXIT_OK))
        }
        Command::Verify => {
            let path = config.inputs.get(1).ok_or_else(|| Error::Io("no certificate file given".into()))?;
            let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let doc: Value = serde_json::from_slice(&bytes).map_err(|e| Error::Syntax(e.to_string()))?;
            let d = BlockcodeDecomposition::from_json(&doc)?;
            let report = verify_decomposition(&r, &d);
            let code = if report.ok { EXIT_OK } else { EXIT_REFUTED };
            Ok((report.to_json(), code))
        }
        Command::Envelope => {
            let flag = compute_flag(&r, config.limits)?;
            let (report, ok) = envelope_report(&r, &flag, EnvelopeLimits::default())?;
            Ok((report, if ok { EXIT_OK } else { EXIT_REFUTED }))
        }
        Command::Mobius => {
            let flag = compute_flag(&r, config.limits)?;
            let mut objects = Vec::new();
            for (o, p) in flag.posets().iter().enumerate() {
                let id = &r.objects()[o].id;
                if config.object.as_ref().is_some_and(|want| want != id) {
                    continue;
                }
                let table = p.mobius();
                objects.push(json!({
                    "object": id,
                    "elements": p.elements().iter().map(|s| s.label()).collect::<Vec<_>>(),
                    "covers": p.covers(),
                    "one_var": table.one_var,
                    "two_var": table.two_var,
                }));
            }
            if let Some(want) = &config.object {
                if objects.is_empty() {
                    return Err(Error::validation("--object", format!("unknown object `{want}`")));
                }
            }
            Ok((json!({"objects": objects}), EXIT_OK))
        }
    }
}

/// Runs one command, writing the JSON report (or a structured error) to
/// `out`, or to the configured output file. Returns the exit code.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> i32 {
    let (doc, code) = match execute(config) {
        Ok(result) => result,
        Err(e) => (error_json(&e), EXIT_ERROR),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    let written = match (&config.output, code) {
        (Some(path), c) if c != EXIT_ERROR => fs::write(path, &text).map_err(Error::from),
        _ => out.write_all(text.as_bytes()).map_err(Error::from),
    };
    match written {
        Ok(()) => code,
        Err(e) => {
            let _ = writeln!(out, "{}", error_json(&e));
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::fixtures::{BISECTION, TRISECTION};

    fn with_input(text: &str, command: Command) -> (tempfile::TempDir, RunConfig) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rep.json");
        fs::write(&path, text).unwrap();
        (dir, RunConfig::new(command, vec![path]))
    }

    fn run_json(config: &RunConfig) -> (i32, Value) {
        let mut buf = Vec::new();
        let code = run(config, &mut buf);
        (code, serde_json::from_slice(&buf).unwrap())
    }

    #[test]
    fn check_exit_codes() {
        let (_d, c) = with_input(TRISECTION, Command::Check);
        let (code, v) = run_json(&c);
        assert_eq!(code, EXIT_REFUTED);
        assert_eq!(v["verdict"], "fail");
        let (_d, c) = with_input(BISECTION, Command::Check);
        assert_eq!(run_json(&c).0, EXIT_OK);
    }

    #[test]
    fn decompose_bisection_is_a_cycle_error() {
        let (_d, c) = with_input(BISECTION, Command::Decompose);
        let (code, v) = run_json(&c);
        assert_eq!(code, EXIT_ERROR);
        assert_eq!(v["error"]["kind"], "CycleError");
    }

    #[test]
    fn syntax_errors_are_structured() {
        let (_d, c) = with_input("{not json", Command::Check);
        let (code, v) = run_json(&c);
        assert_eq!(code, EXIT_ERROR);
        assert_eq!(v["error"]["kind"], "SyntaxError");
    }

    #[test]
    fn args_are_parsed() {
        let c =
            RunConfig::try_from_args(["blockcode", "check", "x.json", "--mu", "literal", "--max-rounds", "3"]).unwrap();
        assert_eq!(c.command, Command::Check);
        assert_eq!(c.mu_mode, MuMode::Literal);
        assert_eq!(c.limits.max_rounds, 3);
        assert!(RunConfig::try_from_args(["blockcode", "check", "x.json", "--max-rounds", "0"]).is_err());
        assert!(RunConfig::try_from_args(["blockcode", "check", "x.json", "--mu", "other"]).is_err());
        let v = RunConfig::try_from_args(["blockcode", "verify", "a.json", "b.json", "-o", "out.json"]).unwrap();
        assert_eq!(v.inputs.len(), 2);
        assert_eq!(v.output, Some(PathBuf::from("out.json")));
    }
}
