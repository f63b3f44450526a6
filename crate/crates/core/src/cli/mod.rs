//! Command-line front end.
//!
//! ```text
//! extcalc eval --sig 1,3 "e0 _| (e0 ^ e1)"
//! extcalc verify algebra --max-dim 5 --seed 7
//! extcalc verify stokes --sig 1,3 --gauss 8 --cases 50 --seed 7 --format json
//! extcalc verify maxwell --scenario scenarios/plane-wave.json
//! ```
//!
//! Exit status: 0 when every case passes, 1 when any case fails, 2 for usage
//! or configuration errors. A JSON config file (`--config`) may supply any
//! flag; flags given on the command line win, and `EC_SEED` supplies the
//! seed when neither does.

pub mod expr;
pub mod report;
pub mod suites;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::electromagnetism::Scenario;
use crate::error::{Error, Result};
use crate::signatures::Signature;
pub use expr::{eval, eval_str, parse, BinOp, Expr};
pub use report::{Case, Report};
pub use suites::{run_suite, Suite, SuiteConfig};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "extcalc", version, about = "Space-time exterior calculus: evaluate multivector expressions and run verification suites")]
struct Cli {
    /// Session signature: K time and N space dimensions.
    #[arg(long, global = true, value_name = "K,N")]
    sig: Option<String>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// JSON file with default values for any flag.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an expression exactly and print its canonical rendering.
    Eval {
        /// Expression, e.g. "1/2 * e1 ^ e2 + e2 ^ e1". A leading minus is allowed.
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteName,
        #[command(flatten)]
        flags: VerifyFlags,
    },
    /// Shorthand for `verify maxwell`.
    VerifyMaxwell {
        #[command(flatten)]
        flags: VerifyFlags,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteName {
    Algebra,
    Derivatives,
    Stokes,
    Maxwell,
}

impl From<SuiteName> for Suite {
    fn from(s: SuiteName) -> Suite {
        match s {
            SuiteName::Algebra => Suite::Algebra,
            SuiteName::Derivatives => Suite::Derivatives,
            SuiteName::Stokes => Suite::Stokes,
            SuiteName::Maxwell => Suite::Maxwell,
        }
    }
}

#[derive(Debug, Default, Args)]
struct VerifyFlags {
    /// Seed for every random draw.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest k+n for the algebra suite.
    #[arg(long)]
    max_dim: Option<usize>,
    /// Gauss–Legendre order per axis.
    #[arg(long)]
    gauss: Option<usize>,
    /// Subintervals per axis.
    #[arg(long)]
    subdivisions: Option<usize>,
    /// Random cases per signature (and per grade for derivatives).
    #[arg(long)]
    cases: Option<usize>,
    /// Maximum total degree of random polynomial fields.
    #[arg(long)]
    degree: Option<u32>,
    /// Scenario file for the maxwell suite.
    #[arg(long, value_name = "PATH")]
    scenario: Option<PathBuf>,
}

/// Contents of a `--config` file. Relative paths resolve against the file's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    sig: Option<String>,
    format: Option<Format>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    max_dim: Option<usize>,
    gauss: Option<usize>,
    subdivisions: Option<usize>,
    cases: Option<usize>,
    degree: Option<u32>,
    scenario: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn load_config(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg: ConfigFile =
        serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new(""));
    for p in [&mut cfg.out, &mut cfg.scenario].into_iter().flatten() {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    }
    Ok(cfg)
}

fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read scenario {}: {e}", path.display())))?;
    Scenario::from_json(&text)
}

fn parse_sig(text: Option<String>) -> Result<Option<Signature>> {
    text.map(|t| t.parse()).transpose()
}

fn env_seed(env: &dyn Fn(&str) -> Option<String>) -> Result<Option<u64>> {
    env("EC_SEED")
        .map(|v| v.trim().parse().map_err(|_| usage(format!("EC_SEED must be an unsigned integer, got {v:?}"))))
        .transpose()
}

struct Output {
    format: Format,
    out: Option<PathBuf>,
}

impl Output {
    fn emit(&self, text: &str, stdout: &mut dyn Write) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
            None => stdout.write_all(text.as_bytes()).map_err(|e| usage(format!("stdout: {e}"))),
        }
    }
}

fn suite_config(
    sig: Option<Signature>,
    flags: VerifyFlags,
    file: &ConfigFile,
    env: &dyn Fn(&str) -> Option<String>,
) -> Result<SuiteConfig> {
    let d = SuiteConfig::default();
    let seed = match flags.seed.or(file.seed) {
        Some(s) => s,
        None => env_seed(env)?.unwrap_or(d.seed),
    };
    let scenario = flags.scenario.or_else(|| file.scenario.clone()).map(|p| load_scenario(&p)).transpose()?;
    Ok(SuiteConfig {
        seed,
        sig,
        max_dim: flags.max_dim.or(file.max_dim).unwrap_or(d.max_dim),
        gauss: flags.gauss.or(file.gauss).unwrap_or(d.gauss),
        subdivisions: flags.subdivisions.or(file.subdivisions).unwrap_or(d.subdivisions),
        cases: flags.cases.or(file.cases).unwrap_or(d.cases),
        degree: flags.degree.or(file.degree).unwrap_or(d.degree),
        scenario,
    })
}

fn caret(src: &str, offset: usize) -> String {
    let col = src[..offset.min(src.len())].chars().count();
    format!("  {src}\n  {}^", " ".repeat(col))
}

fn execute(cli: Cli, env: &dyn Fn(&str) -> Option<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8> {
    let file = cli.config.as_deref().map(load_config).transpose()?.unwrap_or_default();
    let sig = parse_sig(cli.sig.or_else(|| file.sig.clone()))?;
    let output = Output {
        format: cli.format.or(file.format).unwrap_or(Format::Table),
        out: cli.out.or_else(|| file.out.clone()),
    };
    match cli.command {
        Command::Eval { expr } => {
            let sig = sig.ok_or_else(|| usage("eval needs a signature: --sig K,N"))?;
            let value = match expr::parse(&expr, sig).and_then(|e| expr::eval(&e, sig)) {
                Ok(v) => v,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    if let Error::Syntax { offset, .. } = e {
                        let _ = writeln!(stderr, "{}", caret(&expr, offset));
                    }
                    return Ok(EXIT_USAGE);
                }
            };
            let text = match output.format {
                Format::Table => format!("{value}\n"),
                Format::Json => {
                    let doc = serde_json::json!({
                        "expression": expr,
                        "signature": sig.to_string(),
                        "result": value.to_string(),
                    });
                    format!("{}\n", serde_json::to_string_pretty(&doc).expect("json value"))
                }
            };
            output.emit(&text, stdout)?;
            Ok(EXIT_PASS)
        }
        Command::Verify { suite, flags } => verify(suite.into(), sig, flags, &file, env, &output, stdout),
        Command::VerifyMaxwell { flags } => verify(Suite::Maxwell, sig, flags, &file, env, &output, stdout),
    }
}

fn verify(
    suite: Suite,
    sig: Option<Signature>,
    flags: VerifyFlags,
    file: &ConfigFile,
    env: &dyn Fn(&str) -> Option<String>,
    output: &Output,
    stdout: &mut dyn Write,
) -> Result<u8> {
    let cfg = suite_config(sig, flags, file, env)?;
    let report = run_suite(suite, &cfg)?;
    let text = match output.format {
        Format::Json => report.to_json(),
        Format::Table => report.to_table(),
    };
    output.emit(&text, stdout)?;
    Ok(if report.all_pass() { EXIT_PASS } else { EXIT_FAIL })
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, env: &dyn Fn(&str) -> Option<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render().ansi());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(cli, env, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Entry point for the binary: process arguments, environment and stdio.
pub fn main() -> ExitCode {
    let env = |k: &str| std::env::var(k).ok();
    let code = run(std::env::args_os(), &env, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code)
}
