//! File format, example zoo, fuzzing and command dispatch.

pub mod format;
pub mod fuzz;
pub mod report;
pub mod zoo;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::construct::compactify;
use crate::curves::Curve;
use crate::error::{Error, Result};
use crate::space::Space;
use report::{Color, Predicate};

#[derive(Parser, Debug)]
#[command(name = "omt", version, about = "Exact topology of one-dimensional definable spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct CheckFlags {
    #[arg(long)]
    pub hausdorff: bool,
    #[arg(long)]
    pub regular: bool,
    #[arg(long)]
    pub compact: bool,
    #[arg(long = "near-compact")]
    pub near_compact: bool,
    #[arg(long)]
    pub separable: bool,
    #[arg(long)]
    pub fdi: bool,
    #[arg(long)]
    pub affine: bool,
    /// Print the weight class.
    #[arg(long)]
    pub weight: bool,
}

impl CheckFlags {
    fn predicates(&self) -> Vec<Predicate> {
        let on = [
            self.hausdorff,
            self.regular,
            self.compact,
            self.near_compact,
            self.separable,
            self.fdi,
            self.affine,
        ];
        let chosen: Vec<Predicate> = Predicate::ALL.into_iter().zip(on).filter(|(_, b)| *b).map(|(p, _)| p).collect();
        if chosen.is_empty() && !self.weight {
            Predicate::ALL.to_vec()
        } else {
            chosen
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a space file and check the germ rule.
    Validate { file: PathBuf },
    /// Evaluate topological predicates (all of them when no flag is given).
    Check {
        #[command(flatten)]
        flags: CheckFlags,
        file: PathBuf,
    },
    /// Split a Hausdorff space into tame interval pieces and finitely many points.
    Decompose { file: PathBuf },
    /// Embed a regular space piecewise into lexicographic and Alexandrov blocks.
    #[command(name = "decompose-t3")]
    DecomposeT3 { file: PathBuf },
    /// Build a definable compactification.
    Compactify {
        file: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Synthesize a definable metric.
    Metric {
        file: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Limit of a curve, e.g. "track=0; map=t+1/2; domain=(0,1); end=a".
    Limit {
        #[arg(long)]
        curve: String,
        file: PathBuf,
    },
    /// Connected components of a regular space.
    Components { file: PathBuf },
    /// At most two-to-one map onto a euclidean space.
    #[command(name = "two-to-one")]
    TwoToOne { file: PathBuf },
    /// Print (or write) a named example space.
    Example {
        name: String,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Print seeded random spaces; mutants are marked invalid.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

/// Exit code and captured output of one command.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn err(e: &Error) -> Outcome {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

fn load(path: &Path) -> Result<Space> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
    format::parse_space_file(&text)
}

fn write_to(out: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(p) = out {
        std::fs::write(p, text).map_err(|e| Error::Usage(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

/// Runs a parsed command.
pub fn run(cmd: &Command, color: Color) -> Outcome {
    match execute(cmd, color) {
        Ok(o) => o,
        Err(e) => Outcome::err(&e),
    }
}

fn execute(cmd: &Command, color: Color) -> Result<Outcome> {
    Ok(match cmd {
        Command::Validate { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| Error::Usage(format!("{}: {e}", file.display())))?;
            let s = format::parse_unvalidated(&text)?;
            match s.validate_topology() {
                Ok(()) => Outcome::ok(format!("space: {}\nvalid: {}\n", s.name(), color.verdict(true))),
                Err(vs) => Outcome { code: 1, stdout: report::violations(&vs), stderr: String::new() },
            }
        }
        Command::Check { flags, file } => {
            let s = load(file)?;
            let preds = flags.predicates();
            let (text, verdicts) = report::check(&s, &preds, flags.weight, color);
            let code = if verdicts.len() == 1 && !verdicts[0] { 1 } else { 0 };
            Outcome { code, stdout: text, stderr: String::new() }
        }
        Command::Decompose { file } => Outcome::ok(report::decompose(&load(file)?)?),
        Command::DecomposeT3 { file } => Outcome::ok(report::decompose_t3_report(&load(file)?)?),
        Command::Compactify { file, out } => {
            let s = load(file)?;
            let c = compactify(&s)?;
            let text = format::serialize(&c.space);
            write_to(out, &text)?;
            let mut rep = report::compactification(&s, &c);
            if out.is_none() {
                rep += "\n";
                rep += &text;
            }
            Outcome::ok(rep)
        }
        Command::Metric { file, out } => {
            let (text, _) = report::metric(&load(file)?)?;
            write_to(out, &text)?;
            Outcome::ok(text)
        }
        Command::Limit { curve, file } => {
            let s = load(file)?;
            let g: Curve = curve.parse()?;
            Outcome::ok(report::limit(&s, &g))
        }
        Command::Components { file } => Outcome::ok(report::components(&load(file)?)?),
        Command::TwoToOne { file } => Outcome::ok(report::two_to_one(&load(file)?)?),
        Command::Example { name, out } => {
            let text = format::serialize(&zoo::example(name)?);
            write_to(out, &text)?;
            Outcome::ok(if out.is_some() { String::new() } else { text })
        }
        Command::Fuzz { seed, count } => {
            let mut text = String::new();
            for f in fuzz::fuzz_generate(*seed, *count) {
                text += if f.valid { "# valid\n" } else { "# mutant\n" };
                text += &format::serialize(&f.space);
                text += "\n";
            }
            Outcome::ok(text)
        }
    })
}

/// Parses `argv` (including the program name) and runs it.
pub fn run_command<I, T>(argv: I, color: Color) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli.command, color),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}
