//! Argument parsing and command dispatch.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use jlfiltration_core::filtration::{build_inner_filtration, build_split_partition, correspondence_report};
use jlfiltration_core::segments::DEFAULT_ENUMERATION_BOUND;
use jlfiltration_core::support::{Side, Support};
use jlfiltration_core::transfer::{invert_support, transfer_support};
use jlfiltration_core::triples::enumerate_triples;

use crate::error::CliError;
use crate::problem::ProblemFile;
use crate::report::{factors, orbit, Document};
use crate::verify::{run_verify, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "jlfiltration", version, about = "Filtrations of automorphic forms on inner forms of GL(n) and their split transfer")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Problem file; read from stdin when absent.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Largest support handed to the triple enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_BOUND)]
    pub bound: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Inner,
    Split,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the problem file and print its normalized support.
    Validate,
    /// Transfer an inner support to the split side, or invert a split one.
    Transfer,
    /// List the triple orbits on one side.
    Triples {
        #[arg(long, value_enum, default_value_t = SideArg::Inner)]
        side: SideArg,
    },
    /// Print the filtration on one side.
    Filtration {
        #[arg(long, value_enum, default_value_t = SideArg::Inner)]
        side: SideArg,
        /// On the split side, split mixed image layers.
        #[arg(long)]
        refined: bool,
    },
    /// Match inner quotients with refined split quotients.
    Correspond,
    /// Run every oracle suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        /// Randomized cases for each single-property suite.
        #[arg(long, default_value_t = 500)]
        cases: usize,
    },
}

/// Parses `args` (program name first), executes, and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    let result = execute(&cli, stdin).and_then(|doc| {
        let text = match cli.format {
            Format::Json => doc.to_json(),
            Format::Text => doc.to_text(),
        };
        out.write_all(text.as_bytes())?;
        match &doc.verify {
            Some(v) if !v.all_passed => {
                let names: Vec<&str> = v.failures().iter().map(|s| s.name.as_str()).collect();
                Err(CliError::Verification(format!("suites failed: {}", names.join(", "))))
            }
            _ => Ok(()),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            match cli.format {
                Format::Json if !matches!(e, CliError::Verification(_)) => {
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&e.record()).unwrap_or_default());
                }
                _ => {
                    let _ = writeln!(err, "error [{}]: {e}", e.kind());
                }
            }
            1
        }
    }
}

fn read_problem(cli: &Cli, stdin: &mut dyn Read) -> Result<ProblemFile, CliError> {
    let text = match &cli.input {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            s
        }
    };
    ProblemFile::parse(&text)
}

/// The support on the requested side, transferring or inverting as needed.
fn on_side(s: &Support, side: SideArg) -> Result<Support, CliError> {
    Ok(match (s.side(), side) {
        (Side::Inner, SideArg::Inner) => s.normalize()?,
        (Side::Inner, SideArg::Split) => transfer_support(s)?.sigma,
        (Side::Split, SideArg::Inner) => invert_support(s)?,
        (Side::Split, SideArg::Split) => s.normalize()?,
    })
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Document, CliError> {
    if let Command::Verify { seed, max_size, cases } = cli.command {
        let mut doc = Document::new("verify");
        doc.verify = Some(run_verify(&VerifyConfig { seed, max_size, cases }));
        return Ok(doc);
    }
    let file = read_problem(cli, stdin)?;
    let support = file.support()?;
    let table = support.table().clone();
    let bound = cli.bound;
    let mut doc = match &cli.command {
        Command::Validate => {
            let n = support.normalize()?;
            let mut doc = Document::new("validate");
            doc.side = Some(n.side().as_str().into());
            doc.support = Some(factors(&n));
            doc.ambient_rank = Some(n.ambient_rank());
            doc
        }
        Command::Transfer => {
            let inner = on_side(&support, SideArg::Inner)?;
            let t = transfer_support(&inner)?;
            let mut doc = Document::new("transfer");
            doc.side = Some(support.side().as_str().into());
            doc.inner_support = Some(factors(&inner));
            doc.sigma = Some(factors(&t.sigma));
            doc.sigma_normalized = Some(factors(&t.normalized_sigma()));
            doc.q_partition = Some(t.q_partition);
            doc
        }
        Command::Triples { side } => {
            let s = on_side(&support, *side)?;
            let mut doc = Document::new("triples");
            doc.side = Some(s.side().as_str().into());
            doc.support = Some(factors(&s));
            doc.triples = Some(enumerate_triples(&s, bound)?.iter().map(|o| orbit(&table, o)).collect());
            doc
        }
        Command::Filtration { side: SideArg::Inner, .. } => {
            let inner = on_side(&support, SideArg::Inner)?;
            let mut doc = Document::new("filtration").with_filtration(&table, &build_inner_filtration(&inner, bound)?);
            doc.support = Some(factors(&inner));
            doc
        }
        Command::Filtration { side: SideArg::Split, refined } => {
            let sigma = on_side(&support, SideArg::Split)?;
            let part = build_split_partition(&sigma, bound)?;
            let report = if *refined { part.refined_filtration()? } else { part.naive_filtration() };
            let mut doc = Document::new("filtration").with_filtration(&table, &report);
            doc.support = Some(factors(&sigma));
            doc.q_partition = Some(part.q_partition.clone());
            doc
        }
        Command::Correspond => {
            let inner = on_side(&support, SideArg::Inner)?;
            let t = transfer_support(&inner)?;
            let mut doc = Document::new("correspond").with_correspondence(&table, &correspondence_report(&inner, bound)?);
            doc.inner_support = Some(factors(&inner));
            doc.sigma = Some(factors(&t.sigma));
            doc.q_partition = Some(t.q_partition);
            doc
        }
        Command::Verify { .. } => unreachable!("handled above"),
    };
    doc.degree_d = Some(table.degree());
    Ok(doc)
}
