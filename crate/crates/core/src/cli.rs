//! Command-line front end: parse, validate, then analyze, normalize, list
//! keys or just check.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::classify::ClassificationMode;
use crate::completeness::schema_nc_with_cap;
use crate::dsl::{parse_document, ParsedDocument, SourceDocument};
use crate::error::Error;
use crate::fd::{candidate_keys, DEFAULT_KEY_CAP, MAX_KEY_CAP};
use crate::model::{validate_schema, ValidationReport};
use crate::report::{emit_report, Format, Report};
use crate::transform::{normalize_to_bcnf, SplitNames, TransformOptions};

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const PARSE: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const CAPACITY: i32 = 3;
    pub const USAGE: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "normcomp", version, about = "Normal-form and normalization-completeness analysis for relational schemas")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form, preventing dependencies and NC score per relation.
    Analyze(CommonArgs),
    /// Decompose until every relation is in BCNF, reporting NC per step.
    Normalize {
        #[command(flatten)]
        common: CommonArgs,
        /// Print every intermediate schema in DSL form.
        #[arg(long)]
        trace: bool,
        /// Relation names for splits (`FD6 = Property, StaffInspection` per line).
        #[arg(long, value_name = "FILE")]
        names: Option<PathBuf>,
    },
    /// Candidate keys per relation.
    Keys(CommonArgs),
    /// Parse and validate only.
    Check(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Schema file; reads standard input when omitted.
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "paper")]
    pub mode: ClassificationMode,
    #[arg(long, default_value = "text")]
    pub format: Format,
    /// Widest relation allowed for candidate-key search.
    #[arg(long, default_value_t = DEFAULT_KEY_CAP, value_parser = parse_key_cap)]
    pub key_cap: usize,
}

fn parse_key_cap(s: &str) -> Result<usize, String> {
    let cap: usize = s.parse().map_err(|_| format!("`{s}` is not a positive integer"))?;
    if (1..=MAX_KEY_CAP).contains(&cap) {
        Ok(cap)
    } else {
        Err(format!("key cap must be between 1 and {MAX_KEY_CAP}"))
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn out(&mut self, text: &str) {
        let _ = self.stdout.write_all(text.as_bytes());
    }

    fn err(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.stderr, "{}", line.as_ref());
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// process exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut io = Io { stdin, stdout, stderr };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    io.out(&rendered);
                    exit::SUCCESS
                }
                _ => {
                    let _ = io.stderr.write_all(rendered.as_bytes());
                    exit::USAGE
                }
            };
        }
    };
    execute(cli, &mut io)
}

fn read_input(path: &Option<PathBuf>, io: &mut Io<'_>) -> Result<SourceDocument, i32> {
    match path {
        Some(p) => match std::fs::read(p) {
            Ok(bytes) => match String::from_utf8(bytes) {
                Ok(text) => Ok(SourceDocument::new(text, p.display().to_string())),
                Err(_) => {
                    io.err(format!("{}: error: input is not valid UTF-8", p.display()));
                    Err(exit::PARSE)
                }
            },
            Err(e) => {
                io.err(format!("{}: error: {e}", p.display()));
                Err(exit::USAGE)
            }
        },
        None => {
            let mut bytes = Vec::new();
            if let Err(e) = io.stdin.read_to_end(&mut bytes) {
                io.err(format!("<stdin>: error: {e}"));
                return Err(exit::USAGE);
            }
            match String::from_utf8(bytes) {
                Ok(text) => Ok(SourceDocument::new(text, "<stdin>")),
                Err(_) => {
                    io.err("<stdin>: error: input is not valid UTF-8");
                    Err(exit::PARSE)
                }
            }
        }
    }
}

fn load(common: &CommonArgs, io: &mut Io<'_>) -> Result<(SourceDocument, ParsedDocument, ValidationReport), i32> {
    let doc = read_input(&common.input, io)?;
    let parsed = match parse_document(&doc) {
        Ok(parsed) => parsed,
        Err(diagnostics) => {
            for d in diagnostics {
                io.err(d.render(&doc.provenance));
            }
            return Err(exit::PARSE);
        }
    };
    let validation = validate_schema(&parsed.schema);
    for v in &validation.violations {
        let line = parsed.source_map.line_of(&v.subject).unwrap_or(1);
        io.err(format!("{}:{line}:1: {v}", doc.provenance));
    }
    Ok((doc, parsed, validation))
}

fn error_status(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => exit::CAPACITY,
        _ => exit::VALIDATION,
    }
}

fn execute(cli: Cli, io: &mut Io<'_>) -> i32 {
    let common = match &cli.command {
        Command::Analyze(c) | Command::Keys(c) | Command::Check(c) => c,
        Command::Normalize { common, .. } => common,
    };
    let (doc, parsed, validation) = match load(common, io) {
        Ok(loaded) => loaded,
        Err(status) => return status,
    };
    let schema = &parsed.schema;

    if let Command::Check(c) = &cli.command {
        io.out(&emit_report(Report::Check { schema, validation: &validation }, c.format));
        return if validation.is_ok() { exit::SUCCESS } else { exit::VALIDATION };
    }
    if !validation.is_ok() {
        return exit::VALIDATION;
    }

    let result: Result<String, Error> = match &cli.command {
        Command::Analyze(c) => schema_nc_with_cap(schema, c.mode, c.key_cap).map(|nc| {
            emit_report(
                Report::Nc {
                    schema,
                    mode: c.mode,
                    nc: &nc,
                },
                c.format,
            )
        }),
        Command::Keys(c) => schema
            .relations()
            .iter()
            .map(|r| candidate_keys(r, schema.fds(), c.key_cap).map(|k| (r.name().to_string(), k)))
            .collect::<Result<Vec<_>, _>>()
            .map(|keys| emit_report(Report::Keys { schema, keys: &keys }, c.format)),
        Command::Normalize { common: c, trace, names } => {
            let names = match names {
                None => SplitNames::new(),
                Some(path) => match std::fs::read_to_string(path) {
                    Ok(text) => match SplitNames::parse(&text) {
                        Ok(names) => names,
                        Err(diagnostics) => {
                            for d in diagnostics {
                                io.err(d.render(&path.display().to_string()));
                            }
                            return exit::PARSE;
                        }
                    },
                    Err(e) => {
                        io.err(format!("{}: error: {e}", path.display()));
                        return exit::USAGE;
                    }
                },
            };
            let opts = TransformOptions {
                mode: c.mode,
                key_cap: c.key_cap,
                names,
            };
            normalize_to_bcnf(schema, &opts).map(|t| {
                if !t.lost_dependencies.is_empty() {
                    io.err(format!(
                        "{}: warning: dependencies not preserved by decomposition: {}",
                        doc.provenance,
                        t.lost_dependencies.join(", ")
                    ));
                }
                emit_report(
                    Report::Trace {
                        mode: c.mode,
                        trace: &t,
                        show_schemas: *trace,
                    },
                    c.format,
                )
            })
        }
        Command::Check(_) => unreachable!("handled above"),
    };

    match result {
        Ok(text) => {
            io.out(&text);
            exit::SUCCESS
        }
        Err(e) => {
            io.err(format!("{}: error: {e}", doc.provenance));
            error_status(&e)
        }
    }
}

/// Convenience for tests: runs with in-memory streams.
pub fn run_captured<I, T>(args: I, stdin: &str) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut input = stdin.as_bytes();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let status = run(args, &mut input, &mut out, &mut err);
    (
        status,
        String::from_utf8(out).expect("utf-8 output"),
        String::from_utf8(err).expect("utf-8 diagnostics"),
    )
}
