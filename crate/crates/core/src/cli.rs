//! Batch command-line front end. [`run`] is the whole program minus process
//! setup, so it can be driven from tests with in-memory streams.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checks::{run_all_checks, CheckConfig};
use crate::diagnostics::{self, Diagnostic, Severity};
use crate::fixtures;
use crate::hierarchy::render_class_tree;
use crate::ingest::{export_turtle, import_turtle, parse_ecosystem_document, serialize_namespaces, Dialect};
use crate::instances::{parse_instance_graph, validate_instances, InstanceError};
use crate::model::{diff_namespaces, ChangeSet, Ecosystem, Level, Ref, ResolvedIndex};
use crate::profiles::{build_profile_closure, check_profile, parse_profile, serialize_profile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ontoeco", version, about = "Lint, export and validate layered ontology ecosystems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the foundational checks and report diagnostics
    Lint {
        #[command(flatten)]
        sources: Sources,
        /// JSON check configuration
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Treat warnings as errors for the exit status
        #[arg(long)]
        strict: bool,
    },
    /// Print the class tree
    Tree {
        #[command(flatten)]
        sources: Sources,
        /// Namespaces to include (default: all)
        #[arg(long, value_delimiter = ',')]
        ns: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Export namespaces as Turtle
    Export {
        #[command(flatten)]
        sources: Sources,
        #[arg(long, value_enum)]
        dialect: DialectArg,
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<String>,
        /// Output file (`-` for standard output)
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Import a Turtle file as one namespace
    Import {
        file: PathBuf,
        #[arg(long)]
        prefix: String,
        #[arg(long, value_parser = parse_level)]
        level: Level,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Build or check application profiles
    Profile {
        #[command(subcommand)]
        action: ProfileCommand,
    },
    /// Validate an instance graph against a profile
    Validate {
        graph: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        sources: Sources,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        strict: bool,
    },
    /// Compare two versions of one namespace
    Diff {
        old: PathBuf,
        new: PathBuf,
        #[arg(long)]
        ns: String,
    },
}

#[derive(Subcommand, Debug)]
enum ProfileCommand {
    /// Build the closure of a seed set
    Build {
        #[command(flatten)]
        sources: Sources,
        #[arg(long, value_delimiter = ',')]
        seed: Vec<String>,
        #[arg(long)]
        name: String,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Check a profile against an ecosystem
    Check {
        profile: PathBuf,
        #[command(flatten)]
        sources: Sources,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct Sources {
    /// Ecosystem documents (`.onto.json`)
    files: Vec<PathBuf>,
    /// Built-in fixture to load (repeatable): all, crm-core, sdhss, sdh-so, pcp, legacy-crm
    #[arg(long)]
    builtin: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DialectArg {
    Rdfs,
    Owl,
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse().map_err(|e: crate::model::EnumParseError| e.to_string())
}

/// A failure that ends the command with exit status 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load(sources: &Sources) -> Result<(Ecosystem, ResolvedIndex), Failure> {
    if sources.files.is_empty() && sources.builtin.is_empty() {
        return Err(Failure("no ecosystem given (pass documents or --builtin NAME)".into()));
    }
    let mut fragments = Vec::new();
    for name in &sources.builtin {
        fragments.extend(fixtures::load_builtin(name)?);
    }
    for path in &sources.files {
        let eco = parse_ecosystem_document(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        fragments.extend(eco.into_namespaces());
    }
    let eco = Ecosystem::from_fragments(fragments)?;
    let index = eco.resolve()?;
    Ok((eco, index))
}

fn write_output(path: &Path, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    if path == Path::new("-") {
        out.write_all(text.as_bytes())?;
        return Ok(());
    }
    fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

struct Streams<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    color: bool,
}

impl Streams<'_> {
    fn report(&mut self, findings: &[Diagnostic], format: Format) -> Result<(), Failure> {
        match format {
            Format::Json => self.out.write_all(diagnostics::render_json(findings).as_bytes())?,
            Format::Text => {
                for d in findings {
                    let line = d.to_string();
                    if self.color {
                        let code = match d.severity {
                            Severity::Error => "31",
                            Severity::Warning => "33",
                            Severity::Info => "36",
                        };
                        writeln!(self.err, "\x1b[{code}m{line}\x1b[0m")?;
                    } else {
                        writeln!(self.err, "{line}")?;
                    }
                }
                writeln!(
                    self.err,
                    "{} error(s), {} warning(s), {} info",
                    diagnostics::count(findings, Severity::Error),
                    diagnostics::count(findings, Severity::Warning),
                    diagnostics::count(findings, Severity::Info),
                )?;
            }
        }
        Ok(())
    }
}

fn status(findings: &[Diagnostic], strict: bool) -> i32 {
    let blocking = diagnostics::error_count(findings)
        + if strict { diagnostics::count(findings, Severity::Warning) } else { 0 };
    if blocking > 0 {
        EXIT_FINDINGS
    } else {
        EXIT_OK
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status: 0 clean, 1 error findings, 2 usage or input failure.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = !e.use_stderr();
            let text = e.render().to_string();
            let _ = if informational { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if informational { EXIT_OK } else { EXIT_FAILURE };
        }
    };
    let mut io = Streams { out, err, color };
    match execute(cli.command, &mut io) {
        Ok(code) => code,
        Err(Failure(message)) => {
            let _ = writeln!(io.err, "error: {message}");
            EXIT_FAILURE
        }
    }
}

fn execute(command: Command, io: &mut Streams<'_>) -> Result<i32, Failure> {
    match command {
        Command::Lint { sources, config, format, strict } => {
            let config = match config {
                Some(path) => CheckConfig::from_json(&String::from_utf8_lossy(&read(&path)?))?,
                None => CheckConfig::default(),
            };
            let (eco, index) = load(&sources)?;
            let findings = run_all_checks(&eco, &index, &config)?;
            io.report(&findings, format)?;
            Ok(status(&findings, strict))
        }
        Command::Tree { sources, ns, format } => {
            let (_, index) = load(&sources)?;
            let selection = if ns.is_empty() { index.namespaces().map(|m| m.prefix.clone()).collect() } else { ns };
            let tree = render_class_tree(&index, &selection)?;
            let text = match format {
                Format::Text => tree.to_text(),
                Format::Json => tree.to_json(),
            };
            io.out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Export { sources, dialect, ns, output } => {
            let (_, index) = load(&sources)?;
            let dialect = match dialect {
                DialectArg::Rdfs => Dialect::Rdfs,
                DialectArg::Owl => Dialect::OwlDl,
            };
            let ttl = export_turtle(&index, dialect, &ns)?;
            write_output(&output, &ttl, io.out)?;
            Ok(EXIT_OK)
        }
        Command::Import { file, prefix, level, output } => {
            let bytes = read(&file)?;
            let text = String::from_utf8(bytes).map_err(|_| Failure(format!("{}: not UTF-8", file.display())))?;
            let imported = import_turtle(&text, &prefix, level).map_err(|e| Failure(format!("{}: {e}", file.display())))?;
            for triple in &imported.skipped {
                writeln!(io.err, "skipped: {triple}")?;
            }
            write_output(&output, &serialize_namespaces(&[imported.namespace]), io.out)?;
            Ok(EXIT_OK)
        }
        Command::Profile { action: ProfileCommand::Build { sources, seed, name, output } } => {
            let (_, index) = load(&sources)?;
            let seeds = seed.iter().map(|s| s.parse::<Ref>()).collect::<Result<Vec<_>, _>>()?;
            let profile = build_profile_closure(&index, &seeds, &name)?;
            write_output(&output, &serialize_profile(&profile), io.out)?;
            Ok(EXIT_OK)
        }
        Command::Profile { action: ProfileCommand::Check { profile, sources, format } } => {
            let profile = parse_profile(&read(&profile)?)?;
            let (_, index) = load(&sources)?;
            let findings = check_profile(&index, &profile);
            io.report(&findings, format)?;
            Ok(status(&findings, false))
        }
        Command::Validate { graph, profile, sources, format, strict } => {
            let graph_doc = parse_instance_graph(&read(&graph)?).map_err(|e| Failure(format!("{}: {e}", graph.display())))?;
            let profile = parse_profile(&read(&profile)?)?;
            let (_, index) = load(&sources)?;
            match validate_instances(&index, &profile, &graph_doc) {
                Ok(findings) => {
                    io.report(&findings, format)?;
                    Ok(status(&findings, strict))
                }
                Err(InstanceError::ProfileInvalid(findings)) => {
                    for d in &findings {
                        writeln!(io.err, "{d}")?;
                    }
                    Err(Failure("profile is invalid; fix it before validating instances".into()))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Diff { old, new, ns } => {
            let pick = |path: &Path| -> Result<crate::model::Namespace, Failure> {
                let eco = parse_ecosystem_document(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                eco.namespace(&ns)
                    .cloned()
                    .ok_or_else(|| Failure(format!("{}: no namespace `{ns}`", path.display())))
            };
            let changes = diff_namespaces(&pick(&old)?, &pick(&new)?)?;
            io.out.write_all(render_changeset(&changes).as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

/// Line-oriented summary: `+` added, `-` removed, `~` modified.
pub fn render_changeset(cs: &ChangeSet) -> String {
    let mut lines = vec![format!("namespace {} {} -> {}", cs.prefix, cs.old_version, cs.new_version)];
    if let Some((a, b)) = &cs.base_iri {
        lines.push(format!("~ base_iri {a} -> {b}"));
    }
    if let Some((a, b)) = &cs.level {
        lines.push(format!("~ level {a} -> {b}"));
    }
    lines.extend(cs.dependencies_added.iter().map(|d| format!("+ dependency {} {}", d.prefix, d.version)));
    lines.extend(cs.dependencies_removed.iter().map(|d| format!("- dependency {} {}", d.prefix, d.version)));
    lines.extend(cs.added_classes.iter().map(|c| format!("+ class {} {}", c.id, c.label)));
    lines.extend(cs.removed_classes.iter().map(|c| format!("- class {} {}", c.id, c.label)));
    lines.extend(cs.modified_classes.iter().map(|c| format!("~ class {}", c.after.id)));
    lines.extend(cs.added_properties.iter().map(|p| format!("+ property {} {}", p.id, p.label)));
    lines.extend(cs.removed_properties.iter().map(|p| format!("- property {} {}", p.id, p.label)));
    lines.extend(cs.modified_properties.iter().map(|p| format!("~ property {}", p.after.id)));
    lines.extend(cs.superclass_edges_added.iter().map(|(a, b)| format!("+ subclass {a} < {b}")));
    lines.extend(cs.superclass_edges_removed.iter().map(|(a, b)| format!("- subclass {a} < {b}")));
    lines.extend(cs.superproperty_edges_added.iter().map(|(a, b)| format!("+ subproperty {a} < {b}")));
    lines.extend(cs.superproperty_edges_removed.iter().map(|(a, b)| format!("- subproperty {a} < {b}")));
    lines.extend(cs.alignments_added.iter().map(|a| format!("+ alignment {} < {}", a.class, a.superclass)));
    lines.extend(cs.alignments_removed.iter().map(|a| format!("- alignment {} < {}", a.class, a.superclass)));
    lines.extend(
        cs.text_changes
            .iter()
            .map(|t| format!("~ {} {}: {:?} -> {:?}", t.field.as_str(), t.target, t.old, t.new)),
    );
    let mut out = lines.join("\n");
    out.push('\n');
    out
}
