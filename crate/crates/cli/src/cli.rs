//! Command-line front end. `run` takes explicit streams so tests can drive it.

use std::fs;
use std::io::{BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use chunksel_core::decision::Criterion;
use chunksel_core::prioritization::{SelectionReport, ThresholdSchedule, DEFAULT_REQUIRED_SEPARATION};
use chunksel_core::typology::DomainKind;
use chunksel_core::weighting::{
    Answer, ElicitationSession, Question, Skip, Transcript, WeightVector, WeightingTechnique,
};
use chunksel_core::{
    example, run_selection, Characteristic, MethodChunk, ProjectProfile, Repository, SelectionRequest, Technique,
    Typology, Value,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "chunksel", version, about = "Select method chunks for a project situation")]
pub struct Cli {
    /// Repository file; the bundled security example when absent.
    #[arg(long, global = true, env = "CHUNKSEL_REPO")]
    pub repo: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Typology operations.
    #[command(subcommand)]
    Typology(TypologyCommand),
    /// Method base operations.
    #[command(subcommand)]
    Repo(RepoCommand),
    /// Project profile operations.
    #[command(subcommand)]
    Profile(ProfileCommand),
    /// Rank the repository's chunks.
    Select(SelectArgs),
    /// Render a saved report.
    Report(ReportArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Subcommand)]
pub enum TypologyCommand {
    Export {
        /// Export the repository's typology, extensions included.
        #[arg(long)]
        from_repo: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RepoCommand {
    /// Create a repository file over the built-in typology.
    Init {
        path: PathBuf,
        /// Write the bundled security example instead of an empty base.
        #[arg(long)]
        example: bool,
        #[arg(long)]
        force: bool,
    },
    /// Add a chunk (JSON file) to a repository file.
    Add {
        path: PathBuf,
        chunk: PathBuf,
    },
    List,
    Validate {
        path: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum ProfileCommand {
    New {
        path: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Set one characteristic; the value is checked against the typology.
    Set {
        path: PathBuf,
        characteristic: String,
        /// Label, number, or comma-separated labels for multi-select.
        value: String,
        #[arg(long)]
        critical: bool,
    },
    Show {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TechniqueArg {
    Addition,
    Wsum,
    Electre,
    Auto,
}

impl From<TechniqueArg> for Technique {
    fn from(t: TechniqueArg) -> Self {
        match t {
            TechniqueArg::Addition => Technique::Addition,
            TechniqueArg::Wsum => Technique::Wsum,
            TechniqueArg::Electre => Technique::Electre,
            TechniqueArg::Auto => Technique::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ElicitArg {
    Smart,
    Swing,
    Tradeoff,
}

impl From<ElicitArg> for WeightingTechnique {
    fn from(e: ElicitArg) -> Self {
        match e {
            ElicitArg::Smart => WeightingTechnique::Smart,
            ElicitArg::Swing => WeightingTechnique::Swing,
            ElicitArg::Tradeoff => WeightingTechnique::Tradeoff,
        }
    }
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long, value_enum, default_value = "auto")]
    pub technique: TechniqueArg,
    /// Criteria file; the three quantified example criteria when absent.
    #[arg(long)]
    pub criteria: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["elicit", "transcript"])]
    pub weights: Option<PathBuf>,
    /// Ask weighting questions on the terminal.
    #[arg(long, value_enum, conflicts_with = "transcript")]
    pub elicit: Option<ElicitArg>,
    /// Replay a saved elicitation transcript.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    #[arg(long)]
    pub save_transcript: Option<PathBuf>,
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Largest acceptable size of the top group.
    #[arg(long, default_value_t = DEFAULT_REQUIRED_SEPARATION)]
    pub separation: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Score levels listed as missing (e.g. "none") as ordinary bottom levels.
    #[arg(long)]
    pub rank_missing_levels: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "CHUNKSEL_PORT", default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: std::net::IpAddr,
    /// Directory of static files served under `/`.
    #[arg(long)]
    pub assets: Option<PathBuf>,
}

pub struct Io<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit status.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(io.stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(io.stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli, io) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, io: &mut Io<'_>) -> CliResult<()> {
    match cli.command {
        Command::Typology(TypologyCommand::Export { from_repo, out }) => {
            let typology = if from_repo {
                load_repo(cli.repo.as_deref())?.typology().clone()
            } else {
                Typology::builtin()
            };
            emit(io, out.as_deref(), &typology.to_json())
        }
        Command::Repo(cmd) => repo_command(cmd, cli.repo.as_deref(), io),
        Command::Profile(cmd) => profile_command(cmd, cli.repo.as_deref(), io),
        Command::Select(args) => {
            let repo = load_repo(cli.repo.as_deref())?;
            let report = select(&repo, &args, io)?;
            let text = match args.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            emit(io, args.out.as_deref(), &text)
        }
        Command::Report(args) => {
            let text = read_text(&args.input)?;
            let report = SelectionReport::from_json(&text).map_err(|source| CliError::File {
                path: args.input.clone(),
                source,
            })?;
            let text = match args.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            emit(io, None, &text)
        }
        Command::Serve(args) => {
            let repo = load_repo(cli.repo.as_deref())?;
            let addr = SocketAddr::new(args.host, args.port);
            let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Internal(e.to_string()))?;
            let _ = writeln!(io.stderr, "listening on http://{addr}");
            runtime
                .block_on(crate::http::serve(addr, repo, args.assets))
                .map_err(|e| CliError::Internal(e.to_string()))
        }
    }
}

fn repo_command(cmd: RepoCommand, repo_path: Option<&Path>, io: &mut Io<'_>) -> CliResult<()> {
    match cmd {
        RepoCommand::Init { path, example, force } => {
            if path.exists() && !force {
                return Err(CliError::Usage(format!(
                    "{} exists; pass --force to overwrite",
                    path.display()
                )));
            }
            let repo = if example {
                example::repository()
            } else {
                Repository::new(Typology::builtin())
            };
            write_text(&path, &repo.to_json())
        }
        RepoCommand::Add { path, chunk } => {
            let mut repo = load_repo_file(&path)?;
            let chunk: MethodChunk = read_json(&chunk)?;
            let id = chunk.id.clone();
            repo.add_chunk(chunk)?;
            write_text(&path, &repo.to_json())?;
            let _ = writeln!(io.stdout, "added {id} ({} chunks)", repo.len());
            Ok(())
        }
        RepoCommand::List => {
            let repo = load_repo(repo_path)?;
            for chunk in repo.chunks() {
                let _ = writeln!(
                    io.stdout,
                    "{}\t{}\t{} valuations",
                    chunk.id,
                    chunk.name,
                    chunk.valuations.len()
                );
            }
            Ok(())
        }
        RepoCommand::Validate { path } => {
            let repo = load_repo_file(&path)?;
            let _ = writeln!(
                io.stdout,
                "{}: {} chunks over {} characteristics",
                path.display(),
                repo.len(),
                repo.typology().len()
            );
            Ok(())
        }
    }
}

fn profile_command(cmd: ProfileCommand, repo_path: Option<&Path>, io: &mut Io<'_>) -> CliResult<()> {
    match cmd {
        ProfileCommand::New { path, force } => {
            if path.exists() && !force {
                return Err(CliError::Usage(format!(
                    "{} exists; pass --force to overwrite",
                    path.display()
                )));
            }
            write_text(&path, &to_pretty(&ProjectProfile::new()))
        }
        ProfileCommand::Set {
            path,
            characteristic,
            value,
            critical,
        } => {
            let repo = load_repo(repo_path)?;
            let mut profile: ProjectProfile = read_json(&path)?;
            let c = repo
                .typology()
                .get(&characteristic)
                .ok_or_else(|| chunksel_core::Error::UnknownCharacteristic(characteristic.clone()))?;
            profile.set(characteristic, parse_value(c, &value), critical);
            repo.typology().validate_profile(&profile).into_result()?;
            write_text(&path, &to_pretty(&profile))
        }
        ProfileCommand::Show { path } => {
            let profile: ProjectProfile = read_json(&path)?;
            for (id, entry) in &profile.entries {
                let flag = if entry.critical { " (critical)" } else { "" };
                let _ = writeln!(io.stdout, "{id} = {}{flag}", entry.value);
            }
            Ok(())
        }
    }
}

/// Reads a command-line value according to the characteristic's domain.
pub fn parse_value(c: &Characteristic, raw: &str) -> Value {
    if raw == chunksel_core::value::MISSING_MARKER {
        return Value::Missing;
    }
    match c.domain.kind {
        DomainKind::Numeric => raw.parse().map(Value::Number).unwrap_or_else(|_| Value::label(raw)),
        _ if c.domain.multi_select && raw.contains(',') => {
            Value::Labels(raw.split(',').map(|s| s.trim().to_owned()).collect())
        }
        _ => Value::label(raw),
    }
}

/// Builds the selection request from flags, running or replaying weight
/// elicitation when asked.
pub fn build_request(args: &SelectArgs, io: &mut Io<'_>) -> CliResult<SelectionRequest> {
    let mut criteria: Vec<Criterion> = match &args.criteria {
        Some(p) => read_json(p)?,
        None => example::quantified_criteria(),
    };
    if args.rank_missing_levels {
        for c in &mut criteria {
            c.missing_levels.clear();
        }
    }
    let ids: Vec<String> = criteria.iter().map(|c| c.id.clone()).collect();

    let session = match (&args.elicit, &args.transcript) {
        (Some(technique), _) => Some(elicit(WeightingTechnique::from(*technique), &ids, io)?),
        (None, Some(path)) => {
            let transcript: Transcript = read_json(path)?;
            Some(
                ElicitationSession::replay(&transcript).map_err(|source| CliError::File {
                    path: path.clone(),
                    source,
                })?,
            )
        }
        (None, None) => None,
    };
    if let Some(path) = &args.save_transcript {
        let s = session
            .as_ref()
            .ok_or_else(|| CliError::Usage("--save-transcript needs --elicit or --transcript".into()))?;
        write_text(path, &to_pretty(s.transcript()))?;
    }

    let weights: Option<WeightVector> = match (&args.weights, &session) {
        (Some(p), _) => Some(read_json(p)?),
        (None, Some(s)) => Some(
            s.weights()
                .cloned()
                .ok_or_else(|| CliError::Usage("transcript is incomplete".into()))?,
        ),
        (None, None) => None,
    };
    let mut req = SelectionRequest::new(criteria, args.technique.into());
    req.weights = weights;
    req.schedule = args
        .schedule
        .as_deref()
        .map(read_json::<ThresholdSchedule>)
        .transpose()?;
    req.profile = args.profile.as_deref().map(read_json::<ProjectProfile>).transpose()?;
    req.required_separation = args.separation;
    Ok(req)
}

pub fn select(repo: &Repository, args: &SelectArgs, io: &mut Io<'_>) -> CliResult<SelectionReport> {
    let req = build_request(args, io)?;
    Ok(run_selection(repo, &req)?)
}

/// Interactive question loop: prompts on stderr, answers from stdin.
/// Malformed answers are reported and the question is asked again.
fn elicit(technique: WeightingTechnique, criteria: &[String], io: &mut Io<'_>) -> CliResult<ElicitationSession> {
    let mut session = ElicitationSession::start(technique, criteria)?;
    while let Some(question) = session.pending().cloned() {
        let _ = write!(io.stderr, "{question}\n> ");
        let _ = io.stderr.flush();
        let mut line = String::new();
        let read = io
            .stdin
            .read_line(&mut line)
            .map_err(|e| CliError::Internal(format!("reading answer: {e}")))?;
        if read == 0 {
            return Err(CliError::Usage("input ended before elicitation finished".into()));
        }
        let answer = match parse_answer(&question, line.trim()) {
            Some(a) => a,
            None => {
                let _ = writeln!(io.stderr, "could not read `{}`; try again", line.trim());
                continue;
            }
        };
        match session.answer(answer) {
            Ok(next) => session = next,
            Err(e) => {
                let _ = writeln!(io.stderr, "{e}; try again");
            }
        }
    }
    if let Some(report) = session.consistency() {
        if !report.consistent {
            let _ = writeln!(
                io.stderr,
                "warning: trade-off judgments are inconsistent (largest log residual {:.3})",
                report.max_abs_residual
            );
        }
    }
    Ok(session)
}

pub fn parse_answer(question: &Question, text: &str) -> Option<Answer> {
    if text.eq_ignore_ascii_case("skip") {
        return Some(Answer::Skip(Skip::Skip));
    }
    match question {
        Question::ImprovementOrder { .. } => Some(Answer::Order(
            text.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(str::to_owned)
                .collect(),
        )),
        _ => text.parse().ok().map(Answer::Value),
    }
}

fn load_repo(path: Option<&Path>) -> CliResult<Repository> {
    match path {
        Some(p) => load_repo_file(p),
        None => Ok(example::repository()),
    }
}

fn load_repo_file(path: &Path) -> CliResult<Repository> {
    Repository::from_json(&read_text(path)?).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::File {
        path: path.to_owned(),
        source: chunksel_core::Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    })
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

fn to_pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn emit(io: &mut Io<'_>, out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_text(p, text),
        None => io
            .stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(format!("writing output: {e}"))),
    }
}
