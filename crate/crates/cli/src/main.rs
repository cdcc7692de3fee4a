//! `cgg`: analyse coarse-grained games from the command line.
//!
//! Exit codes: 0 success, 1 bad input or failed analysis, 2 an equilibrium
//! selection is needed, 64 usage error.

mod profile_arg;

use std::fs;
use std::io::{self, IsTerminal, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use cgg_core::document::{parse_document, serialize_game, DocumentError, GameDocument};
use cgg_core::equilibrium::EquilibriumError;
use cgg_core::game::{CoarseGame, GameError, Perspective};
use cgg_core::perception::{differential_report, select_equilibrium, PerceptionError, RealizedOutcome, Selection, SolutionKind};
use cgg_core::rational::{parse_rational, ParseRationalError, Rational};
use cgg_core::repeated::{perspective_thresholds, RepeatedError, Roles};
use cgg_core::report::{self, OutputFormat, Report, SolveMode, Style};
use cgg_core::scenarios::{self, ScenarioError};

use profile_arg::{parse_profile, ProfileArg};

const EXIT_INPUT: u8 = 1;
const EXIT_SELECTION: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "cgg", version, about = "Coarse-grained game analysis in exact arithmetic")]
struct Cli {
    /// Output rendering.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    format: Format,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a game file.
    Validate {
        /// Game file; standard input when omitted or `-`.
        file: Option<PathBuf>,
    },
    /// Show one player's coarse view and perceived matrix.
    Transform {
        file: Option<PathBuf>,
        #[arg(long, value_name = "PLAYER")]
        perspective: String,
    },
    /// Find equilibria of the base matrix or a player's perceived matrix.
    Solve {
        file: Option<PathBuf>,
        /// A player name, or `base`.
        #[arg(long, value_name = "PLAYER|base", default_value = "base")]
        perspective: String,
        /// Only pure equilibria.
        #[arg(long, conflicts_with = "mixed")]
        pure: bool,
        /// Only mixed equilibria (two players).
        #[arg(long)]
        mixed: bool,
    },
    /// Check whose payoffs a player's partition flattens.
    Diagnose {
        file: Option<PathBuf>,
        #[arg(long, value_name = "PLAYER")]
        perspective: String,
    },
    /// Gain-loss differentials between expected and realized play.
    Differentials {
        file: Option<PathBuf>,
        /// `auto` to assemble it from each player's expectation, or a profile:
        /// comma-separated components, each a strategy name or
        /// colon-separated probabilities.
        #[arg(long, value_name = "PROFILE|auto", default_value = "auto")]
        realized: String,
        /// A player's expected equilibrium in its own matrix, as
        /// `PLAYER=PROFILE` or `PLAYER=#INDEX`. Repeat per player or
        /// separate with `;`.
        #[arg(long = "expectations", alias = "expectation", value_name = "PLAYER=PROFILE")]
        expectations: Vec<String>,
        /// The equilibrium expected in the base matrix.
        #[arg(long, value_name = "PROFILE")]
        base_expectation: Option<String>,
        /// Use mixed equilibria (two players) instead of pure ones.
        #[arg(long)]
        mixed: bool,
    },
    /// Critical discount factors for grim-trigger cooperation.
    Repeated {
        file: Option<PathBuf>,
        /// `COOPERATE,DEFECT` labels for both players; defaults to the
        /// file's roles.
        #[arg(long, value_name = "C,D")]
        roles: Option<String>,
        /// Report cooperation verdicts at this discount factor.
        #[arg(long, value_name = "RATIONAL")]
        delta: Option<String>,
    },
    /// Print a built-in example game as a game file.
    Scenario {
        /// Scenario name; `list` prints the available names.
        name: String,
        /// Write the game file to `<name>.json` instead of standard output.
        #[arg(long, conflicts_with = "check")]
        emit_file: bool,
        /// Re-derive the scenario's expected facts and report them.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error(transparent)]
    Perception(#[from] PerceptionError),
    #[error(transparent)]
    Repeated(#[from] RepeatedError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Perception(
                PerceptionError::AmbiguousSelection(_) | PerceptionError::MultipleBaseEquilibria(_),
            ) => EXIT_SELECTION,
            _ => EXIT_INPUT,
        }
    }
}

impl From<ParseRationalError> for CliError {
    fn from(e: ParseRationalError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("cgg: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("usage: cgg <validate|transform|solve|diagnose|differentials|repeated|scenario> [FILE] [OPTIONS]; see cgg --help");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn color_enabled(cli: &Cli) -> bool {
    if cli.out.is_some() || cli.format == Format::Machine {
        return false;
    }
    match std::env::var("CGG_COLOR").as_deref() {
        Ok("never") => false,
        _ => io::stdout().is_terminal(),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("cannot write output: {e}")))
        }
    }
}

fn read_input(file: &Option<PathBuf>) -> Result<GameDocument, CliError> {
    let text = match file {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| CliError::Io(format!("cannot read {}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    Ok(parse_document(&text)?)
}

fn player_index(cg: &CoarseGame, name: &str) -> Result<usize, CliError> {
    cg.base().player_index(name).map_err(|_| {
        CliError::Usage(format!(
            "unknown player {name:?}; players are {}",
            cg.base().players().join(", ")
        ))
    })
}

fn perspective(cg: &CoarseGame, name: &str) -> Result<Perspective, CliError> {
    if name == "base" {
        Ok(Perspective::Base)
    } else {
        player_index(cg, name).map(Perspective::Perceived)
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let style = Style { color: color_enabled(cli) };
    let format = match cli.format {
        Format::Human => OutputFormat::Human,
        Format::Machine => OutputFormat::Machine,
    };
    let report: Report = match &cli.command {
        Command::Validate { file } => report::validate_report(&read_input(file)?, style),
        Command::Transform { file, perspective } => {
            let doc = read_input(file)?;
            let k = player_index(&doc.game, perspective)?;
            report::transform_report(&doc.game, k, style)?
        }
        Command::Solve {
            file,
            perspective: p,
            pure,
            mixed,
        } => {
            let doc = read_input(file)?;
            let p = perspective(&doc.game, p)?;
            let mode = match (pure, mixed) {
                (true, _) => SolveMode { pure: true, mixed: false },
                (false, true) => SolveMode { pure: false, mixed: true },
                _ => SolveMode::default(),
            };
            report::solve_report(&doc.game, p, mode, style)?
        }
        Command::Diagnose { file, perspective } => {
            let doc = read_input(file)?;
            let k = player_index(&doc.game, perspective)?;
            report::diagnose_report(&doc.game, k, style)?
        }
        Command::Differentials {
            file,
            realized,
            expectations,
            base_expectation,
            mixed,
        } => {
            let doc = read_input(file)?;
            differentials(&doc.game, realized, expectations, base_expectation.as_deref(), *mixed, style)?
        }
        Command::Repeated { file, roles, delta } => {
            let doc = read_input(file)?;
            let g = doc.game.base();
            let roles = match (roles, &doc.roles) {
                (Some(r), _) => {
                    let (c, d) = r
                        .split_once(',')
                        .ok_or_else(|| CliError::Usage(format!("--roles expects COOPERATE,DEFECT, got {r:?}")))?;
                    Roles::shared(g, c.trim(), d.trim())?
                }
                (None, Some(labels)) => Roles::from_labels(g, labels)?,
                (None, None) => {
                    return Err(CliError::Usage(
                        "the game file has no roles; pass --roles COOPERATE,DEFECT".into(),
                    ))
                }
            };
            let delta: Option<Rational> = delta.as_deref().map(parse_rational).transpose()?;
            let analysis = perspective_thresholds(&doc.game, &roles)?;
            report::repeated_report(&doc.game, &analysis, delta.as_ref(), style)?
        }
        Command::Scenario { name, emit_file, check } => {
            if name == "list" {
                let mut s = scenarios::NAMES.join("\n");
                s.push('\n');
                emit(cli, &s)?;
                return Ok(0);
            }
            let scenario = scenarios::by_name(name)?;
            if *check {
                let r = report::scenario_report(&scenario, style);
                emit(cli, &r.render(format))?;
                return Ok(if scenario.is_verified() { 0 } else { EXIT_INPUT });
            }
            let text = serialize_game(&scenario.game, scenario.roles.as_deref());
            if *emit_file {
                let path = cli.out.clone().unwrap_or_else(|| PathBuf::from(format!("{name}.json")));
                fs::write(&path, &text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
                eprintln!("wrote {}", path.display());
            } else {
                emit(cli, &text)?;
            }
            return Ok(0);
        }
    };
    emit(cli, &report.render(format))?;
    Ok(0)
}

fn differentials(
    cg: &CoarseGame,
    realized: &str,
    expectations: &[String],
    base_expectation: Option<&str>,
    mixed: bool,
    style: Style,
) -> Result<Report, CliError> {
    let g = cg.base();
    let kind = if mixed { SolutionKind::Mixed } else { SolutionKind::Pure };
    let mut selections = vec![Selection::Auto; g.num_players()];
    for entry in expectations.iter().flat_map(|e| e.split(';')).filter(|e| !e.trim().is_empty()) {
        let (player, profile) = entry
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected PLAYER=PROFILE, got {entry:?}")))?;
        let k = player_index(cg, player.trim())?;
        selections[k] = match parse_profile(g, profile.trim()).map_err(CliError::Usage)? {
            ProfileArg::Index(i) => Selection::Index(i),
            ProfileArg::Profile(p) => Selection::Profile(p),
        };
    }
    let resolved = (0..g.num_players())
        .map(|k| select_equilibrium(cg, Perspective::Perceived(k), &selections[k], kind))
        .collect::<Result<Vec<_>, _>>()?;
    let mut outcome = RealizedOutcome::from_expectations(resolved);
    if realized != "auto" {
        let profile = match parse_profile(g, realized).map_err(CliError::Usage)? {
            ProfileArg::Profile(p) => p,
            ProfileArg::Index(_) => {
                return Err(CliError::Usage("--realized takes a profile or `auto`, not an index".into()))
            }
        };
        for k in 0..g.num_players() {
            if profile.player(k) != outcome.profile.player(k) {
                outcome = outcome.with_override(k, profile.player(k).to_vec())?;
            }
        }
    }
    let base = match base_expectation {
        None => Selection::Auto,
        Some(text) => match parse_profile(g, text).map_err(CliError::Usage)? {
            ProfileArg::Index(i) => Selection::Index(i),
            ProfileArg::Profile(p) => Selection::Profile(p),
        },
    };
    let d = differential_report(cg, outcome, &base, kind)?;
    Ok(report::differentials_report(cg, &d, style))
}
