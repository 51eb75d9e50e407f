use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wflc::cli::{
    cmd_derive, cmd_expr, cmd_extract, cmd_gencode, cmd_genspec, cmd_tag, cmd_tptp, cmd_verify,
};
use wflc::codegen::Lang;
use wflc::config::ProjectConfig;
use wflc::fol::FolMode;
use wflc::llm::{EndpointConfig, LlmMode};
use wflc::scenario::PromptStage;

/// Workflow pattern expressions compiled to temporal-logic specifications,
/// checked against requirements, exported for first-order provers, and
/// turned into code skeletons.
#[derive(Parser)]
#[command(name = "wflc", version, about)]
struct Cli {
    /// Project configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tag a natural-language scenario through the configured LLM.
    Tag {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        stage: Stage,
        #[arg(short, long)]
        out: PathBuf,
        /// Replay a canned response file instead of calling an endpoint.
        #[arg(long)]
        offline: Option<PathBuf>,
    },
    /// Extract the vocabulary and draft structure from a tagged scenario.
    Extract {
        tagged: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        draft: PathBuf,
        /// Hole-filling edits ('path = activity' lines).
        #[arg(long)]
        edits: Option<PathBuf>,
        /// Where to write the completed expression (requires --edits).
        #[arg(long)]
        expr: Option<PathBuf>,
    },
    /// Flatten a diagram document into a pattern expression.
    Expr {
        diagram: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Generate the logical specification for an expression.
    Genspec {
        expr: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Append the guard-decoration axiom pack.
        #[arg(long)]
        decoration_axioms: bool,
    },
    /// Check a specification against requirements at a bounded depth.
    ///
    /// Exit codes: 0 all requirements satisfied, 1 counterexample found,
    /// 2 specification inconsistent, 3 operational error.
    Verify {
        spec: PathBuf,
        requirements: PathBuf,
        /// Maximum trace length searched.
        #[arg(short = 'k', long)]
        bound: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the machine-readable verdict document here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Export TPTP problems (one per requirement) for external provers.
    Tptp {
        spec: PathBuf,
        requirements: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Simple)]
        mode: Mode,
    },
    /// Generate a program skeleton from an expression.
    Gencode {
        expr: PathBuf,
        #[arg(long, value_enum)]
        lang: CodeLang,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Print the grammar production-rule sequence of an expression.
    Derive(DeriveArgs),
}

#[derive(Args)]
struct DeriveArgs {
    expr: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    Activities,
    Structures,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Simple,
    Ordered,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeLang {
    Java,
    Python,
}

fn load_config(path: &Option<PathBuf>) -> Result<ProjectConfig, String> {
    match path {
        Some(p) => ProjectConfig::load(p).map_err(|e| e.to_string()),
        None => {
            let default = PathBuf::from("wflc.toml");
            if default.exists() {
                ProjectConfig::load(&default).map_err(|e| e.to_string())
            } else {
                Ok(ProjectConfig::default())
            }
        }
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    let config = load_config(&cli.config)?;
    match cli.command {
        Command::Tag { scenario, stage, out, offline } => {
            let stage = match stage {
                Stage::Activities => PromptStage::Activities,
                Stage::Structures => PromptStage::Structures,
            };
            let mode = match offline {
                Some(path) => LlmMode::Offline(path),
                None => {
                    let endpoint = config
                        .endpoint()
                        .map(Ok)
                        .unwrap_or_else(|| EndpointConfig::from_env().map_err(|e| e.to_string()))?;
                    LlmMode::Endpoint(endpoint)
                }
            };
            cmd_tag(&scenario, stage, &out, &mode, config.paths.session_log.as_deref())
                .map_err(|e| e.to_string())?;
            println!("wrote {}", out.display());
            Ok(0)
        }
        Command::Extract { tagged, vocab, draft, edits, expr } => {
            let result = cmd_extract(&tagged, &vocab, &draft, edits.as_deref(), expr.as_deref())
                .map_err(|e| e.to_string())?;
            println!("wrote {} and {}", vocab.display(), draft.display());
            for d in &result.diagnostics {
                println!("diagnostic {}: {}", d.path, d.message);
            }
            if let Some(expr_path) = expr {
                println!("wrote {}", expr_path.display());
            }
            Ok(0)
        }
        Command::Expr { diagram, out } => {
            cmd_expr(&diagram, &out).map_err(|e| e.to_string())?;
            println!("wrote {}", out.display());
            Ok(0)
        }
        Command::Genspec { expr, out, decoration_axioms } => {
            let with_axioms = decoration_axioms || config.checker.decoration_axioms;
            let spec = cmd_genspec(&expr, &out, with_axioms).map_err(|e| e.to_string())?;
            println!("wrote {} ({} formulas)", out.display(), spec.formulas.len());
            Ok(0)
        }
        Command::Verify { spec, requirements, bound, budget, samples, seed, json } => {
            let mut config = config;
            if let Some(k) = bound {
                config.checker.bound = k;
            }
            if let Some(b) = budget {
                config.checker.state_budget = b;
            }
            if let Some(s) = samples {
                config.checker.samples = s;
            }
            if let Some(s) = seed {
                config.checker.seed = s;
            }
            let report = cmd_verify(&spec, &requirements, &config).map_err(|e| e.to_string())?;
            print!("{}", report.human);
            if let Some(json_path) = json {
                std::fs::write(&json_path, format!("{:#}\n", report.machine))
                    .map_err(|e| format!("{}: {e}", json_path.display()))?;
            }
            Ok(report.status.exit_code())
        }
        Command::Tptp { spec, requirements, out_dir, mode } => {
            let mode = match mode {
                Mode::Simple => FolMode::Simple,
                Mode::Ordered => FolMode::Ordered,
            };
            let files =
                cmd_tptp(&spec, &requirements, &out_dir, mode).map_err(|e| e.to_string())?;
            for f in files {
                println!("wrote {}", f.display());
            }
            Ok(0)
        }
        Command::Gencode { expr, lang, out_dir } => {
            let lang = match lang {
                CodeLang::Java => Lang::Java,
                CodeLang::Python => Lang::Python,
            };
            let path = cmd_gencode(&expr, lang, &out_dir).map_err(|e| e.to_string())?;
            println!("wrote {}", path.display());
            Ok(0)
        }
        Command::Derive(args) => {
            let sequence = cmd_derive(&args.expr).map_err(|e| e.to_string())?;
            println!("{sequence}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let is_verify = matches!(cli.command, Command::Verify { .. });
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(message) => {
            eprintln!("error: {message}");
            // verify reserves 0/1/2 for verdicts; operational failures exit 3.
            ExitCode::from(if is_verify { 3 } else { 1 })
        }
    }
}
