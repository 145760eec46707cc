//! `trustctl`: validate, score, rank and compare trust advertisements,
//! generate synthetic corpora and run the catalog service.
//!
//! Machine output is JSON on stdout. Diagnostics go to stderr.
//!
//! | exit | meaning |
//! |------|---------|
//! | 0 | success, document valid |
//! | 1 | shape errors, bad weight or prevalence file, nothing to rank |
//! | 2 | parse error in a document |
//! | 3 | I/O failure |

use std::fs;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;
use usdl_trust_catalog::ServiceConfig;
use usdl_trust_core::corpus::{generate_document, CorpusParams};
use usdl_trust_core::engine::{
    aggregate_trust, compare, default_weight_profile, rank_order, TrustScoreReport, WeightProfile,
};
use usdl_trust_core::shapes::{validate_graph, ValidationReport};
use usdl_trust_core::stad::{content_id, extract_profile, parse_document, ParseError, TrustGraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_IO: i32 = 3;

const CORPUS_HELP: &str = "\
Each signal is included independently with its prevalence. Counts within an
included signal are uniform over:
  customer-info   1-5 references (logos and names drawn per document)
  certifications  1-3
  personnel       1-4 employees
  publications    1-3
  systems         1-3, attached to the first facility
  facilities      1-2, each with 0-3 KPIs
  partners        1-3
  terms           1-2 documents
Default prevalences: customer-info 0.76, certifications 0.90, personnel 0.85,
publications 0.70, systems 0.33, customer-logos 0.50, customer-names 0.50,
facilities 1.0, legal-data 0.80, partners 0.40, terms 0.60.
Document i is drawn from ChaCha8 seeded with SEED on stream i.";

#[derive(Debug, Parser)]
#[command(name = "trustctl", version, about = "Trust advertisement toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a document against the shapes.
    Validate { file: PathBuf },
    /// Score a document offline (no marketplace analytics).
    Score {
        file: PathBuf,
        /// Weight profile JSON file.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Score every .stad file in a directory and rank them.
    Rank {
        dir: PathBuf,
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Per-category score differences A - B.
    Diff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Write a deterministic synthetic corpus.
    #[command(name = "gen-corpus", after_help = CORPUS_HELP)]
    GenCorpus {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// JSON object of prevalence overrides, e.g. {"systems": 0.5}.
        #[arg(long)]
        prevalence: Option<PathBuf>,
    },
    /// Run the catalog HTTP service.
    Serve {
        #[arg(long, env = "TRUSTCTL_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "TRUSTCTL_HOST", default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long, env = "TRUSTCTL_STORE")]
        store: PathBuf,
        /// Directory of NAME.json weight profiles.
        #[arg(long, env = "TRUSTCTL_PROFILES")]
        profiles: Option<PathBuf>,
    },
}

/// Command failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

type CmdResult<T> = Result<T, Failure>;

/// Ranking rows and the files that were skipped, with reasons.
pub type Ranking = (Vec<serde_json::Value>, Vec<(PathBuf, String)>);

fn read(path: &Path) -> CmdResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn parse(path: &Path, text: &str) -> CmdResult<TrustGraph> {
    parse_document(text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

pub fn load_weights(path: Option<&Path>) -> CmdResult<WeightProfile> {
    let Some(path) = path else {
        return Ok(default_weight_profile());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))?;
    WeightProfile::from_json(&text)
        .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))
}

/// Parses, validates and scores one document.
pub fn score_file(path: &Path, weights: &WeightProfile) -> CmdResult<(String, TrustScoreReport)> {
    let text = read(path)?;
    let graph = parse(path, &text)?;
    let report = validate_graph(&graph);
    if !report.valid {
        let codes: Vec<String> = report.errors.iter().map(|f| format!("{:?}", f.code)).collect();
        return Err(Failure::new(
            EXIT_INVALID,
            format!("{}: shape errors {}", path.display(), codes.join(", ")),
        ));
    }
    let profile = extract_profile(&graph)
        .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))?;
    Ok((content_id(&graph), aggregate_trust(&profile, weights, None, &[])))
}

pub enum ValidateOutcome {
    Report(ValidationReport),
    Parse(ParseError),
}

pub fn validate_file(path: &Path) -> CmdResult<ValidateOutcome> {
    let text = read(path)?;
    Ok(match parse_document(&text) {
        Ok(graph) => ValidateOutcome::Report(validate_graph(&graph)),
        Err(e) => ValidateOutcome::Parse(e),
    })
}

fn json_line(out: &mut dyn Write, text: &str) -> CmdResult<()> {
    writeln!(out, "{text}").map_err(|e| Failure::new(EXIT_IO, format!("stdout: {e}")))
}

/// Ranks the `.stad` files of `dir`.
pub fn rank_dir(dir: &Path, weights: &WeightProfile) -> CmdResult<Ranking> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "stad"))
        .collect();
    files.sort();
    let mut scored = Vec::new();
    let mut skipped = Vec::new();
    for file in files {
        match score_file(&file, weights) {
            Ok((id, report)) => scored.push((id, file, report)),
            Err(f) => skipped.push((file, f.message)),
        }
    }
    // input in id order, so equal reports come out by id
    scored.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let reports: Vec<TrustScoreReport> = scored.iter().map(|s| s.2.clone()).collect();
    let rows = rank_order(&reports)
        .into_iter()
        .map(|i| {
            let (id, file, report) = &scored[i];
            let value = serde_json::to_value(report).expect("report serializes");
            json!({
                "id": id,
                "provider_id": report.provider_id,
                "aggregate": value["aggregate"],
                "file": file.display().to_string(),
            })
        })
        .collect();
    Ok((rows, skipped))
}

/// Writes the corpus and returns the file names.
pub fn write_corpus(params: &CorpusParams, out: &Path) -> CmdResult<Vec<String>> {
    let io = |e: std::io::Error| Failure::new(EXIT_IO, format!("{}: {e}", out.display()));
    fs::create_dir_all(out).map_err(io)?;
    let mut names = Vec::with_capacity(params.n);
    for index in 0..params.n {
        let name = format!("provider-{index:05}.stad");
        fs::write(out.join(&name), generate_document(params, index)).map_err(io)?;
        names.push(name);
    }
    Ok(names)
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult<i32> {
    match command {
        Command::Validate { file } => match validate_file(&file)? {
            ValidateOutcome::Report(report) => {
                let text = serde_json::to_string(&report).expect("report serializes");
                json_line(out, &text)?;
                Ok(if report.valid { EXIT_OK } else { EXIT_INVALID })
            }
            ValidateOutcome::Parse(e) => {
                let text = serde_json::to_string(&json!({ "parse_error": e })).expect("serializes");
                json_line(out, &text)?;
                Ok(EXIT_PARSE)
            }
        },
        Command::Score { file, profile } => {
            let weights = load_weights(profile.as_deref())?;
            let (_, report) = score_file(&file, &weights)?;
            json_line(out, &report.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Rank { dir, profile } => {
            let weights = load_weights(profile.as_deref())?;
            let (rows, skipped) = rank_dir(&dir, &weights)?;
            for (file, reason) in &skipped {
                let _ = writeln!(err, "skipped {}: {reason}", file.display());
            }
            if rows.is_empty() {
                return Err(Failure::new(
                    EXIT_INVALID,
                    format!("no valid .stad files in {}", dir.display()),
                ));
            }
            let body = json!({ "profile": weights.name(), "ranking": rows });
            json_line(out, &body.to_string())?;
            Ok(EXIT_OK)
        }
        Command::Diff { a, b, profile } => {
            let weights = load_weights(profile.as_deref())?;
            let (_, ra) = score_file(&a, &weights)?;
            let (_, rb) = score_file(&b, &weights)?;
            let delta = compare(&ra, &rb).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
            json_line(out, &serde_json::to_string(&delta).expect("delta serializes"))?;
            Ok(EXIT_OK)
        }
        Command::GenCorpus {
            n,
            seed,
            out: dir,
            prevalence,
        } => {
            let mut params = CorpusParams::new(n, seed);
            if let Some(path) = prevalence {
                let text = fs::read_to_string(&path)
                    .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))?;
                params
                    .apply_overrides(&text)
                    .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))?;
            }
            let files = write_corpus(&params, &dir)?;
            let body = json!({
                "n": files.len(),
                "seed": seed,
                "out": dir.display().to_string(),
                "prevalence": params.prevalence,
            });
            json_line(out, &body.to_string())?;
            Ok(EXIT_OK)
        }
        Command::Serve {
            port,
            host,
            store,
            profiles,
        } => {
            let config = ServiceConfig {
                addr: SocketAddr::new(host, port),
                store_dir: store,
                profiles_dir: profiles,
            };
            let runtime = tokio::runtime::Runtime::new()
                .map_err(|e| Failure::new(EXIT_IO, format!("runtime: {e}")))?;
            runtime
                .block_on(usdl_trust_catalog::serve(config, async {
                    let _ = tokio::signal::ctrl_c().await;
                }))
                .map_err(|e| Failure::new(EXIT_IO, format!("serve: {e}")))?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "trustctl: {}", failure.message);
            failure.code
        }
    }
}
