//! Argument definitions and dispatch for the `seqdb` binary.

use std::fs;
use std::io::{self, Read, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{ArgGroup, Parser, Subcommand};
use thiserror::Error;

use seqdb_core::catalog::{load_catalog, validate_entry, ANumberError, Catalog};
use seqdb_core::exec::Mode;
use seqdb_core::generators::{generator, GenError};
use seqdb_core::index::{search_keyword, search_text, QueryError};
use seqdb_core::seeker::{identify, SeekError};
use seqdb_core::{ANumber, Query, TermList};

use crate::config::{parse_config, Config, ConfigError};
use crate::http::{serve, AppState};
use crate::mail::answer_mail;
use crate::rate::{monotonic_clock, RateLimiterState};
use crate::render::{join_terms, render_lookup_with, render_search, render_seek};
use crate::snapshot::{load_snapshot, SharedSnapshot, Snapshot, SnapshotError};
use crate::{parse_terms, TermsError};

pub const CATALOG_ENV: &str = "SEQDB_CATALOG";
pub const CONFIG_ENV: &str = "SEQDB_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "seqdb", version, about = "Look up and identify integer sequences")]
pub struct Cli {
    /// Tab-separated output for scripts.
    #[arg(long, global = true)]
    pub porcelain: bool,
    /// Catalog file; the built-in seed catalog when absent.
    #[arg(long, global = true, env = CATALOG_ENV)]
    pub catalog: Option<PathBuf>,
    /// key = value settings for the seeker and service.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    /// Run every stage on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ranked catalog entries containing the terms.
    Lookup {
        #[arg(required = true, allow_negative_numbers = true)]
        terms: Vec<String>,
        #[arg(long)]
        sign_insensitive: bool,
        /// Accept matches covering at least this many query terms.
        #[arg(long)]
        min_overlap: Option<usize>,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Staged identification: direct, fuzzy, transforms, models.
    Seek {
        #[arg(required = true, allow_negative_numbers = true)]
        terms: Vec<String>,
    },
    /// Entries mentioning a name or carrying a keyword.
    #[command(group(ArgGroup::new("needle").required(true).args(["text", "keyword"])))]
    Search {
        #[arg(long)]
        text: Option<String>,
        #[arg(long)]
        keyword: Option<String>,
    },
    /// Terms from a registered generator.
    Gen {
        anumber: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Also run the generator's independent cross-check.
        #[arg(long)]
        check: bool,
    },
    /// Load and validate entry files, then write the merged catalog.
    Ingest {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// HTTP service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Seconds between admitted seeks per client.
        #[arg(long)]
        rate_window: Option<u64>,
    },
    /// Answer the lookup lines of a message body read from stdin.
    Mail,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Terms(#[from] TermsError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Seek(#[from] SeekError),
    #[error(transparent)]
    Catalog(#[from] SnapshotError),
    #[error("{path}: {source}")]
    Config { path: PathBuf, source: ConfigError },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    ANumber(#[from] ANumberError),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Terms(_) => "bad_terms",
            CliError::Query(_) | CliError::Seek(_) => "bad_query",
            CliError::Catalog(_) => "catalog",
            CliError::Config { .. } => "config",
            CliError::Gen(_) => "gen",
            CliError::ANumber(_) => "bad_anumber",
            CliError::File { .. } | CliError::Io(_) => "io",
        }
    }

    /// The single line written to stderr on failure.
    pub fn error_line(&self) -> String {
        let msg = self.to_string().replace(['\t', '\n'], " ");
        format!("error\t{}\t{msg}", self.code())
    }
}

fn load_config(path: Option<&Path>) -> Result<Config, CliError> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = fs::read_to_string(path).map_err(|source| CliError::File { path: path.into(), source })?;
    parse_config(&text).map_err(|source| CliError::Config { path: path.into(), source })
}

fn open_snapshot(cli: &Cli, mode: Mode, err: &mut dyn Write) -> Result<Snapshot, CliError> {
    let (snap, rejected) = load_snapshot(cli.catalog.as_deref(), mode)?;
    for r in rejected {
        let msg = r.error.to_string().replace(['\t', '\n'], " ");
        writeln!(err, "warning\tcatalog\t{}\t{msg}", r.first_line)?;
    }
    Ok(snap)
}

/// Runs one command. `input` feeds `mail`; warnings go to `err`.
pub fn run(cli: &Cli, input: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let mode = if cli.sequential { Mode::Sequential } else { Mode::default() };
    let cfg = load_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Lookup { terms, sign_insensitive, min_overlap, limit } => {
            let terms = parse_terms(&terms.join(" "))?;
            let mut q = Query::new(terms.clone());
            if *sign_insensitive {
                q = q.sign_insensitive();
            }
            if let Some(m) = min_overlap {
                q = q.with_min_overlap(*m);
            }
            let snap = open_snapshot(cli, mode, err)?;
            let ms = snap.lookup(&q, limit.unwrap_or(cfg.result_limit))?;
            out.write_all(render_lookup_with(&snap, &terms, &ms, cli.porcelain, cfg.reference_limit).as_bytes())?;
        }
        Command::Seek { terms } => {
            let terms = parse_terms(&terms.join(" "))?;
            let snap = open_snapshot(cli, mode, err)?;
            let report = identify(&snap.index, &TermList::new(1, terms.clone()), &cfg.seeker_config(mode))?;
            out.write_all(render_seek(&snap, &terms, &report, cli.porcelain).as_bytes())?;
        }
        Command::Search { text, keyword } => {
            let snap = open_snapshot(cli, mode, err)?;
            let ids = match (text, keyword) {
                (Some(t), _) => search_text(&snap.catalog, t)?,
                (None, Some(k)) => search_keyword(&snap.catalog, k)?,
                (None, None) => unreachable!("clap requires one of --text, --keyword"),
            };
            out.write_all(render_search(&snap, &ids, cli.porcelain).as_bytes())?;
        }
        Command::Gen { anumber, count, check } => {
            let id: ANumber = anumber.parse()?;
            let g = generator(id).ok_or(GenError::NoGenerator(id))?;
            let terms = if *check { g.check(*count)? } else { g.generate(*count)? };
            if cli.porcelain {
                writeln!(out, "terms\t{id}\t{}\t{}", terms.offset, join_terms(&terms.terms))?;
                if *check {
                    writeln!(out, "check\t{id}\tpassed")?;
                }
            } else {
                let last = terms.offset + terms.len() as i64 - 1;
                writeln!(out, "{id} a({})..a({last}):", terms.offset)?;
                writeln!(out, "{}", join_terms(&terms.terms))?;
                if *check {
                    writeln!(out, "cross-check passed for {} terms", terms.len())?;
                }
            }
        }
        Command::Ingest { files, out: target } => ingest(files, target.as_deref(), cli.porcelain, out)?,
        Command::Serve { addr, rate_window } => {
            let snap = open_snapshot(cli, mode, err)?;
            let window = rate_window.map_or(cfg.rate_window, Duration::from_secs);
            writeln!(err, "serving {} entries on http://{addr}", snap.catalog.len())?;
            let state = Arc::new(AppState {
                snapshot: SharedSnapshot::new(snap),
                limiter: RateLimiterState::new(window),
                clock: monotonic_clock(),
                config: cfg,
                catalog_path: cli.catalog.clone(),
                mode,
            });
            tokio::runtime::Runtime::new()?.block_on(serve(*addr, state))?;
        }
        Command::Mail => {
            let mut body = String::new();
            input.read_to_string(&mut body)?;
            let snap = open_snapshot(cli, mode, err)?;
            out.write_all(answer_mail(&snap, &body, &cfg).as_bytes())?;
        }
    }
    Ok(())
}

fn ingest(files: &[PathBuf], target: Option<&Path>, porcelain: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let mut merged = Catalog::new();
    let mut rejected = 0;
    let mut issues = 0;
    for path in files {
        let file = fs::File::open(path).map_err(|source| CliError::File { path: path.clone(), source })?;
        let report = load_catalog(io::BufReader::new(file)).map_err(|source| CliError::File { path: path.clone(), source })?;
        for r in &report.errors {
            rejected += 1;
            let msg = r.error.to_string().replace(['\t', '\n'], " ");
            if porcelain {
                writeln!(out, "rejected\t{}\t{}\t{msg}", path.display(), r.first_line)?;
            } else {
                writeln!(out, "{}:{}: rejected: {msg}", path.display(), r.first_line)?;
            }
        }
        for id in &report.truncated {
            issues += 1;
            if porcelain {
                writeln!(out, "truncated\t{id}")?;
            } else {
                writeln!(out, "{id}: terms truncated at load")?;
            }
        }
        for e in report.catalog.iter() {
            if let Err(x) = merged.insert(e.clone()) {
                rejected += 1;
                if porcelain {
                    writeln!(out, "rejected\t{}\t-\t{x}", path.display())?;
                } else {
                    writeln!(out, "{}: rejected: {x}", path.display())?;
                }
            }
        }
    }
    for e in merged.iter() {
        for issue in validate_entry(e, Some(&merged)) {
            issues += 1;
            if porcelain {
                writeln!(out, "issue\t{}\t{issue}", e.id)?;
            } else {
                writeln!(out, "{}: {issue}", e.id)?;
            }
        }
    }
    if let Some(t) = target {
        fs::write(t, merged.to_text()).map_err(|source| CliError::File { path: t.into(), source })?;
    }
    if porcelain {
        writeln!(out, "summary\t{}\t{rejected}\t{issues}\t{}", merged.len(), merged.digest())?;
    } else {
        writeln!(
            out,
            "{} entries loaded, {rejected} records rejected, {issues} issues; digest {}",
            merged.len(),
            merged.digest()
        )?;
        if let Some(t) = target {
            writeln!(out, "catalog written to {}", t.display())?;
        }
    }
    Ok(())
}
