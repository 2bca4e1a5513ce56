//! The mail command grammar: a message body whose lines of the form
//! `lookup 1 1 3 11 45` each trigger a lookup. Other lines are ignored.

use seqdb_core::{Query, Term};

use crate::config::Config;
use crate::parse_terms;
use crate::render::render_lookup;
use crate::snapshot::Snapshot;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MailCommand {
    /// 1-based line number in the body.
    pub line: usize,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MailParse {
    pub commands: Vec<MailCommand>,
    pub errors: Vec<LineError>,
    /// Well-formed commands past the per-message limit.
    pub ignored: usize,
}

pub fn parse_mail_command(body: &str, max_commands: usize) -> MailParse {
    let mut out = MailParse::default();
    for (i, raw) in body.lines().enumerate() {
        let line = raw.trim();
        let (verb, rest) = line.split_at(line.find(char::is_whitespace).unwrap_or(line.len()));
        if !verb.eq_ignore_ascii_case("lookup") {
            continue;
        }
        match parse_terms(rest) {
            Ok(terms) if out.commands.len() < max_commands => {
                out.commands.push(MailCommand { line: i + 1, terms })
            }
            Ok(_) => out.ignored += 1,
            Err(e) => out.errors.push(LineError { line: i + 1, message: e.to_string() }),
        }
    }
    out
}

/// The reply text for a message body. Commands are answered in order,
/// followed by the per-line errors.
pub fn answer_mail(snap: &Snapshot, body: &str, cfg: &Config) -> String {
    let parsed = parse_mail_command(body, cfg.mail_max_commands);
    let mut out = String::new();
    if parsed.commands.is_empty() && parsed.errors.is_empty() {
        out.push_str("No lookup commands found. Send a line such as: lookup 1 1 3 11 45\n");
    }
    for c in &parsed.commands {
        let q = Query::new(c.terms.clone());
        out.push_str(&format!("line {}: lookup\n", c.line));
        match snap.lookup(&q, cfg.result_limit) {
            Ok(ms) => out.push_str(&render_lookup(snap, &c.terms, &ms, false)),
            Err(e) => out.push_str(&format!("error: {e}\n")),
        }
        out.push('\n');
    }
    for e in &parsed.errors {
        out.push_str(&format!("line {}: error: {}\n", e.line, e.message));
    }
    if parsed.ignored > 0 {
        out.push_str(&format!(
            "{} further lookup commands ignored (limit {} per message)\n",
            parsed.ignored, cfg.mail_max_commands
        ));
    }
    out
}
